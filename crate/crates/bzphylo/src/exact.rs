//! Exact integer and rational linear algebra for lattice and cone
//! membership.
//!
//! Both routines work over small dense vectors and are tuned for clarity:
//! the inputs in this crate have dimension below fifty and entries bounded
//! by the labelling degree, so `i128` arithmetic never overflows.

use num_rational::Ratio;
use num_traits::{One, Zero};

/// An integer echelon basis of the lattice spanned by a set of generators.
///
/// Basis vectors are kept in row-echelon form: `basis[i]` has its first
/// nonzero entry (positive) at `pivots[i]`, and pivot columns strictly
/// increase with `i`. Membership of a target vector reduces greedily
/// against this basis.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Lattice {
    /// Builds the lattice spanned by `generators`, all of dimension `dim`.
    pub fn new(dim: usize, generators: &[Vec<i128>]) -> Self {
        let mut lat = Lattice { dim, basis: Vec::new(), pivots: Vec::new() };
        for g in generators {
            assert_eq!(g.len(), dim, "generator dimension mismatch");
            lat.insert(g.clone());
        }
        lat
    }

    /// Inserts one vector, restoring echelon form.
    fn insert(&mut self, mut v: Vec<i128>) {
        let mut col = 0;
        while col < self.dim {
            if v[col] == 0 {
                col += 1;
                continue;
            }
            match self.pivots.iter().position(|&p| p == col) {
                None => {
                    if v[col] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    let at = self.pivots.iter().position(|&p| p > col).unwrap_or(self.pivots.len());
                    self.pivots.insert(at, col);
                    self.basis.insert(at, v);
                    return;
                }
                Some(i) => {
                    // Replace basis[i] by the gcd combination and continue
                    // reducing the complementary vector further right.
                    let (g, s, t) = ext_gcd(self.basis[i][col], v[col]);
                    let a = self.basis[i][col] / g;
                    let b = v[col] / g;
                    let old = self.basis[i].clone();
                    for k in 0..self.dim {
                        let combined = s * old[k] + t * v[k];
                        let residual = -b * old[k] + a * v[k];
                        self.basis[i][k] = combined;
                        v[k] = residual;
                    }
                    debug_assert_eq!(self.basis[i][col], g);
                    debug_assert_eq!(v[col], 0);
                }
            }
        }
    }

    /// Tests whether `target` lies in the lattice.
    pub fn contains(&self, target: &[i128]) -> bool {
        assert_eq!(target.len(), self.dim, "target dimension mismatch");
        let mut v = target.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            for col in 0..p {
                if v[col] != 0 {
                    return false;
                }
            }
            if v[p] % self.basis[i][p] != 0 {
                return false;
            }
            let q = v[p] / self.basis[i][p];
            if q != 0 {
                for k in p..self.dim {
                    v[k] -= q * self.basis[i][k];
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Number of linearly independent basis vectors.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Extended gcd: returns `(g, s, t)` with `g = gcd(a, b) > 0` and
/// `s*a + t*b = g`. Requires `a != 0 || b != 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

type Q = Ratio<i128>;

/// Decides whether `target` is a nonnegative rational combination of
/// `rays`: exists `c >= 0` with `sum_i c_i * rays[i] = target`.
///
/// Uses a phase-one simplex with Bland's rule on exact rationals, so the
/// answer is exact and the iteration terminates.
pub fn cone_contains(rays: &[Vec<i128>], target: &[i128]) -> bool {
    let dim = target.len();
    for r in rays {
        assert_eq!(r.len(), dim, "ray dimension mismatch");
    }
    let n = rays.len();
    // Tableau columns: n ray variables, dim artificial variables, then the
    // right hand side. Rows are scaled so every right hand side is >= 0.
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(dim);
    for row in 0..dim {
        let mut r: Vec<Q> = Vec::with_capacity(n + dim + 1);
        let flip = target[row] < 0;
        for ray in rays {
            let v = Q::from_integer(if flip { -ray[row] } else { ray[row] });
            r.push(v);
        }
        for j in 0..dim {
            r.push(if j == row { Q::one() } else { Q::zero() });
        }
        r.push(Q::from_integer(target[row].abs()));
        a.push(r);
    }
    // Basis starts as the artificial columns; minimize their sum.
    let mut basis: Vec<usize> = (n..n + dim).collect();
    // Reduced cost row for objective sum of artificials: cost_j =
    // -(sum of rows at column j) for non-artificial columns.
    let total_cols = n + dim + 1;
    let mut cost: Vec<Q> = vec![Q::zero(); total_cols];
    for j in 0..total_cols {
        let mut s = Q::zero();
        for row in a.iter() {
            s += row[j];
        }
        cost[j] = -s;
    }
    for j in n..n + dim {
        cost[j] = Q::zero();
    }

    loop {
        // Bland: entering column = lowest index with negative reduced cost.
        let entering = (0..n + dim).find(|&j| cost[j] < Q::zero());
        let Some(e) = entering else { break };
        // Ratio test, ties broken by lowest row index.
        let mut leave: Option<usize> = None;
        let mut best = Q::zero();
        for (i, row) in a.iter().enumerate() {
            if row[e] > Q::zero() {
                let ratio = row[total_cols - 1] / row[e];
                if leave.is_none() || ratio < best || (ratio == best && basis[i] < basis[leave.unwrap()]) {
                    leave = Some(i);
                    best = ratio;
                }
            }
        }
        let Some(l) = leave else {
            // Unbounded descent cannot happen for a sum of artificials
            // bounded below by zero; treat defensively as infeasible.
            return false;
        };
        // Pivot on (l, e).
        let piv = a[l][e];
        for x in a[l].iter_mut() {
            *x /= piv;
        }
        for i in 0..dim {
            if i != l && a[i][e] != Q::zero() {
                let f = a[i][e];
                for j in 0..total_cols {
                    let d = f * a[l][j];
                    a[i][j] -= d;
                }
            }
        }
        if cost[e] != Q::zero() {
            let f = cost[e];
            for j in 0..total_cols {
                let d = f * a[l][j];
                cost[j] -= d;
            }
        }
        basis[l] = e;
    }

    // The cost row's right hand side carries the negated objective value;
    // the target is in the cone iff the artificials were driven to zero.
    cost[total_cols - 1].is_zero()
}

//! Fiber enumeration over a weight triple and the bounded search for
//! minimal generators.
//!
//! A fiber is cut out by linear conditions: each boundary weight
//! coordinate is an ordered sum of two point values, and each hexagon
//! balances its opposite edge pairs. Enumeration assigns boundary splits
//! first (corners are shared between sides and force each other), then
//! propagates hexagon equations inward, branching only when no equation
//! has a single unknown. Every interior value is bounded by the total
//! boundary size, so the search is finite.

use super::{build_grid, BzTriangle, Side, TriangleGrid};
use crate::weights::DominantWeight;
use crate::{Error, Result};
use std::collections::BTreeSet;

/// Default node budget for fiber searches.
pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

pub fn enumerate_fiber(
    m: u32,
    lam: &DominantWeight,
    mu: &DominantWeight,
    nu: &DominantWeight,
) -> Result<Vec<BzTriangle>> {
    enumerate_fiber_bounded(m, lam, mu, nu, DEFAULT_MAX_NODES)
}

pub fn enumerate_fiber_bounded(
    m: u32,
    lam: &DominantWeight,
    mu: &DominantWeight,
    nu: &DominantWeight,
    max_nodes: u64,
) -> Result<Vec<BzTriangle>> {
    let grid = build_grid(m)?;
    for w in [lam, mu, nu] {
        if w.m != m {
            return Err(Error::ModulusMismatch(m, w.m));
        }
    }
    let mut search = FiberSearch {
        grid: &grid,
        budget: max_nodes,
        max_nodes,
        cap: ([lam, mu, nu].iter().flat_map(|w| w.coords()).map(|&c| c as u64).sum::<u64>()),
        out: Vec::new(),
    };
    // Boundary constraints: (first point, second point, required sum).
    let mut pairs: Vec<(usize, usize, u64)> = Vec::new();
    for (side, w) in [(Side::NW, lam), (Side::NE, mu), (Side::S, nu)] {
        for (k, &(p, q)) in grid.side_pairs(side).iter().enumerate() {
            pairs.push((p, q, w.coords()[k] as u64));
        }
    }
    let mut values: Vec<Option<u64>> = vec![None; grid.g_points().len()];
    search.assign_boundary(&pairs, 0, &mut values)?;
    let mut out = search.out;
    out.sort();
    debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
    Ok(out)
}

struct FiberSearch<'a> {
    grid: &'a TriangleGrid,
    budget: u64,
    max_nodes: u64,
    /// Upper bound for any single value: the total boundary size.
    cap: u64,
    out: Vec<BzTriangle>,
}

impl FiberSearch<'_> {
    fn spend(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::ResourceBound { limit: self.max_nodes });
        }
        self.budget -= 1;
        Ok(())
    }

    fn assign_boundary(
        &mut self,
        pairs: &[(usize, usize, u64)],
        k: usize,
        values: &mut Vec<Option<u64>>,
    ) -> Result<()> {
        if k == pairs.len() {
            return self.propagate(values);
        }
        let (p, q, total) = pairs[k];
        match (values[p], values[q]) {
            (Some(a), Some(b)) => {
                if a + b == total {
                    self.assign_boundary(pairs, k + 1, values)?;
                }
            }
            (Some(a), None) => {
                if a <= total {
                    values[q] = Some(total - a);
                    self.assign_boundary(pairs, k + 1, values)?;
                    values[q] = None;
                }
            }
            (None, Some(b)) => {
                if b <= total {
                    values[p] = Some(total - b);
                    self.assign_boundary(pairs, k + 1, values)?;
                    values[p] = None;
                }
            }
            (None, None) => {
                for a in 0..=total {
                    self.spend()?;
                    values[p] = Some(a);
                    values[q] = Some(total - a);
                    self.assign_boundary(pairs, k + 1, values)?;
                }
                values[p] = None;
                values[q] = None;
            }
        }
        Ok(())
    }

    /// Repeatedly solves hexagon equations with a single unknown; on a
    /// stuck state, branches the first unknown value up to the cap.
    fn propagate(&mut self, values: &mut Vec<Option<u64>>) -> Result<()> {
        let eqs = self.grid.hexagon_equations();
        let mut solved: Vec<(usize, u64)> = Vec::new();
        loop {
            let mut progress = false;
            let mut consistent = true;
            for eq in &eqs {
                let vals: Vec<Option<u64>> = eq.iter().map(|&i| values[i]).collect();
                let unknowns: Vec<usize> = (0..4).filter(|&i| vals[i].is_none()).collect();
                match unknowns.len() {
                    0 => {
                        if vals[0].unwrap() + vals[1].unwrap() != vals[2].unwrap() + vals[3].unwrap() {
                            consistent = false;
                            break;
                        }
                    }
                    1 => {
                        let u = unknowns[0];
                        let (same, other) = if u < 2 { (1 - u, (2, 3)) } else { (5 - u, (0, 1)) };
                        let rhs = vals[other.0].unwrap() + vals[other.1].unwrap();
                        let partner = vals[same].unwrap();
                        if partner > rhs {
                            consistent = false;
                            break;
                        }
                        let v = rhs - partner;
                        values[eq[u]] = Some(v);
                        solved.push((eq[u], v));
                        progress = true;
                    }
                    _ => {}
                }
            }
            if !consistent {
                break;
            }
            if !progress {
                if let Some(first) = values.iter().position(Option::is_none) {
                    for v in 0..=self.cap {
                        self.spend()?;
                        values[first] = Some(v);
                        self.propagate(values)?;
                    }
                    values[first] = None;
                } else {
                    self.emit(values)?;
                }
                break;
            }
        }
        for (i, _) in solved {
            values[i] = None;
        }
        Ok(())
    }

    fn emit(&mut self, values: &[Option<u64>]) -> Result<()> {
        let dense: Vec<u64> = values.iter().map(|v| v.expect("complete")).collect();
        let t = BzTriangle::with_grid(self.grid, dense)?;
        self.out.push(t);
        Ok(())
    }
}

/// All nonzero elements with total boundary size up to the bound that are
/// not sums of two nonzero elements. Complete only up to that bound: the
/// known generating sets for m = 2 (three elements, bound 2) and m = 3
/// (eight elements, bound 3) are recovered exactly.
pub fn minimal_generators(m: u32, boundary_bound: u32) -> Result<Vec<BzTriangle>> {
    let grid = build_grid(m)?;
    let mut found: BTreeSet<BzTriangle> = BTreeSet::new();
    // All weight triples with coordinate total at most the bound.
    let triples = weight_triples(m, boundary_bound)?;
    for (lam, mu, nu) in &triples {
        for t in enumerate_fiber(m, lam, mu, nu)? {
            if !t.is_zero() && is_indecomposable(&grid, &t) {
                found.insert(t);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// All dominant weight triples for SL_m with total coordinate sum at most
/// the bound.
pub(crate) fn weight_triples(
    m: u32,
    bound: u32,
) -> Result<Vec<(DominantWeight, DominantWeight, DominantWeight)>> {
    let singles = weights_up_to(m, bound)?;
    let mut out = Vec::new();
    for l in &singles {
        let ls: u32 = l.coords().iter().sum();
        for mu in &singles {
            let ms: u32 = mu.coords().iter().sum();
            if ls + ms > bound {
                continue;
            }
            for nu in &singles {
                let ns: u32 = nu.coords().iter().sum();
                if ls + ms + ns <= bound {
                    out.push((l.clone(), mu.clone(), nu.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// All dominant weights for SL_m with coordinate sum at most the bound.
pub(crate) fn weights_up_to(m: u32, bound: u32) -> Result<Vec<DominantWeight>> {
    let width = (m - 1) as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u32; width];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, m: u32, out: &mut Vec<DominantWeight>) {
        if i == cur.len() {
            out.push(DominantWeight::new(m, cur.clone()).expect("valid width"));
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, m, out);
        }
        cur[i] = 0;
    }
    rec(0, bound, &mut cur, m, &mut out);
    Ok(out)
}

/// True when the only splittings x = s + (x - s) use s = 0 or s = x.
/// Balance conditions are linear, so both parts stay in the semigroup
/// exactly when s does.
fn is_indecomposable(grid: &TriangleGrid, x: &BzTriangle) -> bool {
    let vals = x.values();
    let n = vals.len();
    let mut sub = vec![0u64; n];
    // DFS over pointwise-dominated vectors, checking balance at the end.
    fn rec(grid: &TriangleGrid, vals: &[u64], sub: &mut Vec<u64>, i: usize, found: &mut bool) {
        if *found {
            return;
        }
        if i == sub.len() {
            let zero = sub.iter().all(|&v| v == 0);
            let full = sub.iter().zip(vals).all(|(a, b)| a == b);
            if zero || full {
                return;
            }
            if grid
                .hexagon_equations()
                .iter()
                .all(|eq| sub[eq[0]] + sub[eq[1]] == sub[eq[2]] + sub[eq[3]])
            {
                *found = true;
            }
            return;
        }
        for v in 0..=vals[i] {
            sub[i] = v;
            rec(grid, vals, sub, i + 1, found);
            if *found {
                return;
            }
        }
        sub[i] = 0;
    }
    let mut found = false;
    rec(grid, vals, &mut sub, 0, &mut found);
    !found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::lr_coefficient;

    fn w(m: u32, coords: &[u32]) -> DominantWeight {
        DominantWeight::new(m, coords.to_vec()).unwrap()
    }

    #[test]
    fn zero_triple_gives_zero_triangle() {
        for m in 2u32..=4 {
            let z = DominantWeight::zero(m).unwrap();
            let fiber = enumerate_fiber(m, &z, &z, &z).unwrap();
            assert_eq!(fiber.len(), 1);
            assert!(fiber[0].is_zero());
        }
    }

    #[test]
    fn sl3_unit_triple_fiber() {
        let f = DominantWeight::fundamental(3, 1).unwrap();
        let fiber = enumerate_fiber(3, &f, &f, &f).unwrap();
        assert_eq!(fiber.len(), 1);
    }

    #[test]
    fn sl3_adjoint_triple_fiber() {
        let a = w(3, &[1, 1]);
        let fiber = enumerate_fiber(3, &a, &a, &a).unwrap();
        assert_eq!(fiber.len(), 2);
    }

    #[test]
    fn fiber_counts_match_lr_sl3() {
        // Exhaustive small sweep: the BZ count is the invariant dimension.
        let weights = weights_up_to(3, 2).unwrap();
        for l in &weights {
            for mu in &weights {
                for nu in &weights {
                    let fiber = enumerate_fiber(3, l, mu, nu).unwrap();
                    let lr = lr_coefficient(l, mu, nu).unwrap();
                    assert_eq!(fiber.len() as u64, lr, "({l:?}, {mu:?}, {nu:?})");
                    for t in &fiber {
                        let (pl, pm, pn) = t.pr().unwrap();
                        assert_eq!((&pl, &pm, &pn), (l, mu, nu));
                    }
                }
            }
        }
    }

    #[test]
    fn fiber_counts_match_lr_sl4_sample() {
        let f1 = DominantWeight::fundamental(4, 1).unwrap();
        let f2 = DominantWeight::fundamental(4, 2).unwrap();
        let f3 = DominantWeight::fundamental(4, 3).unwrap();
        let z = DominantWeight::zero(4).unwrap();
        for (l, mu, nu) in [
            (&f1, &f1, &f2),
            (&f1, &f3, &z),
            (&f2, &f2, &z),
            (&f1, &f1, &f1),
            (&f2, &f1, &f1),
        ] {
            let fiber = enumerate_fiber(4, l, mu, nu).unwrap();
            let lr = lr_coefficient(l, mu, nu).unwrap();
            assert_eq!(fiber.len() as u64, lr, "({l:?}, {mu:?}, {nu:?})");
        }
    }

    #[test]
    fn fiber_duality() {
        let weights = weights_up_to(3, 2).unwrap();
        for l in &weights {
            for mu in &weights {
                for nu in &weights {
                    let a = enumerate_fiber(3, l, mu, nu).unwrap().len();
                    let b = enumerate_fiber(3, &l.dual(), &mu.dual(), &nu.dual()).unwrap().len();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn resource_bound_reported() {
        let a = w(3, &[2, 2]);
        let err = enumerate_fiber_bounded(3, &a, &a, &a, 3).unwrap_err();
        match err {
            Error::ResourceBound { limit } => assert_eq!(limit, 3),
            other => panic!("expected resource bound, got {other:?}"),
        }
    }

    #[test]
    fn m2_minimal_generators() {
        let gens = minimal_generators(2, 2).unwrap();
        assert_eq!(gens.len(), 3);
        let prs: BTreeSet<(u32, u32, u32)> = gens
            .iter()
            .map(|t| {
                let (l, mu, nu) = t.pr().unwrap();
                (l.coords()[0], mu.coords()[0], nu.coords()[0])
            })
            .collect();
        let want: BTreeSet<(u32, u32, u32)> = [(1, 0, 1), (1, 1, 0), (0, 1, 1)].into_iter().collect();
        assert_eq!(prs, want);
        // A tight bound yields a subset.
        let small = minimal_generators(2, 1).unwrap();
        assert!(small.iter().all(|t| gens.contains(t)));
    }

    #[test]
    fn m3_minimal_generators() {
        let gens = minimal_generators(3, 3).unwrap();
        assert_eq!(gens.len(), 8);
        let mut prs: Vec<(Vec<u32>, Vec<u32>, Vec<u32>)> = gens
            .iter()
            .map(|t| {
                let (l, mu, nu) = t.pr().unwrap();
                (l.coords().to_vec(), mu.coords().to_vec(), nu.coords().to_vec())
            })
            .collect();
        prs.sort();
        let mut want = vec![
            (vec![1, 0], vec![1, 0], vec![1, 0]),
            (vec![0, 1], vec![0, 1], vec![0, 1]),
            (vec![1, 0], vec![0, 1], vec![0, 0]),
            (vec![0, 1], vec![1, 0], vec![0, 0]),
            (vec![1, 0], vec![0, 0], vec![0, 1]),
            (vec![0, 1], vec![0, 0], vec![1, 0]),
            (vec![0, 0], vec![1, 0], vec![0, 1]),
            (vec![0, 0], vec![0, 1], vec![1, 0]),
        ];
        want.sort();
        assert_eq!(prs, want);
    }

    #[test]
    fn generation_at_small_boundary() {
        // Every fiber element with boundary size <= 3 is a sum of
        // minimal generators, for m = 2 and 3.
        for m in 2u32..=3 {
            let gens = minimal_generators(m, 3).unwrap();
            for (l, mu, nu) in weight_triples(m, 3).unwrap() {
                for t in enumerate_fiber(m, &l, &mu, &nu).unwrap() {
                    assert!(
                        decomposes_over(&t, &gens),
                        "m = {m}, triangle {t:?} not generated"
                    );
                }
            }
        }
    }

    fn decomposes_over(t: &BzTriangle, gens: &[BzTriangle]) -> bool {
        if t.is_zero() {
            return true;
        }
        for g in gens {
            if g.values().iter().zip(t.values()).all(|(a, b)| a <= b) {
                let rest = BzTriangle::new(
                    t.m,
                    t.values().iter().zip(g.values()).map(|(a, b)| a - b).collect(),
                );
                if let Ok(rest) = rest {
                    if decomposes_over(&rest, gens) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

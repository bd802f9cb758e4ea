//! SL_m weight arithmetic, duality, the class map to Z/mZ, a
//! Littlewood-Richardson oracle, and level-1 conformal block dimensions.
//!
//! Weights are stored in fundamental-weight coordinates; partition form
//! is derived on demand. The class map sends ω_i to i and identifies the
//! weight lattice modulo the root lattice with Z/mZ.

use crate::cyclic::Residue;
use crate::graphs::{betti, covering_forest, Graph};
use crate::{check_modulus, Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// A dominant weight of SL_m in the basis of fundamental weights
/// ω_1..ω_{m-1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DominantWeight {
    pub m: u32,
    coords: Vec<u32>,
}

impl DominantWeight {
    pub fn new(m: u32, coords: Vec<u32>) -> Result<DominantWeight> {
        check_modulus(m)?;
        if coords.len() != (m - 1) as usize {
            return Err(Error::Validation(format!(
                "weight for SL_{m} needs {} coordinates, got {}",
                m - 1,
                coords.len()
            )));
        }
        Ok(DominantWeight { m, coords })
    }

    pub fn zero(m: u32) -> Result<DominantWeight> {
        check_modulus(m)?;
        Ok(DominantWeight { m, coords: vec![0; (m - 1) as usize] })
    }

    /// The fundamental weight ω_i, for 1 ≤ i ≤ m - 1.
    pub fn fundamental(m: u32, i: u32) -> Result<DominantWeight> {
        check_modulus(m)?;
        if i == 0 || i >= m {
            return Err(Error::Validation(format!(
                "fundamental weight index {i} outside 1..={}",
                m - 1
            )));
        }
        let mut coords = vec![0; (m - 1) as usize];
        coords[(i - 1) as usize] = 1;
        Ok(DominantWeight { m, coords })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The class in Z/mZ: Σ i·w_i mod m.
    pub fn class_of(&self) -> WeightClass {
        let mut s: u64 = 0;
        for (i, &c) in self.coords.iter().enumerate() {
            s += (i as u64 + 1) * c as u64;
        }
        let residue = Residue::new((s % self.m as u64) as u32, self.m).expect("reduced residue");
        WeightClass { residue }
    }

    /// The dual weight: coordinates reversed, ω_i ↔ ω_{m-i}.
    pub fn dual(&self) -> DominantWeight {
        let mut coords = self.coords.clone();
        coords.reverse();
        DominantWeight { m: self.m, coords }
    }

    /// The partition (λ_1 ≥ … ≥ λ_m = 0) with λ_j = Σ_{i ≥ j} w_i.
    pub fn to_partition(&self) -> Vec<u32> {
        let mut parts = vec![0u32; self.m as usize];
        let mut acc = 0;
        for j in (0..self.coords.len()).rev() {
            acc += self.coords[j];
            parts[j] = acc;
        }
        parts
    }

    /// The size |λ| of the partition form.
    pub fn partition_size(&self) -> u32 {
        self.to_partition().iter().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({ "m": self.m, "coords": self.coords })
    }

    pub fn from_json(v: &Value) -> Result<DominantWeight> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("weight must be an object".into()))?;
        let m = obj
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("weight needs a numeric \"m\"".into()))? as u32;
        let coords = obj
            .get("coords")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("weight needs a \"coords\" array".into()))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|n| n as u32)
                    .ok_or_else(|| Error::Json("weight coordinates must be nonneg integers".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        DominantWeight::new(m, coords)
    }
}

/// The image of a weight in Z/mZ = weights / roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightClass {
    pub residue: Residue,
}

/// A vertex of the level-1 alcove: the zero weight (index 0) or ω_index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LevelOneWeight {
    pub index: u32,
}

impl LevelOneWeight {
    pub fn new(m: u32, index: u32) -> Result<LevelOneWeight> {
        check_modulus(m)?;
        if index >= m {
            return Err(Error::Validation(format!(
                "level-1 weight index {index} outside 0..={}",
                m - 1
            )));
        }
        Ok(LevelOneWeight { index })
    }

    /// The corresponding dominant weight.
    pub fn weight(&self, m: u32) -> Result<DominantWeight> {
        if self.index == 0 {
            DominantWeight::zero(m)
        } else {
            DominantWeight::fundamental(m, self.index)
        }
    }
}

/// Dimension of the SL_m-invariant subspace of V_λ ⊗ V_μ ⊗ V_ν, by
/// Littlewood-Richardson skew-tableau enumeration: the multiplicity of
/// dual(ν) in λ ⊗ μ.
pub fn lr_coefficient(lam: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> Result<u64> {
    if lam.m != mu.m {
        return Err(Error::ModulusMismatch(lam.m, mu.m));
    }
    if lam.m != nu.m {
        return Err(Error::ModulusMismatch(lam.m, nu.m));
    }
    let m = lam.m as usize;
    let lp = lam.to_partition();
    let mp = mu.to_partition();
    let target = nu.dual().to_partition();
    let lam_size: u32 = lp.iter().sum();
    let mu_size: u32 = mp.iter().sum();
    let tgt_size: u32 = target.iter().sum();
    // As SL_m representations, V_κ = V_{target} iff κ = target + k·(1^m);
    // the sizes fix k.
    let diff = lam_size as i64 + mu_size as i64 - tgt_size as i64;
    if diff < 0 || diff % m as i64 != 0 {
        return Ok(0);
    }
    let k = (diff / m as i64) as u32;
    let outer: Vec<u32> = target.iter().map(|&p| p + k).collect();
    if lp.iter().zip(&outer).any(|(&a, &b)| a > b) {
        return Ok(0);
    }
    Ok(lr_skew_count(&outer, &lp, &mp))
}

/// Counts Littlewood-Richardson skew tableaux of shape `outer`/`inner`
/// with the given content: semistandard fillings whose reverse reading
/// word is a lattice word. Cells are filled in reading order (rows top to
/// bottom, right to left within a row), which makes every constraint
/// local to already-placed cells.
fn lr_skew_count(outer: &[u32], inner: &[u32], content: &[u32]) -> u64 {
    let rows = outer.len();
    let mut cells: Vec<(usize, u32)> = Vec::new();
    for r in 0..rows {
        let lo = inner.get(r).copied().unwrap_or(0);
        debug_assert!(lo <= outer[r]);
        for c in (lo..outer[r]).rev() {
            cells.push((r, c));
        }
    }
    let cell_total: u32 = cells.len() as u32;
    let content_total: u32 = content.iter().sum();
    if cell_total != content_total {
        return 0;
    }
    let mut grid: Vec<Vec<u32>> = (0..rows)
        .map(|r| vec![0; outer[r] as usize])
        .collect();
    let mut counts = vec![0u32; content.len()];
    fn rec(
        cells: &[(usize, u32)],
        pos: usize,
        inner: &[u32],
        grid: &mut Vec<Vec<u32>>,
        counts: &mut Vec<u32>,
        content: &[u32],
    ) -> u64 {
        if pos == cells.len() {
            return 1;
        }
        let (r, c) = cells[pos];
        // Row condition: weakly increasing left to right; the right-hand
        // neighbour is already placed.
        let hi = if (c + 1) < grid[r].len() as u32 && grid[r][(c + 1) as usize] != 0 {
            grid[r][(c + 1) as usize]
        } else {
            content.len() as u32
        };
        // Column condition: strictly below the cell above, when that cell
        // is part of the skew shape.
        let lo = if r > 0 && c >= inner.get(r - 1).copied().unwrap_or(0) && c < grid[r - 1].len() as u32 {
            grid[r - 1][c as usize] + 1
        } else {
            1
        };
        let mut total = 0;
        for v in lo..=hi {
            let vi = (v - 1) as usize;
            if counts[vi] + 1 > content[vi] {
                continue;
            }
            // Lattice condition on the reading word: after placing v, the
            // count of v must not exceed the count of v - 1.
            if v >= 2 && counts[vi] + 1 > counts[vi - 1] {
                continue;
            }
            counts[vi] += 1;
            grid[r][c as usize] = v;
            total += rec(cells, pos + 1, inner, grid, counts, content);
            grid[r][c as usize] = 0;
            counts[vi] -= 1;
        }
        total
    }
    rec(&cells, 0, inner, &mut grid, &mut counts, content)
}

/// Indicator that V_{ω_i} ⊗ V_{ω_j} ⊗ V_{ω_k} (index 0 meaning the
/// trivial representation) has an SL_m-invariant vector: exactly when
/// i + j + k vanishes mod m, and then the invariant is unique.
pub fn fundamental_triple_invariant(i: u32, j: u32, k: u32, m: u32) -> Result<u32> {
    check_modulus(m)?;
    for idx in [i, j, k] {
        if idx >= m {
            return Err(Error::Validation(format!(
                "level-1 index {idx} outside 0..={}",
                m - 1
            )));
        }
    }
    Ok(u32::from((i + j + k) % m == 0))
}

/// Dimension of the level-1 conformal block attached to a connected graph
/// with level-1 weights at its leaves: m^betti when the indices sum to
/// zero mod m, zero otherwise.
///
/// The closed form is verified on every call against an independent
/// count: labellings of the covering forest by residues, one per internal
/// edge, with dual matching on paired halves and zero-sum stars.
pub fn level_one_block_dim(
    g: &Graph,
    leaf_weights: &BTreeMap<String, LevelOneWeight>,
    m: u32,
) -> Result<u64> {
    check_modulus(m)?;
    if !g.is_connected() {
        return Err(Error::Validation("block dimension requires a connected graph".into()));
    }
    for e in g.leaf_edges() {
        if !leaf_weights.contains_key(e) {
            return Err(Error::Validation(format!("leaf edge {e:?} has no weight assigned")));
        }
    }
    for (e, w) in leaf_weights {
        if !g.leaf_edges().contains(e) {
            return Err(Error::Validation(format!("edge {e:?} is not a leaf edge")));
        }
        if w.index >= m {
            return Err(Error::Validation(format!(
                "level-1 weight index {} outside 0..={}",
                w.index,
                m - 1
            )));
        }
    }
    let index_sum: u64 = leaf_weights.values().map(|w| w.index as u64).sum();
    let closed: u64 = if index_sum % m as u64 == 0 {
        (m as u64).pow(betti(g) as u32)
    } else {
        0
    };
    let counted = count_forest_labellings(g, leaf_weights, m)?;
    if counted != closed {
        return Err(Error::Inconsistent(format!(
            "block dimension mismatch: closed form {closed}, forest count {counted}"
        )));
    }
    Ok(closed)
}

/// Labellings of the covering forest: each internal edge gets a residue
/// on its slot-0 half (the slot-1 half carries the negation); every star
/// center must see residues summing to zero mod m, leaf edges carrying
/// their assigned index.
fn count_forest_labellings(
    g: &Graph,
    leaf_weights: &BTreeMap<String, LevelOneWeight>,
    m: u32,
) -> Result<u64> {
    let forest = covering_forest(g)?;
    let internal: Vec<String> = g
        .edges()
        .iter()
        .filter(|e| !g.leaf_edges().contains(&e.id))
        .map(|e| e.id.clone())
        .collect();
    let centers: Vec<&String> = forest
        .forest
        .vertices()
        .iter()
        .filter(|v| forest.forest.degree(v) >= 2)
        .collect();
    let mut assignment = vec![0u32; internal.len()];
    let index: BTreeMap<&str, usize> = internal
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_str(), i))
        .collect();
    let mut count = 0u64;
    loop {
        let ok = centers.iter().all(|v| {
            let mut s = 0u32;
            for (edge_idx, _slot) in forest.forest.incident_half_edges(v) {
                let fe = &forest.forest.edges()[edge_idx];
                let val = if let Some(&i) = index.get(forest.origin[&fe.id].as_str()) {
                    // A half of internal edge i: slot-0 half carries the
                    // value, slot-1 half its negation.
                    if fe.id.ends_with("#0") {
                        assignment[i]
                    } else {
                        (m - assignment[i]) % m
                    }
                } else {
                    leaf_weights[&fe.id].index
                };
                s = (s + val) % m;
            }
            s == 0
        });
        if ok {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return Ok(count);
            }
            assignment[k] += 1;
            if assignment[k] < m {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// JSON form of a leaf-weight assignment: `{"leafEdge": index, ...}`.
pub fn leaf_weights_from_json(v: &Value, m: u32) -> Result<BTreeMap<String, LevelOneWeight>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Json("leaf weights must be an object".into()))?;
    let mut out = BTreeMap::new();
    for (e, idx) in obj {
        let i = idx
            .as_u64()
            .ok_or_else(|| Error::Json(format!("weight index for {e:?} must be an integer")))?;
        out.insert(e.clone(), LevelOneWeight::new(m, i as u32)?);
    }
    Ok(out)
}

pub fn leaf_weights_to_json(w: &BTreeMap<String, LevelOneWeight>) -> Value {
    let mut obj = Map::new();
    for (e, lw) in w {
        obj.insert(e.clone(), json!(lw.index));
    }
    Value::Object(obj)
}

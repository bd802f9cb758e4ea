//! The graded semigroup of SL3 triangles.
//!
//! Degree-l elements are sums of l generators, with the zero triangle
//! admitted as a summand. Decomposition searches multisets of the eight
//! nonzero minimal generators using at most l slots.

use super::fiber::minimal_generators;
use super::BzTriangle;
use crate::{Error, Result};

/// The eight minimal generators of the SL3 triangle semigroup, in
/// canonical order.
pub fn sl3_graded_generators() -> Result<Vec<BzTriangle>> {
    let gens = minimal_generators(3, 3)?;
    if gens.len() != 8 {
        return Err(Error::Inconsistent(format!(
            "expected 8 SL3 generators, found {}",
            gens.len()
        )));
    }
    Ok(gens)
}

/// Writes `x` as a sum of exactly `l` generators, zero triangles
/// allowed, or `None` if no such expression exists. A witness has
/// length `l`, padded with zero triangles.
pub fn decompose_graded_sl3(x: &BzTriangle, l: u32) -> Result<Option<Vec<BzTriangle>>> {
    if x.m != 3 {
        return Err(Error::ModulusMismatch(3, x.m));
    }
    let gens = sl3_graded_generators()?;
    let mut residual: Vec<u64> = x.values().to_vec();
    let mut chosen: Vec<usize> = Vec::new();
    if !search(&gens, &mut residual, 0, l, &mut chosen) {
        return Ok(None);
    }
    let mut witness: Vec<BzTriangle> = chosen.iter().map(|&i| gens[i].clone()).collect();
    while (witness.len() as u32) < l {
        witness.push(BzTriangle::zero(3)?);
    }
    Ok(Some(witness))
}

fn search(
    gens: &[BzTriangle],
    residual: &mut [u64],
    from: usize,
    slots: u32,
    chosen: &mut Vec<usize>,
) -> bool {
    if residual.iter().all(|&v| v == 0) {
        return true;
    }
    if slots == 0 {
        return false;
    }
    for i in from..gens.len() {
        let vals = gens[i].values();
        if vals.iter().zip(residual.iter()).any(|(g, r)| g > r) {
            continue;
        }
        for (r, g) in residual.iter_mut().zip(vals) {
            *r -= g;
        }
        chosen.push(i);
        if search(gens, residual, i, slots - 1, chosen) {
            return true;
        }
        chosen.pop();
        for (r, g) in residual.iter_mut().zip(vals) {
            *r += g;
        }
    }
    false
}

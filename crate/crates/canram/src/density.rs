//! Exact maximal k-density computation and the derived threshold scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::KGraph;

/// The maximum of (e(H[U]) - 1)/(|U| - k) with the subset attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityResult {
    pub value: BigRational,
    /// Sorted vertex subset achieving the maximum; ties broken by the
    /// lexicographically smallest subset.
    pub witness: Vec<usize>,
}

const MAX_VERTICES: usize = 26;

/// Maximal k-density of `h`: max over U with |U| > k of (e(H[U]) - 1)/(|U| - k).
/// For k = 2 this is the maximum 2-density.
pub fn max_k_density(h: &KGraph) -> Result<DensityResult> {
    let k = h.uniformity();
    let v = h.vertex_count();
    if h.edge_count() < 2 {
        return Err(Error::NotEnoughEdges {
            edges: h.edge_count(),
        });
    }
    if v < k + 1 {
        return Err(Error::TooFewVertices { vertices: v, k });
    }
    if v > MAX_VERTICES {
        return Err(Error::guard("density subset enumeration", 1u128 << v, 1u128 << MAX_VERTICES));
    }
    let edge_masks: Vec<u32> = h
        .edges()
        .map(|e| e.iter().fold(0u32, |m, &x| m | (1 << x)))
        .collect();

    let mut best: Option<DensityResult> = None;
    for mask in 0u32..(1u32 << v) {
        let size = mask.count_ones() as usize;
        if size <= k {
            continue;
        }
        let edges = edge_masks.iter().filter(|&&em| em & mask == em).count();
        let value = BigRational::new(
            BigInt::from(edges as i64 - 1),
            BigInt::from((size - k) as i64),
        );
        let witness = || (0..v).filter(|&x| mask >> x & 1 == 1).collect::<Vec<_>>();
        match &best {
            None => {
                best = Some(DensityResult {
                    value,
                    witness: witness(),
                })
            }
            Some(b) => {
                if value > b.value {
                    best = Some(DensityResult {
                        value,
                        witness: witness(),
                    });
                } else if value == b.value {
                    let w = witness();
                    if w < b.witness {
                        best = Some(DensityResult { value, witness: w });
                    }
                }
            }
        }
    }
    best.ok_or(Error::NoAdmissibleSubset)
}

/// The probability scale n^{-1/m_k(H)}.
#[derive(Debug, Clone)]
pub struct ThresholdScale {
    /// Exact exponent -1/m_k(H).
    pub exponent: BigRational,
    /// Floating evaluation of n^exponent.
    pub value: f64,
    pub density: DensityResult,
}

pub fn threshold_scale(h: &KGraph, n: usize) -> Result<ThresholdScale> {
    let density = max_k_density(h)?;
    let exponent = -density.value.recip();
    let exp_f = exponent
        .to_f64()
        .ok_or_else(|| Error::ParameterOutOfRange("exponent not representable".into()))?;
    Ok(ThresholdScale {
        exponent,
        value: (n as f64).powf(exp_f),
        density,
    })
}

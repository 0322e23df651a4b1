//! (ρ,d)-denseness predicates, clique counting and the deletion-resilience
//! formula for locally dense graphs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{binomial, Bitset, KGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

/// Outcome of the local-density check.  In sampled mode `dense = true` only
/// means no violation was found.
#[derive(Debug, Clone)]
pub struct LocalDenseReport {
    pub dense: bool,
    pub witness: Option<Vec<usize>>,
    pub subset_size: usize,
    pub subsets_checked: u64,
    pub exhaustive: bool,
}

const EXACT_SUBSET_GUARD: u128 = 10_000_000;

fn rational_in_unit(x: &BigRational, name: &str) -> Result<()> {
    if x <= &BigRational::zero() || x > &BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::ParameterOutOfRange(format!("{name} must be in (0, 1]")));
    }
    Ok(())
}

/// Does every vertex subset of size exactly ⌈ρn⌉ induce at least d·C(m,2)
/// edges?  Checking that cardinality alone suffices for the full property.
pub fn is_locally_dense(
    g: &KGraph,
    rho: &BigRational,
    d: &BigRational,
    mode: DenseMode,
) -> Result<LocalDenseReport> {
    if g.uniformity() != 2 {
        return Err(Error::UnsupportedUniformity {
            k: g.uniformity(),
            reason: "local density is defined for graphs".into(),
        });
    }
    rational_in_unit(rho, "rho")?;
    rational_in_unit(d, "d")?;
    let n = g.vertex_count();
    let m = (rho * BigRational::from_integer(BigInt::from(n)))
        .ceil()
        .to_integer()
        .try_into()
        .map_err(|_| Error::ParameterOutOfRange("rho * n out of range".into()))?;
    let m: usize = m;
    if m > n {
        return Err(Error::ParameterOutOfRange(format!(
            "ceil(rho * n) = {m} exceeds n = {n}"
        )));
    }
    let required = d * BigRational::from_integer(BigInt::from(binomial(m, 2)));

    let induced_edges = |subset: &[usize]| -> u64 {
        let mut mask = Bitset::new(n);
        for &v in subset {
            mask.set(v);
        }
        let mut count = 0u64;
        for &v in subset {
            let mut nb = g.adjacency(v).clone();
            nb.intersect_with(&mask);
            count += nb.count() as u64;
        }
        count / 2
    };

    let violates = |subset: &[usize]| -> bool {
        BigRational::from_integer(BigInt::from(induced_edges(subset))) < required
    };

    match mode {
        DenseMode::Exact => {
            let total = binomial(n, m);
            if total > EXACT_SUBSET_GUARD {
                return Err(Error::guard("local density subset scan", total, EXACT_SUBSET_GUARD));
            }
            let mut checked = 0u64;
            let mut cur: Vec<usize> = (0..m).collect();
            if m == 0 {
                return Ok(LocalDenseReport {
                    dense: true,
                    witness: None,
                    subset_size: 0,
                    subsets_checked: 1,
                    exhaustive: true,
                });
            }
            loop {
                checked += 1;
                if violates(&cur) {
                    return Ok(LocalDenseReport {
                        dense: false,
                        witness: Some(cur),
                        subset_size: m,
                        subsets_checked: checked,
                        exhaustive: true,
                    });
                }
                // next m-combination
                let mut i = m;
                let mut advanced = false;
                while i > 0 {
                    i -= 1;
                    if cur[i] < n - (m - i) {
                        cur[i] += 1;
                        for j in i + 1..m {
                            cur[j] = cur[j - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    return Ok(LocalDenseReport {
                        dense: true,
                        witness: None,
                        subset_size: m,
                        subsets_checked: checked,
                        exhaustive: true,
                    });
                }
            }
        }
        DenseMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pool: Vec<usize> = (0..n).collect();
            for t in 0..samples {
                pool.shuffle(&mut rng);
                let mut subset: Vec<usize> = pool[..m].to_vec();
                subset.sort_unstable();
                if violates(&subset) {
                    return Ok(LocalDenseReport {
                        dense: false,
                        witness: Some(subset),
                        subset_size: m,
                        subsets_checked: t as u64 + 1,
                        exhaustive: false,
                    });
                }
            }
            Ok(LocalDenseReport {
                dense: true,
                witness: None,
                subset_size: m,
                subsets_checked: samples as u64,
                exhaustive: false,
            })
        }
    }
}

/// Exact number of K_m subgraphs, by ordered vertex extension over
/// intersected neighbourhoods.
pub fn count_cliques(g: &KGraph, m: usize) -> Result<u64> {
    if g.uniformity() != 2 {
        return Err(Error::UnsupportedUniformity {
            k: g.uniformity(),
            reason: "clique counting is defined for graphs".into(),
        });
    }
    let n = g.vertex_count();
    if m == 0 {
        return Ok(1);
    }
    if m == 1 {
        return Ok(n as u64);
    }
    fn extend(g: &KGraph, cands: &Bitset, remaining: usize) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let mut count = 0;
        for v in cands.iter_ones() {
            if remaining == 1 {
                count += 1;
                continue;
            }
            let mut next = cands.clone();
            next.intersect_with(g.adjacency(v));
            // only extend upwards to count each clique once
            for u in 0..=v {
                if next.get(u) {
                    next.clear(u);
                }
            }
            count += extend(g, &next, remaining - 1);
        }
        count
    }
    let mut all = Bitset::new(n);
    for v in 0..n {
        all.set(v);
    }
    Ok(extend(g, &all, m))
}

/// d' = d - 2γ/ρ² and the corollary flag γ ≤ ρ²d/4 (which gives d' ≥ d/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResilienceResult {
    pub d_prime: BigRational,
    pub corollary_applies: bool,
    pub negative: bool,
}

pub fn resilience_bound(
    d: &BigRational,
    gamma: &BigRational,
    rho: &BigRational,
) -> Result<ResilienceResult> {
    rational_in_unit(d, "d")?;
    rational_in_unit(rho, "rho")?;
    if gamma < &BigRational::zero() {
        return Err(Error::ParameterOutOfRange("gamma must be >= 0".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let d_prime = d - &two * gamma / (rho * rho);
    let corollary_applies = gamma <= &(rho * rho * d / &four);
    let negative = d_prime.is_negative();
    Ok(ResilienceResult {
        d_prime,
        corollary_applies,
        negative,
    })
}

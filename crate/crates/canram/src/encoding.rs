//! The canonical copy hypergraph over E(Γ) × [r]: construction, graph
//! shadows, the colouring-to-vertex-set map, degree profiles and abundance
//! checking.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::density::max_k_density;
use crate::error::{Error, Guards, Result};
use crate::graph::{grouped_copies, Colouring, KGraph, ListAssignment, VertexOrdering};
use crate::patterns::{copy_is_canonical, CanonMode};

pub use crate::patterns::count_canonical_copies;

/// A vertex of the encoding hypergraph: (edge index in Γ, slot in 1..=r).
pub type EncVertex = (usize, usize);

/// The e(H)-uniform hypergraph whose hyperedges are the list-realisable
/// canonical copies of H in Γ.
#[derive(Debug, Clone)]
pub struct EncodingHypergraph {
    base: KGraph,
    lists: ListAssignment,
    arity: usize,
    /// Each hyperedge sorted; hyperedges sorted lexicographically.
    hyperedges: Vec<Vec<EncVertex>>,
}

impl EncodingHypergraph {
    pub fn base(&self) -> &KGraph {
        &self.base
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    pub fn r(&self) -> usize {
        self.lists.r()
    }

    pub fn uniformity(&self) -> usize {
        self.arity
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.r() * self.base.edge_count()
    }

    pub fn edge_count(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = &[EncVertex]> {
        self.hyperedges.iter().map(|h| h.as_slice())
    }

    pub fn contains_vertex(&self, v: EncVertex) -> bool {
        v.0 < self.base.edge_count() && v.1 >= 1 && v.1 <= self.lists.r()
    }

    /// Is `w` (a set of encoding vertices) independent?
    pub fn is_independent(&self, w: &[EncVertex]) -> bool {
        let set: std::collections::HashSet<EncVertex> = w.iter().copied().collect();
        !self
            .hyperedges
            .iter()
            .any(|he| he.iter().all(|v| set.contains(v)))
    }
}

/// Build 𝓗^σ_H(Γ, 𝓛): hyperedges are the slot-coloured copies of H that are
/// canonical w.r.t. σ.
pub fn build_encoding(
    h: &KGraph,
    sigma: &VertexOrdering,
    gamma: &KGraph,
    lists: &ListAssignment,
    guards: &Guards,
) -> Result<EncodingHypergraph> {
    build_encoding_mode(h, sigma, gamma, lists, CanonMode::AnyEmbedding, guards)
}

pub fn build_encoding_mode(
    h: &KGraph,
    sigma: &VertexOrdering,
    gamma: &KGraph,
    lists: &ListAssignment,
    mode: CanonMode,
    guards: &Guards,
) -> Result<EncodingHypergraph> {
    if h.uniformity() != gamma.uniformity() {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: gamma.uniformity(),
        });
    }
    lists.check_total(gamma)?;
    let r = lists.r();
    let arity = h.edge_count();
    let copies = grouped_copies(h, gamma)?;
    let assignments = (r as u128).pow(arity as u32);
    let work = copies.len() as u128 * assignments;
    if work > guards.copies as u128 {
        return Err(Error::guard("encoding hyperedge generation", work, guards.copies as u128));
    }

    let mut hyperedges: Vec<Vec<EncVertex>> = Vec::new();
    let mut slots = vec![1usize; arity];
    for copy in &copies {
        // classification depends only on the colour pattern up to relabelling
        let mut memo: HashMap<Vec<u32>, bool> = HashMap::new();
        slots.iter_mut().for_each(|s| *s = 1);
        loop {
            let colours: Vec<u64> = copy
                .edge_idxs
                .iter()
                .zip(&slots)
                .map(|(&e, &s)| lists.list(e)[s - 1])
                .collect();
            let key = normalize_pattern(&colours);
            let canonical = match memo.get(&key) {
                Some(&b) => b,
                None => {
                    let chi = colouring_on_edges(gamma, &copy.edge_idxs, &colours);
                    let b = copy_is_canonical(h, sigma, gamma, &chi, copy, mode)?;
                    memo.insert(key, b);
                    b
                }
            };
            if canonical {
                let mut he: Vec<EncVertex> = copy
                    .edge_idxs
                    .iter()
                    .zip(&slots)
                    .map(|(&e, &s)| (e, s))
                    .collect();
                he.sort_unstable();
                hyperedges.push(he);
            }
            if !next_slot_assignment(&mut slots, r) {
                break;
            }
        }
    }
    hyperedges.sort();
    hyperedges.dedup();
    Ok(EncodingHypergraph {
        base: gamma.clone(),
        lists: lists.clone(),
        arity,
        hyperedges,
    })
}

/// Advance an odometer over [1, r]^len; false once exhausted.
fn next_slot_assignment(slots: &mut [usize], r: usize) -> bool {
    for i in (0..slots.len()).rev() {
        if slots[i] < r {
            slots[i] += 1;
            slots[i + 1..].iter_mut().for_each(|s| *s = 1);
            return true;
        }
    }
    false
}

/// A total colouring of Γ that takes the given colours on `edge_idxs` and an
/// unused fresh colour elsewhere; only the copy's own edges matter to the
/// canonicity check.
fn colouring_on_edges(gamma: &KGraph, edge_idxs: &[usize], colours: &[u64]) -> Colouring {
    let fresh = colours.iter().copied().max().unwrap_or(0) + 1;
    let mut all = vec![fresh; gamma.edge_count()];
    for (&e, &c) in edge_idxs.iter().zip(colours) {
        all[e] = c;
    }
    Colouring::new(all)
}

/// Canonical form of a colour tuple under injective relabelling (restricted
/// growth string).
pub(crate) fn normalize_pattern(colours: &[u64]) -> Vec<u32> {
    let mut seen: HashMap<u64, u32> = HashMap::new();
    colours
        .iter()
        .map(|&c| {
            let next = seen.len() as u32;
            *seen.entry(c).or_insert(next)
        })
        .collect()
}

/// The subgraph of Γ whose edges appear as first coordinates of `w`.
pub fn graph_shadow(enc: &EncodingHypergraph, w: &[EncVertex]) -> Result<KGraph> {
    let mut idxs: Vec<usize> = Vec::new();
    for &v in w {
        if !enc.contains_vertex(v) {
            return Err(Error::ForeignEncodingVertex {
                edge: v.0,
                slot: v.1,
            });
        }
        idxs.push(v.0);
    }
    idxs.sort_unstable();
    idxs.dedup();
    enc.base.edge_subgraph(&idxs)
}

/// W(G, χ): all vertices (e, s) with e ∈ E(G) and χ(e) = 𝓛(e)[s].
pub fn colouring_to_vertexset(
    g: &KGraph,
    chi: &Colouring,
    lists: &ListAssignment,
    base: &KGraph,
) -> Result<Vec<EncVertex>> {
    chi.check_total(g)?;
    lists.check_total(base)?;
    let mut w = Vec::new();
    for (i, e) in g.edges().enumerate() {
        let idx = base
            .edge_index(e)
            .ok_or_else(|| Error::ForeignEdge { edge: e.to_vec() })?;
        let list = lists.list(idx);
        let colour = chi.of(i);
        let mut matched = false;
        for (s, &c) in list.iter().enumerate() {
            if c == colour {
                w.push((idx, s + 1));
                matched = true;
            }
        }
        if !matched {
            return Err(Error::IncompatibleColour {
                edge: e.to_vec(),
                colour,
                list: list.to_vec(),
            });
        }
    }
    w.sort_unstable();
    Ok(w)
}

/// Exact Δ_j values together with the reference degree bound
/// r^{e(H)} (n^{-1/m_k(H)})^{j-1} n^{v(H)-k}.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeProfile {
    pub entries: Vec<DegreeEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeEntry {
    pub j: usize,
    pub delta: u64,
    pub bound: f64,
    pub within_bound: bool,
}

pub fn degree_profile(
    enc: &EncodingHypergraph,
    h: &KGraph,
    guards: &Guards,
) -> Result<DegreeProfile> {
    let arity = enc.uniformity();
    let n = enc.base().vertex_count();
    let k = h.uniformity();
    let r = enc.r() as f64;
    let density = max_k_density(h)?;
    let m = density
        .value
        .to_f64()
        .ok_or_else(|| Error::ParameterOutOfRange("density not representable".into()))?;
    let q = (n as f64).powf(-1.0 / m);

    let mut entries = Vec::new();
    for j in 1..=arity {
        let per_edge = crate::graph::binomial(arity, j);
        let work = per_edge * enc.edge_count() as u128;
        if work > guards.nodes as u128 {
            return Err(Error::guard("degree profile subset scan", work, guards.nodes as u128));
        }
        let mut counts: HashMap<Vec<EncVertex>, u64> = HashMap::new();
        let mut delta = 0u64;
        for he in enc.hyperedges() {
            for sub in he.iter().copied().combinations(j) {
                let c = counts.entry(sub).or_insert(0);
                *c += 1;
                delta = delta.max(*c);
            }
        }
        let bound =
            r.powi(arity as i32) * q.powi(j as i32 - 1) * (n as f64).powi((h.vertex_count() - k) as i32);
        // Decide Δ_j ≤ r^{e(H)} n^{v(H)-k-(j-1)/m} exactly: with the exponent
        // written as num/den, this is Δ_j^den ≤ r^{e(H)·den} n^num (with the
        // negative part of `num` moved to the left-hand side).  Floating point
        // misjudges the borderline cases where the bound is exactly Δ_j.
        let within_bound = {
            let exponent = BigRational::from_integer(BigInt::from(
                (h.vertex_count() - k) as i64,
            )) - BigRational::from_integer(BigInt::from(j as i64 - 1)) / &density.value;
            let den = exponent
                .denom()
                .to_u32()
                .ok_or_else(|| Error::ParameterOutOfRange("degree bound exponent".into()))?;
            let num = exponent.numer();
            let big_n = BigInt::from(n);
            let mut lhs = BigInt::from(delta).pow(den);
            let mut rhs = BigInt::from(enc.r()).pow(arity as u32 * den);
            match num.to_i64() {
                Some(v) if v >= 0 => rhs *= big_n.pow(v as u32),
                Some(v) => lhs *= big_n.pow((-v) as u32),
                None => {
                    return Err(Error::ParameterOutOfRange("degree bound exponent".into()))
                }
            }
            lhs <= rhs
        };
        entries.push(DegreeEntry {
            j,
            delta,
            bound,
            within_bound,
        });
    }
    Ok(DegreeProfile { entries })
}

/// Check of the container-theorem degree hypothesis
/// Δ_j ≤ D₀ q^{j-1} e(𝓗)/v(𝓗) for user-supplied D₀ and q.
#[derive(Debug, Clone, Serialize)]
pub struct ContainerDegreeCheck {
    pub d0: f64,
    pub q: f64,
    pub entries: Vec<DegreeEntry>,
    pub all_within: bool,
}

pub fn check_container_degree_condition(
    enc: &EncodingHypergraph,
    h: &KGraph,
    d0: f64,
    q: f64,
    guards: &Guards,
) -> Result<ContainerDegreeCheck> {
    let profile = degree_profile(enc, h, guards)?;
    let ratio = enc.edge_count() as f64 / enc.vertex_count().max(1) as f64;
    let entries: Vec<DegreeEntry> = profile
        .entries
        .into_iter()
        .map(|e| {
            let bound = d0 * q.powi(e.j as i32 - 1) * ratio;
            DegreeEntry {
                j: e.j,
                delta: e.delta,
                bound,
                within_bound: (e.delta as f64) <= bound,
            }
        })
        .collect();
    let all_within = entries.iter().all(|e| e.within_bound);
    Ok(ContainerDegreeCheck {
        d0,
        q,
        entries,
        all_within,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AbundanceMode {
    Exhaustive,
    Sampled,
}

/// Result of checking conditions (1)-(3) of the abundance definition for
/// 𝓕 = {W : e(shadow(W)) ≥ (1-γ) e(Γ)}.
#[derive(Debug, Clone, Serialize)]
pub struct AbundanceReport {
    pub mode: AbundanceMode,
    /// Condition (1): shadow size is monotone in W, so 𝓕 is increasing by
    /// construction; reported structurally.
    pub increasing_structural: bool,
    /// Condition (2): |W| ≥ ε v(𝓗) for every tested W ∈ 𝓕.
    pub min_size_ok: bool,
    pub min_size_violation: Option<Vec<EncVertex>>,
    /// Condition (3): e(𝓗[W]) ≥ ε e(𝓗) for every tested W ∈ 𝓕.
    pub density_ok: bool,
    pub density_violation: Option<Vec<EncVertex>>,
    pub members_checked: u64,
    pub exhaustive: bool,
}

impl AbundanceReport {
    pub fn all_ok(&self) -> bool {
        self.min_size_ok && self.density_ok
    }
}

const ABUNDANCE_EXHAUSTIVE_MAX_VERTICES: usize = 20;

pub fn check_abundance(
    enc: &EncodingHypergraph,
    gamma_frac: f64,
    eps: f64,
    mode: AbundanceMode,
    seed: u64,
    samples: usize,
) -> Result<AbundanceReport> {
    if !(0.0..=1.0).contains(&gamma_frac) || eps <= 0.0 || eps > 1.0 {
        return Err(Error::ParameterOutOfRange(
            "need 0 <= gamma <= 1 and 0 < eps <= 1".into(),
        ));
    }
    let v = enc.vertex_count();
    let total_edges = enc.base().edge_count();
    let shadow_min = ((1.0 - gamma_frac) * total_edges as f64).ceil() as usize;
    let he_total = enc.edge_count();
    let size_min = eps * v as f64;
    let induced_min = eps * he_total as f64;

    let r = enc.r();
    let vertex_bit = |ev: EncVertex| ev.0 * r + (ev.1 - 1);
    let he_masks: Vec<u64> = if v <= 63 {
        enc.hyperedges()
            .map(|he| he.iter().fold(0u64, |m, &ev| m | (1 << vertex_bit(ev))))
            .collect()
    } else {
        Vec::new()
    };

    let eval = |w_mask: u64| -> (usize, usize, usize) {
        // (|W|, shadow edges, induced hyperedges)
        let size = w_mask.count_ones() as usize;
        let mut shadow = 0usize;
        for e in 0..total_edges {
            let group = (((1u64 << r) - 1) << (e * r)) & w_mask;
            if group != 0 {
                shadow += 1;
            }
        }
        let induced = he_masks
            .iter()
            .filter(|&&hm| hm & w_mask == hm)
            .count();
        (size, shadow, induced)
    };

    let to_vertices = |w_mask: u64| -> Vec<EncVertex> {
        (0..v)
            .filter(|&b| w_mask >> b & 1 == 1)
            .map(|b| (b / r, b % r + 1))
            .collect()
    };

    let mut report = AbundanceReport {
        mode,
        increasing_structural: true,
        min_size_ok: true,
        min_size_violation: None,
        density_ok: true,
        density_violation: None,
        members_checked: 0,
        exhaustive: mode == AbundanceMode::Exhaustive,
    };

    let consider = |w_mask: u64, report: &mut AbundanceReport| {
        let (size, shadow, induced) = eval(w_mask);
        if shadow < shadow_min {
            return;
        }
        report.members_checked += 1;
        if (size as f64) < size_min && report.min_size_ok {
            report.min_size_ok = false;
            report.min_size_violation = Some(to_vertices(w_mask));
        }
        if (induced as f64) < induced_min && report.density_ok {
            report.density_ok = false;
            report.density_violation = Some(to_vertices(w_mask));
        }
    };

    match mode {
        AbundanceMode::Exhaustive => {
            if v > ABUNDANCE_EXHAUSTIVE_MAX_VERTICES {
                return Err(Error::guard(
                    "abundance exhaustive enumeration",
                    1u128 << v.min(127),
                    1u128 << ABUNDANCE_EXHAUSTIVE_MAX_VERTICES,
                ));
            }
            for w_mask in 0u64..(1u64 << v) {
                consider(w_mask, &mut report);
            }
        }
        AbundanceMode::Sampled => {
            if v > 63 {
                return Err(Error::guard("abundance sampling bitmask", v as u128, 63));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // canonical extremal members: one fixed slot per edge
            for s in 1..=r {
                let mask = (0..total_edges).fold(0u64, |m, e| m | (1 << (e * r + s - 1)));
                consider(mask, &mut report);
            }
            // full vertex set
            consider((1u64 << v) - 1, &mut report);
            for _ in 0..samples {
                // random member: drop up to γ-fraction of edges, then random
                // nonempty slot subsets on the kept edges
                let drop_frac = gamma_frac * rng.random::<f64>();
                let mut mask = 0u64;
                for e in 0..total_edges {
                    if rng.random::<f64>() >= drop_frac {
                        let mut slots = 0u64;
                        while slots == 0 {
                            slots = rng.random_range(0..(1u64 << r));
                            if r == 1 {
                                slots = 1;
                            }
                        }
                        mask |= slots << (e * r);
                    }
                }
                consider(mask, &mut report);
            }
        }
    }
    Ok(report)
}

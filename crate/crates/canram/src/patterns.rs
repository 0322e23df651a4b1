//! Projection maps, classification of coloured copies against the canonical
//! colour patterns S ⊆ [k], and enumeration of canonical copies in a coloured
//! host.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{
    grouped_copies, Colouring, Embedding, KGraph, SubgraphCopy, VertexOrdering,
};

/// Classification is exponential in k; the intended regime is small fixed k.
pub const MAX_UNIFORMITY: usize = 8;

/// A subset S of the positions [k] = {1, ..., k}, stored as a bitmask with
/// bit i-1 for position i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionSet(pub u32);

impl PositionSet {
    pub const EMPTY: PositionSet = PositionSet(0);

    pub fn full(k: usize) -> Self {
        PositionSet(((1u64 << k) - 1) as u32)
    }

    /// Build from 1-based positions.
    pub fn from_positions(positions: &[usize], k: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &p in positions {
            if p < 1 || p > k {
                return Err(Error::PositionOutOfRange { position: p, k });
            }
            mask |= 1 << (p - 1);
        }
        Ok(PositionSet(mask))
    }

    pub fn contains(&self, position: usize) -> bool {
        position >= 1 && self.0 >> (position - 1) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// 1-based positions, ascending.
    pub fn positions(&self) -> Vec<usize> {
        (1..=32).filter(|&p| self.contains(p)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }
}

impl std::fmt::Display for PositionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.positions().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// π_S(T): the elements of T occupying the σ-positions in S.  Returned sorted
/// by vertex label.
pub fn project(t: &[usize], s: PositionSet, sigma: &VertexOrdering) -> Result<Vec<usize>> {
    let k = t.len();
    if let Some(p) = s.positions().into_iter().find(|&p| p > k) {
        return Err(Error::PositionOutOfRange { position: p, k });
    }
    let mut sorted: Vec<usize> = t.to_vec();
    sorted.sort_by_key(|&v| sigma.rank(v));
    let mut out: Vec<usize> = sorted
        .iter()
        .enumerate()
        .filter(|(i, _)| s.contains(i + 1))
        .map(|(_, &v)| v)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// The witnessing sets S for a coloured copy, with the induced partial colour
/// map φ on realised projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWitness {
    pub k: usize,
    pub entries: Vec<PatternEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEntry {
    pub positions: PositionSet,
    /// φ restricted to realised projections, sorted by projection.
    pub phi: Vec<(Vec<usize>, u64)>,
}

impl PatternWitness {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, s: PositionSet) -> bool {
        self.entries.iter().any(|e| e.positions == s)
    }

    pub fn sets(&self) -> Vec<PositionSet> {
        self.entries.iter().map(|e| e.positions).collect()
    }

    pub fn has_monochromatic(&self) -> bool {
        self.contains(PositionSet::EMPTY)
    }

    pub fn has_rainbow(&self) -> bool {
        self.contains(PositionSet::full(self.k))
    }
}

fn check_mask(
    h: &KGraph,
    sigma: &VertexOrdering,
    chi: &Colouring,
    s: PositionSet,
) -> Option<Vec<(Vec<usize>, u64)>> {
    let mut phi: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut used: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, e) in h.edges().enumerate() {
        let proj = project(e, s, sigma).expect("positions within k");
        let colour = chi.of(i);
        match phi.get(&proj) {
            Some(&c) if c != colour => return None,
            Some(_) => {}
            None => {
                // injectivity: a colour may only repeat on equal projections
                match used.get(&colour) {
                    Some(p) if *p != proj => return None,
                    _ => {}
                }
                used.insert(colour, proj.clone());
                phi.insert(proj, colour);
            }
        }
    }
    let mut out: Vec<(Vec<usize>, u64)> = phi.into_iter().collect();
    out.sort();
    Some(out)
}

/// Exactly those S ⊆ [k] under which χ factors injectively through π_S.
pub fn classify_pattern(
    h: &KGraph,
    sigma: &VertexOrdering,
    chi: &Colouring,
) -> Result<PatternWitness> {
    let k = h.uniformity();
    if k > MAX_UNIFORMITY {
        return Err(Error::UnsupportedUniformity {
            k,
            reason: format!("classification enumerates 2^k subsets; k <= {MAX_UNIFORMITY}"),
        });
    }
    chi.check_total(h)?;
    let mut entries = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let s = PositionSet(mask);
        if let Some(phi) = check_mask(h, sigma, chi, s) {
            entries.push(PatternEntry { positions: s, phi });
        }
    }
    Ok(PatternWitness { k, entries })
}

/// Early-exit existence check used in the solver's inner loop.
pub fn is_canonical(h: &KGraph, sigma: &VertexOrdering, chi: &Colouring) -> Result<bool> {
    let k = h.uniformity();
    if k > MAX_UNIFORMITY {
        return Err(Error::UnsupportedUniformity {
            k,
            reason: format!("classification enumerates 2^k subsets; k <= {MAX_UNIFORMITY}"),
        });
    }
    chi.check_total(h)?;
    for mask in 0u32..(1u32 << k) {
        if check_mask(h, sigma, chi, PositionSet(mask)).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Which embeddings count as realising a canonical copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonMode {
    /// A copy is canonical if some embedding onto it classifies non-empty.
    AnyEmbedding,
    /// Strict comparison mode: only the embeddings sending the σ-order of
    /// V(H) to the ascending natural order of the image vertices.
    OrderPreserving,
}

fn mode_allows(mode: CanonMode, sigma: &VertexOrdering, emb: &Embedding) -> bool {
    match mode {
        CanonMode::AnyEmbedding => true,
        CanonMode::OrderPreserving => {
            let seq = sigma.sequence();
            seq.windows(2).all(|w| emb.image_of(w[0]) < emb.image_of(w[1]))
        }
    }
}

/// Pull the host colouring back along an embedding onto the pattern's edges.
pub fn pull_back(h: &KGraph, g: &KGraph, chi_g: &Colouring, emb: &Embedding) -> Colouring {
    let colours = h
        .edges()
        .map(|e| {
            let idx = g.edge_index(&emb.image_edge(e)).expect("image is an edge");
            chi_g.of(idx)
        })
        .collect();
    Colouring::new(colours)
}

/// Every embedding of `h` into `g` whose pulled-back colouring is canonical,
/// with its witnessing sets.
pub fn enumerate_canonical_copies(
    h: &KGraph,
    sigma: &VertexOrdering,
    g: &KGraph,
    chi_g: &Colouring,
    mode: CanonMode,
) -> Result<Vec<(Embedding, PatternWitness)>> {
    if h.uniformity() != g.uniformity() {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: g.uniformity(),
        });
    }
    chi_g.check_total(g)?;
    let mut out = Vec::new();
    for emb in crate::graph::enumerate_copies(h, g)? {
        if !mode_allows(mode, sigma, &emb) {
            continue;
        }
        let pulled = pull_back(h, g, chi_g, &emb);
        let w = classify_pattern(h, sigma, &pulled)?;
        if !w.is_empty() {
            out.push((emb, w));
        }
    }
    Ok(out)
}

/// Is this subgraph copy, under `chi_g`, canonical w.r.t. σ?  Quantifies over
/// the copy's embeddings per `mode`.
pub fn copy_is_canonical(
    h: &KGraph,
    sigma: &VertexOrdering,
    g: &KGraph,
    chi_g: &Colouring,
    copy: &SubgraphCopy,
    mode: CanonMode,
) -> Result<bool> {
    for emb in &copy.embeddings {
        if !mode_allows(mode, sigma, emb) {
            continue;
        }
        let pulled = pull_back(h, g, chi_g, emb);
        if is_canonical(h, sigma, &pulled)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of distinct subgraph copies of `h` in `g` that are canonical w.r.t.
/// σ (a subgraph counts if at least one embedding onto it is canonical).
pub fn count_canonical_copies(
    g: &KGraph,
    chi_g: &Colouring,
    h: &KGraph,
    sigma: &VertexOrdering,
) -> Result<usize> {
    count_canonical_copies_mode(g, chi_g, h, sigma, CanonMode::AnyEmbedding)
}

pub fn count_canonical_copies_mode(
    g: &KGraph,
    chi_g: &Colouring,
    h: &KGraph,
    sigma: &VertexOrdering,
    mode: CanonMode,
) -> Result<usize> {
    if h.uniformity() != g.uniformity() {
        return Err(Error::UniformityMismatch {
            left: h.uniformity(),
            right: g.uniformity(),
        });
    }
    chi_g.check_total(g)?;
    let mut count = 0;
    for copy in grouped_copies(h, g)? {
        if copy_is_canonical(h, sigma, g, chi_g, &copy, mode)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Independent reference implementation of the lexicographic check for k = 2:
/// an injective φ on V(H) with χ(uv) = φ(σ-min(u, v)) exists.  Used as the
/// oracle against the S = {1} classification.
pub fn is_lexicographic(h: &KGraph, sigma: &VertexOrdering, chi: &Colouring) -> Result<bool> {
    if h.uniformity() != 2 {
        return Err(Error::UnsupportedUniformity {
            k: h.uniformity(),
            reason: "lexicographic colourings are a k = 2 notion".into(),
        });
    }
    chi.check_total(h)?;
    let mut phi: HashMap<usize, u64> = HashMap::new();
    for (i, e) in h.edges().enumerate() {
        let min = if sigma.rank(e[0]) < sigma.rank(e[1]) {
            e[0]
        } else {
            e[1]
        };
        if let Some(&c) = phi.get(&min) {
            if c != chi.of(i) {
                return Ok(false);
            }
        } else {
            phi.insert(min, chi.of(i));
        }
    }
    // φ must extend injectively to all of V(H); since the colour universe is
    // unbounded this only requires injectivity on the realised minima.
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for (&v, &c) in &phi {
        if let Some(&u) = seen.get(&c) {
            if u != v {
                return Ok(false);
            }
        }
        seen.insert(c, v);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;

    fn k3() -> KGraph {
        KGraph::complete(3, 2).unwrap()
    }

    #[test]
    fn projection_identities() {
        let sigma = VertexOrdering::natural(10);
        let t = vec![5, 2, 9];
        assert_eq!(
            project(&t, PositionSet::EMPTY, &sigma).unwrap(),
            Vec::<usize>::new()
        );
        let mut full = project(&t, PositionSet::full(3), &sigma).unwrap();
        full.sort_unstable();
        assert_eq!(full, vec![2, 5, 9]);
        // first and third elements of (2, 5, 9)
        let s = PositionSet::from_positions(&[1, 3], 3).unwrap();
        assert_eq!(project(&t, s, &sigma).unwrap(), vec![2, 9]);
    }

    #[test]
    fn projection_position_out_of_range() {
        let sigma = VertexOrdering::natural(5);
        let s = PositionSet::from_positions(&[3], 3).unwrap();
        assert!(project(&[0, 1], s, &sigma).is_err());
    }

    #[test]
    fn monochromatic_triangle() {
        let h = k3();
        let sigma = VertexOrdering::natural(3);
        let w = classify_pattern(&h, &sigma, &Colouring::constant(&h, 7)).unwrap();
        assert!(w.has_monochromatic());
    }

    #[test]
    fn rainbow_triangle() {
        let h = k3();
        let sigma = VertexOrdering::natural(3);
        // edges of K3 in lex order: 01, 02, 12
        let w = classify_pattern(&h, &sigma, &Colouring::new(vec![1, 2, 3])).unwrap();
        assert_eq!(w.sets(), vec![PositionSet::full(2)]);
    }

    #[test]
    fn lexicographic_triangle() {
        let h = k3();
        let sigma = VertexOrdering::natural(3);
        // χ(01) = χ(02) = 1, χ(12) = 2: exactly S = {1}
        let w = classify_pattern(&h, &sigma, &Colouring::new(vec![1, 1, 2])).unwrap();
        assert_eq!(w.sets(), vec![PositionSet::from_positions(&[1], 2).unwrap()]);
    }

    #[test]
    fn reversed_ordering_swaps_one_and_two() {
        let h = k3();
        let sigma = VertexOrdering::natural(3);
        let chi = Colouring::new(vec![1, 1, 2]);
        let w = classify_pattern(&h, &sigma.reversed(), &chi).unwrap();
        assert_eq!(w.sets(), vec![PositionSet::from_positions(&[2], 2).unwrap()]);
    }

    #[test]
    fn relabelling_invariance() {
        let h = k3();
        let sigma = VertexOrdering::natural(3);
        let a = classify_pattern(&h, &sigma, &Colouring::new(vec![1, 1, 2])).unwrap();
        let b = classify_pattern(&h, &sigma, &Colouring::new(vec![9, 9, 4])).unwrap();
        assert_eq!(a.sets(), b.sets());
    }

    #[test]
    fn lexicographic_matches_classifier() {
        // exhaustive on K3 over 3 colours and all 6 orderings
        let h = k3();
        let mut perms = vec![];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push(vec![a, b, c]);
                    }
                }
            }
        }
        let s1 = PositionSet::from_positions(&[1], 2).unwrap();
        for seq in perms {
            let sigma = VertexOrdering::from_sequence(&seq).unwrap();
            for c0 in 0..3u64 {
                for c1 in 0..3u64 {
                    for c2 in 0..3u64 {
                        let chi = Colouring::new(vec![c0, c1, c2]);
                        let w = classify_pattern(&h, &sigma, &chi).unwrap();
                        assert_eq!(
                            w.contains(s1),
                            is_lexicographic(&h, &sigma, &chi).unwrap(),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_copies_monochromatic_k4() {
        let h = k3();
        let g = KGraph::complete(4, 2).unwrap();
        let sigma = VertexOrdering::natural(3);
        let chi = Colouring::constant(&g, 3);
        assert_eq!(count_canonical_copies(&g, &chi, &h, &sigma).unwrap(), 4);
    }

    #[test]
    fn canonical_copies_triangle_free() {
        let h = k3();
        let g = cycle_graph(4).unwrap();
        let sigma = VertexOrdering::natural(3);
        let chi = Colouring::constant(&g, 0);
        assert_eq!(count_canonical_copies(&g, &chi, &h, &sigma).unwrap(), 0);
    }

    #[test]
    fn canonical_copy_via_some_embedding() {
        // K3 with colours 1, 2, 1 on edges 01, 02, 12: canonical because some
        // embedding aligns the two colour-1 edges at the σ-minimum.
        let h = k3();
        let g = k3();
        let sigma = VertexOrdering::natural(3);
        let chi = Colouring::new(vec![1, 2, 1]);
        assert_eq!(count_canonical_copies(&g, &chi, &h, &sigma).unwrap(), 1);
        // strict mode sees only the identity-style embedding, which is not
        // lexicographic for this colour placement
        assert_eq!(
            count_canonical_copies_mode(&g, &chi, &h, &sigma, CanonMode::OrderPreserving).unwrap(),
            0
        );
    }
}

//! Flag-complex enumeration with a dimension cap, Rips and quasi-Rips
//! builders, links, stars, induced subcomplexes, and simplicial joins.

use std::collections::BTreeSet;
use std::io::{Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{proximity_graph, PairClass, PointCloud, ThresholdPolicy};
use crate::graph::{BitIter, Graph};

/// Default cap on the total number of enumerated faces. Overridable per call;
/// the CLI reads `RIPS_BUDGET` to replace the process-wide value.
pub const DEFAULT_FACE_BUDGET: usize = 50_000_000;

static ACTIVE_BUDGET: std::sync::atomic::AtomicUsize =
    std::sync::atomic::AtomicUsize::new(DEFAULT_FACE_BUDGET);

/// The face-enumeration budget used by the budget-less builder entry points.
pub fn current_face_budget() -> usize {
    ACTIVE_BUDGET.load(std::sync::atomic::Ordering::Relaxed)
}

pub fn set_face_budget(budget: usize) {
    ACTIVE_BUDGET.store(budget.max(1), std::sync::atomic::Ordering::Relaxed);
}

/// A simplicial complex stored as explicit face lists per dimension, up to a
/// mandatory dimension cap. Faces are strictly increasing vertex tuples and
/// each list is lexicographically sorted, which fixes the canonical column
/// order of every boundary matrix downstream.
///
/// Flag builders guarantee the flag property; the homology code accepts any
/// downward-closed face list (the face-deleted complex of the quasi-Rips
/// lower bound is the one non-flag value that flows through here).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    n_vertices: usize,
    dim_cap: usize,
    faces: Vec<Vec<Vec<u32>>>,
    parent_map: Option<Vec<u32>>,
}

impl Complex {
    /// Builds a complex from arbitrary face lists (dimension p at index p).
    /// Vertices (dimension 0) are implied by `n_vertices` and need not be
    /// listed. Verifies sortedness and downward closure.
    pub fn from_faces(n_vertices: usize, dim_cap: usize, upper: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let mut faces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dim_cap + 1];
        faces[0] = (0..n_vertices as u32).map(|v| vec![v]).collect();
        for (p, list) in upper.into_iter().enumerate() {
            if p == 0 {
                continue;
            }
            if p > dim_cap {
                if !list.is_empty() {
                    return Err(Error::DimensionOutOfRange { p, dim_cap });
                }
                continue;
            }
            faces[p] = list;
        }
        let complex = Self { n_vertices, dim_cap, faces, parent_map: None };
        complex.verify_structure()?;
        Ok(complex)
    }

    fn verify_structure(&self) -> Result<()> {
        for (p, list) in self.faces.iter().enumerate() {
            let mut prev: Option<&Vec<u32>> = None;
            for face in list {
                if face.len() != p + 1 {
                    return Err(Error::InvalidInput(format!(
                        "face {face:?} listed at dimension {p}"
                    )));
                }
                if !face.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::InvalidInput(format!("face {face:?} is not sorted")));
                }
                if face.last().copied().unwrap_or(0) as usize >= self.n_vertices {
                    return Err(Error::UnknownVertex(*face.last().unwrap()));
                }
                if let Some(prev) = prev {
                    if prev >= face {
                        return Err(Error::InvalidInput(format!(
                            "face list at dimension {p} is not sorted/deduplicated near {face:?}"
                        )));
                    }
                }
                prev = Some(face);
                if p >= 1 {
                    for omit in 0..face.len() {
                        let mut sub = face.clone();
                        sub.remove(omit);
                        if self.face_index(p - 1, &sub).is_none() {
                            return Err(Error::FaceNotPresent(sub));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Faces of dimension `p` in canonical (lexicographic) order; empty slice
    /// above the cap.
    pub fn faces(&self, p: usize) -> &[Vec<u32>] {
        if p < self.faces.len() {
            &self.faces[p]
        } else {
            &[]
        }
    }

    pub fn face_count(&self, p: usize) -> usize {
        self.faces(p).len()
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    /// Position of `face` in the canonical order of its dimension.
    pub fn face_index(&self, p: usize, face: &[u32]) -> Option<usize> {
        self.faces(p).binary_search_by(|f| f.as_slice().cmp(face)).ok()
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        !face.is_empty() && self.face_index(face.len() - 1, face).is_some()
    }

    /// Map from this complex's vertices back to the parent complex they were
    /// taken from, when this complex came out of `link_of` or
    /// `induced_subcomplex`.
    pub fn parent_map(&self) -> Option<&[u32]> {
        self.parent_map.as_deref()
    }

    /// The 1-skeleton as a graph.
    pub fn skeleton_graph(&self) -> Graph {
        let mut g = Graph::new(self.n_vertices);
        for e in self.faces(1) {
            g.add_edge(e[0] as usize, e[1] as usize);
        }
        g
    }

    /// Maximal faces among the enumerated ones: faces with no proper coface.
    /// Downward closure means it suffices to mark each face's facets.
    pub fn maximal_faces(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for p in 0..=self.dim_cap {
            let mut covered = vec![false; self.face_count(p)];
            if p < self.dim_cap {
                for coface in self.faces(p + 1) {
                    for omit in 0..coface.len() {
                        let mut facet = coface.clone();
                        facet.remove(omit);
                        if let Some(idx) = self.face_index(p, &facet) {
                            covered[idx] = true;
                        }
                    }
                }
            }
            for (face, covered) in self.faces(p).iter().zip(covered) {
                if !covered {
                    out.push(face.clone());
                }
            }
        }
        out
    }

    /// Checks that every boundary face of every listed face is present.
    pub fn verify_downward_closure(&self) -> bool {
        self.verify_structure().is_ok()
    }

    /// Checks the flag property: every clique of the 1-skeleton with at most
    /// `dim_cap + 1` vertices is a face.
    pub fn verify_flag(&self) -> bool {
        match flag_skeleton(&self.skeleton_graph(), self.dim_cap) {
            Ok(reference) => reference.faces == self.faces,
            Err(_) => false,
        }
    }
}

/// Enumerates all cliques of the graph with at most `dim_cap + 1` vertices,
/// by ordered clique extension: a face is extended only by common neighbors
/// larger than its last vertex, so each clique is produced exactly once and
/// each dimension's list comes out in lexicographic order.
pub fn flag_skeleton(graph: &Graph, dim_cap: usize) -> Result<Complex> {
    flag_skeleton_with_budget(graph, dim_cap, current_face_budget())
}

pub fn flag_skeleton_with_budget(graph: &Graph, dim_cap: usize, budget: usize) -> Result<Complex> {
    let n = graph.n_vertices();
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dim_cap + 1);
    faces.push((0..n as u32).map(|v| vec![v]).collect());
    let mut total = n;
    if total > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    for p in 1..=dim_cap {
        let mut level: Vec<Vec<u32>> = Vec::new();
        for face in &faces[p - 1] {
            let last = *face.last().unwrap() as usize;
            let candidates = graph.common_neighbors(face);
            for v in BitIter::new(&candidates) {
                if v <= last {
                    continue;
                }
                let mut bigger = Vec::with_capacity(face.len() + 1);
                bigger.extend_from_slice(face);
                bigger.push(v as u32);
                level.push(bigger);
                total += 1;
                if total > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
            }
        }
        if level.is_empty() {
            // Pad remaining dimensions with empty lists and stop early.
            faces.push(level);
            break;
        }
        faces.push(level);
    }
    while faces.len() <= dim_cap {
        faces.push(Vec::new());
    }
    Ok(Complex { n_vertices: n, dim_cap, faces, parent_map: None })
}

/// The Rips complex of the cloud, truncated at `dim_cap`.
pub fn build_rips(cloud: &PointCloud, policy: &ThresholdPolicy, dim_cap: usize) -> Result<Complex> {
    build_rips_with_budget(cloud, policy, dim_cap, current_face_budget())
}

pub fn build_rips_with_budget(
    cloud: &PointCloud,
    policy: &ThresholdPolicy,
    dim_cap: usize,
    budget: usize,
) -> Result<Complex> {
    let graph = proximity_graph(cloud, policy)?;
    flag_skeleton_with_budget(&graph, dim_cap, budget)
}

/// The link of `face`: the flag complex on the common neighbors of all its
/// vertices, with the dimension cap reduced by `|face|`. The returned complex
/// carries an index map back to the parent's vertices. Assumes the input is
/// flag.
pub fn link_of(complex: &Complex, face: &[u32]) -> Result<Complex> {
    if !complex.contains_face(face) {
        return Err(Error::FaceNotPresent(face.to_vec()));
    }
    let graph = complex.skeleton_graph();
    let neighborhood = graph.common_neighbors(face);
    let vertices: Vec<u32> = BitIter::new(&neighborhood).map(|v| v as u32).collect();
    let sub = graph.induced(&vertices)?;
    let cap = complex.dim_cap.saturating_sub(face.len());
    let mut link = flag_skeleton(&sub, cap)?;
    link.parent_map = Some(compose_parent(complex, &vertices));
    Ok(link)
}

/// The star of `face`: the induced subcomplex on `N(face) ∪ face`.
pub fn star_of(complex: &Complex, face: &[u32]) -> Result<Complex> {
    if !complex.contains_face(face) {
        return Err(Error::FaceNotPresent(face.to_vec()));
    }
    let graph = complex.skeleton_graph();
    let neighborhood = graph.common_neighbors(face);
    let mut vertices: Vec<u32> = BitIter::new(&neighborhood).map(|v| v as u32).collect();
    vertices.extend_from_slice(face);
    vertices.sort_unstable();
    vertices.dedup();
    induced_subcomplex(complex, &vertices)
}

/// The induced subcomplex on `w`: all faces contained in `w`, relabeled to
/// `0..w.len()`. Works for any stored complex, flag or not, and keeps the
/// dimension cap.
pub fn induced_subcomplex(complex: &Complex, w: &[u32]) -> Result<Complex> {
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        if v as usize >= complex.n_vertices {
            return Err(Error::UnknownVertex(v));
        }
    }
    let mut relabel = vec![u32::MAX; complex.n_vertices];
    for (i, &v) in sorted.iter().enumerate() {
        relabel[v as usize] = i as u32;
    }
    let mut faces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); complex.dim_cap + 1];
    faces[0] = (0..sorted.len() as u32).map(|v| vec![v]).collect();
    for p in 1..=complex.dim_cap {
        for face in complex.faces(p) {
            if face.iter().all(|&v| relabel[v as usize] != u32::MAX) {
                faces[p].push(face.iter().map(|&v| relabel[v as usize]).collect());
            }
        }
        // Relabeling is monotone, so each filtered list stays sorted.
    }
    Ok(Complex {
        n_vertices: sorted.len(),
        dim_cap: complex.dim_cap,
        faces,
        parent_map: Some(compose_parent(complex, &sorted)),
    })
}

fn compose_parent(complex: &Complex, vertices: &[u32]) -> Vec<u32> {
    match complex.parent_map() {
        Some(map) => vertices.iter().map(|&v| map[v as usize]).collect(),
        None => vertices.to_vec(),
    }
}

/// The simplicial join: disjoint vertex union plus all cross edges, faces
/// `F ∪ G`. Both inputs must be flag complexes (a side whose cap is below the
/// requested one is re-enumerated from its 1-skeleton first); the result is
/// then the flag complex of the joined graph. Vertices of `a` keep their
/// indices and vertices of `b` are shifted by `a.n_vertices()`.
pub fn join(a: &Complex, b: &Complex, dim_cap: usize) -> Result<Complex> {
    join_with_budget(a, b, dim_cap, current_face_budget())
}

pub fn join_with_budget(a: &Complex, b: &Complex, dim_cap: usize, budget: usize) -> Result<Complex> {
    let a_full = ensure_cap(a, dim_cap)?;
    let b_full = ensure_cap(b, dim_cap)?;
    let (a, b) = (&a_full, &b_full);
    let shift = a.n_vertices() as u32;
    let mut faces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dim_cap + 1];
    let mut total = 0usize;
    for p in 0..=dim_cap {
        let mut level: Vec<Vec<u32>> = Vec::new();
        // F alone, G alone, then every mixed union F ∪ G; vertex sets are
        // disjoint so there are no duplicates.
        level.extend(a.faces(p).iter().cloned());
        level.extend(b.faces(p).iter().map(|g| shifted(g, shift)));
        for i in 0..p {
            let j = p - 1 - i;
            for f in a.faces(i) {
                for g in b.faces(j) {
                    let mut face = Vec::with_capacity(p + 1);
                    face.extend_from_slice(f);
                    face.extend(g.iter().map(|&v| v + shift));
                    level.push(face);
                }
            }
        }
        level.sort_unstable();
        total += level.len();
        if total > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        faces[p] = level;
    }
    Ok(Complex {
        n_vertices: a.n_vertices() + b.n_vertices(),
        dim_cap,
        faces,
        parent_map: None,
    })
}

fn shifted(face: &[u32], shift: u32) -> Vec<u32> {
    face.iter().map(|&v| v + shift).collect()
}

fn ensure_cap(c: &Complex, dim_cap: usize) -> Result<Complex> {
    if c.dim_cap >= dim_cap {
        Ok(c.clone())
    } else {
        // Only valid because join inputs are flag complexes.
        flag_skeleton(&c.skeleton_graph(), dim_cap)
    }
}

// ---------------------------------------------------------------------------
// Quasi-Rips complexes

/// How pairs with `alpha < dist <= 1` are resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum OptionalEdgePolicy {
    IncludeAll,
    ExcludeAll,
    /// Exactly these optional edges are included. Listing a mandatory or
    /// forbidden pair is a `PolicyViolation`.
    Explicit(BTreeSet<(u32, u32)>),
    SeededRandom {
        probability: f64,
        seed: u64,
    },
}

/// A quasi-Rips build request: mandatory edges below `alpha`, forbidden pairs
/// above 1, and the policy deciding the band in between.
#[derive(Clone, Debug)]
pub struct QuasiRipsSpec {
    pub alpha: f64,
    pub cloud: PointCloud,
    pub optional_edge_policy: OptionalEdgePolicy,
}

impl QuasiRipsSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidInput("alpha must lie in (0, 1)".into()));
        }
        if let OptionalEdgePolicy::SeededRandom { probability, .. } = self.optional_edge_policy {
            if !(0.0..=1.0).contains(&probability) {
                return Err(Error::InvalidInput("probability must lie in [0, 1]".into()));
            }
        }
        Ok(())
    }
}

/// Builds the quasi-Rips flag complex: pairs at distance at most `alpha` are
/// always edges, pairs beyond 1 never are, and the optional band is resolved
/// by the spec's policy. Distances near either cutoff go through the same
/// tolerance/ambiguity classification as the Rips builder.
pub fn build_quasi_rips(spec: &QuasiRipsSpec, dim_cap: usize) -> Result<Complex> {
    build_quasi_rips_with_budget(spec, dim_cap, current_face_budget())
}

pub fn build_quasi_rips_with_budget(
    spec: &QuasiRipsSpec,
    dim_cap: usize,
    budget: usize,
) -> Result<Complex> {
    spec.validate()?;
    let n = spec.cloud.len();
    let lower = ThresholdPolicy::with_threshold(spec.alpha);
    let upper = ThresholdPolicy::default();
    let mut rng = match spec.optional_edge_policy {
        OptionalEdgePolicy::SeededRandom { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    if let OptionalEdgePolicy::Explicit(edges) = &spec.optional_edge_policy {
        for &(u, v) in edges {
            if u >= v || v as usize >= n {
                return Err(Error::PolicyViolation(format!(
                    "explicit edge ({u},{v}) is not a valid vertex pair"
                )));
            }
        }
    }
    let mut graph = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let d2 = spec.cloud.dist2(u, v);
            let mandatory = match lower.classify2(d2) {
                PairClass::Edge => true,
                PairClass::NonEdge => false,
                PairClass::Ambiguous => {
                    return Err(Error::AmbiguousDistance {
                        u: u as u32,
                        v: v as u32,
                        dist: d2.sqrt(),
                        threshold: spec.alpha,
                    })
                }
            };
            let forbidden = match upper.classify2(d2) {
                PairClass::Edge => false,
                PairClass::NonEdge => true,
                PairClass::Ambiguous => {
                    return Err(Error::AmbiguousDistance {
                        u: u as u32,
                        v: v as u32,
                        dist: d2.sqrt(),
                        threshold: 1.0,
                    })
                }
            };
            let key = (u as u32, v as u32);
            let include = if mandatory {
                if let OptionalEdgePolicy::Explicit(edges) = &spec.optional_edge_policy {
                    if edges.contains(&key) {
                        return Err(Error::PolicyViolation(format!(
                            "explicit optional edge ({u},{v}) is mandatory (dist <= alpha)"
                        )));
                    }
                }
                true
            } else if forbidden {
                if let OptionalEdgePolicy::Explicit(edges) = &spec.optional_edge_policy {
                    if edges.contains(&key) {
                        return Err(Error::PolicyViolation(format!(
                            "explicit optional edge ({u},{v}) is forbidden (dist > 1)"
                        )));
                    }
                }
                false
            } else {
                match &spec.optional_edge_policy {
                    OptionalEdgePolicy::IncludeAll => true,
                    OptionalEdgePolicy::ExcludeAll => false,
                    OptionalEdgePolicy::Explicit(edges) => edges.contains(&key),
                    OptionalEdgePolicy::SeededRandom { probability, .. } => {
                        rng.as_mut().unwrap().gen::<f64>() < *probability
                    }
                }
            };
            if include {
                graph.add_edge(u, v);
            }
        }
    }
    flag_skeleton_with_budget(&graph, dim_cap, budget)
}

// ---------------------------------------------------------------------------
// Complex export: JSON with maximal faces only; import reconstructs the
// downward closure and optionally verifies the flag property.

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    version: u32,
    n_vertices: usize,
    dim_cap: usize,
    flag: bool,
    faces: Vec<Vec<u32>>,
}

pub fn write_complex_json<W: Write>(complex: &Complex, flag: bool, writer: W) -> Result<()> {
    let data = ComplexJson {
        version: 1,
        n_vertices: complex.n_vertices(),
        dim_cap: complex.dim_cap(),
        flag,
        faces: complex.maximal_faces(),
    };
    serde_json::to_writer(writer, &data)?;
    Ok(())
}

pub fn read_complex_json<R: Read>(reader: R) -> Result<Complex> {
    let data: ComplexJson = serde_json::from_reader(reader)?;
    let mut levels: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); data.dim_cap + 1];
    for face in &data.faces {
        let mut sorted = face.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != face.len() {
            return Err(Error::InvalidInput(format!("face {face:?} has repeated vertices")));
        }
        if sorted.len() > data.dim_cap + 1 {
            return Err(Error::DimensionOutOfRange { p: sorted.len() - 1, dim_cap: data.dim_cap });
        }
        insert_closure(&mut levels, &sorted);
    }
    let faces: Vec<Vec<Vec<u32>>> = levels.into_iter().map(|s| s.into_iter().collect()).collect();
    let complex = Complex::from_faces(data.n_vertices, data.dim_cap, faces)?;
    if data.flag && !complex.verify_flag() {
        return Err(Error::InvalidInput(
            "complex was flagged as flag but fails the flag property".into(),
        ));
    }
    Ok(complex)
}

fn insert_closure(levels: &mut [BTreeSet<Vec<u32>>], face: &[u32]) {
    let p = face.len() - 1;
    if !levels[p].insert(face.to_vec()) {
        return;
    }
    if p == 0 {
        return;
    }
    for omit in 0..face.len() {
        let mut sub = face.to_vec();
        sub.remove(omit);
        insert_closure(levels, &sub);
    }
}

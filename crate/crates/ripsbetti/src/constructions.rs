//! Generators for the extremal point configurations and
//! combinatorial gadgets, each validating that what it emitted matches its
//! combinatorial description exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::complexes::{flag_skeleton, Complex};
use crate::error::{Error, Result};
use crate::geometry::{
    apply_plane_rotation, embed_plane_in_r5, proximity_graph, PointCloud,
    ThresholdPolicy,
};
use crate::graph::Graph;

/// Shared construction knobs. `delta` (angular step) and `epsilon_c`
/// (stacking offset) default to per-generator values chosen so that every
/// designed distance clears the policy's ambiguity band; passing explicit
/// values is allowed and margin-checked.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct ConstructionParams {
    pub delta: Option<f64>,
    pub epsilon_c: Option<f64>,
    pub policy: ThresholdPolicy,
}


// ---------------------------------------------------------------------------
// Two-clique gadgets (the bipartite lemma's setting)

/// The residual bipartite graph left after deleting both clique sides and any
/// isolated vertices. `vertices` maps the residual's indices back to the
/// original graph.
#[derive(Clone, Debug)]
pub struct ResidualGraph {
    pub graph: Graph,
    pub vertices: Vec<u32>,
}

impl ResidualGraph {
    /// The component count q of G'; the bipartite lemma gives
    /// beta_1 = max(0, q - 1).
    pub fn component_count(&self) -> usize {
        self.graph.component_count()
    }
}

/// A graph on U ⊔ V with both parts complete, plus its residual.
#[derive(Clone, Debug)]
pub struct TwoCliqueGadget {
    pub graph: Graph,
    pub u_size: usize,
    pub v_size: usize,
    pub residual: ResidualGraph,
}

/// Deletes all intra-part edges and isolated vertices, after checking that
/// both parts really are complete.
pub fn residual_graph(graph: &Graph, u_set: &[u32], v_set: &[u32]) -> Result<ResidualGraph> {
    let n = graph.n_vertices();
    let mut part = vec![u8::MAX; n];
    for &u in u_set {
        part[u as usize] = 0;
    }
    for &v in v_set {
        if part[v as usize] == 0 {
            return Err(Error::InvalidInput(format!("vertex {v} appears in both parts")));
        }
        part[v as usize] = 1;
    }
    if part.contains(&u8::MAX) {
        return Err(Error::InvalidInput("U and V must partition the vertex set".into()));
    }
    for set in [u_set, v_set] {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                if !graph.has_edge(a as usize, b as usize) {
                    return Err(Error::NotTwoClique(a.min(b), a.max(b)));
                }
            }
        }
    }
    let mut cross = Graph::new(n);
    for (a, b) in graph.edges() {
        if part[a as usize] != part[b as usize] {
            cross.add_edge(a as usize, b as usize);
        }
    }
    let kept: Vec<u32> = (0..n as u32).filter(|&v| cross.degree(v as usize) > 0).collect();
    let sub = cross.induced(&kept)?;
    Ok(ResidualGraph { graph: sub, vertices: kept })
}

/// Builds the two-clique gadget: complete parts plus the given cross edges,
/// given as (index into U, index into V).
pub fn two_clique_gadget(
    u_size: usize,
    v_size: usize,
    cross_edges: &[(u32, u32)],
) -> Result<TwoCliqueGadget> {
    let n = u_size + v_size;
    let mut graph = Graph::new(n);
    for a in 0..u_size {
        for b in (a + 1)..u_size {
            graph.add_edge(a, b);
        }
    }
    for a in 0..v_size {
        for b in (a + 1)..v_size {
            graph.add_edge(u_size + a, u_size + b);
        }
    }
    for &(u, v) in cross_edges {
        if u as usize >= u_size || v as usize >= v_size {
            return Err(Error::UnknownVertex(u.max(v)));
        }
        graph.add_edge(u as usize, u_size + v as usize);
    }
    let u_set: Vec<u32> = (0..u_size as u32).collect();
    let v_set: Vec<u32> = (u_size as u32..n as u32).collect();
    let residual = residual_graph(&graph, &u_set, &v_set)?;
    Ok(TwoCliqueGadget { graph, u_size, v_size, residual })
}

/// One representative cross edge per residual component, ordered by the
/// component's smallest vertex; each edge is returned as (u, v) in original
/// indices with u on the U side.
pub fn representative_edges(gadget: &TwoCliqueGadget) -> Vec<(u32, u32)> {
    let res = &gadget.residual;
    let (comp, count) = res.graph.components();
    let mut reps: Vec<Option<(u32, u32)>> = vec![None; count];
    for (a, b) in res.graph.edges() {
        let (oa, ob) = (res.vertices[a as usize], res.vertices[b as usize]);
        let (u, v) = if (oa as usize) < gadget.u_size { (oa, ob) } else { (ob, oa) };
        let slot = &mut reps[comp[a as usize]];
        if slot.is_none_or(|cur| (u, v) < cur) {
            *slot = Some((u, v));
        }
    }
    reps.into_iter().flatten().collect()
}

/// The lemma's basis cycles [(u1, ui, vi, v1)] for i = 2..q, built from the
/// per-component representative edges.
pub fn bipartite_basis_cycles(gadget: &TwoCliqueGadget) -> Vec<Vec<u32>> {
    let reps = representative_edges(gadget);
    if reps.len() < 2 {
        return Vec::new();
    }
    let (u1, v1) = reps[0];
    reps[1..].iter().map(|&(ui, vi)| vec![u1, ui, vi, v1]).collect()
}

// ---------------------------------------------------------------------------
// S^{2k-1}(n): k rotated copies of the two-cluster matching gadget in R^2

/// Resolved parameters for `construct_s2km1`: (r, delta, epsilon_c).
pub fn s2km1_resolved_params(
    n: usize,
    k: usize,
    params: &ConstructionParams,
) -> Result<(usize, f64, f64)> {
    if k == 0 {
        return Err(Error::PreconditionUnmet("k must be positive".into()));
    }
    let r = n / (2 * k);
    if r < 2 {
        return Err(Error::PreconditionUnmet(format!(
            "need r = floor(n/2k) >= 2; got r = {r} for n = {n}, k = {k}"
        )));
    }
    let epsilon = params.epsilon_c.unwrap_or(2e-3);
    let delta = params.delta.unwrap_or(32.0 * r as f64 * epsilon);
    Ok((r, delta, epsilon))
}

/// k rotated copies of the 2r-point gadget `{(1/2, i*eps), (-1/2, i*eps)}`.
/// Within a copy the two sides are r-cliques joined by the perfect matching
/// of same-height pairs; across copies every pair is an edge. The proximity
/// graph is verified against that description pair by pair.
pub fn construct_s2km1(n: usize, k: usize, params: &ConstructionParams) -> Result<PointCloud> {
    let (r, delta, epsilon) = s2km1_resolved_params(n, k, params)?;
    let band = params.policy.ambiguity_band;
    // Cheap margin preconditions; the definitive check is the pairwise
    // validation below.
    if k > 1 && !(r as f64 * epsilon < delta / 8.0) {
        return Err(Error::MarginViolation {
            u: (r - 1) as u32,
            v: (2 * r + 2 * r - 1) as u32,
            detail: format!("need r*epsilon_c < delta/8; got {} vs {}", r as f64 * epsilon, delta / 8.0),
        });
    }
    if !((r as f64 * epsilon).powi(2) > band) {
        return Err(Error::MarginViolation {
            u: 0,
            v: (r + 1) as u32,
            detail: format!(
                "need (r*epsilon_c)^2 > ambiguity band; got {} vs {band}",
                (r as f64 * epsilon).powi(2)
            ),
        });
    }
    if k > 1 && (k - 1) as f64 * delta > 1.2 {
        return Err(Error::MarginViolation {
            u: 0,
            v: ((k - 1) * 2 * r) as u32,
            detail: format!("total angular spread {} exceeds 1.2 rad", (k - 1) as f64 * delta),
        });
    }

    let mut base_points = Vec::with_capacity(2 * r);
    let mut labels = Vec::with_capacity(2 * r * k);
    for i in 1..=r {
        base_points.push(vec![0.5, i as f64 * epsilon]);
    }
    for i in 1..=r {
        base_points.push(vec![-0.5, i as f64 * epsilon]);
    }
    let base = PointCloud::new(2, base_points)?;
    let mut cloud = PointCloud::new(2, vec![])?;
    for copy in 0..k {
        let rotated = if copy == 0 {
            base.clone()
        } else {
            apply_plane_rotation(&base, copy as f64 * delta)?
        };
        cloud = cloud.union(&rotated)?;
        for i in 1..=r {
            labels.push(format!("c{copy}+{i}"));
        }
        for i in 1..=r {
            labels.push(format!("c{copy}-{i}"));
        }
    }
    let cloud = cloud.with_labels(labels)?;

    let graph = match proximity_graph(&cloud, &params.policy) {
        Ok(g) => g,
        Err(Error::AmbiguousDistance { u, v, dist, .. }) => {
            return Err(Error::MarginViolation {
                u,
                v,
                detail: format!("pair lands in the ambiguity band at distance {dist}"),
            })
        }
        Err(e) => return Err(e),
    };
    for a in 0..cloud.len() {
        for b in (a + 1)..cloud.len() {
            let expected = s2km1_pair_is_edge(a, b, r);
            if graph.has_edge(a, b) != expected {
                return Err(Error::MarginViolation {
                    u: a as u32,
                    v: b as u32,
                    detail: format!(
                        "pair at distance {} classified as edge={}, construction requires edge={}",
                        cloud.dist(a, b),
                        graph.has_edge(a, b),
                        expected
                    ),
                });
            }
        }
    }
    Ok(cloud)
}

/// The combinatorial edge relation of the S^{2k-1} gadget: indices are
/// copy-major, + side before - side.
pub fn s2km1_pair_is_edge(a: usize, b: usize, r: usize) -> bool {
    let (copy_a, off_a) = (a / (2 * r), a % (2 * r));
    let (copy_b, off_b) = (b / (2 * r), b % (2 * r));
    if copy_a != copy_b {
        return true;
    }
    let (side_a, i_a) = (off_a / r, off_a % r);
    let (side_b, i_b) = (off_b / r, off_b % r);
    side_a == side_b || i_a == i_b
}

// ---------------------------------------------------------------------------
// S^2(n): the 3k^2-point configuration in R^5 with the six exact edge
// families

/// Resolved parameters for `construct_s2`: (delta, epsilon_c).
pub fn s2_resolved_params(k: usize, params: &ConstructionParams) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::PreconditionUnmet(format!("construct_s2 needs k >= 2; got {k}")));
    }
    let epsilon = params.epsilon_c.unwrap_or(2e-3);
    let delta = match params.delta {
        Some(d) => d,
        None => {
            // Smallest angle whose u/w separation clears the stacking drift
            // with room to spare.
            let target = 3f64.sqrt() * k as f64 * epsilon + (k as f64 * epsilon).powi(2) + 1e-4;
            (1.0 - 2.0 * target).acos()
        }
    };
    Ok((delta, epsilon))
}

pub fn s2_index_u(k: usize, i: usize, j: usize) -> usize {
    (i - 1) * k + (j - 1)
}

pub fn s2_index_v(k: usize, i: usize, j: usize) -> usize {
    k * k + (i - 1) * k + (j - 1)
}

pub fn s2_index_w(k: usize, i: usize, j: usize) -> usize {
    2 * k * k + (i - 1) * k + (j - 1)
}

/// The six edge families, as a set of index pairs.
pub fn s2_expected_edges(k: usize) -> BTreeSet<(u32, u32)> {
    let mut edges = BTreeSet::new();
    let mut insert = |a: usize, b: usize| {
        if a != b {
            edges.insert((a.min(b) as u32, a.max(b) as u32));
        }
    };
    let all: Vec<(usize, usize)> =
        (1..=k).flat_map(|i| (1..=k).map(move |j| (i, j))).collect();
    for (idx, &(i, j)) in all.iter().enumerate() {
        for &(i2, j2) in &all[idx + 1..] {
            insert(s2_index_u(k, i, j), s2_index_u(k, i2, j2));
            insert(s2_index_v(k, i, j), s2_index_v(k, i2, j2));
            insert(s2_index_w(k, i, j), s2_index_w(k, i2, j2));
        }
    }
    for j in 1..=k {
        for i in 1..=k {
            for i2 in 1..=k {
                insert(s2_index_u(k, i, j), s2_index_v(k, i2, j));
            }
        }
    }
    for i in 1..=k {
        for j in 1..=k {
            for j2 in 1..=k {
                insert(s2_index_u(k, i, j), s2_index_w(k, i, j2));
            }
        }
    }
    for i in 1..=k {
        for j in 1..=k {
            for i2 in 1..=k {
                insert(s2_index_v(k, i, j), s2_index_w(k, i2, i));
            }
        }
    }
    edges
}

/// The induced matching seen by w_{i,j}: the U-V edges of its link,
/// {u_{i,t} v_{j,t} : t <= k}.
pub fn s2_w_matching(k: usize, i: usize, j: usize) -> Vec<(usize, usize)> {
    (1..=k).map(|t| (s2_index_u(k, i, t), s2_index_v(k, j, t))).collect()
}

/// The 3k^2 points u_{i,j}, v_{i,j}, w_{i,j}; the proximity graph is checked
/// to equal the six edge families exactly, any discrepancy is an error.
pub fn construct_s2(k: usize, params: &ConstructionParams) -> Result<PointCloud> {
    let (delta, epsilon) = s2_resolved_params(k, params)?;
    let band = params.policy.ambiguity_band;
    let kf = k as f64;
    if !(epsilon * epsilon > 2.0 * band) {
        return Err(Error::MarginViolation {
            u: s2_index_u(k, 1, 1) as u32,
            v: s2_index_v(k, 1, 2) as u32,
            detail: format!("need epsilon_c^2 > 2*band for the U-V non-edges; got {}", epsilon * epsilon),
        });
    }
    let uw_margin = 0.5 * (1.0 - delta.cos()) - 3f64.sqrt() * kf * epsilon - (kf * epsilon).powi(2);
    if !(uw_margin > band) {
        return Err(Error::MarginViolation {
            u: s2_index_u(k, 1, k) as u32,
            v: s2_index_w(k, 2, 1) as u32,
            detail: format!("U-W non-edge margin {uw_margin} does not clear the band"),
        });
    }
    let spread = (k - 1) as f64 * delta;
    if !((1.0 - spread.cos()) + (kf * epsilon).powi(2) < 1.0 - 2.0 * band) {
        return Err(Error::MarginViolation {
            u: s2_index_u(k, 1, 1) as u32,
            v: s2_index_u(k, k, k) as u32,
            detail: format!("U clique spread {spread} rad pushes same-part pairs out of edge range"),
        });
    }

    let half = 2f64.sqrt() / 2.0;
    let quarter = 2f64.sqrt() / 4.0;
    let top = 3f64.sqrt() / 2.0;
    let mut points = vec![vec![0.0; 5]; 3 * k * k];
    let mut labels = vec![String::new(); 3 * k * k];
    for i in 1..=k {
        for j in 1..=k {
            let (si, ci) = ((i as f64) * delta).sin_cos();
            let (sj, cj) = ((j as f64) * delta).sin_cos();
            points[s2_index_u(k, i, j)] = vec![half * ci, half * si, 0.0, 0.0, j as f64 * epsilon];
            points[s2_index_v(k, i, j)] = vec![0.0, 0.0, half * ci, half * si, j as f64 * epsilon];
            points[s2_index_w(k, i, j)] =
                vec![quarter * ci, quarter * si, quarter * cj, quarter * sj, top];
            labels[s2_index_u(k, i, j)] = format!("u{i},{j}");
            labels[s2_index_v(k, i, j)] = format!("v{i},{j}");
            labels[s2_index_w(k, i, j)] = format!("w{i},{j}");
        }
    }
    let cloud = PointCloud::new(5, points)?.with_labels(labels)?;

    let graph = match proximity_graph(&cloud, &params.policy) {
        Ok(g) => g,
        Err(Error::AmbiguousDistance { u, v, dist, .. }) => {
            return Err(Error::MarginViolation {
                u,
                v,
                detail: format!("pair lands in the ambiguity band at distance {dist}"),
            })
        }
        Err(e) => return Err(e),
    };
    let expected = s2_expected_edges(k);
    let actual: BTreeSet<(u32, u32)> = graph.edges().into_iter().collect();
    if expected != actual {
        let missing: Vec<(u32, u32)> = expected.difference(&actual).copied().collect();
        let extra: Vec<(u32, u32)> = actual.difference(&expected).copied().collect();
        return Err(Error::EdgeSetMismatch {
            missing: missing.len(),
            extra: extra.len(),
            missing_sample: missing.into_iter().take(8).collect(),
            extra_sample: extra.into_iter().take(8).collect(),
        });
    }
    Ok(cloud)
}

// ---------------------------------------------------------------------------
// Even p: join of S^2 with an embedded odd construction

/// The even-p configuration: an S^2 part followed by the R^5 embedding of an
/// S^{p-3} part, with every cross distance verified to clear 1 by
/// `cross_margin`.
#[derive(Clone, Debug)]
pub struct EvenPConstruction {
    pub cloud: PointCloud,
    /// Number of leading points belonging to the S^2 part.
    pub s2_len: usize,
    pub s2_k: usize,
    pub odd_k: usize,
    pub odd_r: usize,
    pub max_cross_dist: f64,
}

pub const EVEN_P_CROSS_MARGIN: f64 = 0.02;

pub fn construct_even_p(n: usize, p: usize, params: &ConstructionParams) -> Result<EvenPConstruction> {
    if p < 4 || !p.is_multiple_of(2) {
        return Err(Error::PreconditionUnmet(format!("construct_even_p needs even p >= 4; got {p}")));
    }
    let n1 = n / 2;
    let n2 = n - n1;
    let k = (1..).take_while(|&k| 3 * k * k <= n1).last().ok_or_else(|| {
        Error::PreconditionUnmet(format!("floor(n/2) = {n1} is too small for the S^2 part"))
    })?;
    if k < 2 {
        return Err(Error::PreconditionUnmet(format!(
            "floor(n/2) = {n1} gives k = {k} < 2 for the S^2 part; need n >= 24"
        )));
    }
    let odd_k = (p - 2) / 2;
    let (odd_r, _, _) = s2km1_resolved_params(n2, odd_k, params)?;
    let s2_cloud = construct_s2(k, params)?;
    let odd_cloud = construct_s2km1(n2, odd_k, params)?;
    let embedded = embed_plane_in_r5(&odd_cloud)?;
    let cloud = s2_cloud.union(&embedded)?;
    let s2_len = s2_cloud.len();

    let mut max_cross: f64 = 0.0;
    for a in 0..s2_len {
        for b in s2_len..cloud.len() {
            let d = cloud.dist(a, b);
            max_cross = max_cross.max(d);
            if d > 1.0 - EVEN_P_CROSS_MARGIN {
                return Err(Error::MarginViolation {
                    u: a as u32,
                    v: b as u32,
                    detail: format!("cross distance {d} exceeds 1 - {EVEN_P_CROSS_MARGIN}"),
                });
            }
        }
    }
    Ok(EvenPConstruction { cloud, s2_len, s2_k: k, odd_k, odd_r, max_cross_dist: max_cross })
}

// ---------------------------------------------------------------------------
// AP3-free sets and the Ruzsa-Szemeredi matching family

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ap3Method {
    Greedy,
    Behrend,
}

/// Returns the witnessing progression (x, y, z) with x + z = 2y if one
/// exists.
pub fn find_ap3(set: &[u64]) -> Option<(u64, u64, u64)> {
    let members: BTreeSet<u64> = set.iter().copied().collect();
    for (i, &x) in set.iter().enumerate() {
        for &z in &set[i + 1..] {
            if (x + z) % 2 == 0 {
                let y = (x + z) / 2;
                if y != x && members.contains(&y) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// A subset of [0, N) with no 3-term arithmetic progression. `Greedy` is the
/// lexicographic greedy set; `Behrend` is the sphere-shell digit
/// construction. The output is brute-force verified for N <= 10^4.
pub fn ap3_free_set(n: u64, method: Ap3Method) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let set = match method {
        Ap3Method::Greedy => greedy_ap3(n),
        Ap3Method::Behrend => behrend_ap3(n),
    };
    if n <= 10_000 {
        debug_assert!(find_ap3(&set).is_none());
        if find_ap3(&set).is_some() {
            // The generators are AP3-free by construction; reaching this
            // means a bug, so fail loudly rather than emit a bad set.
            panic!("generated set contains a 3-term progression");
        }
    }
    set
}

fn greedy_ap3(n: u64) -> Vec<u64> {
    let mut in_set = vec![false; n as usize];
    let mut set: Vec<u64> = Vec::new();
    // Candidates arrive in ascending order, so x can only complete a
    // progression as its largest element: some y in the set is the midpoint
    // of (2y - x, y, x).
    'next: for x in 0..n {
        for &y in set.iter().rev() {
            if 2 * y < x {
                break;
            }
            if in_set[(2 * y - x) as usize] && 2 * y - x != y {
                continue 'next;
            }
        }
        in_set[x as usize] = true;
        set.push(x);
    }
    set
}

fn behrend_ap3(n: u64) -> Vec<u64> {
    if n <= 3 {
        return (0..n).collect();
    }
    let mut best: Vec<u64> = vec![0];
    let max_m = ((n as f64).ln().sqrt().ceil() as u32 + 1).max(2);
    for m in 1..=max_m {
        let d = (n as f64).powf(1.0 / m as f64).ceil() as u64 + 1;
        let q = d.div_ceil(2).max(1);
        // Enumerate digit vectors in [0, q)^m with value < n, bucketing by
        // the squared norm of the digit vector; no-carry addition makes each
        // shell progression-free.
        let mut shells: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut digits = vec![0u64; m as usize];
        loop {
            let mut value = 0u64;
            for &x in digits.iter().rev() {
                value = value.saturating_mul(d).saturating_add(x);
            }
            if value < n {
                let norm: u64 = digits.iter().map(|&x| x * x).sum();
                shells.entry(norm).or_default().push(value);
            }
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
        if let Some(shell) = shells.values().max_by_key(|s| s.len()) {
            if shell.len() > best.len() {
                best = shell.clone();
            }
        }
    }
    best.sort_unstable();
    best
}

/// A bipartite graph with parts [0, N) and [0, 2N) plus the disjoint induced
/// matchings extracted from an AP3-free set: edges (x, x+a), matchings
/// M_z = {(z-2a, z-a)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFamily {
    pub u_size: usize,
    pub v_size: usize,
    pub edges: Vec<(u32, u32)>,
    pub matchings: Vec<Vec<(u32, u32)>>,
}

impl MatchingFamily {
    pub fn total_matched_edges(&self) -> usize {
        self.matchings.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&(u, v)).is_ok()
    }
}

/// Builds the integer Ruzsa-Szemeredi layout for an AP3-free set A in [0, N):
/// U = [0, N), V = [0, 2N), edges {(x, x+a)}, and matchings indexed by
/// z in [0, 3N). Matchings are structurally verified to be disjoint and
/// induced; inducedness failing means the input set was not AP3-free.
pub fn rs_matching_family(a: &[u64], n: u64) -> Result<MatchingFamily> {
    if n == 0 {
        return Err(Error::PreconditionUnmet("N must be positive".into()));
    }
    let set: Vec<u64> = {
        let s: BTreeSet<u64> = a.iter().copied().collect();
        if s.len() != a.len() {
            return Err(Error::InvalidInput("AP3 set has repeated elements".into()));
        }
        s.into_iter().collect()
    };
    if set.iter().any(|&x| x >= n) {
        return Err(Error::InvalidInput("AP3 set must lie in [0, N)".into()));
    }
    if let Some((x, y, z)) = find_ap3(&set) {
        return Err(Error::NotAp3Free(x, y, z));
    }
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(set.len() * n as usize);
    for x in 0..n {
        for &aa in &set {
            edges.push((x as u32, (x + aa) as u32));
        }
    }
    edges.sort_unstable();
    let mut matchings: Vec<Vec<(u32, u32)>> = Vec::with_capacity(3 * n as usize);
    for z in 0..3 * n {
        let mut m = Vec::new();
        for &aa in &set {
            if z >= 2 * aa {
                let u = z - 2 * aa;
                let v = z - aa;
                if u < n && v < 2 * n {
                    m.push((u as u32, v as u32));
                }
            }
        }
        m.sort_unstable();
        matchings.push(m);
    }
    let family = MatchingFamily { u_size: n as usize, v_size: 2 * n as usize, edges, matchings };
    verify_matching_family(&family, &set, n)?;
    Ok(family)
}

fn verify_matching_family(family: &MatchingFamily, set: &[u64], n: u64) -> Result<()> {
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut total = 0usize;
    for m in &family.matchings {
        let mut us: BTreeSet<u32> = BTreeSet::new();
        let mut vs: BTreeSet<u32> = BTreeSet::new();
        for &(u, v) in m {
            if !seen.insert((u, v)) {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) lies in two matchings")));
            }
            if !us.insert(u) || !vs.insert(v) {
                return Err(Error::InvalidInput("matching repeats an endpoint".into()));
            }
            total += 1;
        }
        for &(u, v) in m {
            for &(u2, v2) in m {
                if (u, v) != (u2, v2) && (family.has_edge(u, v2) || family.has_edge(u2, v)) {
                    // A cross edge between two matching edges completes a
                    // 3-term progression in the source set.
                    return Err(Error::NotAp3Free(u as u64, v as u64, v2 as u64));
                }
            }
        }
    }
    if total != set.len() * n as usize {
        return Err(Error::InvalidInput(format!(
            "matchings cover {total} edges, expected N*|A| = {}",
            set.len() * n as usize
        )));
    }
    Ok(())
}

pub fn write_matching_family_json<W: Write>(family: &MatchingFamily, writer: W) -> Result<()> {
    #[derive(Serialize)]
    struct FamilyJson<'a> {
        version: u32,
        #[serde(rename = "U")]
        u: usize,
        #[serde(rename = "V")]
        v: usize,
        edges: &'a [(u32, u32)],
        matchings: &'a [Vec<(u32, u32)>],
    }
    let data = FamilyJson {
        version: 1,
        u: family.u_size,
        v: family.v_size,
        edges: &family.edges,
        matchings: &family.matchings,
    };
    serde_json::to_writer(writer, &data)?;
    Ok(())
}

pub fn read_matching_family_json<R: Read>(reader: R) -> Result<MatchingFamily> {
    #[derive(Deserialize)]
    struct FamilyJson {
        #[serde(rename = "U")]
        u: usize,
        #[serde(rename = "V")]
        v: usize,
        edges: Vec<(u32, u32)>,
        matchings: Vec<Vec<(u32, u32)>>,
    }
    let data: FamilyJson = serde_json::from_reader(reader)?;
    let mut edges = data.edges;
    edges.sort_unstable();
    Ok(MatchingFamily { u_size: data.u, v_size: data.v, edges, matchings: data.matchings })
}

// ---------------------------------------------------------------------------
// The quasi-Rips lower-bound complex of the matching family

/// The flag complex Gamma on U' ⊔ V' ⊔ N (three complete parts, bipartite
/// edges from the family, each matching vertex adjacent to its endpoints and
/// to the other matching vertices) together with Gamma', the complex with
/// every N-u-v face deleted. Both are what the lower-bound count
/// `beta_2(Gamma) >= matched_edges - beta_1(Gamma')` is evaluated on.
#[derive(Clone, Debug)]
pub struct QuasiRipsLowerBound {
    pub complex: Complex,
    pub gamma_prime: Complex,
    pub kept_matchings: Vec<usize>,
    pub matched_edges: usize,
    pub u_vertices: Vec<u32>,
    pub v_vertices: Vec<u32>,
    pub note: String,
}

pub fn quasi_rips_from_matchings(
    family: &MatchingFamily,
    cap_third: usize,
    dim_cap: usize,
) -> Result<QuasiRipsLowerBound> {
    if cap_third == 0 {
        return Err(Error::CapExceeded("cap_third must be positive".into()));
    }
    // Keep the cap_third largest nonempty matchings (ties by index).
    let mut order: Vec<usize> = (0..family.matchings.len())
        .filter(|&i| !family.matchings[i].is_empty())
        .collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(family.matchings[i].len()), i));
    order.truncate(cap_third);
    order.sort_unstable();
    let trimmed_matchings = order.len() < family.matchings.iter().filter(|m| !m.is_empty()).count();

    let pick_part = |part_size: usize, endpoint_counts: &BTreeMap<u32, usize>| -> Vec<u32> {
        if part_size <= cap_third {
            return (0..part_size as u32).collect();
        }
        let mut vertices: Vec<u32> = (0..part_size as u32).collect();
        vertices.sort_by_key(|v| (std::cmp::Reverse(endpoint_counts.get(v).copied().unwrap_or(0)), *v));
        vertices.truncate(cap_third);
        vertices.sort_unstable();
        vertices
    };

    // Count, per U vertex, the matchings it serves, then trim and restrict.
    let mut u_counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &i in &order {
        for &(u, _) in &family.matchings[i] {
            *u_counts.entry(u).or_insert(0) += 1;
        }
    }
    let u_vertices = pick_part(family.u_size, &u_counts);
    let u_keep: BTreeSet<u32> = u_vertices.iter().copied().collect();

    let mut v_counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &i in &order {
        for &(u, v) in &family.matchings[i] {
            if u_keep.contains(&u) {
                *v_counts.entry(v).or_insert(0) += 1;
            }
        }
    }
    let v_vertices = pick_part(family.v_size, &v_counts);
    let v_keep: BTreeSet<u32> = v_vertices.iter().copied().collect();

    let restricted: Vec<(usize, Vec<(u32, u32)>)> = order
        .iter()
        .map(|&i| {
            let edges: Vec<(u32, u32)> = family.matchings[i]
                .iter()
                .copied()
                .filter(|(u, v)| u_keep.contains(u) && v_keep.contains(v))
                .collect();
            (i, edges)
        })
        .collect();
    let matched_edges: usize = restricted.iter().map(|(_, m)| m.len()).sum();

    let a = u_vertices.len();
    let b = v_vertices.len();
    let t = restricted.len();
    let n = a + b + t;
    let u_local: BTreeMap<u32, usize> =
        u_vertices.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let v_local: BTreeMap<u32, usize> =
        v_vertices.iter().enumerate().map(|(i, &v)| (v, a + i)).collect();

    let mut graph = Graph::new(n);
    for x in 0..a {
        for y in (x + 1)..a {
            graph.add_edge(x, y);
        }
    }
    for x in 0..b {
        for y in (x + 1)..b {
            graph.add_edge(a + x, a + y);
        }
    }
    for x in 0..t {
        for y in (x + 1)..t {
            graph.add_edge(a + b + x, a + b + y);
        }
    }
    for &(u, v) in &family.edges {
        if let (Some(&lu), Some(&lv)) = (u_local.get(&u), v_local.get(&v)) {
            graph.add_edge(lu, lv);
        }
    }
    for (slot, (_, edges)) in restricted.iter().enumerate() {
        let nv = a + b + slot;
        for &(u, v) in edges {
            graph.add_edge(nv, u_local[&u]);
            graph.add_edge(nv, v_local[&v]);
        }
    }

    let complex = flag_skeleton(&graph, dim_cap)?;

    // Gamma': delete the N-u-v face of every matching edge. Each such face is
    // maximal (inducedness of the matchings), so the deletion preserves
    // downward closure; that is re-verified by the constructor.
    let mut deleted: BTreeSet<Vec<u32>> = BTreeSet::new();
    for (slot, (_, edges)) in restricted.iter().enumerate() {
        let nv = (a + b + slot) as u32;
        for &(u, v) in edges {
            let mut face = vec![u_local[&u] as u32, v_local[&v] as u32, nv];
            face.sort_unstable();
            if !complex.contains_face(&face) {
                return Err(Error::InvalidInput(format!(
                    "matching face {face:?} missing from the flag complex"
                )));
            }
            deleted.insert(face);
        }
    }
    if deleted.len() != matched_edges {
        return Err(Error::InvalidInput(
            "matching faces are not distinct; family verification should have caught this".into(),
        ));
    }
    let mut faces: Vec<Vec<Vec<u32>>> = Vec::with_capacity(dim_cap + 1);
    for p in 0..=dim_cap {
        if p == 2 {
            faces.push(
                complex
                    .faces(2)
                    .iter()
                    .filter(|f| !deleted.contains(*f))
                    .cloned()
                    .collect(),
            );
        } else {
            faces.push(complex.faces(p).to_vec());
        }
    }
    let gamma_prime = Complex::from_faces(n, dim_cap, faces)?;

    let note = format!(
        "three complete parts |U'|={a}, |V'|={b}, |N|={t}; {matched_edges} matched edges; \
         trimming applied: matchings={trimmed_matchings}, U={}, V={}; realizable as a quasi-Rips \
         complex for any alpha by clustering the parts inside a unit triangle",
        a < family.u_size,
        b < family.v_size,
    );
    Ok(QuasiRipsLowerBound {
        complex,
        gamma_prime,
        kept_matchings: order,
        matched_edges,
        u_vertices,
        v_vertices,
        note,
    })
}

/// A witness cloud realizing the lower-bound complex as a quasi-Rips complex
/// with the given alpha: the three parts cluster just inside the corners of a
/// unit triangle, every cross-part pair is optional, and the explicit policy
/// includes exactly the complex's cross edges.
pub fn quasi_rips_witness(
    bound: &QuasiRipsLowerBound,
    alpha: f64,
) -> Result<crate::complexes::QuasiRipsSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput("alpha must lie in (0, 1)".into()));
    }
    let a = bound.u_vertices.len();
    let b = bound.v_vertices.len();
    let t = bound.kept_matchings.len();
    let n = a + b + t;
    let corners = [[0.0, 0.0], [0.0, 1.0], [3f64.sqrt() / 2.0, 0.5]];
    let centroid = [
        (corners[0][0] + corners[1][0] + corners[2][0]) / 3.0,
        (corners[0][1] + corners[1][1] + corners[2][1]) / 3.0,
    ];
    let rho = alpha.min(1.0 - alpha) / 4.0;
    let part_of = |idx: usize| {
        if idx < a {
            (0, idx, a)
        } else if idx < a + b {
            (1, idx - a, b)
        } else {
            (2, idx - a - b, t)
        }
    };
    let mut points = Vec::with_capacity(n);
    for idx in 0..n {
        let (part, within, size) = part_of(idx);
        let c = corners[part];
        let dir = [centroid[0] - c[0], centroid[1] - c[1]];
        let norm = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
        let step = rho * (within + 1) as f64 / size as f64;
        points.push(vec![c[0] + dir[0] / norm * step, c[1] + dir[1] / norm * step]);
    }
    let cloud = PointCloud::new(2, points)?;
    let graph = bound.complex.skeleton_graph();
    let mut optional: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (x, y) in graph.edges() {
        if part_of(x as usize).0 != part_of(y as usize).0 {
            optional.insert((x, y));
        }
    }
    Ok(crate::complexes::QuasiRipsSpec {
        alpha,
        cloud,
        optional_edge_policy: crate::complexes::OptionalEdgePolicy::Explicit(optional),
    })
}

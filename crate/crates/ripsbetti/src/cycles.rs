//! H1 cycle bases: extraction from spanning-forest fundamental cycles,
//! normalization to simple chord-free representatives, and the epsilon-simple
//! refinement driven by the cube grid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{build_rips, Complex};
use crate::error::{Error, Result};
use crate::geometry::{cube_index, CubeIndex, PointCloud, ThresholdPolicy};
use crate::graph::Graph;
use crate::homology::{betti_numbers, boundary_matrix, FieldSpec, Reducer};

/// One H1 representative: a closed vertex sequence (the first vertex is not
/// repeated at the end) with its normalization flags. `epsilon_simple` is
/// populated only by the refinement pass, which is the only place a cube
/// grid exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRep {
    pub vertices: Vec<u32>,
    pub simple: bool,
    pub chord_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_simple: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CycleBasis {
    pub cycles: Vec<CycleRep>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// The 1-chain of a closed vertex sequence, as a sparse vector over the
/// complex's canonical edge order. Signs follow traversal direction so the
/// chain is a cycle over any field.
pub fn cycle_chain(complex: &Complex, cycle: &[u32], field: FieldSpec) -> Result<Vec<(u32, u32)>> {
    if cycle.len() < 3 {
        return Err(Error::InvalidBasis(format!("cycle {cycle:?} is shorter than 3")));
    }
    let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
    for t in 0..cycle.len() {
        let a = cycle[t];
        let b = cycle[(t + 1) % cycle.len()];
        if a == b {
            return Err(Error::InvalidBasis(format!("cycle {cycle:?} repeats vertex {a} consecutively")));
        }
        let edge = if a < b { vec![a, b] } else { vec![b, a] };
        let idx = complex
            .face_index(1, &edge)
            .ok_or_else(|| Error::InvalidBasis(format!("cycle edge {edge:?} is not in the complex")))?
            as u32;
        let coeff = if a < b { 1 } else { field.neg(1) };
        let entry = acc.entry(idx).or_insert(0);
        *entry = field.add(*entry, coeff);
    }
    Ok(acc.into_iter().filter(|&(_, c)| c != 0).collect())
}

/// Canonical form of a closed vertex sequence: the lexicographically
/// smallest among all rotations and the two directions.
fn canonical_cycle(cycle: &[u32]) -> Vec<u32> {
    let k = cycle.len();
    let mut best: Option<Vec<u32>> = None;
    for reversed in [false, true] {
        for r in 0..k {
            let cand: Vec<u32> = (0..k)
                .map(|i| {
                    let idx = if reversed { (r + k - i) % k } else { (r + i) % k };
                    cycle[idx]
                })
                .collect();
            if best.as_ref().is_none_or(|b| &cand < b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

fn is_simple(cycle: &[u32]) -> bool {
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// A chord is an edge between cyclically non-adjacent positions. Only
/// meaningful for simple cycles.
fn find_chord(cycle: &[u32], graph: &Graph) -> Option<(usize, usize)> {
    let k = cycle.len();
    for i in 0..k {
        for j in (i + 2)..k {
            if i == 0 && j == k - 1 {
                continue;
            }
            if graph.has_edge(cycle[i] as usize, cycle[j] as usize) {
                return Some((i, j));
            }
        }
    }
    None
}

fn is_chord_free(cycle: &[u32], graph: &Graph) -> bool {
    find_chord(cycle, graph).is_none()
}

/// First repeated-vertex pair (i, j) in scan order.
fn find_repeat(cycle: &[u32]) -> Option<(usize, usize)> {
    for i in 0..cycle.len() {
        for j in (i + 1)..cycle.len() {
            if cycle[i] == cycle[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Greedy basis selection: sorts the candidate pool by (length, vertex
/// sequence) and keeps each cycle whose class is independent of the chosen
/// ones modulo boundaries. This is the deterministic re-reduction step shared
/// by the normalization and refinement loops.
fn select_basis(
    complex: &Complex,
    pool: &[Vec<u32>],
    target_rank: usize,
    field: FieldSpec,
) -> Result<Vec<Vec<u32>>> {
    let mut pool: Vec<Vec<u32>> = pool.to_vec();
    pool.sort_unstable_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    pool.dedup();
    let boundary2 = boundary_matrix(complex, 2, field)?;
    let mut reducer = Reducer::new(complex.face_count(1), field);
    for col in &boundary2.columns {
        reducer.push(col.clone());
    }
    let mut chosen = Vec::new();
    for cycle in pool {
        if chosen.len() == target_rank {
            break;
        }
        let chain = cycle_chain(complex, &cycle, field)?;
        if reducer.push(chain) {
            chosen.push(cycle);
        }
    }
    if chosen.len() != target_rank {
        return Err(Error::InvalidBasis(format!(
            "candidate pool spans {} classes, expected {}",
            chosen.len(),
            target_rank
        )));
    }
    Ok(chosen)
}

/// Rank of the span of the given cycle classes in H1 (modulo boundaries).
pub fn h1_class_rank(complex: &Complex, cycles: &[Vec<u32>], field: FieldSpec) -> Result<usize> {
    let boundary2 = boundary_matrix(complex, 2, field)?;
    let mut reducer = Reducer::new(complex.face_count(1), field);
    for col in &boundary2.columns {
        reducer.push(col.clone());
    }
    let mut rank = 0;
    for cycle in cycles {
        if reducer.push(cycle_chain(complex, cycle, field)?) {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Checks that the basis cycles live in the complex, that their classes are
/// independent, and that they span H1.
pub fn validate_cycle_basis(complex: &Complex, basis: &CycleBasis, field: FieldSpec) -> Result<()> {
    let beta1 = betti_numbers(complex, 1, field)?.betti[1];
    let cycles: Vec<Vec<u32>> = basis.cycles.iter().map(|c| c.vertices.clone()).collect();
    let rank = h1_class_rank(complex, &cycles, field)?;
    if rank != cycles.len() {
        return Err(Error::InvalidBasis(format!(
            "classes have rank {rank}, expected {} independent cycles",
            cycles.len()
        )));
    }
    if rank != beta1 {
        return Err(Error::InvalidBasis(format!("classes span rank {rank}, H1 has dimension {beta1}")));
    }
    Ok(())
}

/// An H1 basis of simple, chord-free cycles.
///
/// Fundamental cycles of a spanning forest of the 1-skeleton are reduced to
/// an H1 basis by rank against `im ∂_2`, then rewritten: a repeated vertex
/// splits the cycle in two, a chord splits it along the chord, and after each
/// split the pool is re-reduced to a basis preferring shorter cycles, then
/// lexicographically smaller ones. Every rewrite strictly decreases total
/// cycle length, so the loop terminates.
pub fn h1_cycle_basis(complex: &Complex) -> Result<CycleBasis> {
    h1_cycle_basis_over(complex, FieldSpec::default())
}

pub fn h1_cycle_basis_over(complex: &Complex, field: FieldSpec) -> Result<CycleBasis> {
    if complex.dim_cap() < 2 {
        return Err(Error::PreconditionUnmet("h1_cycle_basis needs dim_cap >= 2".into()));
    }
    let beta1 = betti_numbers(complex, 1, field)?.betti[1];
    if beta1 == 0 {
        return Ok(CycleBasis::default());
    }
    let graph = complex.skeleton_graph();
    let fundamental = fundamental_cycles(&graph);
    let mut basis = select_basis(complex, &fundamental, beta1, field)?;

    loop {
        let offender = basis.iter().position(|c| !is_simple(c) || !is_chord_free(c, &graph));
        let Some(idx) = offender else { break };
        let cycle = basis[idx].clone();
        let pieces = if let Some((i, j)) = find_repeat(&cycle) {
            split_at_repeat(&cycle, i, j)
        } else {
            let (i, j) = find_chord(&cycle, &graph).expect("offender has a repeat or a chord");
            split_at_chord(&cycle, i, j)
        };
        let mut pool: Vec<Vec<u32>> = basis;
        pool.remove(idx);
        pool.extend(pieces);
        basis = select_basis(complex, &pool, beta1, field)?;
    }

    let cycles = basis
        .into_iter()
        .map(|vertices| {
            let chord_free = is_chord_free(&vertices, &graph);
            CycleRep { vertices, simple: true, chord_free, epsilon_simple: None }
        })
        .collect();
    Ok(CycleBasis { cycles })
}

/// Cycles closing each non-tree edge through a BFS spanning forest, in
/// canonical form.
fn fundamental_cycles(graph: &Graph) -> Vec<Vec<u32>> {
    let n = graph.n_vertices();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut tree = Graph::new(n);
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in graph.neighbors(u) {
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(u);
                    tree.add_edge(u, v);
                    queue.push_back(v);
                }
            }
        }
    }
    let depth = |mut v: usize| {
        let mut d = 0;
        while let Some(p) = parent[v] {
            v = p;
            d += 1;
        }
        d
    };
    let mut cycles = Vec::new();
    for (u, v) in graph.edges() {
        let (u, v) = (u as usize, v as usize);
        if tree.has_edge(u, v) {
            continue;
        }
        // Walk both endpoints up to their LCA.
        let (mut a, mut b) = (u, v);
        let (mut da, mut db) = (depth(a), depth(b));
        let mut left = vec![a];
        let mut right = vec![b];
        while da > db {
            a = parent[a].unwrap();
            left.push(a);
            da -= 1;
        }
        while db > da {
            b = parent[b].unwrap();
            right.push(b);
            db -= 1;
        }
        while a != b {
            a = parent[a].unwrap();
            b = parent[b].unwrap();
            left.push(a);
            right.push(b);
        }
        // left ends at the LCA; append the right path reversed, omitting it.
        right.pop();
        left.extend(right.into_iter().rev());
        if left.len() >= 3 {
            cycles.push(canonical_cycle(&left.iter().map(|&v| v as u32).collect::<Vec<_>>()));
        }
    }
    cycles.sort_unstable_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    cycles.dedup();
    cycles
}

fn split_at_repeat(cycle: &[u32], i: usize, j: usize) -> Vec<Vec<u32>> {
    let inner: Vec<u32> = cycle[i..j].to_vec();
    let mut outer: Vec<u32> = cycle[..i].to_vec();
    outer.extend_from_slice(&cycle[j..]);
    [inner, outer]
        .into_iter()
        .filter(|c| c.len() >= 3)
        .map(|c| canonical_cycle(&c))
        .collect()
}

fn split_at_chord(cycle: &[u32], i: usize, j: usize) -> Vec<Vec<u32>> {
    let inner: Vec<u32> = cycle[i..=j].to_vec();
    let mut outer: Vec<u32> = cycle[j..].to_vec();
    outer.extend_from_slice(&cycle[..=i]);
    [inner, outer]
        .into_iter()
        .filter(|c| c.len() >= 3)
        .map(|c| canonical_cycle(&c))
        .collect()
}

// ---------------------------------------------------------------------------
// Epsilon-simple refinement

/// Result of the refinement pass: the refined basis (with `epsilon_simple`
/// flags populated) and how many basis elements remain non-epsilon-simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineOutcome {
    pub basis: CycleBasis,
    pub non_epsilon_simple: usize,
}

fn epsilon_simple(cycle: &[u32], cubes: &[CubeIndex]) -> bool {
    if cycle.len() != 4 {
        return false;
    }
    (0..4).any(|r| {
        cubes[cycle[r] as usize] == cubes[cycle[(r + 1) % 4] as usize]
            && cubes[cycle[(r + 2) % 4] as usize] == cubes[cycle[(r + 3) % 4] as usize]
    })
}

/// Two cycles are near when, after an appropriate cyclic relabeling (rotation
/// and optionally reversal), corresponding vertices share a cube. Returns the
/// relabeled second cycle aligned to the first.
fn near_alignment(c1: &[u32], c2: &[u32], cubes: &[CubeIndex]) -> Option<Vec<u32>> {
    if c1.len() != c2.len() {
        return None;
    }
    let k = c1.len();
    for reversed in [false, true] {
        for r in 0..k {
            let aligned: Vec<u32> = (0..k)
                .map(|i| {
                    let idx = if reversed { (r + k - i % k) % k } else { (r + i) % k };
                    c2[idx]
                })
                .collect();
            if (0..k).all(|i| cubes[c1[i] as usize] == cubes[aligned[i] as usize]) {
                return Some(aligned);
            }
        }
    }
    None
}

/// Epsilon-simple refinement: while two basis cycles are near each other and
/// both fail to be epsilon-simple, the second is replaced by the ladder of
/// quadrilaterals between them and the pool is re-reduced to a basis. Each
/// pass removes at least one non-epsilon-simple element, so the loop
/// terminates; the count of survivors is reported directly (worst-case
/// bounds on it are astronomically loose).
pub fn refine_epsilon_simple(
    basis: &CycleBasis,
    cloud: &PointCloud,
    epsilon: f64,
) -> Result<RefineOutcome> {
    refine_epsilon_simple_over(basis, cloud, epsilon, FieldSpec::default())
}

pub fn refine_epsilon_simple_over(
    basis: &CycleBasis,
    cloud: &PointCloud,
    epsilon: f64,
    field: FieldSpec,
) -> Result<RefineOutcome> {
    let dim = cloud.dim();
    if !(epsilon > 0.0) || epsilon > (dim as f64).powf(-0.5) * (1.0 + 1e-12) {
        return Err(Error::PreconditionUnmet(format!(
            "epsilon must lie in (0, dim^-1/2]; got {epsilon} for dim {dim}"
        )));
    }
    let complex = build_rips(cloud, &ThresholdPolicy::default(), 2)?;
    validate_cycle_basis(&complex, basis, field)?;
    let cubes = cube_index(cloud, epsilon)?;
    let beta1 = basis.len();
    let graph = complex.skeleton_graph();

    let mut cycles: Vec<Vec<u32>> = basis.cycles.iter().map(|c| canonical_cycle(&c.vertices)).collect();
    loop {
        let mut rewrite = None;
        'outer: for i in 0..cycles.len() {
            if epsilon_simple(&cycles[i], &cubes) {
                continue;
            }
            for j in (i + 1)..cycles.len() {
                if epsilon_simple(&cycles[j], &cubes) {
                    continue;
                }
                if let Some(aligned) = near_alignment(&cycles[i], &cycles[j], &cubes) {
                    rewrite = Some((i, j, aligned));
                    break 'outer;
                }
            }
        }
        let Some((i, j, aligned)) = rewrite else { break };
        let base = cycles[i].clone();
        let mut pool = cycles.clone();
        pool.remove(j);
        let k = base.len();
        for t in 0..k {
            let quad = [
                aligned[t],
                aligned[(t + 1) % k],
                base[(t + 1) % k],
                base[t],
            ];
            let mut cleaned: Vec<u32> = Vec::with_capacity(4);
            for &v in &quad {
                if cleaned.last() != Some(&v) {
                    cleaned.push(v);
                }
            }
            while cleaned.len() > 1 && cleaned.first() == cleaned.last() {
                cleaned.pop();
            }
            if cleaned.len() < 3 {
                continue;
            }
            for t in 0..cleaned.len() {
                let (a, b) = (cleaned[t], cleaned[(t + 1) % cleaned.len()]);
                if !graph.has_edge(a as usize, b as usize) {
                    return Err(Error::InvalidBasis(format!(
                        "replacement quadrilateral {cleaned:?} uses missing edge ({a},{b}); \
                         the basis does not match the Rips complex of this cloud"
                    )));
                }
            }
            pool.push(canonical_cycle(&cleaned));
        }
        cycles = select_basis(&complex, &pool, beta1, field)?;
    }

    let reps: Vec<CycleRep> = cycles
        .into_iter()
        .map(|vertices| {
            let eps = epsilon_simple(&vertices, &cubes);
            CycleRep {
                simple: is_simple(&vertices),
                chord_free: is_chord_free(&vertices, &graph),
                epsilon_simple: Some(eps),
                vertices,
            }
        })
        .collect();
    let non_eps = reps.iter().filter(|c| c.epsilon_simple != Some(true)).count();
    Ok(RefineOutcome { basis: CycleBasis { cycles: reps }, non_epsilon_simple: non_eps })
}

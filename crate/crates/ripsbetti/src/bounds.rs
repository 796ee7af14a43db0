//! Property checkers for the structural lemmas, the packing-constant
//! estimator, and the scaling-experiment harness.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexes::{build_rips, link_of};
use crate::constructions::{
    ap3_free_set, construct_even_p, construct_s2, construct_s2km1, quasi_rips_from_matchings,
    rs_matching_family, Ap3Method, ConstructionParams,
};
use crate::error::{Error, Result};
use crate::geometry::{dist2, proximity_graph, PointCloud, ThresholdPolicy};
use crate::homology::{betti_numbers, FieldSpec};

// ---------------------------------------------------------------------------
// Link inequality (the Mayer-Vietoris bound through a vertex star)

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkInequalityReport {
    pub holds: bool,
    pub beta_full: usize,
    pub beta_minus_vertex: usize,
    pub beta_link: usize,
}

/// Checks `beta_p(R(S)) <= beta_p(R(S - v)) + beta_{p-1}(lk(v))` and returns
/// all three values.
pub fn check_link_inequality(
    cloud: &PointCloud,
    vertex: usize,
    p: usize,
    field: FieldSpec,
    policy: &ThresholdPolicy,
) -> Result<LinkInequalityReport> {
    if p == 0 {
        return Err(Error::PreconditionUnmet("link inequality needs p >= 1".into()));
    }
    if vertex >= cloud.len() {
        return Err(Error::UnknownVertex(vertex as u32));
    }
    let full = build_rips(cloud, policy, p + 1)?;
    let beta_full = betti_numbers(&full, p, field)?.betti[p];

    let rest: Vec<usize> = (0..cloud.len()).filter(|&i| i != vertex).collect();
    let minus = cloud.restrict(&rest)?;
    let beta_minus = if minus.is_empty() {
        0
    } else {
        betti_numbers(&build_rips(&minus, policy, p + 1)?, p, field)?.betti[p]
    };

    let link = link_of(&full, &[vertex as u32])?;
    // The link complex keeps only cap - 1 dimensions, which is exactly the
    // p-faces needed for beta_{p-1}.
    let beta_link = if link.n_vertices() == 0 {
        0
    } else {
        betti_numbers(&link, p - 1, field)?.betti[p - 1]
    };

    Ok(LinkInequalityReport {
        holds: beta_full <= beta_minus + beta_link,
        beta_full,
        beta_minus_vertex: beta_minus,
        beta_link,
    })
}

// ---------------------------------------------------------------------------
// Crossing lemma: two crossing edges in the plane force a cone

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn open_segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    // Collinear overlap on interiors counts as an intersection of the open
    // segments.
    if o1 == 0.0 && o2 == 0.0 && o3 == 0.0 && o4 == 0.0 {
        let (lo_ab, hi_ab) = span(a, b);
        let (lo_cd, hi_cd) = span(c, d);
        return lo_ab < hi_cd && lo_cd < hi_ab;
    }
    false
}

fn span(a: [f64; 2], b: [f64; 2]) -> (f64, f64) {
    let key_a = if a[0] != b[0] { a[0] } else { a[1] };
    let key_b = if a[0] != b[0] { b[0] } else { b[1] };
    (key_a.min(key_b), key_a.max(key_b))
}

/// Checks that the Rips complex of `{u1, v1, u2, v2}` is a cone, given that
/// `u1 v1` and `u2 v2` are edges whose open segments cross.
pub fn check_crossing_cone(
    u1: [f64; 2],
    v1: [f64; 2],
    u2: [f64; 2],
    v2: [f64; 2],
    policy: &ThresholdPolicy,
) -> Result<bool> {
    let t2 = policy.threshold * policy.threshold;
    if dist2(&u1, &v1) > t2 * (1.0 + policy.relative_tolerance)
        || dist2(&u2, &v2) > t2 * (1.0 + policy.relative_tolerance)
    {
        return Err(Error::PreconditionUnmet("u1v1 and u2v2 must both be edges".into()));
    }
    if !open_segments_intersect(u1, v1, u2, v2) {
        return Err(Error::PreconditionUnmet("the open segments do not intersect".into()));
    }
    let cloud = PointCloud::new(2, vec![u1.to_vec(), v1.to_vec(), u2.to_vec(), v2.to_vec()])?;
    let graph = proximity_graph(&cloud, policy)?;
    Ok((0..4).any(|v| graph.degree(v) == 3))
}

// ---------------------------------------------------------------------------
// Perpendicularity disjunction for two tight clusters at unit distance

#[derive(Clone, Debug, Serialize)]
pub struct PerpPairReport {
    pub v1: usize,
    pub v2: usize,
    pub monotone: bool,
    pub abs_dot: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerpReport {
    pub pairs: Vec<PerpPairReport>,
    pub flagged_pairs: usize,
}

/// For every pair in V, reports whether one of the cluster lemma's disjuncts
/// holds: distances to U are monotone between the two points, or the pair's
/// direction is nearly perpendicular to the inter-cluster axis. Pairs
/// violating monotonicity with |dot| above `alpha_threshold` are flagged.
pub fn check_perp_disjunction(
    u_cloud: &PointCloud,
    v_cloud: &PointCloud,
    eps: f64,
    alpha_threshold: f64,
) -> Result<PerpReport> {
    if u_cloud.dim() != v_cloud.dim() {
        return Err(Error::DimensionMismatch { expected: u_cloud.dim(), found: v_cloud.dim() });
    }
    if u_cloud.is_empty() || v_cloud.is_empty() {
        return Err(Error::PreconditionUnmet("both clusters must be nonempty".into()));
    }
    let p_u = centroid(u_cloud);
    let p_v = centroid(v_cloud);
    for (cloud, center, name) in [(u_cloud, &p_u, "U"), (v_cloud, &p_v, "V")] {
        for i in 0..cloud.len() {
            let d = dist2(cloud.point(i), center).sqrt();
            if d > eps {
                return Err(Error::ClusterTooLoose(format!(
                    "{name} point {i} is {d} from its centroid, beyond eps = {eps}"
                )));
            }
        }
    }
    let axis_len = dist2(&p_u, &p_v).sqrt();
    if (axis_len - 1.0).abs() > 4.0 * eps {
        return Err(Error::ClusterTooLoose(format!(
            "centroid distance {axis_len} is not 1 within 4*eps"
        )));
    }
    let w1: Vec<f64> = p_v.iter().zip(&p_u).map(|(a, b)| (a - b) / axis_len).collect();

    let mut pairs = Vec::new();
    for i in 0..v_cloud.len() {
        for j in (i + 1)..v_cloud.len() {
            let vi = v_cloud.point(i);
            let vj = v_cloud.point(j);
            let sep = dist2(vi, vj).sqrt();
            if sep == 0.0 {
                continue;
            }
            let w2: Vec<f64> = vj.iter().zip(vi).map(|(a, b)| (a - b) / sep).collect();
            let dot: f64 = w1.iter().zip(&w2).map(|(a, b)| a * b).sum();
            let mut le_all = true;
            let mut ge_all = true;
            for u in 0..u_cloud.len() {
                let di = dist2(vi, u_cloud.point(u));
                let dj = dist2(vj, u_cloud.point(u));
                if di > dj {
                    le_all = false;
                }
                if di < dj {
                    ge_all = false;
                }
            }
            let monotone = le_all || ge_all;
            let abs_dot = dot.abs();
            pairs.push(PerpPairReport {
                v1: i,
                v2: j,
                monotone,
                abs_dot,
                flagged: !monotone && abs_dot > alpha_threshold,
            });
        }
    }
    let flagged_pairs = pairs.iter().filter(|p| p.flagged).count();
    Ok(PerpReport { pairs, flagged_pairs })
}

fn centroid(cloud: &PointCloud) -> Vec<f64> {
    let mut c = vec![0.0; cloud.dim()];
    for p in cloud.points() {
        for (acc, x) in c.iter_mut().zip(p) {
            *acc += x;
        }
    }
    for acc in c.iter_mut() {
        *acc /= cloud.len() as f64;
    }
    c
}

// ---------------------------------------------------------------------------
// The K_{2,3}-avoidance edge bound

#[derive(Clone, Debug, Serialize)]
pub struct K23Report {
    pub condition_holds: bool,
    pub edge_count: usize,
    pub bound: f64,
    pub ratio: f64,
}

/// Brute-force check that no two U-vertices share three common neighbors,
/// plus the edge count against the n^{3/2} reference scale (the constant is
/// not pinned; the ratio is reported for comparison).
pub fn check_k23_condition(u_size: usize, v_size: usize, edges: &[(u32, u32)]) -> Result<K23Report> {
    let mut adj: Vec<Vec<bool>> = vec![vec![false; v_size]; u_size];
    for &(u, v) in edges {
        if u as usize >= u_size || v as usize >= v_size {
            return Err(Error::UnknownVertex(u.max(v)));
        }
        if adj[u as usize][v as usize] {
            return Err(Error::InvalidInput(format!("duplicate edge ({u},{v})")));
        }
        adj[u as usize][v as usize] = true;
    }
    let mut holds = true;
    'outer: for a in 0..u_size {
        for b in (a + 1)..u_size {
            let common = (0..v_size).filter(|&v| adj[a][v] && adj[b][v]).count();
            if common >= 3 {
                holds = false;
                break 'outer;
            }
        }
    }
    let n = u_size.max(v_size) as f64;
    let bound = n.powf(1.5);
    Ok(K23Report {
        condition_holds: holds,
        edge_count: edges.len(),
        bound,
        ratio: edges.len() as f64 / bound,
    })
}

// ---------------------------------------------------------------------------
// Packing-constant estimator

#[derive(Clone, Debug, Serialize)]
pub struct PackingEstimate {
    pub dim: usize,
    /// Lower estimate of the packing constant: |T| - 1 for the best verified
    /// witness T.
    pub c_lower: usize,
    pub witness: Vec<Vec<f64>>,
}

/// Verifies that the points sit in the unit ball with pairwise distances
/// strictly above 1.
pub fn verify_packing_witness(points: &[Vec<f64>]) -> bool {
    points.iter().all(|p| p.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12)
        && (0..points.len()).all(|i| {
            (i + 1..points.len()).all(|j| dist2(&points[i], &points[j]) > 1.0)
        })
}

/// Randomized repulsion search for a large subset of the unit ball with
/// pairwise distances above 1. Returns `|T| - 1` as a lower estimate of the
/// packing constant, together with the verified witness. The estimate is
/// monotone non-decreasing in the trial count for a fixed seed.
pub fn estimate_packing_constant(dim: usize, trials: usize, seed: u64) -> Result<PackingEstimate> {
    if dim == 0 {
        return Err(Error::PreconditionUnmet("dimension must be positive".into()));
    }
    // The cross-polytope vertices are always a valid witness, so the search
    // never reports worse than 2d points.
    let mut best: Vec<Vec<f64>> = (0..2 * dim)
        .map(|i| {
            let mut p = vec![0.0; dim];
            p[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
            p
        })
        .collect();
    debug_assert!(verify_packing_witness(&best));

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(trial as u64));
        let target = best.len() + 1;
        // Maximin ascent: spread `target` random points, repeatedly pushing
        // the closest pair apart and re-projecting into the ball.
        let mut pts: Vec<Vec<f64>> = (0..target).map(|_| random_in_ball(dim, &mut rng)).collect();
        let mut step = 0.25;
        for _ in 0..600 {
            let (i, j, d2min) = closest_pair(&pts);
            if d2min > 1.0 {
                break;
            }
            let d = d2min.sqrt().max(1e-9);
            for k in 0..dim {
                let push = (pts[i][k] - pts[j][k]) / d * step;
                pts[i][k] += push;
                pts[j][k] -= push;
            }
            project_into_ball(&mut pts[i]);
            project_into_ball(&mut pts[j]);
            step *= 0.995;
        }
        if pts.len() > best.len() && verify_packing_witness(&pts) {
            best = pts;
        }
    }
    Ok(PackingEstimate { dim, c_lower: best.len() - 1, witness: best })
}

fn random_in_ball(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return p;
        }
    }
}

fn closest_pair(pts: &[Vec<f64>]) -> (usize, usize, f64) {
    let mut bi = 0;
    let mut bj = 1;
    let mut bd = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = dist2(&pts[i], &pts[j]);
            if d < bd {
                bd = d;
                bi = i;
                bj = j;
            }
        }
    }
    (bi, bj, bd)
}

fn project_into_ball(p: &mut [f64]) {
    let norm2: f64 = p.iter().map(|x| x * x).sum();
    if norm2 > 1.0 {
        let norm = norm2.sqrt();
        for x in p.iter_mut() {
            *x /= norm;
        }
    }
}

// ---------------------------------------------------------------------------
// Scaling experiments

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    S2,
    S2km1,
    EvenP,
    QuasiRipsRs,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "s2" => Ok(Family::S2),
            "s2km1" => Ok(Family::S2km1),
            "even-p" | "even_p" => Ok(Family::EvenP),
            "quasi-rips-rs" | "quasi_rips_rs" => Ok(Family::QuasiRipsRs),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::S2 => "s2",
            Family::S2km1 => "s2km1",
            Family::EvenP => "even-p",
            Family::QuasiRipsRs => "quasi-rips-rs",
        }
    }
}

/// One lower-bound witness measurement. Records are reproducible given the
/// family, parameters, seed and field; wall time is measured but excluded
/// from the reproducibility contract.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub n: usize,
    pub p: usize,
    pub betti: usize,
    pub face_counts: Vec<usize>,
    pub wall_time: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    pub version: u32,
    pub family: String,
    pub p: usize,
    pub field: u32,
    pub seed: u64,
    /// Least-squares slope of log betti against log n over the points with
    /// n >= 12 and betti >= 1; None when fewer than two such points exist.
    pub exponent: Option<f64>,
    pub points_used: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub p: usize,
    pub field: FieldSpec,
    pub seed: u64,
    /// Copies parameter for the s2km1 family.
    pub k: usize,
    pub jobs: usize,
}

pub fn scaling_experiment(config: &ExperimentConfig) -> Result<(Vec<ExperimentRecord>, FitSummary)> {
    let run_one = |&n: &usize| -> Result<ExperimentRecord> {
        let start = std::time::Instant::now();
        let (betti, face_counts) = measure(config, n)?;
        Ok(ExperimentRecord {
            family: config.family.name().to_string(),
            n,
            p: config.p,
            betti,
            face_counts,
            wall_time: start.elapsed().as_secs_f64(),
            seed: config.seed,
        })
    };
    let records: Vec<ExperimentRecord> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            config.sizes.par_iter().map(run_one).collect::<Result<Vec<_>>>()
        })?
    } else {
        config.sizes.iter().map(run_one).collect::<Result<Vec<_>>>()?
    };

    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n >= 12 && r.betti >= 1)
        .map(|r| ((r.n as f64).ln(), (r.betti as f64).ln()))
        .collect();
    let exponent = ols_slope(&points);
    let summary = FitSummary {
        version: 1,
        family: config.family.name().to_string(),
        p: config.p,
        field: config.field.p(),
        seed: config.seed,
        exponent,
        points_used: points.len(),
    };
    Ok((records, summary))
}

fn measure(config: &ExperimentConfig, n: usize) -> Result<(usize, Vec<usize>)> {
    let params = ConstructionParams::default();
    let p = config.p;
    match config.family {
        Family::S2 => {
            let k = (1..)
                .take_while(|&k| 3 * k * k <= n)
                .last()
                .ok_or_else(|| Error::PreconditionUnmet(format!("n = {n} is too small for s2")))?;
            let cloud = construct_s2(k, &params)?;
            let complex = build_rips(&cloud, &params.policy, p + 1)?;
            Ok((betti_numbers(&complex, p, config.field)?.betti[p], complex.face_counts()))
        }
        Family::S2km1 => {
            let cloud = construct_s2km1(n, config.k, &params)?;
            let complex = build_rips(&cloud, &params.policy, p + 1)?;
            Ok((betti_numbers(&complex, p, config.field)?.betti[p], complex.face_counts()))
        }
        Family::EvenP => {
            let even = construct_even_p(n, p, &params)?;
            let complex = build_rips(&even.cloud, &params.policy, p + 1)?;
            Ok((betti_numbers(&complex, p, config.field)?.betti[p], complex.face_counts()))
        }
        Family::QuasiRipsRs => {
            let set = ap3_free_set(n as u64, Ap3Method::Greedy);
            let family = rs_matching_family(&set, n as u64)?;
            let bound = quasi_rips_from_matchings(&family, 3 * n, p + 1)?;
            let betti = betti_numbers(&bound.complex, p, config.field)?.betti[p];
            if p == 2 {
                // Self-check of the lower-bound count against the
                // face-deleted complex; a violation is an implementation bug.
                let beta1_prime = betti_numbers(&bound.gamma_prime, 2, config.field)?.betti[1];
                let rhs = bound.matched_edges as i64 - beta1_prime as i64;
                if (betti as i64) < rhs {
                    return Err(Error::InvalidInput(format!(
                        "quasi-rips lower bound violated at N={n}: beta2={betti} < {rhs}"
                    )));
                }
            }
            Ok((betti, bound.complex.face_counts()))
        }
    }
}

fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// Streams records as CSV with the frozen column set. Wall times are written
/// only when `with_timings` is set, so default output is byte-reproducible.
pub fn write_records_csv<W: Write>(
    records: &[ExperimentRecord],
    with_timings: bool,
    mut writer: W,
) -> Result<()> {
    writeln!(writer, "family,n,p,betti,f0,f1,f2,f3,wall_time,seed")?;
    for r in records {
        let f = |i: usize| r.face_counts.get(i).copied().unwrap_or(0);
        let wall = if with_timings { r.wall_time } else { 0.0 };
        writeln!(
            writer,
            "{},{},{},{},{},{},{},{},{:.6},{}",
            r.family,
            r.n,
            r.p,
            r.betti,
            f(0),
            f(1),
            f(2),
            f(3),
            wall,
            r.seed
        )?;
    }
    Ok(())
}

pub fn write_records_json<W: Write>(
    records: &[ExperimentRecord],
    summary: &FitSummary,
    with_timings: bool,
    writer: W,
) -> Result<()> {
    #[derive(Serialize)]
    struct Output<'a> {
        version: u32,
        records: Vec<ExperimentRecord>,
        summary: &'a FitSummary,
    }
    let records: Vec<ExperimentRecord> = records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if !with_timings {
                r.wall_time = 0.0;
            }
            r
        })
        .collect();
    serde_json::to_writer(writer, &Output { version: 1, records, summary })?;
    Ok(())
}

/// Seeded random gadgets and clouds shared by the verification campaigns.
pub mod campaign {
    use super::*;
    use crate::constructions::{two_clique_gadget, TwoCliqueGadget};

    pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x2545f4914f6cdd1d))
    }

    /// A random two-clique gadget with parts of size up to `max_part`. Cross
    /// densities lean sparse, where the residual graph splits into several
    /// components and the bipartite lemma has something to say.
    pub fn random_gadget(seed: u64, index: u64, max_part: usize) -> TwoCliqueGadget {
        let mut rng = rng_for(seed, index);
        let u = rng.gen_range(1..=max_part);
        let v = rng.gen_range(1..=max_part);
        let density: f64 = rng.gen_range(0.03..0.55);
        let mut cross = Vec::new();
        for a in 0..u as u32 {
            for b in 0..v as u32 {
                if rng.gen::<f64>() < density {
                    cross.push((a, b));
                }
            }
        }
        two_clique_gadget(u, v, &cross).expect("gadget construction is total")
    }

    /// A random cloud in `[0, side]^dim`, resampled (deterministically) until
    /// no pair lands in the ambiguity band.
    pub fn random_cloud(seed: u64, index: u64, dim: usize, n: usize, side: f64) -> PointCloud {
        for attempt in 0..64 {
            let mut rng = rng_for(seed.wrapping_add(attempt * 0x9e37), index);
            let points: Vec<Vec<f64>> =
                (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..side)).collect()).collect();
            let cloud = PointCloud::new(dim, points).expect("finite coordinates");
            if proximity_graph(&cloud, &ThresholdPolicy::default()).is_ok() {
                return cloud;
            }
        }
        unreachable!("64 resamples all hit the ambiguity band");
    }

    /// A random pair of clusters with every cross distance verified <= 0.99:
    /// each side is either a tight blob (a simplex), a split blob (two
    /// components), or a sparse ring (a circle), drawn in two orthogonal
    /// planes of R^4 so both sides can be topologically nontrivial at once.
    pub fn random_cluster_pair(seed: u64, index: u64) -> (PointCloud, PointCloud) {
        let mut rng = rng_for(seed, index);
        let shape_a = rng.gen_range(0..3u8);
        let shape_b = rng.gen_range(0..3u8);
        let a = cluster(shape_a, [0, 1], &mut rng);
        let b = cluster(shape_b, [2, 3], &mut rng);
        let a = PointCloud::new(4, a).unwrap();
        let b = PointCloud::new(4, b).unwrap();
        for pa in a.points() {
            for pb in b.points() {
                debug_assert!(dist2(pa, pb).sqrt() <= 0.99);
            }
        }
        (a, b)
    }

    fn cluster(shape: u8, axes: [usize; 2], rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let jitter = 5e-3;
        let mut points = Vec::new();
        match shape {
            // Tight blob: a simplex.
            0 => {
                let m = rng.gen_range(1..=4);
                for _ in 0..m {
                    let mut p = vec![0.0; 4];
                    p[axes[0]] = rng.gen_range(-0.05..0.05);
                    p[axes[1]] = rng.gen_range(-0.05..0.05);
                    points.push(p);
                }
            }
            // Two blobs slightly more than 1 apart: one reduced H0 class.
            1 => {
                let m = rng.gen_range(1..=2);
                let half = rng.gen_range(0.55..0.65);
                for sign in [-1.0, 1.0] {
                    for _ in 0..m {
                        let mut p = vec![0.0; 4];
                        p[axes[0]] = sign * half + rng.gen_range(-jitter..jitter);
                        p[axes[1]] = rng.gen_range(-jitter..jitter);
                        points.push(p);
                    }
                }
            }
            // Ring whose near-antipodal pairs exceed 1: a circle.
            _ => {
                let m = rng.gen_range(6..=8);
                let radius = rng.gen_range(0.6..0.68);
                for i in 0..m {
                    let angle = std::f64::consts::TAU * i as f64 / m as f64;
                    let mut p = vec![0.0; 4];
                    p[axes[0]] = radius * angle.cos() + rng.gen_range(-jitter..jitter);
                    p[axes[1]] = radius * angle.sin() + rng.gen_range(-jitter..jitter);
                    points.push(p);
                }
            }
        }
        points
    }

    /// Deterministic variant of `random_cluster_pair` that retries until the
    /// whole union classifies cleanly under the default policy.
    pub fn random_join_instance(seed: u64, index: u64) -> (PointCloud, PointCloud, PointCloud) {
        for attempt in 0..64 {
            let (a, b) = random_cluster_pair(seed.wrapping_add(attempt * 0x51ed), index);
            let union = a.union(&b).unwrap();
            let ok = proximity_graph(&union, &ThresholdPolicy::default()).is_ok();
            let cross_ok = a
                .points()
                .iter()
                .all(|pa| b.points().iter().all(|pb| dist2(pa, pb).sqrt() <= 0.999));
            if ok && cross_ok {
                return (a, b, union);
            }
        }
        unreachable!("64 resamples all failed validation");
    }
}

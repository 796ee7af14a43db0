//! Point clouds, robust threshold classification, the epsilon-cube grid, and
//! the plane isometries used by the extremal constructions.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A finite list of points in `R^dim`. Point order is stable and indices are
/// the canonical vertex identifiers everywhere downstream.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    /// Builds a cloud, checking that every point has exactly `dim` finite
    /// coordinates.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("point dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Self { dim, points, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidInput("one label per point required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn dist2(&self, i: usize, j: usize) -> f64 {
        dist2(&self.points[i], &self.points[j])
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist2(i, j).sqrt()
    }

    /// The subcloud on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut points = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::UnknownVertex(i as u32));
            }
            points.push(self.points[i].clone());
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| indices.iter().map(|&i| ls[i].clone()).collect());
        Ok(Self { dim: self.dim, points, labels })
    }

    /// Concatenates two clouds of equal dimension; `other`'s points follow
    /// `self`'s and keep their relative order.
    pub fn union(&self, other: &PointCloud) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => {
                let mut ls = a.clone();
                ls.extend(b.iter().cloned());
                Some(ls)
            }
            _ => None,
        };
        Ok(Self { dim: self.dim, points, labels })
    }
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Numerical realization of "diameter at most 1": edges are decided on
/// squared distances with a relative tolerance, and any pair falling in the
/// ambiguity band just above the acceptance region aborts the build. The band
/// is a validation device, not a third edge state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy {
    pub threshold: f64,
    pub relative_tolerance: f64,
    pub ambiguity_band: f64,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        Self { threshold: 1.0, relative_tolerance: 1e-9, ambiguity_band: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Edge,
    NonEdge,
    Ambiguous,
}

impl ThresholdPolicy {
    pub fn with_threshold(threshold: f64) -> Self {
        Self { threshold, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0) {
            return Err(Error::InvalidInput("threshold must be positive".into()));
        }
        if self.relative_tolerance < 0.0 || self.ambiguity_band < 0.0 {
            return Err(Error::InvalidInput("tolerances must be non-negative".into()));
        }
        if self.relative_tolerance >= self.ambiguity_band {
            return Err(Error::InvalidInput(
                "relative_tolerance must be smaller than ambiguity_band".into(),
            ));
        }
        Ok(())
    }

    /// Classifies a squared distance against the squared threshold.
    ///
    /// Accepts `d2 <= t2*(1+tol)` as an edge (so pairs designed to sit at
    /// distance exactly `threshold` survive rotation rounding) and rejects
    /// `d2 >= t2*(1+band)`; the open sliver in between is ambiguous.
    pub fn classify2(&self, d2: f64) -> PairClass {
        let t2 = self.threshold * self.threshold;
        if d2 <= t2 * (1.0 + self.relative_tolerance) {
            PairClass::Edge
        } else if d2 < t2 * (1.0 + self.ambiguity_band) {
            PairClass::Ambiguous
        } else {
            PairClass::NonEdge
        }
    }
}

/// The proximity graph on cloud indices: edge `{u,v}` iff
/// `dist(u,v)^2 <= threshold^2 * (1 + relative_tolerance)`.
///
/// Fails with `AmbiguousDistance` if any pair lands in the policy's ambiguity
/// band, which signals that the input is numerically unsafe to classify.
pub fn proximity_graph(cloud: &PointCloud, policy: &ThresholdPolicy) -> Result<Graph> {
    policy.validate()?;
    if cloud.is_empty() {
        return Err(Error::PreconditionUnmet("proximity_graph needs a nonempty cloud".into()));
    }
    let n = cloud.len();
    let mut graph = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            match policy.classify2(cloud.dist2(u, v)) {
                PairClass::Edge => graph.add_edge(u, v),
                PairClass::NonEdge => {}
                PairClass::Ambiguous => {
                    return Err(Error::AmbiguousDistance {
                        u: u as u32,
                        v: v as u32,
                        dist: cloud.dist(u, v),
                        threshold: policy.threshold,
                    })
                }
            }
        }
    }
    Ok(graph)
}

/// Index of a half-open epsilon-cube on the grid anchored at the origin:
/// point `p` lies in the cube with `coords[i] = floor(p[i]/epsilon)`. The
/// grid side is part of the identity, so indices from different grids never
/// compare equal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubeIndex {
    pub coords: Vec<i64>,
    pub epsilon: f64,
}

impl PartialEq for CubeIndex {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.epsilon.to_bits() == other.epsilon.to_bits()
    }
}

impl Eq for CubeIndex {}

impl std::hash::Hash for CubeIndex {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
        self.epsilon.to_bits().hash(state);
    }
}

impl PartialOrd for CubeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CubeIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.coords, self.epsilon.to_bits()).cmp(&(&other.coords, other.epsilon.to_bits()))
    }
}

impl fmt::Display for CubeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.coords, self.epsilon)
    }
}

/// Maps every point of the cloud to its epsilon-cube. For
/// `epsilon <= dim^(-1/2)` any two points sharing a cube are at distance at
/// most 1.
pub fn cube_index(cloud: &PointCloud, epsilon: f64) -> Result<Vec<CubeIndex>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    Ok(cloud
        .points()
        .iter()
        .map(|p| CubeIndex {
            coords: p.iter().map(|&c| (c / epsilon).floor() as i64).collect(),
            epsilon,
        })
        .collect())
}

/// Rotates a planar cloud counterclockwise about the origin.
pub fn apply_plane_rotation(cloud: &PointCloud, angle: f64) -> Result<PointCloud> {
    if cloud.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: cloud.dim() });
    }
    let (s, c) = angle.sin_cos();
    let points = cloud
        .points()
        .iter()
        .map(|p| vec![c * p[0] - s * p[1], s * p[0] + c * p[1]])
        .collect();
    let mut out = PointCloud::new(2, points)?;
    out.labels = cloud.labels.clone();
    Ok(out)
}

/// The isometry `(x, y) -> (sqrt(2)/4, x, sqrt(2)/4, y, sqrt(3)/6)` embedding
/// the plane into R^5; pairwise distances are preserved exactly up to
/// rounding.
pub fn embed_plane_in_r5(cloud: &PointCloud) -> Result<PointCloud> {
    if cloud.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: cloud.dim() });
    }
    let a = 2f64.sqrt() / 4.0;
    let b = 3f64.sqrt() / 6.0;
    let points = cloud.points().iter().map(|p| vec![a, p[0], a, p[1], b]).collect();
    let mut out = PointCloud::new(5, points)?;
    out.labels = cloud.labels.clone();
    Ok(out)
}

// ---------------------------------------------------------------------------
// File formats: CSV (one point per row, `dim` numeric columns, optional
// header) and JSON {"dim": d, "points": [[...], ...]}.

#[derive(Serialize, Deserialize)]
struct CloudJson {
    dim: usize,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

pub fn read_cloud_csv<R: Read>(reader: R) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim = None;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(coords) => {
                let d = *dim.get_or_insert(coords.len());
                if coords.len() != d {
                    return Err(Error::InvalidInput(format!(
                        "row {} has {} columns, expected {}",
                        line + 1,
                        coords.len(),
                        d
                    )));
                }
                rows.push(coords);
            }
            Err(_) if line == 0 && rows.is_empty() => {
                // Non-numeric first row is treated as a header.
            }
            Err(e) => {
                return Err(Error::InvalidInput(format!("row {}: {}", line + 1, e)));
            }
        }
    }
    let dim = dim.ok_or_else(|| Error::InvalidInput("no data rows in CSV".into()))?;
    PointCloud::new(dim, rows)
}

pub fn write_cloud_csv<W: Write>(cloud: &PointCloud, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for p in cloud.points() {
        wtr.write_record(p.iter().map(|c| format!("{c:.17}")))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_cloud_json<R: Read>(reader: R) -> Result<PointCloud> {
    let data: CloudJson = serde_json::from_reader(reader)?;
    let cloud = PointCloud::new(data.dim, data.points)?;
    match data.labels {
        Some(ls) => cloud.with_labels(ls),
        None => Ok(cloud),
    }
}

pub fn write_cloud_json<W: Write>(cloud: &PointCloud, writer: W) -> Result<()> {
    let data = CloudJson {
        dim: cloud.dim(),
        points: cloud.points().to_vec(),
        labels: cloud.labels().map(|ls| ls.to_vec()),
    };
    serde_json::to_writer(writer, &data)?;
    Ok(())
}

/// Reads a cloud from a path, dispatching on the `.json` extension and
/// falling back to CSV otherwise.
pub fn read_cloud_path(path: &Path) -> Result<PointCloud> {
    let file = std::fs::File::open(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        read_cloud_json(file)
    } else {
        read_cloud_csv(file)
    }
}

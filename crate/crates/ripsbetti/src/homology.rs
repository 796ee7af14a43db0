//! Reduced simplicial homology over GF(p): boundary matrices, Betti numbers,
//! Euler-Poincare consistency, and inclusion-induced image dimensions.

use serde::{Deserialize, Serialize};

use crate::complexes::Complex;
use crate::error::{Error, Result};

/// A prime field GF(p), p <= 2^31. Defaults to GF(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self { p: 2 }
    }
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if p > 1 << 31 {
            return Err(Error::InvalidInput(format!("{p} exceeds the 2^31 field size limit")));
        }
        if !is_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.p - b) as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        // Fermat: a^(p-2) mod p.
        debug_assert!(a != 0);
        let mut base = a as u64;
        let mut exp = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as u32
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A sparse vector over GF(p): `(index, coefficient)` pairs with strictly
/// increasing indices and coefficients in `[1, p-1]`.
pub type SparseVec = Vec<(u32, u32)>;

/// A sparse matrix over GF(p) in column-major form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseColumnMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub field: FieldSpec,
    pub columns: Vec<SparseVec>,
}

impl SparseColumnMatrix {
    pub fn zero(n_rows: usize, n_cols: usize, field: FieldSpec) -> Self {
        Self { n_rows, n_cols, field, columns: vec![Vec::new(); n_cols] }
    }

    pub fn rank(&self) -> usize {
        let mut reducer = Reducer::new(self.n_rows, self.field);
        for col in &self.columns {
            reducer.push(col.clone());
        }
        reducer.rank()
    }
}

/// `dst += factor * src` over GF(p), merging sorted sparse columns.
fn add_scaled(dst: &mut SparseVec, src: &[(u32, u32)], factor: u32, field: &FieldSpec) {
    if factor == 0 {
        return;
    }
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i]);
            i += 1;
        } else if take_src {
            let c = field.mul(src[j].1, factor);
            if c != 0 {
                out.push((src[j].0, c));
            }
            j += 1;
        } else {
            let c = field.add(dst[i].1, field.mul(src[j].1, factor));
            if c != 0 {
                out.push((dst[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    *dst = out;
}

/// Incremental column reducer with lowest-one elimination: columns are pushed
/// in order, reduced against stored pivot columns keyed by their largest row
/// index, and become pivots themselves when a remainder survives.
pub struct Reducer {
    field: FieldSpec,
    pivot_by_row: Vec<Option<usize>>,
    pivot_cols: Vec<SparseVec>,
}

impl Reducer {
    pub fn new(n_rows: usize, field: FieldSpec) -> Self {
        Self { field, pivot_by_row: vec![None; n_rows], pivot_cols: Vec::new() }
    }

    /// Reduces `col` against the current pivots. Returns `true` when the
    /// column was independent (and is now a pivot).
    pub fn push(&mut self, col: SparseVec) -> bool {
        self.reduce_and_store(col).is_some()
    }

    /// Like `push` but reports the fully reduced column instead of storing a
    /// dependent one.
    pub fn reduce_and_store(&mut self, mut col: SparseVec) -> Option<usize> {
        while let Some(&(low_row, low_coeff)) = col.last() {
            match self.pivot_by_row[low_row as usize] {
                Some(pivot_idx) => {
                    let pivot = &self.pivot_cols[pivot_idx];
                    let pivot_low = pivot.last().unwrap().1;
                    let factor = self.field.neg(self.field.mul(low_coeff, self.field.inv(pivot_low)));
                    let pivot = pivot.clone();
                    add_scaled(&mut col, &pivot, factor, &self.field);
                }
                None => {
                    let idx = self.pivot_cols.len();
                    self.pivot_by_row[low_row as usize] = Some(idx);
                    self.pivot_cols.push(col);
                    return Some(idx);
                }
            }
        }
        None
    }

    /// Reduces a column without storing it; returns the remainder.
    pub fn remainder(&self, mut col: SparseVec) -> SparseVec {
        while let Some(&(low_row, low_coeff)) = col.last() {
            match self.pivot_by_row[low_row as usize] {
                Some(pivot_idx) => {
                    let pivot = &self.pivot_cols[pivot_idx];
                    let pivot_low = pivot.last().unwrap().1;
                    let factor = self.field.neg(self.field.mul(low_coeff, self.field.inv(pivot_low)));
                    add_scaled(&mut col, pivot, factor, &self.field);
                }
                None => break,
            }
        }
        col
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Kernel computation: pushes all columns of a matrix while tracking the
/// column operations, and returns a basis of combination vectors (over the
/// column index space) that reduce to zero.
pub fn kernel_basis(matrix: &SparseColumnMatrix) -> Vec<SparseVec> {
    let field = matrix.field;
    let mut pivot_by_row: Vec<Option<usize>> = vec![None; matrix.n_rows];
    let mut stored: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut kernel = Vec::new();
    for (j, col) in matrix.columns.iter().enumerate() {
        let mut col = col.clone();
        let mut ops: SparseVec = vec![(j as u32, 1)];
        while let Some(&(low_row, low_coeff)) = col.last() {
            match pivot_by_row[low_row as usize] {
                Some(idx) => {
                    let (pivot, pivot_ops) = stored[idx].clone();
                    let pivot_low = pivot.last().unwrap().1;
                    let factor = field.neg(field.mul(low_coeff, field.inv(pivot_low)));
                    add_scaled(&mut col, &pivot, factor, &field);
                    add_scaled(&mut ops, &pivot_ops, factor, &field);
                }
                None => break,
            }
        }
        if col.is_empty() {
            kernel.push(ops);
        } else {
            pivot_by_row[col.last().unwrap().0 as usize] = Some(stored.len());
            stored.push((col, ops));
        }
    }
    kernel
}

/// The boundary operator `∂_p` of the complex in canonical face order:
/// column j is the boundary of the j-th p-face with alternating signs reduced
/// mod p. For p = 0 this is the augmentation map to the empty simplex, which
/// realizes reduced homology.
pub fn boundary_matrix(complex: &Complex, p: usize, field: FieldSpec) -> Result<SparseColumnMatrix> {
    if p > complex.dim_cap() {
        return Err(Error::DimensionOutOfRange { p, dim_cap: complex.dim_cap() });
    }
    if p == 0 {
        let mut m = SparseColumnMatrix::zero(1, complex.n_vertices(), field);
        for col in m.columns.iter_mut() {
            col.push((0, 1));
        }
        return Ok(m);
    }
    let rows = complex.faces(p - 1);
    let cols = complex.faces(p);
    let mut m = SparseColumnMatrix::zero(rows.len(), cols.len(), field);
    for (j, face) in cols.iter().enumerate() {
        let mut entries = Vec::with_capacity(face.len());
        for omit in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(omit);
            let row = complex
                .face_index(p - 1, &sub)
                .ok_or_else(|| Error::FaceNotPresent(sub.clone()))?;
            let coeff = if omit % 2 == 0 { 1 } else { field.neg(1) };
            entries.push((row as u32, coeff));
        }
        entries.sort_unstable_by_key(|e| e.0);
        m.columns[j] = entries;
    }
    Ok(m)
}

/// Reduced Betti numbers over the given field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub field: FieldSpec,
    pub betti: Vec<usize>,
}

/// Rank of `∂_p`, where dimensions above the cap contribute the zero matrix.
fn boundary_rank(complex: &Complex, p: usize, field: FieldSpec) -> Result<usize> {
    if p > complex.dim_cap() || complex.face_count(p) == 0 {
        return Ok(0);
    }
    Ok(boundary_matrix(complex, p, field)?.rank())
}

/// Reduced Betti numbers `β̃_0 .. β̃_pmax`, computed as
/// `β̃_p = (n_p - rank ∂_p) - rank ∂_{p+1}` by deterministic column
/// reduction.
///
/// The stored face lists are taken as the complex itself, so `∂` above the
/// dimension cap is the zero map. A Rips caller that wants `β̃_p` of the full
/// flag complex must therefore build with cap at least p + 1; passing
/// `pmax = dim_cap` is meaningful exactly when nothing exists above the cap
/// (the boundary-of-a-simplex complexes are the prototypical case).
pub fn betti_numbers(complex: &Complex, pmax: usize, field: FieldSpec) -> Result<BettiVector> {
    if pmax > complex.dim_cap() {
        return Err(Error::DimensionOutOfRange { p: pmax, dim_cap: complex.dim_cap() });
    }
    let mut ranks = Vec::with_capacity(pmax + 2);
    for p in 0..=pmax + 1 {
        ranks.push(boundary_rank(complex, p, field)?);
    }
    let betti = (0..=pmax)
        .map(|p| complex.face_count(p) - ranks[p] - ranks[p + 1])
        .collect();
    Ok(BettiVector { field, betti })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    pub reduced_euler_characteristic: i64,
    pub alternating_betti_sum: i64,
    pub ok: bool,
}

/// Verifies the Euler-Poincare identity
/// `Σ (-1)^p n_p - 1 = Σ (-1)^p β̃_p` on a complex that is fully enumerated
/// to its cap and has no faces above it (the caller asserts that; a truncated
/// complex will generally fail). The empty complex passes vacuously, its -1
/// accounted by reduced H_{-1}.
pub fn euler_poincare_check(complex: &Complex, field: FieldSpec) -> Result<EulerReport> {
    let mut chi: i64 = -1;
    for p in 0..=complex.dim_cap() {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        chi += sign * complex.face_count(p) as i64;
    }
    if complex.n_vertices() == 0 {
        return Ok(EulerReport {
            reduced_euler_characteristic: chi,
            alternating_betti_sum: chi,
            ok: true,
        });
    }
    let betti = betti_numbers(complex, complex.dim_cap(), field)?;
    let sum: i64 = betti
        .betti
        .iter()
        .enumerate()
        .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    Ok(EulerReport {
        reduced_euler_characteristic: chi,
        alternating_betti_sum: sum,
        ok: chi == sum,
    })
}

/// Dimension of the image of the inclusion-induced map
/// `H̃_p(sub) -> H̃_p(super)`, where `injection[v]` names the super-complex
/// vertex carrying sub-complex vertex `v`.
///
/// Computed by mapping a cycle-space basis of the subcomplex through the
/// injection and ranking it against `im ∂_{p+1}` of the super complex.
pub fn induced_image_dim(
    sub: &Complex,
    injection: &[u32],
    sup: &Complex,
    p: usize,
    field: FieldSpec,
) -> Result<usize> {
    if injection.len() != sub.n_vertices() {
        return Err(Error::NotASubcomplex("injection must name every subcomplex vertex".into()));
    }
    let mut seen = vec![false; sup.n_vertices()];
    for &w in injection {
        if w as usize >= sup.n_vertices() {
            return Err(Error::NotASubcomplex(format!("vertex image {w} out of range")));
        }
        if std::mem::replace(&mut seen[w as usize], true) {
            return Err(Error::NotASubcomplex(format!("vertex image {w} repeated")));
        }
    }
    if p + 1 > sub.dim_cap() || p + 1 > sup.dim_cap() {
        return Err(Error::DimensionOutOfRange { p, dim_cap: sub.dim_cap().min(sup.dim_cap()) });
    }
    // Every enumerated face of the subcomplex must map to a face.
    for q in 1..=sub.dim_cap().min(sup.dim_cap()) {
        for face in sub.faces(q) {
            let (image, _) = map_face(face, injection);
            if sup.face_index(q, &image).is_none() {
                return Err(Error::NotASubcomplex(format!(
                    "face {face:?} maps to {image:?}, which is not a face"
                )));
            }
        }
    }

    let cycles = kernel_basis(&boundary_matrix(sub, p, field)?);
    if cycles.is_empty() {
        return Ok(0);
    }
    let boundary_sup = boundary_matrix(sup, p + 1, field)?;
    let mut reducer = Reducer::new(sup.face_count(p), field);
    for col in &boundary_sup.columns {
        reducer.push(col.clone());
    }
    let mut dim = 0;
    for cycle in cycles {
        // Re-express the kernel vector over the super complex's p-faces.
        let mut mapped: SparseVec = Vec::with_capacity(cycle.len());
        for (face_idx, coeff) in cycle {
            let face = &sub.faces(p)[face_idx as usize];
            let (image, parity) = map_face(face, injection);
            let row = sup.face_index(p, &image).expect("checked above") as u32;
            let c = if parity { field.neg(coeff) } else { coeff };
            mapped.push((row, c));
        }
        mapped.sort_unstable_by_key(|e| e.0);
        if reducer.push(mapped) {
            dim += 1;
        }
    }
    Ok(dim)
}

/// Maps a face through a vertex injection, returning the sorted image and
/// whether the sorting permutation was odd (an orientation flip).
fn map_face(face: &[u32], injection: &[u32]) -> (Vec<u32>, bool) {
    let mut image: Vec<u32> = face.iter().map(|&v| injection[v as usize]).collect();
    let mut swaps = 0;
    for i in 1..image.len() {
        let mut j = i;
        while j > 0 && image[j - 1] > image[j] {
            image.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    (image, swaps % 2 == 1)
}

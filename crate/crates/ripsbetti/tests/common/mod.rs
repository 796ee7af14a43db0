//! Shared test support: an independent dense-elimination homology oracle and
//! small complex builders. The oracle deliberately shares no code with the
//! library's sparse column reduction; it recomputes everything from raw face
//! lists with dense row-echelon ranks.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use ripsbetti::complexes::Complex;

/// Dense Gaussian elimination rank over GF(p), by rows with partial
/// (first-nonzero) pivoting.
pub fn dense_rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let inv = |a: u64| -> u64 {
        // Extended Euclid, p prime.
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        (((t % p as i128) + p as i128) % p as i128) as u64
    };
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_multiple_of(p));
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let scale = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = *x * scale % p;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_multiple_of(p) {
                let factor = m[r][col] % p;
                for c in 0..cols {
                    let sub = factor * m[rank][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn sorted_faces(faces: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = faces.to_vec();
    out.sort();
    out.dedup();
    out
}

fn face_position(faces: &[Vec<u32>], face: &[u32]) -> usize {
    faces.binary_search_by(|f| f.as_slice().cmp(face)).expect("subface must be present")
}

/// Dense boundary matrix of dimension p (rows = (p-1)-faces, columns =
/// p-faces); p = 0 yields the augmentation row.
fn dense_boundary(lower: &[Vec<u32>], upper: &[Vec<u32>], p: usize, modulus: u64) -> Vec<Vec<u64>> {
    if p == 0 {
        return vec![vec![1; upper.len()]];
    }
    let mut m = vec![vec![0u64; upper.len()]; lower.len()];
    for (j, face) in upper.iter().enumerate() {
        for omit in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(omit);
            let row = face_position(lower, &sub);
            let coeff = if omit % 2 == 0 { 1 } else { modulus - 1 };
            m[row][j] = coeff;
        }
    }
    m
}

/// Reduced Betti numbers from raw face lists (dimension p at index p;
/// singletons may be omitted, n_vertices fills them in). Independent of the
/// library path end to end.
pub fn oracle_betti(
    n_vertices: usize,
    faces_by_dim: &[Vec<Vec<u32>>],
    pmax: usize,
    modulus: u64,
) -> Vec<usize> {
    let mut levels: Vec<Vec<Vec<u32>>> = Vec::new();
    levels.push((0..n_vertices as u32).map(|v| vec![v]).collect());
    for p in 1..=pmax + 1 {
        let list = faces_by_dim.get(p).map(|l| sorted_faces(l)).unwrap_or_default();
        levels.push(list);
    }
    let mut ranks = vec![0usize; pmax + 2];
    for p in 0..=pmax + 1 {
        if levels[p].is_empty() {
            ranks[p] = 0;
            continue;
        }
        let matrix = if p == 0 {
            dense_boundary(&[], &levels[0], 0, modulus)
        } else {
            dense_boundary(&levels[p - 1], &levels[p], p, modulus)
        };
        ranks[p] = dense_rank(matrix, modulus);
    }
    (0..=pmax).map(|p| levels[p].len() - ranks[p] - ranks[p + 1]).collect()
}

/// Oracle Betti numbers of a library complex, without using the library's
/// homology code.
pub fn oracle_betti_of_complex(complex: &Complex, pmax: usize, modulus: u64) -> Vec<usize> {
    let faces: Vec<Vec<Vec<u32>>> =
        (0..=complex.dim_cap()).map(|p| complex.faces(p).to_vec()).collect();
    oracle_betti(complex.n_vertices(), &faces, pmax, modulus)
}

/// All graphs on `n` labeled vertices, as edge lists, enumerated by bitmask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Vec<(u32, u32)>> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|u| ((u + 1)..n as u32).map(move |v| (u, v)))
        .collect();
    let count = 1usize << pairs.len();
    (0..count).map(move |mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    })
}

/// The 6-vertex minimal triangulation of the real projective plane: a closed
/// non-orientable surface on the complete graph K6 (not a flag complex).
pub fn projective_plane_faces() -> Vec<Vec<u32>> {
    vec![
        vec![0, 1, 2],
        vec![0, 1, 5],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![1, 2, 4],
        vec![1, 3, 4],
        vec![1, 3, 5],
        vec![2, 3, 5],
        vec![2, 4, 5],
    ]
}

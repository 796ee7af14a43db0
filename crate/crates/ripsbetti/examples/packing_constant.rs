//! Lower estimates for the unit-ball packing constant: the largest point set
//! in the unit ball with pairwise distances above 1, minus one. The constant
//! caps how many components a vertex link can have.

use ripsbetti::bounds::{estimate_packing_constant, verify_packing_witness};

fn main() -> ripsbetti::Result<()> {
    for dim in 1..=3usize {
        let est = estimate_packing_constant(dim, 60, 0)?;
        println!(
            "dim {dim}: C >= {} (witness of {} points, re-verified: {})",
            est.c_lower,
            est.witness.len(),
            verify_packing_witness(&est.witness)
        );
        if dim == 2 {
            let min_dist = min_pairwise(&est.witness);
            println!("  planar witness min pairwise distance: {min_dist:.4}");
        }
    }
    Ok(())
}

fn min_pairwise(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            best = best.min(d);
        }
    }
    best
}

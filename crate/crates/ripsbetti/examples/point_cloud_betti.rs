//! Build the Rips complex of a small point cloud and compute its reduced
//! Betti numbers over GF(2) and GF(3).

use ripsbetti::complexes::build_rips;
use ripsbetti::geometry::{PointCloud, ThresholdPolicy};
use ripsbetti::homology::{betti_numbers, euler_poincare_check, FieldSpec};

fn main() -> ripsbetti::Result<()> {
    // Four corners of the unit square: the Rips complex at threshold 1 is a
    // hollow 4-cycle (the diagonals are too long), a circle.
    let square = PointCloud::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
    )?;
    let policy = ThresholdPolicy::default();
    let complex = build_rips(&square, &policy, 2)?;
    println!("unit square face counts: {:?}", complex.face_counts());
    for p in [2u32, 3] {
        let betti = betti_numbers(&complex, 1, FieldSpec::new(p)?)?;
        println!("  reduced Betti over GF({p}): {:?}", betti.betti);
    }
    let euler = euler_poincare_check(&complex, FieldSpec::default())?;
    println!(
        "  Euler-Poincare: chi = {} vs alternating Betti sum = {} ({})",
        euler.reduced_euler_characteristic,
        euler.alternating_betti_sum,
        if euler.ok { "consistent" } else { "INCONSISTENT" }
    );

    // Shrinking the threshold disconnects the square into four points.
    let tight = ThresholdPolicy::with_threshold(0.5);
    let complex = build_rips(&square, &tight, 2)?;
    let betti = betti_numbers(&complex, 1, FieldSpec::default())?;
    println!("threshold 0.5: faces {:?}, Betti {:?}", complex.face_counts(), betti.betti);
    Ok(())
}

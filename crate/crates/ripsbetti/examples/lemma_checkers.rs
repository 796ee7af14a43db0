//! The structural lemma checkers: link inequality, crossing cone,
//! perpendicularity disjunction, and the shared-neighbor edge bound.

use ripsbetti::bounds::{
    check_crossing_cone, check_k23_condition, check_link_inequality, check_perp_disjunction,
};
use ripsbetti::geometry::{PointCloud, ThresholdPolicy};
use ripsbetti::homology::FieldSpec;

fn main() -> ripsbetti::Result<()> {
    let policy = ThresholdPolicy::default();
    let field = FieldSpec::default();

    let square = PointCloud::new(
        2,
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
    )?;
    let report = check_link_inequality(&square, 0, 1, field, &policy)?;
    println!(
        "link inequality on the square: {} <= {} + {} ({})",
        report.beta_full,
        report.beta_minus_vertex,
        report.beta_link,
        if report.holds { "holds" } else { "VIOLATED" }
    );

    let cone = check_crossing_cone([0.0, 0.0], [1.0, 0.0], [0.5, 0.49], [0.5, -0.49], &policy)?;
    println!("crossing edges force a cone: {cone}");

    let u = PointCloud::new(2, vec![vec![-0.005, 1.0], vec![0.005, 1.0]])?;
    let v = PointCloud::new(2, vec![vec![-0.005, 0.0], vec![0.005, 0.0]])?;
    let perp = check_perp_disjunction(&u, &v, 0.01, 0.25)?;
    for pair in &perp.pairs {
        println!(
            "cluster pair ({}, {}): monotone={} |dot|={:.4} flagged={}",
            pair.v1, pair.v2, pair.monotone, pair.abs_dot, pair.flagged
        );
    }

    let k32: Vec<(u32, u32)> = (0..3).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
    let report = check_k23_condition(3, 2, &k32)?;
    println!(
        "K_3,2: shared-neighbor condition holds = {}, {} edges, ratio to n^1.5 = {:.3}",
        report.condition_holds, report.edge_count, report.ratio
    );
    Ok(())
}

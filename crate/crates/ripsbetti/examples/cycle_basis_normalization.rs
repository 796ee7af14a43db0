//! Extract an H1 basis of simple chord-free cycles, then refine it so every
//! class is represented by an epsilon-simple quadrilateral.

use ripsbetti::complexes::build_rips;
use ripsbetti::constructions::{construct_s2km1, ConstructionParams};
use ripsbetti::cycles::{h1_cycle_basis, refine_epsilon_simple};
use ripsbetti::geometry::PointCloud;

fn main() -> ripsbetti::Result<()> {
    let params = ConstructionParams::default();

    // The two-cluster gadget: r holes, all representable by quadrilaterals
    // between the two clusters, which both fit single 0.5-cubes.
    let cloud = construct_s2km1(10, 1, &params)?;
    let complex = build_rips(&cloud, &params.policy, 2)?;
    let basis = h1_cycle_basis(&complex)?;
    println!("two-cluster gadget (r = 5): beta_1 = {}", basis.len());
    let refined = refine_epsilon_simple(&basis, &cloud, 0.5)?;
    for cycle in &refined.basis.cycles {
        println!(
            "  cycle {:?}: simple={} chord_free={} epsilon_simple={:?}",
            cycle.vertices, cycle.simple, cycle.chord_free, cycle.epsilon_simple
        );
    }
    println!("  non-epsilon-simple remaining: {}", refined.non_epsilon_simple);

    // A single hexagonal hole with every vertex in its own cube: no near
    // pair exists, so the refinement leaves it alone and reports it.
    let hexagon = PointCloud::new(
        2,
        (0..6)
            .map(|i| {
                let a = std::f64::consts::FRAC_PI_3 * i as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
    )?;
    let complex = build_rips(&hexagon, &Default::default(), 2)?;
    let basis = h1_cycle_basis(&complex)?;
    let refined = refine_epsilon_simple(&basis, &hexagon, 0.7)?;
    println!(
        "hexagon: basis of {} cycle(s), {} non-epsilon-simple",
        refined.basis.len(),
        refined.non_epsilon_simple
    );
    Ok(())
}

//! The two-clique gadget: beta_1 of the flag complex equals the residual
//! graph's component count minus one, with an explicit quadrilateral basis.

use ripsbetti::complexes::flag_skeleton;
use ripsbetti::constructions::{bipartite_basis_cycles, representative_edges, two_clique_gadget};
use ripsbetti::cycles::h1_class_rank;
use ripsbetti::homology::{betti_numbers, FieldSpec};

fn main() -> ripsbetti::Result<()> {
    let field = FieldSpec::default();
    // Two complete parts of size 5 joined by a perfect matching: the
    // residual graph is the matching itself, five components.
    let cross: Vec<(u32, u32)> = (0..5).map(|i| (i, i)).collect();
    let gadget = two_clique_gadget(5, 5, &cross)?;
    let q = gadget.residual.component_count();
    let complex = flag_skeleton(&gadget.graph, 2)?;
    let beta1 = betti_numbers(&complex, 1, field)?.betti[1];
    println!("perfect matching on 5+5: q = {q}, beta_1 = {beta1} (= q - 1)");

    let reps = representative_edges(&gadget);
    println!("representative edges per component: {reps:?}");
    let cycles = bipartite_basis_cycles(&gadget);
    let rank = h1_class_rank(&complex, &cycles, field)?;
    println!("quadrilateral classes: {} cycles of rank {rank} (a basis of H1)", cycles.len());
    for c in &cycles {
        println!("  ({}, {}, {}, {})", c[0], c[1], c[2], c[3]);
    }

    // Denser cross edges merge components and kill homology classes.
    let cross = vec![(0, 0), (0, 1), (1, 2), (3, 3), (3, 4)];
    let gadget = two_clique_gadget(4, 5, &cross)?;
    let complex = flag_skeleton(&gadget.graph, 2)?;
    let beta1 = betti_numbers(&complex, 1, field)?.betti[1];
    println!(
        "partial cross edges: q = {}, beta_1 = {beta1}",
        gadget.residual.component_count()
    );
    Ok(())
}

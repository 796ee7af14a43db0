//! The odd-degree extremal family: k rotated copies of a two-cluster gadget
//! whose join realizes beta_{2k-1} = (r-1)^k.

use ripsbetti::complexes::build_rips;
use ripsbetti::constructions::{construct_s2km1, ConstructionParams};
use ripsbetti::homology::{betti_numbers, FieldSpec};

fn main() -> ripsbetti::Result<()> {
    let params = ConstructionParams::default();
    let field = FieldSpec::default();

    println!("k = 1 (single gadget): beta_1 = r - 1 exactly");
    for n in [8usize, 12, 16, 20] {
        let r = n / 2;
        let cloud = construct_s2km1(n, 1, &params)?;
        let complex = build_rips(&cloud, &params.policy, 2)?;
        let beta1 = betti_numbers(&complex, 1, field)?.betti[1];
        println!("  n = {n:2}: r = {r}, beta_1 = {beta1}");
    }

    println!("k = 2 (two rotated copies, all cross pairs edges): beta_3 >= (r-1)^2");
    for n in [12usize, 16] {
        let r = n / 4;
        let cloud = construct_s2km1(n, 2, &params)?;
        let complex = build_rips(&cloud, &params.policy, 4)?;
        let beta3 = betti_numbers(&complex, 3, field)?.betti[3];
        println!("  n = {n:2}: r = {r}, beta_3 = {beta3} (bound {})", (r - 1) * (r - 1));
    }
    Ok(())
}

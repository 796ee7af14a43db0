//! The even-degree construction: an S^2-type configuration joined with an
//! isometrically embedded planar gadget, with Betti numbers multiplying
//! through the join.

use ripsbetti::complexes::build_rips;
use ripsbetti::constructions::{construct_even_p, ConstructionParams};
use ripsbetti::homology::{betti_numbers, FieldSpec};

fn main() -> ripsbetti::Result<()> {
    let params = ConstructionParams::default();
    let field = FieldSpec::default();
    let even = construct_even_p(24, 4, &params)?;
    println!(
        "p = 4, n = 24: S^2 part k = {} ({} points), odd part r = {} ({} points)",
        even.s2_k,
        even.s2_len,
        even.odd_r,
        even.cloud.len() - even.s2_len
    );
    println!("max cross-pair distance: {:.4} (all pairs join the two parts)", even.max_cross_dist);

    let s2_part = even.cloud.restrict(&(0..even.s2_len).collect::<Vec<_>>())?;
    let odd_part = even.cloud.restrict(&(even.s2_len..even.cloud.len()).collect::<Vec<_>>())?;
    let b_s2 = betti_numbers(&build_rips(&s2_part, &params.policy, 3)?, 2, field)?.betti;
    let b_odd = betti_numbers(&build_rips(&odd_part, &params.policy, 2)?, 1, field)?.betti;
    let complex = build_rips(&even.cloud, &params.policy, 5)?;
    let beta4 = betti_numbers(&complex, 4, field)?.betti[4];
    println!(
        "beta_2(S^2 part) = {}, beta_1(odd part) = {}, beta_4(join) = {beta4} (= product)",
        b_s2[2], b_odd[1]
    );
    Ok(())
}

//! From a progression-free set to disjoint induced matchings to a quasi-Rips
//! complex with large second homology.

use ripsbetti::complexes::{build_quasi_rips, build_rips};
use ripsbetti::constructions::{
    ap3_free_set, quasi_rips_from_matchings, quasi_rips_witness, rs_matching_family, Ap3Method,
};
use ripsbetti::homology::{betti_numbers, FieldSpec};

fn main() -> ripsbetti::Result<()> {
    let field = FieldSpec::default();
    let n = 12u64;
    let set = ap3_free_set(n, Ap3Method::Greedy);
    println!("greedy AP3-free subset of [0, {n}): {set:?}");
    let behrend = ap3_free_set(1000, Ap3Method::Behrend);
    println!("Behrend-style subset of [0, 1000): {} elements", behrend.len());

    let family = rs_matching_family(&set, n)?;
    println!(
        "matching family: |U| = {}, |V| = {}, {} edges in {} disjoint induced matchings",
        family.u_size,
        family.v_size,
        family.total_matched_edges(),
        family.matchings.iter().filter(|m| !m.is_empty()).count()
    );

    let bound = quasi_rips_from_matchings(&family, 3 * n as usize, 3)?;
    let beta2 = betti_numbers(&bound.complex, 2, field)?.betti[2];
    let beta1_prime = betti_numbers(&bound.gamma_prime, 2, field)?.betti[1];
    println!("{}", bound.note);
    println!(
        "beta_2(Gamma) = {beta2} >= matched edges - beta_1(Gamma') = {} - {beta1_prime} = {}",
        bound.matched_edges,
        bound.matched_edges as i64 - beta1_prime as i64
    );

    // Realize the same complex as an honest quasi-Rips complex in the plane.
    let spec = quasi_rips_witness(&bound, 0.5)?;
    let realized = build_quasi_rips(&spec, 3)?;
    println!(
        "witness cloud with alpha = 0.5 realizes the complex exactly: {}",
        realized == bound.complex
    );
    // And a Rips complex is a quasi-Rips complex for any alpha.
    let rips = build_rips(&spec.cloud, &Default::default(), 3)?;
    println!(
        "(the witness cloud's plain Rips complex has {} edges; the policy kept {})",
        rips.face_count(1),
        realized.face_count(1)
    );
    Ok(())
}

//! Cross-module invariants: the structural identities that tie geometry,
//! flag enumeration and homology together, exercised over randomized inputs.

mod common;

use proptest::prelude::*;
use rand::Rng;

use ripsbetti::bounds::campaign;
use ripsbetti::complexes::{
    build_quasi_rips, build_rips, flag_skeleton, induced_subcomplex, join, link_of,
    OptionalEdgePolicy, QuasiRipsSpec,
};
use ripsbetti::constructions::{construct_s2km1, ConstructionParams};
use ripsbetti::cycles::{h1_cycle_basis, validate_cycle_basis};
use ripsbetti::geometry::{
    apply_plane_rotation, cube_index, embed_plane_in_r5, proximity_graph, PointCloud,
    ThresholdPolicy,
};
use ripsbetti::graph::Graph;
use ripsbetti::homology::{betti_numbers, euler_poincare_check, FieldSpec};

fn gf2() -> FieldSpec {
    FieldSpec::default()
}

#[test]
fn rips_restriction_equals_rips_of_subcloud() {
    let policy = ThresholdPolicy::default();
    for index in 0..40u64 {
        let cloud = campaign::random_cloud(11, index, 2 + (index % 2) as usize, 10, 2.0);
        let complex = build_rips(&cloud, &policy, 3).unwrap();
        let mut rng = campaign::rng_for(12, index);
        let w: Vec<usize> = (0..cloud.len()).filter(|_| rng.gen::<bool>()).collect();
        let w32: Vec<u32> = w.iter().map(|&v| v as u32).collect();
        let restricted = induced_subcomplex(&complex, &w32).unwrap();
        let direct = build_rips(&cloud.restrict(&w).unwrap(), &policy, 3).unwrap();
        for p in 0..=3 {
            assert_eq!(restricted.faces(p), direct.faces(p), "cloud {index}, dim {p}");
        }
    }
}

#[test]
fn link_in_rips_equals_rips_of_common_neighbors() {
    let policy = ThresholdPolicy::default();
    for index in 0..40u64 {
        let cloud = campaign::random_cloud(21, index, 2, 11, 1.8);
        let complex = build_rips(&cloud, &policy, 3).unwrap();
        let graph = proximity_graph(&cloud, &policy).unwrap();
        let v = (index % cloud.len() as u64) as usize;
        let link = link_of(&complex, &[v as u32]).unwrap();
        let neighbors: Vec<usize> = graph.neighbors(v);
        let sub = cloud.restrict(&neighbors).unwrap();
        if sub.is_empty() {
            assert_eq!(link.n_vertices(), 0);
            continue;
        }
        let direct = build_rips(&sub, &policy, 2).unwrap();
        for p in 0..=2 {
            assert_eq!(link.faces(p), direct.faces(p), "cloud {index}, dim {p}");
        }
    }
}

#[test]
fn rips_of_two_near_clusters_is_the_join() {
    let policy = ThresholdPolicy::default();
    for index in 0..60u64 {
        let (a, b, union) = campaign::random_join_instance(31, index);
        let ca = build_rips(&a, &policy, 4).unwrap();
        let cb = build_rips(&b, &policy, 4).unwrap();
        let cu = build_rips(&union, &policy, 4).unwrap();
        let joined = join(&ca, &cb, 4).unwrap();
        assert_eq!(joined, cu, "instance {index}");
    }
}

#[test]
fn quasi_rips_with_rips_consistent_policy_is_rips() {
    let policy = ThresholdPolicy::default();
    for index in 0..25u64 {
        let cloud = campaign::random_cloud(41, index, 2, 9, 1.6);
        let alpha = 0.35;
        let mut optional = std::collections::BTreeSet::new();
        for u in 0..cloud.len() {
            for v in (u + 1)..cloud.len() {
                let d = cloud.dist(u, v);
                if d > alpha && d <= 1.0 {
                    optional.insert((u as u32, v as u32));
                }
            }
        }
        let spec = QuasiRipsSpec {
            alpha,
            cloud: cloud.clone(),
            optional_edge_policy: OptionalEdgePolicy::Explicit(optional),
        };
        let quasi = build_quasi_rips(&spec, 3).unwrap();
        let rips = build_rips(&cloud, &policy, 3).unwrap();
        assert_eq!(quasi, rips, "cloud {index}");
    }
}

#[test]
fn same_cube_points_are_edges_at_critical_epsilon() {
    // Over 1000 random clouds: with epsilon = dim^{-1/2}, sharing a cube
    // implies distance at most 1, hence an edge under the default policy.
    let policy = ThresholdPolicy::default();
    let mut checked_pairs = 0usize;
    for index in 0..1000u64 {
        let dim = 2 + (index % 3) as usize;
        let epsilon = (dim as f64).powf(-0.5);
        let cloud = campaign::random_cloud(51, index, dim, 12, 1.2);
        let cubes = cube_index(&cloud, epsilon).unwrap();
        let graph = proximity_graph(&cloud, &policy).unwrap();
        for u in 0..cloud.len() {
            for v in (u + 1)..cloud.len() {
                if cubes[u] == cubes[v] {
                    checked_pairs += 1;
                    assert!(cloud.dist(u, v) <= 1.0, "cloud {index}: pair ({u},{v})");
                    assert!(graph.has_edge(u, v), "cloud {index}: pair ({u},{v})");
                }
            }
        }
    }
    assert!(checked_pairs > 1000, "the campaign should exercise many co-cube pairs");
}

#[test]
fn euler_poincare_holds_on_generated_complexes() {
    for index in 0..30u64 {
        let cloud = campaign::random_cloud(61, index, 2, 10, 1.7);
        let complex = build_rips(&cloud, &ThresholdPolicy::default(), cloud.len().max(2) - 1).unwrap();
        let report = euler_poincare_check(&complex, gf2()).unwrap();
        assert!(report.ok, "cloud {index}: {report:?}");
    }
}

#[test]
fn h1_basis_is_normalized_on_random_flag_complexes() {
    for index in 0..60u64 {
        let mut rng = campaign::rng_for(71, index);
        let n = rng.gen_range(4..10usize);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen::<f64>() < 0.45 {
                    edges.push((u, v));
                }
            }
        }
        let graph = Graph::from_edges(n, &edges).unwrap();
        let complex = flag_skeleton(&graph, 2).unwrap();
        let basis = h1_cycle_basis(&complex).unwrap();
        let beta1 = betti_numbers(&complex, 1, gf2()).unwrap().betti[1];
        assert_eq!(basis.len(), beta1, "graph {index}");
        for cycle in &basis.cycles {
            assert!(cycle.simple, "graph {index}: {:?}", cycle.vertices);
            assert!(cycle.chord_free, "graph {index}: {:?}", cycle.vertices);
        }
        validate_cycle_basis(&complex, &basis, gf2()).unwrap();
        validate_cycle_basis(&complex, &basis, FieldSpec::new(3).unwrap()).unwrap();
    }
}

#[test]
fn link_inequality_never_fails_in_campaign() {
    // The inequality is a theorem; a failure would be an implementation bug.
    let policy = ThresholdPolicy::default();
    for index in 0..50u64 {
        let dim = 2 + (index % 2) as usize;
        let cloud = campaign::random_cloud(81, index, dim, 9, 1.9);
        for p in 1..=2usize {
            let vertex = (index as usize + p) % cloud.len();
            let report =
                ripsbetti::bounds::check_link_inequality(&cloud, vertex, p, gf2(), &policy)
                    .unwrap();
            assert!(report.holds, "cloud {index}, p={p}: {report:?}");
        }
    }
}

#[test]
fn gadget_image_classes_survive_or_die_in_an_ambient_complex() {
    // Corollary form of the bipartite lemma: when the gadget complex sits
    // inside a larger complex, some subset of its quadrilateral classes
    // spans the image of its H1, so the image dimension is at most q - 1 and
    // is matched exactly by ranking the quadrilaterals in the ambient
    // complex.
    use ripsbetti::constructions::{bipartite_basis_cycles, two_clique_gadget};
    use ripsbetti::cycles::h1_class_rank;
    use ripsbetti::homology::induced_image_dim;

    for index in 0..30u64 {
        let mut rng = campaign::rng_for(91, index);
        let gadget = campaign::random_gadget(92, index, 5);
        let sub = flag_skeleton(&gadget.graph, 2).unwrap();
        let n = sub.n_vertices();
        // Ambient complex: the gadget plus one extra vertex coned over a
        // random subset, which can kill some of the gadget's classes.
        let mut edges: Vec<(u32, u32)> = gadget.graph.edges();
        for v in 0..n as u32 {
            if rng.gen::<f64>() < 0.5 {
                edges.push((v, n as u32));
            }
        }
        let ambient_graph = Graph::from_edges(n + 1, &edges).unwrap();
        let ambient = flag_skeleton(&ambient_graph, 2).unwrap();
        let injection: Vec<u32> = (0..n as u32).collect();
        let omega = induced_image_dim(&sub, &injection, &ambient, 1, gf2()).unwrap();
        let q = gadget.residual.component_count();
        assert!(omega <= q.saturating_sub(1), "instance {index}: omega {omega} vs q {q}");
        // The quadrilateral classes span the image, so their rank in the
        // ambient complex equals the image dimension.
        let cycles = bipartite_basis_cycles(&gadget);
        let rank = h1_class_rank(&ambient, &cycles, gf2()).unwrap();
        assert_eq!(rank, omega, "instance {index}");
    }
}

#[test]
fn s2km1_gadget_matches_its_combinatorial_description() {
    // Within each copy the residual graph is a perfect matching with r
    // components; across copies everything is an edge.
    let params = ConstructionParams::default();
    for (n, k) in [(8, 1), (12, 1), (12, 2), (16, 2)] {
        let cloud = construct_s2km1(n, k, &params).unwrap();
        let graph = proximity_graph(&cloud, &params.policy).unwrap();
        let r = n / (2 * k);
        for copy in 0..k {
            let base = copy * 2 * r;
            let u_set: Vec<u32> = (0..r).map(|i| (base + i) as u32).collect();
            let v_set: Vec<u32> = (0..r).map(|i| (base + r + i) as u32).collect();
            let vertices: Vec<u32> =
                u_set.iter().chain(v_set.iter()).copied().collect();
            let sub = graph.induced(&vertices).unwrap();
            let residual =
                ripsbetti::constructions::residual_graph(&sub, &(0..r as u32).collect::<Vec<_>>(), &(r as u32..2 * r as u32).collect::<Vec<_>>())
                    .unwrap();
            assert_eq!(residual.component_count(), r);
            assert_eq!(residual.graph.edge_count(), r);
        }
        for a in 0..cloud.len() {
            for b in (a + 1)..cloud.len() {
                if a / (2 * r) != b / (2 * r) {
                    assert!(graph.has_edge(a, b), "cross-copy pair ({a},{b}) at n={n}, k={k}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_roundtrip_recovers_coordinates(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12),
        angle in -6.0f64..6.0,
    ) {
        let cloud = PointCloud::new(2, pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        let back = apply_plane_rotation(&apply_plane_rotation(&cloud, angle).unwrap(), -angle).unwrap();
        for (p, q) in cloud.points().iter().zip(back.points()) {
            prop_assert!((p[0] - q[0]).abs() < 1e-10);
            prop_assert!((p[1] - q[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn rotation_preserves_pairwise_distances(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..10),
        angle in -6.0f64..6.0,
    ) {
        let cloud = PointCloud::new(2, pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        let rotated = apply_plane_rotation(&cloud, angle).unwrap();
        for i in 0..cloud.len() {
            for j in (i + 1)..cloud.len() {
                prop_assert!((cloud.dist(i, j) - rotated.dist(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn embedding_preserves_pairwise_distances(
        pts in prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 2..10),
    ) {
        let cloud = PointCloud::new(2, pts.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap();
        let embedded = embed_plane_in_r5(&cloud).unwrap();
        for i in 0..cloud.len() {
            for j in (i + 1)..cloud.len() {
                prop_assert!((cloud.dist(i, j) - embedded.dist(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn flag_complexes_are_downward_closed_and_flag(
        n in 3usize..8,
        mask in 0u32..(1 << 21),
    ) {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if mask >> (bit % 21) & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        let graph = Graph::from_edges(n, &edges).unwrap();
        let complex = flag_skeleton(&graph, n.saturating_sub(1)).unwrap();
        prop_assert!(complex.verify_downward_closure());
        prop_assert!(complex.verify_flag());
    }
}

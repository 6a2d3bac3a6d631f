mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use chipfire::constructions::*;
use chipfire::divisor::{
    canonical_divisor, is_equivalent, jacobian_invariants, principal, rank, reduced,
};
use chipfire::gonality::{gonality, positive_rank_divisors};
use chipfire::{Divisor, Multigraph};

fn graph(seed: u64, max_vertices: usize, max_extra: usize) -> Multigraph {
    common::random_graph(&mut StdRng::seed_from_u64(seed), max_vertices, max_extra)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivalence_matches_rational_solve(seed in any::<u64>(), vals in prop::collection::vec(-3i64..4, 7), shift in prop::collection::vec(-2i64..3, 7)) {
        let g = graph(seed, 7, 4);
        let n = g.vertex_count();
        let d = Divisor::from_values(&g, vals[..n].to_vec()).unwrap();
        let mut other = vals[..n].to_vec();
        for (v, s) in shift[..n].iter().enumerate() {
            other[v] += s;
        }
        let e = Divisor::from_values(&g, other).unwrap();
        let lap = common::Laplacian::new(&g);
        let diff: Vec<i64> = d.values().iter().zip(e.values()).map(|(a, b)| a - b).collect();
        prop_assert_eq!(is_equivalent(&g, &d, &e).unwrap(), lap.is_principal(&diff));
    }

    #[test]
    fn reduced_form_is_reduced(seed in any::<u64>(), vals in prop::collection::vec(-4i64..5, 8), root in 0usize..8) {
        let g = graph(seed, 8, 5);
        let n = g.vertex_count();
        let q = root % n;
        let d = Divisor::from_values(&g, vals[..n].to_vec()).unwrap();
        let r = reduced(&g, &d, q).unwrap();
        prop_assert!(common::is_reduced(&g, r.values(), q));
        let diff: Vec<i64> = d.values().iter().zip(r.values()).map(|(a, b)| a - b).collect();
        prop_assert!(common::Laplacian::new(&g).is_principal(&diff));
    }

    #[test]
    fn rank_matches_definition(seed in any::<u64>(), vals in prop::collection::vec(-1i64..3, 5)) {
        let g = graph(seed, 5, 3);
        let n = g.vertex_count();
        let mut v = vals[..n].to_vec();
        while v.iter().sum::<i64>() > 3 {
            let i = v.iter().position(|&c| c > 0).unwrap();
            v[i] -= 1;
        }
        let d = Divisor::from_values(&g, v.clone()).unwrap();
        prop_assert_eq!(rank(&g, &d).unwrap(), common::rank(&g, &v));
    }

    #[test]
    fn jacobian_order_counts_spanning_trees(seed in any::<u64>()) {
        let g = graph(seed, 7, 5);
        prop_assume!(g.vertex_count() >= 2);
        let order: u64 = jacobian_invariants(&g).unwrap().iter().product();
        prop_assert_eq!(order, common::spanning_trees(&g));
    }

    #[test]
    fn treewidth_matches_minor_search(seed in any::<u64>()) {
        let g = graph(seed, 7, 5);
        prop_assert_eq!(g.has_treewidth_at_most_2(), !common::has_k4_minor(&g));
    }
}

#[test]
fn jacobian_of_named_graphs() {
    assert_eq!(jacobian_invariants(&complete(4).unwrap()).unwrap(), vec![4, 4]);
    assert_eq!(jacobian_invariants(&cycle(5).unwrap()).unwrap(), vec![5]);
    assert_eq!(jacobian_invariants(&banana(4).unwrap()).unwrap(), vec![4]);
    for g in [cube(), prism(), wheel(5).unwrap(), fig7(), frucht()] {
        let order: u64 = jacobian_invariants(&g).unwrap().iter().product();
        assert_eq!(order, common::spanning_trees(&g));
    }
}

#[test]
fn named_minor_checks() {
    assert!(common::has_k4_minor(&complete(4).unwrap()));
    assert!(!common::has_k4_minor(&cycle(6).unwrap()));
    assert!(common::has_k4_minor(&prism()));
    assert!(common::has_k4_minor(&two_bridge_trivalent()));
    assert!(!two_bridge_trivalent().has_treewidth_at_most_2());
}

#[test]
fn gonality_matches_definitional_rank() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..25 {
        let g = common::random_graph(&mut rng, 5, 3);
        let gon = gonality(&g, None).unwrap().gonality;
        for d in 1..=gon {
            let any = {
                let mut hit = false;
                common::multisets(g.vertex_count(), d, &mut |c| {
                    if !hit {
                        let mut v = vec![0i64; g.vertex_count()];
                        for &x in c {
                            v[x] += 1;
                        }
                        hit = common::rank(&g, &v) >= 1;
                    }
                });
                hit
            };
            assert_eq!(any, d == gon, "degree {d} on {g:?}");
        }
        let three = positive_rank_divisors(&g, 3);
        for d in &three {
            assert!(common::rank(&g, d.values()) >= 1);
        }
    }
}

#[test]
fn canonical_rank_is_genus_minus_one() {
    for g in [complete(4).unwrap(), prism(), banana(4).unwrap(), wheel(5).unwrap()] {
        let k = canonical_divisor(&g);
        assert_eq!(rank(&g, &k).unwrap(), g.genus() as i64 - 1);
        assert_eq!(common::rank(&g, k.values()), g.genus() as i64 - 1);
    }
}

#[test]
fn principal_divisors_solve_back() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let g = common::random_graph(&mut rng, 7, 4);
        let f = common::random_values(&mut rng, g.vertex_count(), -5, 5);
        let p = principal(&g, &f);
        assert!(common::Laplacian::new(&g).is_principal(p.values()));
    }
}

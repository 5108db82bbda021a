//! Property tests for the structural invariants of the library.

use std::collections::BTreeSet;

use proptest::prelude::*;

use qbs::catalog::{canonical_form, reduced_settings, CountMatrix};
use qbs::cofree::{apply_rci, is_cofree};
use qbs::flat::{flat_non_azumaya_decomposition, flat_non_azumaya_decomposition_unpruned};
use qbs::quiver::{count_quasiprimitive_cycles_through_with, is_connected, prime_components};
use qbs::rep_theory::{enumerate_decompositions, has_simple_reps, local_quiver};
use qbs::toric::nonneg_representative;
use qbs::{DimensionVector, Limits, Quiver, QuiverSetting};

fn setting(max_vertices: usize, max_arrows: usize, max_dim: u64) -> impl Strategy<Value = QuiverSetting> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (prop::collection::vec(1..=max_dim, n), prop::collection::vec((0..n, 0..n), 0..=max_arrows))
            .prop_map(|(dims, arrows)| QuiverSetting::from_parts(&dims, &arrows).unwrap())
    })
}

fn connected_setting(max_vertices: usize, max_arrows: usize, max_dim: u64) -> impl Strategy<Value = QuiverSetting> {
    setting(max_vertices, max_arrows, max_dim).prop_filter("connected", |s| is_connected(&s.quiver))
}

fn with_permutation(s: impl Strategy<Value = QuiverSetting>) -> impl Strategy<Value = (QuiverSetting, Vec<usize>)> {
    s.prop_flat_map(|s| {
        let order: Vec<usize> = (0..s.vertex_count()).collect();
        (Just(s), Just(order).prop_shuffle())
    })
}

fn vector(n: usize, max: u64) -> impl Strategy<Value = DimensionVector> {
    prop::collection::vec(0..=max, n).prop_map(DimensionVector)
}

/// Every fully reduced setting reachable by some order of reduction steps,
/// up to isomorphism.
fn all_reduction_ends(s: &QuiverSetting, limits: &Limits, ends: &mut BTreeSet<(Vec<u64>, CountMatrix)>) {
    let mut any = false;
    for v in s.quiver.vertices() {
        if let Ok((next, _)) = apply_rci(s, v, limits).unwrap() {
            any = true;
            all_reduction_ends(&next, limits, ends);
        }
    }
    if !any {
        ends.insert(canonical_form(s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chi_is_bilinear(
        (s, a, b, c) in setting(5, 8, 4).prop_flat_map(|s| {
            let n = s.vertex_count();
            (Just(s), vector(n, 4), vector(n, 4), vector(n, 4))
        })
    ) {
        let chi = |x: &DimensionVector, y: &DimensionVector| s.chi(x, y).unwrap();
        let ab = a.checked_add(&b).unwrap();
        let bc = b.checked_add(&c).unwrap();
        prop_assert_eq!(chi(&ab, &c), chi(&a, &c) + chi(&b, &c));
        prop_assert_eq!(chi(&a, &bc), chi(&a, &b) + chi(&a, &c));
        prop_assert_eq!(chi(&a.scaled(3), &b), 3 * chi(&a, &b));
    }

    #[test]
    fn chi_against_unit_vectors_counts_arrows(s in setting(5, 8, 4)) {
        let n = s.vertex_count();
        let alpha = &s.dim;
        for v in 0..n {
            let e = DimensionVector::unit(n, v);
            let into: i64 = s.quiver.arrows().iter().filter(|a| a.head == v).map(|a| alpha[a.tail] as i64).sum();
            let out: i64 = s.quiver.arrows().iter().filter(|a| a.tail == v).map(|a| alpha[a.head] as i64).sum();
            prop_assert_eq!(s.chi(alpha, &e).unwrap(), alpha[v] as i64 - into);
            prop_assert_eq!(s.chi(&e, alpha).unwrap(), alpha[v] as i64 - out);
        }
        let m = s.quiver.euler_matrix();
        for i in 0..n {
            prop_assert!(m.entry(i, i) <= 1);
        }
    }

    #[test]
    fn prime_components_partition_the_arrows(s in connected_setting(5, 8, 2)) {
        let parts = prime_components(&s).unwrap();
        let mut arrows: Vec<usize> = parts.iter().flat_map(|p| p.arrows.iter().copied()).collect();
        arrows.sort();
        prop_assert_eq!(arrows, (0..s.quiver.arrow_count()).collect::<Vec<_>>());
        let vertices: BTreeSet<usize> = parts.iter().flat_map(|p| p.vertices.iter().copied()).collect();
        prop_assert_eq!(vertices.len(), s.vertex_count());
    }

    #[test]
    fn simple_reps_survive_relabelling((s, order) in with_permutation(setting(5, 8, 3))) {
        prop_assert_eq!(has_simple_reps(&s).unwrap(), has_simple_reps(&s.permuted(&order)).unwrap());
    }

    #[test]
    fn cofree_survives_relabelling((s, order) in with_permutation(connected_setting(5, 7, 2))) {
        let limits = Limits::default();
        let a = is_cofree(&s, &limits).unwrap().cofree;
        let b = is_cofree(&s.permuted(&order), &limits).unwrap().cofree;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reduction_order_does_not_matter(s in connected_setting(5, 7, 2)) {
        let limits = Limits::default();
        let mut ends = BTreeSet::new();
        all_reduction_ends(&s, &limits, &mut ends);
        prop_assert_eq!(ends.len(), 1, "{} reduces to {} non-isomorphic settings", s, ends.len());
    }

    #[test]
    fn reduction_keeps_cycle_counts(s in setting(6, 9, 2)) {
        let limits = Limits::default();
        for v in s.quiver.vertices() {
            let Ok((reduced, _)) = apply_rci(&s, v, &limits).unwrap() else { continue };
            for w in s.quiver.vertices().filter(|&w| w != v) {
                let before = count_quasiprimitive_cycles_through_with(&s, w, &limits).unwrap();
                let after = count_quasiprimitive_cycles_through_with(&reduced, w - usize::from(w > v), &limits).unwrap();
                prop_assert_eq!(before, after, "{} at {}, vertex {}", s, v, w);
            }
        }
    }

    #[test]
    fn local_quivers_of_decompositions(
        (s, gamma) in connected_setting(3, 6, 3).prop_flat_map(|s| {
            let n = s.vertex_count();
            (Just(s), prop::collection::vec(1..=3u64, n))
        })
    ) {
        let limits = Limits::default();
        let n: u64 = s.dim.iter().zip(&gamma).map(|(a, g)| a * g).sum();
        for d in enumerate_decompositions(&s, &limits).unwrap() {
            let local = local_quiver(&s, &d, Some(&gamma)).unwrap();
            prop_assert_eq!(local.n, n);
            let total: u64 = local.gamma.iter().zip(local.setting.dim.iter()).map(|(g, m)| g * m).sum();
            prop_assert_eq!(total, n);
            for (u, summand) in d.summands.iter().enumerate() {
                let chi = s.chi(&summand.beta, &summand.beta).unwrap();
                prop_assert_eq!(local.setting.quiver.loop_count(u) as i64, 1 - chi);
            }
        }
    }

    #[test]
    fn nonneg_representative_is_in_the_same_class(
        (n, arrows, lambda) in (2..=6usize).prop_flat_map(|n| {
            prop::collection::vec((0..n - 1, 1..n), 1..=10).prop_flat_map(move |pairs| {
                // arrows point to higher vertices, so the quiver is acyclic
                let arrows: Vec<(usize, usize)> = pairs.into_iter().map(|(t, gap)| (t, (t + gap).min(n - 1))).collect();
                let m = arrows.len();
                (Just(n), Just(arrows), prop::collection::vec(-5i64..=5, m))
            })
        })
    ) {
        let q = Quiver::anonymous(n, &arrows).unwrap();
        let out = nonneg_representative(&q, &lambda).unwrap();
        prop_assert!(out.iter().all(|&x| x >= 0), "{:?}", out);
        // the difference must be a character: δ(a) = θ(h(a)) − θ(t(a))
        let delta: Vec<i64> = lambda.iter().zip(&out).map(|(l, o)| l - o).collect();
        let mut theta: Vec<Option<i64>> = vec![None; n];
        for start in 0..n {
            if theta[start].is_some() {
                continue;
            }
            theta[start] = Some(0);
            let mut changed = true;
            while changed {
                changed = false;
                for (a, &(t, h)) in arrows.iter().enumerate() {
                    match (theta[t], theta[h]) {
                        (Some(x), None) => { theta[h] = Some(x + delta[a]); changed = true; }
                        (None, Some(y)) => { theta[t] = Some(y - delta[a]); changed = true; }
                        _ => {}
                    }
                }
            }
        }
        for (a, &(t, h)) in arrows.iter().enumerate() {
            prop_assert_eq!(delta[a], theta[h].unwrap() - theta[t].unwrap());
        }
    }
}

#[test]
fn pruned_flat_search_matches_the_full_search() {
    let limits = Limits::default();
    for s in reduced_settings(3, 3, 7).unwrap() {
        let pruned = flat_non_azumaya_decomposition(&s, &limits).unwrap();
        let full = flat_non_azumaya_decomposition_unpruned(&s, &limits).unwrap();
        assert_eq!(pruned.is_some(), full.is_some(), "{s}");
    }
}

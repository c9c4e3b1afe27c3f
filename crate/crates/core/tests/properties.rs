use nls_inflation::approx::{assemble, ApproxField};
use nls_inflation::modes::{fl_norm, mode_product, scale_to_physical, wiener_norm, ModeField, ModeIndex, NormSpec, Rational, ScalingParams};
use nls_inflation::resonance::{enumerate_resonant, is_resonant, pad_tuple, quintic_tuple, rectangle_condition, ResonantTuple};
use nls_inflation::spectral::{self, free_propagate, grid_to_modes, modes_to_grid, split_step, SolverConfig};
use nls_inflation::transport::AmplitudeState;
use num_complex::Complex64;
use proptest::prelude::*;

fn field_strategy(dim: usize, radius: i64, max_len: usize) -> impl Strategy<Value = ModeField> {
    let mode = prop::collection::vec(-radius..=radius, dim);
    let coef = (-2.0f64..2.0, -2.0f64..2.0);
    prop::collection::vec((mode, coef), 0..=max_len).prop_map(move |entries| {
        ModeField::from_entries(
            dim,
            entries.into_iter().map(|(m, (re, im))| (ModeIndex::new(&m), Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn mode_strategy(dim: usize, radius: i64) -> impl Strategy<Value = ModeIndex> {
    prop::collection::vec(-radius..=radius, dim).prop_map(|v| ModeIndex::new(&v))
}

proptest! {
    #[test]
    fn fl_zero_one_is_wiener(f in field_strategy(2, 6, 12)) {
        let v = fl_norm(&f, NormSpec::new(0.0, 1.0).unwrap()).unwrap();
        prop_assert_eq!(v, wiener_norm(&f));
    }

    #[test]
    fn wiener_submultiplicative(f in field_strategy(1, 8, 8), g in field_strategy(1, 8, 8)) {
        let fg = mode_product(&f, &g).unwrap();
        prop_assert!(wiener_norm(&fg) <= wiener_norm(&f) * wiener_norm(&g) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn wiener_relabel_invariant(f in field_strategy(2, 5, 10), m in 1i64..50) {
        let relabeled = ModeField::from_entries(2, f.iter().map(|(j, c)| (j.scale(m), *c))).unwrap();
        prop_assert_eq!(relabeled.len(), f.len());
        prop_assert!((wiener_norm(&relabeled) - wiener_norm(&f)).abs() <= 1e-12 * wiener_norm(&f).max(1.0));
    }

    #[test]
    fn fl_dominates_zero_mode(f in field_strategy(2, 3, 10), s in -3.0f64..3.0, p in prop_oneof![1.0f64..6.0, Just(f64::INFINITY)]) {
        let c0 = f.get(&ModeIndex::zero(2)).norm();
        prop_assert!(fl_norm(&f, NormSpec::new(s, p).unwrap()).unwrap() >= c0 * (1.0 - 1e-12));
    }

    #[test]
    fn scaling_preserves_shape(f in field_strategy(1, 5, 8), n in 2u64..6, q in 1u64..3, p in 1u64..3, sigma in 1u32..3) {
        prop_assume!(!f.is_empty());
        let beta = Rational::new(p, q).unwrap();
        let params = ScalingParams::new(beta, sigma, 1, n).unwrap();
        let phys = scale_to_physical(&f, &params, false).unwrap();
        prop_assert_eq!(phys.len(), f.len());
        let factor = params.amplitude_factor();
        for (j, c) in f.iter() {
            let image = phys.get(&j.scale(params.spatial_factor().unwrap()));
            prop_assert!((image - c * factor).norm() <= 1e-12 * (c.norm() * factor));
        }
        let argmax = |g: &ModeField, scale: i64| {
            g.iter().max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap()).map(|(j, _)| j.scale(scale))
        };
        prop_assert_eq!(argmax(&f, params.spatial_factor().unwrap()), argmax(&phys, 1));
    }

    #[test]
    fn rectangle_identity(k in mode_strategy(2, 4), l in mode_strategy(2, 4), m in mode_strategy(2, 4)) {
        let j = k.sub(&l).add(&m);
        let square = k.norm_sq() - l.norm_sq() + m.norm_sq() == j.norm_sq();
        prop_assert_eq!(square, rectangle_condition(&k, &l, &m));
        prop_assert_eq!(square, k.sub(&l).dot(&m.sub(&l)) == 0);
    }

    #[test]
    fn quintic_and_padding_resonant(p in -6i64..=6, q in -6i64..=6, sigma in 2usize..4) {
        prop_assume!(p != 0 && q != 0 && p != q && p != -q);
        let t = quintic_tuple(p, q).unwrap();
        prop_assert!(t.is_resonant());
        let triple = ResonantTuple { entries: vec![p.into(), p.into(), q.into()], target: q.into() };
        for padded in pad_tuple(&triple, sigma).unwrap() {
            prop_assert_eq!(padded.entries.len(), 2 * sigma + 1);
            prop_assert!(is_resonant(&padded.entries, &padded.target).unwrap());
        }
    }

    #[test]
    fn propagator_group(t1 in -1.0f64..1.0, t2 in -1.0f64..1.0, f in field_strategy(1, 7, 6)) {
        let eps = 0.125;
        let g = modes_to_grid(&f, 32).unwrap();
        let a = free_propagate(&free_propagate(&g, t1, eps), t2, eps);
        let b = free_propagate(&g, t1 + t2, eps);
        prop_assert!(a.max_abs_diff(&b) < 1e-12 * (1.0 + g.l2()));
        prop_assert!((free_propagate(&g, t1, eps).l2() - g.l2()).abs() < 1e-12 * (1.0 + g.l2()));
    }

    #[test]
    fn grid_round_trip(f in field_strategy(2, 7, 10)) {
        let g = modes_to_grid(&f, 16).unwrap();
        let mut back = grid_to_modes(&g, 7).unwrap();
        back.prune(1e-13);
        prop_assert!(back.sub(&f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn assemble_at_zero_is_data(f in field_strategy(1, 3, 5), n in 1i64..6) {
        let eps = 1.0 / n as f64;
        let app = ApproxField::first_order(eps, AmplitudeState { time: 0.0, values: f.clone() }).unwrap();
        let phys = app.physical_modes().unwrap();
        let expected = ModeField::from_entries(1, f.iter().map(|(j, c)| (j.scale(n), *c))).unwrap();
        prop_assert_eq!(&phys, &expected);
        let points = spectral::grid_size_for(3, eps, 1);
        let direct = assemble(&app, points).unwrap();
        let via_fft = modes_to_grid(&expected, points).unwrap();
        prop_assert!(direct.max_abs_diff(&via_fft) < 1e-12 * (1.0 + wiener_norm(&f)));
    }

    #[test]
    fn wiener_dominates_negative_regularity(f in field_strategy(1, 20, 12), r in -4.0f64..=0.0, p in 1.0f64..5.0) {
        prop_assert!(fl_norm(&f, NormSpec::new(r, p).unwrap()).unwrap() <= wiener_norm(&f) * (1.0 + 1e-12) + 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swap_symmetry(j in mode_strategy(2, 2)) {
        let set = enumerate_resonant(&j, 1, 3).unwrap();
        for t in &set {
            let swapped = ResonantTuple { entries: vec![t.entries[2].clone(), t.entries[1].clone(), t.entries[0].clone()], target: j.clone() };
            prop_assert!(set.binary_search(&swapped).is_ok());
        }
    }

    #[test]
    fn split_step_conserves_mass(f in field_strategy(1, 3, 4), renormalized in any::<bool>()) {
        prop_assume!(!f.is_empty());
        let eps = 0.125;
        let physical = ModeField::from_entries(1, f.iter().map(|(j, c)| (j.scale(8), *c))).unwrap();
        let g = modes_to_grid(&physical, spectral::grid_size_for(3, eps, 1)).unwrap();
        let cfg = SolverConfig::new(eps, 1, renormalized).unwrap();
        let t = 0.25;
        let u = split_step(&g, &cfg, t).unwrap();
        prop_assert!((u.mass() - g.mass()).abs() <= 1e-10 * t * g.mass().max(1.0));
    }
}

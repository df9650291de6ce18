use hyperpure_core::efficiency::{p_one, p_two, ratio_r, sweep, EfficiencyParams, SweepAxis};
use hyperpure_core::optics::{
    apply_network, apply_network_with, hadamard_pol, hadamard_spatial, undo_network_with,
    LocalGateTable,
};
use hyperpure_core::protocol::{
    closed_form_fidelity_pair, closed_form_success_pair, run_bitflip, run_phaseflip,
};
use hyperpure_core::scenario::{bitflip_pair, general_mixture, phaseflip_pair};
use hyperpure_core::state::{BasisLabel, Layout, PureState};
use num_complex::Complex64;
use proptest::prelude::*;

fn random_hyper(m: usize) -> impl Strategy<Value = PureState> {
    let dim = 1usize << (2 * m);
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "zero vector",
        move |amps| {
            let norm: f64 = amps
                .iter()
                .map(|(re, im)| re * re + im * im)
                .sum::<f64>()
                .sqrt();
            if norm < 1e-3 {
                return None;
            }
            let terms = amps.iter().enumerate().map(|(idx, &(re, im))| {
                let label = BasisLabel::new((idx >> m) as u32, (idx & ((1 << m) - 1)) as u32);
                (label, Complex64::new(re / norm, im / norm))
            });
            PureState::from_terms(m, Layout::Hyper, terms).ok()
        },
    )
}

fn fid() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hadamards_are_involutions(state in (2usize..=3).prop_flat_map(random_hyper)) {
        let twice = hadamard_pol(&hadamard_pol(&state).unwrap()).unwrap();
        prop_assert!(twice.approx_eq(&state, 1e-12));
        let twice = hadamard_spatial(&hadamard_spatial(&state).unwrap()).unwrap();
        prop_assert!(twice.approx_eq(&state, 1e-12));
        let once = hadamard_pol(&state).unwrap();
        prop_assert!((once.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn network_preserves_norm_and_inverts(state in (2usize..=3).prop_flat_map(random_hyper)) {
        let table = LocalGateTable::standard();
        let out = apply_network(&state).unwrap();
        prop_assert_eq!(out.layout(), Layout::Ports);
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(out.len(), state.len());
        let back = undo_network_with(&table, &apply_network_with(&table, &state).unwrap()).unwrap();
        prop_assert!(back.approx_eq(&state, 1e-12));
    }

    #[test]
    fn bitflip_matches_closed_form(m in 2usize..=5, fa in fid(), fb in fid()) {
        let r = run_bitflip(&bitflip_pair(m, fa, fb).unwrap()).unwrap();
        let total: f64 = r.pattern_probabilities.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!((r.success_probability + r.rejected_probability - 1.0).abs() < 1e-12);
        prop_assert!((r.success_probability - closed_form_success_pair(fa, fb)).abs() < 1e-12);
        prop_assert!((r.output_fidelity.unwrap() - closed_form_fidelity_pair(fa, fb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn phaseflip_matches_closed_form(m in 2usize..=4, fa in fid(), fb in fid()) {
        let r = run_phaseflip(&phaseflip_pair(m, fa, fb).unwrap()).unwrap();
        prop_assert!((r.success_probability - closed_form_success_pair(fa, fb)).abs() < 1e-12);
        prop_assert!((r.output_fidelity.unwrap() - closed_form_fidelity_pair(fa, fb).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn purification_gain(fa in 0.51f64..0.99, fb in 0.51f64..0.99) {
        let f = closed_form_fidelity_pair(fa, fb).unwrap();
        prop_assert!(f > fa.max(fb));
    }

    #[test]
    fn general_probabilities_conserved(
        w in prop::collection::vec(0.01f64..1.0, 8),
    ) {
        let (a, b) = w.split_at(4);
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        let a: Vec<f64> = a.iter().map(|x| x / sa).collect();
        let b: Vec<f64> = b.iter().map(|x| x / sb).collect();
        let r = run_bitflip(&general_mixture(3, &a, &b).unwrap()).unwrap();
        let total: f64 = r.pattern_probabilities.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let expect: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        prop_assert!((r.success_probability - expect).abs() < 1e-12);
    }

    #[test]
    fn efficiency_identities(
        n in 2u32..=12,
        l in 0.0f64..200.0,
        l0 in 5.0f64..50.0,
        eta_d in 0.05f64..1.0,
        eta_c in 0.05f64..1.0,
        p1 in 0.01f64..1.0,
    ) {
        let p = EfficiencyParams { eta_d, eta_c, distance_km: l, attenuation_km: l0, photons: n, p1 };
        let one = p_one(&p).unwrap();
        let two = p_two(&p).unwrap();
        let r = ratio_r(&p).unwrap();
        prop_assert!(((r * two - one) / one).abs() < 1e-12);
        prop_assert!(r >= 4.0);
        let q = EfficiencyParams { p1: 1.0, ..p };
        prop_assert_eq!(ratio_r(&q).unwrap(), r);
    }

    #[test]
    fn sweeps_increase(n in 2u32..=8, from in 0.0f64..50.0, span in 1.0f64..100.0) {
        let rows = sweep(&EfficiencyParams::new(n, 0.0), SweepAxis::Distance, from, from + span, 1.0).unwrap();
        prop_assert!(rows.windows(2).all(|w| w[1].r > w[0].r));
        let rows = sweep(&EfficiencyParams::new(2, from), SweepAxis::Photons, 2.0, 2.0 + span.floor(), 1.0).unwrap();
        prop_assert!(rows.windows(2).all(|w| w[1].r > w[0].r));
    }
}

#[test]
fn fidelity_independent_of_photon_count() {
    let reference = run_bitflip(&bitflip_pair(2, 0.8, 0.7).unwrap())
        .unwrap()
        .output_fidelity
        .unwrap();
    for m in 3..=8 {
        let f = run_bitflip(&bitflip_pair(m, 0.8, 0.7).unwrap())
            .unwrap()
            .output_fidelity
            .unwrap();
        assert!((f - reference).abs() < 1e-12, "m={m}");
    }
    assert!((reference - 0.56 / 0.62).abs() < 1e-12);
}

use hyperpure_core::noise::{mix_two, product_ensemble};
use hyperpure_core::oracle::{check_case, densify, DenseState};
use hyperpure_core::scenario::{bitflip_pair, standard_cases, MODES};
use hyperpure_core::state::{make_ghz_pol, make_ghz_spatial, tensor_hyper, Ensemble, Sign};
use nalgebra::DMatrix;
use num_complex::Complex64;

fn eigenvalues(d: &DenseState) -> Vec<f64> {
    let n = d.dim();
    let m = DMatrix::<Complex64>::from_row_slice(n, n, d.matrix().as_slice());
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

#[test]
fn engine_matches_oracle_for_all_modes() {
    for m in 2..=4 {
        let mut worst = [0.0f64; 4];
        for case in standard_cases(m).unwrap() {
            let dev = check_case(&case).unwrap();
            let slot = MODES.iter().position(|&x| x == case.mode).unwrap();
            worst[slot] = worst[slot].max(dev);
            assert!(dev < 1e-10, "{} {}: {dev}", case.mode, case.label);
        }
        println!("m={m} worst deviations {worst:?}");
    }
}

#[test]
fn bitflip_mixture_spectrum() {
    let d = densify(&bitflip_pair(3, 0.8, 0.7).unwrap()).unwrap();
    let ev = eigenvalues(&d);
    let expect = [0.56, 0.24, 0.14, 0.06];
    for (a, b) in ev.iter().zip(expect) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(ev[4..].iter().all(|v| v.abs() < 1e-12));
    assert!(ev.iter().all(|&v| v > -1e-12));
}

#[test]
fn pure_and_half_mixture_spectrum() {
    let a = tensor_hyper(
        &make_ghz_pol(3, 0, Sign::Plus).unwrap(),
        &make_ghz_spatial(3, 0, Sign::Plus).unwrap(),
    )
    .unwrap();
    let b = tensor_hyper(
        &make_ghz_pol(3, 0, Sign::Minus).unwrap(),
        &make_ghz_spatial(3, 0, Sign::Plus).unwrap(),
    )
    .unwrap();
    let pure = densify(&Ensemble::pure(a.clone())).unwrap();
    let ev = eigenvalues(&pure);
    assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
    let half = densify(&Ensemble::new(vec![(0.5, a), (0.5, b)]).unwrap()).unwrap();
    let ev = eigenvalues(&half);
    assert!((ev[0] - 0.5).abs() < 1e-12 && (ev[1] - 0.5).abs() < 1e-12 && ev[2].abs() < 1e-12);
}

#[test]
fn phaseflip_noise_keeps_trace_and_hermiticity() {
    let p = mix_two(
        &make_ghz_pol(4, 0, Sign::Plus).unwrap(),
        &make_ghz_pol(4, 0, Sign::Minus).unwrap(),
        0.3,
    )
    .unwrap();
    let s = mix_two(
        &make_ghz_spatial(4, 0, Sign::Plus).unwrap(),
        &make_ghz_spatial(4, 3, Sign::Plus).unwrap(),
        0.6,
    )
    .unwrap();
    let d = densify(&product_ensemble(&p, &s).unwrap()).unwrap();
    assert!((d.trace() - 1.0).abs() < 1e-12);
    assert!(d.is_hermitian(1e-15));
    assert!((d.purity() - (0.09 + 0.49) * (0.36 + 0.16)).abs() < 1e-12);
}

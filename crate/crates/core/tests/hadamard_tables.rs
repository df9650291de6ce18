mod support;

use hyperpure_core::optics::{hadamard_pol, hadamard_spatial};
use hyperpure_core::state::{make_ghz_pol, make_ghz_spatial, Sign};
use support::tables::{printed_pol, printed_spatial, term_deviation, IMAGE_INDEX};

#[test]
fn polarization_images() {
    for (i, &j) in IMAGE_INDEX.iter().enumerate() {
        for sign in [Sign::Plus, Sign::Minus] {
            let image = hadamard_pol(&make_ghz_pol(3, i, sign).unwrap()).unwrap();
            let expect = printed_pol(j, sign == Sign::Plus);
            let dev =
                term_deviation(&image, &expect, 1.0).min(term_deviation(&image, &expect, -1.0));
            assert!(dev < 1e-12, "Phi_{i}{sign:?}: {dev}");
        }
    }
}

#[test]
fn spatial_images() {
    for (i, &j) in IMAGE_INDEX.iter().enumerate() {
        for sign in [Sign::Plus, Sign::Minus] {
            let image = hadamard_spatial(&make_ghz_spatial(3, i, sign).unwrap()).unwrap();
            let expect = printed_spatial(j, sign == Sign::Plus);
            let dev =
                term_deviation(&image, &expect, 1.0).min(term_deviation(&image, &expect, -1.0));
            assert!(dev < 1e-12, "phi_{i}{sign:?}: {dev}");
        }
    }
}

#[test]
fn minus_states_with_odd_images_carry_a_global_sign() {
    let mut flipped = Vec::new();
    for (i, &j) in IMAGE_INDEX.iter().enumerate() {
        for sign in [Sign::Plus, Sign::Minus] {
            let image = hadamard_pol(&make_ghz_pol(3, i, sign).unwrap()).unwrap();
            let expect = printed_pol(j, sign == Sign::Plus);
            if term_deviation(&image, &expect, 1.0) > 1e-12 {
                flipped.push((i, sign));
            }
        }
    }
    assert_eq!(flipped, vec![(1, Sign::Minus), (3, Sign::Minus)]);
}

#[test]
fn printed_tables_are_orthonormal() {
    let states: Vec<_> = (0..4)
        .flat_map(|i| [printed_pol(i, true), printed_pol(i, false)])
        .collect();
    for (a, x) in states.iter().enumerate() {
        for (b, y) in states.iter().enumerate() {
            let o = x.inner(y).unwrap().norm();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((o - expect).abs() < 1e-12);
        }
    }
}

//! Class polynomials against a direct evaluation at every reduced form.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specpoint::ball::CBall;
use specpoint::cm::{class_number, class_poly, j_eval, reduced_forms, Disc};

fn vanishes_at_all_forms(v: i64) {
    let Ok(disc) = Disc::new(-v) else { return };
    let cp = class_poly(disc).unwrap();
    assert_eq!(cp.coeffs.deg(), class_number(disc), "degree, D = -{v}");
    assert_eq!(cp.coeffs.lc(), BigInt::from(1), "monic, D = -{v}");
    let prec = cp.precision + 32;
    let coeffs: Vec<CBall> = cp.coeffs.coeffs().iter().map(|c| CBall::from_bigint(c, prec)).collect();
    for f in reduced_forms(disc) {
        let z = j_eval(&f.tau(prec + 16), prec).unwrap();
        let acc = coeffs.iter().rev().fold(CBall::zero(prec), |acc, c| acc.mul(&z).add(c));
        assert!(acc.contains_zero(), "D = -{v}, form {f:?}");
    }
}

#[test]
fn exhaustive_small_discriminants() {
    for v in 3..=2000 {
        vanishes_at_all_forms(v);
    }
}

#[test]
fn sampled_discriminants_up_to_ten_thousand() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    while done < 12 {
        let v: i64 = rng.gen_range(2001..=10_000);
        if Disc::new(-v).is_ok() {
            vanishes_at_all_forms(v);
            done += 1;
        }
    }
}

#[test]
fn certification_margins_are_small() {
    for v in [3i64, 4, 7, 8, 11, 15, 23, 71, 191, 199] {
        let cp = class_poly(Disc::new(-v).unwrap()).unwrap();
        assert!(cp.cert_margin < 0.25, "D = -{v}: {}", cp.cert_margin);
    }
}

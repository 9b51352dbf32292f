//! Norm forms over quadratic fields against the conjugate product.

use num_rational::BigRational;
use proptest::prelude::*;
use specpoint::poly::{norm_form, BivarPoly, FieldPoly, IntPoly, NumberFieldSpec};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn bivar() -> impl Strategy<Value = BivarPoly> {
    proptest::collection::vec(((0u32..=3, 0u32..=3), -9i64..=9), 1..6)
        .prop_map(|t| BivarPoly::from_terms(t.into_iter().map(|(k, c)| (k, q(c)))))
}

fn lift(a: &BivarPoly, b: &BivarPoly) -> FieldPoly {
    let mut f = FieldPoly::zero();
    for (&(i, j), c) in a.terms() {
        f.add_term(c.clone(), i, j, 0);
    }
    for (&(i, j), c) in b.terms() {
        f.add_term(c.clone(), i, j, 1);
    }
    f
}

#[test]
fn documented_examples() {
    let sqrt2 = NumberFieldSpec::new(IntPoly::from_i64s(&[-2, 0, 1]), 0, false).unwrap();
    let f = lift(&BivarPoly::x(), &BivarPoly::y());
    let expect = BivarPoly::x().pow(2).sub(&BivarPoly::y().pow(2).scale(&q(2)));
    assert_eq!(norm_form(&f, &sqrt2).unwrap(), expect);

    let gauss = NumberFieldSpec::new(IntPoly::from_i64s(&[1, 0, 1]), 0, false).unwrap();
    let f = lift(&BivarPoly::x(), &BivarPoly::from_i64(1));
    assert_eq!(norm_form(&f, &gauss).unwrap(), BivarPoly::x().pow(2).add(&BivarPoly::from_i64(1)));
}

proptest! {
    #[test]
    fn quadratic_norm_is_conjugate_product(a in bivar(), b in bivar(), pick in 0usize..4) {
        let r = [2i64, 3, -1, -7][pick];
        let k = NumberFieldSpec::new(IntPoly::from_i64s(&[-r, 0, 1]), 0, false).unwrap();
        let f = lift(&a, &b);
        prop_assume!(!f.is_zero());
        let expect = a.mul(&a).sub(&b.mul(&b).scale(&q(r)));
        prop_assert_eq!(norm_form(&f, &k).unwrap(), expect);
    }
}

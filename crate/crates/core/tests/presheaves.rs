mod common;

use boolean_frames::boolean_algebra::BooleanHom;
use boolean_frames::presheaf::{
    category_of_elements, enumerate_natural_transformations, naturality_witness, tensor_product, validate_category,
    validate_model, validate_presheaf, yoneda_full_faithful_check, FunctorLaw, SetPresheaf,
};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn powerset_models_are_functors() {
    for k in 1..=3 {
        let m = model(k);
        assert!(validate_category(m.base()).is_ok());
        assert!(validate_model(&m).is_ok());
    }
    assert_eq!(model(3).base().arrows().len(), 56);
}

#[test]
fn a_replaced_arrow_breaks_the_functor() {
    let m = model(2);
    let b = object(&m, 2);
    let swap = m
        .base()
        .hom(b, b)
        .into_iter()
        .find(|&v| v != m.base().identity(b) && m.hom(v).apply(1) == 2)
        .unwrap();
    let id = m.base().identity(b);
    let broken = m.with_arrow_hom(id, BooleanHom::clone(m.hom(swap)));
    assert!(validate_model(&broken).cites(&FunctorLaw::Identity));
}

#[test]
fn yoneda_is_full_and_faithful() {
    for k in 1..=3 {
        let r = yoneda_full_faithful_check(model(k).base()).unwrap();
        assert!(r.holds, "{:?}", r.failure);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_presheaves_are_valid_with_discrete_fibrations(seed in any::<u64>()) {
        let m = model(3);
        let x = random_presheaf(&m, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(validate_presheaf(&x).is_ok());
        let el = category_of_elements(&x);
        prop_assert!(el.projection_is_functor());
        prop_assert!(el.fibres_are_discrete());
        prop_assert_eq!(el.objects().len(), x.point_count());
    }

    #[test]
    fn union_find_quotient_matches_relaxation(seed in any::<u64>()) {
        let m = model(3);
        let x = random_presheaf(&m, &mut ChaCha8Rng::seed_from_u64(seed));
        let q = tensor_product(&x, &m).unwrap();
        prop_assert_eq!(library_partition(&q), naive_quotient(&x, &m));
    }

    #[test]
    fn yoneda_counts_points(seed in any::<u64>()) {
        let m = model(2);
        let x = random_presheaf(&m, &mut ChaCha8Rng::seed_from_u64(seed));
        for xi in 0..m.base().object_count() {
            let y = SetPresheaf::representable(m.base().clone(), xi).unwrap();
            let nats = enumerate_natural_transformations(&y, &x).unwrap();
            prop_assert_eq!(nats.len(), x.points(xi).len());
            for tau in &nats {
                prop_assert!(naturality_witness(&y, &x, tau).is_none());
            }
        }
    }
}

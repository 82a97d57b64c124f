use fintetris::enumerate::{enum_fin_upto, enum_surjections};
use fintetris::{FinVector, Image, TetrisMap};
use proptest::prelude::*;

/// Values of `f` applied pointwise, `None` for the zero function.
fn pointwise(f: &TetrisMap, values: &[u8]) -> Option<Vec<u8>> {
    let out: Vec<u8> = values.iter().map(|&v| f.image()[v as usize]).collect();
    out.iter().any(|&v| v > 0).then_some(out)
}

fn image_values(i: &Image) -> Option<Vec<u8>> {
    i.as_vector().map(|v| v.values().to_vec())
}

fn all_maps(k: u8) -> Vec<TetrisMap> {
    (0..=k).flat_map(|j| enum_surjections(k, j).unwrap()).collect()
}

#[test]
fn homomorphism_law_exhaustive() {
    for k in 1..=3u8 {
        let maps = all_maps(k);
        for n in 1..=5 {
            let elems: Vec<FinVector> = enum_fin_upto(k, n).unwrap().collect();
            for a in &elems {
                for b in elems.iter().filter(|b| a.max_support() < b.min_support()) {
                    let sum = a.ordered_sum(b).unwrap();
                    for f in &maps {
                        let lhs = image_values(&f.apply(&sum).unwrap());
                        let rhs: Vec<u8> = a.values().iter().zip(b.values()).map(|(&x, &y)| {
                            f.image()[x as usize] + f.image()[y as usize]
                        }).collect();
                        let rhs = rhs.iter().any(|&v| v > 0).then_some(rhs);
                        assert_eq!(lhs, rhs, "f = {f}, b = {a}, b' = {b}");
                        let tolerant = f.apply(a).unwrap().ordered_sum(&f.apply(b).unwrap()).unwrap();
                        assert_eq!(image_values(&tolerant), lhs);
                    }
                }
            }
        }
    }
}

#[test]
fn compose_is_associative_with_neutral_identity() {
    for k in 0..=4u8 {
        let outer_all: Vec<TetrisMap> = all_maps(k);
        for f in &outer_all {
            assert_eq!(f.compose(&TetrisMap::identity(k)).unwrap(), *f);
            assert_eq!(TetrisMap::identity(f.j()).compose(f).unwrap(), *f);
            for g in all_maps(f.j()) {
                let gf = g.compose(f).unwrap();
                let expected: Vec<u8> = (0..=k).map(|v| g.image()[f.image()[v as usize] as usize]).collect();
                assert_eq!(gf.image(), &expected[..]);
                for h in all_maps(g.j()) {
                    assert_eq!(h.compose(&gf).unwrap(), h.compose(&g).unwrap().compose(f).unwrap());
                }
            }
        }
    }
}

#[test]
fn compose_rejects_mismatched_arity() {
    let f = TetrisMap::basic(1, 2).unwrap();
    assert!(f.compose(&TetrisMap::basic(1, 2).unwrap()).is_err());
    let zero = TetrisMap::basic(1, 1).unwrap().compose(&f).unwrap();
    assert_eq!(zero.image(), [0, 0, 0]);
}

fn vector_strategy() -> impl Strategy<Value = (u8, Vec<u8>)> {
    (1..=4u8, 1..=7usize).prop_flat_map(|(k, n)| {
        proptest::collection::vec(0..=k, n)
            .prop_filter("nonzero", |v| v.iter().any(|&x| x > 0))
            .prop_map(move |v| (k, v))
    })
}

fn pair_strategy() -> impl Strategy<Value = (u8, Vec<u8>, Vec<u8>)> {
    (1..=4u8, 1..=7usize).prop_flat_map(|(k, n)| {
        let v = proptest::collection::vec(0..=k, n).prop_filter("nonzero", |v| v.iter().any(|&x| x > 0));
        (v.clone(), v).prop_map(move |(a, b)| (k, a, b))
    })
}

proptest! {
    #[test]
    fn support_shrinks_and_layer_maps((k, values) in vector_strategy(), pick in any::<prop::sample::Index>()) {
        let b = FinVector::new(&values.iter().map(|&v| v as i64).collect::<Vec<_>>(), k as i64).unwrap();
        let maps = all_maps(k);
        let f = pick.get(&maps);
        let img = f.apply(&b).unwrap();
        prop_assert_eq!(image_values(&img), pointwise(f, &values));
        let old = b.support();
        let min_entry = values.iter().copied().filter(|&v| v > 0).min().unwrap();
        let keeps_all = (min_entry..=k).all(|v| f.image()[v as usize] >= 1);
        match img.as_vector() {
            None => prop_assert!(!keeps_all),
            Some(w) => {
                prop_assert!(w.support().is_subset(&old));
                prop_assert_eq!(w.support() == old, keeps_all);
                prop_assert_eq!(w.k_bound(), f.j());
                if b.layer() == k {
                    prop_assert_eq!(w.layer(), f.j());
                }
            }
        }
    }

    #[test]
    fn accepted_maps_are_valid(raw in proptest::collection::vec(0i64..=4, 1..=8)) {
        let valid = raw[0] == 0
            && raw.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
        match TetrisMap::new(&raw) {
            Ok(f) => {
                prop_assert!(valid);
                prop_assert_eq!(f.image().iter().map(|&v| v as i64).collect::<Vec<_>>(), raw);
            }
            Err(_) => prop_assert!(!valid),
        }
    }

    #[test]
    fn ordered_sum_is_defined_exactly_on_ordered_supports((k, a, b) in pair_strategy()) {
        let to_i = |v: &[u8]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
        let x = FinVector::new(&to_i(&a), k as i64).unwrap();
        let y = FinVector::new(&to_i(&b), k as i64).unwrap();
        let ordered = x.max_support() < y.min_support();
        match x.ordered_sum(&y) {
            Ok(s) => {
                prop_assert!(ordered);
                let expected: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
                prop_assert_eq!(s.values(), &expected[..]);
            }
            Err(_) => prop_assert!(!ordered),
        }
    }
}

use std::collections::BTreeSet;

use fintetris::enumerate::*;
use fintetris::{FinVector, TetrisMap};

/// Every digit string over `0..=k` of length `n`, in lexicographic order.
fn all_strings(k: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=k).map(move |d| {
                    let mut v = prefix.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

fn digits(v: &FinVector) -> Vec<u8> {
    v.values().to_vec()
}

#[test]
fn fin_matches_brute_force_filter() {
    for k in 1..=4u8 {
        for n in 1..=6 {
            let expected: Vec<Vec<u8>> = all_strings(k, n)
                .into_iter()
                .filter(|s| s.iter().max() == Some(&k))
                .collect();
            let got: Vec<Vec<u8>> = enum_fin(k, n).unwrap().map(|v| digits(&v)).collect();
            assert_eq!(got, expected, "FIN_{k}({n})");
            assert_eq!(got.len() as u128, fin_count(k, n));

            let upto: Vec<FinVector> = enum_fin_upto(k, n).unwrap().collect();
            assert_eq!(upto.len() as u128, fin_upto_count(k, n));
            assert!(upto.iter().all(|v| v.k_bound() == k && v.layer() >= 1));
            assert!(upto.windows(2).all(|w| (w[0].layer(), &w[0]) < (w[1].layer(), &w[1])));
        }
    }
}

#[test]
fn surjections_match_brute_force_filter() {
    for k in 0..=6u8 {
        for j in 0..=k {
            let expected: Vec<Vec<u8>> = all_strings(j, k as usize + 1)
                .into_iter()
                .filter(|s| s[0] == 0 && s[k as usize] == j && s.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1))
                .collect();
            let got: Vec<Vec<u8>> = enum_surjections(k, j).unwrap().map(|f| f.image().to_vec()).collect();
            assert_eq!(got, expected, "k = {k}, j = {j}");
            assert_eq!(got.len() as u128, surjection_count(k, j));
        }
    }
}

#[test]
fn block_sequences_match_brute_force_filter() {
    for k in 1..=2u8 {
        for n in 1..=5 {
            let elems: Vec<FinVector> = enum_fin(k, n).unwrap().collect();
            for ell in 1..=3 {
                // all ell-tuples, lexicographic, kept when supports are ordered
                let mut expected: Vec<Vec<FinVector>> = vec![Vec::new()];
                for _ in 0..ell {
                    expected = expected
                        .into_iter()
                        .flat_map(|p| {
                            elems.iter().map(move |e| {
                                let mut q = p.clone();
                                q.push(e.clone());
                                q
                            })
                        })
                        .collect();
                }
                expected.retain(|t| t.windows(2).all(|w| w[0].max_support() < w[1].min_support()));
                let got: Vec<Vec<FinVector>> =
                    enum_block_sequences(k, n, ell).unwrap().map(|b| b.blocks().to_vec()).collect();
                assert_eq!(got, expected, "k = {k}, n = {n}, ell = {ell}");
            }
        }
    }
}

#[test]
fn block_sequence_counts_match_generator() {
    for k in 1..=4u8 {
        for n in 1..=6 {
            for ell in 1..=4 {
                let got = enum_block_sequences(k, n, ell).unwrap().count();
                assert_eq!(got as u128, block_sequence_count(k, n, ell), "k = {k}, n = {n}, ell = {ell}");
            }
        }
    }
}

#[test]
fn generators_are_deterministic_and_valid() {
    let a: Vec<String> = enum_block_sequences(2, 5, 2).unwrap().map(|b| b.to_string()).collect();
    let b: Vec<String> = enum_block_sequences(2, 5, 2).unwrap().map(|b| b.to_string()).collect();
    assert_eq!(a, b);
    assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), a.len());
    for bs in enum_block_sequences(3, 5, 3).unwrap() {
        let text: Vec<String> = bs.blocks().iter().map(|v| v.to_string()).collect();
        let refs: Vec<&str> = text.iter().map(String::as_str).collect();
        assert_eq!(fintetris::BlockSequence::from_digits(&refs, 3).unwrap(), bs);
    }
    for f in enum_surjections(5, 3).unwrap() {
        let raw: Vec<i64> = f.image().iter().map(|&v| v as i64).collect();
        assert_eq!(TetrisMap::new(&raw).unwrap(), f);
    }
}

#[test]
fn invalid_parameters() {
    assert!(enum_fin(0, 3).is_err());
    assert!(enum_fin(10, 3).is_err());
    assert!(enum_fin(2, 0).is_err());
    assert!(enum_surjections(2, 3).is_err());
    assert!(enum_block_sequences(1, 3, 0).is_err());
    let cfg = EnumConfig { k: 2, n: 3, j: Some(3), ell: None, limit: None };
    assert!(cfg.validate().is_err());
}

#[test]
fn seeded_sampler_is_reproducible() {
    use rand::SeedableRng;
    let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let x = sample_block_sequence(&mut a, 2, 8, 3).unwrap();
        let y = sample_block_sequence(&mut b, 2, 8, 3).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 3);
    }
}

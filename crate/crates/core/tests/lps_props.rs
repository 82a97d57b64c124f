use std::collections::BTreeSet;

use fintetris::lps::*;
use proptest::prelude::*;

/// Largest nonzero digit position of an element name (`None` for `e`).
fn reach(name: &str) -> Option<usize> {
    name.bytes().rposition(|b| b.is_ascii_digit() && b != b'0')
}

fn subsets(set: &[usize], horizon: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            out.push(chosen.clone());
        }
        if chosen.len() == horizon {
            continue;
        }
        for i in start..set.len() {
            let mut next = chosen.clone();
            next.push(set[i]);
            stack.push((i + 1, next));
        }
    }
    out
}

/// Replays a counterexample through the definition it claims to violate.
fn replay(t: &PartialSemigroupTable, scope: &Scope, axiom: &str, set: &[usize], v: &Violation) -> bool {
    let inside = |x: usize| set.contains(&x);
    match v {
        Violation::Associativity { x, y, z, left, right } => {
            let l = t.product(*x, *y).and_then(|p| t.product(p, *z));
            let r = t.product(*y, *z).and_then(|q| t.product(*x, q));
            l == *left && r == *right && l != r
        }
        Violation::Identity { x, left, right } => {
            let e = t.identity().unwrap();
            t.product(e, *x) == *left && t.product(*x, e) == *right && (*left != Some(*x) || *right != Some(*x))
        }
        Violation::Closure { x, y, product } => {
            inside(*x) && inside(*y) && t.product(*x, *y) == Some(*product) && !inside(*product)
        }
        Violation::Ideal { x, y, product } => {
            inside(*x)
                && (t.product(*x, *y) == Some(*product) || t.product(*y, *x) == Some(*product))
                && !inside(*product)
        }
        Violation::Adequacy { subset, .. } => {
            subset.iter().all(|&x| inside(x))
                && set.iter().all(|&y| subset.iter().any(|&x| t.product(x, y).is_none()))
        }
        other => panic!("{axiom} on {scope}: no replay for {other:?}"),
    }
}

fn layer_members(t: &PartialSemigroupTable, scope: &Scope, layer_of: impl Fn(usize) -> usize) -> Vec<usize> {
    (0..t.len())
        .filter(|&x| match scope {
            Scope::Table => true,
            Scope::Layer(n) | Scope::LayerInCone(n) => layer_of(x) == *n,
            Scope::Cone(n) => layer_of(x) <= *n,
            _ => false,
        })
        .collect()
}

#[test]
fn fin_instances_pass_every_check() {
    for k in 1..=3u8 {
        for dim in 1..=4 {
            let report = check_fin_instance(k, dim, 2).unwrap();
            assert!(report.passed(), "k = {k}, dim = {dim}\n{report}");
            let (ls, act) = fin_instance(k, dim).unwrap();
            assert!(check_associativity(ls.table()).passed());
            assert_eq!(act.families.iter().map(Vec::len).collect::<Vec<_>>(), (1..=k as usize).collect::<Vec<_>>());
        }
    }
}

#[test]
fn adequacy_failures_sit_on_the_boundary() {
    for k in 1..=2u8 {
        for dim in 1..=4 {
            let (ls, _) = fin_instance(k, dim).unwrap();
            let t = ls.table();
            let report = check_layered(&ls, 2).unwrap();
            for n in 1..=k as usize {
                let layer = ls.layer(n);
                let mut empty = 0;
                for a in subsets(layer, 2) {
                    let common = layer.iter().any(|&y| a.iter().all(|&x| t.product(x, y).is_some()));
                    if !common {
                        empty += 1;
                        let far = a.iter().filter_map(|&x| reach(t.name(x))).max();
                        assert_eq!(far, Some(dim - 1), "structural failure {a:?}");
                    }
                }
                let r = report.get("adequacy", &Scope::Layer(n)).unwrap();
                assert_eq!(r.boundary, empty);
                assert_eq!(r.failures, 0);
            }
        }
    }
}

#[test]
fn failing_reports_replay() {
    // a structure where layer 1 is not an ideal and adequacy is unclassified
    let (ls, act) = fin_instance(2, 3).unwrap();
    let t = ls.table();
    let layer_of = |x: usize| ls.layer_of(x);
    let swapped = LayeredStructure::new(t.clone(), vec![ls.layer(0).to_vec(), ls.layer(2).to_vec(), ls.layer(1).to_vec()])
        .unwrap();
    let report = check_layered(&swapped, 1).unwrap();
    assert!(!report.passed());
    let swapped_layer = |x: usize| match layer_of(x) {
        1 => 2,
        2 => 1,
        l => l,
    };
    for r in report.failed() {
        let set = layer_members(t, &r.scope, swapped_layer);
        for c in &r.examples {
            assert!(replay(t, &r.scope, r.axiom, &set, &c.violation), "{} {}", r.axiom, c.text);
        }
    }

    let mut broken = act.clone();
    let x = t.index_of("120").unwrap();
    broken.families[1][0].images[x] = Some(t.index_of("110").unwrap());
    let report = check_tetris_action(&ls, &broken).unwrap();
    let hom = report.get("homomorphism", &Scope::Map { n: 2, map: 0 }).unwrap();
    assert!(!hom.passed());
    let sigma = &broken.families[1][0].images;
    for c in &hom.examples {
        let Violation::Homomorphism { x, y, product, image_product } = c.violation else { panic!() };
        assert_eq!(t.product(x, y), Some(product));
        let ip = t.product(sigma[x].unwrap(), sigma[y].unwrap());
        assert_eq!(ip, image_product);
        assert_ne!(ip, sigma[product]);
    }
    let c3 = report.get("condition 3", &Scope::Map { n: 2, map: 0 }).unwrap();
    assert!(c3.passed(), "the change is above S_<=1");
}

#[test]
fn condition_three_detects_foreign_restrictions() {
    let (ls, mut act) = fin_instance(2, 2).unwrap();
    let t = ls.table();
    // T_1 restricted to S_<=1 sends 10 to e; redirect it to 01 instead
    act.families[1][0].images[t.index_of("10").unwrap()] = Some(t.index_of("01").unwrap());
    let report = check_tetris_action(&ls, &act).unwrap();
    assert!(!report.get("condition 3", &Scope::Map { n: 2, map: 0 }).unwrap().passed());
    assert!(report.get("condition 3", &Scope::Map { n: 2, map: 1 }).unwrap().passed());
}

fn table_strategy() -> impl Strategy<Value = (usize, Vec<Option<usize>>)> {
    (1..=4usize).prop_flat_map(|n| {
        proptest::collection::vec(proptest::option::weighted(0.5, 0..n), n * n).prop_map(move |op| (n, op))
    })
}

fn build(n: usize, op: &[Option<usize>], with_identity: bool) -> PartialSemigroupTable {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let triples: Vec<(String, String, String)> = (0..n * n)
        .filter_map(|i| op[i].map(|z| (names[i / n].clone(), names[i % n].clone(), names[z].clone())))
        .collect();
    let e = with_identity.then_some("x0");
    PartialSemigroupTable::new(names.clone(), e, triples.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())))
        .unwrap()
}

proptest! {
    #[test]
    fn random_tables_replay((n, op) in table_strategy(), sub_mask in 0u32..16) {
        let t = build(n, &op, true);
        let sub: Vec<usize> = (0..n).filter(|&x| sub_mask >> x & 1 == 1).collect();
        let all: Vec<usize> = (0..n).collect();
        let mut reports = vec![
            (check_associativity(&t), all.clone()),
            (check_identity(&t), all.clone()),
            (check_adequate(&t, 3).unwrap(), all.clone()),
            (check_closed(&sub, &t).unwrap(), sub.clone()),
            (check_ideal(&sub, &t).unwrap(), sub.clone()),
        ];
        for (report, set) in reports.drain(..) {
            for r in &report.results {
                prop_assert_eq!(r.passed(), r.failures == 0);
                for c in &r.examples {
                    prop_assert!(replay(&t, &r.scope, r.axiom, &set, &c.violation), "{}", c.text);
                }
            }
        }
    }

    #[test]
    fn phi_is_antitone(k in 1..=2u8, dim in 1..=4usize, a_mask in any::<u64>(), extra in any::<u64>()) {
        let t = fin_table(k, dim).unwrap();
        let pick = |mask: u64| -> Vec<usize> { (0..t.len().min(64)).filter(|&x| mask >> x & 1 == 1).collect() };
        let a = pick(a_mask);
        let b = pick(a_mask | extra);
        let pa: BTreeSet<usize> = phi(&t, &a).unwrap().into_iter().collect();
        let pb: BTreeSet<usize> = phi(&t, &b).unwrap().into_iter().collect();
        prop_assert!(pb.is_subset(&pa));
        for &y in &pa {
            prop_assert!(a.iter().all(|&x| t.product(x, y).is_some()));
        }
    }

    #[test]
    fn homomorphism_reports_replay((n, op) in table_strategy(), raw in proptest::collection::vec(0usize..4, 4)) {
        let t = build(n, &op, false);
        let sigma: Vec<usize> = raw[..n].iter().map(|&s| s % n).collect();
        let r = &check_homomorphism(&sigma, &t, &t).unwrap().results[0];
        for c in &r.examples {
            let Violation::Homomorphism { x, y, product, image_product } = c.violation else { panic!() };
            prop_assert_eq!(t.product(x, y), Some(product));
            prop_assert_eq!(t.product(sigma[x], sigma[y]), image_product);
            prop_assert_ne!(image_product, Some(sigma[product]));
        }
    }
}

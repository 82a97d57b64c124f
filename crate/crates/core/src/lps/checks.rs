use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::enumerate::binomial;
use crate::error::{Error, Result};

use super::report::{AxiomResult, Boundary, CheckReport, Scope, Violation, MAX_EXAMPLES};
use super::table::PartialSemigroupTable;

/// Limit on the number of subsets an adequacy check may visit.
pub const MAX_SUBSETS: u128 = 50_000_000;

/// A carrier partitioned into layers `S_0, S_1, ..., S_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredStructure {
    table: PartialSemigroupTable,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
}

/// An element-to-element map; `images[x]` is `None` outside the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementMap {
    pub name: String,
    pub images: Vec<Option<usize>>,
}

/// Families `F_1, ..., F_k` of layer-lowering maps and the marked subsets
/// `M_1, ..., M_k`; index `n - 1` holds the data for layer `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TetrisActionData {
    pub families: Vec<Vec<ElementMap>>,
    pub marked: Vec<Vec<usize>>,
}

impl LayeredStructure {
    /// `layers` must partition the carrier; `layers[0]` is `S_0`.
    pub fn new(table: PartialSemigroupTable, layers: Vec<Vec<usize>>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::MalformedTable("need S_0 and at least one further layer".into()));
        }
        let mut layer_of = vec![usize::MAX; table.len()];
        for (n, layer) in layers.iter().enumerate() {
            for &x in layer {
                table.check_index(x)?;
                if layer_of[x] != usize::MAX {
                    return Err(Error::MalformedTable(format!("{} lies in two layers", table.name(x))));
                }
                layer_of[x] = n;
            }
        }
        if let Some(x) = layer_of.iter().position(|&l| l == usize::MAX) {
            return Err(Error::MalformedTable(format!("{} lies in no layer", table.name(x))));
        }
        Ok(Self { table, layers, layer_of })
    }

    pub fn table(&self) -> &PartialSemigroupTable {
        &self.table
    }

    /// Number of layers above `S_0`.
    pub fn k(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, n: usize) -> &[usize] {
        &self.layers[n]
    }

    pub fn layer_of(&self, x: usize) -> usize {
        self.layer_of[x]
    }

    /// `S_{<=n}` in index order.
    pub fn cone(&self, n: usize) -> Vec<usize> {
        (0..self.table.len()).filter(|&x| self.layer_of[x] <= n).collect()
    }
}

/// `(xy)z` and `x(yz)` agree in definedness and value for every triple.
pub fn check_associativity(t: &PartialSemigroupTable) -> CheckReport {
    let n = t.len();
    // a triple can only fail if xy or yz is defined; rows are independent
    let rows: Vec<(u64, Vec<Violation>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut count = 0;
            let mut found = Vec::new();
            let mut note = |v: Violation| {
                count += 1;
                if found.len() < MAX_EXAMPLES {
                    found.push(v);
                }
            };
            for y in 0..n {
                let xy = t.product(x, y);
                for z in 0..n {
                    let yz = t.product(y, z);
                    if xy.is_none() && yz.is_none() {
                        continue;
                    }
                    let left = xy.and_then(|p| t.product(p, z));
                    let right = yz.and_then(|q| t.product(x, q));
                    if left != right {
                        note(Violation::Associativity { x, y, z, left, right });
                    }
                }
            }
            (count, found)
        })
        .collect();
    let mut r = AxiomResult::new("associativity", Scope::Table);
    r.checked = (n as u64).pow(3);
    for (count, found) in rows {
        let extra = count - found.len() as u64;
        for v in found {
            r.record(t, v);
        }
        r.failures += extra;
    }
    CheckReport { results: vec![r] }
}

fn identity_law(t: &PartialSemigroupTable, e: usize) -> AxiomResult {
    let mut r = AxiomResult::new("identity", Scope::Table);
    for x in 0..t.len() {
        r.checked += 1;
        let (left, right) = (t.product(e, x), t.product(x, e));
        if left != Some(x) || right != Some(x) {
            r.record(t, Violation::Identity { x, left, right });
        }
    }
    r
}

/// `identity` must be a two-sided identity for the whole carrier.
pub fn check_identity(t: &PartialSemigroupTable) -> CheckReport {
    let results = t.identity().map(|e| identity_law(t, e)).into_iter().collect();
    CheckReport { results }
}

pub(crate) fn closure(t: &PartialSemigroupTable, set: &[usize], scope: Scope) -> AxiomResult {
    let inside = t.mask(set);
    let mut r = AxiomResult::new("closure", scope);
    for &x in set {
        for &y in set {
            r.checked += 1;
            if let Some(product) = t.product(x, y) {
                if !inside.contains(product) {
                    r.record(t, Violation::Closure { x, y, product });
                }
            }
        }
    }
    r
}

/// Products of members of `set` stay in `set` whenever defined.
pub fn check_closed(set: &[usize], t: &PartialSemigroupTable) -> Result<CheckReport> {
    for &x in set {
        t.check_index(x)?;
    }
    Ok(CheckReport { results: vec![closure(t, set, Scope::Table)] })
}

fn ideal(t: &PartialSemigroupTable, sub: &[usize], ambient: &[usize], scope: Scope) -> AxiomResult {
    let inside = t.mask(sub);
    let mut r = AxiomResult::new("ideal", scope);
    for &x in sub {
        for &y in ambient {
            r.checked += 1;
            for product in [t.product(x, y), t.product(y, x)].into_iter().flatten() {
                if !inside.contains(product) {
                    r.record(t, Violation::Ideal { x, y, product });
                }
            }
        }
    }
    r
}

/// For `x` in `sub` and any `y`, defined products `xy` and `yx` lie in `sub`.
pub fn check_ideal(sub: &[usize], t: &PartialSemigroupTable) -> Result<CheckReport> {
    for &x in sub {
        t.check_index(x)?;
    }
    let all: Vec<usize> = (0..t.len()).collect();
    Ok(CheckReport { results: vec![ideal(t, sub, &all, Scope::Table)] })
}

fn classify(t: &PartialSemigroupTable, subset: &[usize]) -> Boundary {
    match t.geometry() {
        None => Boundary::Unclassified,
        Some(g) => {
            let reach = subset.iter().filter_map(|&x| g.max_support[x]).max();
            if g.dim > 0 && reach == Some(g.dim - 1) {
                Boundary::Boundary
            } else {
                Boundary::Structural
            }
        }
    }
}

fn subset_count(size: usize, horizon: usize) -> u128 {
    (1..=horizon.min(size)).map(|s| binomial(size as u128, s as u128)).sum()
}

/// Every nonempty `A` of at most `horizon` members of `set` has a common
/// right multiplier inside `set`.
pub(crate) fn adequacy(t: &PartialSemigroupTable, set: &[usize], horizon: usize, scope: Scope) -> Result<AxiomResult> {
    if horizon < 1 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let count = subset_count(set.len(), horizon);
    if count > MAX_SUBSETS {
        return Err(Error::BudgetExceeded { what: "subsets", size: count, limit: MAX_SUBSETS });
    }
    let right = t.right_sets();
    let mut r = AxiomResult::new("adequacy", scope);
    let mut chosen = Vec::with_capacity(horizon);
    walk_subsets(t, set, &right, horizon, 0, &t.mask(set), &mut chosen, &mut r);
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn walk_subsets(
    t: &PartialSemigroupTable,
    set: &[usize],
    right: &[FixedBitSet],
    horizon: usize,
    start: usize,
    common: &FixedBitSet,
    chosen: &mut Vec<usize>,
    r: &mut AxiomResult,
) {
    for i in start..set.len() {
        let x = set[i];
        let mut next = common.clone();
        next.intersect_with(&right[x]);
        chosen.push(x);
        r.checked += 1;
        if next.is_clear() {
            let class = classify(t, chosen);
            r.record(t, Violation::Adequacy { subset: chosen.clone(), class });
        }
        if chosen.len() < horizon {
            walk_subsets(t, set, right, horizon, i + 1, &next, chosen, r);
        }
        chosen.pop();
    }
}

/// `phi(A)` is nonempty for every nonempty `A` with `|A| <= horizon`.
/// Failures whose subset reaches the last coordinate of the table's
/// geometry are reported as boundary and do not fail the check.
pub fn check_adequate(t: &PartialSemigroupTable, horizon: usize) -> Result<CheckReport> {
    let all: Vec<usize> = (0..t.len()).collect();
    Ok(CheckReport { results: vec![adequacy(t, &all, horizon, Scope::Table)?] })
}

fn homomorphism(
    src: &PartialSemigroupTable,
    dst: &PartialSemigroupTable,
    domain: &[usize],
    images: &[Option<usize>],
    scope: Scope,
) -> AxiomResult {
    let inside = src.mask(domain);
    let mut r = AxiomResult::new("homomorphism", scope);
    for &x in domain {
        for &y in domain {
            let Some(product) = src.product(x, y) else { continue };
            if !inside.contains(product) {
                continue;
            }
            r.checked += 1;
            let (Some(sx), Some(sy)) = (images[x], images[y]) else { continue };
            let image_product = dst.product(sx, sy);
            if image_product.is_none() || image_product != images[product] {
                let v = Violation::Homomorphism { x, y, product, image_product };
                r.record(src, v);
                if let Some(last) = r.examples.last_mut() {
                    let shown = image_product.map_or("undefined", |p| dst.name(p));
                    last.text = format!(
                        "{} {} = {} but sigma({}) sigma({}) = {}",
                        src.name(x), src.name(y), src.name(product), src.name(x), src.name(y), shown
                    );
                }
            }
        }
    }
    r
}

/// `sigma(x) sigma(y)` is defined and equals `sigma(xy)` whenever `xy` is
/// defined; `sigma[x]` indexes `dst`.
pub fn check_homomorphism(
    sigma: &[usize],
    src: &PartialSemigroupTable,
    dst: &PartialSemigroupTable,
) -> Result<CheckReport> {
    if sigma.len() != src.len() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} entries, source has {} elements",
            sigma.len(),
            src.len()
        )));
    }
    for &s in sigma {
        dst.check_index(s)?;
    }
    let domain: Vec<usize> = (0..src.len()).collect();
    let images: Vec<Option<usize>> = sigma.iter().map(|&s| Some(s)).collect();
    Ok(CheckReport { results: vec![homomorphism(src, dst, &domain, &images, Scope::Table)] })
}

/// Identity, closure and ideal checks for every layer, plus adequacy of each
/// `S_n` up to `horizon`. (Each `S_{<=n}` contains the identity, so it is
/// trivially adequate.)
pub fn check_layered(ls: &LayeredStructure, horizon: usize) -> Result<CheckReport> {
    let t = &ls.table;
    let mut report = CheckReport::default();
    let mut base = AxiomResult::new("base layer", Scope::Layer(0));
    base.checked = 1;
    match t.identity() {
        Some(e) if ls.layers[0] == [e] => {}
        _ => base.record(t, Violation::BaseLayer { found: ls.layers[0].clone() }),
    }
    report.push(base);
    if let Some(e) = t.identity() {
        report.push(identity_law(t, e));
    }
    let per_layer: Vec<Result<Vec<AxiomResult>>> = (1..=ls.k())
        .into_par_iter()
        .map(|n| {
            let cone = ls.cone(n);
            let layer = &ls.layers[n];
            Ok(vec![
                closure(t, &cone, Scope::Cone(n)),
                closure(t, layer, Scope::Layer(n)),
                ideal(t, layer, &cone, Scope::LayerInCone(n)),
                adequacy(t, layer, horizon, Scope::Layer(n))?,
            ])
        })
        .collect();
    for results in per_layer {
        for r in results? {
            report.push(r);
        }
    }
    Ok(report)
}

fn check_action_shape(ls: &LayeredStructure, act: &TetrisActionData) -> Result<()> {
    let k = ls.k();
    if act.families.len() != k || act.marked.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "{k} layers but {} families and {} marked sets",
            act.families.len(),
            act.marked.len()
        )));
    }
    for sigma in act.families.iter().flatten() {
        if sigma.images.len() != ls.table.len() {
            return Err(Error::DimensionMismatch(format!(
                "map {} has {} entries, carrier has {}",
                sigma.name,
                sigma.images.len(),
                ls.table.len()
            )));
        }
        for &y in sigma.images.iter().flatten() {
            ls.table.check_index(y)?;
        }
    }
    for &x in act.marked.iter().flatten() {
        ls.table.check_index(x)?;
    }
    Ok(())
}

/// `sigma` maps `from` into `to`, and the image is closed under the operation.
fn image_into(
    t: &PartialSemigroupTable,
    sigma: &ElementMap,
    from: &[usize],
    to: &[usize],
    axiom: &'static str,
    scope: Scope,
) -> AxiomResult {
    let target = t.mask(to);
    let mut r = AxiomResult::new(axiom, scope.clone());
    let mut image = FixedBitSet::with_capacity(t.len());
    for &x in from {
        r.checked += 1;
        match sigma.images[x] {
            Some(y) if target.contains(y) => image.insert(y),
            other => r.record(t, Violation::Range { x, image: other }),
        }
    }
    let image: Vec<usize> = image.ones().collect();
    let mut closed = closure(t, &image, scope);
    closed.axiom = axiom;
    r.absorb(closed);
    r
}

/// Conditions for a tetris action: each `F_n` is a nonempty family of
/// homomorphisms `S_{<=n} -> S_{<=n-1}`, each `M_n` a subsemigroup of `S_n`,
/// and for `n >= 2` and `sigma` in `F_n`:
/// (1) `sigma(M_n)` is a subsemigroup of `M_{n-1}`;
/// (2) `sigma(S_n)` is a subsemigroup of `S_{n-1}`;
/// (3) `sigma` restricted to `S_{<=n-1}` is the identity or a member of `F_{n-1}`;
/// (4) all members of `F_n` agree on `M_n`.
pub fn check_tetris_action(ls: &LayeredStructure, act: &TetrisActionData) -> Result<CheckReport> {
    check_action_shape(ls, act)?;
    let per_layer: Vec<Vec<AxiomResult>> = (1..=ls.k())
        .into_par_iter()
        .map(|n| action_layer(ls, act, n))
        .collect();
    let mut report = CheckReport::default();
    for r in per_layer.into_iter().flatten() {
        report.push(r);
    }
    Ok(report)
}

fn action_layer(ls: &LayeredStructure, act: &TetrisActionData, n: usize) -> Vec<AxiomResult> {
    let t = &ls.table;
    let family = &act.families[n - 1];
    let marked = &act.marked[n - 1];
    let cone = ls.cone(n);
    let lower = ls.cone(n - 1);
    let mut out = Vec::new();

    let mut nonempty = AxiomResult::new("nonempty family", Scope::Family(n));
    nonempty.checked = 1;
    if family.is_empty() {
        nonempty.record(t, Violation::EmptyFamily);
    }
    out.push(nonempty);

    let mut subset = AxiomResult::new("marked subset", Scope::Marked(n));
    for &x in marked {
        subset.checked += 1;
        if ls.layer_of[x] != n {
            subset.record(t, Violation::Membership { x });
        }
    }
    out.push(subset);
    let mut marked_closed = closure(t, marked, Scope::Marked(n));
    marked_closed.axiom = "marked closure";
    out.push(marked_closed);

    for (i, sigma) in family.iter().enumerate() {
        let scope = Scope::Map { n, map: i };
        let inside = t.mask(&lower);
        let mut range = AxiomResult::new("range", scope.clone());
        for &x in &cone {
            range.checked += 1;
            match sigma.images[x] {
                Some(y) if inside.contains(y) => {}
                image => range.record(t, Violation::Range { x, image }),
            }
        }
        out.push(range);
        out.push(homomorphism(t, t, &cone, &sigma.images, scope.clone()));
        if n < 2 {
            continue;
        }
        out.push(image_into(t, sigma, marked, &act.marked[n - 2], "condition 1", scope.clone()));
        out.push(image_into(t, sigma, &ls.layers[n], &ls.layers[n - 1], "condition 2", scope.clone()));

        let mut restriction = AxiomResult::new("condition 3", scope);
        restriction.checked = 1;
        let agrees = |other: &ElementMap| lower.iter().all(|&x| sigma.images[x] == other.images[x]);
        let moved = lower.iter().copied().find(|&x| sigma.images[x] != Some(x));
        if let Some(x) = moved {
            if !act.families[n - 2].iter().any(agrees) {
                restriction.record(t, Violation::Restriction { x });
            }
        }
        out.push(restriction);
    }

    if n >= 2 {
        let mut agreement = AxiomResult::new("condition 4", Scope::Family(n));
        if let Some(first) = family.first() {
            for (i, other) in family.iter().enumerate().skip(1) {
                for &x in marked {
                    agreement.checked += 1;
                    if first.images[x] != other.images[x] {
                        agreement.record(t, Violation::Disagreement { x, first: 0, second: i });
                        if let Some(last) = agreement.examples.last_mut() {
                            last.text = format!("{} and {} disagree at {}", first.name, other.name, t.name(x));
                        }
                    }
                }
            }
        }
        out.push(agreement);
    }
    out
}

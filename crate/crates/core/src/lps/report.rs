use std::fmt;

use super::table::PartialSemigroupTable;

/// Maximum number of counterexamples kept per axiom; all are counted.
pub const MAX_EXAMPLES: usize = 64;

/// The part of a structure an axiom was checked on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Table,
    /// `S_n`.
    Layer(usize),
    /// `S_{<=n}`.
    Cone(usize),
    /// `S_n` inside `S_{<=n}`.
    LayerInCone(usize),
    /// `M_n`.
    Marked(usize),
    /// `F_n`.
    Family(usize),
    /// The `map`-th member of `F_n`.
    Map { n: usize, map: usize },
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Table => write!(f, "S"),
            Scope::Layer(n) => write!(f, "S_{n}"),
            Scope::Cone(n) => write!(f, "S_<={n}"),
            Scope::LayerInCone(n) => write!(f, "S_{n} in S_<={n}"),
            Scope::Marked(n) => write!(f, "M_{n}"),
            Scope::Family(n) => write!(f, "F_{n}"),
            Scope::Map { n, map } => write!(f, "F_{n}[{map}]"),
        }
    }
}

/// How an adequacy failure relates to the edge of a finite window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Some member of the subset reaches the last coordinate: an artifact of
    /// truncation.
    Boundary,
    /// The subset stays below the last coordinate and still has no common
    /// right multiplier.
    Structural,
    /// The table carries no geometry.
    Unclassified,
}

/// A concrete counterexample, in element indices of the checked table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(xy)z` and `x(yz)` differ in definedness or value.
    Associativity { x: usize, y: usize, z: usize, left: Option<usize>, right: Option<usize> },
    /// `ex` or `xe` is undefined or not `x`.
    Identity { x: usize, left: Option<usize>, right: Option<usize> },
    /// The structure has no identity, or the base layer is not `{e}`.
    BaseLayer { found: Vec<usize> },
    /// `x, y` lie in the set, `xy` is defined but falls outside it.
    Closure { x: usize, y: usize, product: usize },
    /// `x` lies in the ideal, `y` in the ambient set, and `product` (either
    /// `xy` or `yx`) falls outside the ideal.
    Ideal { x: usize, y: usize, product: usize },
    /// No element of the set is a right multiplier for every member of `subset`.
    Adequacy { subset: Vec<usize>, class: Boundary },
    /// `xy` is defined but `sigma(x) sigma(y)` is not `sigma(xy)`.
    Homomorphism { x: usize, y: usize, product: usize, image_product: Option<usize> },
    /// `sigma(x)` is undefined or outside the expected codomain.
    Range { x: usize, image: Option<usize> },
    /// `x` should belong to the set but does not.
    Membership { x: usize },
    /// The family is empty.
    EmptyFamily,
    /// The restriction of the map to the lower cone is neither identity nor
    /// a member of the lower family; `x` is where it differs from the identity.
    Restriction { x: usize },
    /// Two members of the family differ at `x` of the marked set.
    Disagreement { x: usize, first: usize, second: usize },
}

impl Violation {
    pub fn render(&self, t: &PartialSemigroupTable) -> String {
        let name = |x: usize| t.name(x).to_owned();
        let opt = |x: Option<usize>| x.map_or_else(|| "undefined".to_owned(), name);
        match self {
            Violation::Associativity { x, y, z, left, right } => format!(
                "({} {}) {} = {} but {} ({} {}) = {}",
                name(*x), name(*y), name(*z), opt(*left), name(*x), name(*y), name(*z), opt(*right)
            ),
            Violation::Identity { x, left, right } => {
                format!("e {} = {}, {} e = {}", name(*x), opt(*left), name(*x), opt(*right))
            }
            Violation::BaseLayer { found } => match t.identity() {
                None => format!("no identity; S_0 = {}", t.render_set(found)),
                Some(e) => format!("S_0 = {} is not {{{}}}", t.render_set(found), name(e)),
            },
            Violation::Closure { x, y, product } => {
                format!("{} {} = {} leaves the set", name(*x), name(*y), name(*product))
            }
            Violation::Ideal { x, y, product } => {
                format!("product of {} and {} is {}, outside the ideal", name(*x), name(*y), name(*product))
            }
            Violation::Adequacy { subset, class } => {
                let tag = match class {
                    Boundary::Boundary => "boundary",
                    Boundary::Structural => "structural",
                    Boundary::Unclassified => "unclassified",
                };
                format!("phi({}) is empty [{tag}]", t.render_set(subset))
            }
            Violation::Homomorphism { x, y, product, image_product } => format!(
                "{} {} = {} but the images multiply to {}",
                name(*x), name(*y), name(*product), opt(*image_product)
            ),
            Violation::Range { x, image } => format!("{} maps to {}", name(*x), opt(*image)),
            Violation::Membership { x } => format!("{} is not in the required set", name(*x)),
            Violation::EmptyFamily => "family is empty".to_owned(),
            Violation::Restriction { x } => format!(
                "restriction moves {} and matches no member of the lower family",
                name(*x)
            ),
            Violation::Disagreement { x, first, second } => {
                format!("members {first} and {second} disagree at {}", name(*x))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub violation: Violation,
    pub text: String,
}

/// Outcome of one axiom on one scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub scope: Scope,
    /// Number of instances (triples, pairs, subsets, ...) examined.
    pub checked: u64,
    /// Violations that count against the axiom.
    pub failures: u64,
    /// Adequacy violations attributed to the truncation boundary; these do
    /// not fail the axiom.
    pub boundary: u64,
    pub examples: Vec<Counterexample>,
}

impl AxiomResult {
    pub(crate) fn new(axiom: &'static str, scope: Scope) -> Self {
        Self { axiom, scope, checked: 0, failures: 0, boundary: 0, examples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub(crate) fn record(&mut self, t: &PartialSemigroupTable, v: Violation) {
        match v {
            Violation::Adequacy { class: Boundary::Boundary, .. } => self.boundary += 1,
            _ => self.failures += 1,
        }
        if self.examples.len() < MAX_EXAMPLES {
            let text = v.render(t);
            self.examples.push(Counterexample { violation: v, text });
        }
    }

    pub(crate) fn absorb(&mut self, other: AxiomResult) {
        self.checked += other.checked;
        self.failures += other.failures;
        self.boundary += other.boundary;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
    }
}

impl fmt::Display for AxiomResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} on {} ({} checked", self.axiom, self.scope, self.checked)?;
        if self.failures > 0 {
            write!(f, ", {} violations", self.failures)?;
        }
        if self.boundary > 0 {
            write!(f, ", {} boundary", self.boundary)?;
        }
        write!(f, ")")?;
        let shown = self
            .examples
            .iter()
            .find(|c| !matches!(c.violation, Violation::Adequacy { class: Boundary::Boundary, .. }));
        if let (false, Some(first)) = (self.passed(), shown) {
            write!(f, ": {}", first.text)?;
        }
        Ok(())
    }
}

/// Per-axiom results, one line each when displayed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub results: Vec<AxiomResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(AxiomResult::passed)
    }

    pub fn failures(&self) -> u64 {
        self.results.iter().map(|r| r.failures).sum()
    }

    pub fn boundary(&self) -> u64 {
        self.results.iter().map(|r| r.boundary).sum()
    }

    pub fn get(&self, axiom: &str, scope: &Scope) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom && &r.scope == scope)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    /// Appends `other`, folding results with the same axiom and scope together.
    pub fn merge(&mut self, other: CheckReport) {
        for r in other.results {
            self.push(r);
        }
    }

    pub(crate) fn push(&mut self, r: AxiomResult) {
        match self.results.iter_mut().find(|s| s.axiom == r.axiom && s.scope == r.scope) {
            Some(existing) => existing.absorb(r),
            None => self.results.push(r),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict}: {} axioms, {} violations, {} boundary",
            self.results.len(),
            self.failures(),
            self.boundary()
        )
    }
}

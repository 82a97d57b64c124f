//! CNF whose models are exactly the bad colorings (up to auxiliary variables).
//!
//! Selector `x(e, c)` holds when element `e` has color `c`; each element gets
//! exactly one color. For every block sequence `B` and layer `j` there is a
//! definition `y(B, j) <-> OR_c m(B, j, c)` with `m(B, j, c) <-> AND_{e in TS_j(B)} x(e, c)`,
//! and one clause `OR_j !y(B, j)` per `B`.

use std::fmt::Write as _;

use crate::enumerate::{enum_fin_upto, fin_upto_count};
use crate::error::{Error, Result};
use crate::fin::FinVector;

use super::exhaustive::witness_constraints;
use super::{Coloring, SearchConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarMeaning {
    Select { element: String, color: u8 },
    Mono { sequence: String, layer: u8 },
    MonoColor { sequence: String, layer: u8, color: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub k: u8,
    pub n: usize,
    pub r: u8,
    pub ell: usize,
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    /// `ledger[v - 1]` describes variable `v`.
    pub ledger: Vec<VarMeaning>,
    elements: Vec<FinVector>,
}

impl CnfInstance {
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    fn selector(&self, e: usize, c: u8) -> i32 {
        (e * self.r as usize + c as usize + 1) as i32
    }

    /// DIMACS text: comment header with the variable ledger, then the
    /// `p cnf` line and one zero-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "c fintetris bad-coloring k={} n={} r={} ell={}", self.k, self.n, self.r, self.ell);
        for (i, m) in self.ledger.iter().enumerate() {
            let v = i + 1;
            let _ = match m {
                VarMeaning::Select { element, color } => writeln!(s, "c var {v} select {element} color {color}"),
                VarMeaning::Mono { sequence, layer } => writeln!(s, "c var {v} mono [{sequence}] layer {layer}"),
                VarMeaning::MonoColor { sequence, layer, color } => {
                    writeln!(s, "c var {v} mono [{sequence}] layer {layer} color {color}")
                }
            };
        }
        let _ = writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(s, "{lit} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Clause count of the encoding, computed before any clause is built.
fn clause_count(elements: usize, r: u128, layer_sizes: impl Iterator<Item = usize>, sequences: usize) -> u128 {
    let per_element = 1 + r * (r - 1) / 2;
    let per_layer: u128 = layer_sizes.map(|s| r * (s as u128 + 1) + 1 + r).sum();
    elements as u128 * per_element + per_layer + sequences as u128
}

pub fn export_cnf(k: u8, n: usize, r: u8, ell: usize, cfg: &SearchConfig) -> Result<CnfInstance> {
    crate::enumerate::check_kn(k, n)?;
    if r < 1 || ell < 1 {
        return Err(Error::InvalidParameter("r and ell must be at least 1".into()));
    }
    let size = fin_upto_count(k, n);
    if size > super::MAX_DENSE_DOMAIN as u128 {
        return Err(Error::BudgetExceeded { what: "elements", size, limit: super::MAX_DENSE_DOMAIN as u128 });
    }
    let elements: Vec<FinVector> = enum_fin_upto(k, n)?.collect();
    let constraints = witness_constraints(k, n, ell, cfg)?;
    let expected = clause_count(
        elements.len(),
        r as u128,
        constraints.iter().flat_map(|c| c.layers.iter().map(Vec::len)),
        constraints.len(),
    );
    if expected > cfg.max_clauses {
        return Err(Error::BudgetExceeded { what: "clauses", size: expected, limit: cfg.max_clauses });
    }

    let mut inst = CnfInstance {
        k,
        n,
        r,
        ell,
        num_vars: 0,
        clauses: Vec::with_capacity(expected as usize),
        ledger: Vec::new(),
        elements,
    };
    for e in &inst.elements {
        for c in 0..r {
            inst.ledger.push(VarMeaning::Select { element: e.to_string(), color: c });
        }
    }
    for e in 0..inst.elements.len() {
        let alo: Vec<i32> = (0..r).map(|c| inst.selector(e, c)).collect();
        inst.clauses.push(alo);
        for a in 0..r {
            for b in a + 1..r {
                inst.clauses.push(vec![-inst.selector(e, a), -inst.selector(e, b)]);
            }
        }
    }
    for con in &constraints {
        let sequence = con.blocks.to_string();
        let mut guards = Vec::with_capacity(k as usize);
        for (li, layer) in con.layers.iter().enumerate() {
            let j = li as u8 + 1;
            inst.ledger.push(VarMeaning::Mono { sequence: sequence.clone(), layer: j });
            let y = inst.ledger.len() as i32;
            let first_m = y + 1;
            for c in 0..r {
                inst.ledger.push(VarMeaning::MonoColor { sequence: sequence.clone(), layer: j, color: c });
                let m = first_m + c as i32;
                for &e in layer {
                    inst.clauses.push(vec![-m, inst.selector(e as usize, c)]);
                }
                let mut back = vec![m];
                back.extend(layer.iter().map(|&e| -inst.selector(e as usize, c)));
                inst.clauses.push(back);
            }
            let mut some = vec![-y];
            some.extend((0..r as i32).map(|c| first_m + c));
            inst.clauses.push(some);
            for c in 0..r as i32 {
                inst.clauses.push(vec![-(first_m + c), y]);
            }
            guards.push(-y);
        }
        inst.clauses.push(guards);
    }
    inst.num_vars = inst.ledger.len();
    debug_assert_eq!(inst.clauses.len() as u128, expected);
    Ok(inst)
}

/// Reads the coloring off the selector variables of a model given as
/// signed literals.
pub fn decode_cnf_model(instance: &CnfInstance, model: &[i32]) -> Result<Coloring> {
    let mut value = vec![None; instance.num_vars + 1];
    for &lit in model {
        let v = lit.unsigned_abs() as usize;
        if v == 0 || v > instance.num_vars {
            return Err(Error::MalformedModel(format!("literal {lit} outside 1..={}", instance.num_vars)));
        }
        value[v] = Some(lit > 0);
    }
    let mut colors = Vec::with_capacity(instance.elements.len());
    for (e, elem) in instance.elements.iter().enumerate() {
        let mut chosen = Vec::new();
        for c in 0..instance.r {
            let v = instance.selector(e, c) as usize;
            match value[v] {
                None => return Err(Error::MalformedModel(format!("selector {v} for {elem} is unassigned"))),
                Some(true) => chosen.push(c),
                Some(false) => {}
            }
        }
        match chosen[..] {
            [c] => colors.push(c),
            [] => return Err(Error::MalformedModel(format!("{elem} has no color"))),
            _ => return Err(Error::MalformedModel(format!("{elem} has colors {chosen:?}"))),
        }
    }
    Coloring::from_canonical(instance.k, instance.n, instance.r, &colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_formula() {
        let inst = export_cnf(1, 3, 2, 2, &SearchConfig::default()).unwrap();
        // 7 elements, 5 sequences each with one 3-element layer:
        // vars 7*2 + 5*1*(2+1); clauses 7*(1+1) + 5*(2*(3+1)+1+2) + 5
        assert_eq!(inst.num_vars, 29);
        assert_eq!(inst.num_clauses(), 74);
        let text = inst.to_dimacs();
        assert!(text.contains("\np cnf 29 74\n"));
        assert_eq!(text, export_cnf(1, 3, 2, 2, &SearchConfig::default()).unwrap().to_dimacs());
    }

    #[test]
    fn malformed_models() {
        let inst = export_cnf(1, 2, 2, 2, &SearchConfig::default()).unwrap();
        let all_false: Vec<i32> = (1..=inst.num_vars as i32).map(|v| -v).collect();
        assert!(matches!(decode_cnf_model(&inst, &all_false), Err(Error::MalformedModel(_))));
        let mut doubled = all_false.clone();
        doubled[0] = 1;
        doubled[1] = 2;
        assert!(matches!(decode_cnf_model(&inst, &doubled), Err(Error::MalformedModel(_))));
        assert!(matches!(decode_cnf_model(&inst, &[1]), Err(Error::MalformedModel(_))));
        assert!(matches!(decode_cnf_model(&inst, &[999]), Err(Error::MalformedModel(_))));
    }

    #[test]
    fn clause_budget() {
        let tight = SearchConfig { max_clauses: 10, ..SearchConfig::default() };
        assert!(matches!(export_cnf(1, 3, 2, 2, &tight), Err(Error::BudgetExceeded { what: "clauses", .. })));
    }
}

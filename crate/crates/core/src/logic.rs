//! Boolean formulas and quantified Boolean formulas with brute-force
//! evaluation, used by the worth oracles and the reduction batteries.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Var(String),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(name: impl Into<String>) -> BoolExpr {
        BoolExpr::Var(name.into())
    }

    pub fn not(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoolExpr::Not(e) => e.collect_vars(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Var(v) => write!(f, "{v}"),
            BoolExpr::Not(e) => write!(f, "!({e})"),
            BoolExpr::And(a, b) => write!(f, "({a} & {b})"),
            BoolExpr::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Standard semantics over a total assignment.
pub fn eval_bool(e: &BoolExpr, assignment: &BTreeMap<String, bool>) -> Result<bool> {
    Ok(match e {
        BoolExpr::Var(v) => *assignment
            .get(v)
            .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        BoolExpr::Not(inner) => !eval_bool(inner, assignment)?,
        BoolExpr::And(a, b) => eval_bool(a, assignment)? && eval_bool(b, assignment)?,
        BoolExpr::Or(a, b) => eval_bool(a, assignment)? || eval_bool(b, assignment)?,
    })
}

/// Brute-force satisfiability over the formula's own variables.
pub fn sat(e: &BoolExpr, cap: usize) -> Result<bool> {
    let vars: Vec<String> = e.variables().into_iter().collect();
    if vars.len() > cap {
        return Err(Error::TooManyVariables(vars.len(), cap));
    }
    let mut assignment = BTreeMap::new();
    Ok(sat_rec(e, &vars, 0, &mut assignment)?)
}

fn sat_rec(
    e: &BoolExpr,
    vars: &[String],
    i: usize,
    assignment: &mut BTreeMap<String, bool>,
) -> Result<bool> {
    if i == vars.len() {
        return eval_bool(e, assignment);
    }
    for value in [false, true] {
        assignment.insert(vars[i].clone(), value);
        if sat_rec(e, vars, i + 1, assignment)? {
            assignment.remove(&vars[i]);
            return Ok(true);
        }
    }
    assignment.remove(&vars[i]);
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// A prenex quantified Boolean formula with alternating blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf {
    pub prefix: Vec<(Quantifier, Vec<String>)>,
    pub matrix: BoolExpr,
}

impl Qbf {
    /// Validates block alternation, disjointness and matrix coverage.
    pub fn new(prefix: Vec<(Quantifier, Vec<String>)>, matrix: BoolExpr) -> Result<Qbf> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (i, (q, block)) in prefix.iter().enumerate() {
            if i > 0 && prefix[i - 1].0 == *q {
                return Err(Error::BadPrefix(
                    "adjacent blocks have the same quantifier".into(),
                ));
            }
            if block.is_empty() {
                return Err(Error::BadPrefix("empty quantifier block".into()));
            }
            for v in block {
                if !seen.insert(v.clone()) {
                    return Err(Error::BadPrefix(format!(
                        "variable `{v}` quantified twice"
                    )));
                }
            }
        }
        for v in matrix.variables() {
            if !seen.contains(&v) {
                return Err(Error::UnboundVariable(v));
            }
        }
        Ok(Qbf { prefix, matrix })
    }

    pub fn total_vars(&self) -> usize {
        self.prefix.iter().map(|(_, b)| b.len()).sum()
    }

    pub fn all_vars(&self) -> Vec<String> {
        self.prefix
            .iter()
            .flat_map(|(_, b)| b.iter().cloned())
            .collect()
    }
}

/// Brute-force validity by recursion over the prefix.
pub fn qbf_valid(q: &Qbf, cap: usize) -> Result<bool> {
    let n = q.total_vars();
    if n > cap {
        return Err(Error::TooManyVariables(n, cap));
    }
    let blocks: Vec<(Quantifier, Vec<String>)> = q.prefix.clone();
    let mut assignment = BTreeMap::new();
    valid_rec(&q.matrix, &blocks, 0, 0, &mut assignment)
}

fn valid_rec(
    matrix: &BoolExpr,
    blocks: &[(Quantifier, Vec<String>)],
    block: usize,
    pos: usize,
    assignment: &mut BTreeMap<String, bool>,
) -> Result<bool> {
    if block == blocks.len() {
        return eval_bool(matrix, assignment);
    }
    let (quant, vars) = &blocks[block];
    if pos == vars.len() {
        return valid_rec(matrix, blocks, block + 1, 0, assignment);
    }
    let var = &vars[pos];
    let mut results = [false, false];
    for (i, value) in [false, true].into_iter().enumerate() {
        assignment.insert(var.clone(), value);
        results[i] = valid_rec(matrix, blocks, block, pos + 1, assignment)?;
    }
    assignment.remove(var);
    Ok(match quant {
        Quantifier::Exists => results[0] || results[1],
        Quantifier::Forall => results[0] && results[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> BoolExpr {
        BoolExpr::var(n)
    }

    #[test]
    fn eval_standard_semantics() {
        let mut a = BTreeMap::new();
        a.insert("X".to_string(), false);
        a.insert("Y".to_string(), true);
        let e = BoolExpr::or(v("X"), v("Y"));
        assert!(eval_bool(&e, &a).unwrap());
        let contradiction = BoolExpr::and(v("X"), BoolExpr::not(v("X")));
        assert!(!eval_bool(&contradiction, &a).unwrap());
        assert!(matches!(
            eval_bool(&v("Z"), &a),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn qbf_validity_brute_force() {
        // forall Y exists Z ((Y & Z) | (!Y & !Z)) is valid: Z copies Y.
        let q = Qbf::new(
            vec![
                (Quantifier::Forall, vec!["Y".into()]),
                (Quantifier::Exists, vec!["Z".into()]),
            ],
            BoolExpr::or(
                BoolExpr::and(v("Y"), v("Z")),
                BoolExpr::and(BoolExpr::not(v("Y")), BoolExpr::not(v("Z"))),
            ),
        )
        .unwrap();
        assert!(qbf_valid(&q, 20).unwrap());

        // exists X forall Y (X | Y) is valid (X = true).
        let q = Qbf::new(
            vec![
                (Quantifier::Exists, vec!["X".into()]),
                (Quantifier::Forall, vec!["Y".into()]),
            ],
            BoolExpr::or(v("X"), v("Y")),
        )
        .unwrap();
        assert!(qbf_valid(&q, 20).unwrap());

        // forall Y (Y) is not valid.
        let q = Qbf::new(vec![(Quantifier::Forall, vec!["Y".into()])], v("Y")).unwrap();
        assert!(!qbf_valid(&q, 20).unwrap());
    }

    #[test]
    fn prefix_validation() {
        assert!(matches!(
            Qbf::new(
                vec![
                    (Quantifier::Exists, vec!["A".into()]),
                    (Quantifier::Exists, vec!["B".into()]),
                ],
                v("A"),
            ),
            Err(Error::BadPrefix(_))
        ));
        assert!(matches!(
            Qbf::new(vec![(Quantifier::Exists, vec!["A".into()])], v("B")),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn variable_cap() {
        let vars: Vec<String> = (0..21).map(|i| format!("V{i}")).collect();
        let q = Qbf::new(
            vec![(Quantifier::Exists, vars.clone())],
            v(&vars[0]),
        )
        .unwrap();
        assert!(matches!(
            qbf_valid(&q, 20),
            Err(Error::TooManyVariables(21, 20))
        ));
    }
}

//! Mixed-integer linear constraint systems over exact rationals, together
//! with the renaming and substitution calculus the solution-concept checks
//! are built from.
//!
//! Relations are canonicalised at construction time: `>=`/`>` are rewritten
//! by negating both sides, so downstream code only ever sees `<=`, `<`, `=`.
//! Rows that become constant (through substitution) are kept as sentinels so
//! infeasibility stays reportable with a row index.

use crate::error::{Error, Result};
use crate::rational::{is_integer, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Domain of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarDomain {
    Real,
    Integer,
}

/// What a variable stands for. Player-payoff variables are derived
/// deterministically from player ids (`x_<id>`); everything else is
/// auxiliary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarKind {
    Player(String),
    Aux,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub domain: VarDomain,
    /// Optional closed interval `lo <= value <= hi`.
    pub bounds: Option<(Rat, Rat)>,
}

impl Variable {
    pub fn real_aux(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            kind: VarKind::Aux,
            domain: VarDomain::Real,
            bounds: None,
        }
    }

    pub fn int_aux(name: impl Into<String>, bounds: Option<(Rat, Rat)>) -> Self {
        Variable {
            name: name.into(),
            kind: VarKind::Aux,
            domain: VarDomain::Integer,
            bounds,
        }
    }

    pub fn player(id: impl AsRef<str>) -> Self {
        Variable {
            name: player_var_name(id.as_ref()),
            kind: VarKind::Player(id.as_ref().to_string()),
            domain: VarDomain::Real,
            bounds: None,
        }
    }

    pub fn is_player(&self) -> bool {
        matches!(self.kind, VarKind::Player(_))
    }
}

/// Payoff variable name for a player id.
pub fn player_var_name(id: &str) -> String {
    format!("x_{id}")
}

/// Canonical relations. `Ge`/`Gt` never appear post-normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Le => write!(f, "<="),
            Relation::Lt => write!(f, "<"),
            Relation::Eq => write!(f, "="),
        }
    }
}

/// Relations accepted at construction/parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawRelation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

/// One linear row `sum(coeff * var) REL rhs`. Coefficients are kept sparse,
/// sorted by variable name for deterministic iteration, zeros dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    coeffs: BTreeMap<String, Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl LinearRow {
    /// Normalises a raw row: `>=`/`>` flip by negating both sides, zero
    /// coefficients are dropped. The result is logically equivalent on all
    /// points.
    pub fn normalize(
        coeffs: impl IntoIterator<Item = (String, Rat)>,
        relation: RawRelation,
        rhs: Rat,
    ) -> LinearRow {
        let mut map: BTreeMap<String, Rat> = BTreeMap::new();
        for (name, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(name).or_insert_with(Rat::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        let (map, relation, rhs) = match relation {
            RawRelation::Le => (map, Relation::Le, rhs),
            RawRelation::Lt => (map, Relation::Lt, rhs),
            RawRelation::Eq => (map, Relation::Eq, rhs),
            RawRelation::Ge => (negate_coeffs(map), Relation::Le, -rhs),
            RawRelation::Gt => (negate_coeffs(map), Relation::Lt, -rhs),
        };
        LinearRow {
            coeffs: map,
            relation,
            rhs,
        }
    }

    pub fn new_le(coeffs: impl IntoIterator<Item = (String, Rat)>, rhs: Rat) -> LinearRow {
        Self::normalize(coeffs, RawRelation::Le, rhs)
    }

    pub fn new_lt(coeffs: impl IntoIterator<Item = (String, Rat)>, rhs: Rat) -> LinearRow {
        Self::normalize(coeffs, RawRelation::Lt, rhs)
    }

    pub fn new_eq(coeffs: impl IntoIterator<Item = (String, Rat)>, rhs: Rat) -> LinearRow {
        Self::normalize(coeffs, RawRelation::Eq, rhs)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&str, &Rat)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn coeff(&self, name: &str) -> Rat {
        self.coeffs.get(name).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(|k| k.as_str())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// For a constant row, whether the sentinel is a truth.
    pub fn constant_truth(&self) -> bool {
        debug_assert!(self.is_constant());
        let zero = Rat::zero();
        match self.relation {
            Relation::Le => zero <= self.rhs,
            Relation::Lt => zero < self.rhs,
            Relation::Eq => zero == self.rhs,
        }
    }

    /// Evaluates the row at a full assignment of its variables.
    pub fn holds_at(&self, point: &PayoffPoint) -> Result<bool> {
        let mut lhs = Rat::zero();
        for (name, c) in &self.coeffs {
            let v = point
                .get(name)
                .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
            lhs += c * v;
        }
        Ok(match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        })
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> LinearRow {
        LinearRow {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (map.get(k).cloned().unwrap_or_else(|| k.clone()), v.clone()))
                .collect(),
            relation: self.relation,
            rhs: self.rhs.clone(),
        }
    }

    /// Substitutes the given values; rows that lose all variables become
    /// constant sentinels.
    fn substitute(&self, values: &PayoffPoint) -> LinearRow {
        let mut coeffs = BTreeMap::new();
        let mut rhs = self.rhs.clone();
        for (k, c) in &self.coeffs {
            match values.get(k) {
                Some(v) => rhs -= c * v,
                None => {
                    coeffs.insert(k.clone(), c.clone());
                }
            }
        }
        LinearRow {
            coeffs,
            relation: self.relation,
            rhs,
        }
    }
}

fn negate_coeffs(map: BTreeMap<String, Rat>) -> BTreeMap<String, Rat> {
    map.into_iter().map(|(k, v)| (k, -v)).collect()
}

impl fmt::Display for LinearRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0 {} {}", self.relation, crate::rational::fmt_rat(&self.rhs))
        } else {
            let mut first = true;
            for (name, c) in &self.coeffs {
                if first {
                    first = false;
                    if *c == Rat::zero() - Rat::zero() {
                        // unreachable: zeros dropped
                    }
                    write!(f, "{}*{}", crate::rational::fmt_rat(c), name)?;
                } else {
                    write!(f, " + {}*{}", crate::rational::fmt_rat(c), name)?;
                }
            }
            write!(f, " {} {}", self.relation, crate::rational::fmt_rat(&self.rhs))
        }
    }
}

/// An exact rational assignment to variables, keyed by variable name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PayoffPoint {
    values: BTreeMap<String, Rat>,
}

impl PayoffPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, Rat)>) -> Self {
        PayoffPoint {
            values: pairs.into_iter().collect(),
        }
    }

    /// Assignment for players, in the game's player order.
    pub fn for_players(ids: &[String], values: &[Rat]) -> Self {
        assert_eq!(ids.len(), values.len());
        PayoffPoint {
            values: ids
                .iter()
                .zip(values)
                .map(|(id, v)| (player_var_name(id), v.clone()))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.values.get(name)
    }

    pub fn player_value(&self, id: &str) -> Option<&Rat> {
        self.values.get(&player_var_name(id))
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Rat) {
        self.values.insert(name.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rat)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restriction to a name subset.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> PayoffPoint {
        let mut out = PayoffPoint::new();
        for n in names {
            if let Some(v) = self.values.get(n) {
                out.insert(n, v.clone());
            }
        }
        out
    }

    pub fn merged(&self, other: &PayoffPoint) -> PayoffPoint {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            values.insert(k.clone(), v.clone());
        }
        PayoffPoint { values }
    }
}

/// An ordered scope of variables plus an ordered list of rows. Row and
/// variable order are stable; deterministic witnesses depend on them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSystem {
    vars: Vec<Variable>,
    index: BTreeMap<String, usize>,
    pub rows: Vec<LinearRow>,
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vars(vars: impl IntoIterator<Item = Variable>) -> Result<Self> {
        let mut sys = ConstraintSystem::new();
        for v in vars {
            sys.add_var(v)?;
        }
        Ok(sys)
    }

    /// Adds a variable. Duplicate names are errors, not last-wins.
    pub fn add_var(&mut self, var: Variable) -> Result<()> {
        if self.index.contains_key(&var.name) {
            return Err(Error::SpecInvalid(format!(
                "duplicate variable `{}`",
                var.name
            )));
        }
        self.index.insert(var.name.clone(), self.vars.len());
        self.vars.push(var);
        Ok(())
    }

    pub fn add_row(&mut self, row: LinearRow) -> Result<()> {
        for name in row.variables() {
            if !self.index.contains_key(name) {
                return Err(Error::SpecInvalid(format!(
                    "row references unknown variable `{name}`"
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Option<&Variable> {
        self.index.get(name).map(|&i| &self.vars[i])
    }

    pub fn var_names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }

    pub fn integer_vars(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter().filter(|v| v.domain == VarDomain::Integer)
    }

    pub fn has_integer_vars(&self) -> bool {
        self.integer_vars().next().is_some()
    }

    /// Produces the coalition copy used by the objection machinery: player
    /// variables of `ids` map to `<tag>_<id>`, every other variable gets a
    /// `__<tag>` suffix. Domains and bounds are preserved. Returns the new
    /// system and the name mapping.
    pub fn rename_for_coalition(
        &self,
        ids: &[String],
        tag: &str,
    ) -> (ConstraintSystem, BTreeMap<String, String>) {
        let mut map = BTreeMap::new();
        for v in &self.vars {
            let new_name = match &v.kind {
                VarKind::Player(id) if ids.iter().any(|s| s == id) => format!("{tag}_{id}"),
                _ => format!("{}__{}", v.name, tag),
            };
            map.insert(v.name.clone(), new_name);
        }
        let mut out = ConstraintSystem::new();
        for v in &self.vars {
            let mut nv = v.clone();
            nv.name = map[&v.name].clone();
            out.add_var(nv).expect("renaming is injective");
        }
        for r in &self.rows {
            out.rows.push(r.rename(&map));
        }
        (out, map)
    }

    /// Replaces the given variables by their values; affected rows become
    /// residual rows over the remaining scope, constant rows are kept as
    /// sentinels. Assigned variables leave the scope.
    pub fn substitute(&self, values: &PayoffPoint) -> ConstraintSystem {
        let mut out = ConstraintSystem::new();
        for v in &self.vars {
            if values.get(&v.name).is_none() {
                out.add_var(v.clone()).expect("scope was duplicate-free");
            }
        }
        for r in &self.rows {
            out.rows.push(r.substitute(values));
        }
        out
    }

    /// Exact pointwise evaluation; every scope variable must be assigned and
    /// integer variables must carry integer values.
    pub fn satisfies(&self, point: &PayoffPoint) -> Result<bool> {
        for v in &self.vars {
            let val = point
                .get(&v.name)
                .ok_or_else(|| Error::MissingAssignment(v.name.clone()))?;
            if v.domain == VarDomain::Integer && !is_integer(val) {
                return Ok(false);
            }
            if let Some((lo, hi)) = &v.bounds {
                if val < lo || val > hi {
                    return Ok(false);
                }
            }
        }
        for r in &self.rows {
            if !r.holds_at(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Appends another system's variables and rows. Shared variable names
    /// must agree on kind/domain/bounds.
    pub fn merge(&mut self, other: &ConstraintSystem) -> Result<()> {
        for v in &other.vars {
            match self.var(&v.name) {
                None => self.add_var(v.clone())?,
                Some(existing) if existing == v => {}
                Some(_) => {
                    return Err(Error::SpecInvalid(format!(
                        "conflicting declarations for variable `{}`",
                        v.name
                    )))
                }
            }
        }
        self.rows.extend(other.rows.iter().cloned());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn pt(pairs: &[(&str, Rat)]) -> PayoffPoint {
        PayoffPoint::from_pairs(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())))
    }

    #[test]
    fn normalize_flips_ge_into_le() {
        // x1 >= 10/8 * x2  becomes  -x1 + 5/4 x2 <= 0
        let row = LinearRow::normalize(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rat(-10, 8))],
            RawRelation::Ge,
            rint(0),
        );
        assert_eq!(row.relation, Relation::Le);
        assert_eq!(row.coeff("x_1"), rint(-1));
        assert_eq!(row.coeff("x_2"), rat(5, 4));
        assert_eq!(row.rhs, rint(0));
    }

    #[test]
    fn normalize_keeps_equalities() {
        let row = LinearRow::new_eq(vec![("x_3".into(), rint(1))], rint(0));
        assert_eq!(row.relation, Relation::Eq);
        assert_eq!(row.coeff("x_3"), rint(1));
    }

    #[test]
    fn normalize_flips_gt() {
        // 3 > x, i.e. -x > -3, arrives as x < 3 once moved to row form
        let row = LinearRow::normalize(vec![("x".into(), rint(-1))], RawRelation::Gt, rint(-3));
        assert_eq!(row.relation, Relation::Lt);
        assert_eq!(row.coeff("x"), rint(1));
        assert_eq!(row.rhs, rint(3));
    }

    #[test]
    fn normalize_is_idempotent_shape() {
        let row = LinearRow::normalize(
            vec![("a".into(), rint(2)), ("b".into(), rint(0))],
            RawRelation::Ge,
            rint(4),
        );
        let again = LinearRow::normalize(
            row.coeffs().map(|(k, v)| (k.to_string(), v.clone())),
            match row.relation {
                Relation::Le => RawRelation::Le,
                Relation::Lt => RawRelation::Lt,
                Relation::Eq => RawRelation::Eq,
            },
            row.rhs.clone(),
        );
        assert_eq!(row, again);
    }

    #[test]
    fn strictness_boundary() {
        let row = LinearRow::new_lt(vec![("x".into(), rint(1))], rat(1, 2));
        assert!(!row.holds_at(&pt(&[("x", rat(1, 2))])).unwrap());
        assert!(row.holds_at(&pt(&[("x", rat(49, 100))])).unwrap());
    }

    #[test]
    fn substitute_produces_falsity_sentinel() {
        // Example: x1 + x2 >= 2 at x1 = 0, x2 = 1 becomes constant falsity.
        let mut sys = ConstraintSystem::with_vars([
            Variable::player("1"),
            Variable::player("2"),
        ])
        .unwrap();
        sys.add_row(LinearRow::normalize(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            RawRelation::Ge,
            rint(2),
        ))
        .unwrap();
        let residual = sys.substitute(&pt(&[("x_1", rint(0)), ("x_2", rint(1))]));
        assert!(residual.vars().is_empty());
        assert_eq!(residual.rows.len(), 1);
        assert!(residual.rows[0].is_constant());
        assert!(!residual.rows[0].constant_truth());
    }

    #[test]
    fn substitute_nothing_is_identity() {
        let mut sys = ConstraintSystem::with_vars([Variable::player("1")]).unwrap();
        sys.add_row(LinearRow::new_le(vec![("x_1".into(), rint(1))], rint(5)))
            .unwrap();
        let same = sys.substitute(&PayoffPoint::new());
        assert_eq!(sys, same);
    }

    #[test]
    fn satisfies_needs_full_assignment() {
        let mut sys = ConstraintSystem::with_vars([
            Variable::player("1"),
            Variable::player("2"),
        ])
        .unwrap();
        sys.add_row(LinearRow::new_le(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            rint(1),
        ))
        .unwrap();
        let err = sys.satisfies(&pt(&[("x_1", rint(0))])).unwrap_err();
        assert_eq!(err, Error::MissingAssignment("x_2".into()));
        // Example 4.8's row at (1,1) fails.
        assert!(!sys
            .satisfies(&pt(&[("x_1", rint(1)), ("x_2", rint(1))]))
            .unwrap());
    }

    #[test]
    fn integer_domain_rejects_fractions() {
        let sys = ConstraintSystem::with_vars([Variable::int_aux("k", None)]).unwrap();
        assert!(!sys.satisfies(&pt(&[("k", rat(1, 2))])).unwrap());
        assert!(sys.satisfies(&pt(&[("k", rint(3))])).unwrap());
    }

    #[test]
    fn rename_for_coalition_tags_outsiders() {
        // Prop 4.17-style: {x1 + x2 <= 3}, S = {1}.
        let mut sys = ConstraintSystem::with_vars([
            Variable::player("1"),
            Variable::player("2"),
        ])
        .unwrap();
        sys.add_row(LinearRow::new_le(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            rint(3),
        ))
        .unwrap();
        let (renamed, map) = sys.rename_for_coalition(&["1".to_string()], "y");
        assert_eq!(map["x_1"], "y_1");
        assert_eq!(map["x_2"], "x_2__y");
        assert_eq!(renamed.rows[0].coeff("y_1"), rint(1));
        assert_eq!(renamed.rows[0].coeff("x_2__y"), rint(1));
    }

    #[test]
    fn rename_is_a_bijection() {
        let mut sys = ConstraintSystem::with_vars([
            Variable::player("1"),
            Variable::player("2"),
            Variable::int_aux("t", Some((rint(0), rint(1)))),
        ])
        .unwrap();
        sys.add_row(LinearRow::new_lt(
            vec![("x_1".into(), rint(1)), ("t".into(), rint(-1))],
            rat(1, 2),
        ))
        .unwrap();
        let (renamed, map) = sys.rename_for_coalition(&["1".to_string()], "y");
        // Invert the mapping and rename each row back: row-for-row identical.
        let inverse: BTreeMap<String, String> =
            map.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
        let mut back = ConstraintSystem::new();
        for v in renamed.vars() {
            let mut nv = v.clone();
            nv.name = inverse[&v.name].clone();
            back.add_var(nv).unwrap();
        }
        for r in &renamed.rows {
            back.rows.push(r.rename(&inverse));
        }
        assert_eq!(back.rows, sys.rows);
        let names_back: Vec<_> = back.var_names().collect();
        let names_orig: Vec<_> = sys.var_names().collect();
        assert_eq!(names_back, names_orig);
    }

    #[test]
    fn duplicate_variables_are_errors() {
        let mut sys = ConstraintSystem::new();
        sys.add_var(Variable::player("1")).unwrap();
        assert!(sys.add_var(Variable::player("1")).is_err());
    }
}

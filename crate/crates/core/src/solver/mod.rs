//! Exact decision engine: rational LP with strict-inequality handling,
//! bounded-integer feasibility, Fourier–Motzkin projection and the
//! semilinear set algebra.

mod lp;
mod milp;
mod project;
mod semilinear;

pub use lp::{cell_feasible, cell_optimize, simplex_max, LinRel, SimplexResult};
pub use milp::{derive_integer_bounds, milp_feasible, to_semilinear, IntegerBounds};
pub use project::project_cell;
pub use semilinear::SemilinearSet;

use crate::linsys::{PayoffPoint, Relation};
use crate::rational::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Outcome of an LP-backed query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Feasible(PayoffPoint),
    Optimal {
        value: Rat,
        /// Whether the optimum is attained inside the (possibly open) set.
        attained: bool,
        witness: Option<PayoffPoint>,
    },
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// One row of a conjunctive cell, dense over the cell scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRow {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl CellRow {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        CellRow {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn constant_truth(&self) -> bool {
        let zero = Rat::zero();
        match self.relation {
            Relation::Le => zero <= self.rhs,
            Relation::Lt => zero < self.rhs,
            Relation::Eq => self.rhs.is_zero(),
        }
    }

    pub fn holds_at(&self, point: &[Rat]) -> bool {
        let mut lhs = Rat::zero();
        for (c, v) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                lhs += c * v;
            }
        }
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Scales coefficients and rhs to coprime integers with a sign
    /// convention, so syntactically equal constraints compare equal.
    pub fn canonicalize(&mut self) {
        let mut denom_lcm = BigInt::one();
        for c in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let scale = crate::rational::big_to_rat(&denom_lcm);
        let mut nums: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * &scale).to_integer())
            .collect();
        let mut rhs_num = (&self.rhs * &scale).to_integer();
        let mut g = rhs_num.abs();
        for n in &nums {
            g = g.gcd(n);
        }
        if !g.is_zero() && !g.is_one() {
            for n in nums.iter_mut() {
                *n = &*n / &g;
            }
            rhs_num = &rhs_num / &g;
        }
        // For equalities the orientation is arbitrary: make the first
        // nonzero coefficient positive.
        if self.relation == Relation::Eq {
            if let Some(first) = nums.iter().find(|n| !n.is_zero()) {
                if first.is_negative() {
                    for n in nums.iter_mut() {
                        *n = -&*n;
                    }
                    rhs_num = -rhs_num;
                }
            }
        }
        self.coeffs = nums.into_iter().map(|n| crate::rational::big_to_rat(&n)).collect();
        self.rhs = crate::rational::big_to_rat(&rhs_num);
    }

    fn key(&self) -> (Vec<Rat>, Relation, Rat) {
        (self.coeffs.clone(), self.relation, self.rhs.clone())
    }
}

/// A conjunctive (possibly strict) linear system over real axes.
///
/// Constant-true rows are dropped at construction; a constant-false row
/// makes the whole cell empty (`Cell::new` returns `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub rows: Vec<CellRow>,
}

impl Cell {
    /// Builds a cell, dropping truths and deduplicating rows. Returns `None`
    /// when a constant row is false (empty cell).
    pub fn new(rows: Vec<CellRow>) -> Option<Cell> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for mut r in rows {
            if r.is_constant() {
                if r.constant_truth() {
                    continue;
                }
                return None;
            }
            r.canonicalize();
            let key = r.key();
            if seen.insert(key) {
                out.push(r);
            }
        }
        Some(Cell { rows: out })
    }

    pub fn universe() -> Cell {
        Cell { rows: Vec::new() }
    }

    pub fn num_axes(&self) -> usize {
        self.rows.first().map_or(0, |r| r.coeffs.len())
    }

    pub fn holds_at(&self, point: &[Rat]) -> bool {
        self.rows.iter().all(|r| r.holds_at(point))
    }

    pub fn has_strict_rows(&self) -> bool {
        self.rows.iter().any(|r| r.relation == Relation::Lt)
    }

    fn key(&self) -> Vec<(Vec<Rat>, Relation, Rat)> {
        let mut k: Vec<_> = self.rows.iter().map(|r| r.key()).collect();
        k.sort();
        k
    }
}

/// Deduplicates syntactically identical cells, preserving first-seen order.
pub(crate) fn dedup_cells(cells: Vec<Cell>) -> Vec<Cell> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for c in cells {
        if seen.insert(c.key()) {
            out.push(c);
        }
    }
    out
}

/// Negates one row: the complement pieces of `row` (two pieces for an
/// equality, one otherwise).
pub(crate) fn negate_row(row: &CellRow) -> Vec<CellRow> {
    let neg: Vec<Rat> = row.coeffs.iter().map(|c| -c).collect();
    match row.relation {
        // not(a x <= b)  <=>  -a x < -b
        Relation::Le => vec![CellRow::new(neg, Relation::Lt, -row.rhs.clone())],
        // not(a x < b)  <=>  -a x <= -b
        Relation::Lt => vec![CellRow::new(neg, Relation::Le, -row.rhs.clone())],
        // not(a x = b)  <=>  a x < b  or  -a x < -b
        Relation::Eq => vec![
            CellRow::new(row.coeffs.clone(), Relation::Lt, row.rhs.clone()),
            CellRow::new(neg, Relation::Lt, -row.rhs.clone()),
        ],
    }
}

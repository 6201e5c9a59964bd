//! Exact two-phase primal simplex over rationals with Bland's rule, plus
//! the strict-inequality wrappers used by the set algebra.
//!
//! Strict feasibility goes through a single shared slack: every strict row
//! `a x < b` is relaxed to `a x + s <= b`, `0 <= s <= 1`, and `s` is
//! maximised. The strict system is feasible iff the optimum is positive, and
//! the optimum's basic solution is a witness of polynomial bit size.

use super::{Cell, CellRow, LpOutcome};
use crate::linsys::{PayoffPoint, Relation};
use crate::rational::Rat;
use num_traits::{One, Signed, Zero};

/// Row relation after strict rows have been closed or slack-extended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinRel {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexResult {
    Infeasible,
    Optimal { value: Rat, point: Vec<Rat> },
    Unbounded,
}

struct Tableau {
    /// rows[i] = coefficients over all columns, then rhs is kept separately.
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    n_cols: usize,
    /// Columns barred from entering (artificials after phase 1).
    barred: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        debug_assert!(!piv.is_zero());
        if !piv.is_one() {
            for c in self.rows[row].iter_mut() {
                if !c.is_zero() {
                    *c /= &piv;
                }
            }
            self.rhs[row] /= &piv;
        }
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.n_cols {
                if !pivot_row[c].is_zero() {
                    let delta = &factor * &pivot_row[c];
                    self.rows[i][c] -= delta;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Reduced cost of column `col` for objective `c` (maximisation).
    fn reduced_cost(&self, c: &[Rat], col: usize) -> Rat {
        let mut rc = c[col].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() && !self.rows[i][col].is_zero() {
                rc -= &c[b] * &self.rows[i][col];
            }
        }
        rc
    }

    /// Bland: entering column = lowest-index non-barred column with positive
    /// reduced cost.
    fn entering(&self, c: &[Rat]) -> Option<usize> {
        (0..self.n_cols)
            .find(|&j| !self.barred[j] && self.reduced_cost(c, j).is_positive())
    }

    /// Bland ratio test: minimum ratio, ties broken by smallest basis column.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(Rat, usize, usize)> = None; // (ratio, basis col, row)
        for i in 0..self.rows.len() {
            let a = &self.rows[i][col];
            if a.is_positive() {
                let ratio = &self.rhs[i] / a;
                let candidate = (ratio, self.basis[i], i);
                best = match best {
                    None => Some(candidate),
                    Some(cur) => {
                        if candidate.0 < cur.0 || (candidate.0 == cur.0 && candidate.1 < cur.1) {
                            Some(candidate)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
        best.map(|(_, _, row)| row)
    }

    /// Maximises `c` from the current basic feasible solution.
    /// Returns false when unbounded.
    fn optimize(&mut self, c: &[Rat]) -> bool {
        loop {
            match self.entering(c) {
                None => return true,
                Some(col) => match self.leaving(col) {
                    None => return false,
                    Some(row) => self.pivot(row, col),
                },
            }
        }
    }

    fn objective_value(&self, c: &[Rat]) -> Rat {
        let mut v = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !c[b].is_zero() {
                v += &c[b] * &self.rhs[i];
            }
        }
        v
    }

    fn column_value(&self, col: usize) -> Rat {
        for (i, &b) in self.basis.iter().enumerate() {
            if b == col {
                return self.rhs[i].clone();
            }
        }
        Rat::zero()
    }
}

/// Maximises `obj . x` subject to `rows`, where variable `j` is free unless
/// `nonneg[j]`. Exact arithmetic throughout; Bland's rule guarantees
/// termination.
pub fn simplex_max(
    num_vars: usize,
    nonneg: &[bool],
    rows: &[(Vec<Rat>, LinRel, Rat)],
    obj: &[Rat],
) -> SimplexResult {
    debug_assert_eq!(nonneg.len(), num_vars);
    debug_assert_eq!(obj.len(), num_vars);

    // Column layout: free var -> (pos, neg) pair, nonneg var -> one column;
    // then one slack per Le row; then one artificial per row.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(num_vars);
    let mut n_cols = 0;
    for &nn in nonneg {
        if nn {
            var_cols.push((n_cols, None));
            n_cols += 1;
        } else {
            var_cols.push((n_cols, Some(n_cols + 1)));
            n_cols += 2;
        }
    }
    let m = rows.len();
    let slack_start = n_cols;
    let n_slacks = rows.iter().filter(|(_, r, _)| *r == LinRel::Le).count();
    n_cols += n_slacks;
    let art_start = n_cols;
    n_cols += m;

    let mut t_rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut t_rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack_idx = 0;
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        debug_assert_eq!(coeffs.len(), num_vars);
        let mut row = vec![Rat::zero(); n_cols];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (pos, neg) = var_cols[j];
            row[pos] = c.clone();
            if let Some(neg) = neg {
                row[neg] = -c.clone();
            }
        }
        let mut rhs = rhs.clone();
        if *rel == LinRel::Le {
            row[slack_start + slack_idx] = Rat::one();
            slack_idx += 1;
        }
        // Normalise rhs sign so artificials start feasible.
        if rhs.is_negative() {
            for c in row.iter_mut() {
                if !c.is_zero() {
                    *c = -c.clone();
                }
            }
            rhs = -rhs;
        }
        row[art_start + i] = Rat::one();
        t_rows.push(row);
        t_rhs.push(rhs);
        basis.push(art_start + i);
    }

    let mut tab = Tableau {
        rows: t_rows,
        rhs: t_rhs,
        basis,
        n_cols,
        barred: vec![false; n_cols],
    };

    // Phase 1: maximise -sum(artificials).
    let mut phase1 = vec![Rat::zero(); n_cols];
    for j in art_start..n_cols {
        phase1[j] = -Rat::one();
    }
    let bounded = tab.optimize(&phase1);
    debug_assert!(bounded, "phase 1 objective is bounded by construction");
    if tab.objective_value(&phase1).is_negative() {
        return SimplexResult::Infeasible;
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= art_start {
            debug_assert!(tab.rhs[i].is_zero());
            let piv = (0..art_start).find(|&j| !tab.rows[i][j].is_zero());
            match piv {
                Some(col) => tab.pivot(i, col),
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for j in art_start..n_cols {
        tab.barred[j] = true;
    }

    // Phase 2.
    let mut phase2 = vec![Rat::zero(); n_cols];
    for (j, c) in obj.iter().enumerate() {
        let (pos, neg) = var_cols[j];
        phase2[pos] = c.clone();
        if let Some(neg) = neg {
            phase2[neg] = -c.clone();
        }
    }
    if !tab.optimize(&phase2) {
        return SimplexResult::Unbounded;
    }

    let value = tab.objective_value(&phase2);
    let mut point = Vec::with_capacity(num_vars);
    for &(pos, neg) in &var_cols {
        let mut v = tab.column_value(pos);
        if let Some(neg) = neg {
            v -= tab.column_value(neg);
        }
        point.push(v);
    }
    SimplexResult::Optimal { value, point }
}

fn scope_point(scope: &[String], values: &[Rat]) -> PayoffPoint {
    PayoffPoint::from_pairs(
        scope
            .iter()
            .cloned()
            .zip(values.iter().cloned())
            .collect::<Vec<_>>(),
    )
}

/// Exact feasibility of a conjunctive cell (strict rows handled through the
/// shared-slack construction). Returns `Feasible` with a witness satisfying
/// every row, strict rows strictly.
pub fn cell_feasible(cell: &Cell, scope: &[String]) -> LpOutcome {
    let n = scope.len();
    let strict = cell.has_strict_rows();
    let num_vars = n + usize::from(strict);
    let mut rows: Vec<(Vec<Rat>, LinRel, Rat)> = Vec::with_capacity(cell.rows.len() + 1);
    for r in &cell.rows {
        let mut coeffs = r.coeffs.clone();
        coeffs.resize(num_vars, Rat::zero());
        match r.relation {
            Relation::Le => rows.push((coeffs, LinRel::Le, r.rhs.clone())),
            Relation::Eq => rows.push((coeffs, LinRel::Eq, r.rhs.clone())),
            Relation::Lt => {
                coeffs[n] = Rat::one();
                rows.push((coeffs, LinRel::Le, r.rhs.clone()));
            }
        }
    }
    let mut obj = vec![Rat::zero(); num_vars];
    let mut nonneg = vec![false; num_vars];
    if strict {
        // 0 <= s <= 1, maximise s.
        nonneg[n] = true;
        let mut cap = vec![Rat::zero(); num_vars];
        cap[n] = Rat::one();
        rows.push((cap, LinRel::Le, Rat::one()));
        obj[n] = Rat::one();
    }
    match simplex_max(num_vars, &nonneg, &rows, &obj) {
        SimplexResult::Infeasible => LpOutcome::Infeasible,
        SimplexResult::Unbounded => unreachable!("slack objective is capped"),
        SimplexResult::Optimal { value, point } => {
            if strict && !value.is_positive() {
                LpOutcome::Infeasible
            } else {
                LpOutcome::Feasible(scope_point(scope, &point[..n]))
            }
        }
    }
}

/// Supremum/infimum of a rational linear form over a cell. The value is
/// computed over the closed relaxation (valid because the strict set is
/// checked non-empty first); attainedness is decided by a separate strict
/// feasibility probe at the optimum.
pub fn cell_optimize(cell: &Cell, scope: &[String], obj: &[Rat], maximize: bool) -> LpOutcome {
    let feas_witness = match cell_feasible(cell, scope) {
        LpOutcome::Infeasible => return LpOutcome::Infeasible,
        LpOutcome::Feasible(w) => w,
        _ => unreachable!(),
    };
    let n = scope.len();
    let rows: Vec<(Vec<Rat>, LinRel, Rat)> = cell
        .rows
        .iter()
        .map(|r| {
            let rel = match r.relation {
                Relation::Eq => LinRel::Eq,
                Relation::Le | Relation::Lt => LinRel::Le,
            };
            (r.coeffs.clone(), rel, r.rhs.clone())
        })
        .collect();
    let signed_obj: Vec<Rat> = if maximize {
        obj.to_vec()
    } else {
        obj.iter().map(|c| -c).collect()
    };
    match simplex_max(n, &vec![false; n], &rows, &signed_obj) {
        SimplexResult::Infeasible => unreachable!("closed relaxation contains the strict set"),
        SimplexResult::Unbounded => LpOutcome::Unbounded,
        SimplexResult::Optimal { value, .. } => {
            let value = if maximize { value } else { -value };
            // Attained iff the optimum hyperplane meets the strict set.
            let mut probe_rows = cell.rows.clone();
            probe_rows.push(CellRow::new(obj.to_vec(), Relation::Eq, value.clone()));
            let attained_witness = match Cell::new(probe_rows) {
                None => None,
                Some(probe) => match cell_feasible(&probe, scope) {
                    LpOutcome::Feasible(w) => Some(w),
                    _ => None,
                },
            };
            match attained_witness {
                Some(w) => LpOutcome::Optimal {
                    value,
                    attained: true,
                    witness: Some(w),
                },
                None => LpOutcome::Optimal {
                    value,
                    attained: false,
                    witness: Some(feas_witness),
                },
            }
        }
    }
}

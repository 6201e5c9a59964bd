//! Finite unions of strict/non-strict polyhedral cells over a shared real
//! scope, with complement, intersection, difference and projection.
//!
//! Invariant: stored cells are individually non-empty (pruned through the
//! strict-aware feasibility LP as they are produced), and cells keep their
//! construction order so witnesses are deterministic.

use super::{cell_feasible, cell_optimize, dedup_cells, negate_row, project_cell, Cell, LpOutcome};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linsys::PayoffPoint;
use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    scope: Vec<String>,
    cells: Vec<Cell>,
}

/// Syntactic single-point detection: every axis pinned by a one-variable
/// equality row. Only used as a fast path; `None` just means "not obviously
/// a point".
fn cell_as_point(cell: &Cell, num_axes: usize) -> Option<Vec<Rat>> {
    use num_traits::Zero;
    let mut coords: Vec<Option<Rat>> = vec![None; num_axes];
    for r in &cell.rows {
        if r.relation != crate::linsys::Relation::Eq {
            continue;
        }
        let mut nonzero = None;
        for (i, c) in r.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if nonzero.is_some() {
                    nonzero = None;
                    break;
                }
                nonzero = Some(i);
            }
        }
        if let Some(i) = nonzero {
            if coords[i].is_none() {
                coords[i] = Some(&r.rhs / &r.coeffs[i]);
            }
        }
    }
    let point: Vec<Rat> = coords.into_iter().collect::<Option<_>>()?;
    cell.holds_at(&point).then_some(point)
}

impl SemilinearSet {
    /// Builds a set from candidate cells, pruning empty ones.
    pub fn new(scope: Vec<String>, cells: Vec<Cell>) -> SemilinearSet {
        let kept = cells
            .into_iter()
            .filter(|c| cell_feasible(c, &scope).is_feasible())
            .collect();
        SemilinearSet {
            cells: dedup_cells(kept),
            scope,
        }
    }

    /// Builds a set from cells already known non-empty.
    pub(crate) fn from_feasible(scope: Vec<String>, cells: Vec<Cell>) -> SemilinearSet {
        SemilinearSet {
            cells: dedup_cells(cells),
            scope,
        }
    }

    pub fn empty(scope: Vec<String>) -> SemilinearSet {
        SemilinearSet {
            scope,
            cells: Vec::new(),
        }
    }

    /// The whole space: one trivially-true cell.
    pub fn full(scope: Vec<String>) -> SemilinearSet {
        SemilinearSet {
            scope,
            cells: vec![Cell::universe()],
        }
    }

    pub fn scope(&self) -> &[String] {
        &self.scope
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn check_scope(&self, other: &SemilinearSet) -> Result<()> {
        if self.scope != other.scope {
            return Err(Error::ScopeMismatch);
        }
        Ok(())
    }

    /// Exact membership of a fully-assigned point.
    pub fn contains(&self, point: &PayoffPoint) -> Result<bool> {
        let values: Vec<Rat> = self
            .scope
            .iter()
            .map(|name| {
                point
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::MissingAssignment(name.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(self.cells.iter().any(|c| c.holds_at(&values)))
    }

    /// Pairwise cell conjunction; empty cells pruned eagerly.
    pub fn intersect(&self, other: &SemilinearSet, limits: &Limits) -> Result<SemilinearSet> {
        self.check_scope(other)?;
        let mut out = Vec::new();
        for a in &self.cells {
            limits.check_deadline()?;
            for b in &other.cells {
                let mut rows = a.rows.clone();
                rows.extend(b.rows.iter().cloned());
                if let Some(cell) = Cell::new(rows) {
                    if cell_feasible(&cell, &self.scope).is_feasible() {
                        out.push(cell);
                    }
                }
            }
        }
        Ok(SemilinearSet::from_feasible(self.scope.clone(), out))
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet> {
        self.check_scope(other)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(SemilinearSet::from_feasible(self.scope.clone(), cells))
    }

    /// De Morgan over cells: the complement of each cell is the union of its
    /// negated rows; the per-cell complements are intersected.
    pub fn complement(&self, limits: &Limits) -> Result<SemilinearSet> {
        let mut result = SemilinearSet::full(self.scope.clone());
        for cell in &self.cells {
            limits.check_deadline()?;
            result = result.subtract_cell(cell, limits)?;
            if result.is_empty() {
                break;
            }
        }
        Ok(result)
    }

    /// `self` minus one conjunctive cell.
    fn subtract_cell(&self, cell: &Cell, limits: &Limits) -> Result<SemilinearSet> {
        if cell.rows.is_empty() {
            // Subtracting the universe empties everything.
            return Ok(SemilinearSet::empty(self.scope.clone()));
        }
        let mut out = Vec::new();
        for mine in &self.cells {
            limits.check_deadline()?;
            for row in &cell.rows {
                for neg in negate_row(row) {
                    let mut rows = mine.rows.clone();
                    rows.push(neg);
                    if let Some(piece) = Cell::new(rows) {
                        if cell_feasible(&piece, &self.scope).is_feasible() {
                            out.push(piece);
                        }
                    }
                }
            }
        }
        Ok(SemilinearSet::from_feasible(self.scope.clone(), out))
    }

    /// Exact set difference, computed cell-by-cell with eager pruning.
    /// When every cell on the left is a single point (the all-integer
    /// regime), the difference degenerates to a membership filter.
    pub fn difference(&self, other: &SemilinearSet, limits: &Limits) -> Result<SemilinearSet> {
        self.check_scope(other)?;
        if let Some(points) = self
            .cells
            .iter()
            .map(|c| cell_as_point(c, self.scope.len()))
            .collect::<Option<Vec<_>>>()
        {
            let kept: Vec<Cell> = self
                .cells
                .iter()
                .zip(&points)
                .filter(|(_, p)| !other.cells.iter().any(|c| c.holds_at(p)))
                .map(|(c, _)| c.clone())
                .collect();
            return Ok(SemilinearSet::from_feasible(self.scope.clone(), kept));
        }
        let mut result = self.clone();
        for cell in &other.cells {
            if result.is_empty() {
                break;
            }
            result = result.subtract_cell(cell, limits)?;
        }
        Ok(result)
    }

    /// Projection onto a scope subset; projection of a union is the union of
    /// the projections.
    pub fn project(&self, keep: &[String]) -> Result<SemilinearSet> {
        let keep_idx: Vec<usize> = keep
            .iter()
            .map(|name| {
                self.scope
                    .iter()
                    .position(|s| s == name)
                    .ok_or(Error::ScopeMismatch)
            })
            .collect::<Result<_>>()?;
        let mut cells = Vec::new();
        for c in &self.cells {
            if let Some(p) = project_cell(c, self.scope.len(), &keep_idx) {
                cells.push(p);
            }
        }
        // FM is exact, so projections of non-empty cells are non-empty.
        Ok(SemilinearSet::from_feasible(keep.to_vec(), cells))
    }

    /// First feasible cell (in stored order) yields its slack-maximising
    /// witness; `None` iff the set is empty.
    pub fn witness(&self) -> Option<PayoffPoint> {
        for c in &self.cells {
            if let LpOutcome::Feasible(w) = cell_feasible(c, &self.scope) {
                return Some(w);
            }
        }
        None
    }

    /// Best objective value over all cells; `Unbounded` dominates, and the
    /// result is attained iff some cell attains the overall optimum.
    pub fn optimize(&self, obj: &[Rat], maximize: bool) -> LpOutcome {
        assert_eq!(obj.len(), self.scope.len());
        let mut best: Option<(Rat, bool, Option<PayoffPoint>)> = None;
        for c in &self.cells {
            match cell_optimize(c, &self.scope, obj, maximize) {
                LpOutcome::Unbounded => return LpOutcome::Unbounded,
                LpOutcome::Infeasible => continue,
                LpOutcome::Optimal {
                    value,
                    attained,
                    witness,
                } => {
                    let better = match &best {
                        None => true,
                        Some((bv, battained, _)) => {
                            let strictly = if maximize { value > *bv } else { value < *bv };
                            strictly || (value == *bv && attained && !battained)
                        }
                    };
                    if better {
                        best = Some((value, attained, witness));
                    }
                }
                LpOutcome::Feasible(_) => unreachable!(),
            }
        }
        match best {
            None => LpOutcome::Infeasible,
            Some((value, attained, witness)) => LpOutcome::Optimal {
                value,
                attained,
                witness,
            },
        }
    }

    /// When the set is a finite union of single points, lists them (deduped,
    /// in cell order). Returns `None` if some cell has positive extent.
    pub fn enumerate_points(&self) -> Option<Vec<PayoffPoint>> {
        let mut points: Vec<PayoffPoint> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.cells {
            let mut coords = Vec::with_capacity(self.scope.len());
            for axis in 0..self.scope.len() {
                let mut obj = vec![Rat::from_integer(0.into()); self.scope.len()];
                obj[axis] = Rat::from_integer(1.into());
                let lo = match cell_optimize(c, &self.scope, &obj, false) {
                    LpOutcome::Optimal { value, attained: true, .. } => value,
                    _ => return None,
                };
                let hi = match cell_optimize(c, &self.scope, &obj, true) {
                    LpOutcome::Optimal { value, attained: true, .. } => value,
                    _ => return None,
                };
                if lo != hi {
                    return None;
                }
                coords.push(lo);
            }
            let key: Vec<String> = coords.iter().map(crate::rational::fmt_rat).collect();
            if seen.insert(key) {
                points.push(PayoffPoint::from_pairs(
                    self.scope.iter().cloned().zip(coords).collect::<Vec<_>>(),
                ));
            }
        }
        Some(points)
    }
}

//! Exact projection of conjunctive cells: Gaussian elimination on equality
//! rows first, then Fourier–Motzkin on the inequalities. A combined row is
//! strict iff either parent row is strict.

use super::{Cell, CellRow};
use crate::linsys::Relation;
use num_traits::{Signed, Zero};

/// Eliminates every axis not listed in `keep_idx` and re-indexes the
/// surviving rows onto the kept axes (in the order given). Returns `None`
/// when elimination exposes a constant falsity (empty cell).
pub fn project_cell(cell: &Cell, num_axes: usize, keep_idx: &[usize]) -> Option<Cell> {
    let keep: std::collections::BTreeSet<usize> = keep_idx.iter().copied().collect();
    let mut rows = cell.rows.clone();
    let mut eliminate: Vec<usize> = (0..num_axes).filter(|i| !keep.contains(i)).collect();

    while !eliminate.is_empty() {
        // Cheapest victim first: equality rows make elimination linear, and
        // for pure FM the fill-in is #lower * #upper.
        let (pos, _) = eliminate
            .iter()
            .enumerate()
            .map(|(pos, &v)| {
                let has_eq = rows
                    .iter()
                    .any(|r| r.relation == Relation::Eq && !r.coeffs[v].is_zero());
                let uppers = rows
                    .iter()
                    .filter(|r| r.relation != Relation::Eq && r.coeffs[v].is_positive())
                    .count();
                let lowers = rows
                    .iter()
                    .filter(|r| r.relation != Relation::Eq && r.coeffs[v].is_negative())
                    .count();
                let cost = if has_eq { 0 } else { uppers * lowers };
                (pos, cost)
            })
            .min_by_key(|&(_, cost)| cost)
            .expect("eliminate is non-empty");
        let var = eliminate.remove(pos);
        rows = eliminate_axis(rows, var)?;
    }

    let reindexed = rows
        .into_iter()
        .map(|r| {
            CellRow::new(
                keep_idx.iter().map(|&i| r.coeffs[i].clone()).collect(),
                r.relation,
                r.rhs,
            )
        })
        .collect();
    Cell::new(reindexed)
}

/// Removes one axis from the rows; the result mentions `var` with zero
/// coefficient everywhere. `None` signals an empty cell.
fn eliminate_axis(rows: Vec<CellRow>, var: usize) -> Option<Vec<CellRow>> {
    // Gaussian step if an equality pins the variable.
    if let Some(eq_pos) = rows
        .iter()
        .position(|r| r.relation == Relation::Eq && !r.coeffs[var].is_zero())
    {
        let eq = rows[eq_pos].clone();
        let pivot = eq.coeffs[var].clone();
        let mut out = Vec::with_capacity(rows.len() - 1);
        for (i, r) in rows.into_iter().enumerate() {
            if i == eq_pos {
                continue;
            }
            if r.coeffs[var].is_zero() {
                out.push(r);
                continue;
            }
            let factor = &r.coeffs[var] / &pivot;
            let coeffs: Vec<_> = r
                .coeffs
                .iter()
                .zip(&eq.coeffs)
                .map(|(a, b)| a - &factor * b)
                .collect();
            let rhs = &r.rhs - &factor * &eq.rhs;
            out.push(CellRow::new(coeffs, r.relation, rhs));
        }
        return check_constants(out);
    }

    // Fourier–Motzkin on the inequalities.
    let mut uppers = Vec::new(); // coeff > 0: var <= (rhs - rest)/coeff
    let mut lowers = Vec::new(); // coeff < 0
    let mut rest = Vec::new();
    for r in rows {
        if r.coeffs[var].is_zero() {
            rest.push(r);
        } else if r.coeffs[var].is_positive() {
            uppers.push(r);
        } else {
            lowers.push(r);
        }
    }
    for up in &uppers {
        for lo in &lowers {
            // up: a x + c v <= b (c > 0); lo: a' x + c' v <= b' (c' < 0).
            // Scale and add so v cancels: |c'| * up + c * lo.
            let cu = up.coeffs[var].clone();
            let cl = -lo.coeffs[var].clone();
            let coeffs: Vec<_> = up
                .coeffs
                .iter()
                .zip(&lo.coeffs)
                .map(|(a, b)| &cl * a + &cu * b)
                .collect();
            let rhs = &cl * &up.rhs + &cu * &lo.rhs;
            let rel = if up.relation == Relation::Lt || lo.relation == Relation::Lt {
                Relation::Lt
            } else {
                Relation::Le
            };
            rest.push(CellRow::new(coeffs, rel, rhs));
        }
    }
    check_constants(rest)
}

fn check_constants(rows: Vec<CellRow>) -> Option<Vec<CellRow>> {
    let mut out = Vec::with_capacity(rows.len());
    let mut seen = std::collections::BTreeSet::new();
    for mut r in rows {
        if r.is_constant() {
            if r.constant_truth() {
                continue;
            }
            return None;
        }
        r.canonicalize();
        if seen.insert((r.coeffs.clone(), r.relation, r.rhs.clone())) {
            out.push(r);
        }
    }
    Some(out)
}

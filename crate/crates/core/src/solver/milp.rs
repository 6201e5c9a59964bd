//! Exact feasibility with integer variables, integer bound derivation, and
//! the enumerate-then-project construction of semilinear sets.
//!
//! Strategy: integer variables that occur one-sidedly (never in an equality,
//! and with a single coefficient sign across all inequalities) can always be
//! pushed far enough to satisfy their rows, so those rows are dropped — this
//! is the one-sided case of Fourier–Motzkin and keeps coalition copies with
//! unbounded tagged integers decidable. The remaining integers get a finite
//! box (declared bounds or relaxation optima rounded inward) and are either
//! enumerated or branched on.

use super::{cell_feasible, cell_optimize, Cell, CellRow, LpOutcome, SemilinearSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linsys::{ConstraintSystem, PayoffPoint, Relation, VarDomain, Variable};
use crate::rational::{big_to_rat, ceil_int, floor_int, is_integer, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Finite boxes for integer variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegerBounds(pub BTreeMap<String, (BigInt, BigInt)>);

struct SysForm {
    vars: Vec<Variable>,
    rows: Vec<CellRow>,
}

fn build_form(sys: &ConstraintSystem) -> SysForm {
    let vars: Vec<Variable> = sys.vars().to_vec();
    let index: BTreeMap<&str, usize> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    let mut rows = Vec::with_capacity(sys.rows.len());
    for r in &sys.rows {
        let mut coeffs = vec![Rat::zero(); vars.len()];
        for (name, c) in r.coeffs() {
            coeffs[index[name]] = c.clone();
        }
        rows.push(CellRow::new(coeffs, r.relation, r.rhs.clone()));
    }
    for (i, v) in vars.iter().enumerate() {
        if let Some((lo, hi)) = &v.bounds {
            let mut c = vec![Rat::zero(); vars.len()];
            c[i] = -Rat::from_integer(1.into());
            rows.push(CellRow::new(c, Relation::Le, -lo.clone()));
            let mut c = vec![Rat::zero(); vars.len()];
            c[i] = Rat::from_integer(1.into());
            rows.push(CellRow::new(c, Relation::Le, hi.clone()));
        }
    }
    SysForm { vars, rows }
}

/// Integer axes whose rows are all relaxed by pushing the variable in one
/// direction. Removes those rows; returns the elimination stack (axis, rows)
/// in elimination order.
fn eliminate_one_sided(
    rows: &mut Vec<CellRow>,
    int_axes: &mut Vec<usize>,
    protect: &[usize],
) -> Vec<(usize, Vec<CellRow>)> {
    let mut stack = Vec::new();
    loop {
        let mut progressed = false;
        let mut i = 0;
        while i < int_axes.len() {
            let v = int_axes[i];
            if protect.contains(&v) {
                i += 1;
                continue;
            }
            let mut pos = false;
            let mut neg = false;
            let mut in_eq = false;
            for r in rows.iter() {
                if r.coeffs[v].is_zero() {
                    continue;
                }
                match r.relation {
                    Relation::Eq => in_eq = true,
                    _ => {
                        if r.coeffs[v].is_positive() {
                            pos = true;
                        } else {
                            neg = true;
                        }
                    }
                }
            }
            if !in_eq && !(pos && neg) {
                let removed: Vec<CellRow> =
                    rows.iter().filter(|r| !r.coeffs[v].is_zero()).cloned().collect();
                rows.retain(|r| r.coeffs[v].is_zero());
                stack.push((v, removed));
                int_axes.remove(i);
                progressed = true;
            } else {
                i += 1;
            }
        }
        if !progressed {
            return stack;
        }
    }
}

/// Picks an integer value for an eliminated axis given values for every
/// variable its dropped rows mention.
fn back_substitute(axis: usize, removed: &[CellRow], values: &[Rat]) -> Rat {
    if removed.is_empty() {
        return Rat::zero();
    }
    let eval_rest = |r: &CellRow| {
        let mut rest = Rat::zero();
        for (j, c) in r.coeffs.iter().enumerate() {
            if j != axis && !c.is_zero() {
                rest += c * &values[j];
            }
        }
        rest
    };
    let positive = removed[0].coeffs[axis].is_positive();
    let mut candidate: BigInt = if positive {
        // Upper bounds: v <= (rhs - rest) / c.
        let mut m: Option<Rat> = None;
        for r in removed {
            let b = (&r.rhs - eval_rest(r)) / &r.coeffs[axis];
            m = Some(match m {
                None => b,
                Some(cur) => {
                    if b < cur {
                        b
                    } else {
                        cur
                    }
                }
            });
        }
        floor_int(&m.unwrap())
    } else {
        let mut m: Option<Rat> = None;
        for r in removed {
            let b = (&r.rhs - eval_rest(r)) / &r.coeffs[axis];
            m = Some(match m {
                None => b,
                Some(cur) => {
                    if b > cur {
                        b
                    } else {
                        cur
                    }
                }
            });
        }
        ceil_int(&m.unwrap())
    };
    // Nudge off strict boundaries.
    loop {
        let v = big_to_rat(&candidate);
        let ok = removed.iter().all(|r| {
            let lhs = eval_rest(r) + &r.coeffs[axis] * &v;
            match r.relation {
                Relation::Le => lhs <= r.rhs,
                Relation::Lt => lhs < r.rhs,
                Relation::Eq => lhs == r.rhs,
            }
        });
        if ok {
            return v;
        }
        if positive {
            candidate -= 1;
        } else {
            candidate += 1;
        }
    }
}

fn relaxation_cell(rows: &[CellRow]) -> Option<Cell> {
    Cell::new(rows.to_vec())
}

fn axis_names(vars: &[Variable]) -> Vec<String> {
    vars.iter().map(|v| v.name.clone()).collect()
}

/// Rounds declared bounds inward to integers.
fn declared_int_bounds(v: &Variable) -> Option<(BigInt, BigInt)> {
    v.bounds
        .as_ref()
        .map(|(lo, hi)| (ceil_int(lo), floor_int(hi)))
}

fn bound_from_lp(cell: &Cell, names: &[String], axis: usize, upper: bool) -> Result<BigInt> {
    let mut obj = vec![Rat::zero(); names.len()];
    obj[axis] = Rat::from_integer(1.into());
    match cell_optimize(cell, names, &obj, upper) {
        LpOutcome::Unbounded => Err(Error::UnboundedInteger(names[axis].clone())),
        LpOutcome::Infeasible => Ok(BigInt::from(0)),
        LpOutcome::Optimal { value, attained, .. } => {
            if upper {
                let mut hi = floor_int(&value);
                if !attained && is_integer(&value) {
                    hi -= 1;
                }
                Ok(hi)
            } else {
                let mut lo = ceil_int(&value);
                if !attained && is_integer(&value) {
                    lo += 1;
                }
                Ok(lo)
            }
        }
        LpOutcome::Feasible(_) => unreachable!(),
    }
}

/// Finite covering boxes for every integer variable: declared bounds pass
/// through (rounded inward); otherwise the variable is minimised and
/// maximised over the LP relaxation.
pub fn derive_integer_bounds(sys: &ConstraintSystem) -> Result<IntegerBounds> {
    let form = build_form(sys);
    let names = axis_names(&form.vars);
    let cell = relaxation_cell(&form.rows);
    let mut out = BTreeMap::new();
    for (i, v) in form.vars.iter().enumerate() {
        if v.domain != VarDomain::Integer {
            continue;
        }
        if let Some(b) = declared_int_bounds(v) {
            out.insert(v.name.clone(), b);
            continue;
        }
        match &cell {
            None => {
                out.insert(v.name.clone(), (BigInt::from(0), BigInt::from(-1)));
            }
            Some(cell) => {
                if !cell_feasible(cell, &names).is_feasible() {
                    out.insert(v.name.clone(), (BigInt::from(0), BigInt::from(-1)));
                    continue;
                }
                let lo = bound_from_lp(cell, &names, i, false)?;
                let hi = bound_from_lp(cell, &names, i, true)?;
                out.insert(v.name.clone(), (lo, hi));
            }
        }
    }
    Ok(IntegerBounds(out))
}

fn box_for(
    form: &SysForm,
    rows: &[CellRow],
    names: &[String],
    int_axes: &[usize],
) -> Result<Vec<(BigInt, BigInt)>> {
    let cell = match relaxation_cell(rows) {
        None => return Ok(vec![(BigInt::from(0), BigInt::from(-1)); int_axes.len()]),
        Some(c) => c,
    };
    if !cell_feasible(&cell, names).is_feasible() {
        return Ok(vec![(BigInt::from(0), BigInt::from(-1)); int_axes.len()]);
    }
    let mut out = Vec::with_capacity(int_axes.len());
    for &axis in int_axes {
        if let Some(b) = declared_int_bounds(&form.vars[axis]) {
            out.push(b);
            continue;
        }
        let lo = bound_from_lp(&cell, names, axis, false)?;
        let hi = bound_from_lp(&cell, names, axis, true)?;
        out.push((lo, hi));
    }
    Ok(out)
}

fn grid_size(bounds: &[(BigInt, BigInt)]) -> Option<u128> {
    let mut total: u128 = 1;
    for (lo, hi) in bounds {
        if lo > hi {
            return Some(0);
        }
        let span: BigInt = (hi - lo) + 1;
        let span = span.to_u128()?;
        total = total.checked_mul(span)?;
    }
    Some(total)
}

/// Substitutes fixed integer values into rows, producing rows over the real
/// axes only (in `real_axes` order). `None` signals constant falsity.
fn substitute_ints(
    rows: &[CellRow],
    int_axes: &[usize],
    int_values: &[BigInt],
    real_axes: &[usize],
) -> Option<Vec<CellRow>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let mut rhs = r.rhs.clone();
        for (&axis, val) in int_axes.iter().zip(int_values) {
            let c = &r.coeffs[axis];
            if !c.is_zero() {
                rhs -= c * big_to_rat(val);
            }
        }
        let coeffs: Vec<Rat> = real_axes.iter().map(|&a| r.coeffs[a].clone()).collect();
        let row = CellRow::new(coeffs, r.relation, rhs);
        if row.is_constant() {
            if row.constant_truth() {
                continue;
            }
            return None;
        }
        out.push(row);
    }
    Some(out)
}

/// Assembles the final witness: real parts, enumerated integers, eliminated
/// integers back-substituted in reverse order, untouched variables defaulted
/// to zero.
fn assemble_witness(
    form: &SysForm,
    real_axes: &[usize],
    real_witness: &PayoffPoint,
    int_axes: &[usize],
    int_values: &[BigInt],
    eliminated: &[(usize, Vec<CellRow>)],
) -> PayoffPoint {
    let mut values = vec![Rat::zero(); form.vars.len()];
    for &a in real_axes {
        if let Some(v) = real_witness.get(&form.vars[a].name) {
            values[a] = v.clone();
        }
    }
    for (&a, v) in int_axes.iter().zip(int_values) {
        values[a] = big_to_rat(v);
    }
    for (axis, removed) in eliminated.iter().rev() {
        values[*axis] = back_substitute(*axis, removed, &values);
    }
    PayoffPoint::from_pairs(
        form.vars
            .iter()
            .zip(&values)
            .map(|(v, val)| (v.name.clone(), val.clone()))
            .collect::<Vec<_>>(),
    )
}

/// Exact mixed-integer feasibility. Enumerates when the integer grid is
/// within the cap, otherwise branches on fractional integer components of
/// relaxation witnesses inside the derived box.
pub fn milp_feasible(sys: &ConstraintSystem, limits: &Limits) -> Result<LpOutcome> {
    let form = build_form(sys);
    let names = axis_names(&form.vars);
    let mut rows = form.rows.clone();
    let mut int_axes: Vec<usize> = form
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.domain == VarDomain::Integer)
        .map(|(i, _)| i)
        .collect();
    let eliminated = eliminate_one_sided(&mut rows, &mut int_axes, &[]);
    let real_axes: Vec<usize> = form
        .vars
        .iter()
        .enumerate()
        .filter(|(i, v)| v.domain == VarDomain::Real && !eliminated.iter().any(|(e, _)| e == i))
        .map(|(i, _)| i)
        .collect();

    let cell = match relaxation_cell(&rows) {
        None => return Ok(LpOutcome::Infeasible),
        Some(c) => c,
    };
    if !cell_feasible(&cell, &names).is_feasible() {
        return Ok(LpOutcome::Infeasible);
    }
    if int_axes.is_empty() {
        let real_cell = match substitute_ints(&rows, &[], &[], &real_axes) {
            None => return Ok(LpOutcome::Infeasible),
            Some(r) => Cell::new(r),
        };
        let real_names: Vec<String> =
            real_axes.iter().map(|&a| form.vars[a].name.clone()).collect();
        return Ok(match real_cell.map(|c| cell_feasible(&c, &real_names)) {
            None | Some(LpOutcome::Infeasible) => LpOutcome::Infeasible,
            Some(LpOutcome::Feasible(w)) => LpOutcome::Feasible(assemble_witness(
                &form, &real_axes, &w, &[], &[], &eliminated,
            )),
            _ => unreachable!(),
        });
    }

    let bounds = box_for(&form, &rows, &names, &int_axes)?;
    let real_names: Vec<String> = real_axes.iter().map(|&a| form.vars[a].name.clone()).collect();
    let grid = grid_size(&bounds);
    match grid {
        Some(g) if g <= limits.max_int_enum as u128 => {
            let mut assignment: Vec<BigInt> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
            if g == 0 {
                return Ok(LpOutcome::Infeasible);
            }
            let mut counter: u64 = 0;
            loop {
                counter += 1;
                if counter % 512 == 0 {
                    limits.check_deadline()?;
                }
                if let Some(res_rows) = substitute_ints(&rows, &int_axes, &assignment, &real_axes) {
                    if let Some(res_cell) = Cell::new(res_rows) {
                        if let LpOutcome::Feasible(w) = cell_feasible(&res_cell, &real_names) {
                            return Ok(LpOutcome::Feasible(assemble_witness(
                                &form,
                                &real_axes,
                                &w,
                                &int_axes,
                                &assignment,
                                &eliminated,
                            )));
                        }
                    }
                }
                if !advance(&mut assignment, &bounds) {
                    return Ok(LpOutcome::Infeasible);
                }
            }
        }
        _ => {
            // Branch and bound within the box.
            let mut budget = limits.max_int_enum;
            let outcome = branch(
                &form, &rows, &names, &int_axes, &bounds, &real_axes, &real_names, &eliminated,
                limits, &mut budget,
            )?;
            Ok(outcome)
        }
    }
}

fn advance(assignment: &mut [BigInt], bounds: &[(BigInt, BigInt)]) -> bool {
    for i in (0..assignment.len()).rev() {
        if assignment[i] < bounds[i].1 {
            assignment[i] += 1;
            for j in i + 1..assignment.len() {
                assignment[j] = bounds[j].0.clone();
            }
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn branch(
    form: &SysForm,
    rows: &[CellRow],
    names: &[String],
    int_axes: &[usize],
    boxes: &[(BigInt, BigInt)],
    real_axes: &[usize],
    real_names: &[String],
    eliminated: &[(usize, Vec<CellRow>)],
    limits: &Limits,
    budget: &mut u64,
) -> Result<LpOutcome> {
    limits.check_deadline()?;
    if *budget == 0 {
        return Err(Error::EnumerationBudgetExceeded {
            needed: 0,
            cap: limits.max_int_enum,
        });
    }
    *budget -= 1;
    if boxes.iter().any(|(lo, hi)| lo > hi) {
        return Ok(LpOutcome::Infeasible);
    }
    let mut all_rows = rows.to_vec();
    for (&axis, (lo, hi)) in int_axes.iter().zip(boxes) {
        let mut c = vec![Rat::zero(); names.len()];
        c[axis] = -Rat::from_integer(1.into());
        all_rows.push(CellRow::new(c, Relation::Le, -big_to_rat(lo)));
        let mut c = vec![Rat::zero(); names.len()];
        c[axis] = Rat::from_integer(1.into());
        all_rows.push(CellRow::new(c, Relation::Le, big_to_rat(hi)));
    }
    let cell = match Cell::new(all_rows) {
        None => return Ok(LpOutcome::Infeasible),
        Some(c) => c,
    };
    let witness = match cell_feasible(&cell, names) {
        LpOutcome::Infeasible => return Ok(LpOutcome::Infeasible),
        LpOutcome::Feasible(w) => w,
        _ => unreachable!(),
    };
    // First fractional integer axis, in declaration order.
    let fractional = int_axes.iter().enumerate().find(|(_, &axis)| {
        let v = witness.get(&form.vars[axis].name).expect("witness is total");
        !is_integer(v)
    });
    match fractional {
        None => {
            let int_values: Vec<BigInt> = int_axes
                .iter()
                .map(|&axis| witness.get(&form.vars[axis].name).unwrap().to_integer())
                .collect();
            // Re-solve the residual so strict rows over the reals keep exact
            // witnesses.
            match substitute_ints(rows, int_axes, &int_values, real_axes) {
                None => Ok(LpOutcome::Infeasible),
                Some(res_rows) => match Cell::new(res_rows) {
                    None => Ok(LpOutcome::Infeasible),
                    Some(res_cell) => match cell_feasible(&res_cell, real_names) {
                        LpOutcome::Feasible(w) => Ok(LpOutcome::Feasible(assemble_witness(
                            form,
                            real_axes,
                            &w,
                            int_axes,
                            &int_values,
                            eliminated,
                        ))),
                        _ => Ok(LpOutcome::Infeasible),
                    },
                },
            }
        }
        Some((pos, &axis)) => {
            let v = witness.get(&form.vars[axis].name).unwrap();
            let split = floor_int(v);
            let mut down = boxes.to_vec();
            down[pos].1 = split.clone();
            let mut up = boxes.to_vec();
            up[pos].0 = split + 1;
            match branch(
                form, rows, names, int_axes, &down, real_axes, real_names, eliminated, limits,
                budget,
            )? {
                LpOutcome::Infeasible => branch(
                    form, rows, names, int_axes, &up, real_axes, real_names, eliminated, limits,
                    budget,
                ),
                found => Ok(found),
            }
        }
    }
}

/// Enumerates all integer assignments within bounds, substitutes each,
/// projects the feasible residual cells onto `keep`, and returns the exact
/// projection as a finite union. Integer variables in `keep` become pinned
/// axes (`v = value` rows).
pub fn to_semilinear(
    sys: &ConstraintSystem,
    keep: &[String],
    limits: &Limits,
) -> Result<SemilinearSet> {
    for k in keep {
        if sys.var(k).is_none() {
            return Err(Error::SpecInvalid(format!(
                "projection variable `{k}` is not in scope"
            )));
        }
    }
    let form = build_form(sys);
    // Scope = keep, in system declaration order.
    let scope: Vec<String> = form
        .vars
        .iter()
        .filter(|v| keep.iter().any(|k| k == &v.name))
        .map(|v| v.name.clone())
        .collect();

    let mut rows = form.rows.clone();
    let mut int_axes: Vec<usize> = form
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.domain == VarDomain::Integer)
        .map(|(i, _)| i)
        .collect();
    let kept_axes: Vec<usize> = form
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| scope.iter().any(|k| k == &v.name))
        .map(|(i, _)| i)
        .collect();
    // Only non-kept integers may be eliminated.
    let _dropped = eliminate_one_sided(&mut rows, &mut int_axes, &kept_axes);

    let names = axis_names(&form.vars);
    let bounds = box_for(&form, &rows, &names, &int_axes)?;
    let grid = grid_size(&bounds);
    match grid {
        Some(0) => return Ok(SemilinearSet::empty(scope)),
        Some(g) if g <= limits.max_int_enum as u128 => {}
        Some(g) => {
            return Err(Error::EnumerationBudgetExceeded {
                needed: g,
                cap: limits.max_int_enum,
            })
        }
        None => {
            return Err(Error::EnumerationBudgetExceeded {
                needed: u128::MAX,
                cap: limits.max_int_enum,
            })
        }
    }

    let real_axes: Vec<usize> = form
        .vars
        .iter()
        .enumerate()
        .filter(|(i, v)| v.domain == VarDomain::Real && !rows_is_eliminated(&_dropped, *i))
        .map(|(i, _)| i)
        .collect();
    let real_names: Vec<String> = real_axes.iter().map(|&a| form.vars[a].name.clone()).collect();
    // Indices of kept real axes within the real-axes ordering.
    let keep_real_idx: Vec<usize> = real_axes
        .iter()
        .enumerate()
        .filter(|(_, &a)| kept_axes.contains(&a))
        .map(|(pos, _)| pos)
        .collect();

    let mut cells = Vec::new();
    if int_axes.is_empty() {
        if let Some(res_rows) = substitute_ints(&rows, &[], &[], &real_axes) {
            if let Some(cell) = Cell::new(res_rows) {
                if cell_feasible(&cell, &real_names).is_feasible() {
                    if let Some(projected) = super::project_cell(&cell, real_axes.len(), &keep_real_idx)
                    {
                        if let Some(final_cell) =
                            lift_projected(&projected, &form, &real_axes, &keep_real_idx, &scope, &[], &[])
                        {
                            cells.push(final_cell);
                        }
                    }
                }
            }
        }
        return Ok(SemilinearSet::from_feasible(scope, cells));
    }

    let mut assignment: Vec<BigInt> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
    let mut counter: u64 = 0;
    loop {
        counter += 1;
        if counter % 512 == 0 {
            limits.check_deadline()?;
        }
        if let Some(res_rows) = substitute_ints(&rows, &int_axes, &assignment, &real_axes) {
            if let Some(cell) = Cell::new(res_rows) {
                if cell_feasible(&cell, &real_names).is_feasible() {
                    if let Some(projected) =
                        super::project_cell(&cell, real_axes.len(), &keep_real_idx)
                    {
                        if let Some(final_cell) = lift_projected(
                            &projected,
                            &form,
                            &real_axes,
                            &keep_real_idx,
                            &scope,
                            &int_axes,
                            &assignment,
                        ) {
                            cells.push(final_cell);
                        }
                    }
                }
            }
        }
        if !advance(&mut assignment, &bounds) {
            break;
        }
    }
    Ok(SemilinearSet::from_feasible(scope, cells))
}

fn rows_is_eliminated(stack: &[(usize, Vec<CellRow>)], axis: usize) -> bool {
    stack.iter().any(|(a, _)| *a == axis)
}

/// Re-embeds a projected real cell into the final keep-scope and pins kept
/// integer axes at their enumerated values.
fn lift_projected(
    projected: &Cell,
    form: &SysForm,
    real_axes: &[usize],
    keep_real_idx: &[usize],
    scope: &[String],
    int_axes: &[usize],
    int_values: &[BigInt],
) -> Option<Cell> {
    let scope_pos: BTreeMap<&str, usize> = scope
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut rows = Vec::with_capacity(projected.rows.len() + int_axes.len());
    for r in &projected.rows {
        let mut coeffs = vec![Rat::zero(); scope.len()];
        for (j, &pos) in keep_real_idx.iter().enumerate() {
            let name = form.vars[real_axes[pos]].name.as_str();
            coeffs[scope_pos[name]] = r.coeffs[j].clone();
        }
        rows.push(CellRow::new(coeffs, r.relation, r.rhs.clone()));
    }
    for (&axis, val) in int_axes.iter().zip(int_values) {
        let name = form.vars[axis].name.as_str();
        if let Some(&pos) = scope_pos.get(name) {
            let mut coeffs = vec![Rat::zero(); scope.len()];
            coeffs[pos] = Rat::from_integer(1.into());
            rows.push(CellRow::new(coeffs, Relation::Eq, big_to_rat(val)));
        }
    }
    Cell::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::{LinearRow, RawRelation};
    use crate::rational::{rat, rint};

    fn limits() -> Limits {
        Limits::default()
    }

    fn sys(vars: Vec<Variable>, raw: Vec<(Vec<(&str, Rat)>, RawRelation, Rat)>) -> ConstraintSystem {
        let mut s = ConstraintSystem::with_vars(vars).unwrap();
        for (coeffs, rel, rhs) in raw {
            s.add_row(LinearRow::normalize(
                coeffs.into_iter().map(|(n, c)| (n.to_string(), c)),
                rel,
                rhs,
            ))
            .unwrap();
        }
        s
    }

    #[test]
    fn unbounded_integer_is_reported() {
        // {y in Z, y >= 0} with no upper row.
        let s = sys(
            vec![Variable::int_aux("y", None)],
            vec![(vec![("y", rint(1))], RawRelation::Ge, rint(0))],
        );
        assert_eq!(
            derive_integer_bounds(&s).unwrap_err(),
            Error::UnboundedInteger("y".into())
        );
    }

    #[test]
    fn bounds_follow_from_rows() {
        // alpha_1 + alpha_2 + alpha_3 = 100, alpha_i >= 0 gives [0, 100].
        let s = sys(
            vec![
                Variable::int_aux("a1", None),
                Variable::int_aux("a2", None),
                Variable::int_aux("a3", None),
            ],
            vec![
                (
                    vec![("a1", rint(1)), ("a2", rint(1)), ("a3", rint(1))],
                    RawRelation::Eq,
                    rint(100),
                ),
                (vec![("a1", rint(1))], RawRelation::Ge, rint(0)),
                (vec![("a2", rint(1))], RawRelation::Ge, rint(0)),
                (vec![("a3", rint(1))], RawRelation::Ge, rint(0)),
            ],
        );
        let b = derive_integer_bounds(&s).unwrap();
        assert_eq!(b.0["a1"], (BigInt::from(0), BigInt::from(100)));
    }

    #[test]
    fn declared_bounds_pass_through() {
        let s = sys(
            vec![Variable::int_aux("t", Some((rint(0), rint(1))))],
            vec![],
        );
        let b = derive_integer_bounds(&s).unwrap();
        assert_eq!(b.0["t"], (BigInt::from(0), BigInt::from(1)));
    }

    #[test]
    fn milp_finds_integer_points() {
        // x + y = 3, 0 <= x,y <= 2, both integer.
        let s = sys(
            vec![
                Variable::int_aux("x", Some((rint(0), rint(2)))),
                Variable::int_aux("y", Some((rint(0), rint(2)))),
            ],
            vec![(
                vec![("x", rint(1)), ("y", rint(1))],
                RawRelation::Eq,
                rint(3),
            )],
        );
        match milp_feasible(&s, &limits()).unwrap() {
            LpOutcome::Feasible(w) => {
                assert!(s.satisfies(&w).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn milp_detects_integer_infeasibility() {
        // 2x = 1 with x integer in [0, 5].
        let s = sys(
            vec![Variable::int_aux("x", Some((rint(0), rint(5))))],
            vec![(vec![("x", rint(2))], RawRelation::Eq, rint(1))],
        );
        assert_eq!(milp_feasible(&s, &limits()).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn one_sided_integers_do_not_block() {
        // x1 + x2 >= 2 with x2 unbounded integer: satisfiable by pushing x2.
        let s = sys(
            vec![
                Variable::int_aux("x1", Some((rint(-1), rint(1)))),
                Variable::int_aux("x2", None),
            ],
            vec![(
                vec![("x1", rint(1)), ("x2", rint(1))],
                RawRelation::Ge,
                rint(2),
            )],
        );
        match milp_feasible(&s, &limits()).unwrap() {
            LpOutcome::Feasible(w) => assert!(s.satisfies(&w).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn milp_branch_and_bound_on_large_grid() {
        // Grid is 100, cap 50: forces the B&B path with node headroom.
        let mut lim = limits();
        lim.max_int_enum = 50;
        let s = sys(
            vec![
                Variable::int_aux("x", Some((rint(0), rint(9)))),
                Variable::int_aux("y", Some((rint(0), rint(9)))),
            ],
            vec![
                (
                    vec![("x", rint(2)), ("y", rint(3))],
                    RawRelation::Eq,
                    rint(12),
                ),
                (vec![("x", rint(1))], RawRelation::Ge, rint(1)),
            ],
        );
        match milp_feasible(&s, &lim).unwrap() {
            LpOutcome::Feasible(w) => assert!(s.satisfies(&w).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn to_semilinear_projects_out_real_vars() {
        // {x1 + x2 <= 1} onto x1 is the whole line.
        let s = sys(
            vec![Variable::player("1"), Variable::player("2")],
            vec![(
                vec![("x_1", rint(1)), ("x_2", rint(1))],
                RawRelation::Le,
                rint(1),
            )],
        );
        let set = to_semilinear(&s, &["x_1".to_string()], &limits()).unwrap();
        assert_eq!(set.cells().len(), 1);
        assert!(set.cells()[0].rows.is_empty());
    }

    #[test]
    fn to_semilinear_enumerates_integer_slices() {
        // Example-3.6 shape with a declared box.
        let mut v1 = Variable::player("1");
        v1.domain = VarDomain::Integer;
        v1.bounds = Some((rint(0), rint(2)));
        let mut v2 = Variable::player("2");
        v2.domain = VarDomain::Integer;
        v2.bounds = Some((rint(0), rint(2)));
        let s = sys(
            vec![v1, v2],
            vec![(
                vec![("x_1", rint(1)), ("x_2", rint(1))],
                RawRelation::Ge,
                rint(2),
            )],
        );
        let set =
            to_semilinear(&s, &["x_1".to_string(), "x_2".to_string()], &limits()).unwrap();
        // Slices with k1 + k2 >= 2: (0,2),(1,1),(1,2),(2,0),(2,1),(2,2).
        let pts = set.enumerate_points().unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            let k1 = p.get("x_1").unwrap();
            let k2 = p.get("x_2").unwrap();
            assert!(k1 + k2 >= rint(2));
        }
    }

    #[test]
    fn to_semilinear_budget_is_enforced() {
        let mut lim = limits();
        lim.max_int_enum = 3;
        let s = sys(
            vec![Variable::int_aux("k", Some((rint(0), rint(9))))],
            vec![],
        );
        match to_semilinear(&s, &["k".to_string()], &lim) {
            Err(Error::EnumerationBudgetExceeded { needed, cap }) => {
                assert_eq!(needed, 10);
                assert_eq!(cap, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn piggybank_style_ratio_rows_have_witness() {
        // Small two-coin version of the coin-split system.
        let s = sys(
            vec![
                Variable::player("1"),
                Variable::player("2"),
                Variable::int_aux("a1", None),
                Variable::int_aux("a2", None),
            ],
            vec![
                (
                    vec![("x_1", rint(1)), ("a1", rint(-1))],
                    RawRelation::Eq,
                    rint(0),
                ),
                (
                    vec![("x_2", rint(1)), ("a2", rint(-1))],
                    RawRelation::Eq,
                    rint(0),
                ),
                (
                    vec![("a1", rint(1)), ("a2", rint(1))],
                    RawRelation::Eq,
                    rint(10),
                ),
                (vec![("a1", rint(1))], RawRelation::Ge, rint(0)),
                (vec![("a2", rint(1))], RawRelation::Ge, rint(0)),
                (
                    // x1 >= 10/8 x2
                    vec![("x_1", rint(1)), ("x_2", rat(-10, 8))],
                    RawRelation::Ge,
                    rint(0),
                ),
            ],
        );
        match milp_feasible(&s, &limits()).unwrap() {
            LpOutcome::Feasible(w) => assert!(s.satisfies(&w).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }
}

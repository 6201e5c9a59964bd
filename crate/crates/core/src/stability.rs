//! Imputation checking, core membership and non-emptiness, objections,
//! counterobjections and the bargaining set.
//!
//! Membership checks reduce to mixed-integer feasibility of systems built
//! from renamed coalition copies of the constraint rows. Non-emptiness goes
//! through the semilinear set algebra: the candidate set is materialised as
//! a finite union of cells and the blocking/justified regions are subtracted
//! exactly.

use crate::error::{Error, Result};
use crate::game::{Coalition, ConstrainedGame};
use crate::limits::Limits;
use crate::linsys::{ConstraintSystem, LinearRow, PayoffPoint, RawRelation, VarKind};
use crate::rational::{rint, Rat};
use crate::solver::{milp_feasible, to_semilinear, LpOutcome, SemilinearSet};
use num_traits::Zero;

/// Which imputation condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImputationFailure {
    Consequence,
    Efficiency,
    Rationality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreVerdict {
    Member,
    NotImputation(ImputationFailure),
    Blocked {
        coalition: Coalition,
        payoff: PayoffPoint,
    },
}

/// A justified objection `(y, S)` of one player against another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objection {
    pub objector: usize,
    pub target: usize,
    pub coalition: Coalition,
    pub payoff: PayoffPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BargainingVerdict {
    Member,
    NotImputation(ImputationFailure),
    Justified(Objection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonemptinessResult {
    Empty,
    Witness(PayoffPoint),
}

fn coalition_sum(g: &ConstrainedGame, coalition: Coalition, x: &PayoffPoint) -> Result<Rat> {
    let mut total = Rat::zero();
    for i in coalition.members(g.num_players()) {
        let name = g.player_var(i);
        total += x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
    }
    Ok(total)
}

/// Renamed copy of the rows coalition S can see, with S's payoff variables
/// as `<tag>_<id>` and auxiliaries tagged `__<tag>`.
fn coalition_copy(g: &ConstrainedGame, coalition: Coalition, tag: &str) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new();
    let ids: Vec<String> = coalition
        .members(g.num_players())
        .into_iter()
        .map(|i| g.players()[i].clone())
        .collect();
    for i in coalition.members(g.num_players()) {
        sys.add_var(g.player_variable(i)).expect("players unique");
    }
    for v in g.lc.vars() {
        if matches!(v.kind, VarKind::Aux) {
            sys.add_var(v.clone()).expect("aux unique");
        }
    }
    for row in g.coalition_rows(coalition) {
        sys.add_row(row).expect("in scope");
    }
    let (renamed, _) = sys.rename_for_coalition(&ids, tag);
    renamed
}

fn tagged_var(tag: &str, id: &str) -> String {
    format!("{tag}_{id}")
}

fn sum_row_le(names: &[String], rhs: Rat) -> LinearRow {
    LinearRow::normalize(
        names.iter().map(|n| (n.clone(), rint(1))),
        RawRelation::Le,
        rhs,
    )
}

/// `var > bound`.
fn gt_row(name: &str, bound: Rat) -> LinearRow {
    LinearRow::normalize(vec![(name.to_string(), rint(1))], RawRelation::Gt, bound)
}

/// `left >= right` over two variables.
fn ge_pair_row(left: &str, right: &str) -> LinearRow {
    LinearRow::normalize(
        vec![(left.to_string(), rint(1)), (right.to_string(), rint(-1))],
        RawRelation::Ge,
        Rat::zero(),
    )
}

/// `left > right` over two variables.
fn gt_pair_row(left: &str, right: &str) -> LinearRow {
    LinearRow::normalize(
        vec![(left.to_string(), rint(1)), (right.to_string(), rint(-1))],
        RawRelation::Gt,
        Rat::zero(),
    )
}

/// Efficiency (weak Pareto optimality): no consequence of N dominates x in
/// every coordinate.
pub fn is_efficient(g: &ConstrainedGame, x: &PayoffPoint, limits: &Limits) -> Result<bool> {
    let mut sys = g.consequence_system(g.grand_coalition());
    for i in 0..g.num_players() {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        sys.add_row(gt_row(&name, xi.clone())).expect("in scope");
    }
    Ok(!milp_feasible(&sys, limits)?.is_feasible())
}

/// Individual rationality: for each player, no singleton consequence pays
/// strictly more. An empty singleton consequence set is vacuously fine.
pub fn is_individually_rational(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<bool> {
    for i in 0..g.num_players() {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        let mut sys = g.consequence_system(Coalition::from_indices(&[i]));
        sys.add_row(gt_row(&name, xi.clone())).expect("in scope");
        if milp_feasible(&sys, limits)?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full imputation test; `None` means x is an imputation.
pub fn is_imputation(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<Option<ImputationFailure>> {
    if !g.is_consequence(g.grand_coalition(), x, limits)? {
        return Ok(Some(ImputationFailure::Consequence));
    }
    if !is_efficient(g, x, limits)? {
        return Ok(Some(ImputationFailure::Efficiency));
    }
    if !is_individually_rational(g, x, limits)? {
        return Ok(Some(ImputationFailure::Rationality));
    }
    Ok(None)
}

/// Extracts the payoffs of S's tagged variables from a solver witness and
/// re-keys them under the plain player variable names.
fn extract_coalition_payoff(
    g: &ConstrainedGame,
    coalition: Coalition,
    tag: &str,
    witness: &PayoffPoint,
) -> PayoffPoint {
    let mut out = PayoffPoint::new();
    for i in coalition.members(g.num_players()) {
        let id = &g.players()[i];
        if let Some(v) = witness.get(&tagged_var(tag, id)) {
            out.insert(g.player_var(i), v.clone());
        }
    }
    out
}

/// Core membership: imputation test, then a blocking search over coalitions
/// in ascending bitmask order. A coalition with `v(S) <= x(S)` can never
/// block (an objection forces `v(S) >= y(S) > x(S)`).
pub fn core_check(g: &ConstrainedGame, x: &PayoffPoint, limits: &Limits) -> Result<CoreVerdict> {
    if let Some(failure) = is_imputation(g, x, limits)? {
        return Ok(CoreVerdict::NotImputation(failure));
    }
    let n = g.num_players();
    for coalition in Coalition::all_nonempty(n) {
        limits.check_deadline()?;
        if g.worth(coalition) <= coalition_sum(g, coalition, x)? {
            continue;
        }
        let mut sys = coalition_copy(g, coalition, "y");
        let y_names: Vec<String> = coalition
            .members(n)
            .into_iter()
            .map(|i| tagged_var("y", &g.players()[i]))
            .collect();
        sys.add_row(sum_row_le(&y_names, g.worth(coalition)))
            .expect("in scope");
        for i in coalition.members(n) {
            let xi = x.get(&g.player_var(i)).expect("checked by is_imputation");
            sys.add_row(gt_row(&tagged_var("y", &g.players()[i]), xi.clone()))
                .expect("in scope");
        }
        if let LpOutcome::Feasible(w) = milp_feasible(&sys, limits)? {
            return Ok(CoreVerdict::Blocked {
                coalition,
                payoff: extract_coalition_payoff(g, coalition, "y", &w),
            });
        }
    }
    Ok(CoreVerdict::Member)
}

/// Per-player lower bounds implied by individual rationality: `x_i` must
/// dominate the supremum of the singleton consequence set whenever that set
/// is non-empty (`None` marks an empty set, i.e. no bound). Sound
/// strengthening for the non-emptiness machinery.
fn envelope_values(g: &ConstrainedGame, limits: &Limits) -> Result<Vec<Option<Rat>>> {
    let mut out = Vec::with_capacity(g.num_players());
    for i in 0..g.num_players() {
        let set = g.consequence_set(Coalition::from_indices(&[i]), limits)?;
        match set.optimize(&[rint(1)], true) {
            LpOutcome::Optimal { value, .. } => out.push(Some(value)),
            _ => out.push(None),
        }
    }
    Ok(out)
}

fn envelope_rows(g: &ConstrainedGame, envelope: &[Option<Rat>]) -> Vec<LinearRow> {
    envelope
        .iter()
        .enumerate()
        .filter_map(|(i, bound)| {
            bound.as_ref().map(|b| {
                LinearRow::normalize(
                    vec![(g.player_var(i), rint(1))],
                    RawRelation::Ge,
                    b.clone(),
                )
            })
        })
        .collect()
}

/// An objection through S needs `v(S) >= y(S) > x(S) >= sum of the members'
/// envelope bounds`; when the worth cannot clear that sum the coalition can
/// never block any candidate point.
fn coalition_can_block(g: &ConstrainedGame, coalition: Coalition, envelope: &[Option<Rat>]) -> bool {
    let mut total = Rat::zero();
    for i in coalition.members(g.num_players()) {
        match &envelope[i] {
            Some(b) => total += b,
            None => return true,
        }
    }
    g.worth(coalition) > total
}

/// The grand-coalition copy (player variables keep their names, auxiliaries
/// tagged `__x`) plus `x(N) <= v(N)` and the envelope rows.
fn imputation_base(g: &ConstrainedGame, envelope: &[Option<Rat>]) -> Result<ConstraintSystem> {
    let mut sys = coalition_copy(g, g.grand_coalition(), "x");
    let x_names: Vec<String> = (0..g.num_players()).map(|i| g.player_var(i)).collect();
    sys.add_row(sum_row_le(&x_names, g.worth(g.grand_coalition())))
        .expect("in scope");
    for row in envelope_rows(g, envelope) {
        sys.add_row(row).expect("in scope");
    }
    Ok(sys)
}

fn player_axes(g: &ConstrainedGame) -> Vec<String> {
    (0..g.num_players()).map(|i| g.player_var(i)).collect()
}

/// Region of payoff vectors that fail individual rationality against player
/// `i`, as a subtraction term over the grand-coalition axes.
fn irrational_region(
    g: &ConstrainedGame,
    base: &ConstraintSystem,
    i: usize,
    limits: &Limits,
) -> Result<SemilinearSet> {
    let mut sys = base.clone();
    let singleton = Coalition::from_indices(&[i]);
    sys.merge(&coalition_copy(g, singleton, "ir"))
        .expect("copies are disjoint");
    let ir_name = tagged_var("ir", &g.players()[i]);
    sys.add_row(sum_row_le(
        std::slice::from_ref(&ir_name),
        g.worth(singleton),
    ))
    .expect("in scope");
    sys.add_row(gt_pair_row(&ir_name, &g.player_var(i)))
        .expect("in scope");
    to_semilinear(&sys, &player_axes(g), limits)
}

/// Region blocked by an objection through S (for S = N this carves away the
/// inefficient points), as a subtraction term over the grand-coalition axes.
fn blocked_region(
    g: &ConstrainedGame,
    base: &ConstraintSystem,
    coalition: Coalition,
    limits: &Limits,
) -> Result<SemilinearSet> {
    let mut sys = base.clone();
    sys.merge(&coalition_copy(g, coalition, "y"))
        .expect("copies are disjoint");
    let y_names: Vec<String> = coalition
        .members(g.num_players())
        .into_iter()
        .map(|i| tagged_var("y", &g.players()[i]))
        .collect();
    sys.add_row(sum_row_le(&y_names, g.worth(coalition)))
        .expect("in scope");
    for i in coalition.members(g.num_players()) {
        sys.add_row(gt_pair_row(
            &tagged_var("y", &g.players()[i]),
            &g.player_var(i),
        ))
        .expect("in scope");
    }
    to_semilinear(&sys, &player_axes(g), limits)
}

/// The imputation set `X(G|LC)` as a semilinear set over the payoff axes:
/// consequences of N minus the inefficient region minus the individually
/// irrational regions.
pub fn imputation_set(g: &ConstrainedGame, limits: &Limits) -> Result<SemilinearSet> {
    let envelope = envelope_values(g, limits)?;
    let base = imputation_base(g, &envelope)?;
    let mut x = to_semilinear(&base, &player_axes(g), limits)?;
    if x.is_empty() {
        return Ok(x);
    }
    let inefficient = blocked_region(g, &base, g.grand_coalition(), limits)?;
    x = x.difference(&inefficient, limits)?;
    for i in 0..g.num_players() {
        if x.is_empty() {
            break;
        }
        let bad = irrational_region(g, &base, i, limits)?;
        x = x.difference(&bad, limits)?;
    }
    Ok(x)
}

/// Core non-emptiness via exact set subtraction: start from the candidate
/// region, remove irrational points, then every coalition's blocked region
/// (S = N removes the inefficient points). The returned witness is
/// re-validated through `core_check`.
pub fn core_nonempty(g: &ConstrainedGame, limits: &Limits) -> Result<NonemptinessResult> {
    let envelope = envelope_values(g, limits)?;
    let base = imputation_base(g, &envelope)?;
    let mut core = to_semilinear(&base, &player_axes(g), limits)?;
    for i in 0..g.num_players() {
        if core.is_empty() {
            return Ok(NonemptinessResult::Empty);
        }
        let bad = irrational_region(g, &base, i, limits)?;
        core = core.difference(&bad, limits)?;
    }
    for coalition in Coalition::all_nonempty(g.num_players()) {
        limits.check_deadline()?;
        if core.is_empty() {
            return Ok(NonemptinessResult::Empty);
        }
        if !coalition_can_block(g, coalition, &envelope) {
            // The envelope rows in the base already force emptiness of this
            // blocked region (this covers the efficiency term too).
            continue;
        }
        let blocked = blocked_region(g, &base, coalition, limits)?;
        core = core.difference(&blocked, limits)?;
    }
    match core.witness() {
        None => Ok(NonemptinessResult::Empty),
        Some(w) => {
            let w = w.restrict(player_axes(g).iter().map(|s| s.as_str()));
            match core_check(g, &w, limits)? {
                CoreVerdict::Member => Ok(NonemptinessResult::Witness(w)),
                other => Err(Error::SpecInvalid(format!(
                    "non-emptiness witness failed re-validation: {other:?}"
                ))),
            }
        }
    }
}

/// Objection system over the y-copy for a concrete imputation x.
fn objection_system(
    g: &ConstrainedGame,
    coalition: Coalition,
    x: &PayoffPoint,
) -> Result<ConstraintSystem> {
    let n = g.num_players();
    let mut sys = coalition_copy(g, coalition, "y");
    let y_names: Vec<String> = coalition
        .members(n)
        .into_iter()
        .map(|i| tagged_var("y", &g.players()[i]))
        .collect();
    sys.add_row(sum_row_le(&y_names, g.worth(coalition)))
        .expect("in scope");
    for i in coalition.members(n) {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        sys.add_row(gt_row(&tagged_var("y", &g.players()[i]), xi.clone()))
            .expect("in scope");
    }
    Ok(sys)
}

/// Adds the counterobjection copy for T to an objection system: `z` is
/// T-feasible, `z_k >= y_k` on `T ∩ S`, `z_k >= x_k` on `T \ S` (with x
/// either a concrete point or the symbolic payoff axes).
fn add_counterobjection(
    g: &ConstrainedGame,
    sys: &mut ConstraintSystem,
    obj_coalition: Coalition,
    counter: Coalition,
    x: Option<&PayoffPoint>,
) -> Result<()> {
    let n = g.num_players();
    sys.merge(&coalition_copy(g, counter, "z"))
        .expect("copies are disjoint");
    let z_names: Vec<String> = counter
        .members(n)
        .into_iter()
        .map(|i| tagged_var("z", &g.players()[i]))
        .collect();
    sys.add_row(sum_row_le(&z_names, g.worth(counter)))
        .expect("in scope");
    for i in counter.members(n) {
        let z_name = tagged_var("z", &g.players()[i]);
        if obj_coalition.contains(i) {
            sys.add_row(ge_pair_row(&z_name, &tagged_var("y", &g.players()[i])))
                .expect("in scope");
        } else {
            match x {
                Some(x) => {
                    let name = g.player_var(i);
                    let xi = x
                        .get(&name)
                        .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
                    sys.add_row(LinearRow::normalize(
                        vec![(z_name, rint(1))],
                        RawRelation::Ge,
                        xi.clone(),
                    ))
                    .expect("in scope");
                }
                None => {
                    sys.add_row(ge_pair_row(&z_name, &g.player_var(i)))
                        .expect("in scope");
                }
            }
        }
    }
    Ok(())
}

/// Searches for a justified objection to the imputation x: pairs `(i, j)`
/// in lexicographic player order, coalitions ascending. For each candidate
/// the counterobjection regions are subtracted from the objection region;
/// the first residual non-empty region yields the witness.
pub fn justified_objection(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<Option<Objection>> {
    let n = g.num_players();
    for objector in 0..n {
        for target in 0..n {
            if objector == target {
                continue;
            }
            for coalition in Coalition::all_nonempty(n) {
                limits.check_deadline()?;
                if !coalition.contains(objector) || coalition.contains(target) {
                    continue;
                }
                if g.worth(coalition) <= coalition_sum(g, coalition, x)? {
                    continue;
                }
                let obj_sys = objection_system(g, coalition, x)?;
                let y_names: Vec<String> = coalition
                    .members(n)
                    .into_iter()
                    .map(|i| tagged_var("y", &g.players()[i]))
                    .collect();
                let mut region = to_semilinear(&obj_sys, &y_names, limits)?;
                if region.is_empty() {
                    continue;
                }
                for counter in Coalition::all_nonempty(n) {
                    if !counter.contains(target) || counter.contains(objector) {
                        continue;
                    }
                    let mut counter_sys = obj_sys.clone();
                    add_counterobjection(g, &mut counter_sys, coalition, counter, Some(x))?;
                    if !milp_feasible(&counter_sys, limits)?.is_feasible() {
                        continue;
                    }
                    let countered = to_semilinear(&counter_sys, &y_names, limits)?;
                    region = region.difference(&countered, limits)?;
                    if region.is_empty() {
                        break;
                    }
                }
                if let Some(w) = region.witness() {
                    return Ok(Some(Objection {
                        objector,
                        target,
                        coalition,
                        payoff: extract_coalition_payoff(g, coalition, "y", &w),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Bargaining-set membership: an imputation with no justified objection.
pub fn bargaining_check(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<BargainingVerdict> {
    if let Some(failure) = is_imputation(g, x, limits)? {
        return Ok(BargainingVerdict::NotImputation(failure));
    }
    Ok(match justified_objection(g, x, limits)? {
        Some(objection) => BargainingVerdict::Justified(objection),
        None => BargainingVerdict::Member,
    })
}

/// Bargaining-set non-emptiness: the imputation set minus, for every
/// `(i, j, S)`, the projection of the justified-objection region over the
/// joint `x`/`y` scope. The witness is re-validated through
/// `bargaining_check`.
pub fn bargaining_nonempty(g: &ConstrainedGame, limits: &Limits) -> Result<NonemptinessResult> {
    let n = g.num_players();
    if n > limits.bargaining_player_cap {
        return Err(Error::PlayerLimitExceeded {
            players: n,
            cap: limits.bargaining_player_cap,
        });
    }
    let envelope = envelope_values(g, limits)?;
    let base = imputation_base(g, &envelope)?;
    let mut remaining = imputation_set(g, limits)?;
    let x_axes = player_axes(g);
    for objector in 0..n {
        for target in 0..n {
            if objector == target {
                continue;
            }
            for coalition in Coalition::all_nonempty(n) {
                limits.check_deadline()?;
                if remaining.is_empty() {
                    return Ok(NonemptinessResult::Empty);
                }
                if !coalition.contains(objector) || coalition.contains(target) {
                    continue;
                }
                if !coalition_can_block(g, coalition, &envelope) {
                    continue;
                }
                let mut obj_sys = base.clone();
                obj_sys
                    .merge(&coalition_copy(g, coalition, "y"))
                    .expect("copies are disjoint");
                let y_names: Vec<String> = coalition
                    .members(n)
                    .into_iter()
                    .map(|i| tagged_var("y", &g.players()[i]))
                    .collect();
                obj_sys
                    .add_row(sum_row_le(&y_names, g.worth(coalition)))
                    .expect("in scope");
                for i in coalition.members(n) {
                    obj_sys
                        .add_row(gt_pair_row(
                            &tagged_var("y", &g.players()[i]),
                            &g.player_var(i),
                        ))
                        .expect("in scope");
                }
                let mut joint_axes = x_axes.clone();
                joint_axes.extend(y_names.iter().cloned());
                let mut region = to_semilinear(&obj_sys, &joint_axes, limits)?;
                if region.is_empty() {
                    continue;
                }
                for counter in Coalition::all_nonempty(n) {
                    if !counter.contains(target) || counter.contains(objector) {
                        continue;
                    }
                    let mut counter_sys = obj_sys.clone();
                    add_counterobjection(g, &mut counter_sys, coalition, counter, None)?;
                    if !milp_feasible(&counter_sys, limits)?.is_feasible() {
                        continue;
                    }
                    let countered = to_semilinear(&counter_sys, &joint_axes, limits)?;
                    region = region.difference(&countered, limits)?;
                    if region.is_empty() {
                        break;
                    }
                }
                if region.is_empty() {
                    continue;
                }
                let justified_x = region.project(&x_axes)?;
                remaining = remaining.difference(&justified_x, limits)?;
            }
        }
    }
    match remaining.witness() {
        None => Ok(NonemptinessResult::Empty),
        Some(w) => {
            let w = w.restrict(x_axes.iter().map(|s| s.as_str()));
            match bargaining_check(g, &w, limits)? {
                BargainingVerdict::Member => Ok(NonemptinessResult::Witness(w)),
                other => Err(Error::SpecInvalid(format!(
                    "non-emptiness witness failed re-validation: {other:?}"
                ))),
            }
        }
    }
}

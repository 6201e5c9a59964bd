//! Excess functions, theta vectors, nucleolus, kernel and Shapley values.
//!
//! The diagonal excess (the shift t keeping `x + (t/|S|) 1` inside the
//! consequence set) is computed by materialising the consequence system with
//! a fresh shift variable and optimising over the one-dimensional
//! projection. On TU games it coincides with the canonical `v(S) - x(S)`.
//!
//! The TU nucleolus uses the iterative tightening scheme: repeatedly
//! minimise the largest free excess, then fix exactly the coalitions whose
//! excess is constant on the optimal face.

use crate::error::{Error, Result};
use crate::game::{Coalition, ConstrainedGame, TuReduction, WorthFn};
use crate::limits::Limits;
use crate::linsys::{LinearRow, PayoffPoint, RawRelation, Variable};
use crate::rational::{big_to_rat, rint, Rat};
use crate::solver::{simplex_max, to_semilinear, LinRel, LpOutcome, SimplexResult};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// A possibly infinite excess value; suprema carry an attainedness flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtRat {
    NegInf,
    Finite { value: Rat, attained: bool },
    PosInf,
}

impl ExtRat {
    pub fn finite(value: Rat, attained: bool) -> ExtRat {
        ExtRat::Finite { value, attained }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Total order on the magnitude (attainedness ignored):
    /// `-inf < finite < +inf`.
    pub fn cmp_value(&self, other: &ExtRat) -> Ordering {
        use ExtRat::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) => Ordering::Less,
            (_, NegInf) => Ordering::Greater,
            (PosInf, _) => Ordering::Greater,
            (_, PosInf) => Ordering::Less,
            (Finite { value: a, .. }, Finite { value: b, .. }) => a.cmp(b),
        }
    }
}

/// All coalition excesses sorted non-increasingly (`-inf` last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaVector(pub Vec<ExtRat>);

/// The diagonal excess of S at x: the supremum shift t such that
/// `y_i = x_i + t/|S|` stays S-feasible. Empty consequence sets give `-inf`
/// (the supremum over the empty set).
pub fn excess_kalai(
    g: &ConstrainedGame,
    coalition: Coalition,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<ExtRat> {
    let n = g.num_players();
    let members = coalition.members(n);
    assert!(!members.is_empty(), "excess of the empty coalition");
    let size = rint(members.len() as i64);
    let mut sys = g.consequence_system(coalition);
    sys.add_var(Variable::real_aux("t"))?;
    for &i in &members {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        // y_i - t/|S| = x_i
        sys.add_row(LinearRow::normalize(
            vec![(name, rint(1)), ("t".to_string(), -rint(1) / &size)],
            RawRelation::Eq,
            xi.clone(),
        ))?;
    }
    let set = to_semilinear(&sys, &["t".to_string()], limits)?;
    Ok(match set.optimize(&[rint(1)], true) {
        LpOutcome::Infeasible => ExtRat::NegInf,
        LpOutcome::Unbounded => ExtRat::PosInf,
        LpOutcome::Optimal { value, attained, .. } => ExtRat::finite(value, attained),
        LpOutcome::Feasible(_) => unreachable!(),
    })
}

/// Theta vector at x: excesses of every non-empty coalition sorted
/// non-increasingly; ties keep ascending coalition-bitmask order.
pub fn theta(g: &ConstrainedGame, x: &PayoffPoint, limits: &Limits) -> Result<ThetaVector> {
    let n = g.num_players();
    let mut excesses: Vec<ExtRat> = Vec::with_capacity((1 << n) - 1);
    for coalition in Coalition::all_nonempty(n) {
        limits.check_deadline()?;
        excesses.push(excess_kalai(g, coalition, x, limits)?);
    }
    excesses.sort_by(|a, b| b.cmp_value(a));
    Ok(ThetaVector(excesses))
}

/// Strict lexicographic comparison of equal-length theta vectors.
pub fn lex_less(a: &ThetaVector, b: &ThetaVector) -> Result<bool> {
    if a.0.len() != b.0.len() {
        return Err(Error::LengthMismatch(a.0.len(), b.0.len()));
    }
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp_value(y) {
            Ordering::Less => return Ok(true),
            Ordering::Greater => return Ok(false),
            Ordering::Equal => continue,
        }
    }
    Ok(false)
}

fn factorial(k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=k {
        out *= BigInt::from(i);
    }
    out
}

/// Exact TU Shapley value via the subset-sum formula
/// `sum_S |S|!(n-|S|-1)!/n! (v(S u {i}) - v(S))`.
pub fn shapley(g: &ConstrainedGame) -> PayoffPoint {
    shapley_of_worth(g.players(), &g.worth)
}

/// Shapley value of an explicit worth function over the given players.
pub fn shapley_of_worth(players: &[String], worth: &WorthFn) -> PayoffPoint {
    let n = players.len();
    let n_fact = big_to_rat(&factorial(n));
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let mut phi = Rat::zero();
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        for mask in 0..(1u64 << others.len()) {
            let mut s = Coalition::empty();
            for (pos, &j) in others.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    s.insert(j);
                }
            }
            let mut with_i = s;
            with_i.insert(i);
            let weight = big_to_rat(&(factorial(s.len()) * factorial(n - s.len() - 1)));
            phi += weight / &n_fact * (worth.eval(n, with_i) - worth.eval(n, s));
        }
        values.push(phi);
    }
    PayoffPoint::for_players(players, &values)
}

/// Surplus of player i against j at x: the best canonical excess over
/// coalitions containing i but not j. Uses the game's TU worth function
/// directly (callers reduce constrained games first).
pub fn surplus(g: &ConstrainedGame, x: &PayoffPoint, i: usize, j: usize) -> Result<Rat> {
    assert_ne!(i, j);
    let n = g.num_players();
    let mut best: Option<Rat> = None;
    for coalition in Coalition::all_nonempty(n) {
        if !coalition.contains(i) || coalition.contains(j) {
            continue;
        }
        let mut sum = Rat::zero();
        for k in coalition.members(n) {
            let name = g.player_var(k);
            sum += x
                .get(&name)
                .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        }
        let e = g.worth(coalition) - sum;
        best = Some(match best {
            None => e,
            Some(b) if e > b => e,
            Some(b) => b,
        });
    }
    Ok(best.expect("i has at least the singleton coalition"))
}

/// Kernel verdict with the first violating ordered pair, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelVerdict {
    Member,
    NotImputation,
    Outweighed { i: usize, j: usize },
}

/// Resolves the TU game the kernel/nucleolus should run on: the game itself
/// when unconstrained, otherwise its TU reduction.
fn effective_tu(g: &ConstrainedGame, limits: &Limits) -> Result<ConstrainedGame> {
    if !g.has_constraints() {
        return Ok(g.clone());
    }
    match g.tu_reduce(limits)? {
        TuReduction::Reducible { vprime } => ConstrainedGame::tu(g.players().to_vec(), vprime),
        TuReduction::NotReducible { coalition, reason } => Err(Error::NotTuReducible(format!(
            "coalition mask {}: {reason}",
            coalition.0
        ))),
    }
}

fn is_tu_imputation(g: &ConstrainedGame, x: &PayoffPoint) -> Result<bool> {
    let n = g.num_players();
    let mut total = Rat::zero();
    for i in 0..n {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        if *xi < g.worth(Coalition::from_indices(&[i])) {
            return Ok(false);
        }
        total += xi;
    }
    Ok(total == g.worth(g.grand_coalition()))
}

/// Kernel membership: no ordered pair (i, j) with `s_ij > s_ji` while
/// `x_j > v({j})`. Constrained games go through the TU reduction.
pub fn kernel_check(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    limits: &Limits,
) -> Result<KernelVerdict> {
    let tu = effective_tu(g, limits)?;
    if !is_tu_imputation(&tu, x)? {
        return Ok(KernelVerdict::NotImputation);
    }
    let n = tu.num_players();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sij = surplus(&tu, x, i, j)?;
            let sji = surplus(&tu, x, j, i)?;
            if sij > sji {
                let xj = x.get(&tu.player_var(j)).expect("imputation is total");
                if *xj != tu.worth(Coalition::from_indices(&[j])) {
                    return Ok(KernelVerdict::Outweighed { i, j });
                }
            }
        }
    }
    Ok(KernelVerdict::Member)
}

/// TU nucleolus by iterative excess tightening. Errors with
/// `EmptyImputationSet` when the imputation polytope is empty and
/// `NotTuReducible` when a constrained game admits no TU reduction.
pub fn nucleolus(g: &ConstrainedGame, limits: &Limits) -> Result<PayoffPoint> {
    let tu = effective_tu(g, limits)?;
    let n = tu.num_players();
    let singles_total: Rat = (0..n)
        .map(|i| tu.worth(Coalition::from_indices(&[i])))
        .sum();
    let grand = tu.worth(tu.grand_coalition());
    if singles_total > grand {
        return Err(Error::EmptyImputationSet);
    }

    // Variables 0..n are the payoffs, n is the current bound epsilon.
    let num_vars = n + 1;
    let mut state: Vec<(Vec<Rat>, LinRel, Rat)> = Vec::new();
    let mut coeffs = vec![Rat::zero(); num_vars];
    for c in coeffs.iter_mut().take(n) {
        *c = rint(1);
    }
    state.push((coeffs, LinRel::Eq, grand.clone()));
    for i in 0..n {
        let mut c = vec![Rat::zero(); num_vars];
        c[i] = -rint(1);
        state.push((c, LinRel::Le, -tu.worth(Coalition::from_indices(&[i]))));
    }

    let mut active: Vec<Coalition> = Coalition::all_nonempty(n)
        .filter(|s| *s != tu.grand_coalition())
        .collect();

    let excess_row = |s: Coalition| -> Vec<Rat> {
        // v(S) - x(S) <= eps  as  -x(S) - eps <= -v(S)
        let mut c = vec![Rat::zero(); num_vars];
        for i in s.members(n) {
            c[i] = -rint(1);
        }
        c[n] = -rint(1);
        c
    };

    while !active.is_empty() {
        limits.check_deadline()?;
        let mut rows = state.clone();
        for &s in &active {
            rows.push((excess_row(s), LinRel::Le, -tu.worth(s)));
        }
        // Minimise eps = maximise -eps.
        let mut obj = vec![Rat::zero(); num_vars];
        obj[n] = -rint(1);
        let eps = match simplex_max(num_vars, &vec![false; num_vars], &rows, &obj) {
            SimplexResult::Optimal { value, .. } => -value,
            SimplexResult::Infeasible => return Err(Error::EmptyImputationSet),
            SimplexResult::Unbounded => {
                unreachable!("epsilon is bounded below by any coalition excess")
            }
        };
        // Optimal face: pin eps at its optimum.
        let mut face = rows.clone();
        let mut pin = vec![Rat::zero(); num_vars];
        pin[n] = rint(1);
        face.push((pin, LinRel::Eq, eps.clone()));

        // A coalition is fixed iff its excess cannot drop below eps on the
        // face (minimum excess = v(S) - max x(S)).
        let mut still_active = Vec::new();
        let mut fixed_any = false;
        for &s in &active {
            let mut obj = vec![Rat::zero(); num_vars];
            for i in s.members(n) {
                obj[i] = rint(1);
            }
            let max_sum = match simplex_max(num_vars, &vec![false; num_vars], &face, &obj) {
                SimplexResult::Optimal { value, .. } => value,
                other => unreachable!("face is a non-empty polytope: {other:?}"),
            };
            if tu.worth(s) - &max_sum == eps {
                let mut c = vec![Rat::zero(); num_vars];
                for i in s.members(n) {
                    c[i] = rint(1);
                }
                state.push((c, LinRel::Eq, tu.worth(s) - &eps));
                fixed_any = true;
            } else {
                let mut row = excess_row(s);
                // The level's bound becomes a constant for surviving rows.
                row[n] = Rat::zero();
                still_active.push(s);
                state.push((row, LinRel::Le, -tu.worth(s) + &eps));
            }
        }
        debug_assert!(fixed_any, "each level fixes at least one coalition");
        active = still_active;
    }

    // The remaining face is a single point: read it off coordinate-wise.
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let mut obj = vec![Rat::zero(); num_vars];
        obj[i] = rint(1);
        let hi = match simplex_max(num_vars, &vec![false; num_vars], &state, &obj) {
            SimplexResult::Optimal { value, .. } => value,
            other => unreachable!("nucleolus face is non-empty: {other:?}"),
        };
        obj[i] = -rint(1);
        let lo = match simplex_max(num_vars, &vec![false; num_vars], &state, &obj) {
            SimplexResult::Optimal { value, .. } => -value,
            other => unreachable!("nucleolus face is non-empty: {other:?}"),
        };
        if lo != hi {
            return Err(Error::SpecInvalid(
                "nucleolus face has positive extent".into(),
            ));
        }
        values.push(hi);
    }
    Ok(PayoffPoint::for_players(tu.players(), &values))
}

/// Shapley-NTU verification outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapleyNtuVerdict {
    Accepted,
    NotConsequence,
    GameUndefined(Coalition),
    ValueMismatch(usize),
}

/// Verifies a candidate Shapley-NTU value payoff for the given positive
/// weights: x must be a consequence of N, the rescaled game must be defined
/// (all weighted suprema finite), and `lambda_i x_i` must equal the Shapley
/// value of the rescaled game exactly.
pub fn shapley_ntu_check(
    g: &ConstrainedGame,
    x: &PayoffPoint,
    lambda: &[Rat],
    limits: &Limits,
) -> Result<ShapleyNtuVerdict> {
    let n = g.num_players();
    if lambda.len() != n || lambda.iter().any(|l| *l <= Rat::zero()) {
        return Err(Error::NonpositiveLambda);
    }
    if !g.is_consequence(g.grand_coalition(), x, limits)? {
        return Ok(ShapleyNtuVerdict::NotConsequence);
    }
    let mut values = std::collections::BTreeMap::new();
    for coalition in Coalition::all_nonempty(n) {
        limits.check_deadline()?;
        let set = g.consequence_set(coalition, limits)?;
        let obj: Vec<Rat> = coalition
            .members(n)
            .into_iter()
            .map(|i| lambda[i].clone())
            .collect();
        match set.optimize(&obj, true) {
            LpOutcome::Optimal { value, .. } => {
                values.insert(coalition.0, value);
            }
            LpOutcome::Infeasible | LpOutcome::Unbounded => {
                return Ok(ShapleyNtuVerdict::GameUndefined(coalition))
            }
            LpOutcome::Feasible(_) => unreachable!(),
        }
    }
    let rescaled = WorthFn::table(values, Rat::zero());
    let phi = shapley_of_worth(g.players(), &rescaled);
    for i in 0..n {
        let name = g.player_var(i);
        let xi = x
            .get(&name)
            .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
        let phi_i = phi.get(&name).expect("shapley is total");
        if &lambda[i] * xi != *phi_i {
            return Ok(ShapleyNtuVerdict::ValueMismatch(i));
        }
    }
    Ok(ShapleyNtuVerdict::Accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsys::ConstraintSystem;
    use crate::rational::rat;
    use std::collections::BTreeMap;

    fn limits() -> Limits {
        Limits::default()
    }

    fn tu_game(n: usize, entries: &[(&[usize], i64)]) -> ConstrainedGame {
        let players: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut values = BTreeMap::new();
        for (members, v) in entries {
            values.insert(Coalition::from_indices(members).0, rint(*v));
        }
        ConstrainedGame::tu(players, WorthFn::table(values, Rat::zero())).unwrap()
    }

    fn point(g: &ConstrainedGame, values: &[Rat]) -> PayoffPoint {
        PayoffPoint::for_players(&g.players().to_vec(), values)
    }

    fn prop4_2() -> ConstrainedGame {
        let mut g = tu_game(2, &[(&[0, 1], 1)]);
        let mut lc = ConstraintSystem::new();
        lc.add_var(Variable::player("1")).unwrap();
        lc.add_var(Variable::player("2")).unwrap();
        lc.add_row(LinearRow::normalize(
            vec![("x_1".to_string(), rint(1))],
            RawRelation::Lt,
            rat(1, 2),
        ))
        .unwrap();
        g.lc = lc;
        g
    }

    fn example_4_8_tu() -> ConstrainedGame {
        tu_game(2, &[(&[0, 1], 2)])
    }

    fn example_4_8_constrained() -> ConstrainedGame {
        let mut g = example_4_8_tu();
        let mut lc = ConstraintSystem::new();
        lc.add_var(Variable::player("1")).unwrap();
        lc.add_var(Variable::player("2")).unwrap();
        lc.add_row(LinearRow::normalize(
            vec![("x_1".to_string(), rint(1)), ("x_2".to_string(), rint(1))],
            RawRelation::Le,
            rint(1),
        ))
        .unwrap();
        g.lc = lc;
        g
    }

    fn prop4_15_base() -> ConstrainedGame {
        tu_game(
            3,
            &[(&[0, 1], 5), (&[0, 2], 4), (&[1, 2], 3), (&[0, 1, 2], 3)],
        )
    }

    fn prop4_15_constrained() -> ConstrainedGame {
        let mut g = prop4_15_base();
        let mut lc = ConstraintSystem::new();
        for p in ["1", "2", "3"] {
            lc.add_var(Variable::player(p)).unwrap();
        }
        for (a, b) in [("x_1", "x_2"), ("x_1", "x_3"), ("x_2", "x_3")] {
            lc.add_row(LinearRow::normalize(
                vec![(a.to_string(), rint(1)), (b.to_string(), rint(1))],
                RawRelation::Le,
                rint(3),
            ))
            .unwrap();
        }
        g.lc = lc;
        g
    }

    #[test]
    fn excess_is_canonical_on_tu_games() {
        let g = prop4_15_base();
        let x = point(&g, &[rint(2), rint(1), rint(0)]);
        let e = excess_kalai(&g, Coalition::from_indices(&[0, 1]), &x, &limits()).unwrap();
        assert_eq!(e, ExtRat::finite(rint(2), true));
    }

    #[test]
    fn excess_respects_constraints_and_emptiness() {
        let g = prop4_2();
        let x = point(&g, &[rat(1, 4), rat(3, 4)]);
        let e = excess_kalai(&g, Coalition::from_indices(&[0]), &x, &limits()).unwrap();
        assert_eq!(e, ExtRat::finite(rat(-1, 4), true));

        let mut g = tu_game(3, &[(&[0, 1, 2], 3)]);
        let mut lc = ConstraintSystem::new();
        for p in ["1", "2", "3"] {
            let mut var = Variable::player(p);
            var.domain = crate::linsys::VarDomain::Integer;
            lc.add_var(var).unwrap();
        }
        lc.add_row(LinearRow::normalize(
            vec![("x_1".to_string(), rint(1)), ("x_2".to_string(), rint(1))],
            RawRelation::Ge,
            rint(2),
        ))
        .unwrap();
        g.lc = lc;
        let x = point(&g, &[rint(2), rint(1), rint(0)]);
        let e = excess_kalai(&g, Coalition::from_indices(&[0, 1]), &x, &limits()).unwrap();
        assert_eq!(e, ExtRat::NegInf);
    }

    #[test]
    fn theta_examples() {
        let g = prop4_2();
        let x = point(&g, &[rat(1, 4), rat(3, 4)]);
        let t = theta(&g, &x, &limits()).unwrap();
        let values: Vec<&Rat> = t.0.iter().map(|e| e.value().unwrap()).collect();
        assert_eq!(values, vec![&rint(0), &rat(-1, 4), &rat(-3, 4)]);

        let g = example_4_8_tu();
        let x = point(&g, &[rint(1), rint(1)]);
        let t = theta(&g, &x, &limits()).unwrap();
        let values: Vec<&Rat> = t.0.iter().map(|e| e.value().unwrap()).collect();
        assert_eq!(values, vec![&rint(0), &rint(-1), &rint(-1)]);

        let g = tu_game(1, &[]);
        let x = point(&g, &[rint(0)]);
        let t = theta(&g, &x, &limits()).unwrap();
        assert_eq!(t.0.len(), 1);
    }

    #[test]
    fn lex_less_examples() {
        let a = ThetaVector(vec![
            ExtRat::finite(rint(0), true),
            ExtRat::finite(rat(-3, 8), true),
            ExtRat::finite(rat(-5, 8), true),
        ]);
        let b = ThetaVector(vec![
            ExtRat::finite(rint(0), true),
            ExtRat::finite(rat(-1, 4), true),
            ExtRat::finite(rat(-3, 4), true),
        ]);
        assert!(lex_less(&a, &b).unwrap());
        assert!(!lex_less(&b, &a).unwrap());
        assert!(!lex_less(&a, &a).unwrap());
        let single_a = ThetaVector(vec![ExtRat::finite(rint(0), true)]);
        let single_b = ThetaVector(vec![ExtRat::finite(rint(1), true)]);
        assert!(lex_less(&single_a, &single_b).unwrap());
        assert!(matches!(
            lex_less(&a, &single_a),
            Err(Error::LengthMismatch(3, 1))
        ));
    }

    #[test]
    fn nucleolus_example_4_8() {
        let g = example_4_8_tu();
        let nuc = nucleolus(&g, &limits()).unwrap();
        assert_eq!(*nuc.get("x_1").unwrap(), rint(1));
        assert_eq!(*nuc.get("x_2").unwrap(), rint(1));

        let g = example_4_8_constrained();
        let nuc = nucleolus(&g, &limits()).unwrap();
        assert_eq!(*nuc.get("x_1").unwrap(), rat(1, 2));
        assert_eq!(*nuc.get("x_2").unwrap(), rat(1, 2));
    }

    #[test]
    fn nucleolus_prop_4_15() {
        let nuc = nucleolus(&prop4_15_base(), &limits()).unwrap();
        assert_eq!(*nuc.get("x_1").unwrap(), rint(2));
        assert_eq!(*nuc.get("x_2").unwrap(), rint(1));
        assert_eq!(*nuc.get("x_3").unwrap(), rint(0));

        let nuc = nucleolus(&prop4_15_constrained(), &limits()).unwrap();
        assert_eq!(*nuc.get("x_1").unwrap(), rint(1));
        assert_eq!(*nuc.get("x_2").unwrap(), rint(1));
        assert_eq!(*nuc.get("x_3").unwrap(), rint(1));
    }

    #[test]
    fn nucleolus_refuses_non_reducible_games() {
        assert!(matches!(
            nucleolus(&prop4_2(), &limits()),
            Err(Error::NotTuReducible(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        let g = prop4_15_base();
        let x = point(&g, &[rint(2), rint(1), rint(0)]);
        assert_eq!(kernel_check(&g, &x, &limits()).unwrap(), KernelVerdict::Member);
        let x = point(&g, &[rint(1), rint(1), rint(1)]);
        assert!(matches!(
            kernel_check(&g, &x, &limits()).unwrap(),
            KernelVerdict::Outweighed { .. }
        ));

        let g = prop4_15_constrained();
        let x = point(&g, &[rint(1), rint(1), rint(1)]);
        assert_eq!(kernel_check(&g, &x, &limits()).unwrap(), KernelVerdict::Member);

        let g = example_4_8_tu();
        let x = point(&g, &[rint(1), rint(1)]);
        assert_eq!(kernel_check(&g, &x, &limits()).unwrap(), KernelVerdict::Member);
        let x = point(&g, &[rat(3, 2), rat(1, 2)]);
        assert!(matches!(
            kernel_check(&g, &x, &limits()).unwrap(),
            KernelVerdict::Outweighed { .. }
        ));
    }

    #[test]
    fn surplus_example_4_8() {
        let g = example_4_8_tu();
        let x = point(&g, &[rat(3, 2), rat(1, 2)]);
        assert_eq!(surplus(&g, &x, 0, 1).unwrap(), rat(-3, 2));
        assert_eq!(surplus(&g, &x, 1, 0).unwrap(), rat(-1, 2));
    }

    #[test]
    fn shapley_prop_4_17() {
        let g = tu_game(
            3,
            &[(&[0, 1], 4), (&[0, 2], 3), (&[1, 2], 3), (&[0, 1, 2], 3)],
        );
        let phi = shapley(&g);
        assert_eq!(*phi.get("x_1").unwrap(), rat(7, 6));
        assert_eq!(*phi.get("x_2").unwrap(), rat(7, 6));
        assert_eq!(*phi.get("x_3").unwrap(), rat(4, 6));

        let phi = shapley(&example_4_8_tu());
        assert_eq!(*phi.get("x_1").unwrap(), rint(1));
        assert_eq!(*phi.get("x_2").unwrap(), rint(1));

        let mut values = BTreeMap::new();
        for pair in [&[0usize, 1][..], &[0, 2], &[1, 2], &[0, 1, 2]] {
            values.insert(Coalition::from_indices(pair).0, rint(3));
        }
        let phi = shapley_of_worth(
            &["1".into(), "2".into(), "3".into()],
            &WorthFn::table(values, Rat::zero()),
        );
        assert_eq!(*phi.get("x_1").unwrap(), rint(1));
        assert_eq!(*phi.get("x_2").unwrap(), rint(1));
        assert_eq!(*phi.get("x_3").unwrap(), rint(1));
    }

    #[test]
    fn shapley_ntu_example_4_8() {
        let g = example_4_8_constrained();
        let x = point(&g, &[rat(1, 2), rat(1, 2)]);
        assert_eq!(
            shapley_ntu_check(&g, &x, &[rint(1), rint(1)], &limits()).unwrap(),
            ShapleyNtuVerdict::Accepted
        );
        assert_eq!(
            shapley_ntu_check(&g, &x, &[rint(1), rint(2)], &limits()).unwrap(),
            ShapleyNtuVerdict::GameUndefined(Coalition::full(2))
        );
        let x = point(&g, &[rint(1), rint(0)]);
        assert_eq!(
            shapley_ntu_check(&g, &x, &[rint(1), rint(1)], &limits()).unwrap(),
            ShapleyNtuVerdict::ValueMismatch(0)
        );
        assert!(matches!(
            shapley_ntu_check(&g, &x, &[rint(1), rint(0)], &limits()),
            Err(Error::NonpositiveLambda)
        ));
    }
}

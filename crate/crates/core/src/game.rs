//! TU games, worth oracles, constrained games and their consequence sets.
//!
//! A constrained game couples a TU worth function with a mixed-integer
//! linear constraint system over player and auxiliary variables. The
//! consequence set of a coalition S is the worth half-space cut down by the
//! constraint rows that S can see: a row applies to S when every player
//! variable it mentions belongs to S (auxiliary-only rows apply to every
//! coalition), and auxiliary variables stay existential.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::linsys::{
    player_var_name, ConstraintSystem, LinearRow, PayoffPoint, RawRelation, VarKind, Variable,
};
use crate::logic::{eval_bool, BoolExpr};
use crate::rational::{rint, Rat};
use crate::solver::{milp_feasible, to_semilinear, Cell, CellRow, LpOutcome, SemilinearSet};
use num_traits::Zero;
use std::collections::BTreeMap;

/// A subset of player indices, packed as a bit set over the ordered player
/// list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(pub u64);

impl Coalition {
    pub fn empty() -> Coalition {
        Coalition(0)
    }

    pub fn full(n: usize) -> Coalition {
        debug_assert!(n < 64);
        Coalition((1u64 << n) - 1)
    }

    pub fn from_indices(indices: &[usize]) -> Coalition {
        let mut mask = 0u64;
        for &i in indices {
            mask |= 1 << i;
        }
        Coalition(mask)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }

    /// All non-empty coalitions over `n` players, ascending by bitmask.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        (1..(1u64 << n)).map(Coalition)
    }
}

/// Total worth function; `v(empty) = 0` by convention for every variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WorthFn {
    Table {
        values: BTreeMap<u64, Rat>,
        default: Rat,
    },
    /// `v(S) = min(sum alpha_i, sum beta_i)` over the members of S.
    Producer { alpha: Vec<Rat>, beta: Vec<Rat> },
    /// `v(S) = total - com(S)` when S jointly covers every task, else 0.
    Service {
        total: Rat,
        com: BTreeMap<u64, Rat>,
        com_default: Rat,
        /// `skills[agent][task]`.
        skills: Vec<Vec<bool>>,
    },
    /// Layout `vars..., w, e`: worth 1 for N, and for coalitions containing
    /// w but not e whose induced assignment satisfies the formula.
    SatUnsat { formula: BoolExpr, vars: Vec<String> },
    /// Layout `vars..., bars..., a, a2, w` with the first `n_universal` vars
    /// universal: worth 2 for N; 1 for w-anchored consistent universal
    /// slices; 1 for fully consistent satisfying coalitions with exactly one
    /// of {a, a2}. The w anchor keeps singleton worths at zero even with a
    /// single universal variable.
    ConsistentSat {
        formula: BoolExpr,
        vars: Vec<String>,
        n_universal: usize,
    },
    /// Layout `vars..., bars..., a` with the first `n_existential` vars
    /// existential: worth 3n for N; n for consistent non-satisfying
    /// coalitions of literal players.
    ConsistentUnsat {
        formula: BoolExpr,
        vars: Vec<String>,
        n_existential: usize,
    },
    /// Layout `vars..., bars..., a, w` (vars = outer existential block,
    /// universal block, inner existential block): worth m+1 for N; 1 for
    /// universal slices around w, literal pairs of the outer block, and
    /// satisfying consistent coalitions around a.
    PairConsistent {
        formula: BoolExpr,
        vars: Vec<String>,
        m_existential: usize,
        n_universal: usize,
    },
}

impl WorthFn {
    pub fn table(values: BTreeMap<u64, Rat>, default: Rat) -> WorthFn {
        WorthFn::Table { values, default }
    }

    pub(crate) fn eval(&self, n_players: usize, coalition: Coalition) -> Rat {
        if coalition.is_empty() {
            return Rat::zero();
        }
        let full = Coalition::full(n_players);
        match self {
            WorthFn::Table { values, default } => values
                .get(&coalition.0)
                .cloned()
                .unwrap_or_else(|| default.clone()),
            WorthFn::Producer { alpha, beta } => {
                let mut sa = Rat::zero();
                let mut sb = Rat::zero();
                for i in coalition.members(n_players) {
                    sa += &alpha[i];
                    sb += &beta[i];
                }
                if sa <= sb {
                    sa
                } else {
                    sb
                }
            }
            WorthFn::Service {
                total,
                com,
                com_default,
                skills,
            } => {
                let tasks = skills.first().map_or(0, |row| row.len());
                let covered = (0..tasks).all(|j| {
                    coalition
                        .members(n_players)
                        .iter()
                        .any(|&i| skills[i][j])
                });
                if covered {
                    let c = com
                        .get(&coalition.0)
                        .cloned()
                        .unwrap_or_else(|| com_default.clone());
                    total - c
                } else {
                    Rat::zero()
                }
            }
            WorthFn::SatUnsat { formula, vars } => {
                let n = vars.len();
                let w = n;
                let e = n + 1;
                if coalition == full {
                    return rint(1);
                }
                if !coalition.contains(e) && coalition.contains(w) {
                    let assignment: BTreeMap<String, bool> = vars
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (v.clone(), coalition.contains(i)))
                        .collect();
                    if eval_bool(formula, &assignment).unwrap_or(false) {
                        return rint(1);
                    }
                }
                Rat::zero()
            }
            WorthFn::ConsistentSat {
                formula,
                vars,
                n_universal,
            } => {
                let n = vars.len();
                let a = 2 * n;
                let a2 = 2 * n + 1;
                let w = 2 * n + 2;
                if coalition == full {
                    return rint(2);
                }
                if coalition.contains(w)
                    && coalition.len() == n_universal + 1
                    && consistent_wrt(coalition, 0..*n_universal, n)
                {
                    return rint(1);
                }
                let specials =
                    u64::from(coalition.contains(a)) + u64::from(coalition.contains(a2));
                if specials == 1
                    && literals_plus(coalition, n, n_players, &[a, a2])
                    && consistent_wrt(coalition, 0..n, n)
                    && sigma_satisfies(formula, vars, coalition)
                {
                    return rint(1);
                }
                Rat::zero()
            }
            WorthFn::ConsistentUnsat {
                formula,
                vars,
                n_existential,
            } => {
                let n = vars.len();
                if coalition == full {
                    return rint(3) * rint(*n_existential as i64);
                }
                if literals_plus(coalition, n, n_players, &[])
                    && consistent_wrt(coalition, 0..n, n)
                    && !sigma_satisfies(formula, vars, coalition)
                {
                    return rint(*n_existential as i64);
                }
                Rat::zero()
            }
            WorthFn::PairConsistent {
                formula,
                vars,
                m_existential,
                n_universal,
            } => {
                let n = vars.len();
                let a = 2 * n;
                let w = 2 * n + 1;
                if coalition == full {
                    return rint(*m_existential as i64 + 1);
                }
                if coalition.contains(w)
                    && coalition.len() == n_universal + 1
                    && consistent_wrt(coalition, *m_existential..m_existential + n_universal, n)
                {
                    return rint(1);
                }
                for i in 0..*m_existential {
                    if coalition == Coalition::from_indices(&[i, n + i]) {
                        return rint(1);
                    }
                }
                if coalition.contains(a)
                    && !coalition.contains(w)
                    && literals_plus(coalition, n, n_players, &[a])
                    && consistent_wrt(coalition, 0..n, n)
                    && sigma_satisfies(formula, vars, coalition)
                {
                    return rint(1);
                }
                Rat::zero()
            }
        }
    }
}

/// `|{pos_i, neg_i} ∩ S| = 1` for every variable index in the range, where
/// `pos_i = i` and `neg_i = n + i`.
fn consistent_wrt(s: Coalition, range: std::ops::Range<usize>, n: usize) -> bool {
    range
        .into_iter()
        .all(|i| u8::from(s.contains(i)) + u8::from(s.contains(n + i)) == 1)
}

/// The coalition contains no player beyond the 2n literal slots except the
/// listed extras.
fn literals_plus(s: Coalition, n: usize, n_players: usize, extras: &[usize]) -> bool {
    (2 * n..n_players).all(|i| extras.contains(&i) || !s.contains(i))
}

/// Assignment induced by a coalition: variable true iff its positive-literal
/// player is present.
fn sigma_satisfies(formula: &BoolExpr, vars: &[String], s: Coalition) -> bool {
    let assignment: BTreeMap<String, bool> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), s.contains(i)))
        .collect();
    eval_bool(formula, &assignment).unwrap_or(false)
}

/// A TU game plus a mixed-integer linear constraint system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedGame {
    players: Vec<String>,
    pub worth: WorthFn,
    pub lc: ConstraintSystem,
}

impl ConstrainedGame {
    /// Validates that every player variable in `lc` matches a listed player
    /// and that player ids are unique.
    pub fn new(players: Vec<String>, worth: WorthFn, lc: ConstraintSystem) -> Result<Self> {
        if players.len() >= 64 {
            return Err(Error::SpecInvalid("at most 63 players supported".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &players {
            if !seen.insert(p.clone()) {
                return Err(Error::SpecInvalid(format!("duplicate player id `{p}`")));
            }
        }
        for v in lc.vars() {
            if let VarKind::Player(id) = &v.kind {
                if !players.iter().any(|p| p == id) {
                    return Err(Error::SpecInvalid(format!(
                        "constraint variable `{}` references unknown player `{id}`",
                        v.name
                    )));
                }
            }
        }
        Ok(ConstrainedGame { players, worth, lc })
    }

    /// A plain TU game (empty constraint system).
    pub fn tu(players: Vec<String>, worth: WorthFn) -> Result<Self> {
        Self::new(players, worth, ConstraintSystem::new())
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.players.len())
    }

    pub fn player_index(&self, id: &str) -> Option<usize> {
        self.players.iter().position(|p| p == id)
    }

    pub fn player_var(&self, i: usize) -> String {
        player_var_name(&self.players[i])
    }

    pub fn worth(&self, coalition: Coalition) -> Rat {
        self.worth.eval(self.players.len(), coalition)
    }

    pub fn has_constraints(&self) -> bool {
        !self.lc.rows.is_empty() || self.lc.has_integer_vars()
    }

    /// The player variable declaration for player `i`, taking integrality
    /// and bounds from the constraint system when declared there.
    pub fn player_variable(&self, i: usize) -> Variable {
        let name = self.player_var(i);
        match self.lc.var(&name) {
            Some(v) => v.clone(),
            None => Variable::player(&self.players[i]),
        }
    }

    /// Constraint rows visible to coalition S: rows whose player variables
    /// all belong to S. Auxiliary-only rows are always included.
    pub fn coalition_rows(&self, coalition: Coalition) -> Vec<LinearRow> {
        self.lc
            .rows
            .iter()
            .filter(|row| {
                row.variables().all(|name| match self.lc.var(name) {
                    Some(v) => match &v.kind {
                        VarKind::Player(id) => {
                            let idx = self.player_index(id).expect("validated player");
                            coalition.contains(idx)
                        }
                        VarKind::Aux => true,
                    },
                    None => false,
                })
            })
            .cloned()
            .collect()
    }

    /// The consequence system of S: coalition-visible rows plus the worth
    /// row `sum_{i in S} x_i <= v(S)`, over S's player variables and the
    /// (existential) auxiliary variables.
    pub fn consequence_system(&self, coalition: Coalition) -> ConstraintSystem {
        let mut sys = ConstraintSystem::new();
        for i in coalition.members(self.players.len()) {
            sys.add_var(self.player_variable(i)).expect("players unique");
        }
        for v in self.lc.vars() {
            if matches!(v.kind, VarKind::Aux) {
                sys.add_var(v.clone()).expect("aux unique");
            }
        }
        for row in self.coalition_rows(coalition) {
            sys.add_row(row).expect("variables in scope");
        }
        let worth_row = LinearRow::normalize(
            coalition
                .members(self.players.len())
                .into_iter()
                .map(|i| (self.player_var(i), rint(1))),
            RawRelation::Le,
            self.worth(coalition),
        );
        sys.add_row(worth_row).expect("variables in scope");
        sys
    }

    /// S-feasibility of a payoff vector over exactly the players of S:
    /// substitute and decide the residual (auxiliaries existential).
    pub fn is_consequence(
        &self,
        coalition: Coalition,
        y: &PayoffPoint,
        limits: &Limits,
    ) -> Result<bool> {
        let sys = self.consequence_system(coalition);
        for i in coalition.members(self.players.len()) {
            let name = self.player_var(i);
            let value = y
                .get(&name)
                .ok_or_else(|| Error::MissingAssignment(name.clone()))?;
            if let Some(v) = sys.var(&name) {
                if v.domain == crate::linsys::VarDomain::Integer
                    && !crate::rational::is_integer(value)
                {
                    return Ok(false);
                }
                if let Some((lo, hi)) = &v.bounds {
                    if value < lo || value > hi {
                        return Ok(false);
                    }
                }
            }
        }
        let names: Vec<String> = coalition
            .members(self.players.len())
            .into_iter()
            .map(|i| self.player_var(i))
            .collect();
        let restricted = y.restrict(names.iter().map(|s| s.as_str()));
        let residual = sys.substitute(&restricted);
        Ok(milp_feasible(&residual, limits)?.is_feasible())
    }

    /// Materialises `V_LC(S)` as a semilinear set over S's payoff axes.
    pub fn consequence_set(&self, coalition: Coalition, limits: &Limits) -> Result<SemilinearSet> {
        let keep: Vec<String> = coalition
            .members(self.players.len())
            .into_iter()
            .map(|i| self.player_var(i))
            .collect();
        to_semilinear(&self.consequence_system(coalition), &keep, limits)
    }

    /// Whether `v(N)` dominates every partition's summed worth.
    pub fn is_cohesive(&self, limits: &Limits) -> Result<bool> {
        let n = self.players.len();
        if n > limits.cohesive_player_cap {
            return Err(Error::PlayerLimitExceeded {
                players: n,
                cap: limits.cohesive_player_cap,
            });
        }
        let grand = self.worth(self.grand_coalition());
        fn rec(
            game: &ConstrainedGame,
            next: usize,
            n: usize,
            blocks: &mut Vec<Coalition>,
            grand: &Rat,
        ) -> bool {
            if next == n {
                let total: Rat = blocks.iter().map(|b| game.worth(*b)).sum();
                return total <= *grand;
            }
            for i in 0..blocks.len() {
                blocks[i].insert(next);
                if !rec(game, next + 1, n, blocks, grand) {
                    return false;
                }
                blocks[i].0 &= !(1 << next);
            }
            blocks.push(Coalition::from_indices(&[next]));
            let ok = rec(game, next + 1, n, blocks, grand);
            blocks.pop();
            ok
        }
        let mut blocks: Vec<Coalition> = Vec::new();
        Ok(rec(self, 0, n, &mut blocks, &grand))
    }

    /// Attempts to express the consequence function as a plain TU game with
    /// `v'(S)` the attained supremum of the coalition sum over `V_LC(S)`,
    /// verifying that the TU half-space adds nothing inside the base game's
    /// individual-rationality box.
    pub fn tu_reduce(&self, limits: &Limits) -> Result<TuReduction> {
        let n = self.players.len();
        let mut values = BTreeMap::new();
        for coalition in Coalition::all_nonempty(n) {
            limits.check_deadline()?;
            let set = self.consequence_set(coalition, limits)?;
            let members = coalition.members(n);
            let axes: Vec<String> = members.iter().map(|&i| self.player_var(i)).collect();
            let obj: Vec<Rat> = vec![rint(1); axes.len()];
            let vprime = match set.optimize(&obj, true) {
                LpOutcome::Infeasible => {
                    return Ok(TuReduction::NotReducible {
                        coalition,
                        reason: "empty consequence set cannot equal a TU half-space".into(),
                    })
                }
                LpOutcome::Unbounded => {
                    return Ok(TuReduction::NotReducible {
                        coalition,
                        reason: "coalition sum unbounded".into(),
                    })
                }
                LpOutcome::Optimal { attained: false, .. } => {
                    return Ok(TuReduction::NotReducible {
                        coalition,
                        reason: "supremum of the coalition sum is not attained".into(),
                    })
                }
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Feasible(_) => unreachable!(),
            };
            let ir_rows: Vec<CellRow> = members
                .iter()
                .enumerate()
                .map(|(pos, &i)| {
                    let mut c = vec![Rat::zero(); axes.len()];
                    c[pos] = rint(-1);
                    CellRow::new(
                        c,
                        crate::linsys::Relation::Le,
                        -self.worth(Coalition::from_indices(&[i])),
                    )
                })
                .collect();
            let mut half_rows = ir_rows.clone();
            half_rows.push(CellRow::new(
                vec![rint(1); axes.len()],
                crate::linsys::Relation::Le,
                vprime.clone(),
            ));
            let half_space = SemilinearSet::new(
                axes.clone(),
                Cell::new(half_rows).into_iter().collect(),
            );
            let ir_box =
                SemilinearSet::new(axes.clone(), Cell::new(ir_rows).into_iter().collect());
            let boxed_set = set.intersect(&ir_box, limits)?;
            let leftover = half_space.difference(&boxed_set, limits)?;
            if !leftover.is_empty() {
                return Ok(TuReduction::NotReducible {
                    coalition,
                    reason: "TU half-space strictly contains the consequence set".into(),
                });
            }
            values.insert(coalition.0, vprime);
        }
        Ok(TuReduction::Reducible {
            vprime: WorthFn::table(values, Rat::zero()),
        })
    }
}

/// Outcome of `tu_reduce`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TuReduction {
    Reducible { vprime: WorthFn },
    NotReducible { coalition: Coalition, reason: String },
}

// ---------------------------------------------------------------------------
// Built-in games.
// ---------------------------------------------------------------------------

/// Three brothers splitting a coin box: 100 + 70 + 50 + 30 coins of values
/// 1, 2, 5, 10 (cent units, so `v(N) = 790`), age-ratio rows
/// `x_1 >= 10/8 x_2` and `x_2 >= 8/5 x_3`. Proper subcoalitions keep worth 0.
pub fn piggybank() -> ConstrainedGame {
    let players: Vec<String> = vec!["1".into(), "2".into(), "3".into()];
    let mut values = BTreeMap::new();
    values.insert(Coalition::full(3).0, rint(790));
    let worth = WorthFn::table(values, Rat::zero());

    let mut lc = ConstraintSystem::new();
    for p in &players {
        lc.add_var(Variable::player(p)).unwrap();
    }
    let coins: [(i64, i64); 4] = [(1, 100), (2, 70), (5, 50), (10, 30)];
    for (value, _) in coins {
        for p in &players {
            lc.add_var(Variable::int_aux(format!("a{value}_{p}"), None))
                .unwrap();
        }
    }
    for p in &players {
        let mut coeffs: Vec<(String, Rat)> = vec![(player_var_name(p), rint(1))];
        for (value, _) in coins {
            coeffs.push((format!("a{value}_{p}"), rint(-value)));
        }
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Eq, rint(0)))
            .unwrap();
    }
    for (value, count) in coins {
        let coeffs: Vec<(String, Rat)> = players
            .iter()
            .map(|p| (format!("a{value}_{p}"), rint(1)))
            .collect();
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Eq, rint(count)))
            .unwrap();
    }
    lc.add_row(LinearRow::normalize(
        vec![
            (player_var_name("1"), rint(1)),
            (player_var_name("2"), crate::rational::rat(-10, 8)),
        ],
        RawRelation::Ge,
        rint(0),
    ))
    .unwrap();
    lc.add_row(LinearRow::normalize(
        vec![
            (player_var_name("2"), rint(1)),
            (player_var_name("3"), crate::rational::rat(-8, 5)),
        ],
        RawRelation::Ge,
        rint(0),
    ))
    .unwrap();
    for (value, _) in coins {
        for p in &players {
            lc.add_row(LinearRow::normalize(
                vec![(format!("a{value}_{p}"), rint(1))],
                RawRelation::Ge,
                rint(0),
            ))
            .unwrap();
        }
    }
    ConstrainedGame::new(players, worth, lc).unwrap()
}

/// `n + 1` players, `v(N) = n`, the first n payoff variables 0/1 integers
/// and a pick-up row for the last player: the imputation set has exactly
/// `2^n` points.
pub fn hypercube(n: usize) -> Result<ConstrainedGame> {
    if n == 0 || n > 16 {
        return Err(Error::SpecInvalid(
            "hypercube size must be between 1 and 16".into(),
        ));
    }
    let players: Vec<String> = (1..=n + 1).map(|i| i.to_string()).collect();
    let mut values = BTreeMap::new();
    values.insert(Coalition::full(n + 1).0, rint(n as i64));
    let worth = WorthFn::table(values, Rat::zero());

    let mut lc = ConstraintSystem::new();
    for (i, p) in players.iter().enumerate() {
        let mut var = Variable::player(p);
        if i < n {
            var.domain = crate::linsys::VarDomain::Integer;
            var.bounds = Some((rint(0), rint(1)));
        }
        lc.add_var(var).unwrap();
    }
    for p in players.iter().take(n) {
        lc.add_row(LinearRow::normalize(
            vec![(player_var_name(p), rint(1))],
            RawRelation::Ge,
            rint(0),
        ))
        .unwrap();
        lc.add_row(LinearRow::normalize(
            vec![(player_var_name(p), rint(1))],
            RawRelation::Le,
            rint(1),
        ))
        .unwrap();
    }
    let mut coeffs: Vec<(String, Rat)> = vec![(player_var_name(&players[n]), rint(1))];
    for p in players.iter().take(n) {
        coeffs.push((player_var_name(p), rint(1)));
    }
    lc.add_row(LinearRow::normalize(coeffs, RawRelation::Ge, rint(n as i64)))
        .unwrap();
    ConstrainedGame::new(players, worth, lc)
}

/// Producers assembling indivisible goods: `v(S) = min(sum alpha, sum beta)`
/// and integer non-negative payoffs.
pub fn producer(alpha: Vec<Rat>, beta: Vec<Rat>) -> Result<ConstrainedGame> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(Error::SpecInvalid(
            "producer game needs equal, non-empty alpha/beta vectors".into(),
        ));
    }
    let players: Vec<String> = (1..=alpha.len()).map(|i| i.to_string()).collect();
    let worth = WorthFn::Producer { alpha, beta };
    let mut lc = ConstraintSystem::new();
    for p in &players {
        let mut var = Variable::player(p);
        var.domain = crate::linsys::VarDomain::Integer;
        lc.add_var(var).unwrap();
        lc.add_row(LinearRow::normalize(
            vec![(player_var_name(p), rint(1))],
            RawRelation::Ge,
            rint(0),
        ))
        .unwrap();
    }
    ConstrainedGame::new(players, worth, lc)
}

/// Service composition with per-task staffing variables: every task staffed
/// exactly once, staffing limited by skills, and each agent's payoff covers
/// their internal costs.
pub fn service(
    skills: Vec<Vec<bool>>,
    costs: Vec<Vec<Rat>>,
    com: BTreeMap<u64, Rat>,
    com_default: Rat,
) -> Result<ConstrainedGame> {
    let agents = skills.len();
    if agents == 0 || costs.len() != agents {
        return Err(Error::SpecInvalid(
            "service game needs matching skills/costs matrices".into(),
        ));
    }
    let tasks = skills[0].len();
    if tasks == 0
        || skills.iter().any(|r| r.len() != tasks)
        || costs.iter().any(|r| r.len() != tasks)
    {
        return Err(Error::SpecInvalid(
            "service game matrices must be rectangular and non-empty".into(),
        ));
    }
    let players: Vec<String> = (1..=agents).map(|i| i.to_string()).collect();
    let worth = WorthFn::Service {
        total: rint(100),
        com,
        com_default,
        skills: skills.clone(),
    };
    let mut lc = ConstraintSystem::new();
    for p in &players {
        lc.add_var(Variable::player(p)).unwrap();
    }
    for j in 0..tasks {
        for (i, p) in players.iter().enumerate() {
            let hi = if skills[i][j] { rint(1) } else { rint(0) };
            lc.add_var(Variable::int_aux(
                format!("g{}_{p}", j + 1),
                Some((rint(0), hi)),
            ))
            .unwrap();
        }
    }
    for j in 0..tasks {
        let coeffs: Vec<(String, Rat)> = players
            .iter()
            .map(|p| (format!("g{}_{p}", j + 1), rint(1)))
            .collect();
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Eq, rint(1)))
            .unwrap();
    }
    for (i, p) in players.iter().enumerate() {
        let mut coeffs: Vec<(String, Rat)> = vec![(player_var_name(p), rint(1))];
        for j in 0..tasks {
            coeffs.push((format!("g{}_{p}", j + 1), -costs[i][j].clone()));
        }
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Ge, rint(0)))
            .unwrap();
    }
    ConstrainedGame::new(players, worth, lc)
}

/// Pins the imputation set to exactly the given points via 0/1 selector
/// auxiliaries summing to one. Each point must be an imputation of the base
/// TU game.
pub fn finite_imputations(
    players: Vec<String>,
    worth: WorthFn,
    points: Vec<Vec<Rat>>,
) -> Result<ConstrainedGame> {
    let base = ConstrainedGame::tu(players.clone(), worth.clone())?;
    if points.is_empty() {
        return Err(Error::SpecInvalid("need at least one imputation".into()));
    }
    let n = players.len();
    let grand = base.worth(base.grand_coalition());
    for (k, p) in points.iter().enumerate() {
        if p.len() != n {
            return Err(Error::SpecInvalid(format!(
                "point {} has {} coordinates, expected {n}",
                k + 1,
                p.len()
            )));
        }
        let total: Rat = p.iter().cloned().sum();
        if total != grand {
            return Err(Error::SpecInvalid(format!(
                "point {} is not efficient for the base game",
                k + 1
            )));
        }
        for (i, value) in p.iter().enumerate() {
            if *value < base.worth(Coalition::from_indices(&[i])) {
                return Err(Error::SpecInvalid(format!(
                    "point {} violates individual rationality of player {}",
                    k + 1,
                    players[i]
                )));
            }
        }
    }
    let mut lc = ConstraintSystem::new();
    for p in &players {
        lc.add_var(Variable::player(p)).unwrap();
    }
    for k in 1..=points.len() {
        lc.add_var(Variable::int_aux(format!("sel{k}"), Some((rint(0), rint(1)))))
            .unwrap();
    }
    let sel_sum: Vec<(String, Rat)> = (1..=points.len())
        .map(|k| (format!("sel{k}"), rint(1)))
        .collect();
    lc.add_row(LinearRow::normalize(sel_sum, RawRelation::Eq, rint(1)))
        .unwrap();
    for (i, p) in players.iter().enumerate() {
        let mut coeffs: Vec<(String, Rat)> = vec![(player_var_name(p), rint(1))];
        for (k, point) in points.iter().enumerate() {
            coeffs.push((format!("sel{}", k + 1), -point[i].clone()));
        }
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Eq, rint(0)))
            .unwrap();
    }
    ConstrainedGame::new(players, worth, lc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn limits() -> Limits {
        Limits::default()
    }

    fn prop4_15_table() -> WorthFn {
        let mut values = BTreeMap::new();
        values.insert(Coalition::from_indices(&[0, 1]).0, rint(5));
        values.insert(Coalition::from_indices(&[0, 2]).0, rint(4));
        values.insert(Coalition::from_indices(&[1, 2]).0, rint(3));
        values.insert(Coalition::full(3).0, rint(3));
        WorthFn::table(values, Rat::zero())
    }

    #[test]
    fn table_worth_and_empty_convention() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::from_indices(&[0, 1]).0, rint(5));
        let w = WorthFn::table(values, rint(7));
        assert_eq!(w.eval(2, Coalition::from_indices(&[0, 1])), rint(5));
        assert_eq!(w.eval(2, Coalition::from_indices(&[0])), rint(7));
        assert_eq!(w.eval(2, Coalition::empty()), Rat::zero());
    }

    #[test]
    fn producer_oracle_takes_the_min() {
        let g = producer(vec![rint(2), rint(1)], vec![rint(1), rint(3)]).unwrap();
        assert_eq!(g.worth(Coalition::from_indices(&[0, 1])), rint(3));
        assert_eq!(g.worth(Coalition::from_indices(&[0])), rint(1));
        assert_eq!(g.worth(Coalition::empty()), Rat::zero());
    }

    #[test]
    fn consequence_system_filters_rows_by_coalition() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::from_indices(&[0]).0, rint(1));
        values.insert(Coalition::from_indices(&[1]).0, rint(1));
        values.insert(Coalition::from_indices(&[2]).0, rint(2));
        values.insert(Coalition::from_indices(&[0, 1]).0, rint(3));
        values.insert(Coalition::full(3).0, rint(4));
        let worth = WorthFn::table(values, Rat::zero());
        let mut lc = ConstraintSystem::new();
        for p in ["1", "2", "3"] {
            lc.add_var(Variable::player(p)).unwrap();
        }
        lc.add_row(LinearRow::normalize(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            RawRelation::Le,
            rint(2),
        ))
        .unwrap();
        let g =
            ConstrainedGame::new(vec!["1".into(), "2".into(), "3".into()], worth, lc).unwrap();

        let sys = g.consequence_system(Coalition::from_indices(&[0, 1]));
        assert_eq!(sys.rows.len(), 2);
        let sys = g.consequence_system(Coalition::from_indices(&[0, 2]));
        assert_eq!(sys.rows.len(), 1);
    }

    #[test]
    fn example_3_6_consequences() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::full(3).0, rint(3));
        let worth = WorthFn::table(values, Rat::zero());
        let mut lc = ConstraintSystem::new();
        for p in ["1", "2", "3"] {
            let mut var = Variable::player(p);
            var.domain = crate::linsys::VarDomain::Integer;
            lc.add_var(var).unwrap();
        }
        lc.add_row(LinearRow::normalize(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            RawRelation::Ge,
            rint(2),
        ))
        .unwrap();
        let g =
            ConstrainedGame::new(vec!["1".into(), "2".into(), "3".into()], worth, lc).unwrap();

        let s12 = Coalition::from_indices(&[0, 1]);
        for (a, b) in [(0, 0), (1, 1), (-3, 2), (2, 0)] {
            let y =
                PayoffPoint::for_players(&["1".into(), "2".into()], &[rint(a), rint(b)]);
            assert!(!g.is_consequence(s12, &y, &limits()).unwrap());
        }
        let s13 = Coalition::from_indices(&[0, 2]);
        let y = PayoffPoint::for_players(&["1".into(), "3".into()], &[rint(-2), rint(1)]);
        assert!(g.is_consequence(s13, &y, &limits()).unwrap());
        let y = PayoffPoint::for_players(&["1".into(), "3".into()], &[rat(-1, 2), rint(0)]);
        assert!(!g.is_consequence(s13, &y, &limits()).unwrap());
    }

    #[test]
    fn prop_4_4_objection_vector_is_feasible_for_pair() {
        // The constraint rows couple the pair with outside players, so the
        // pair's consequence set is cut only by its worth row.
        let mut values = BTreeMap::new();
        values.insert(Coalition::full(4).0, rint(3));
        values.insert(Coalition::from_indices(&[0, 1]).0, rint(2));
        values.insert(Coalition::from_indices(&[1, 2, 3]).0, rint(3));
        values.insert(Coalition::from_indices(&[0, 2, 3]).0, rint(3));
        values.insert(Coalition::from_indices(&[1]).0, rint(1));
        let worth = WorthFn::table(values, Rat::zero());
        let mut lc = ConstraintSystem::new();
        for p in ["1", "2", "3", "4"] {
            lc.add_var(Variable::player(p)).unwrap();
        }
        let row = |coeffs: Vec<(&str, i64)>, rhs: i64| {
            LinearRow::normalize(
                coeffs.into_iter().map(|(n, c)| (n.to_string(), rint(c))),
                RawRelation::Eq,
                rint(rhs),
            )
        };
        lc.add_row(row(vec![("x_1", 1), ("x_2", 1), ("x_3", 1), ("x_4", 1)], 3))
            .unwrap();
        lc.add_row(row(vec![("x_2", 1), ("x_3", 1), ("x_4", 1)], 3))
            .unwrap();
        lc.add_row(row(vec![("x_1", 1), ("x_3", 1)], 1)).unwrap();
        lc.add_row(row(vec![("x_1", 1), ("x_4", 1)], 1)).unwrap();
        let g = ConstrainedGame::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            worth,
            lc,
        )
        .unwrap();
        let y = PayoffPoint::for_players(&["1".into(), "2".into()], &[rat(1, 3), rat(5, 3)]);
        assert!(g
            .is_consequence(Coalition::from_indices(&[0, 1]), &y, &limits())
            .unwrap());
    }

    #[test]
    fn piggybank_shape() {
        let g = piggybank();
        assert_eq!(g.num_players(), 3);
        assert_eq!(g.worth(g.grand_coalition()), rint(790));
        assert_eq!(g.lc.integer_vars().count(), 12);
        assert_eq!(g.lc.rows.len(), 21);
    }

    #[test]
    fn hypercube_consequences() {
        let g = hypercube(2).unwrap();
        assert_eq!(g.num_players(), 3);
        assert_eq!(g.worth(g.grand_coalition()), rint(2));
        let y = PayoffPoint::for_players(&g.players().to_vec(), &[rint(1), rint(0), rint(1)]);
        assert!(g.is_consequence(g.grand_coalition(), &y, &limits()).unwrap());
        let y = PayoffPoint::for_players(
            &g.players().to_vec(),
            &[rat(1, 2), rat(1, 2), rint(1)],
        );
        assert!(!g.is_consequence(g.grand_coalition(), &y, &limits()).unwrap());
    }

    #[test]
    fn cohesiveness_examples() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::from_indices(&[0]).0, rint(1));
        let g = ConstrainedGame::tu(
            vec!["1".into(), "2".into()],
            WorthFn::table(values, Rat::zero()),
        )
        .unwrap();
        assert!(!g.is_cohesive(&limits()).unwrap());

        let g = ConstrainedGame::tu(vec!["1".into(), "2".into(), "3".into()], prop4_15_table())
            .unwrap();
        assert!(!g.is_cohesive(&limits()).unwrap());
    }

    #[test]
    fn tu_reduce_on_prop_4_15() {
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
        let g = ConstrainedGame::new(
            vec!["1".into(), "2".into(), "3".into()],
            prop4_15_table(),
            lc,
        )
        .unwrap();
        match g.tu_reduce(&limits()).unwrap() {
            TuReduction::Reducible { vprime } => {
                assert_eq!(vprime.eval(3, Coalition::full(3)), rint(3));
                assert_eq!(vprime.eval(3, Coalition::from_indices(&[0, 1])), rint(3));
                assert_eq!(vprime.eval(3, Coalition::from_indices(&[0, 2])), rint(3));
                assert_eq!(vprime.eval(3, Coalition::from_indices(&[1, 2])), rint(3));
                assert_eq!(vprime.eval(3, Coalition::from_indices(&[0])), Rat::zero());
            }
            TuReduction::NotReducible { coalition, reason } => {
                panic!("expected reducible, got {coalition:?}: {reason}")
            }
        }
    }

    #[test]
    fn tu_reduce_rejects_strict_constraints() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::full(2).0, rint(1));
        let mut lc = ConstraintSystem::new();
        lc.add_var(Variable::player("1")).unwrap();
        lc.add_var(Variable::player("2")).unwrap();
        lc.add_row(LinearRow::normalize(
            vec![("x_1".into(), rint(1))],
            RawRelation::Lt,
            rat(1, 2),
        ))
        .unwrap();
        let g = ConstrainedGame::new(
            vec!["1".into(), "2".into()],
            WorthFn::table(values, Rat::zero()),
            lc,
        )
        .unwrap();
        assert!(matches!(
            g.tu_reduce(&limits()).unwrap(),
            TuReduction::NotReducible { .. }
        ));
    }

    #[test]
    fn tu_reduce_example_4_8() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::full(2).0, rint(2));
        let mut lc = ConstraintSystem::new();
        lc.add_var(Variable::player("1")).unwrap();
        lc.add_var(Variable::player("2")).unwrap();
        lc.add_row(LinearRow::normalize(
            vec![("x_1".into(), rint(1)), ("x_2".into(), rint(1))],
            RawRelation::Le,
            rint(1),
        ))
        .unwrap();
        let g = ConstrainedGame::new(
            vec!["1".into(), "2".into()],
            WorthFn::table(values, Rat::zero()),
            lc,
        )
        .unwrap();
        match g.tu_reduce(&limits()).unwrap() {
            TuReduction::Reducible { vprime } => {
                assert_eq!(vprime.eval(2, Coalition::full(2)), rint(1));
                assert_eq!(vprime.eval(2, Coalition::from_indices(&[0])), Rat::zero());
                assert_eq!(vprime.eval(2, Coalition::from_indices(&[1])), Rat::zero());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finite_imputations_validates_points() {
        let mut values = BTreeMap::new();
        values.insert(Coalition::full(2).0, rint(2));
        let worth = WorthFn::table(values, Rat::zero());
        assert!(finite_imputations(
            vec!["1".into(), "2".into()],
            worth.clone(),
            vec![vec![rint(3), rint(0)]],
        )
        .is_err());
        let g = finite_imputations(
            vec!["1".into(), "2".into()],
            worth,
            vec![vec![rint(2), rint(0)], vec![rint(0), rint(2)]],
        )
        .unwrap();
        let y = PayoffPoint::for_players(&g.players().to_vec(), &[rint(2), rint(0)]);
        assert!(g.is_consequence(g.grand_coalition(), &y, &limits()).unwrap());
        let y = PayoffPoint::for_players(&g.players().to_vec(), &[rint(1), rint(1)]);
        assert!(!g.is_consequence(g.grand_coalition(), &y, &limits()).unwrap());
    }
}

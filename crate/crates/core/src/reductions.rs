//! Hardness-reduction game instances: the SAT/QBF-backed constructions
//! whose solution-concept verdicts mirror formula (in)validity, plus the
//! fixed template formula sets for the cross-checking batteries.

use crate::error::{Error, Result};
use crate::game::{Coalition, ConstrainedGame, WorthFn};
use crate::linsys::{ConstraintSystem, LinearRow, PayoffPoint, RawRelation, Variable};
use crate::logic::{BoolExpr, Qbf, Quantifier};
use crate::rational::{rint, Rat};
use num_traits::Zero;

/// A generated game instance with the point its claim talks about.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub game: ConstrainedGame,
    pub point: Option<PayoffPoint>,
    pub claim: String,
}

/// Reserved player ids used by the constructions.
const RESERVED: [&str; 5] = ["w", "e", "a", "a_prime", "w_prime"];

fn check_var_names(vars: &[String]) -> Result<()> {
    for v in vars {
        if RESERVED.contains(&v.as_str()) {
            return Err(Error::SpecInvalid(format!(
                "formula variable `{v}` collides with a reserved player id"
            )));
        }
        if v.ends_with("_bar") {
            return Err(Error::SpecInvalid(format!(
                "formula variable `{v}` must not end with `_bar`"
            )));
        }
    }
    Ok(())
}

fn bar(name: &str) -> String {
    format!("{name}_bar")
}

/// The unsatisfiability game: players are the formula variables plus `w`
/// (cohesion) and `e` (the paid outsider); the point pays `e` everything.
/// Claim: the point is in the core iff the formula is unsatisfiable.
pub fn build_core_check(formula: &BoolExpr) -> Result<ReductionInstance> {
    let vars: Vec<String> = formula.variables().into_iter().collect();
    check_var_names(&vars)?;
    let mut players = vars.clone();
    players.push("w".into());
    players.push("e".into());
    let worth = WorthFn::SatUnsat {
        formula: formula.clone(),
        vars: vars.clone(),
    };
    let game = ConstrainedGame::tu(players.clone(), worth)?;
    let mut point = PayoffPoint::new();
    for p in &players {
        point.insert(crate::linsys::player_var_name(p), Rat::zero());
    }
    point.insert(crate::linsys::player_var_name("e"), rint(1));
    Ok(ReductionInstance {
        game,
        point: Some(point),
        claim: format!("core membership of the e-paying imputation iff ({formula}) is unsatisfiable"),
    })
}

/// Flattens a 3-CNF formula into clauses of exactly three literals.
fn as_three_cnf(e: &BoolExpr) -> Result<Vec<[(String, bool); 3]>> {
    fn clauses(e: &BoolExpr, out: &mut Vec<BoolExpr>) {
        match e {
            BoolExpr::And(a, b) => {
                clauses(a, out);
                clauses(b, out);
            }
            other => out.push(other.clone()),
        }
    }
    fn literals(e: &BoolExpr, out: &mut Vec<(String, bool)>) -> Result<()> {
        match e {
            BoolExpr::Or(a, b) => {
                literals(a, out)?;
                literals(b, out)?;
                Ok(())
            }
            BoolExpr::Var(v) => {
                out.push((v.clone(), false));
                Ok(())
            }
            BoolExpr::Not(inner) => match inner.as_ref() {
                BoolExpr::Var(v) => {
                    out.push((v.clone(), true));
                    Ok(())
                }
                _ => Err(Error::NotThreeCnf(
                    "negation applies to a non-variable".into(),
                )),
            },
            BoolExpr::And(_, _) => Err(Error::NotThreeCnf("conjunction inside a clause".into())),
        }
    }
    let mut cs = Vec::new();
    clauses(e, &mut cs);
    let mut out = Vec::with_capacity(cs.len());
    for c in cs {
        let mut lits = Vec::new();
        literals(&c, &mut lits)?;
        if lits.len() != 3 {
            return Err(Error::NotThreeCnf(format!(
                "clause ({c}) has {} literals, expected 3",
                lits.len()
            )));
        }
        out.push([lits[0].clone(), lits[1].clone(), lits[2].clone()]);
    }
    Ok(out)
}

/// The unsatisfiability game of `phi` constrained by a 0/1 integer encoding
/// of `phi_prime` (a 3-CNF). Claim: the point is in the core iff `phi` is
/// unsatisfiable and `phi_prime` is satisfiable.
pub fn build_core_check_dp(
    phi: &BoolExpr,
    phi_prime: &BoolExpr,
) -> Result<ReductionInstance> {
    let base = build_core_check(phi)?;
    let clauses = as_three_cnf(phi_prime)?;
    let prime_vars: Vec<String> = phi_prime.variables().into_iter().collect();
    check_var_names(&prime_vars)?;
    for v in &prime_vars {
        if phi.variables().contains(v) {
            return Err(Error::SpecInvalid(format!(
                "variable `{v}` appears in both formulas"
            )));
        }
    }
    let mut lc = ConstraintSystem::new();
    for v in &prime_vars {
        lc.add_var(Variable::int_aux(format!("T_{v}"), None))?;
    }
    for v in &prime_vars {
        lc.add_row(LinearRow::normalize(
            vec![(format!("T_{v}"), rint(1))],
            RawRelation::Ge,
            rint(0),
        ))?;
        lc.add_row(LinearRow::normalize(
            vec![(format!("T_{v}"), rint(1))],
            RawRelation::Le,
            rint(1),
        ))?;
    }
    for clause in &clauses {
        // rho(pos Y) = T_Y, rho(neg Y) = 1 - T_Y; sum of the three >= 1.
        let mut coeffs: Vec<(String, Rat)> = Vec::new();
        let mut rhs = rint(1);
        for (v, negated) in clause {
            if *negated {
                coeffs.push((format!("T_{v}"), rint(-1)));
                rhs -= rint(1);
            } else {
                coeffs.push((format!("T_{v}"), rint(1)));
            }
        }
        lc.add_row(LinearRow::normalize(coeffs, RawRelation::Ge, rhs))?;
    }
    let game = ConstrainedGame::new(base.game.players().to_vec(), base.game.worth.clone(), lc)?;
    Ok(ReductionInstance {
        game,
        point: base.point,
        claim: format!(
            "core membership of the e-paying imputation iff ({phi}) is unsatisfiable and ({phi_prime}) is satisfiable"
        ),
    })
}

fn literal_players(vars: &[String], extras: &[&str]) -> Vec<String> {
    let mut players: Vec<String> = vars.to_vec();
    players.extend(vars.iter().map(|v| bar(v)));
    players.extend(extras.iter().map(|s| s.to_string()));
    players
}

/// The forall-exists game: literal players for every variable plus `a` and
/// `a_prime` (both paid 1 at the point) and the cohesion anchor `w` that
/// universal-slice coalitions must contain — the anchor keeps singleton
/// worths at zero even with a single universal variable, where the bare
/// slice construction would break the point's individual rationality.
/// Claim: the point is in the bargaining set iff the QBF is valid.
pub fn build_bargaining_check(qbf: &Qbf) -> Result<ReductionInstance> {
    let [(Quantifier::Forall, universal), (Quantifier::Exists, existential)] =
        &qbf.prefix[..]
    else {
        return Err(Error::BadPrefix(
            "expected exactly `forall ... exists ...`".into(),
        ));
    };
    let mut vars = universal.clone();
    vars.extend(existential.iter().cloned());
    check_var_names(&vars)?;
    let players = literal_players(&vars, &["a", "a_prime", "w"]);
    let worth = WorthFn::ConsistentSat {
        formula: qbf.matrix.clone(),
        vars,
        n_universal: universal.len(),
    };
    let game = ConstrainedGame::tu(players.clone(), worth)?;
    let mut point = PayoffPoint::new();
    for p in &players {
        point.insert(crate::linsys::player_var_name(p), Rat::zero());
    }
    point.insert(crate::linsys::player_var_name("a"), rint(1));
    point.insert(crate::linsys::player_var_name("a_prime"), rint(1));
    Ok(ReductionInstance {
        game,
        point: Some(point),
        claim: "bargaining-set membership of the a/a_prime imputation iff the QBF is valid".into(),
    })
}

/// Pair constraints `x_V + x_V_bar = 1`, both non-negative, for each listed
/// variable; `anchor` is pinned to `anchor_value`.
fn pair_constraints(
    all_players: &[String],
    paired_vars: &[String],
    anchor: &str,
    anchor_value: Rat,
) -> Result<ConstraintSystem> {
    let mut lc = ConstraintSystem::new();
    for p in all_players {
        lc.add_var(Variable::player(p))?;
    }
    for v in paired_vars {
        let pos = crate::linsys::player_var_name(v);
        let neg = crate::linsys::player_var_name(&bar(v));
        lc.add_row(LinearRow::normalize(
            vec![(pos.clone(), rint(1)), (neg.clone(), rint(1))],
            RawRelation::Eq,
            rint(1),
        ))?;
        lc.add_row(LinearRow::normalize(vec![(pos, rint(1))], RawRelation::Ge, rint(0)))?;
        lc.add_row(LinearRow::normalize(vec![(neg, rint(1))], RawRelation::Ge, rint(0)))?;
    }
    lc.add_row(LinearRow::normalize(
        vec![(crate::linsys::player_var_name(anchor), rint(1))],
        RawRelation::Eq,
        anchor_value,
    ))?;
    Ok(lc)
}

/// The exists-forall game: literal players plus `a`; the outer block's pairs
/// must split one unit and `a` is pinned to `2n`. Claim: the core is
/// non-empty iff the QBF is valid.
pub fn build_core_nonempty(qbf: &Qbf) -> Result<ReductionInstance> {
    let [(Quantifier::Exists, existential), (Quantifier::Forall, universal)] =
        &qbf.prefix[..]
    else {
        return Err(Error::BadPrefix(
            "expected exactly `exists ... forall ...`".into(),
        ));
    };
    let mut vars = existential.clone();
    vars.extend(universal.iter().cloned());
    check_var_names(&vars)?;
    let players = literal_players(&vars, &["a"]);
    let n = existential.len() as i64;
    let worth = WorthFn::ConsistentUnsat {
        formula: qbf.matrix.clone(),
        vars,
        n_existential: existential.len(),
    };
    let lc = pair_constraints(&players, existential, "a", rint(2 * n))?;
    let game = ConstrainedGame::new(players, worth, lc)?;
    Ok(ReductionInstance {
        game,
        point: None,
        claim: "core non-emptiness iff the QBF is valid".into(),
    })
}

/// The exists-forall-exists game: literal players plus `a` and `w`; the
/// outer block's pairs split one unit and `a` is pinned to 1. Claim: the
/// bargaining set is non-empty iff the QBF is valid.
pub fn build_bs_nonempty(qbf: &Qbf, limits: &crate::limits::Limits) -> Result<ReductionInstance> {
    let [(Quantifier::Exists, outer), (Quantifier::Forall, universal), (Quantifier::Exists, inner)] =
        &qbf.prefix[..]
    else {
        return Err(Error::BadPrefix(
            "expected exactly `exists ... forall ... exists ...`".into(),
        ));
    };
    let mut vars = outer.clone();
    vars.extend(universal.iter().cloned());
    vars.extend(inner.iter().cloned());
    check_var_names(&vars)?;
    let players = literal_players(&vars, &["a", "w"]);
    if players.len() > limits.bargaining_player_cap {
        return Err(Error::PlayerLimitExceeded {
            players: players.len(),
            cap: limits.bargaining_player_cap,
        });
    }
    let worth = WorthFn::PairConsistent {
        formula: qbf.matrix.clone(),
        vars,
        m_existential: outer.len(),
        n_universal: universal.len(),
    };
    let lc = pair_constraints(&players, outer, "a", rint(1))?;
    let game = ConstrainedGame::new(players, worth, lc)?;
    Ok(ReductionInstance {
        game,
        point: None,
        claim: "bargaining-set non-emptiness iff the QBF is valid".into(),
    })
}

// ---------------------------------------------------------------------------
// Fixed template sets for the cross-checking batteries.
// ---------------------------------------------------------------------------

/// All 16 Boolean functions of two variables, as canonical min-term DNFs
/// (the constant-false table becomes `A & !A`).
pub fn two_var_functions(a: &str, b: &str) -> Vec<BoolExpr> {
    let mut out = Vec::with_capacity(16);
    for table in 0u8..16 {
        let mut expr: Option<BoolExpr> = None;
        for (bit, (va, vb)) in [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .enumerate()
        {
            if table & (1 << bit) == 0 {
                continue;
            }
            let lit = |name: &str, value: bool| {
                if value {
                    BoolExpr::var(name)
                } else {
                    BoolExpr::not(BoolExpr::var(name))
                }
            };
            let minterm = BoolExpr::and(lit(a, va), lit(b, vb));
            expr = Some(match expr {
                None => minterm,
                Some(e) => BoolExpr::or(e, minterm),
            });
        }
        out.push(expr.unwrap_or_else(|| {
            BoolExpr::and(BoolExpr::var(a), BoolExpr::not(BoolExpr::var(a)))
        }));
    }
    out
}

/// Template formulas over at most three variables for the unsatisfiability
/// battery; a fixed list mixing satisfiable and unsatisfiable shapes.
pub fn core_check_templates() -> Vec<BoolExpr> {
    let x1 = || BoolExpr::var("X1");
    let x2 = || BoolExpr::var("X2");
    let x3 = || BoolExpr::var("X3");
    let not = BoolExpr::not;
    let and = BoolExpr::and;
    let or = BoolExpr::or;

    let mut out = vec![
        x1(),
        not(x1()),
        and(x1(), not(x1())),
        or(x1(), not(x1())),
        and(x1(), x2()),
        or(x1(), x2()),
        and(x1(), not(x2())),
        and(not(x1()), not(x2())),
        and(or(x1(), x2()), and(not(x1()), not(x2()))),
        and(and(x1(), x2()), x3()),
        or(or(x1(), x2()), x3()),
        and(or(x1(), x2()), or(not(x1()), x3())),
        and(and(or(x1(), x2()), or(not(x1()), not(x2()))), x3()),
        and(x1(), and(not(x1()), x2())),
        or(and(x1(), x2()), and(not(x1()), not(x2()))),
        and(or(x1(), not(x2())), or(not(x1()), x2())),
        and(and(or(x1(), x2()), or(x1(), not(x2()))), not(x1())),
        and(
            and(or(x1(), x2()), or(not(x1()), x2())),
            and(or(x1(), not(x2())), or(not(x1()), not(x2()))),
        ),
        not(or(x1(), or(x2(), x3()))),
        and(not(x1()), and(not(x2()), not(x3()))),
    ];
    // All 16 two-variable functions, plus their lifts with a third variable.
    out.extend(two_var_functions("X1", "X2"));
    for f in two_var_functions("X1", "X2") {
        out.push(and(f.clone(), x3()));
        out.push(or(f, not(x3())));
    }
    out
}

/// All forall-exists QBFs over one universal and one existential variable
/// (the 16 matrices of `two_var_functions`).
pub fn forall_exists_templates() -> Vec<Qbf> {
    two_var_functions("Y1", "Z1")
        .into_iter()
        .map(|matrix| {
            Qbf::new(
                vec![
                    (Quantifier::Forall, vec!["Y1".into()]),
                    (Quantifier::Exists, vec!["Z1".into()]),
                ],
                matrix,
            )
            .expect("template prefix is valid")
        })
        .collect()
}

/// All exists-forall QBFs over one existential and one universal variable.
pub fn exists_forall_templates() -> Vec<Qbf> {
    two_var_functions("X1", "Y1")
        .into_iter()
        .map(|matrix| {
            Qbf::new(
                vec![
                    (Quantifier::Exists, vec!["X1".into()]),
                    (Quantifier::Forall, vec!["Y1".into()]),
                ],
                matrix,
            )
            .expect("template prefix is valid")
        })
        .collect()
}

/// (phi, phi_prime) pairs for the two-sided core-check battery: phi over at
/// most two variables, phi_prime a small 3-CNF over disjoint variables.
pub fn dp_templates() -> Vec<(BoolExpr, BoolExpr)> {
    let phis: Vec<BoolExpr> = core_check_templates()
        .into_iter()
        .filter(|f| !f.variables().contains("X3"))
        .take(8)
        .collect();
    let y1 = || BoolExpr::var("Y1");
    let y2 = || BoolExpr::var("Y2");
    let clause3 = |a: BoolExpr, b: BoolExpr, c: BoolExpr| BoolExpr::or(BoolExpr::or(a, b), c);
    let primes = vec![
        clause3(y1(), y1(), y1()),
        clause3(BoolExpr::not(y1()), BoolExpr::not(y1()), BoolExpr::not(y1())),
        BoolExpr::and(
            clause3(y1(), y1(), y1()),
            clause3(BoolExpr::not(y1()), BoolExpr::not(y1()), BoolExpr::not(y1())),
        ),
        clause3(y1(), y2(), BoolExpr::not(y1())),
        BoolExpr::and(
            clause3(y1(), y2(), y2()),
            clause3(BoolExpr::not(y2()), BoolExpr::not(y2()), BoolExpr::not(y2())),
        ),
    ];
    let mut out = Vec::new();
    for phi in &phis {
        for prime in &primes {
            out.push((phi.clone(), prime.clone()));
        }
    }
    out
}

/// The smoke pair for the triple-quantifier construction: one valid and one
/// invalid formula with m = n = q = 1.
pub fn bs_nonempty_smoke_pair() -> (Qbf, Qbf) {
    let x = || BoolExpr::var("X1");
    let y = || BoolExpr::var("Y1");
    let z = || BoolExpr::var("Z1");
    let prefix = || {
        vec![
            (Quantifier::Exists, vec!["X1".to_string()]),
            (Quantifier::Forall, vec!["Y1".to_string()]),
            (Quantifier::Exists, vec!["Z1".to_string()]),
        ]
    };
    // Valid: pick X1 true, every clause is satisfied outright.
    let valid = Qbf::new(
        prefix(),
        BoolExpr::and(
            BoolExpr::or(BoolExpr::or(x(), y()), z()),
            BoolExpr::or(BoolExpr::or(x(), BoolExpr::not(y())), z()),
        ),
    )
    .unwrap();
    // Invalid: the matrix is a contradiction.
    let invalid = Qbf::new(
        prefix(),
        BoolExpr::and(BoolExpr::and(x(), BoolExpr::not(x())), BoolExpr::or(y(), z())),
    )
    .unwrap();
    (valid, invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::logic::{qbf_valid, sat};
    use crate::stability::{bargaining_check, core_check, BargainingVerdict, CoreVerdict};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn thm_5_1_examples() {
        // Unsatisfiable formula: the point stays in the core.
        let inst = build_core_check(&BoolExpr::and(
            BoolExpr::var("X1"),
            BoolExpr::not(BoolExpr::var("X1")),
        ))
        .unwrap();
        assert!(inst.game.is_cohesive(&limits()).unwrap());
        let verdict =
            core_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert_eq!(verdict, CoreVerdict::Member);

        // Satisfiable formula: sigma({X1, w}) satisfies it, so {X1, w} blocks.
        let inst = build_core_check(&BoolExpr::var("X1")).unwrap();
        assert!(inst.game.is_cohesive(&limits()).unwrap());
        let verdict =
            core_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert!(matches!(verdict, CoreVerdict::Blocked { .. }));
    }

    #[test]
    fn thm_5_2_examples() {
        let unsat_phi = BoolExpr::and(BoolExpr::var("X1"), BoolExpr::not(BoolExpr::var("X1")));
        let sat_prime = BoolExpr::or(
            BoolExpr::or(BoolExpr::var("Y1"), BoolExpr::var("Y1")),
            BoolExpr::var("Y1"),
        );
        let unsat_prime = BoolExpr::and(
            sat_prime.clone(),
            BoolExpr::or(
                BoolExpr::or(
                    BoolExpr::not(BoolExpr::var("Y1")),
                    BoolExpr::not(BoolExpr::var("Y1")),
                ),
                BoolExpr::not(BoolExpr::var("Y1")),
            ),
        );

        let inst = build_core_check_dp(&unsat_phi, &sat_prime).unwrap();
        let verdict =
            core_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert_eq!(verdict, CoreVerdict::Member);

        let inst = build_core_check_dp(&unsat_phi, &unsat_prime).unwrap();
        let verdict =
            core_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert!(matches!(verdict, CoreVerdict::NotImputation(_)));

        let inst = build_core_check_dp(&BoolExpr::var("X1"), &sat_prime).unwrap();
        let verdict =
            core_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert!(matches!(verdict, CoreVerdict::Blocked { .. }));
    }

    #[test]
    fn thm_5_2_rejects_malformed_cnf() {
        let phi = BoolExpr::var("X1");
        let two_lits = BoolExpr::or(BoolExpr::var("Y1"), BoolExpr::var("Y2"));
        assert!(matches!(
            build_core_check_dp(&phi, &two_lits),
            Err(Error::NotThreeCnf(_))
        ));
    }

    #[test]
    fn thm_5_3_examples() {
        // forall Y exists Z ((Y & Z) | (!Y & !Z)): valid, so Member.
        let q = Qbf::new(
            vec![
                (Quantifier::Forall, vec!["Y1".into()]),
                (Quantifier::Exists, vec!["Z1".into()]),
            ],
            BoolExpr::or(
                BoolExpr::and(BoolExpr::var("Y1"), BoolExpr::var("Z1")),
                BoolExpr::and(
                    BoolExpr::not(BoolExpr::var("Y1")),
                    BoolExpr::not(BoolExpr::var("Z1")),
                ),
            ),
        )
        .unwrap();
        assert!(qbf_valid(&q, 20).unwrap());
        let inst = build_bargaining_check(&q).unwrap();
        assert!(inst.game.is_cohesive(&limits()).unwrap());
        let verdict =
            bargaining_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert_eq!(verdict, BargainingVerdict::Member);

        // forall Y exists Z (Y & Z): the Y-false branch kills it.
        let q = Qbf::new(
            vec![
                (Quantifier::Forall, vec!["Y1".into()]),
                (Quantifier::Exists, vec!["Z1".into()]),
            ],
            BoolExpr::and(BoolExpr::var("Y1"), BoolExpr::var("Z1")),
        )
        .unwrap();
        assert!(!qbf_valid(&q, 20).unwrap());
        let inst = build_bargaining_check(&q).unwrap();
        let verdict =
            bargaining_check(&inst.game, inst.point.as_ref().unwrap(), &limits()).unwrap();
        assert!(matches!(verdict, BargainingVerdict::Justified(_)));
    }

    #[test]
    fn thm_5_4_examples() {
        use crate::stability::{core_nonempty, NonemptinessResult};
        // exists X forall Y (X | Y): valid.
        let q = Qbf::new(
            vec![
                (Quantifier::Exists, vec!["X1".into()]),
                (Quantifier::Forall, vec!["Y1".into()]),
            ],
            BoolExpr::or(BoolExpr::var("X1"), BoolExpr::var("Y1")),
        )
        .unwrap();
        let inst = build_core_nonempty(&q).unwrap();
        assert!(inst.game.is_cohesive(&limits()).unwrap());
        assert!(matches!(
            core_nonempty(&inst.game, &limits()).unwrap(),
            NonemptinessResult::Witness(_)
        ));

        // exists X forall Y (X & Y): invalid.
        let q = Qbf::new(
            vec![
                (Quantifier::Exists, vec!["X1".into()]),
                (Quantifier::Forall, vec!["Y1".into()]),
            ],
            BoolExpr::and(BoolExpr::var("X1"), BoolExpr::var("Y1")),
        )
        .unwrap();
        let inst = build_core_nonempty(&q).unwrap();
        assert_eq!(
            core_nonempty(&inst.game, &limits()).unwrap(),
            NonemptinessResult::Empty
        );
    }

    #[test]
    fn bad_prefixes_are_rejected() {
        let q = Qbf::new(
            vec![(Quantifier::Exists, vec!["X1".into()])],
            BoolExpr::var("X1"),
        )
        .unwrap();
        assert!(matches!(
            build_bargaining_check(&q),
            Err(Error::BadPrefix(_))
        ));
        assert!(matches!(build_core_nonempty(&q), Err(Error::BadPrefix(_))));
        assert!(matches!(
            build_bs_nonempty(&q, &limits()),
            Err(Error::BadPrefix(_))
        ));
    }

    #[test]
    fn templates_are_well_formed() {
        let templates = core_check_templates();
        assert!(templates.len() >= 50);
        for t in &templates {
            assert!(t.variables().len() <= 3);
            // SAT oracle runs without errors on each template.
            sat(t, 20).unwrap();
        }
        assert_eq!(forall_exists_templates().len(), 16);
        assert_eq!(exists_forall_templates().len(), 16);
        assert!(dp_templates().len() >= 20);
        let (valid, invalid) = bs_nonempty_smoke_pair();
        assert!(qbf_valid(&valid, 20).unwrap());
        assert!(!qbf_valid(&invalid, 20).unwrap());
    }

    #[test]
    fn bs_nonempty_games_are_cohesive_and_capped() {
        let (valid, _) = bs_nonempty_smoke_pair();
        let inst = build_bs_nonempty(&valid, &limits()).unwrap();
        assert_eq!(inst.game.num_players(), 8);
        assert!(inst.game.is_cohesive(&limits()).unwrap());
        let mut small = limits();
        small.bargaining_player_cap = 5;
        assert!(matches!(
            build_bs_nonempty(&valid, &small),
            Err(Error::PlayerLimitExceeded { .. })
        ));
    }
}

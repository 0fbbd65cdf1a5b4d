use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Equation, Term};
use crate::algebra::{Element, FiniteRelationAlgebra};
use crate::error::{Error, Result};

/// Largest number of assignments an exhaustive search will visit unless
/// the caller passes a different budget.
pub const DEFAULT_FALSIFY_BUDGET: u64 = 1 << 24;

/// Evaluates `t` on raw bitsets; `assignment[i - 1]` is the value of `x_i`.
pub fn eval_bits(t: &Term, alg: &FiniteRelationAlgebra, assignment: &[u64]) -> Result<u64> {
    Ok(match t {
        Term::Var(i) => *assignment
            .get(*i as usize - 1)
            .ok_or(Error::Unbound(*i))?,
        Term::Zero => 0,
        Term::Top => alg.universe(),
        Term::Id => alg.identity_bits(),
        Term::Not(a) => alg.complement_bits(eval_bits(a, alg, assignment)?),
        Term::Conv(a) => alg.converse_bits(eval_bits(a, alg, assignment)?),
        Term::Join(a, b) => eval_bits(a, alg, assignment)? | eval_bits(b, alg, assignment)?,
        Term::Meet(a, b) => eval_bits(a, alg, assignment)? & eval_bits(b, alg, assignment)?,
        Term::Comp(a, b) => {
            alg.compose_bits(eval_bits(a, alg, assignment)?, eval_bits(b, alg, assignment)?)
        }
    })
}

pub fn eval(t: &Term, alg: &FiniteRelationAlgebra, assignment: &[Element]) -> Result<Element> {
    let mut bits = Vec::with_capacity(assignment.len());
    for &e in assignment {
        bits.push(alg.meet(e, e)?.bits());
    }
    Ok(alg.wrap(eval_bits(t, alg, &bits)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FalsifyMode {
    /// Every assignment, variables in index order, values by increasing bitset.
    Exhaustive { budget: u64 },
    Random { seed: u64, trials: u64 },
}

impl FalsifyMode {
    pub fn exhaustive() -> Self {
        FalsifyMode::Exhaustive {
            budget: DEFAULT_FALSIFY_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum FalsifyOutcome {
    /// Values of `x1..xk` under which the two sides differ.
    Falsified { assignment: Vec<u64> },
    /// No assignment falsifies the equation (exhaustive mode).
    Valid,
    /// No falsifying assignment among the random trials.
    Unknown { trials: u64 },
}

impl FalsifyOutcome {
    /// `x1=a0+t1, x2=0` style rendering of a witness.
    pub fn render(&self, alg: &FiniteRelationAlgebra) -> String {
        match self {
            FalsifyOutcome::Falsified { assignment } => assignment
                .iter()
                .enumerate()
                .map(|(i, &b)| format!("x{}={}", i + 1, alg.format_bits(b)))
                .collect::<Vec<_>>()
                .join(", "),
            FalsifyOutcome::Valid => "VALID".to_string(),
            FalsifyOutcome::Unknown { trials } => format!("UNKNOWN after {trials} random trials"),
        }
    }
}

fn holds(eq: &Equation, alg: &FiniteRelationAlgebra, a: &[u64]) -> Result<bool> {
    Ok(eval_bits(&eq.lhs, alg, a)? == eval_bits(&eq.rhs, alg, a)?)
}

/// Searches for an assignment under which the two sides differ.
///
/// Exhaustive mode returns the first witness in lexicographic order of
/// `(x1, x2, ...)` with elements ordered by bitset value. The space is split
/// across threads on the value of `x1`; the reported witness is the
/// sequential one regardless of thread count.
pub fn falsify(eq: &Equation, alg: &FiniteRelationAlgebra, mode: FalsifyMode) -> Result<FalsifyOutcome> {
    let vars = eq.var_count();
    let k = alg.atom_count();
    match mode {
        FalsifyMode::Exhaustive { budget } => {
            let total_bits = k as u128 * vars as u128;
            if total_bits >= 64 || (1u128 << total_bits) > budget as u128 {
                return Err(Error::Resource(format!(
                    "exhaustive search over {k} atoms and {vars} variables needs 2^{total_bits} assignments, budget is {budget}"
                )));
            }
            if vars == 0 {
                return Ok(if holds(eq, alg, &[])? {
                    FalsifyOutcome::Valid
                } else {
                    FalsifyOutcome::Falsified { assignment: vec![] }
                });
            }
            let per = 1u64 << k;
            let found = (0..per)
                .into_par_iter()
                .map(|first| -> Result<Option<Vec<u64>>> {
                    let mut a = vec![0u64; vars];
                    a[0] = first;
                    loop {
                        if !holds(eq, alg, &a)? {
                            return Ok(Some(a));
                        }
                        let mut i = vars - 1;
                        loop {
                            if i == 0 {
                                return Ok(None);
                            }
                            a[i] += 1;
                            if a[i] < per {
                                break;
                            }
                            a[i] = 0;
                            i -= 1;
                        }
                    }
                })
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            match found {
                None => Ok(FalsifyOutcome::Valid),
                Some(r) => Ok(FalsifyOutcome::Falsified {
                    assignment: r?.expect("only witnesses are kept"),
                }),
            }
        }
        FalsifyMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let universe = alg.universe();
            for _ in 0..trials {
                let a: Vec<u64> = (0..vars).map(|_| rng.gen::<u64>() & universe).collect();
                if !holds(eq, alg, &a)? {
                    return Ok(FalsifyOutcome::Falsified { assignment: a });
                }
            }
            Ok(FalsifyOutcome::Unknown { trials })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpn::{build_lpn, LpnParams};
    use crate::term::{parse_equation, parse_term};

    fn lpn(p: usize, n: usize) -> FiniteRelationAlgebra {
        build_lpn(LpnParams::new(p, n).unwrap()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let a = lpn(3, 2);
        let a0 = a.parse_element("a0").unwrap();
        let t1 = a.parse_element("t1").unwrap();
        assert_eq!(eval(&parse_term("x1;e").unwrap(), &a, &[a0]).unwrap(), a0);
        assert_eq!(
            a.format(eval(&parse_term("x1;x1").unwrap(), &a, &[t1]).unwrap()),
            "1'+a0+a1+a2+a3"
        );
        assert!(matches!(
            eval(&parse_term("x2").unwrap(), &a, &[a0]),
            Err(Error::Unbound(2))
        ));
    }

    #[test]
    fn falsify_examples() {
        let a = lpn(3, 2);
        let id = parse_equation("x1;e = x1").unwrap();
        assert_eq!(falsify(&id, &a, FalsifyMode::exhaustive()).unwrap(), FalsifyOutcome::Valid);

        let sq = parse_equation("x1;x1 = x1").unwrap();
        let out = falsify(&sq, &a, FalsifyMode::exhaustive()).unwrap();
        assert_eq!(
            out,
            FalsifyOutcome::Falsified {
                assignment: vec![a.parse_bits("a0").unwrap()]
            }
        );
        assert_eq!(out.render(&a), "x1=a0");

        let comm = parse_equation("x1+x2 = x2+x1").unwrap();
        assert_eq!(
            falsify(&comm, &lpn(4, 1), FalsifyMode::exhaustive()).unwrap(),
            FalsifyOutcome::Valid
        );
    }

    #[test]
    fn budget_enforced() {
        let a = lpn(3, 2);
        let eq = parse_equation("x1;(x2;x3) = (x1;x2);x3").unwrap();
        assert!(matches!(
            falsify(&eq, &a, FalsifyMode::Exhaustive { budget: 1 << 20 }),
            Err(Error::Resource(_))
        ));
        let out = falsify(&eq, &a, FalsifyMode::Random { seed: 7, trials: 500 }).unwrap();
        assert_eq!(out, FalsifyOutcome::Unknown { trials: 500 });
    }

    #[test]
    fn random_mode_finds_easy_witness_deterministically() {
        let a = lpn(3, 2);
        let eq = parse_equation("x1 = 0").unwrap();
        let m = FalsifyMode::Random { seed: 3, trials: 10 };
        let first = falsify(&eq, &a, m).unwrap();
        assert!(matches!(first, FalsifyOutcome::Falsified { .. }));
        assert_eq!(first, falsify(&eq, &a, m).unwrap());
    }

    /// Independent nested-loop search used as an oracle for tiny algebras.
    fn nested_loop_first(eq: &Equation, alg: &FiniteRelationAlgebra) -> Option<Vec<u64>> {
        let per = alg.element_count().unwrap();
        let vars = eq.var_count();
        let total = per.pow(vars as u32);
        (0..total).find_map(|mut code| {
            let mut a = vec![0u64; vars];
            for slot in a.iter_mut().rev() {
                *slot = code % per;
                code /= per;
            }
            let l = eval_bits(&eq.lhs, alg, &a).unwrap();
            let r = eval_bits(&eq.rhs, alg, &a).unwrap();
            (l != r).then_some(a)
        })
    }

    #[test]
    fn exhaustive_matches_nested_loop_oracle() {
        let alg = lpn(3, 0);
        for s in [
            "x1;x2 = x2;x1",
            "x1;x1 = x1",
            "x1 & x2 = x1",
            "x1;(x2 + x1) = x1;x2 + x1;x1",
            "x1 ; -x2 = -(x1 ; x2)",
            "x1~ = x1",
            "(x1 ; x2) & x3 = x3",
        ] {
            let eq = parse_equation(s).unwrap();
            let ours = falsify(&eq, &alg, FalsifyMode::exhaustive()).unwrap();
            let expected = match nested_loop_first(&eq, &alg) {
                Some(a) => FalsifyOutcome::Falsified { assignment: a },
                None => FalsifyOutcome::Valid,
            };
            assert_eq!(ours, expected, "{s}");
        }
    }
}

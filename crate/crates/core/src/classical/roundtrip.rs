//! Exhaustive round-trip checks of the two translations over small corpora.

use std::rc::Rc;

use serde::Serialize;

use super::{pc_eval, to_2pc, to_pc, truth, PcFormula};
use crate::semantics::{envs, equivalent, eval};
use crate::syntax::{Dimension, Formula, Permutation};

/// Every classical formula over `vars` (plus `0` and `1` when `constants`)
/// with at most `depth` nested connectives, generated lazily.
pub fn pc_corpus(
    vars: &[&str],
    depth: usize,
    constants: bool,
) -> Box<dyn Iterator<Item = PcFormula>> {
    let mut atoms: Vec<PcFormula> = Vec::new();
    if constants {
        atoms.extend([PcFormula::Zero, PcFormula::One]);
    }
    atoms.extend(vars.iter().map(|v| PcFormula::var(*v)));
    if depth == 0 {
        return Box::new(atoms.into_iter());
    }
    let below: Rc<Vec<PcFormula>> = Rc::new(pc_corpus(vars, depth - 1, constants).collect());
    let nots = {
        let below = Rc::clone(&below);
        (0..below.len()).map(move |a| PcFormula::not(below[a].clone()))
    };
    let binary = |op: fn(PcFormula, PcFormula) -> PcFormula| {
        let below = Rc::clone(&below);
        let m = below.len();
        (0..m * m).map(move |ab| op(below[ab / m].clone(), below[ab % m].clone()))
    };
    Box::new(
        atoms
            .into_iter()
            .chain(nots)
            .chain(binary(PcFormula::and))
            .chain(binary(PcFormula::or)),
    )
}

/// Every two-dimensional formula built from `atoms` with at most `depth`
/// nested `q`, generated lazily.
// The boxed iterator outlives `atoms`, so the copies are needed.
#[allow(clippy::unnecessary_to_owned)]
pub fn npc_corpus(atoms: &[Formula], depth: usize) -> Box<dyn Iterator<Item = Formula>> {
    if depth == 0 {
        return Box::new(atoms.to_vec().into_iter());
    }
    let below: Rc<Vec<Formula>> = Rc::new(npc_corpus(atoms, depth - 1).collect());
    let m = below.len();
    let compounds = (0..m * m * m).map(move |abc| {
        Formula::q(
            below[abc / (m * m)].clone(),
            vec![below[abc / m % m].clone(), below[abc % m].clone()],
        )
    });
    Box::new(atoms.to_vec().into_iter().chain(compounds))
}

/// The standard atoms `X` and `X^(12)` for each variable name.
pub fn npc_atoms(vars: &[&str], constants: bool) -> Vec<Formula> {
    let n = Dimension::TWO;
    let swap = Permutation::exchange(1, 2, n).expect("two dimensions");
    let mut atoms = Vec::new();
    if constants {
        atoms.extend([Formula::Const(1), Formula::Const(2)]);
    }
    for v in vars {
        atoms.push(Formula::plain(*v, n));
        atoms.push(Formula::var(*v, swap.clone()));
    }
    atoms
}

/// `P` is true exactly when `P°` takes value 1, and `(P°)•` is classically
/// equivalent to `P`.
pub fn check_pc_formula(p: &PcFormula) -> Result<(), String> {
    let image = to_2pc(p);
    let back = to_pc(&image).map_err(|e| format!("{p}: {e}"))?;
    let inner = || -> Result<Option<String>, crate::semantics::SemanticsError> {
        for v in envs(p.variables(), Dimension::TWO)? {
            let truth_p = pc_eval(p, &v)?;
            if truth_p != truth(eval(&image, &v)?) {
                return Ok(Some(format!(
                    "{p}: translation `{image}` disagrees under {v}"
                )));
            }
            if truth_p != pc_eval(&back, &v)? {
                return Ok(Some(format!(
                    "{p}: round trip `{back}` disagrees under {v}"
                )));
            }
        }
        Ok(None)
    };
    match inner().map_err(|e| format!("{p}: {e}"))? {
        None => Ok(()),
        Some(msg) => Err(msg),
    }
}

/// `F` takes value 1 exactly when `F•` is true, and `(F•)°` is equivalent to
/// `F`.
pub fn check_npc_formula(f: &Formula) -> Result<(), String> {
    let n = Dimension::TWO;
    let image = to_pc(f).map_err(|e| format!("{f}: {e}"))?;
    let back = to_2pc(&image);
    let inner = || -> Result<Option<String>, crate::semantics::SemanticsError> {
        for v in envs(f.variables(), n)? {
            if truth(eval(f, &v)?) != pc_eval(&image, &v)? {
                return Ok(Some(format!(
                    "{f}: translation `{image}` disagrees under {v}"
                )));
            }
        }
        if !equivalent(f, &back, n)? {
            return Ok(Some(format!("{f}: round trip `{back}` is not equivalent")));
        }
        Ok(None)
    };
    match inner().map_err(|e| format!("{f}: {e}"))? {
        None => Ok(()),
        Some(msg) => Err(msg),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl RoundTripReport {
    pub fn run<T>(
        name: impl Into<String>,
        corpus: impl IntoIterator<Item = T>,
        check: impl Fn(&T) -> Result<(), String>,
    ) -> Self {
        let mut report = RoundTripReport {
            name: name.into(),
            cases: 0,
            failures: 0,
            first_failure: None,
        };
        for item in corpus {
            report.cases += 1;
            if let Err(msg) = check(&item) {
                report.failures += 1;
                report.first_failure.get_or_insert(msg);
            }
        }
        report
    }

    pub fn pass(&self) -> bool {
        self.cases > 0 && self.failures == 0
    }
}

/// The standard corpora:
///
/// * classical formulas over `X, Y` up to depth 3 without constants, and
///   over `0, 1, X, Y` up to depth 2;
/// * two-dimensional formulas over `e1, e2, X, X^(12), Y, Y^(12)` up to
///   depth 1, and over `e1, e2, X, Y^(12)` up to depth 2.
pub fn roundtrip_reports() -> Vec<RoundTripReport> {
    let swap = Permutation::exchange(1, 2, Dimension::TWO).expect("two dimensions");
    let small = vec![
        Formula::Const(1),
        Formula::Const(2),
        Formula::plain("X", Dimension::TWO),
        Formula::var("Y", swap),
    ];
    vec![
        RoundTripReport::run(
            "pc {X,Y} depth<=3",
            pc_corpus(&["X", "Y"], 3, false),
            check_pc_formula,
        ),
        RoundTripReport::run(
            "pc {0,1,X,Y} depth<=2",
            pc_corpus(&["X", "Y"], 2, true),
            check_pc_formula,
        ),
        RoundTripReport::run(
            "2pc {e1,e2,X,X^[2,1],Y,Y^[2,1]} depth<=1",
            npc_corpus(&npc_atoms(&["X", "Y"], true), 1),
            check_npc_formula,
        ),
        RoundTripReport::run(
            "2pc {e1,e2,X,Y^[2,1]} depth<=2",
            npc_corpus(&small, 2),
            check_npc_formula,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes() {
        assert_eq!(pc_corpus(&["X", "Y"], 1, false).count(), 12);
        assert_eq!(pc_corpus(&["X", "Y"], 2, false).count(), 302);
        assert_eq!(pc_corpus(&["X", "Y"], 2, true).count(), 3244);
        assert_eq!(npc_corpus(&npc_atoms(&["X", "Y"], true), 1).count(), 222);
    }

    #[test]
    fn small_corpora_round_trip() {
        let r = RoundTripReport::run("pc", pc_corpus(&["X", "Y"], 2, true), check_pc_formula);
        assert!(r.pass(), "{r:?}");
        let r = RoundTripReport::run(
            "2pc",
            npc_corpus(&npc_atoms(&["X", "Y"], true), 1),
            check_npc_formula,
        );
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn failures_are_counted() {
        let r = RoundTripReport::run("odd", 0..5, |k| {
            if k % 2 == 1 {
                Err(format!("{k}"))
            } else {
                Ok(())
            }
        });
        assert_eq!(
            (r.cases, r.failures, r.first_failure.as_deref()),
            (5, 2, Some("1"))
        );
    }
}

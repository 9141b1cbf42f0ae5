use std::fmt;

use thiserror::Error;

use super::PcFormula;

/// A two-sided classical sequent; both sides are multisets kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcSequent {
    pub left: Vec<PcFormula>,
    pub right: Vec<PcFormula>,
}

impl PcSequent {
    pub fn new(mut left: Vec<PcFormula>, mut right: Vec<PcFormula>) -> Self {
        left.sort();
        right.sort();
        PcSequent { left, right }
    }

    /// Parses `P, Q |- R`.
    pub fn parse(text: &str) -> Result<Self, super::ClassicalError> {
        let (l, r) = text.split_once("|-").ok_or(super::ClassicalError::Parse {
            pos: 0,
            message: "expected `|-`".into(),
        })?;
        let side = |t: &str| -> Result<Vec<PcFormula>, super::ClassicalError> {
            if t.trim().is_empty() {
                return Ok(Vec::new());
            }
            t.split(',').map(str::parse).collect()
        };
        Ok(PcSequent::new(side(l)?, side(r)?))
    }
}

impl fmt::Display for PcSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[PcFormula]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match (self.left.is_empty(), self.right.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {}", join(&self.right)),
            (false, true) => write!(f, "{} |-", join(&self.left)),
            (false, false) => write!(f, "{} |- {}", join(&self.left), join(&self.right)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PcRule {
    Const1,
    Const0,
    Id,
    AndL,
    AndR,
    OrL,
    OrR,
    NotL,
    NotR,
    Cut,
    WeakL,
    WeakR,
    ConL,
    ConR,
}

/// A classical derivation. Open leaves must be among the hypotheses given to
/// [`pc_check`]. `formula` is the principal formula as it occurs in the
/// conclusion (the cut formula for `Cut`); the axioms take none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcProof {
    Hypothesis(PcSequent),
    Step {
        rule: PcRule,
        formula: Option<PcFormula>,
        conclusion: PcSequent,
        premises: Vec<PcProof>,
    },
}

impl PcProof {
    pub fn step(
        rule: PcRule,
        formula: Option<PcFormula>,
        conclusion: PcSequent,
        premises: Vec<PcProof>,
    ) -> Self {
        PcProof::Step {
            rule,
            formula,
            conclusion,
            premises,
        }
    }

    pub fn conclusion(&self) -> &PcSequent {
        match self {
            PcProof::Hypothesis(s) => s,
            PcProof::Step { conclusion, .. } => conclusion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at node root{} ({rule:?}): {message}", path.iter().map(|p| format!(".{p}")).collect::<String>())]
pub struct PcViolation {
    pub path: Vec<usize>,
    pub rule: Option<PcRule>,
    pub message: String,
}

fn without(side: &[PcFormula], f: &PcFormula) -> Option<Vec<PcFormula>> {
    let at = side.iter().position(|g| g == f)?;
    let mut rest = side.to_vec();
    rest.remove(at);
    Some(rest)
}

fn with(side: &[PcFormula], fs: &[&PcFormula]) -> Vec<PcFormula> {
    let mut out = side.to_vec();
    out.extend(fs.iter().map(|f| (*f).clone()));
    out
}

/// Premises required by `rule` for `conclusion`.
fn instantiate(
    rule: PcRule,
    formula: Option<&PcFormula>,
    c: &PcSequent,
) -> Result<Vec<PcSequent>, String> {
    let axiom = |left: Vec<PcFormula>, right: Vec<PcFormula>, shape: &str| {
        if formula.is_some() {
            return Err(format!("{rule:?} takes no formula"));
        }
        if *c == PcSequent::new(left, right) {
            Ok(vec![])
        } else {
            Err(format!("expected `{shape}`"))
        }
    };
    match rule {
        PcRule::Const1 => return axiom(vec![], vec![PcFormula::One], "|- 1"),
        PcRule::Const0 => return axiom(vec![PcFormula::Zero], vec![], "0 |-"),
        PcRule::Id => {
            if formula.is_some() {
                return Err("Id takes no formula".into());
            }
            return match (c.left.as_slice(), c.right.as_slice()) {
                ([p], [q]) if p == q => Ok(vec![]),
                _ => Err("expected `P |- P`".into()),
            };
        }
        _ => {}
    }
    let f = formula.ok_or_else(|| format!("{rule:?} needs a principal formula"))?;
    let left_rest = || without(&c.left, f).ok_or_else(|| format!("{f} does not occur on the left"));
    let right_rest =
        || without(&c.right, f).ok_or_else(|| format!("{f} does not occur on the right"));
    let wrong = || Err(format!("{f} is not of the form {rule:?} expects"));
    let s = PcSequent::new;
    Ok(match (rule, f) {
        (PcRule::AndL, PcFormula::And(p, q)) => {
            vec![s(with(&left_rest()?, &[p, q]), c.right.clone())]
        }
        (PcRule::AndR, PcFormula::And(p, q)) => {
            let rest = right_rest()?;
            vec![
                s(c.left.clone(), with(&rest, &[p])),
                s(c.left.clone(), with(&rest, &[q])),
            ]
        }
        (PcRule::OrL, PcFormula::Or(p, q)) => {
            let rest = left_rest()?;
            vec![
                s(with(&rest, &[p]), c.right.clone()),
                s(with(&rest, &[q]), c.right.clone()),
            ]
        }
        (PcRule::OrR, PcFormula::Or(p, q)) => {
            vec![s(c.left.clone(), with(&right_rest()?, &[p, q]))]
        }
        (PcRule::NotL, PcFormula::Not(p)) => vec![s(left_rest()?, with(&c.right, &[p]))],
        (PcRule::NotR, PcFormula::Not(p)) => vec![s(with(&c.left, &[p]), right_rest()?)],
        (
            PcRule::AndL | PcRule::AndR | PcRule::OrL | PcRule::OrR | PcRule::NotL | PcRule::NotR,
            _,
        ) => return wrong(),
        (PcRule::Cut, _) => vec![
            s(with(&c.left, &[f]), c.right.clone()),
            s(c.left.clone(), with(&c.right, &[f])),
        ],
        (PcRule::WeakL, _) => vec![s(left_rest()?, c.right.clone())],
        (PcRule::WeakR, _) => vec![s(c.left.clone(), right_rest()?)],
        (PcRule::ConL, _) => {
            left_rest()?;
            vec![s(with(&c.left, &[f]), c.right.clone())]
        }
        (PcRule::ConR, _) => {
            right_rest()?;
            vec![s(c.left.clone(), with(&c.right, &[f]))]
        }
        (PcRule::Const1 | PcRule::Const0 | PcRule::Id, _) => unreachable!("handled above"),
    })
}

/// Checks a classical derivation whose open leaves are among `hypotheses`.
pub fn pc_check(proof: &PcProof, hypotheses: &[PcSequent]) -> Result<(), PcViolation> {
    let mut path = Vec::new();
    check_at(proof, hypotheses, &mut path)
}

fn check_at(
    proof: &PcProof,
    hypotheses: &[PcSequent],
    path: &mut Vec<usize>,
) -> Result<(), PcViolation> {
    match proof {
        PcProof::Hypothesis(s) => {
            if hypotheses.contains(s) {
                Ok(())
            } else {
                Err(PcViolation {
                    path: path.clone(),
                    rule: None,
                    message: format!("open leaf `{s}` is not a hypothesis"),
                })
            }
        }
        PcProof::Step {
            rule,
            formula,
            conclusion,
            premises,
        } => {
            let fail = |message: String| PcViolation {
                path: path.clone(),
                rule: Some(*rule),
                message,
            };
            let expected = instantiate(*rule, formula.as_ref(), conclusion).map_err(fail)?;
            if expected.len() != premises.len() {
                return Err(fail(format!(
                    "expected {} premises, found {}",
                    expected.len(),
                    premises.len()
                )));
            }
            for (index, (want, got)) in expected.iter().zip(premises).enumerate() {
                if want != got.conclusion() {
                    return Err(fail(format!(
                        "premise {index} should conclude `{want}`, found `{}`",
                        got.conclusion()
                    )));
                }
            }
            for (index, child) in premises.iter().enumerate() {
                path.push(index);
                check_at(child, hypotheses, path)?;
                path.pop();
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> PcSequent {
        PcSequent::parse(text).unwrap()
    }

    fn f(text: &str) -> PcFormula {
        text.parse().unwrap()
    }

    #[test]
    fn axioms() {
        let one = PcProof::step(PcRule::Const1, None, seq("|- 1"), vec![]);
        assert_eq!(pc_check(&one, &[]), Ok(()));
        let bad = PcProof::step(PcRule::Id, None, seq("X |- Y"), vec![]);
        assert!(pc_check(&bad, &[]).is_err());
    }

    #[test]
    fn excluded_middle() {
        let id = PcProof::step(PcRule::Id, None, seq("X |- X"), vec![]);
        let neg = PcProof::step(PcRule::NotR, Some(f("~X")), seq("|- X, ~X"), vec![id]);
        let or = PcProof::step(PcRule::OrR, Some(f("X | ~X")), seq("|- X | ~X"), vec![neg]);
        assert_eq!(pc_check(&or, &[]), Ok(()));
    }

    #[test]
    fn violations_carry_paths() {
        let id = PcProof::step(PcRule::Id, None, seq("X |- X"), vec![]);
        let bad = PcProof::step(PcRule::WeakL, Some(f("Y")), seq("Y |- Z"), vec![id]);
        let err = pc_check(&bad, &[]).unwrap_err();
        assert!(err.path.is_empty());
        let hyp = PcProof::Hypothesis(seq("|- Y"));
        let top = PcProof::step(PcRule::WeakL, Some(f("X")), seq("X |- Y"), vec![hyp]);
        assert_eq!(pc_check(&top, &[]).unwrap_err().path, vec![0]);
        assert_eq!(pc_check(&top, &[seq("|- Y")]), Ok(()));
    }
}

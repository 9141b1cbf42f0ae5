use std::fmt;

use thiserror::Error;

use super::{instantiate, Derivation, ProofTree, RuleError, RuleParams, RuleTag};
use crate::syntax::{Dimension, Sequent};

/// The first offending node in pre-order, addressed by premise indices from
/// the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct RuleViolation {
    pub path: Vec<usize>,
    pub rule: Option<RuleTag>,
    pub error: RuleError,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at node root")?;
        for p in &self.path {
            write!(f, ".{p}")?;
        }
        if let Some(rule) = self.rule {
            write!(f, " ({rule})")?;
        }
        write!(f, ": {}", self.error)
    }
}

pub fn check(tree: &ProofTree, n: Dimension) -> Result<(), RuleViolation> {
    let mut path = Vec::new();
    check_tree(tree, n, &mut path)
}

/// Checks a derivation whose open leaves must all be among `hypotheses`.
pub fn check_assuming(
    d: &Derivation,
    n: Dimension,
    hypotheses: &[Sequent],
) -> Result<(), RuleViolation> {
    let mut path = Vec::new();
    check_derivation(d, n, hypotheses, &mut path)
}

fn check_node<'a>(
    rule: RuleTag,
    params: &RuleParams,
    conclusion: &Sequent,
    premises: impl ExactSizeIterator<Item = &'a Sequent>,
    n: Dimension,
) -> Result<(), RuleError> {
    let expected = instantiate(rule, params, conclusion, n)?;
    if expected.len() != premises.len() {
        return Err(RuleError::PremiseCount {
            rule,
            expected: expected.len(),
            found: premises.len(),
        });
    }
    for (index, (want, got)) in expected.into_iter().zip(premises).enumerate() {
        if &want != got {
            return Err(RuleError::PremiseMismatch {
                index,
                expected: want,
                found: got.clone(),
            });
        }
    }
    Ok(())
}

fn check_tree(t: &ProofTree, n: Dimension, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    check_node(
        t.rule,
        &t.params,
        &t.conclusion,
        t.premises.iter().map(|p| &p.conclusion),
        n,
    )
    .map_err(|error| RuleViolation {
        path: path.clone(),
        rule: Some(t.rule),
        error,
    })?;
    for (index, child) in t.premises.iter().enumerate() {
        path.push(index);
        check_tree(child, n, path)?;
        path.pop();
    }
    Ok(())
}

fn check_derivation(
    d: &Derivation,
    n: Dimension,
    hypotheses: &[Sequent],
    path: &mut Vec<usize>,
) -> Result<(), RuleViolation> {
    match d {
        Derivation::Assumption(s) => {
            if hypotheses.contains(s) {
                Ok(())
            } else {
                Err(RuleViolation {
                    path: path.clone(),
                    rule: None,
                    error: RuleError::UndischargedAssumption(s.clone()),
                })
            }
        }
        Derivation::Step {
            rule,
            params,
            conclusion,
            premises,
        } => {
            check_node(
                *rule,
                params,
                conclusion,
                premises.iter().map(Derivation::conclusion),
                n,
            )
            .map_err(|error| RuleViolation {
                path: path.clone(),
                rule: Some(*rule),
                error,
            })?;
            for (index, child) in premises.iter().enumerate() {
                path.push(index);
                check_derivation(child, n, hypotheses, path)?;
                path.pop();
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, Permutation};

    const N2: Dimension = Dimension::TWO;

    fn s(text: &str) -> Sequent {
        parse_sequent(text, N2).unwrap()
    }

    fn leaf_const(i: usize) -> ProofTree {
        ProofTree::new(
            RuleTag::Const,
            RuleParams::i(i),
            s(&format!("|-{i} e{i}")),
            vec![],
        )
    }

    #[test]
    fn single_const_node() {
        assert_eq!(check(&leaf_const(1), N2), Ok(()));
    }

    #[test]
    fn id_with_mismatched_preimages_is_rejected() {
        let id = Permutation::identity(N2);
        let swap = Permutation::from_images(&[2, 1]).unwrap();
        let t = ProofTree::new(
            RuleTag::Id,
            RuleParams::id(1, id, swap),
            s("X |-1 X^[2,1]"),
            vec![],
        );
        let err = check(&t, N2).unwrap_err();
        assert!(err.path.is_empty());
        assert!(matches!(err.error, RuleError::SideCondition(_)));
    }

    #[test]
    fn neg1_over_const_refutes_constant() {
        let e1 = parse_formula("e1", N2).unwrap();
        let t = ProofTree::new(
            RuleTag::Neg1,
            RuleParams::neg(1, 2, 2, e1),
            s("e1 |-2"),
            vec![leaf_const(1)],
        );
        assert_eq!(check(&t, N2), Ok(()));
    }

    #[test]
    fn reports_first_violation_in_preorder() {
        let e1 = parse_formula("e1", N2).unwrap();
        let bad_leaf = ProofTree::new(RuleTag::Const, RuleParams::i(2), s("|-1 e1"), vec![]);
        let t = ProofTree::new(
            RuleTag::Neg1,
            RuleParams::neg(1, 2, 2, e1.clone()),
            s("e1 |-2"),
            vec![bad_leaf],
        );
        let err = check(&t, N2).unwrap_err();
        assert_eq!(err.path, vec![0]);
        assert_eq!(
            err.to_string().split(':').next().unwrap(),
            "at node root.0 (Const)"
        );

        // wrong premise conclusion is blamed on the parent
        let t = ProofTree::new(
            RuleTag::Neg1,
            RuleParams::neg(1, 2, 2, e1),
            s("e1 |-2"),
            vec![leaf_const(2)],
        );
        let err = check(&t, N2).unwrap_err();
        assert!(err.path.is_empty());
        assert!(matches!(
            err.error,
            RuleError::PremiseMismatch { index: 0, .. }
        ));
    }

    #[test]
    fn premise_count_is_enforced() {
        let t = ProofTree::new(
            RuleTag::Const,
            RuleParams::i(1),
            s("|-1 e1"),
            vec![leaf_const(1)],
        );
        assert!(matches!(
            check(&t, N2).unwrap_err().error,
            RuleError::PremiseCount {
                expected: 0,
                found: 1,
                ..
            }
        ));
    }

    #[test]
    fn assumptions_must_be_declared() {
        let hyp = s("|-1 X");
        let x = parse_formula("X", N2).unwrap();
        let d = Derivation::step(
            RuleTag::WeakL,
            RuleParams::with_formula(1, x),
            s("X |-1 X"),
            vec![Derivation::Assumption(hyp.clone())],
        );
        assert_eq!(check_assuming(&d, N2, &[hyp]), Ok(()));
        let err = check_assuming(&d, N2, &[]).unwrap_err();
        assert_eq!(err.path, vec![0]);
    }
}

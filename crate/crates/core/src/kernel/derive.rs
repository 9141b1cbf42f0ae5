//! Builders for derived rules: identity on arbitrary formulas, constant
//! refutations, clashing pairs, permutation axioms and the equivalence of a
//! decorated formula with its `q`-expansion.
//!
//! Builders work root-first: a rule is instantiated on the goal through the
//! kernel's own [`instantiate`], and each computed premise is then closed.
//! [`derive`] re-checks its output; the individual builders do not.

use thiserror::Error;

use super::{check, instantiate, ProofTree, RuleError, RuleParams, RuleTag, RuleViolation};
use crate::syntax::{Context, Dimension, Formula, Permutation, Sequent, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("derived tree failed the kernel: {0}")]
    Rejected(#[from] RuleViolation),
}

/// Which of the two sequents relating `H^π` and `q(H, e_π(1), ..., e_π(n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `q(H, e_π(1), ..., e_π(n)) ⊢_i H^π`
    ToPermuted,
    /// `H^π ⊢_i q(H, e_π(1), ..., e_π(n))`
    FromPermuted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// `F ⊢_i F`
    Identity { formula: Formula, i: usize },
    /// `e_k ⊢_i` for `k != i`
    ConstLeft { k: usize, i: usize },
    /// `F^(ij), F^(kj) ⊢_j` for `i != k`
    PairClash {
        formula: Formula,
        i: usize,
        j: usize,
        k: usize,
    },
    /// `F^π ⊢_i F^ρ` when `π⁻¹(i) = ρ⁻¹(i)`
    PermAxiom {
        formula: Formula,
        pi: Permutation,
        rho: Permutation,
        i: usize,
    },
    PermEq {
        formula: Formula,
        pi: Permutation,
        i: usize,
        direction: Direction,
    },
    /// Iterated weakening of an existing proof.
    WeakPlus {
        base: Box<ProofTree>,
        left: Vec<Formula>,
        right: Vec<Formula>,
    },
}

/// Builds the proof for `scheme` and runs it through the kernel.
pub fn derive(scheme: Scheme, n: Dimension) -> Result<ProofTree, DeriveError> {
    let tree = match scheme {
        Scheme::Identity { formula, i } => identity(&formula, i, n)?,
        Scheme::ConstLeft { k, i } => const_left(k, i, n)?,
        Scheme::PairClash { formula, i, j, k } => pair_clash(&formula, i, j, k, n)?,
        Scheme::PermAxiom {
            formula,
            pi,
            rho,
            i,
        } => perm_axiom(&formula, &pi, &rho, i, n)?,
        Scheme::PermEq {
            formula,
            pi,
            i,
            direction,
        } => perm_eq(&formula, &pi, i, direction, n)?,
        Scheme::WeakPlus { base, left, right } => weak_plus(*base, left, right),
    };
    check(&tree, n)?;
    Ok(tree)
}

fn index_in_range(name: &str, value: usize, n: Dimension) -> Result<(), DeriveError> {
    if value == 0 || value > n.get() {
        return Err(DeriveError::Precondition(format!(
            "{name} = {value} is outside 1..={n}"
        )));
    }
    Ok(())
}

/// Applies `rule` to `goal` and closes every computed premise with `close`.
pub fn by_rule(
    rule: RuleTag,
    params: RuleParams,
    goal: Sequent,
    n: Dimension,
    mut close: impl FnMut(usize, &Sequent) -> Result<ProofTree, DeriveError>,
) -> Result<ProofTree, DeriveError> {
    let premises = instantiate(rule, &params, &goal, n)?;
    let children = premises
        .iter()
        .enumerate()
        .map(|(index, s)| close(index, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree::new(rule, params, goal, children))
}

/// Adds the given formulas by `WeakL` (left, in order) and then `WeakR`.
pub fn weak_plus(
    base: ProofTree,
    left: impl IntoIterator<Item = Formula>,
    right: impl IntoIterator<Item = Formula>,
) -> ProofTree {
    let i = base.conclusion.turnstile;
    let mut tree = base;
    for f in left {
        let conclusion = Sequent::new(
            tree.conclusion.left.with(f.clone()),
            i,
            tree.conclusion.right.clone(),
        );
        tree = ProofTree::new(
            RuleTag::WeakL,
            RuleParams::with_formula(i, f),
            conclusion,
            vec![tree],
        );
    }
    for f in right {
        let conclusion = Sequent::new(
            tree.conclusion.left.clone(),
            i,
            tree.conclusion.right.with(f.clone()),
        );
        tree = ProofTree::new(
            RuleTag::WeakR,
            RuleParams::with_formula(i, f),
            conclusion,
            vec![tree],
        );
    }
    tree
}

/// Weakens `base` until it concludes `target`.
pub fn weaken_to(base: ProofTree, target: &Sequent) -> Result<ProofTree, DeriveError> {
    let have = &base.conclusion;
    let extra = || DeriveError::Precondition(format!("`{have}` cannot be weakened to `{target}`"));
    if have.turnstile != target.turnstile {
        return Err(extra());
    }
    let left = target.left.difference(&have.left).ok_or_else(extra)?;
    let right = target.right.difference(&have.right).ok_or_else(extra)?;
    Ok(weak_plus(base, left.iter().cloned(), right.iter().cloned()))
}

fn single(f: Formula) -> Context {
    Context::from_formulas([f])
}

/// `e_i` on the right, by `Const`.
pub fn constant(i: usize, n: Dimension) -> Result<ProofTree, DeriveError> {
    index_in_range("i", i, n)?;
    Ok(ProofTree::new(
        RuleTag::Const,
        RuleParams::i(i),
        Sequent::new(Context::new(), i, single(Formula::Const(i))),
        vec![],
    ))
}

/// `e_k ⊢_i` for `k != i`: one `Neg1` (with its `k` chosen equal to `i`) over
/// `⊢_k e_k`.
pub fn const_left(k: usize, i: usize, n: Dimension) -> Result<ProofTree, DeriveError> {
    index_in_range("k", k, n)?;
    index_in_range("i", i, n)?;
    if k == i {
        return Err(DeriveError::Precondition(format!(
            "const_left needs k != i, got {k}"
        )));
    }
    let goal = Sequent::new(single(Formula::Const(k)), i, Context::new());
    by_rule(
        RuleTag::Neg1,
        RuleParams::neg(k, i, i, Formula::Const(k)),
        goal,
        n,
        |_, _| constant(k, n),
    )
}

/// `F ⊢_i F`, by induction on `F`.
pub fn identity(f: &Formula, i: usize, n: Dimension) -> Result<ProofTree, DeriveError> {
    f.check_dimension(n)?;
    index_in_range("i", i, n)?;
    let goal = Sequent::new(single(f.clone()), i, single(f.clone()));
    match f {
        Formula::Var { dec, .. } => Ok(ProofTree::new(
            RuleTag::Id,
            RuleParams::id(i, dec.clone(), dec.clone()),
            goal,
            vec![],
        )),
        Formula::Const(k) if *k == i => weaken_to(constant(i, n)?, &goal),
        Formula::Const(k) => weaken_to(const_left(*k, i, n)?, &goal),
        Formula::Q { test, branches } => {
            let nn = n.get();
            by_rule(
                RuleTag::QL,
                RuleParams::with_formula(i, f.clone()),
                goal,
                n,
                |idx, premise| {
                    // G, H_j^(ji) ⊢_j F^(ji)
                    let j = idx + 1;
                    let target = f.exchanged(j, i, nn);
                    by_rule(
                        RuleTag::QR,
                        RuleParams::with_formula(j, target),
                        premise.clone(),
                        n,
                        |kdx, leaf| {
                            let k = kdx + 1;
                            if k == j {
                                let h = branches[j - 1].exchanged(j, i, nn);
                                weaken_to(identity(&h, j, n)?, leaf)
                            } else {
                                weaken_to(pair_clash(test, j, k, k, n)?, leaf)
                            }
                        },
                    )
                },
            )
        }
    }
}

/// `F^(ij), F^(kj) ⊢_j` for `i != k`: `Neg1` over `F ⊢_i F`.
pub fn pair_clash(
    f: &Formula,
    i: usize,
    j: usize,
    k: usize,
    n: Dimension,
) -> Result<ProofTree, DeriveError> {
    f.check_dimension(n)?;
    for (name, v) in [("i", i), ("j", j), ("k", k)] {
        index_in_range(name, v, n)?;
    }
    if i == k {
        return Err(DeriveError::Precondition(format!(
            "pair_clash needs i != k, got {i}"
        )));
    }
    let nn = n.get();
    let goal = Sequent::new(
        Context::from_formulas([f.exchanged(i, j, nn), f.exchanged(k, j, nn)]),
        j,
        Context::new(),
    );
    by_rule(
        RuleTag::Neg1,
        RuleParams::neg(i, j, k, f.exchanged(j, k, nn)),
        goal,
        n,
        |_, _| identity(f, i, n),
    )
}

/// `F^π ⊢_i F^ρ` whenever `π⁻¹(i) = ρ⁻¹(i)`.
pub fn perm_axiom(
    f: &Formula,
    pi: &Permutation,
    rho: &Permutation,
    i: usize,
    n: Dimension,
) -> Result<ProofTree, DeriveError> {
    f.check_dimension(n)?;
    index_in_range("i", i, n)?;
    for perm in [pi, rho] {
        if perm.degree() != n.get() {
            return Err(SyntaxError::DimensionMismatch {
                expected: n.get(),
                found: perm.degree(),
            }
            .into());
        }
    }
    if pi.preimage(i) != rho.preimage(i) {
        return Err(DeriveError::Precondition(format!(
            "{pi}^-1({i}) != {rho}^-1({i})"
        )));
    }
    let nn = n.get();
    let lhs = f.permuted(pi);
    let rhs = f.permuted(rho);
    let goal = Sequent::new(single(lhs.clone()), i, single(rhs.clone()));
    match f {
        Formula::Var { .. } => {
            let (Formula::Var { dec: l, .. }, Formula::Var { dec: r, .. }) = (&lhs, &rhs) else {
                unreachable!("action preserves variables")
            };
            Ok(ProofTree::new(
                RuleTag::Id,
                RuleParams::id(i, l.clone(), r.clone()),
                goal,
                vec![],
            ))
        }
        Formula::Const(k) => {
            let c = pi.apply(*k);
            if c == i {
                weaken_to(constant(i, n)?, &goal)
            } else {
                weaken_to(const_left(c, i, n)?, &goal)
            }
        }
        Formula::Q { test, branches } => by_rule(
            RuleTag::QR,
            RuleParams::with_formula(i, rhs),
            goal,
            n,
            |jdx, premise| {
                let j = jdx + 1;
                let swap_ji = Permutation::swap(j, i, nn);
                let principal = lhs.exchanged(j, i, nn);
                by_rule(
                    RuleTag::QL,
                    RuleParams::with_formula(j, principal),
                    premise.clone(),
                    n,
                    |kdx, leaf| {
                        let k = kdx + 1;
                        if k == j {
                            let sub = perm_axiom(
                                &branches[j - 1],
                                &swap_ji.after(pi),
                                &swap_ji.after(rho),
                                j,
                                n,
                            )?;
                            weaken_to(sub, leaf)
                        } else {
                            weaken_to(pair_clash(test, j, k, k, n)?, leaf)
                        }
                    },
                )
            },
        ),
    }
}

/// The two halves of `H^π ∼ q(H, e_π(1), ..., e_π(n))` at dimension `i`.
pub fn perm_eq(
    h: &Formula,
    pi: &Permutation,
    i: usize,
    direction: Direction,
    n: Dimension,
) -> Result<ProofTree, DeriveError> {
    h.check_dimension(n)?;
    index_in_range("i", i, n)?;
    if pi.degree() != n.get() {
        return Err(SyntaxError::DimensionMismatch {
            expected: n.get(),
            found: pi.degree(),
        }
        .into());
    }
    let nn = n.get();
    let expanded = Formula::q(
        h.clone(),
        n.indices().map(|k| Formula::Const(pi.apply(k))).collect(),
    );
    let permuted = h.permuted(pi);
    match direction {
        Direction::ToPermuted => {
            let goal = Sequent::new(single(expanded.clone()), i, single(permuted));
            by_rule(
                RuleTag::QL,
                RuleParams::with_formula(i, expanded),
                goal,
                n,
                |jdx, premise| {
                    // H, e_π(j)^(ji) ⊢_j H^((ji)∘π)
                    let j = jdx + 1;
                    let c = Permutation::swap(j, i, nn).apply(pi.apply(j));
                    if c == j {
                        let sigma = Permutation::swap(j, i, nn).after(pi);
                        weaken_to(
                            perm_axiom(h, &Permutation::identity(n), &sigma, j, n)?,
                            premise,
                        )
                    } else {
                        weaken_to(const_left(c, j, n)?, premise)
                    }
                },
            )
        }
        Direction::FromPermuted => {
            let goal = Sequent::new(single(permuted), i, single(expanded.clone()));
            by_rule(
                RuleTag::QR,
                RuleParams::with_formula(i, expanded),
                goal,
                n,
                |jdx, premise| {
                    // H^σ, H ⊢_j e_σ(j) with σ = (ji)∘π
                    let j = jdx + 1;
                    let sigma = Permutation::swap(j, i, nn).after(pi);
                    let r = sigma.apply(j);
                    if r == j {
                        return weaken_to(constant(j, n)?, premise);
                    }
                    let h_sigma = h.permuted(&sigma);
                    let clash_goal = Sequent::new(
                        Context::from_formulas([h_sigma.clone(), h.clone()]),
                        j,
                        Context::new(),
                    );
                    let clash = by_rule(
                        RuleTag::Neg1,
                        RuleParams::neg(r, j, j, h_sigma),
                        clash_goal,
                        n,
                        |_, _| perm_axiom(h, &Permutation::swap(r, j, nn), &sigma, r, n),
                    )?;
                    weaken_to(clash, premise)
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    const N2: Dimension = Dimension::TWO;

    fn f(text: &str) -> Formula {
        parse_formula(text, N2).unwrap()
    }

    fn n3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn identity_on_constant() {
        let t = derive(
            Scheme::Identity {
                formula: f("e1"),
                i: 1,
            },
            N2,
        )
        .unwrap();
        assert_eq!(t.conclusion, parse_sequent("e1 |-1 e1", N2).unwrap());
        assert_eq!(t.rule, RuleTag::WeakL);
        assert_eq!(t.premises[0].rule, RuleTag::Const);

        let t = derive(
            Scheme::Identity {
                formula: f("e1"),
                i: 2,
            },
            N2,
        )
        .unwrap();
        assert_eq!(t.conclusion, parse_sequent("e1 |-2 e1", N2).unwrap());
    }

    #[test]
    fn const_left_example() {
        let t = derive(Scheme::ConstLeft { k: 2, i: 1 }, N2).unwrap();
        assert_eq!(t.conclusion, parse_sequent("e2 |-1", N2).unwrap());
        assert_eq!(t.size(), 2);
        assert!(matches!(
            derive(Scheme::ConstLeft { k: 1, i: 1 }, N2),
            Err(DeriveError::Precondition(_))
        ));
    }

    #[test]
    fn perm_axiom_on_variable_is_single_id() {
        let id = Permutation::identity(N2);
        let t = derive(
            Scheme::PermAxiom {
                formula: f("X"),
                pi: id.clone(),
                rho: id,
                i: 1,
            },
            N2,
        )
        .unwrap();
        assert_eq!(t.rule, RuleTag::Id);
        assert!(t.premises.is_empty());
    }

    #[test]
    fn perm_axiom_rejects_bad_decorations() {
        let swap = Permutation::from_images(&[2, 1]).unwrap();
        let err = derive(
            Scheme::PermAxiom {
                formula: f("X"),
                pi: Permutation::identity(N2),
                rho: swap,
                i: 1,
            },
            N2,
        );
        assert!(matches!(err, Err(DeriveError::Precondition(_))));
    }

    #[test]
    fn identity_on_compounds() {
        for text in ["q(X, Y, e2)", "q(q(X, e1, Y), Y^[2,1], q(e2, X, X))"] {
            for i in 1..=2 {
                let formula = f(text);
                let t = derive(
                    Scheme::Identity {
                        formula: formula.clone(),
                        i,
                    },
                    N2,
                )
                .unwrap();
                assert_eq!(t.conclusion.left.as_slice(), std::slice::from_ref(&formula));
                assert_eq!(t.conclusion.right.as_slice(), [formula]);
            }
        }
        let g = parse_formula("q(X^[3,1,2], e1, Y, q(Y, e3, e2, X))", n3()).unwrap();
        for i in 1..=3 {
            derive(
                Scheme::Identity {
                    formula: g.clone(),
                    i,
                },
                n3(),
            )
            .unwrap();
        }
    }

    #[test]
    fn pair_clash_shapes() {
        let g = parse_formula("q(X, Y, e3, Z^[2,3,1])", n3()).unwrap();
        for j in 1..=3 {
            for i in 1..=3 {
                for k in (1..=3).filter(|&k| k != i) {
                    let t = derive(
                        Scheme::PairClash {
                            formula: g.clone(),
                            i,
                            j,
                            k,
                        },
                        n3(),
                    )
                    .unwrap();
                    assert_eq!(t.conclusion.turnstile, j);
                    assert!(t.conclusion.right.is_empty());
                }
            }
        }
    }

    #[test]
    fn perm_eq_both_directions() {
        let n = n3();
        let h = parse_formula("q(X, Y^[2,1,3], e1, X)", n).unwrap();
        for pi in Permutation::all(n) {
            for i in 1..=3 {
                for direction in [Direction::ToPermuted, Direction::FromPermuted] {
                    derive(
                        Scheme::PermEq {
                            formula: h.clone(),
                            pi: pi.clone(),
                            i,
                            direction,
                        },
                        n,
                    )
                    .unwrap();
                }
            }
        }
    }

    #[test]
    fn weak_plus_adds_in_order() {
        let base = constant(1, N2).unwrap();
        let t = derive(
            Scheme::WeakPlus {
                base: Box::new(base),
                left: vec![f("X"), f("Y")],
                right: vec![f("e2")],
            },
            N2,
        )
        .unwrap();
        assert_eq!(t.conclusion, parse_sequent("X, Y |-1 e1, e2", N2).unwrap());
        assert_eq!(t.size(), 4);
    }
}

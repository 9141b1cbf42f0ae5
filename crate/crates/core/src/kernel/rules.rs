use super::{RuleError, RuleParams, RuleTag};
use crate::syntax::{Context, Dimension, Formula, Sequent};

/// The premises the rule scheme demands for `conclusion`, in the fixed order
/// used by the checker and the serializer (`j = 1..n` for `qL`/`qR`, skipping
/// the conclusion dimension for `Neg3`).
pub fn instantiate(
    rule: RuleTag,
    params: &RuleParams,
    conclusion: &Sequent,
    n: Dimension,
) -> Result<Vec<Sequent>, RuleError> {
    conclusion.check_dimension(n)?;
    let p = Params::validate(rule, params, n)?;
    let nn = n.get();
    let turnstile = conclusion.turnstile;
    let left = &conclusion.left;
    let right = &conclusion.right;

    match rule {
        RuleTag::Const => {
            let i = p.dim("i", turnstile)?;
            if !left.is_empty() || right.as_slice() != [Formula::Const(i)] {
                return Err(shape(rule, format!("expected `|-{i} e{i}`")));
            }
            Ok(vec![])
        }
        RuleTag::Id => {
            let i = p.dim("i", turnstile)?;
            let (pi, rho) = (p.perm("pi")?, p.perm("rho")?);
            let (l, r) = match (left.as_slice(), right.as_slice()) {
                ([l], [r]) => (l, r),
                _ => {
                    return Err(shape(
                        rule,
                        "expected exactly one formula on each side".into(),
                    ))
                }
            };
            let (Formula::Var { name: ln, dec: ld }, Formula::Var { name: rn, dec: rd }) = (l, r)
            else {
                return Err(shape(rule, "both sides must be decorated variables".into()));
            };
            if ln != rn || ld != pi || rd != rho {
                return Err(shape(
                    rule,
                    format!("expected `{ln}^{pi} |-{i} {ln}^{rho}`, found `{conclusion}`"),
                ));
            }
            if pi.preimage(i) != rho.preimage(i) {
                return Err(RuleError::SideCondition(format!(
                    "{pi}^-1({i}) = {} differs from {rho}^-1({i}) = {}",
                    pi.preimage(i),
                    rho.preimage(i)
                )));
            }
            Ok(vec![])
        }
        RuleTag::Sym => {
            let j = p.dim("j", turnstile)?;
            let i = p.index("i")?;
            Ok(vec![Sequent::new(
                left.exchanged(i, j, nn),
                i,
                right.exchanged(i, j, nn),
            )])
        }
        RuleTag::Neg1 | RuleTag::Neg2 => {
            let j = p.dim("j", turnstile)?;
            let (i, k) = (p.index("i")?, p.index("k")?);
            let principal = p.formula()?;
            let gamma = take(left, principal, "left")?;
            let base = if rule == RuleTag::Neg1 {
                if i == k {
                    return Err(RuleError::SideCondition(format!(
                        "Neg1 needs i != k, found i = k = {i}"
                    )));
                }
                principal.exchanged(j, k, nn)
            } else {
                if j == k {
                    return Err(RuleError::SideCondition(format!(
                        "Neg2 needs j != k, found j = k = {j}"
                    )));
                }
                principal.exchanged(i, k, nn)
            };
            Ok(vec![Sequent::new(
                gamma.exchanged(i, j, nn),
                i,
                right.exchanged(i, j, nn).with(base),
            )])
        }
        RuleTag::Neg3 => {
            let j = p.dim("j", turnstile)?;
            let principal = p.formula()?;
            let delta = take(right, principal, "right")?;
            Ok(n.indices()
                .filter(|&i| i != j)
                .map(|i| {
                    Sequent::new(
                        left.exchanged(i, j, nn).with(principal.clone()),
                        i,
                        delta.exchanged(i, j, nn),
                    )
                })
                .collect())
        }
        RuleTag::QL | RuleTag::QR => {
            let i = p.dim("i", turnstile)?;
            let principal = p.formula()?;
            let Formula::Q { test, branches } = principal else {
                return Err(RuleError::NotCompound(principal.clone()));
            };
            let on_left = rule == RuleTag::QL;
            let (gamma, delta) = if on_left {
                (take(left, principal, "left")?, right.clone())
            } else {
                (left.clone(), take(right, principal, "right")?)
            };
            Ok(n.indices()
                .map(|j| {
                    let branch = branches[j - 1].exchanged(j, i, nn);
                    let mut l = gamma.exchanged(j, i, nn).with((**test).clone());
                    let mut r = delta.exchanged(j, i, nn);
                    if on_left {
                        l.insert(branch);
                    } else {
                        r.insert(branch);
                    }
                    Sequent::new(l, j, r)
                })
                .collect())
        }
        RuleTag::Cut => {
            let i = p.dim("i", turnstile)?;
            let cut = p.formula()?;
            Ok(vec![
                Sequent::new(left.with(cut.clone()), i, right.clone()),
                Sequent::new(left.clone(), i, right.with(cut.clone())),
            ])
        }
        RuleTag::WeakL => {
            let i = p.dim("i", turnstile)?;
            let gamma = take(left, p.formula()?, "left")?;
            Ok(vec![Sequent::new(gamma, i, right.clone())])
        }
        RuleTag::WeakR => {
            let i = p.dim("i", turnstile)?;
            let delta = take(right, p.formula()?, "right")?;
            Ok(vec![Sequent::new(left.clone(), i, delta)])
        }
        RuleTag::ConL => {
            let i = p.dim("i", turnstile)?;
            let f = p.formula()?;
            take(left, f, "left")?;
            Ok(vec![Sequent::new(left.with(f.clone()), i, right.clone())])
        }
        RuleTag::ConR => {
            let i = p.dim("i", turnstile)?;
            let f = p.formula()?;
            take(right, f, "right")?;
            Ok(vec![Sequent::new(left.clone(), i, right.with(f.clone()))])
        }
    }
}

fn shape(rule: RuleTag, detail: String) -> RuleError {
    RuleError::Shape { rule, detail }
}

fn take(ctx: &Context, f: &Formula, side: &'static str) -> Result<Context, RuleError> {
    ctx.without(f).ok_or_else(|| RuleError::PrincipalAbsent {
        formula: f.clone(),
        side,
    })
}

/// Parameters checked for presence, range and dimension.
struct Params<'a> {
    rule: RuleTag,
    raw: &'a RuleParams,
}

impl<'a> Params<'a> {
    fn validate(rule: RuleTag, raw: &'a RuleParams, n: Dimension) -> Result<Self, RuleError> {
        let wanted = rule.param_names();
        for name in raw.present() {
            if !wanted.contains(&name) {
                return Err(RuleError::UnexpectedParam { rule, param: name });
            }
        }
        let present = raw.present();
        for name in wanted {
            if !present.contains(name) {
                return Err(RuleError::MissingParam { rule, param: name });
            }
        }
        for (param, value) in [("i", raw.i), ("j", raw.j), ("k", raw.k)] {
            if let Some(value) = value {
                if value == 0 || value > n.get() {
                    return Err(RuleError::IndexOutOfRange {
                        param,
                        value,
                        n: n.get(),
                    });
                }
            }
        }
        for perm in [&raw.pi, &raw.rho].into_iter().flatten() {
            if perm.degree() != n.get() {
                return Err(RuleError::Syntax(crate::SyntaxError::DimensionMismatch {
                    expected: n.get(),
                    found: perm.degree(),
                }));
            }
        }
        if let Some(f) = &raw.formula {
            f.check_dimension(n)?;
        }
        Ok(Params { rule, raw })
    }

    fn index(&self, name: &'static str) -> Result<usize, RuleError> {
        let value = match name {
            "i" => self.raw.i,
            "j" => self.raw.j,
            _ => self.raw.k,
        };
        value.ok_or(RuleError::MissingParam {
            rule: self.rule,
            param: name,
        })
    }

    /// An index parameter that must equal the conclusion turnstile.
    fn dim(&self, name: &'static str, turnstile: usize) -> Result<usize, RuleError> {
        let value = self.index(name)?;
        if value != turnstile {
            return Err(RuleError::TurnstileMismatch {
                param: name,
                value,
                turnstile,
            });
        }
        Ok(value)
    }

    fn perm(&self, name: &'static str) -> Result<&'a crate::Permutation, RuleError> {
        let value = if name == "pi" {
            &self.raw.pi
        } else {
            &self.raw.rho
        };
        value.as_ref().ok_or(RuleError::MissingParam {
            rule: self.rule,
            param: name,
        })
    }

    fn formula(&self) -> Result<&'a Formula, RuleError> {
        self.raw.formula.as_ref().ok_or(RuleError::MissingParam {
            rule: self.rule,
            param: "formula",
        })
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

    fn f(text: &str) -> Formula {
        parse_formula(text, N2).unwrap()
    }

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn show(seqs: Vec<Sequent>) -> Vec<String> {
        seqs.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn const_and_id_have_no_premises() {
        assert_eq!(
            instantiate(RuleTag::Const, &RuleParams::i(1), &s("|-1 e1"), N2).unwrap(),
            vec![]
        );
        let params = RuleParams::id(2, p(&[2, 1]), p(&[2, 1]));
        assert_eq!(
            instantiate(RuleTag::Id, &params, &s("X^[2,1] |-2 X^[2,1]"), N2).unwrap(),
            vec![]
        );
    }

    #[test]
    fn id_side_condition() {
        let params = RuleParams::id(1, p(&[1, 2]), p(&[2, 1]));
        assert!(matches!(
            instantiate(RuleTag::Id, &params, &s("X |-1 X^[2,1]"), N2),
            Err(RuleError::SideCondition(_))
        ));
        // decorations that disagree with the conclusion
        let params = RuleParams::id(1, p(&[1, 2]), p(&[1, 2]));
        assert!(matches!(
            instantiate(RuleTag::Id, &params, &s("X |-1 X^[2,1]"), N2),
            Err(RuleError::Shape { .. })
        ));
        // no side contexts on axioms
        assert!(instantiate(RuleTag::Id, &params, &s("X, Y |-1 X"), N2).is_err());
        assert!(instantiate(RuleTag::Const, &RuleParams::i(1), &s("X |-1 e1"), N2).is_err());
    }

    #[test]
    fn sym_example() {
        let got = instantiate(RuleTag::Sym, &RuleParams::sym(1, 2), &s("X |-2 X"), N2).unwrap();
        assert_eq!(show(got), ["X^[2,1] |-1 X^[2,1]"]);
    }

    #[test]
    fn neg1_builds_constant_refutation() {
        // e1 |-2 from |-1 e1, with k = j = 2
        let params = RuleParams::neg(1, 2, 2, f("e1"));
        let got = instantiate(RuleTag::Neg1, &params, &s("e1 |-2"), N2).unwrap();
        assert_eq!(show(got), ["|-1 e1"]);
        let bad = RuleParams::neg(1, 2, 1, f("e1"));
        assert!(matches!(
            instantiate(RuleTag::Neg1, &bad, &s("e1 |-2"), N2),
            Err(RuleError::SideCondition(_))
        ));
    }

    #[test]
    fn neg2_side_condition() {
        let bad = RuleParams::neg(1, 2, 2, f("X"));
        assert!(matches!(
            instantiate(RuleTag::Neg2, &bad, &s("X |-2"), N2),
            Err(RuleError::SideCondition(_))
        ));
        // Γ, F^(ik) |-j Δ with i=1, j=2, k=1: principal X is F^(11) = F
        let ok = RuleParams::neg(1, 2, 1, f("X"));
        let got = instantiate(RuleTag::Neg2, &ok, &s("Y, X |-2 Y"), N2).unwrap();
        assert_eq!(show(got), ["Y^[2,1] |-1 X, Y^[2,1]"]);
    }

    #[test]
    fn neg3_moves_principal_left() {
        let got = instantiate(
            RuleTag::Neg3,
            &RuleParams::neg3(1, f("X^[2,1]")),
            &s("|-1 X, X^[2,1]"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["X^[2,1] |-2 X^[2,1]"]);
        let three = Dimension::new(3).unwrap();
        let seq = parse_sequent("Y |-2 X", three).unwrap();
        let got = instantiate(
            RuleTag::Neg3,
            &RuleParams::neg3(2, parse_formula("X", three).unwrap()),
            &seq,
            three,
        )
        .unwrap();
        assert_eq!(show(got), ["X, Y^[2,1,3] |-1", "X, Y^[1,3,2] |-3"]);
    }

    #[test]
    fn ql_and_qr_premises() {
        let principal = f("q(X, e1, e2)");
        let got = instantiate(
            RuleTag::QL,
            &RuleParams::with_formula(1, principal.clone()),
            &s("q(X, e1, e2) |-1"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["e1, X |-1", "e1, X |-2"]);
        let got = instantiate(
            RuleTag::QR,
            &RuleParams::with_formula(1, principal),
            &s("|-1 q(X, e1, e2)"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["X |-1 e1", "X |-2 e1"]);
    }

    #[test]
    fn qr_matches_classical_simulation() {
        // |-1 q(X, Y, Z) from X |-1 Y and X |-2 Z^(12)
        let principal = f("q(X, Y, Z)");
        let got = instantiate(
            RuleTag::QR,
            &RuleParams::with_formula(1, principal),
            &s("|-1 q(X, Y, Z)"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["X |-1 Y", "X |-2 Z^[2,1]"]);
    }

    #[test]
    fn structural_rules() {
        let got = instantiate(
            RuleTag::WeakL,
            &RuleParams::with_formula(1, f("Y")),
            &s("X, Y |-1 X"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["X |-1 X"]);
        let got = instantiate(
            RuleTag::ConR,
            &RuleParams::with_formula(1, f("X")),
            &s("|-1 X"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["|-1 X, X"]);
        let got = instantiate(
            RuleTag::Cut,
            &RuleParams::with_formula(2, f("Y")),
            &s("X |-2"),
            N2,
        )
        .unwrap();
        assert_eq!(show(got), ["X, Y |-2", "X |-2 Y"]);
        assert!(matches!(
            instantiate(
                RuleTag::WeakR,
                &RuleParams::with_formula(1, f("Y")),
                &s("X |-1 X"),
                N2
            ),
            Err(RuleError::PrincipalAbsent { .. })
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            instantiate(
                RuleTag::Const,
                &RuleParams::with_formula(1, f("X")),
                &s("|-1 e1"),
                N2
            ),
            Err(RuleError::UnexpectedParam {
                param: "formula",
                ..
            })
        ));
        assert!(matches!(
            instantiate(RuleTag::Sym, &RuleParams::i(1), &s("X |-2 X"), N2),
            Err(RuleError::MissingParam { param: "j", .. })
        ));
        assert!(matches!(
            instantiate(RuleTag::Const, &RuleParams::i(3), &s("|-1 e1"), N2),
            Err(RuleError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            instantiate(RuleTag::Const, &RuleParams::i(2), &s("|-1 e1"), N2),
            Err(RuleError::TurnstileMismatch { .. })
        ));
        assert!(matches!(
            instantiate(
                RuleTag::QL,
                &RuleParams::with_formula(1, f("X")),
                &s("X |-1"),
                N2
            ),
            Err(RuleError::NotCompound(_))
        ));
    }
}

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Dimension, Permutation, SyntaxError};

/// A formula of the n-dimensional calculus.
///
/// The derived ordering is the canonical total order used for contexts:
/// constants first (by index), then variables (by name, then decoration),
/// then compounds (structurally).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// The constant `e_k`, 1-based.
    Const(usize),
    /// A decorated variable `X^π`.
    Var { name: Arc<str>, dec: Permutation },
    /// `q(test, branches[0], ..., branches[n-1])`.
    Q {
        test: Arc<Formula>,
        branches: Arc<[Formula]>,
    },
}

impl Formula {
    pub fn constant(k: usize) -> Formula {
        Formula::Const(k)
    }

    pub fn var(name: impl Into<Arc<str>>, dec: Permutation) -> Formula {
        Formula::Var {
            name: name.into(),
            dec,
        }
    }

    /// A variable carrying the identity decoration.
    pub fn plain(name: impl Into<Arc<str>>, n: Dimension) -> Formula {
        Formula::var(name, Permutation::identity(n))
    }

    pub fn q(test: Formula, branches: Vec<Formula>) -> Formula {
        Formula::Q {
            test: Arc::new(test),
            branches: branches.into(),
        }
    }

    /// Checks that every constant index, decoration and `q` arity agrees with `n`.
    pub fn check_dimension(&self, n: Dimension) -> Result<(), SyntaxError> {
        let nn = n.get();
        match self {
            Formula::Const(k) => {
                if *k == 0 || *k > nn {
                    return Err(SyntaxError::ConstantOutOfRange { index: *k, n: nn });
                }
            }
            Formula::Var { dec, .. } => {
                if dec.degree() != nn {
                    return Err(SyntaxError::DimensionMismatch {
                        expected: nn,
                        found: dec.degree(),
                    });
                }
            }
            Formula::Q { test, branches } => {
                if branches.len() != nn {
                    return Err(SyntaxError::Arity {
                        expected: nn + 1,
                        found: branches.len() + 1,
                    });
                }
                test.check_dimension(n)?;
                for b in branches.iter() {
                    b.check_dimension(n)?;
                }
            }
        }
        Ok(())
    }

    /// The action `F^ρ`: decorations are post-composed with `ρ`, constants are
    /// renamed by `ρ`, and only the branches of a compound are permuted (the
    /// test is left untouched).
    pub fn act(&self, rho: &Permutation) -> Result<Formula, SyntaxError> {
        self.check_dimension(rho.dimension())?;
        Ok(self.permuted(rho))
    }

    pub(crate) fn permuted(&self, rho: &Permutation) -> Formula {
        match self {
            Formula::Const(k) => Formula::Const(rho.apply(*k)),
            Formula::Var { name, dec } => Formula::Var {
                name: name.clone(),
                dec: rho.after(dec),
            },
            Formula::Q { test, branches } => Formula::Q {
                test: test.clone(),
                branches: branches.iter().map(|b| b.permuted(rho)).collect(),
            },
        }
    }

    /// `F^(ij)`, with indices assumed in range.
    pub(crate) fn exchanged(&self, i: usize, j: usize, n: usize) -> Formula {
        if i == j {
            return self.clone();
        }
        self.permuted(&Permutation::swap(i, j, n))
    }

    /// Maximal nesting of compounds; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var { .. } => 0,
            Formula::Q { test, branches } => {
                1 + branches
                    .iter()
                    .map(Formula::depth)
                    .chain(std::iter::once(test.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Number of compound nodes.
    pub fn compound_count(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var { .. } => 0,
            Formula::Q { test, branches } => {
                1 + test.compound_count()
                    + branches.iter().map(Formula::compound_count).sum::<usize>()
            }
        }
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self, Formula::Q { .. })
    }

    pub fn collect_variables<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var { name, .. } => {
                out.insert(name);
            }
            Formula::Q { test, branches } => {
                test.collect_variables(out);
                for b in branches.iter() {
                    b.collect_variables(out);
                }
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        self.collect_variables(&mut vars);
        vars.into_iter().map(str::to_owned).collect()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(k) => write!(f, "e{k}"),
            Formula::Var { name, dec } if dec.is_identity() => write!(f, "{name}"),
            Formula::Var { name, dec } => write!(f, "{name}^{dec}"),
            Formula::Q { test, branches } => {
                write!(f, "q({test}")?;
                for b in branches.iter() {
                    write!(f, ", {b}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    #[test]
    fn act_examples() {
        let x = Formula::plain("X", dim(2));
        assert_eq!(x.act(&p(&[2, 1])).unwrap(), Formula::var("X", p(&[2, 1])));

        let swap23 = Permutation::exchange(2, 3, dim(3)).unwrap();
        assert_eq!(Formula::Const(2).act(&swap23).unwrap(), Formula::Const(3));

        let f = Formula::q(x.clone(), vec![Formula::Const(1), Formula::Const(2)]);
        let expected = Formula::q(x, vec![Formula::Const(2), Formula::Const(1)]);
        assert_eq!(f.act(&p(&[2, 1])).unwrap(), expected);
    }

    #[test]
    fn act_leaves_the_test_alone() {
        let test = Formula::var("Y", p(&[2, 1]));
        let f = Formula::q(
            test.clone(),
            vec![Formula::Const(1), Formula::plain("Z", dim(2))],
        );
        let Formula::Q { test: t, .. } = f.act(&p(&[2, 1])).unwrap() else {
            unreachable!()
        };
        assert_eq!(*t, test);
    }

    #[test]
    fn act_rejects_dimension_mismatch() {
        let x = Formula::plain("X", dim(2));
        assert!(x.act(&p(&[1, 2, 3])).is_err());
        assert!(Formula::Const(3).act(&p(&[2, 1])).is_err());
    }

    #[test]
    fn display_elides_identity() {
        assert_eq!(Formula::Const(1).to_string(), "e1");
        assert_eq!(Formula::var("X", p(&[2, 1])).to_string(), "X^[2,1]");
        assert_eq!(Formula::plain("X", dim(2)).to_string(), "X");
        let f = Formula::q(
            Formula::plain("X", dim(2)),
            vec![Formula::Const(2), Formula::Const(1)],
        );
        assert_eq!(f.to_string(), "q(X, e2, e1)");
    }

    #[test]
    fn canonical_order_constants_variables_compounds() {
        let mut v = [
            Formula::q(
                Formula::Const(1),
                vec![Formula::Const(1), Formula::Const(1)],
            ),
            Formula::var("X", p(&[2, 1])),
            Formula::Const(2),
            Formula::plain("X", dim(2)),
            Formula::plain("A", dim(2)),
            Formula::Const(1),
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["e1", "e2", "A", "X", "X^[2,1]", "q(e1, e1, e1)"]);
    }

    #[test]
    fn depth_and_count() {
        let x = Formula::plain("X", dim(2));
        assert_eq!(x.depth(), 0);
        let inner = Formula::q(x.clone(), vec![x.clone(), Formula::Const(1)]);
        let outer = Formula::q(x.clone(), vec![inner.clone(), inner]);
        assert_eq!(outer.depth(), 2);
        assert_eq!(outer.compound_count(), 3);
    }
}

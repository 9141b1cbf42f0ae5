use std::collections::BTreeSet;
use std::fmt;

use super::{Dimension, Formula, Permutation, SyntaxError};

/// A finite multiset of formulas, kept as a sorted list so that equality is
/// multiset equality.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(Vec<Formula>);

impl Context {
    pub fn new() -> Self {
        Context(Vec::new())
    }

    pub fn from_formulas(formulas: impl IntoIterator<Item = Formula>) -> Self {
        let mut v: Vec<Formula> = formulas.into_iter().collect();
        v.sort();
        Context(v)
    }

    pub fn insert(&mut self, f: Formula) {
        let at = self.0.partition_point(|g| g <= &f);
        self.0.insert(at, f);
    }

    pub fn with(&self, f: Formula) -> Context {
        let mut c = self.clone();
        c.insert(f);
        c
    }

    /// Removes one occurrence of `f`, if present.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.0.binary_search(f) {
            Ok(at) => {
                self.0.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    pub fn without(&self, f: &Formula) -> Option<Context> {
        let mut c = self.clone();
        c.remove_one(f).then_some(c)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.0.iter().filter(|g| *g == f).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    /// Element-wise action; multiplicities are preserved.
    pub fn act(&self, rho: &Permutation) -> Result<Context, SyntaxError> {
        for f in &self.0 {
            f.check_dimension(rho.dimension())?;
        }
        Ok(self.permuted(rho))
    }

    pub(crate) fn permuted(&self, rho: &Permutation) -> Context {
        Context::from_formulas(self.0.iter().map(|f| f.permuted(rho)))
    }

    pub(crate) fn exchanged(&self, i: usize, j: usize, n: usize) -> Context {
        if i == j {
            return self.clone();
        }
        let rho = Permutation::swap(i, j, n);
        self.permuted(&rho)
    }

    /// `self - other` as multisets, or `None` when `other` is not contained in `self`.
    pub fn difference(&self, other: &Context) -> Option<Context> {
        let mut rest = self.clone();
        for f in other.iter() {
            if !rest.remove_one(f) {
                return None;
            }
        }
        Some(rest)
    }

    pub fn check_dimension(&self, n: Dimension) -> Result<(), SyntaxError> {
        self.0.iter().try_for_each(|f| f.check_dimension(n))
    }
}

impl FromIterator<Formula> for Context {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Context::from_formulas(iter)
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, g) in self.0.iter().enumerate() {
            if p > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// `left ⊢_turnstile right`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub left: Context,
    pub turnstile: usize,
    pub right: Context,
}

impl Sequent {
    pub fn new(left: Context, turnstile: usize, right: Context) -> Self {
        Sequent {
            left,
            turnstile,
            right,
        }
    }

    pub fn check_dimension(&self, n: Dimension) -> Result<(), SyntaxError> {
        if self.turnstile == 0 || self.turnstile > n.get() {
            return Err(SyntaxError::IndexOutOfRange {
                index: self.turnstile,
                n: n.get(),
            });
        }
        self.left.check_dimension(n)?;
        self.right.check_dimension(n)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.left.iter().chain(self.right.iter())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for f in self.formulas() {
            f.collect_variables(&mut vars);
        }
        vars.into_iter().map(str::to_owned).collect()
    }

    pub fn compound_count(&self) -> usize {
        self.formulas().map(Formula::compound_count).sum()
    }

    pub fn is_atomic(&self) -> bool {
        self.formulas().all(Formula::is_atomic)
    }

    pub fn size(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.left.is_empty() {
            write!(f, "{} ", self.left)?;
        }
        write!(f, "|-{}", self.turnstile)?;
        if !self.right.is_empty() {
            write!(f, " {}", self.right)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
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

    fn swap12() -> Permutation {
        Permutation::from_images(&[2, 1]).unwrap()
    }

    #[test]
    fn act_ctx_examples() {
        assert!(Context::new().act(&swap12()).unwrap().is_empty());

        let ones = Context::from_formulas([Formula::Const(1), Formula::Const(1)]);
        assert_eq!(
            ones.act(&swap12()).unwrap(),
            Context::from_formulas([Formula::Const(2), Formula::Const(2)])
        );

        let mixed = Context::from_formulas([Formula::plain("X", dim(2)), Formula::Const(2)]);
        assert_eq!(
            mixed.act(&swap12()).unwrap(),
            Context::from_formulas([Formula::var("X", swap12()), Formula::Const(1)])
        );
    }

    #[test]
    fn insertion_keeps_canonical_order_and_multiplicity() {
        let x = Formula::plain("X", dim(2));
        let mut c = Context::from_formulas([Formula::Const(2), x.clone()]);
        c.insert(Formula::Const(1));
        c.insert(x.clone());
        assert_eq!(c.to_string(), "e1, e2, X, X");
        assert_eq!(c.count(&x), 2);
        assert!(c.remove_one(&x));
        assert_eq!(c.count(&x), 1);
        assert!(!c.remove_one(&Formula::Const(3)));
    }

    #[test]
    fn multiset_equality_ignores_input_order() {
        let a = Context::from_formulas([Formula::Const(1), Formula::Const(2), Formula::Const(1)]);
        let b = Context::from_formulas([Formula::Const(2), Formula::Const(1), Formula::Const(1)]);
        assert_eq!(a, b);
        let d = a
            .difference(&Context::from_formulas([Formula::Const(1)]))
            .unwrap();
        assert_eq!(
            d,
            Context::from_formulas([Formula::Const(1), Formula::Const(2)])
        );
        assert!(d
            .difference(&Context::from_formulas([Formula::Const(3)]))
            .is_none());
    }

    #[test]
    fn sequent_display() {
        let x = Formula::var("X", swap12());
        let s = Sequent::new(
            Context::from_formulas([x.clone()]),
            2,
            Context::from_formulas([x]),
        );
        assert_eq!(s.to_string(), "X^[2,1] |-2 X^[2,1]");
        let empty_left = Sequent::new(
            Context::new(),
            1,
            Context::from_formulas([Formula::Const(1)]),
        );
        assert_eq!(empty_left.to_string(), "|-1 e1");
        let empty_right = Sequent::new(
            Context::from_formulas([Formula::Const(1)]),
            2,
            Context::new(),
        );
        assert_eq!(empty_right.to_string(), "e1 |-2");
    }
}

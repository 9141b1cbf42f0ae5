//! n-valued evaluation and the i-logical-consequence oracle.
//!
//! Everything here is brute force over environments restricted to the
//! variables that actually occur; evaluation only ever looks at those.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Dimension, Formula, Sequent};

/// Upper bound on the number of environments a single query may enumerate.
pub const ENV_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is unbound in the environment")]
    Unbound(String),
    #[error("{n}^{vars} environments exceed the enumeration limit")]
    TooManyEnvironments { n: usize, vars: usize },
    #[error("value {value} for `{name}` is outside 1..={n}")]
    ValueOutOfRange {
        name: String,
        value: usize,
        n: usize,
    },
    #[error("malformed environment `{0}`, expected e.g. `X=2,Y=1`")]
    Malformed(String),
}

/// Assignment of dimension indices to variable names.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Environment(BTreeMap<String, usize>);

impl Environment {
    pub fn new() -> Self {
        Environment(BTreeMap::new())
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: usize) {
        self.0.insert(name.into(), value);
    }

    pub fn with(mut self, name: impl Into<String>, value: usize) -> Self {
        self.set(name, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses the `X=2,Y=1` text form, checking values against `n`.
    pub fn parse(text: &str, n: Dimension) -> Result<Self, SemanticsError> {
        let env: Environment = text.parse()?;
        for (name, value) in env.iter() {
            if value == 0 || value > n.get() {
                return Err(SemanticsError::ValueOutOfRange {
                    name: name.to_owned(),
                    value,
                    n: n.get(),
                });
            }
        }
        Ok(env)
    }
}

impl FromStr for Environment {
    type Err = SemanticsError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut env = Environment::new();
        if text.trim().is_empty() {
            return Ok(env);
        }
        for part in text.split(',') {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| SemanticsError::Malformed(text.to_owned()))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(SemanticsError::Malformed(text.to_owned()));
            }
            let value = value
                .trim()
                .parse()
                .map_err(|_| SemanticsError::Malformed(text.to_owned()))?;
            env.set(name, value);
        }
        Ok(env)
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, (name, value)) in self.0.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Environment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Environment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Result of a consequence query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The lexicographically first falsifying environment.
    Invalid(Environment),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

pub fn eval(f: &Formula, v: &Environment) -> Result<usize, SemanticsError> {
    match f {
        Formula::Const(k) => Ok(*k),
        Formula::Var { name, dec } => {
            let x = v
                .get(name)
                .ok_or_else(|| SemanticsError::Unbound(name.to_string()))?;
            Ok(dec.apply(x))
        }
        Formula::Q { test, branches } => {
            let selected = eval(test, v)?;
            eval(&branches[selected - 1], v)
        }
    }
}

/// True when `v` makes every left formula evaluate to `i` and no right formula
/// evaluate to `i`.
pub fn falsifies(s: &Sequent, v: &Environment) -> Result<bool, SemanticsError> {
    let i = s.turnstile;
    for f in s.left.iter() {
        if eval(f, v)? != i {
            return Ok(false);
        }
    }
    for f in s.right.iter() {
        if eval(f, v)? == i {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographic stream of all environments over `vars`.
#[derive(Clone, Debug)]
pub struct Environments {
    names: Vec<String>,
    values: Vec<usize>,
    n: usize,
    done: bool,
}

impl Iterator for Environments {
    type Item = Environment;

    fn next(&mut self) -> Option<Environment> {
        if self.done {
            return None;
        }
        let env = self
            .names
            .iter()
            .cloned()
            .zip(self.values.iter().copied())
            .collect();
        // odometer, last variable fastest
        self.done = true;
        for p in (0..self.values.len()).rev() {
            if self.values[p] < self.n {
                self.values[p] += 1;
                self.done = false;
                break;
            }
            self.values[p] = 1;
        }
        Some(env)
    }
}

pub fn envs<S: AsRef<str>>(
    vars: impl IntoIterator<Item = S>,
    n: Dimension,
) -> Result<Environments, SemanticsError> {
    let names: Vec<String> = vars
        .into_iter()
        .map(|s| s.as_ref().to_owned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let count = (n.get() as u64).checked_pow(names.len() as u32);
    if count.is_none_or(|c| c > ENV_LIMIT) {
        return Err(SemanticsError::TooManyEnvironments {
            n: n.get(),
            vars: names.len(),
        });
    }
    Ok(Environments {
        values: vec![1; names.len()],
        names,
        n: n.get(),
        done: false,
    })
}

/// Decides `left ⊨_i right` by enumeration.
pub fn holds(s: &Sequent, n: Dimension) -> Result<Verdict, SemanticsError> {
    for v in envs(s.variables(), n)? {
        if falsifies(s, &v)? {
            return Ok(Verdict::Invalid(v));
        }
    }
    Ok(Verdict::Valid)
}

/// Semantic equality of two formulas over the union of their variables.
pub fn equivalent(f: &Formula, g: &Formula, n: Dimension) -> Result<bool, SemanticsError> {
    let mut vars = f.variables();
    vars.extend(g.variables());
    for v in envs(vars, n)? {
        if eval(f, &v)? != eval(g, &v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    const N2: Dimension = Dimension::TWO;

    fn f(text: &str) -> Formula {
        parse_formula(text, N2).unwrap()
    }

    fn f3(text: &str) -> Formula {
        parse_formula(text, Dimension::new(3).unwrap()).unwrap()
    }

    fn env(text: &str) -> Environment {
        text.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&f("X^[2,1]"), &env("X=1")).unwrap(), 2);
        assert_eq!(
            eval(&f3("q(e2, e3, e1, e2)"), &Environment::new()).unwrap(),
            1
        );
        assert_eq!(eval(&f("q(X, e2, e1)"), &env("X=2")).unwrap(), 1);
    }

    #[test]
    fn eval_reports_unbound() {
        assert_eq!(
            eval(&f("q(X, Y, e1)"), &env("X=1")),
            Err(SemanticsError::Unbound("Y".into()))
        );
        // the unselected branch is never looked at
        assert_eq!(eval(&f("q(X, e1, Y)"), &env("X=1")), Ok(1));
    }

    #[test]
    fn holds_examples() {
        let s = |t: &str| parse_sequent(t, N2).unwrap();
        assert_eq!(holds(&s("X |-1 X"), N2).unwrap(), Verdict::Valid);
        assert_eq!(holds(&s("|-1 X, X^[2,1]"), N2).unwrap(), Verdict::Valid);
        assert_eq!(
            holds(&s("|-1 X, Y^[2,1]"), N2).unwrap(),
            Verdict::Invalid(env("X=2,Y=1"))
        );
        assert_eq!(
            holds(&s("|-1"), N2).unwrap(),
            Verdict::Invalid(Environment::new())
        );
        assert_eq!(holds(&s("e2 |-1"), N2).unwrap(), Verdict::Valid);
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&f("q(X, Y, e1)"), &f("q(X, Y, e1)"), N2).unwrap());
        assert!(equivalent(&f("q(X, e1, e2)"), &f("X"), N2).unwrap());
        assert!(equivalent(&f("X^[2,1]"), &f("q(X, e2, e1)"), N2).unwrap());
        assert!(!equivalent(&f("X"), &f("Y"), N2).unwrap());
    }

    #[test]
    fn env_enumeration() {
        let all: Vec<_> = envs(Vec::<String>::new(), N2).unwrap().collect();
        assert_eq!(all, vec![Environment::new()]);

        let three = Dimension::new(3).unwrap();
        let all: Vec<_> = envs(["X"], three).unwrap().collect();
        assert_eq!(all, vec![env("X=1"), env("X=2"), env("X=3")]);

        let all: Vec<_> = envs(["Y", "X"], N2).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], env("X=1,Y=1"));
        assert_eq!(all[1], env("X=1,Y=2"));
        assert_eq!(all[3], env("X=2,Y=2"));
    }

    #[test]
    fn env_guard() {
        let names: Vec<String> = (0..30).map(|k| format!("V{k}")).collect();
        assert!(matches!(
            envs(&names, N2),
            Err(SemanticsError::TooManyEnvironments { .. })
        ));
    }

    #[test]
    fn env_text_round_trip() {
        let e = Environment::parse("Y=1, X=2", N2).unwrap();
        assert_eq!(e.to_string(), "X=2,Y=1");
        assert!(Environment::parse("X=3", N2).is_err());
        assert!(Environment::parse("X", N2).is_err());
        assert!(Environment::parse("=1", N2).is_err());
        assert!(Environment::parse("", N2).unwrap().is_empty());
    }
}

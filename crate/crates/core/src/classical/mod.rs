//! Classical propositional logic and its translations to and from the
//! two-dimensional calculus.
//!
//! A two-valued environment is read classically by identifying value 1 with
//! true and value 2 with false; [`truth`] and [`value`] are the only places
//! where that identification is made.

mod proof;
mod roundtrip;
mod simulation;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semantics::{envs, Environment, SemanticsError};
use crate::syntax::{Dimension, Formula};

pub use proof::{pc_check, PcProof, PcRule, PcSequent, PcViolation};
pub use roundtrip::{
    check_npc_formula, check_pc_formula, npc_atoms, npc_corpus, pc_corpus, roundtrip_reports,
    RoundTripReport,
};
pub use simulation::{simulations, Simulated, Simulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("classical translation needs n = 2, found {0}")]
    NotTwoDimensional(usize),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Classical formulas over `0, 1, ~, &, |`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PcFormula {
    Zero,
    One,
    Var(String),
    Not(Box<PcFormula>),
    And(Box<PcFormula>, Box<PcFormula>),
    Or(Box<PcFormula>, Box<PcFormula>),
}

impl PcFormula {
    pub fn var(name: impl Into<String>) -> Self {
        PcFormula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: PcFormula) -> Self {
        PcFormula::Not(Box::new(p))
    }

    pub fn and(p: PcFormula, q: PcFormula) -> Self {
        PcFormula::And(Box::new(p), Box::new(q))
    }

    pub fn or(p: PcFormula, q: PcFormula) -> Self {
        PcFormula::Or(Box::new(p), Box::new(q))
    }

    pub fn depth(&self) -> usize {
        match self {
            PcFormula::Zero | PcFormula::One | PcFormula::Var(_) => 0,
            PcFormula::Not(p) => 1 + p.depth(),
            PcFormula::And(p, q) | PcFormula::Or(p, q) => 1 + p.depth().max(q.depth()),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            PcFormula::Zero | PcFormula::One => {}
            PcFormula::Var(x) => {
                out.insert(x.clone());
            }
            PcFormula::Not(p) => p.collect_variables(out),
            PcFormula::And(p, q) | PcFormula::Or(p, q) => {
                p.collect_variables(out);
                q.collect_variables(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            PcFormula::Or(..) => 1,
            PcFormula::And(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for PcFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrapped = |f: &mut fmt::Formatter<'_>, p: &PcFormula, min: u8| {
            if p.precedence() < min {
                write!(f, "({p})")
            } else {
                write!(f, "{p}")
            }
        };
        match self {
            PcFormula::Zero => write!(f, "0"),
            PcFormula::One => write!(f, "1"),
            PcFormula::Var(x) => write!(f, "{x}"),
            PcFormula::Not(p) => {
                write!(f, "~")?;
                wrapped(f, p, 3)
            }
            // both connectives associate to the left
            PcFormula::And(p, q) => {
                wrapped(f, p, 2)?;
                write!(f, " & ")?;
                wrapped(f, q, 3)
            }
            PcFormula::Or(p, q) => {
                wrapped(f, p, 1)?;
                write!(f, " | ")?;
                wrapped(f, q, 2)
            }
        }
    }
}

impl FromStr for PcFormula {
    type Err = ClassicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pc(s)
    }
}

/// Parses `0 | 1 | IDENT | ~P | P & Q | P | Q` with `~` binding tightest and
/// `|` loosest; binary connectives associate to the left. Identifiers of the
/// form `e<digits>` are reserved for the constants of the n-dimensional
/// calculus and rejected.
pub fn parse_pc(text: &str) -> Result<PcFormula, ClassicalError> {
    let mut p = PcParser { text, pos: 0 };
    let f = p.or()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct PcParser<'a> {
    text: &'a str,
    pos: usize,
}

impl PcParser<'_> {
    fn error(&self, message: &str) -> ClassicalError {
        ClassicalError::Parse {
            pos: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<PcFormula, ClassicalError> {
        let mut acc = self.and()?;
        while self.eat('|') {
            acc = PcFormula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<PcFormula, ClassicalError> {
        let mut acc = self.unary()?;
        while self.eat('&') {
            acc = PcFormula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PcFormula, ClassicalError> {
        if self.eat('~') {
            return Ok(PcFormula::not(self.unary()?));
        }
        if self.eat('(') {
            let f = self.or()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(f);
        }
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(PcFormula::Zero)
            }
            Some('1') => {
                self.pos += 1;
                Ok(PcFormula::One)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if name.len() > 1
                    && name.starts_with('e')
                    && name[1..].bytes().all(|b| b.is_ascii_digit())
                {
                    self.pos = start;
                    return Err(self.error("identifiers `e<digits>` are reserved for constants"));
                }
                Ok(PcFormula::var(name))
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

/// Classical reading of a two-valued value: 1 is true, 2 is false.
pub fn truth(value: usize) -> bool {
    value == 1
}

/// Inverse of [`truth`].
pub fn value(b: bool) -> usize {
    if b {
        1
    } else {
        2
    }
}

/// Classical evaluation under a two-valued environment read through [`truth`].
pub fn pc_eval(p: &PcFormula, v: &Environment) -> Result<bool, SemanticsError> {
    Ok(match p {
        PcFormula::Zero => false,
        PcFormula::One => true,
        PcFormula::Var(x) => truth(v.get(x).ok_or_else(|| SemanticsError::Unbound(x.clone()))?),
        PcFormula::Not(p) => !pc_eval(p, v)?,
        PcFormula::And(p, q) => pc_eval(p, v)? && pc_eval(q, v)?,
        PcFormula::Or(p, q) => pc_eval(p, v)? || pc_eval(q, v)?,
    })
}

/// `P°`.
pub fn to_2pc(p: &PcFormula) -> Formula {
    let n = Dimension::TWO;
    match p {
        PcFormula::Zero => Formula::Const(2),
        PcFormula::One => Formula::Const(1),
        PcFormula::Var(x) => Formula::plain(x.clone(), n),
        PcFormula::Not(p) => to_2pc(p).exchanged(1, 2, 2),
        PcFormula::And(p, q) => Formula::q(to_2pc(p), vec![to_2pc(q), Formula::Const(2)]),
        PcFormula::Or(p, q) => Formula::q(to_2pc(p), vec![Formula::Const(1), to_2pc(q)]),
    }
}

/// `F•`, defined for formulas of the two-dimensional calculus.
pub fn to_pc(f: &Formula) -> Result<PcFormula, ClassicalError> {
    Ok(match f {
        Formula::Const(1) => PcFormula::One,
        Formula::Const(2) => PcFormula::Zero,
        Formula::Const(k) => return Err(ClassicalError::NotTwoDimensional(*k)),
        Formula::Var { name, dec } => {
            if dec.degree() != 2 {
                return Err(ClassicalError::NotTwoDimensional(dec.degree()));
            }
            if dec.is_identity() {
                PcFormula::var(name.as_ref())
            } else {
                PcFormula::not(PcFormula::var(name.as_ref()))
            }
        }
        Formula::Q { test, branches } => {
            if branches.len() != 2 {
                return Err(ClassicalError::NotTwoDimensional(branches.len()));
            }
            let t = to_pc(test)?;
            PcFormula::or(
                PcFormula::and(t.clone(), to_pc(&branches[0])?),
                PcFormula::and(PcFormula::not(t), to_pc(&branches[1])?),
            )
        }
    })
}

/// Truth-table validity of `Γ ⊢ Δ`: `None` when valid, otherwise the first
/// falsifying environment (values read through [`truth`]).
pub fn pc_counterexample(s: &PcSequent) -> Result<Option<Environment>, ClassicalError> {
    let vars: BTreeSet<String> = s
        .left
        .iter()
        .chain(&s.right)
        .flat_map(PcFormula::variables)
        .collect();
    for v in envs(vars, Dimension::TWO)? {
        let mut falsified = true;
        for p in &s.left {
            falsified &= pc_eval(p, &v)?;
        }
        for p in &s.right {
            falsified &= !pc_eval(p, &v)?;
        }
        if falsified {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn pc_valid(s: &PcSequent) -> Result<bool, ClassicalError> {
    Ok(pc_counterexample(s)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn pc(text: &str) -> PcFormula {
        text.parse().unwrap()
    }

    fn npc(text: &str) -> Formula {
        parse_formula(text, Dimension::TWO).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(
            pc("X & Y | ~X & Z"),
            PcFormula::or(pc("X & Y"), pc("~X & Z"))
        );
        assert_eq!(
            pc("~~X"),
            PcFormula::not(PcFormula::not(PcFormula::var("X")))
        );
        for text in [
            "X & Y | ~X & Z",
            "~(X | Y) & 1",
            "X & (Y & Z)",
            "(X | Y) | 0",
            "X | (Y | Z)",
            "~~X",
        ] {
            let p = pc(text);
            assert_eq!(pc(&p.to_string()), p, "{text} -> {p}");
        }
        assert_eq!(pc("(X | Y) | 0").to_string(), "X | Y | 0");
        assert!(parse_pc("X &").is_err());
        assert!(parse_pc("e1 | X").is_err());
        assert!(parse_pc("(X").is_err());
    }

    #[test]
    fn eval_examples() {
        let env: Environment = "X=1".parse().unwrap();
        assert!(pc_eval(&PcFormula::One, &Environment::new()).unwrap());
        assert!(!pc_eval(&pc("X & ~X"), &env).unwrap());
        for x in 1..=2 {
            let env = Environment::new().with("X", x);
            assert!(pc_eval(&pc("X | ~X"), &env).unwrap());
        }
    }

    #[test]
    fn translation_examples() {
        assert_eq!(to_2pc(&pc("~X")), npc("X^[2,1]"));
        assert_eq!(to_2pc(&pc("X & Y")), npc("q(X, Y, e2)"));
        assert_eq!(to_2pc(&pc("X | Y")), npc("q(X, e1, Y)"));
        assert_eq!(to_2pc(&PcFormula::Zero), npc("e2"));
        assert_eq!(to_pc(&npc("q(X, Y, Z)")).unwrap(), pc("X & Y | ~X & Z"));
        assert_eq!(to_pc(&npc("X^[2,1]")).unwrap(), pc("~X"));
        assert_eq!(to_pc(&npc("e1")).unwrap(), PcFormula::One);
        let three = parse_formula("X^[2,3,1]", Dimension::new(3).unwrap()).unwrap();
        assert!(matches!(
            to_pc(&three),
            Err(ClassicalError::NotTwoDimensional(3))
        ));
    }

    #[test]
    fn value_identification_round_trips() {
        for b in [true, false] {
            assert_eq!(truth(value(b)), b);
        }
        assert_eq!(value(true), 1);
        assert_eq!(value(false), 2);
    }

    #[test]
    fn translation_depth_bound() {
        for text in ["X", "~X", "X & ~Y", "~(X | Y & 0)"] {
            let p = pc(text);
            assert!(to_2pc(&p).depth() <= 2 * p.depth() + 1);
        }
    }
}

//! Proof objects and the trusted rule checker.
//!
//! A [`ProofTree`] records, at every node, the rule, its parameters and the
//! conclusion. The checker never trusts the recorded premises: it recomputes
//! the premises demanded by the rule scheme from `(rule, params, conclusion)`
//! and compares them with the conclusions of the children.

mod check;
pub mod derive;
mod format;
mod rules;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{Formula, Permutation, Sequent, SyntaxError};

pub use check::{check, check_assuming, RuleViolation};
pub use format::{from_json, from_json_value, to_json, to_json_value, FormatError, FORMAT_VERSION};
pub use rules::instantiate;

/// The thirteen rules of the calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTag {
    Const,
    Id,
    Sym,
    Neg1,
    Neg2,
    Neg3,
    QL,
    QR,
    Cut,
    WeakL,
    WeakR,
    ConL,
    ConR,
}

impl RuleTag {
    pub const ALL: [RuleTag; 13] = [
        RuleTag::Const,
        RuleTag::Id,
        RuleTag::Sym,
        RuleTag::Neg1,
        RuleTag::Neg2,
        RuleTag::Neg3,
        RuleTag::QL,
        RuleTag::QR,
        RuleTag::Cut,
        RuleTag::WeakL,
        RuleTag::WeakR,
        RuleTag::ConL,
        RuleTag::ConR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Const => "Const",
            RuleTag::Id => "Id",
            RuleTag::Sym => "Sym",
            RuleTag::Neg1 => "Neg1",
            RuleTag::Neg2 => "Neg2",
            RuleTag::Neg3 => "Neg3",
            RuleTag::QL => "qL",
            RuleTag::QR => "qR",
            RuleTag::Cut => "Cut",
            RuleTag::WeakL => "WeakL",
            RuleTag::WeakR => "WeakR",
            RuleTag::ConL => "ConL",
            RuleTag::ConR => "ConR",
        }
    }

    /// Parameter names the rule requires; no others are accepted.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            RuleTag::Const => &["i"],
            RuleTag::Id => &["i", "pi", "rho"],
            RuleTag::Sym => &["i", "j"],
            RuleTag::Neg1 | RuleTag::Neg2 => &["i", "j", "k", "formula"],
            RuleTag::Neg3 => &["j", "formula"],
            RuleTag::QL
            | RuleTag::QR
            | RuleTag::Cut
            | RuleTag::WeakL
            | RuleTag::WeakR
            | RuleTag::ConL
            | RuleTag::ConR => &["i", "formula"],
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| s.to_owned())
    }
}

/// Rule parameters. Which fields must be present depends on the rule, see
/// [`RuleTag::param_names`].
///
/// Dimensions are 1-based. For every rule the principal `formula` is the one
/// that occurs in the conclusion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RuleParams {
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub pi: Option<Permutation>,
    pub rho: Option<Permutation>,
    pub formula: Option<Formula>,
}

impl RuleParams {
    pub fn i(i: usize) -> Self {
        RuleParams {
            i: Some(i),
            ..Default::default()
        }
    }

    pub fn with_formula(i: usize, formula: Formula) -> Self {
        RuleParams {
            i: Some(i),
            formula: Some(formula),
            ..Default::default()
        }
    }

    pub fn id(i: usize, pi: Permutation, rho: Permutation) -> Self {
        RuleParams {
            i: Some(i),
            pi: Some(pi),
            rho: Some(rho),
            ..Default::default()
        }
    }

    pub fn sym(i: usize, j: usize) -> Self {
        RuleParams {
            i: Some(i),
            j: Some(j),
            ..Default::default()
        }
    }

    pub fn neg(i: usize, j: usize, k: usize, formula: Formula) -> Self {
        RuleParams {
            i: Some(i),
            j: Some(j),
            k: Some(k),
            formula: Some(formula),
            ..Default::default()
        }
    }

    pub fn neg3(j: usize, formula: Formula) -> Self {
        RuleParams {
            j: Some(j),
            formula: Some(formula),
            ..Default::default()
        }
    }

    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.i.is_some() {
            out.push("i");
        }
        if self.j.is_some() {
            out.push("j");
        }
        if self.k.is_some() {
            out.push("k");
        }
        if self.pi.is_some() {
            out.push("pi");
        }
        if self.rho.is_some() {
            out.push("rho");
        }
        if self.formula.is_some() {
            out.push("formula");
        }
        out
    }
}

/// A closed derivation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub rule: RuleTag,
    pub params: RuleParams,
    pub conclusion: Sequent,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(
        rule: RuleTag,
        params: RuleParams,
        conclusion: Sequent,
        premises: Vec<ProofTree>,
    ) -> Self {
        ProofTree {
            rule,
            params,
            conclusion,
            premises,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(ProofTree::height)
            .max()
            .unwrap_or(0)
    }

    /// Pre-order walk over all nodes.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.premises.iter().rev());
        }
        out
    }

    pub fn uses(&self, rule: RuleTag) -> bool {
        self.rule == rule || self.premises.iter().any(|p| p.uses(rule))
    }
}

/// A derivation that may contain open assumptions as leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Derivation {
    Assumption(Sequent),
    Step {
        rule: RuleTag,
        params: RuleParams,
        conclusion: Sequent,
        premises: Vec<Derivation>,
    },
}

impl Derivation {
    pub fn step(
        rule: RuleTag,
        params: RuleParams,
        conclusion: Sequent,
        premises: Vec<Derivation>,
    ) -> Self {
        Derivation::Step {
            rule,
            params,
            conclusion,
            premises,
        }
    }

    pub fn conclusion(&self) -> &Sequent {
        match self {
            Derivation::Assumption(s) => s,
            Derivation::Step { conclusion, .. } => conclusion,
        }
    }
}

impl From<ProofTree> for Derivation {
    fn from(t: ProofTree) -> Self {
        Derivation::Step {
            rule: t.rule,
            params: t.params,
            conclusion: t.conclusion,
            premises: t.premises.into_iter().map(Derivation::from).collect(),
        }
    }
}

/// Why a single rule instance is not acceptable.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} requires parameter `{param}`")]
    MissingParam { rule: RuleTag, param: &'static str },
    #[error("{rule} does not take parameter `{param}`")]
    UnexpectedParam { rule: RuleTag, param: &'static str },
    #[error("parameter `{param}` = {value} is outside 1..={n}")]
    IndexOutOfRange {
        param: &'static str,
        value: usize,
        n: usize,
    },
    #[error("parameter `{param}` = {value} does not match the conclusion turnstile {turnstile}")]
    TurnstileMismatch {
        param: &'static str,
        value: usize,
        turnstile: usize,
    },
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("principal formula {formula} does not occur on the {side} of the conclusion")]
    PrincipalAbsent {
        formula: Formula,
        side: &'static str,
    },
    #[error("principal formula {0} is not a q-compound")]
    NotCompound(Formula),
    #[error("conclusion does not have the shape of {rule}: {detail}")]
    Shape { rule: RuleTag, detail: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{rule} has {expected} premises, found {found}")]
    PremiseCount {
        rule: RuleTag,
        expected: usize,
        found: usize,
    },
    #[error("premise {index} should conclude `{expected}`, found `{found}`")]
    PremiseMismatch {
        index: usize,
        expected: Sequent,
        found: Sequent,
    },
    #[error("open assumption `{0}` is not among the hypotheses")]
    UndischargedAssumption(Sequent),
}

//! Root-first, cut-free decision procedure.
//!
//! `qL` and `qR` are invertible (semantically and as rules), so the search
//! saturates with them in a fixed order and never backtracks. What remains
//! are atomic sequents, which are settled by a small constraint analysis: each
//! valid atomic sequent falls under one of five closure cases, each with a
//! fixed proof shape; an invalid one yields an explicit environment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::derive::{by_rule, const_left, constant, weaken_to, DeriveError};
use crate::kernel::{check, instantiate, ProofTree, RuleError, RuleParams, RuleTag, RuleViolation};
use crate::semantics::{falsifies, Environment, SemanticsError};
use crate::syntax::{Context, Dimension, Formula, Permutation, Sequent, SyntaxError};

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveResult {
    Proved(ProofTree),
    Refuted(Environment),
    /// Search stopped after this many steps.
    OutOfBudget(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("sequent `{0}` contains no q-compound")]
    NothingToDecompose(Sequent),
    #[error("sequent `{0}` is not atomic")]
    NotAtomic(Sequent),
    #[error("closure case {case} does not apply to `{sequent}`")]
    CaseMismatch { case: ClosureCase, sequent: Sequent },
    #[error(transparent)]
    Rule(#[from] RuleError),
    /// Proof synthesis produced something the kernel rejects. Never expected.
    #[error("internal synthesis failure: {0}")]
    Synthesis(String),
}

impl From<RuleViolation> for ProverError {
    fn from(v: RuleViolation) -> Self {
        ProverError::Synthesis(v.to_string())
    }
}

impl From<DeriveError> for ProverError {
    fn from(e: DeriveError) -> Self {
        ProverError::Synthesis(e.to_string())
    }
}

impl From<SemanticsError> for ProverError {
    fn from(e: SemanticsError) -> Self {
        ProverError::Synthesis(e.to_string())
    }
}

/// Why a valid atomic sequent `Γ ⊢_i Δ` is valid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosureCase {
    /// `e_k` on the left with `k != i`.
    C1,
    /// `e_i` on the right.
    C2,
    /// `X^π, X^σ` on the left force different values of `X`.
    C3,
    /// `X^π` left and `X^ρ` right with `π⁻¹(i) = ρ⁻¹(i)`.
    C4,
    /// `X` absent from the left while its right occurrences rule out every value.
    C5,
}

impl ClosureCase {
    pub const ALL: [ClosureCase; 5] = [
        ClosureCase::C1,
        ClosureCase::C2,
        ClosureCase::C3,
        ClosureCase::C4,
        ClosureCase::C5,
    ];
}

impl fmt::Display for ClosureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomicVerdict {
    Valid(ClosureCase),
    Invalid(Environment),
}

/// Per-variable picture of an atomic sequent at its turnstile.
struct Occurrences<'a> {
    /// Left decorations, in canonical order.
    left: BTreeMap<&'a str, Vec<&'a Permutation>>,
    right: BTreeMap<&'a str, Vec<&'a Permutation>>,
}

impl<'a> Occurrences<'a> {
    fn of(s: &'a Sequent) -> Self {
        let collect = |ctx: &'a Context| {
            let mut map: BTreeMap<&str, Vec<&Permutation>> = BTreeMap::new();
            for f in ctx.iter() {
                if let Formula::Var { name, dec } = f {
                    map.entry(name.as_ref()).or_default().push(dec);
                }
            }
            map
        };
        Occurrences {
            left: collect(&s.left),
            right: collect(&s.right),
        }
    }

    fn covered(&self, name: &str, i: usize) -> BTreeSet<usize> {
        self.right
            .get(name)
            .map(|decs| decs.iter().map(|d| d.preimage(i)).collect())
            .unwrap_or_default()
    }
}

struct Analysis<'a> {
    case: Option<ClosureCase>,
    /// For C3: the two clashing left decorations; for C4: the left and right
    /// decorations; for C5: unused.
    pair: Option<(&'a str, &'a Permutation, &'a Permutation)>,
    /// For C1: the offending constant.
    constant: Option<usize>,
    /// For C5: the covered variable.
    covered: Option<&'a str>,
}

/// The first applicable case in priority order, with the data its proof needs.
fn analyse(s: &Sequent, n: Dimension) -> Analysis<'_> {
    ClosureCase::ALL
        .into_iter()
        .map(|case| forced(s, case, n))
        .find(|a| a.case.is_some())
        .unwrap_or(Analysis {
            case: None,
            pair: None,
            constant: None,
            covered: None,
        })
}

fn require_atomic(s: &Sequent) -> Result<(), ProverError> {
    if s.is_atomic() {
        Ok(())
    } else {
        Err(ProverError::NotAtomic(s.clone()))
    }
}

/// Classifies an atomic sequent. An invalid one gets the environment that
/// meets every left constraint and dodges every right atom, choosing the
/// smallest free value for unconstrained variables.
pub fn atomic_verdict(s: &Sequent, n: Dimension) -> Result<AtomicVerdict, ProverError> {
    s.check_dimension(n)?;
    require_atomic(s)?;
    let a = analyse(s, n);
    if let Some(case) = a.case {
        return Ok(AtomicVerdict::Valid(case));
    }
    Ok(AtomicVerdict::Invalid(countermodel(s, n)))
}

fn countermodel(s: &Sequent, n: Dimension) -> Environment {
    let i = s.turnstile;
    let occ = Occurrences::of(s);
    let mut env = Environment::new();
    for name in s.variables() {
        let value = match occ.left.get(name.as_str()) {
            Some(decs) => decs[0].preimage(i),
            None => {
                let covered = occ.covered(&name, i);
                n.indices().find(|v| !covered.contains(v)).unwrap_or(1)
            }
        };
        env.set(name, value);
    }
    env
}

/// Builds the proof of a valid atomic sequent for the given case, re-checked
/// by the kernel before it is returned.
pub fn close_atomic(
    s: &Sequent,
    case: ClosureCase,
    n: Dimension,
) -> Result<ProofTree, ProverError> {
    s.check_dimension(n)?;
    require_atomic(s)?;
    let tree = build_closure(s, case, n)?;
    check(&tree, n)?;
    Ok(tree)
}

fn build_closure(s: &Sequent, case: ClosureCase, n: Dimension) -> Result<ProofTree, ProverError> {
    let i = s.turnstile;
    let a = forced(s, case, n);
    if a.case.is_none() {
        return Err(ProverError::CaseMismatch {
            case,
            sequent: s.clone(),
        });
    }
    let tree = match case {
        ClosureCase::C1 => weaken_to(const_left(a.constant.expect("C1 records k"), i, n)?, s)?,
        ClosureCase::C2 => weaken_to(constant(i, n)?, s)?,
        ClosureCase::C3 => {
            let (name, pi, sigma) = a.pair.expect("C3 records a pair");
            let c = sigma.apply(pi.preimage(i));
            let left_formula = Formula::var(name, pi.clone());
            let clashing = Formula::var(name, sigma.clone());
            let goal = Sequent::new(
                Context::from_formulas([left_formula, clashing.clone()]),
                i,
                Context::new(),
            );
            let core = by_rule(
                RuleTag::Neg1,
                RuleParams::neg(i, i, c, clashing),
                goal,
                n,
                |_, premise| {
                    let (Formula::Var { dec: l, .. }, Formula::Var { dec: r, .. }) =
                        (&premise.left.as_slice()[0], &premise.right.as_slice()[0])
                    else {
                        unreachable!("Neg1 premise of a variable clash")
                    };
                    Ok(ProofTree::new(
                        RuleTag::Id,
                        RuleParams::id(i, l.clone(), r.clone()),
                        premise.clone(),
                        vec![],
                    ))
                },
            )?;
            weaken_to(core, s)?
        }
        ClosureCase::C4 => {
            let (name, pi, rho) = a.pair.expect("C4 records a pair");
            let axiom = ProofTree::new(
                RuleTag::Id,
                RuleParams::id(i, pi.clone(), rho.clone()),
                Sequent::new(
                    Context::from_formulas([Formula::var(name, pi.clone())]),
                    i,
                    Context::from_formulas([Formula::var(name, rho.clone())]),
                ),
                vec![],
            );
            weaken_to(axiom, s)?
        }
        ClosureCase::C5 => {
            let name = a.covered.expect("C5 records a variable");
            let principal = s
                .right
                .iter()
                .rfind(|f| matches!(f, Formula::Var { name: x, .. } if &**x == name))
                .expect("covered variable occurs on the right")
                .clone();
            by_rule(
                RuleTag::Neg3,
                RuleParams::neg3(i, principal),
                s.clone(),
                n,
                |_, premise| match analyse(premise, n).case {
                    Some(c) => build_closure(premise, c, n)
                        .map_err(|e| DeriveError::Precondition(e.to_string())),
                    None => Err(DeriveError::Precondition(format!(
                        "premise `{premise}` is not valid"
                    ))),
                },
            )?
        }
    };
    Ok(tree)
}

/// Runs the analysis for one specific case only.
fn forced(s: &Sequent, case: ClosureCase, n: Dimension) -> Analysis<'_> {
    let i = s.turnstile;
    let mut out = Analysis {
        case: None,
        pair: None,
        constant: None,
        covered: None,
    };
    let occ = Occurrences::of(s);
    match case {
        ClosureCase::C1 => {
            out.constant = s.left.iter().find_map(|f| match f {
                Formula::Const(k) if *k != i => Some(*k),
                _ => None,
            });
            out.case = out.constant.map(|_| case);
        }
        ClosureCase::C2 => {
            out.case = s.right.contains(&Formula::Const(i)).then_some(case);
        }
        ClosureCase::C3 => {
            out.pair = occ.left.iter().find_map(|(name, decs)| {
                let first = decs[0];
                decs.iter()
                    .find(|d| d.preimage(i) != first.preimage(i))
                    .map(|other| (*name, first, *other))
            });
            out.case = out.pair.map(|_| case);
        }
        ClosureCase::C4 => {
            out.pair = occ.left.iter().find_map(|(name, decs)| {
                let rs = occ.right.get(name)?;
                decs.iter().find_map(|l| {
                    rs.iter()
                        .find(|r| r.preimage(i) == l.preimage(i))
                        .map(|r| (*name, *l, *r))
                })
            });
            out.case = out.pair.map(|_| case);
        }
        ClosureCase::C5 => {
            out.covered = occ
                .right
                .keys()
                .find(|name| !occ.left.contains_key(*name) && occ.covered(name, i).len() == n.get())
                .copied();
            out.case = out.covered.map(|_| case);
        }
    }
    out
}

/// One saturation step: the leftmost compound, left context before right.
pub fn decompose(
    s: &Sequent,
    n: Dimension,
) -> Result<(RuleTag, RuleParams, Vec<Sequent>), ProverError> {
    s.check_dimension(n)?;
    let i = s.turnstile;
    let (rule, principal) = if let Some(f) = s.left.iter().find(|f| !f.is_atomic()) {
        (RuleTag::QL, f)
    } else if let Some(f) = s.right.iter().find(|f| !f.is_atomic()) {
        (RuleTag::QR, f)
    } else {
        return Err(ProverError::NothingToDecompose(s.clone()));
    };
    let params = RuleParams::with_formula(i, principal.clone());
    let premises = instantiate(rule, &params, s, n)?;
    Ok((rule, params, premises))
}

enum Outcome {
    Proved(ProofTree),
    Refuted(Environment),
}

struct Search {
    n: Dimension,
    budget: u64,
    steps: u64,
}

struct Exhausted;

impl Search {
    fn run(&mut self, s: &Sequent) -> Result<Result<Outcome, Exhausted>, ProverError> {
        if self.steps >= self.budget {
            return Ok(Err(Exhausted));
        }
        self.steps += 1;
        if s.is_atomic() {
            let a = analyse(s, self.n);
            return Ok(Ok(match a.case {
                Some(case) => Outcome::Proved(build_closure(s, case, self.n)?),
                None => Outcome::Refuted(countermodel(s, self.n)),
            }));
        }
        let (rule, params, premises) = decompose(s, self.n)?;
        let mut children = Vec::with_capacity(premises.len());
        for premise in &premises {
            match self.run(premise)? {
                Err(Exhausted) => return Ok(Err(Exhausted)),
                Ok(Outcome::Refuted(env)) => return Ok(Ok(Outcome::Refuted(env))),
                Ok(Outcome::Proved(t)) => children.push(t),
            }
        }
        Ok(Ok(Outcome::Proved(ProofTree::new(
            rule,
            params,
            s.clone(),
            children,
        ))))
    }
}

/// Decides `s`: a kernel-checked cut-free proof, a falsifying environment over
/// the variables of `s`, or a report that the step budget ran out.
pub fn prove(s: &Sequent, n: Dimension, budget: u64) -> Result<ProveResult, ProverError> {
    if budget == 0 {
        return Err(ProverError::ZeroBudget);
    }
    s.check_dimension(n)?;
    let mut search = Search {
        n,
        budget,
        steps: 0,
    };
    match search.run(s)? {
        Err(Exhausted) => Ok(ProveResult::OutOfBudget(search.steps)),
        Ok(Outcome::Proved(tree)) => {
            check(&tree, n)?;
            if tree.uses(RuleTag::Cut) {
                return Err(ProverError::Synthesis("emitted proof contains Cut".into()));
            }
            Ok(ProveResult::Proved(tree))
        }
        Ok(Outcome::Refuted(mut env)) => {
            // variables that vanished from the failing branch are irrelevant
            for name in s.variables() {
                if env.get(&name).is_none() {
                    env.set(name, 1);
                }
            }
            let witness = env;
            if !falsifies(s, &witness)? {
                return Err(ProverError::Synthesis(format!(
                    "witness {witness} does not falsify `{s}`"
                )));
            }
            Ok(ProveResult::Refuted(witness))
        }
    }
}

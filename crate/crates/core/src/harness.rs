//! Completeness harness: deterministic formula pools, exhaustive and sampled
//! sequent families, and the prover/kernel/oracle agreement matrix.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kernel::{check, RuleTag};
use crate::prover::{prove, ProveResult, ProverError};
use crate::semantics::{falsifies, holds, SemanticsError};
use crate::syntax::{Context, Dimension, Formula, Permutation, Sequent, SyntaxError};

pub const DEFAULT_SEED: u64 = 0x6e70_6321;

/// Variable names used by generated formulas: `X, Y, Z, W, V, U`.
pub const VARIABLES: [&str; 6] = ["X", "Y", "Z", "W", "V", "U"];

/// Every constant and every decorated variable over the first `vars` names.
pub fn atoms(n: Dimension, vars: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = n.indices().map(Formula::Const).collect();
    for name in &VARIABLES[..vars.min(VARIABLES.len())] {
        out.extend(
            Permutation::all(n)
                .into_iter()
                .map(|p| Formula::var(*name, p)),
        );
    }
    out
}

/// A random formula of depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, n: Dimension, vars: usize, depth: usize) -> Formula {
    let atoms = atoms(n, vars);
    random_from(rng, &atoms, n, depth)
}

fn random_from(rng: &mut impl Rng, atoms: &[Formula], n: Dimension, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return atoms.choose(rng).expect("non-empty atoms").clone();
    }
    let test = random_from(rng, atoms, n, depth - 1);
    let branches = (0..n.get())
        .map(|_| random_from(rng, atoms, n, depth - 1))
        .collect();
    Formula::q(test, branches)
}

/// A random sequent with at most `max_size` formulas of depth at most
/// `depth` and a random turnstile.
pub fn random_sequent(
    rng: &mut impl Rng,
    n: Dimension,
    vars: usize,
    depth: usize,
    max_size: usize,
) -> Sequent {
    let atoms = atoms(n, vars);
    let size = rng.gen_range(0..=max_size);
    let left_len = rng.gen_range(0..=size);
    let mut side = |len: usize| {
        Context::from_formulas(
            (0..len)
                .map(|_| random_from(rng, &atoms, n, depth))
                .collect::<Vec<_>>(),
        )
    };
    let left = side(left_len);
    let right = side(size - left_len);
    Sequent::new(left, rng.gen_range(1..=n.get()), right)
}

/// A deterministic pool: every atom, then for each depth `d = 1, 2, ...`
/// `per_depth[d-1]` distinct seeded formulas of depth exactly `d`.
pub fn formula_pool(n: Dimension, vars: usize, per_depth: &[usize], seed: u64) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = atoms(n, vars);
    let mut seen: BTreeSet<Formula> = pool.iter().cloned().collect();
    for (d, &count) in per_depth.iter().enumerate() {
        let depth = d + 1;
        let below: Vec<Formula> = pool.iter().filter(|f| f.depth() < depth).cloned().collect();
        let top: Vec<Formula> = below
            .iter()
            .filter(|f| f.depth() == depth - 1)
            .cloned()
            .collect();
        let mut added = 0;
        // The attempt bound only matters when the request exceeds what exists.
        for _ in 0..count.saturating_mul(1000) {
            if added == count {
                break;
            }
            let forced = rng.gen_range(0..=n.get());
            let mut children: Vec<Formula> = (0..=n.get())
                .map(|slot| {
                    let from = if slot == forced { &top } else { &below };
                    from.choose(&mut rng).expect("non-empty pool").clone()
                })
                .collect();
            let test = children.remove(0);
            let f = Formula::q(test, children);
            if seen.insert(f.clone()) {
                pool.push(f);
                added += 1;
            }
        }
    }
    pool
}

/// All sequents over `pool` with `|left| + |right| ≤ max_size`, each side a
/// multiset, for every turnstile.
pub fn exhaustive_sequents(
    pool: &[Formula],
    n: Dimension,
    max_size: usize,
) -> impl Iterator<Item = Sequent> + '_ {
    n.indices().flat_map(move |i| {
        (0..=max_size).flat_map(move |total| {
            (0..=total).flat_map(move |a| {
                multisets(pool.len(), a).flat_map(move |l| {
                    multisets(pool.len(), total - a).map({
                        let l = l.clone();
                        move |r| {
                            let pick = |ix: &[usize]| {
                                Context::from_formulas(ix.iter().map(|&k| pool[k].clone()))
                            };
                            Sequent::new(pick(&l), i, pick(&r))
                        }
                    })
                })
            })
        })
    })
}

/// Number of sequents [`exhaustive_sequents`] yields.
pub fn exhaustive_count(pool: usize, n: Dimension, max_size: usize) -> u64 {
    let multichoose = |k: usize| -> u64 {
        // C(pool + k - 1, k)
        (0..k as u64).fold(1u64, |acc, t| acc * (pool as u64 + t) / (t + 1))
    };
    let per_turnstile: u64 = (0..=max_size)
        .flat_map(|total| (0..=total).map(move |a| (a, total - a)))
        .map(|(a, b)| multichoose(a) * multichoose(b))
        .sum();
    per_turnstile * n.get() as u64
}

/// Non-decreasing index tuples of length `k` over `0..m`.
fn multisets(m: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if k == 0 || m > 0 {
        Some(vec![0; k])
    } else {
        None
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut p = k;
        while p > 0 {
            p -= 1;
            if succ[p] + 1 < m {
                let v = succ[p] + 1;
                succ[p..].iter_mut().for_each(|x| *x = v);
                next = Some(succ);
                break;
            }
        }
        Some(current)
    })
}

/// Prover verdict against oracle verdict, plus the independent checks on
/// each prover output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AgreementMatrix {
    pub sequents: u64,
    pub proved_valid: u64,
    pub proved_invalid: u64,
    pub refuted_valid: u64,
    pub refuted_invalid: u64,
    pub out_of_budget: u64,
    /// Proofs rejected by the kernel.
    pub kernel_failures: u64,
    /// Proofs using `Cut`.
    pub cuts: u64,
    /// Refutations whose environment does not falsify the sequent.
    pub witness_failures: u64,
    pub first_discrepancy: Option<String>,
}

impl AgreementMatrix {
    pub fn agree(&self) -> bool {
        self.sequents > 0
            && self.proved_invalid == 0
            && self.refuted_valid == 0
            && self.out_of_budget == 0
            && self.kernel_failures == 0
            && self.cuts == 0
            && self.witness_failures == 0
    }

    fn discrepancy(&mut self, s: &Sequent, what: &str) {
        self.first_discrepancy
            .get_or_insert_with(|| format!("{s}: {what}"));
    }

    /// Runs the prover on `s` and records the outcome against `holds`.
    pub fn record(&mut self, s: &Sequent, n: Dimension, budget: u64) -> Result<(), HarnessError> {
        self.sequents += 1;
        let valid = holds(s, n)?.is_valid();
        match prove(s, n, budget)? {
            ProveResult::Proved(tree) => {
                if valid {
                    self.proved_valid += 1;
                } else {
                    self.proved_invalid += 1;
                    self.discrepancy(s, "proved but invalid");
                }
                if let Err(e) = check(&tree, n) {
                    self.kernel_failures += 1;
                    self.discrepancy(s, &format!("kernel rejected proof: {e}"));
                }
                if tree.uses(RuleTag::Cut) {
                    self.cuts += 1;
                    self.discrepancy(s, "proof uses Cut");
                }
            }
            ProveResult::Refuted(env) => {
                if valid {
                    self.refuted_valid += 1;
                    self.discrepancy(s, "refuted but valid");
                } else {
                    self.refuted_invalid += 1;
                }
                if !falsifies(s, &env)? {
                    self.witness_failures += 1;
                    self.discrepancy(s, &format!("witness {env} does not falsify"));
                }
            }
            ProveResult::OutOfBudget(steps) => {
                self.out_of_budget += 1;
                self.discrepancy(s, &format!("out of budget after {steps} steps"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AgreementMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sequents: {}", self.sequents)?;
        writeln!(
            f,
            "{:<16}{:>12}{:>12}",
            "prover \\ oracle", "valid", "invalid"
        )?;
        writeln!(
            f,
            "{:<16}{:>12}{:>12}",
            "proved", self.proved_valid, self.proved_invalid
        )?;
        writeln!(
            f,
            "{:<16}{:>12}{:>12}",
            "refuted", self.refuted_valid, self.refuted_invalid
        )?;
        writeln!(f, "{:<16}{:>12}", "out of budget", self.out_of_budget)?;
        writeln!(
            f,
            "kernel failures: {}, cuts: {}, witness failures: {}",
            self.kernel_failures, self.cuts, self.witness_failures
        )?;
        if let Some(d) = &self.first_discrepancy {
            writeln!(f, "first discrepancy: {d}")?;
        }
        write!(f, "agreement: {}", if self.agree() { "yes" } else { "NO" })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// Parameters of an exhaustive run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub n: usize,
    pub vars: usize,
    /// Seeded formulas of each depth `1, 2, ...` added to the atoms.
    pub per_depth: Vec<usize>,
    pub max_size: usize,
    pub seed: u64,
}

impl Default for Family {
    /// Two dimensions over `X, Y`: 6 atoms, 30 formulas of depth 1 and 12 of
    /// depth 2, all sequents with at most 3 formulas.
    fn default() -> Self {
        Family {
            n: 2,
            vars: 2,
            per_depth: vec![30, 12],
            max_size: 3,
            seed: DEFAULT_SEED,
        }
    }
}

/// Runs the prover against the oracle on every sequent of `family`.
pub fn run_family(family: &Family, budget: u64) -> Result<AgreementMatrix, HarnessError> {
    let n = Dimension::new(family.n)?;
    let pool = formula_pool(n, family.vars, &family.per_depth, family.seed);
    let mut m = AgreementMatrix::default();
    for s in exhaustive_sequents(&pool, n, family.max_size) {
        m.record(&s, n, budget)?;
    }
    Ok(m)
}

/// Runs the prover against the oracle on `count` seeded random sequents.
pub fn run_sampled(
    n: Dimension,
    vars: usize,
    depth: usize,
    max_size: usize,
    count: u64,
    seed: u64,
    budget: u64,
) -> Result<AgreementMatrix, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = AgreementMatrix::default();
    for _ in 0..count {
        let s = random_sequent(&mut rng, n, vars, depth, max_size);
        m.record(&s, n, budget)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::DEFAULT_BUDGET;

    #[test]
    fn multisets_enumerate_combinations_with_repetition() {
        assert_eq!(multisets(3, 2).count(), 6);
        assert_eq!(multisets(3, 0).count(), 1);
        assert_eq!(multisets(0, 1).count(), 0);
        assert_eq!(multisets(4, 3).count(), 20);
    }

    #[test]
    fn pool_is_deterministic_and_sized() {
        let n = Dimension::TWO;
        let a = formula_pool(n, 2, &[30, 12], DEFAULT_SEED);
        assert_eq!(a, formula_pool(n, 2, &[30, 12], DEFAULT_SEED));
        assert_eq!(a.len(), 48);
        assert_eq!(a.iter().filter(|f| f.depth() == 1).count(), 30);
        assert_eq!(a.iter().filter(|f| f.depth() == 2).count(), 12);
        assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 48);
    }

    #[test]
    fn exhaustive_count_matches_enumeration() {
        let pool = formula_pool(Dimension::TWO, 1, &[3], 1);
        let n = Dimension::TWO;
        assert_eq!(
            exhaustive_sequents(&pool, n, 3).count() as u64,
            exhaustive_count(pool.len(), n, 3)
        );
    }

    #[test]
    fn small_family_agrees() {
        let family = Family {
            n: 2,
            vars: 1,
            per_depth: vec![4],
            max_size: 2,
            seed: 7,
        };
        let m = run_family(&family, DEFAULT_BUDGET).unwrap();
        assert!(m.agree(), "{m}");
        assert!(m.proved_valid > 0 && m.refuted_invalid > 0);
    }

    #[test]
    fn sampled_three_dimensional_agrees() {
        let m = run_sampled(Dimension::new(3).unwrap(), 2, 2, 3, 200, 11, DEFAULT_BUDGET).unwrap();
        assert!(m.agree(), "{m}");
    }
}

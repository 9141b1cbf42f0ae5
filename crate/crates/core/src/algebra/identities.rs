use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{odometer, FiniteAlgebra};

/// Number of sampled cases when an identity has too many instances to
/// enumerate, and the exhaustive threshold.
pub const IDENTITY_SAMPLES: u64 = 100_000;
pub const IDENTITY_SEED: u64 = 0x6e42_4121;

/// Work limit for the exact `B4` check (products of row summaries).
const B4_LIMIT: u128 = 50_000_000;

/// Outcome of one identity on one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub instance: String,
    pub pass: bool,
    /// Instances examined.
    pub cases: u64,
    pub exhaustive: bool,
    pub witness: Option<String>,
}

/// Checks the nCH law and `B1`–`B4`, with `B3` instantiated at `q` and at
/// every constant. Identities with more than [`IDENTITY_SAMPLES`] instances are
/// sampled with a fixed seed, except `B4`, which is decided exactly by
/// summarising each row of the matrix.
pub fn check_identities(alg: &FiniteAlgebra) -> Vec<IdentityCheck> {
    let n = alg.n().get();
    let mut out = Vec::new();
    out.push(universal(alg, "nCH", n, |t| {
        (1..=n)
            .find(|&i| alg.q(alg.constant(i), t) != t[i - 1])
            .map(|i| {
                format!(
                    "q(e{i}, {t:?}) = {} != {}",
                    alg.q(alg.constant(i), t),
                    t[i - 1]
                )
            })
    }));
    out.push(universal(alg, "B1", 1, |t| {
        let r = alg.q(t[0], alg.constants());
        (r != t[0]).then(|| format!("q({}, e1..e{n}) = {r}", t[0]))
    }));
    out.push(universal(alg, "B2", 2, |t| {
        let r = alg.q(t[0], &vec![t[1]; n]);
        (r != t[1]).then(|| format!("q({}, {}, ..., {}) = {r}", t[0], t[1], t[1]))
    }));
    out.push(universal(alg, "B3[q]", 1 + n * (n + 1), |t| {
        let c = t[0];
        let rows: Vec<&[u32]> = t[1..].chunks(n + 1).collect();
        let lhs_args: Vec<u32> = rows.iter().map(|x| alg.q(x[0], &x[1..])).collect();
        let lhs = alg.q(c, &lhs_args);
        let cols: Vec<u32> = (0..=n)
            .map(|j| alg.q(c, &rows.iter().map(|x| x[j]).collect::<Vec<_>>()))
            .collect();
        let rhs = alg.q(cols[0], &cols[1..]);
        (lhs != rhs).then(|| format!("c = {c}, x = {rows:?}: {lhs} != {rhs}"))
    }));
    out.push(universal(alg, "B3[e]", 1, |t| {
        (1..=n).find_map(|k| {
            let e = alg.constant(k);
            let r = alg.q(t[0], &vec![e; n]);
            (r != e).then(|| format!("q({}, e{k}, ..., e{k}) = {r}", t[0]))
        })
    }));
    out.push(b4(alg));
    out
}

fn report(
    alg: &FiniteAlgebra,
    name: &str,
    cases: u64,
    exhaustive: bool,
    witness: Option<String>,
) -> IdentityCheck {
    IdentityCheck {
        name: name.to_owned(),
        instance: alg.name().to_owned(),
        pass: witness.is_none(),
        cases,
        exhaustive,
        witness,
    }
}

/// Checks `failure(t) == None` for all `t` in `A^arity`, or on a seeded sample.
fn universal(
    alg: &FiniteAlgebra,
    name: &str,
    arity: usize,
    failure: impl Fn(&[u32]) -> Option<String>,
) -> IdentityCheck {
    let size = alg.size() as u32;
    let total = (alg.size() as u128).checked_pow(arity as u32);
    match total {
        Some(total) if total <= IDENTITY_SAMPLES as u128 => {
            let mut t = vec![0u32; arity];
            let mut cases = 0;
            loop {
                cases += 1;
                if let Some(w) = failure(&t) {
                    return report(alg, name, cases, true, Some(w));
                }
                if !odometer(&mut t, size) {
                    return report(alg, name, cases, true, None);
                }
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED);
            let mut t = vec![0u32; arity];
            for cases in 1..=IDENTITY_SAMPLES {
                t.iter_mut().for_each(|x| *x = rng.gen_range(0..size));
                if let Some(w) = failure(&t) {
                    return report(alg, name, cases, false, Some(w));
                }
            }
            report(alg, name, IDENTITY_SAMPLES, false, None)
        }
    }
}

/// `q(c, q(c, x_1), ..., q(c, x_n)) = q(c, x_11, ..., x_nn)` over all `c` and
/// all `n × n` matrices.
///
/// For fixed `c` write `f(y) = q(c, y)`. Row `r` contributes to the two sides
/// only through the pair `(x_rr, f(x_r))`, so it suffices to range over the
/// sets `S_r` of such pairs.
fn b4(alg: &FiniteAlgebra) -> IdentityCheck {
    let n = alg.n().get();
    let size = alg.size() as u32;
    let row_count = (alg.size() as u128).pow(n as u32);
    // Σ_c (n |A|^n + ∏|S_r|) is bounded by |A| (n |A|^n + |A|^(2n))
    let bound = alg.size() as u128 * (n as u128 * row_count + row_count.saturating_mul(row_count));
    if bound > B4_LIMIT {
        return b4_sampled(alg);
    }
    let mut cases: u64 = 0;
    for c in alg.elements() {
        // per r: (diagonal entry, f(row)) -> a row realising it
        let mut summaries: Vec<BTreeMap<(u32, u32), Vec<u32>>> = vec![BTreeMap::new(); n];
        let mut row = vec![0u32; n];
        loop {
            let value = alg.q(c, &row);
            for (r, summary) in summaries.iter_mut().enumerate() {
                summary
                    .entry((row[r], value))
                    .or_insert_with(|| row.clone());
            }
            if !odometer(&mut row, size) {
                break;
            }
        }
        type Summary<'a> = (&'a (u32, u32), &'a Vec<u32>);
        let lists: Vec<Vec<Summary>> = summaries.iter().map(|s| s.iter().collect()).collect();
        let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
        let mut pick = vec![0usize; n];
        loop {
            cases += 1;
            let diag: Vec<u32> = (0..n).map(|r| lists[r][pick[r]].0 .0).collect();
            let inner: Vec<u32> = (0..n).map(|r| lists[r][pick[r]].0 .1).collect();
            let lhs = alg.q(c, &inner);
            let rhs = alg.q(c, &diag);
            if lhs != rhs {
                let matrix: Vec<&Vec<u32>> = (0..n).map(|r| lists[r][pick[r]].1).collect();
                return report(
                    alg,
                    "B4",
                    cases,
                    true,
                    Some(format!("c = {c}, x = {matrix:?}: {lhs} != {rhs}")),
                );
            }
            if !advance(&mut pick, &lens) {
                break;
            }
        }
    }
    report(alg, "B4", cases, true, None)
}

/// Mixed-radix counter, last position fastest.
fn advance(pick: &mut [usize], lens: &[usize]) -> bool {
    for r in (0..pick.len()).rev() {
        pick[r] += 1;
        if pick[r] < lens[r] {
            return true;
        }
        pick[r] = 0;
    }
    false
}

fn b4_sampled(alg: &FiniteAlgebra) -> IdentityCheck {
    let n = alg.n().get();
    universal(alg, "B4", 1 + n * n, |t| {
        let c = t[0];
        let rows: Vec<&[u32]> = t[1..].chunks(n).collect();
        let inner: Vec<u32> = rows.iter().map(|x| alg.q(c, x)).collect();
        let diag: Vec<u32> = (0..n).map(|r| rows[r][r]).collect();
        let (lhs, rhs) = (alg.q(c, &inner), alg.q(c, &diag));
        (lhs != rhs).then(|| format!("c = {c}, x = {rows:?}: {lhs} != {rhs}"))
    })
}

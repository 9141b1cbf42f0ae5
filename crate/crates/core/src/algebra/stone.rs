use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    checked_power, odometer, partition_algebra, q_nsubsets, AlgebraError, NSubset, CARRIER_LIMIT,
};
use crate::semantics::holds;
use crate::syntax::{Dimension, Formula, Sequent};

const ISO_EXHAUSTIVE: u128 = 1_000_000;
const ISO_SAMPLES: u64 = 100_000;
const ISO_SEED: u64 = 0x5701e;

/// Outcome of comparing `Par(X)` with the power `n^X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub points: usize,
    pub n: usize,
    pub size: usize,
    pub bijective: bool,
    pub preserves_constants: bool,
    pub preserves_q: bool,
    pub tuples_checked: u64,
    pub exhaustive: bool,
}

impl IsoReport {
    pub fn pass(&self) -> bool {
        self.bijective && self.preserves_constants && self.preserves_q
    }
}

/// A function `X → {1..n}` as its list of values.
type Point = Vec<usize>;

/// `q` of `n^X`: coordinatewise `q(e_i, x) = x_i`.
fn q_power(c: &Point, args: &[Point]) -> Point {
    (0..c.len()).map(|x| args[c[x] - 1][x]).collect()
}

/// Position of `f` among all functions in lexicographic order, first point
/// most significant.
fn power_index(f: &Point, n: usize) -> usize {
    f.iter().fold(0, |acc, v| acc * n + (v - 1))
}

/// The map `p ↦ (x ↦ k iff x ∈ p_k)`.
fn to_function(p: &NSubset) -> Point {
    (0..p.points())
        .map(|x| {
            (1..=p.dimension())
                .find(|&k| p.block(k) >> x & 1 == 1)
                .unwrap_or(0)
        })
        .collect()
}

/// Builds `Par(X)` for `|X| = points`, maps it onto `n^X` and checks that the
/// map is a bijection preserving `q` (computed on n-subsets) and every `e_k`.
pub fn iso_par_to_power(points: usize, n: Dimension) -> Result<IsoReport, AlgebraError> {
    let par = partition_algebra(points, n)?;
    let nn = n.get();
    let size = par.size();
    let subsets: Vec<NSubset> = (0..size)
        .map(|code| NSubset::from_partition_code(code, points, n))
        .collect::<Result<_, _>>()?;
    let image: Vec<Point> = subsets.iter().map(to_function).collect();

    let mut hit = vec![false; size];
    let mut bijective = true;
    for f in &image {
        if f.contains(&0) {
            bijective = false;
            continue;
        }
        let slot = &mut hit[power_index(f, nn)];
        bijective &= !*slot;
        *slot = true;
    }
    bijective &= hit.iter().all(|&h| h);

    let preserves_constants = (1..=nn).all(|k| {
        NSubset::constant(k, points, n)
            .map(|e| to_function(&e) == vec![k; points])
            .unwrap_or(false)
            && image[par.constant(k) as usize] == vec![k; points]
    });

    let mut preserves_q = true;
    let mut check = |tuple: &[u32]| -> Result<(), AlgebraError> {
        let ys: Vec<NSubset> = tuple[1..]
            .iter()
            .map(|&a| subsets[a as usize].clone())
            .collect();
        let lhs = to_function(&q_nsubsets(&subsets[tuple[0] as usize], &ys)?);
        let args: Vec<Point> = tuple[1..]
            .iter()
            .map(|&a| image[a as usize].clone())
            .collect();
        preserves_q &= lhs == q_power(&image[tuple[0] as usize], &args);
        Ok(())
    };
    let total = (size as u128).pow(nn as u32 + 1);
    let exhaustive = total <= ISO_EXHAUSTIVE;
    let mut tuple = vec![0u32; nn + 1];
    let tuples_checked = if exhaustive {
        loop {
            check(&tuple)?;
            if !odometer(&mut tuple, size as u32) {
                break;
            }
        }
        total as u64
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
        for _ in 0..ISO_SAMPLES {
            tuple
                .iter_mut()
                .for_each(|t| *t = rng.gen_range(0..size as u32));
            check(&tuple)?;
        }
        ISO_SAMPLES
    };

    Ok(IsoReport {
        points,
        n: nn,
        size,
        bijective,
        preserves_constants,
        preserves_q,
        tuples_checked,
        exhaustive,
    })
}

/// Agreement between the set-theoretic reading of a sequent and `holds`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReading {
    /// Every assignment of n-partitions satisfies `⋂ left_i ⊆ ⋃ right_i`.
    pub partition_valid: bool,
    pub oracle_valid: bool,
    pub assignments: u64,
}

impl PartitionReading {
    pub fn agree(&self) -> bool {
        self.partition_valid == self.oracle_valid
    }
}

/// The n-subset denoted by `f` when each variable denotes an n-partition.
///
/// A point `x ∈ Y_a` means `X` takes value `a` there, and `X^σ` then takes
/// value `σ(a)`, so block `b` of `Y^σ` is `Y_{σ⁻¹(b)}`.
fn denote(
    f: &Formula,
    assign: &dyn Fn(&str) -> NSubset,
    points: usize,
    n: Dimension,
) -> Result<NSubset, AlgebraError> {
    match f {
        Formula::Const(k) => NSubset::constant(*k, points, n),
        Formula::Var { name, dec } => {
            let y = assign(name);
            NSubset::new(
                points,
                n.indices().map(|b| y.block(dec.preimage(b))).collect(),
            )
        }
        Formula::Q { test, branches } => {
            let t = denote(test, assign, points, n)?;
            let ys = branches
                .iter()
                .map(|g| denote(g, assign, points, n))
                .collect::<Result<Vec<_>, _>>()?;
            q_nsubsets(&t, &ys)
        }
    }
}

/// Quantifies over all assignments of n-partitions of a `points`-element set
/// to the variables of `s` and checks `⋂ left_i ⊆ ⋃ right_i` each time, then
/// compares with the n-valued oracle. The two agree for `points ≥ 1`.
pub fn sequent_partition_reading(
    s: &Sequent,
    points: usize,
    n: Dimension,
) -> Result<PartitionReading, AlgebraError> {
    s.check_dimension(n)?;
    let i = s.turnstile;
    let vars: Vec<String> = s.variables().into_iter().collect();
    let per_var = checked_power(n.get(), points, "partition algebra", CARRIER_LIMIT)?;
    let assignments = checked_power(per_var, vars.len(), "partition assignments", CARRIER_LIMIT)?;
    let full = NSubset::constant(1, points, n)?.block(1);

    let mut codes = vec![0u32; vars.len()];
    let mut partition_valid = true;
    loop {
        let parts: Vec<NSubset> = codes
            .iter()
            .map(|&c| NSubset::from_partition_code(c as usize, points, n))
            .collect::<Result<_, _>>()?;
        let assign = |name: &str| {
            let slot = vars
                .iter()
                .position(|v| v == name)
                .expect("variable of the sequent");
            parts[slot].clone()
        };
        let left = s.left.iter().try_fold(full, |acc, f| {
            Ok::<_, AlgebraError>(acc & denote(f, &assign, points, n)?.block(i))
        })?;
        let right = s.right.iter().try_fold(0u64, |acc, f| {
            Ok::<_, AlgebraError>(acc | denote(f, &assign, points, n)?.block(i))
        })?;
        if left & !right != 0 {
            partition_valid = false;
            break;
        }
        if !odometer(&mut codes, per_var as u32) {
            break;
        }
    }
    Ok(PartitionReading {
        partition_valid,
        oracle_valid: holds(s, n)?.is_valid(),
        assignments: assignments as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    #[test]
    fn iso_examples() {
        for (points, n, size) in [(1, 2, 2), (0, 2, 1), (2, 3, 9), (3, 2, 8)] {
            let r = iso_par_to_power(points, Dimension::new(n).unwrap()).unwrap();
            assert_eq!(r.size, size);
            assert!(r.pass(), "{r:?}");
            assert!(r.exhaustive);
        }
    }

    #[test]
    fn power_index_is_lexicographic() {
        assert_eq!(power_index(&vec![1, 1], 2), 0);
        assert_eq!(power_index(&vec![1, 2], 2), 1);
        assert_eq!(power_index(&vec![2, 1], 2), 2);
    }

    #[test]
    fn reading_examples() {
        let n = Dimension::TWO;
        for (text, valid) in [
            ("X |-1 X", true),
            ("|-1 X, X^[2,1]", true),
            ("|-1 X", false),
            ("q(X, Y, e2) |-2 Y^[2,1]", false),
        ] {
            let s = parse_sequent(text, n).unwrap();
            for points in 1..=2 {
                let r = sequent_partition_reading(&s, points, n).unwrap();
                assert_eq!(r.oracle_valid, valid, "{text}");
                assert!(r.agree(), "{text} on {points} points");
            }
        }
    }

    #[test]
    fn decorated_reading_matches_on_three_values() {
        let n = Dimension::new(3).unwrap();
        let s = parse_sequent("X^[2,3,1] |-3 X^[3,1,2], Y", n).unwrap();
        let r = sequent_partition_reading(&s, 2, n).unwrap();
        assert!(r.agree());
    }
}

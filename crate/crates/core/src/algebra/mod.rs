//! Finite n-dimensional Church algebras: n-subsets of a finite carrier, the
//! algebra of n-partitions (isomorphic to the power `n^X`), identity checks,
//! multideals and ultramultideals.
//!
//! Elements are integer codes `0..size`. For partition algebras the code of a
//! partition is the base-`n` word whose digit at position `x` (least
//! significant first) is `k - 1` when point `x` lies in block `k`.

mod identities;
mod multideal;
mod stone;

use std::fmt;

use thiserror::Error;

use crate::semantics::SemanticsError;
use crate::syntax::{Dimension, SyntaxError};

pub use identities::{check_identities, IdentityCheck, IDENTITY_SAMPLES, IDENTITY_SEED};
pub use multideal::{intersection_property, is_multideal, multideals, ultramultideals, Multideal};
pub use stone::{iso_par_to_power, sequent_partition_reading, IsoReport, PartitionReading};

/// Largest number of elements an algebra may have.
pub const CARRIER_LIMIT: usize = 1_000_000;
/// Largest number of entries a materialised `q` table may have.
pub const TABLE_LIMIT: usize = 1 << 24;
/// Largest finite set an n-subset may live on.
pub const POINT_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("n-subsets live on different carriers or dimensions")]
    CarrierMismatch,
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

fn too_large(what: &'static str, size: u128, limit: u128) -> AlgebraError {
    AlgebraError::TooLarge { what, size, limit }
}

/// `n^points`, or an error when it exceeds `limit`.
fn checked_power(
    base: usize,
    exp: usize,
    what: &'static str,
    limit: usize,
) -> Result<usize, AlgebraError> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= base as u128;
        if acc > limit as u128 {
            return Err(too_large(what, acc, limit as u128));
        }
    }
    Ok(acc as usize)
}

/// A sequence of `n` subsets of `{0, ..., points - 1}`, each a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NSubset {
    points: usize,
    blocks: Vec<u64>,
}

impl NSubset {
    pub fn new(points: usize, blocks: Vec<u64>) -> Result<Self, AlgebraError> {
        if points > POINT_LIMIT {
            return Err(too_large("carrier", points as u128, POINT_LIMIT as u128));
        }
        if blocks.len() < 2 {
            return Err(AlgebraError::Invalid(
                "an n-subset needs n >= 2 blocks".into(),
            ));
        }
        let mask = Self::mask(points);
        if blocks.iter().any(|b| b & !mask != 0) {
            return Err(AlgebraError::Invalid(
                "block mentions a point outside the carrier".into(),
            ));
        }
        Ok(NSubset { points, blocks })
    }

    /// From explicit point lists per block.
    pub fn from_blocks(points: usize, blocks: &[&[usize]]) -> Result<Self, AlgebraError> {
        let bits = blocks
            .iter()
            .map(|b| {
                b.iter().try_fold(0u64, |acc, &x| {
                    if x >= points {
                        Err(AlgebraError::Invalid(format!(
                            "point {x} outside carrier of size {points}"
                        )))
                    } else {
                        Ok(acc | 1 << x)
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(points, bits)
    }

    fn mask(points: usize) -> u64 {
        if points == 64 {
            u64::MAX
        } else {
            (1u64 << points) - 1
        }
    }

    /// The partition with the given code (see the module docs).
    pub fn from_partition_code(
        code: usize,
        points: usize,
        n: Dimension,
    ) -> Result<Self, AlgebraError> {
        let mut blocks = vec![0u64; n.get()];
        let mut rest = code;
        for x in 0..points {
            blocks[rest % n.get()] |= 1 << x;
            rest /= n.get();
        }
        if rest != 0 {
            return Err(AlgebraError::Invalid(format!(
                "code {code} is out of range"
            )));
        }
        Self::new(points, blocks)
    }

    /// Code of this n-subset when it is an n-partition.
    pub fn partition_code(&self) -> Option<usize> {
        if !self.is_partition() {
            return None;
        }
        let n = self.blocks.len();
        let mut code = 0;
        for x in (0..self.points).rev() {
            let k = self.blocks.iter().position(|b| b >> x & 1 == 1)?;
            code = code * n + k;
        }
        Some(code)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dimension(&self) -> usize {
        self.blocks.len()
    }

    /// Block `k` (1-based) as a bitset.
    pub fn block(&self, k: usize) -> u64 {
        self.blocks[k - 1]
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Blocks pairwise disjoint and covering the carrier.
    pub fn is_partition(&self) -> bool {
        let mut seen = 0u64;
        for b in &self.blocks {
            if seen & b != 0 {
                return false;
            }
            seen |= b;
        }
        seen == Self::mask(self.points)
    }

    /// The constant with block `k` equal to the whole carrier.
    pub fn constant(k: usize, points: usize, n: Dimension) -> Result<Self, AlgebraError> {
        let mut blocks = vec![0; n.get()];
        blocks[k - 1] = Self::mask(points);
        Self::new(points, blocks)
    }
}

impl fmt::Display for NSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let members: Vec<String> = (0..self.points)
                .filter(|x| b >> x & 1 == 1)
                .map(|x| x.to_string())
                .collect();
            write!(f, "{{{}}}", members.join(","))?;
        }
        write!(f, ")")
    }
}

/// Block `j` of the result is `⋃_i (y0_i ∩ ys[i]_j)`.
pub fn q_nsubsets(y0: &NSubset, ys: &[NSubset]) -> Result<NSubset, AlgebraError> {
    let n = y0.dimension();
    if ys.len() != n {
        return Err(AlgebraError::Arity {
            expected: n,
            found: ys.len(),
        });
    }
    if ys
        .iter()
        .any(|y| y.points != y0.points || y.dimension() != n)
    {
        return Err(AlgebraError::CarrierMismatch);
    }
    let blocks = (0..n)
        .map(|j| (0..n).fold(0u64, |acc, i| acc | (y0.blocks[i] & ys[i].blocks[j])))
        .collect();
    Ok(NSubset {
        points: y0.points,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Operation {
    /// Row-major table: entry for `q(c, b_1, ..., b_n)` sits at the base-`size`
    /// number with digits `c, b_1, ..., b_n`.
    Table(Vec<u32>),
    /// Coordinatewise `q` of `n^points`, elements coded as in the module docs.
    Pointwise { points: usize },
}

/// A finite algebra `(A, q, e_1, ..., e_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    n: Dimension,
    size: usize,
    constants: Vec<u32>,
    op: Operation,
}

impl FiniteAlgebra {
    /// Builds an algebra from an explicit table (see [`FiniteAlgebra::q`] for
    /// the indexing); `constants[k - 1]` is `e_k`.
    pub fn from_table(
        name: impl Into<String>,
        n: Dimension,
        size: usize,
        constants: Vec<u32>,
        table: Vec<u32>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::Invalid("empty carrier".into()));
        }
        let expected = checked_power(size, n.get() + 1, "q table", TABLE_LIMIT)?;
        if table.len() != expected {
            return Err(AlgebraError::Invalid(format!(
                "q table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if constants.len() != n.get() {
            return Err(AlgebraError::Arity {
                expected: n.get(),
                found: constants.len(),
            });
        }
        if table.iter().chain(&constants).any(|&v| v as usize >= size) {
            return Err(AlgebraError::Invalid("entry outside the carrier".into()));
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            n,
            size,
            constants,
            op: Operation::Table(table),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }

    /// `e_k`, 1-based.
    pub fn constant(&self, k: usize) -> u32 {
        self.constants[k - 1]
    }

    pub fn constants(&self) -> &[u32] {
        &self.constants
    }

    fn table_index(&self, c: u32, args: &[u32]) -> usize {
        args.iter()
            .fold(c as usize, |acc, &b| acc * self.size + b as usize)
    }

    /// `q(c, args)`; `args` must have length `n`.
    pub fn q(&self, c: u32, args: &[u32]) -> u32 {
        debug_assert_eq!(args.len(), self.n.get());
        match &self.op {
            Operation::Table(t) => t[self.table_index(c, args)],
            Operation::Pointwise { points } => {
                let n = self.n.get() as u32;
                let (mut out, mut weight, mut cc) = (0u32, 1u32, c);
                let mut shifted: Vec<u32> = args.to_vec();
                for _ in 0..*points {
                    let d = cc % n;
                    out += (shifted[d as usize] % n) * weight;
                    cc /= n;
                    for s in &mut shifted {
                        *s /= n;
                    }
                    weight *= n;
                }
                out
            }
        }
    }

    /// The same algebra with an explicit table.
    pub fn materialise(&self) -> Result<Self, AlgebraError> {
        if let Operation::Table(_) = self.op {
            return Ok(self.clone());
        }
        let n = self.n.get();
        let len = checked_power(self.size, n + 1, "q table", TABLE_LIMIT)?;
        let mut table = Vec::with_capacity(len);
        let mut tuple = vec![0u32; n + 1];
        for _ in 0..len {
            table.push(self.q(tuple[0], &tuple[1..]));
            odometer(&mut tuple, self.size as u32);
        }
        Ok(FiniteAlgebra {
            name: self.name.clone(),
            n: self.n,
            size: self.size,
            constants: self.constants.clone(),
            op: Operation::Table(table),
        })
    }

    /// A copy whose table differs in the single entry `q(c, args) := value`.
    pub fn with_entry(&self, c: u32, args: &[u32], value: u32) -> Result<Self, AlgebraError> {
        if args.len() != self.n.get() {
            return Err(AlgebraError::Arity {
                expected: self.n.get(),
                found: args.len(),
            });
        }
        if [c, value]
            .iter()
            .chain(args)
            .any(|&v| v as usize >= self.size)
        {
            return Err(AlgebraError::Invalid("entry outside the carrier".into()));
        }
        let mut out = self.materialise()?;
        let index = out.table_index(c, args);
        if let Operation::Table(t) = &mut out.op {
            t[index] = value;
        }
        out.name = format!(
            "{} (q{:?} := {value})",
            self.name,
            std::iter::once(c)
                .chain(args.iter().copied())
                .collect::<Vec<_>>()
        );
        Ok(out)
    }
}

/// Advances `tuple` as a base-`base` counter, last position fastest. Returns
/// false after wrapping around to all zeros.
pub(crate) fn odometer(tuple: &mut [u32], base: u32) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// The pure n-dimensional Boolean algebra `n`: elements `e_1..e_n` (codes
/// `0..n`), `q(e_i, x) = x_i`.
pub fn pure_n(n: Dimension) -> FiniteAlgebra {
    power(n, 1, format!("{n}"))
}

fn power(n: Dimension, points: usize, name: String) -> FiniteAlgebra {
    let size = n.get().pow(points as u32);
    let constants = (0..n.get())
        .map(|k| (0..points).fold(0u32, |acc, _| acc * n.get() as u32 + k as u32))
        .collect();
    FiniteAlgebra {
        name,
        n,
        size,
        constants,
        op: Operation::Pointwise { points },
    }
}

/// All n-partitions of a `points`-element set with the n-subset `q`.
///
/// Closure of the partitions under [`q_nsubsets`] and agreement with the
/// coordinatewise operation are verified on construction: exhaustively when
/// there are at most `2^16` argument tuples, otherwise on every tuple whose
/// branches differ from `e_1, ..., e_n` in at most one place.
pub fn partition_algebra(points: usize, n: Dimension) -> Result<FiniteAlgebra, AlgebraError> {
    if points > POINT_LIMIT {
        return Err(too_large("carrier", points as u128, POINT_LIMIT as u128));
    }
    checked_power(n.get(), points, "partition algebra", CARRIER_LIMIT)?;
    let alg = power(n, points, format!("Par({points}) for n={n}"));
    verify_partitions(&alg, points)?;
    Ok(alg)
}

fn verify_partitions(alg: &FiniteAlgebra, points: usize) -> Result<(), AlgebraError> {
    let n = alg.n();
    let as_subset = |code: u32| NSubset::from_partition_code(code as usize, points, n);
    let check = |c: u32, args: &[u32]| -> Result<(), AlgebraError> {
        let ys = args
            .iter()
            .map(|&a| as_subset(a))
            .collect::<Result<Vec<_>, _>>()?;
        let result = q_nsubsets(&as_subset(c)?, &ys)?;
        match result.partition_code() {
            Some(code) if code as u32 == alg.q(c, args) => Ok(()),
            Some(_) => Err(AlgebraError::Invalid(
                "coordinatewise q disagrees with the n-subset q".into(),
            )),
            None => Err(AlgebraError::Invalid(format!(
                "q of partitions is not a partition: {result}"
            ))),
        }
    };
    let tuples = (alg.size() as u128).pow(n.get() as u32 + 1);
    if tuples <= 1 << 16 {
        let mut tuple = vec![0u32; n.get() + 1];
        loop {
            check(tuple[0], &tuple[1..])?;
            if !odometer(&mut tuple, alg.size() as u32) {
                break;
            }
        }
    } else {
        for c in alg.elements() {
            for slot in 0..n.get() {
                for x in alg.elements() {
                    let mut args = alg.constants().to_vec();
                    args[slot] = x;
                    check(c, &args)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const N2: Dimension = Dimension::TWO;

    fn n3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn q_nsubsets_examples() {
        let one = |a: &[usize], b: &[usize]| NSubset::from_blocks(1, &[a, b]).unwrap();
        let r = q_nsubsets(&one(&[0], &[]), &[one(&[0], &[]), one(&[], &[0])]).unwrap();
        assert_eq!(r, one(&[0], &[]));

        let two = |a: &[usize], b: &[usize]| NSubset::from_blocks(2, &[a, b]).unwrap();
        let y0 = two(&[0], &[1]);
        let r = q_nsubsets(&y0, &[two(&[0, 1], &[]), two(&[], &[0, 1])]).unwrap();
        assert_eq!(r, two(&[0], &[1]));

        // a constant selects its branch
        let ys = [two(&[0], &[]), two(&[1], &[0])];
        for i in 1..=2 {
            let e = NSubset::constant(i, 2, N2).unwrap();
            assert_eq!(q_nsubsets(&e, &ys).unwrap(), ys[i - 1]);
        }

        assert_eq!(
            q_nsubsets(&y0, &[two(&[], &[])]),
            Err(AlgebraError::Arity {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            q_nsubsets(&y0, &[one(&[], &[]), one(&[], &[])]),
            Err(AlgebraError::CarrierMismatch)
        );
    }

    #[test]
    fn partition_codes_round_trip() {
        for code in 0..27 {
            let p = NSubset::from_partition_code(code, 3, n3()).unwrap();
            assert!(p.is_partition());
            assert_eq!(p.partition_code(), Some(code));
        }
        let overlap = NSubset::from_blocks(2, &[&[0, 1], &[1]]).unwrap();
        assert_eq!(overlap.partition_code(), None);
    }

    #[test]
    fn partition_algebra_sizes() {
        assert_eq!(partition_algebra(0, N2).unwrap().size(), 1);
        assert_eq!(partition_algebra(2, N2).unwrap().size(), 4);
        assert_eq!(partition_algebra(2, n3()).unwrap().size(), 9);
        assert!(matches!(
            partition_algebra(21, N2),
            Err(AlgebraError::TooLarge { .. })
        ));
    }

    #[test]
    fn nch_law_on_constructed_algebras() {
        for alg in [
            pure_n(N2),
            pure_n(n3()),
            partition_algebra(2, n3()).unwrap(),
            partition_algebra(3, N2).unwrap(),
        ] {
            let n = alg.n().get();
            let mut args = vec![0u32; n];
            loop {
                for i in 1..=n {
                    assert_eq!(alg.q(alg.constant(i), &args), args[i - 1]);
                }
                if !odometer(&mut args, alg.size() as u32) {
                    break;
                }
            }
        }
    }

    #[test]
    fn materialised_table_agrees() {
        let alg = partition_algebra(2, N2).unwrap();
        let table = alg.materialise().unwrap();
        let mut tuple = vec![0u32; 3];
        loop {
            assert_eq!(alg.q(tuple[0], &tuple[1..]), table.q(tuple[0], &tuple[1..]));
            if !odometer(&mut tuple, 4) {
                break;
            }
        }
        let bent = alg.with_entry(0, &[1, 2], 3).unwrap();
        assert_eq!(bent.q(0, &[1, 2]), 3);
        assert_ne!(alg.q(0, &[1, 2]), 3);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteAlgebra::from_table("bad", N2, 2, vec![0, 1], vec![0; 7]).is_err());
        assert!(FiniteAlgebra::from_table("bad", N2, 2, vec![0, 2], vec![0; 8]).is_err());
        assert!(FiniteAlgebra::from_table("ok", N2, 2, vec![0, 1], vec![0; 8]).is_ok());
    }
}

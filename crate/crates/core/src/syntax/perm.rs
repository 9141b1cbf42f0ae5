use std::fmt;

use smallvec::SmallVec;

use super::{Dimension, SyntaxError};

/// Inline for the dimensions used in practice; formulas clone decorations
/// constantly during proof search.
type Images = SmallVec<[u8; 8]>;

/// A permutation of the dimensions `1..=n`, stored in one-line notation.
///
/// `image[x - 1]` is the image of `x`. All values are 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Images,
}

impl Permutation {
    pub fn identity(n: Dimension) -> Self {
        Permutation {
            image: (1..=n.get() as u8).collect(),
        }
    }

    /// Builds a permutation from its one-line images, rejecting anything that
    /// is not a bijection on `1..=len`.
    pub fn from_images(images: &[usize]) -> Result<Self, SyntaxError> {
        let n = images.len();
        if n < 2 || n > u8::MAX as usize {
            return Err(SyntaxError::NotAPermutation(images.to_vec()));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(SyntaxError::NotAPermutation(images.to_vec()));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            image: images.iter().map(|&x| x as u8).collect(),
        })
    }

    /// The transposition swapping `i` and `j`. `exchange(i, i, n)` is the identity.
    pub fn exchange(i: usize, j: usize, n: Dimension) -> Result<Self, SyntaxError> {
        let nn = n.get();
        for x in [i, j] {
            if x == 0 || x > nn {
                return Err(SyntaxError::IndexOutOfRange { index: x, n: nn });
            }
        }
        let mut image: Images = (1..=nn as u8).collect();
        image.swap(i - 1, j - 1);
        Ok(Permutation { image })
    }

    /// Same as [`Permutation::exchange`] with indices already validated.
    pub(crate) fn swap(i: usize, j: usize, n: usize) -> Self {
        let mut image: Images = (1..=n as u8).collect();
        image.swap(i - 1, j - 1);
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn dimension(&self) -> Dimension {
        Dimension::new(self.image.len()).expect("permutations have degree >= 2")
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.image[x - 1] as usize
    }

    /// Preimage of the 1-based point `y`.
    pub fn preimage(&self, y: usize) -> usize {
        self.image
            .iter()
            .position(|&v| v as usize == y)
            .map(|p| p + 1)
            .expect("permutation is a bijection")
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image
            .iter()
            .enumerate()
            .all(|(p, &v)| v as usize == p + 1)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, SyntaxError> {
        if self.degree() != other.degree() {
            return Err(SyntaxError::DimensionMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(self.after(other))
    }

    pub(crate) fn after(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other
                .image
                .iter()
                .map(|&x| self.image[x as usize - 1])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image: Images = smallvec::smallvec![0u8; self.image.len()];
        for (p, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = (p + 1) as u8;
        }
        Permutation { image }
    }

    /// All permutations of `1..=n` in lexicographic order of their images.
    pub fn all(n: Dimension) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Images = (1..=n.get() as u8).collect();
        loop {
            out.push(Permutation {
                image: current.clone(),
            });
            // next lexicographic permutation
            let Some(p) = (0..current.len() - 1)
                .rev()
                .find(|&p| current[p] < current[p + 1])
            else {
                break;
            };
            let q = (p + 1..current.len())
                .rev()
                .find(|&q| current[q] > current[p])
                .unwrap();
            current.swap(p, q);
            current[p + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (p, v) in self.image.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.image.iter().map(|&v| v as usize))
    }
}

impl<'de> serde::Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

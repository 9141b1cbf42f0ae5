use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::{odometer, AlgebraError, FiniteAlgebra, TABLE_LIMIT};

/// Largest number of multideals [`multideals`] will collect.
pub const MULTIDEAL_LIMIT: usize = 100_000;

/// An n-tuple of pairwise disjoint sets of elements; `parts[k - 1]` is `I_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Multideal {
    pub parts: Vec<BTreeSet<u32>>,
}

impl Multideal {
    fn from_labels(labels: &[Option<u8>], n: usize) -> Self {
        let mut parts = vec![BTreeSet::new(); n];
        for (x, l) in labels.iter().enumerate() {
            if let Some(k) = l {
                parts[*k as usize].insert(x as u32);
            }
        }
        Multideal { parts }
    }

    /// The union of the parts.
    pub fn carrier(&self) -> BTreeSet<u32> {
        self.parts.iter().flatten().copied().collect()
    }

    /// Componentwise inclusion.
    pub fn is_below(&self, other: &Multideal) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(a, b)| a.is_subset(b))
    }
}

impl fmt::Display for Multideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, part) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let items: Vec<String> = part.iter().map(u32::to_string).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, ")")
    }
}

/// Labels for disjoint parts, or `None` if they overlap or leave the carrier.
fn labels_of(alg: &FiniteAlgebra, parts: &[BTreeSet<u32>]) -> Option<Vec<Option<u8>>> {
    let mut labels = vec![None; alg.size()];
    for (k, part) in parts.iter().enumerate() {
        for &x in part {
            let slot = labels.get_mut(x as usize)?;
            if slot.is_some() {
                return None;
            }
            *slot = Some(k as u8);
        }
    }
    Some(labels)
}

fn guard(alg: &FiniteAlgebra) -> Result<(), AlgebraError> {
    let work = (alg.size() as u128).pow(alg.n().get() as u32 + 1);
    if work > TABLE_LIMIT as u128 {
        return Err(AlgebraError::TooLarge {
            what: "multideal search",
            size: work,
            limit: TABLE_LIMIT as u128,
        });
    }
    Ok(())
}

/// Disjointness and the three closure conditions, by exhaustive
/// quantification:
/// (m1) `e_k ∈ I_k`;
/// (m2) `a ∈ I_r`, `b ∈ I_k` imply `q(a, c)` with `c_r = b` lies in `I_k`;
/// (m3) `c_1, ..., c_n ∈ I_k` imply `q(a, c) ∈ I_k`.
pub fn is_multideal(alg: &FiniteAlgebra, parts: &[BTreeSet<u32>]) -> bool {
    let n = alg.n().get();
    if parts.len() != n {
        return false;
    }
    let Some(labels) = labels_of(alg, parts) else {
        return false;
    };
    if (1..=n).any(|k| labels[alg.constant(k) as usize] != Some(k as u8 - 1)) {
        return false;
    }
    violation(alg, &labels).is_none()
}

/// The first instance of (m2) or (m3) whose conclusion is not labelled as
/// required: `(element, required label)`.
fn violation(alg: &FiniteAlgebra, labels: &[Option<u8>]) -> Option<(u32, u8)> {
    let mut found = None;
    for_each_consequence(alg, labels, |x, k| {
        if labels[x as usize] != Some(k) {
            found = Some((x, k));
            false
        } else {
            true
        }
    });
    found
}

/// Feeds every `(element, label)` demanded by (m2) and (m3) from `labels` to
/// `visit` until it returns false.
fn for_each_consequence(
    alg: &FiniteAlgebra,
    labels: &[Option<u8>],
    mut visit: impl FnMut(u32, u8) -> bool,
) {
    let n = alg.n().get();
    let size = alg.size() as u32;
    let labelled: Vec<(u32, u8)> = labels
        .iter()
        .enumerate()
        .filter_map(|(x, l)| l.map(|k| (x as u32, k)))
        .collect();
    // (m2)
    let mut args = vec![0u32; n];
    for &(a, r) in &labelled {
        for &(b, k) in &labelled {
            let mut free = vec![0u32; n - 1];
            loop {
                args[..r as usize].copy_from_slice(&free[..r as usize]);
                args[r as usize] = b;
                args[r as usize + 1..].copy_from_slice(&free[r as usize..]);
                if !visit(alg.q(a, &args), k) {
                    return;
                }
                if !odometer(&mut free, size) {
                    break;
                }
            }
        }
    }
    // (m3)
    for k in 0..n as u8 {
        let part: Vec<u32> = labelled
            .iter()
            .filter(|(_, l)| *l == k)
            .map(|(x, _)| *x)
            .collect();
        if part.is_empty() {
            continue;
        }
        let mut pick = vec![0u32; n];
        loop {
            let cs: Vec<u32> = pick.iter().map(|&p| part[p as usize]).collect();
            for a in alg.elements() {
                if !visit(alg.q(a, &cs), k) {
                    return;
                }
            }
            if !odometer(&mut pick, part.len() as u32) {
                break;
            }
        }
    }
}

/// Least multideal labelling extending `labels`, or `None` on a clash.
fn close(alg: &FiniteAlgebra, mut labels: Vec<Option<u8>>) -> Option<Vec<Option<u8>>> {
    loop {
        let mut additions = Vec::new();
        let mut clash = false;
        for_each_consequence(alg, &labels, |x, k| match labels[x as usize] {
            Some(l) if l == k => true,
            Some(_) => {
                clash = true;
                false
            }
            None => {
                additions.push((x, k));
                true
            }
        });
        if clash {
            return None;
        }
        if additions.is_empty() {
            return Some(labels);
        }
        for (x, k) in additions {
            match labels[x as usize] {
                Some(l) if l != k => return None,
                _ => labels[x as usize] = Some(k),
            }
        }
    }
}

fn initial_labels(alg: &FiniteAlgebra) -> Option<Vec<Option<u8>>> {
    let mut labels = vec![None; alg.size()];
    for k in 1..=alg.n().get() {
        let e = alg.constant(k) as usize;
        if labels[e].is_some() {
            return None;
        }
        labels[e] = Some(k as u8 - 1);
    }
    Some(labels)
}

/// Every multideal, in increasing order.
pub fn multideals(alg: &FiniteAlgebra) -> Result<Vec<Multideal>, AlgebraError> {
    guard(alg)?;
    let n = alg.n().get();
    let Some(base) = initial_labels(alg).and_then(|l| close(alg, l)) else {
        return Ok(Vec::new());
    };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([base.clone()]);
    seen.insert(base);
    while let Some(labels) = queue.pop_front() {
        for x in 0..alg.size() {
            if labels[x].is_some() {
                continue;
            }
            for k in 0..n as u8 {
                let mut next = labels.clone();
                next[x] = Some(k);
                if let Some(closed) = close(alg, next) {
                    if seen.insert(closed.clone()) {
                        if seen.len() > MULTIDEAL_LIMIT {
                            return Err(AlgebraError::TooLarge {
                                what: "multideal family",
                                size: seen.len() as u128,
                                limit: MULTIDEAL_LIMIT as u128,
                            });
                        }
                        queue.push_back(closed);
                    }
                }
            }
        }
    }
    let mut out: Vec<Multideal> = seen.iter().map(|l| Multideal::from_labels(l, n)).collect();
    out.sort();
    Ok(out)
}

/// Multideals whose carrier is the whole algebra, in increasing order.
///
/// On a full carrier (m2) says exactly that the labelling `h` satisfies
/// `h(q(a, c)) = h(c_{h(a)})`, so the search propagates that equation and
/// branches on the first unlabelled element. Every result is re-checked with
/// [`is_multideal`].
pub fn ultramultideals(alg: &FiniteAlgebra) -> Result<Vec<Multideal>, AlgebraError> {
    guard(alg)?;
    let n = alg.n().get();
    let mut out = Vec::new();
    let Some(start) = initial_labels(alg) else {
        return Ok(out);
    };
    let mut stack = vec![start];
    while let Some(labels) = stack.pop() {
        let Some(labels) = propagate(alg, labels) else {
            continue;
        };
        match labels.iter().position(Option::is_none) {
            None => {
                let m = Multideal::from_labels(&labels, n);
                if is_multideal(alg, &m.parts) {
                    out.push(m);
                }
            }
            Some(x) => {
                for k in (0..n as u8).rev() {
                    let mut next = labels.clone();
                    next[x] = Some(k);
                    stack.push(next);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Applies `h(q(a, c)) = h(c_{h(a)})` in both directions until nothing
/// changes; `None` on a clash.
fn propagate(alg: &FiniteAlgebra, mut labels: Vec<Option<u8>>) -> Option<Vec<Option<u8>>> {
    let n = alg.n().get();
    let size = alg.size() as u32;
    loop {
        let mut changed = false;
        for a in 0..size {
            let Some(r) = labels[a as usize] else {
                continue;
            };
            let mut args = vec![0u32; n];
            loop {
                let y = args[r as usize] as usize;
                let z = alg.q(a, &args) as usize;
                match (labels[y], labels[z]) {
                    (Some(ly), Some(lz)) if ly != lz => return None,
                    (Some(ly), None) => {
                        labels[z] = Some(ly);
                        changed = true;
                    }
                    (None, Some(lz)) => {
                        labels[y] = Some(lz);
                        changed = true;
                    }
                    _ => {}
                }
                if !odometer(&mut args, size) {
                    break;
                }
            }
        }
        if !changed {
            return Some(labels);
        }
    }
}

/// Whether `ideal` is the componentwise intersection of the ultramultideals
/// above it. False when there are none.
pub fn intersection_property(alg: &FiniteAlgebra, ideal: &Multideal) -> Result<bool, AlgebraError> {
    let above: Vec<Multideal> = ultramultideals(alg)?
        .into_iter()
        .filter(|u| ideal.is_below(u))
        .collect();
    let Some(first) = above.first() else {
        return Ok(false);
    };
    let meet: Vec<BTreeSet<u32>> = (0..alg.n().get())
        .map(|k| {
            above[1..].iter().fold(first.parts[k].clone(), |acc, u| {
                acc.intersection(&u.parts[k]).copied().collect()
            })
        })
        .collect();
    Ok(meet == ideal.parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{partition_algebra, pure_n};
    use crate::syntax::Dimension;

    fn set(xs: &[u32]) -> BTreeSet<u32> {
        xs.iter().copied().collect()
    }

    #[test]
    fn is_multideal_examples() {
        let two = pure_n(Dimension::TWO);
        assert!(is_multideal(&two, &[set(&[0]), set(&[1])]));
        assert!(!is_multideal(&two, &[set(&[1]), set(&[0])]));
        assert!(!is_multideal(&two, &[set(&[]), set(&[])]));
        assert!(!is_multideal(&two, &[set(&[0, 1]), set(&[1])]));
    }

    #[test]
    fn pure_algebra_has_one_ultramultideal() {
        for n in 2..=4 {
            let alg = pure_n(Dimension::new(n).unwrap());
            let us = ultramultideals(&alg).unwrap();
            assert_eq!(us.len(), 1);
            assert_eq!(
                us[0].parts,
                (0..n as u32).map(|k| set(&[k])).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn one_ultramultideal_per_point() {
        for (n, points) in [(2, 0), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let n = Dimension::new(n).unwrap();
            let alg = partition_algebra(points, n).unwrap();
            let us = ultramultideals(&alg).unwrap();
            assert_eq!(us.len(), points, "n = {n}, |X| = {points}");
            // the ultramultideal of point x puts p into I_k iff x lies in block k
            for x in 0..points {
                let expected: Vec<BTreeSet<u32>> = (0..n.get())
                    .map(|k| {
                        alg.elements()
                            .filter(|&p| (p as usize / n.get().pow(x as u32)) % n.get() == k)
                            .collect()
                    })
                    .collect();
                assert!(us.iter().any(|u| u.parts == expected));
            }
        }
    }

    #[test]
    fn every_multideal_is_an_intersection() {
        for (n, points) in [(2, 2), (3, 2), (2, 3)] {
            let alg = partition_algebra(points, Dimension::new(n).unwrap()).unwrap();
            let all = multideals(&alg).unwrap();
            assert_eq!(all.len(), (1 << points) - 1);
            for m in &all {
                assert!(is_multideal(&alg, &m.parts));
                assert!(intersection_property(&alg, m).unwrap(), "{m}");
            }
        }
    }

    #[test]
    fn closure_is_exhaustive_for_brute_force() {
        // compare against all labellings of the 4-element partition algebra
        let alg = partition_algebra(2, Dimension::TWO).unwrap();
        let mut brute = Vec::new();
        let mut digits = vec![0u32; 4];
        loop {
            let labels: Vec<Option<u8>> = digits
                .iter()
                .map(|&d| d.checked_sub(1).map(|k| k as u8))
                .collect();
            let m = Multideal::from_labels(&labels, 2);
            if is_multideal(&alg, &m.parts) {
                brute.push(m);
            }
            if !odometer(&mut digits, 3) {
                break;
            }
        }
        brute.sort();
        assert_eq!(multideals(&alg).unwrap(), brute);
    }
}

//! The Weyl group of type `C_m` as signed permutations of `{1, …, m}`.
//!
//! `s_i` for `i < m` swaps `i` and `i+1`; `s_m` changes the sign of `m`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank for which double cosets are searched exhaustively.
pub const MAX_RANK: usize = 8;

/// `images[j − 1] = w(j)`, a signed image in `±{1, …, m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation {
    images: Vec<i32>,
}

impl SignedPermutation {
    pub fn new(images: Vec<i32>) -> Result<Self> {
        let m = images.len() as i32;
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let a = x.unsigned_abs() as usize;
            if x == 0 || x.abs() > m || seen[a - 1] {
                return Err(Error::InvalidParams(format!("{images:?} is not a signed permutation")));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn identity(m: usize) -> Self {
        SignedPermutation { images: (1..=m as i32).collect() }
    }

    /// The simple reflection `s_i`, `1 ≤ i ≤ m`.
    pub fn simple(m: usize, i: usize) -> Self {
        assert!((1..=m).contains(&i), "simple reflections are s_1, …, s_m");
        let mut w = Self::identity(m);
        if i < m {
            w.images.swap(i - 1, i);
        } else {
            w.images[m - 1] = -(m as i32);
        }
        w
    }

    /// `s_{i_1} ⋯ s_{i_r}`.
    pub fn from_word(m: usize, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(m), |acc, &i| acc.compose(&Self::simple(m, i)))
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[i32] {
        &self.images
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let images = other
            .images
            .iter()
            .map(|&x| x.signum() * self.images[x.unsigned_abs() as usize - 1])
            .collect();
        SignedPermutation { images }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.rank()];
        for (j, &x) in self.images.iter().enumerate() {
            images[x.unsigned_abs() as usize - 1] = x.signum() * (j as i32 + 1);
        }
        SignedPermutation { images }
    }

    /// Coxeter length from inversions. Relabelling `j ↦ m + 1 − j` turns
    /// `s_m` into the sign change at position 1, where the length is
    /// `inv(v) − Σ_{v(j) < 0} v(j)`.
    pub fn length(&self) -> usize {
        let m = self.rank() as i32;
        let v: Vec<i32> = (0..self.rank())
            .map(|i| {
                let x = self.images[self.rank() - 1 - i];
                x.signum() * (m + 1 - x.abs())
            })
            .collect();
        let mut inv = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    inv += 1;
                }
            }
        }
        let neg: i32 = v.iter().filter(|&&x| x < 0).map(|&x| -x).sum();
        inv + neg as usize
    }
}

pub fn weyl_length(w: &SignedPermutation) -> usize {
    w.length()
}

/// `w = s_1 ⋯ s_m`.
pub fn coxeter_element(m: usize) -> SignedPermutation {
    SignedPermutation::from_word(m, &(1..=m).collect::<Vec<_>>())
}

/// `w_i = s_{m+1−i} ⋯ s_m`.
pub fn stratum_element(m: usize, i: usize) -> SignedPermutation {
    SignedPermutation::from_word(m, &(m + 1 - i..=m).collect::<Vec<_>>())
}

/// `I_i = {1, …, m − 1 − i}` (empty for `i ≥ m − 1`).
pub fn stratum_parabolic(m: usize, i: usize) -> Vec<usize> {
    (1..m.saturating_sub(i)).collect()
}

fn closure(start: &SignedPermutation, left: &[SignedPermutation], right: &[SignedPermutation]) -> Vec<SignedPermutation> {
    let mut seen: HashSet<SignedPermutation> = HashSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start.clone());
    while let Some(x) = queue.pop_front() {
        let moves = left.iter().map(|s| s.compose(&x)).chain(right.iter().map(|s| x.compose(s)));
        for y in moves {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

fn longest(elements: &[SignedPermutation]) -> SignedPermutation {
    elements.iter().max_by_key(|w| w.length()).expect("nonempty").clone()
}

/// The pieces of `dim X_{P_I}(w) = ℓ_I(w) − ℓ(w_I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlDimension {
    /// Longest element of `W_I w W_I`.
    pub coset_longest: SignedPermutation,
    /// Longest element `w_I` of `W_I`.
    pub parabolic_longest: SignedPermutation,
    pub dim: usize,
}

pub fn dl_dimension(parabolic: &[usize], w: &SignedPermutation) -> Result<DlDimension> {
    let m = w.rank();
    if m > MAX_RANK {
        return Err(Error::GroupTooLarge(m));
    }
    if parabolic.iter().any(|&i| i == 0 || i > m) {
        return Err(Error::InvalidParams(format!("simple reflections are indexed 1..={m}")));
    }
    let gens: Vec<_> = parabolic.iter().map(|&i| SignedPermutation::simple(m, i)).collect();
    let coset = closure(w, &gens, &gens);
    let group = closure(&SignedPermutation::identity(m), &[], &gens);
    let coset_longest = longest(&coset);
    let parabolic_longest = longest(&group);
    let dim = coset_longest.length() - parabolic_longest.length();
    Ok(DlDimension { coset_longest, parabolic_longest, dim })
}

pub fn dim_dl(parabolic: &[usize], w: &SignedPermutation) -> Result<usize> {
    Ok(dl_dimension(parabolic, w)?.dim)
}

/// Word lengths of all group elements by breadth-first search on the Cayley
/// graph; an independent check of [`SignedPermutation::length`].
pub fn lengths_by_search(m: usize) -> Result<HashMap<SignedPermutation, usize>> {
    if m > MAX_RANK {
        return Err(Error::GroupTooLarge(m));
    }
    let gens: Vec<_> = (1..=m).map(|i| SignedPermutation::simple(m, i)).collect();
    let mut dist = HashMap::new();
    let id = SignedPermutation::identity(m);
    dist.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for s in &gens {
            let y = x.compose(s);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_agree_with_search() {
        for m in 1..=4 {
            let table = lengths_by_search(m).unwrap();
            assert_eq!(table.len(), (1..=m).product::<usize>() << m);
            for (w, &d) in &table {
                assert_eq!(w.length(), d, "{w:?}");
            }
        }
    }

    #[test]
    fn identity_and_coxeter() {
        assert_eq!(weyl_length(&SignedPermutation::identity(3)), 0);
        assert_eq!(dim_dl(&[], &SignedPermutation::identity(3)).unwrap(), 0);
        for m in 1..=6 {
            assert_eq!(coxeter_element(m).length(), m);
        }
    }

    #[test]
    fn strata_dimensions() {
        for m in 1..=4 {
            for i in 0..=m {
                let w = stratum_element(m, i);
                let d = dl_dimension(&stratum_parabolic(m, i), &w).unwrap();
                assert_eq!(d.dim, i, "m={m} i={i}");
                assert_eq!(d.coset_longest, w.compose(&d.parabolic_longest));
                assert_eq!(w.compose(&d.parabolic_longest).length(), i + d.parabolic_longest.length());
            }
        }
    }

    #[test]
    fn inverse_and_validation() {
        let w = SignedPermutation::new(vec![-2, 3, 1]).unwrap();
        assert_eq!(w.compose(&w.inverse()), SignedPermutation::identity(3));
        assert!(SignedPermutation::new(vec![1, -1]).is_err());
        assert_eq!(dim_dl(&[], &SignedPermutation::identity(9)).unwrap_err(), Error::GroupTooLarge(9));
    }
}

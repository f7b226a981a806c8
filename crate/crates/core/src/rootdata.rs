//! Weight arithmetic for `sl(n+1)` and its Levi factor `sl(n)`.
//!
//! Weights of the Levi factor live in L-coordinates: `n` numbers modulo the
//! all-ones vector. Weights of the big algebra are carried as integer tuples
//! `(a | b_0, ..., b_{n-1})` on which the Weyl group `S_{n+1}` acts by
//! permutation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A weight of `sl(n)` in L-coordinates, stored with the last coordinate 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LWeight<T> {
    coords: Vec<T>,
}

impl<T: Scalar> LWeight<T> {
    /// Builds a weight from any representative; the constant shift is removed.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::RankTooSmall(coords.len()));
        }
        let last = coords[coords.len() - 1].clone();
        let coords = coords.into_iter().map(|c| c - last.clone()).collect();
        Ok(LWeight { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LWeight { coords: vec![T::zero(); n] }
    }

    /// The basis vector `L_i`, 1-based as in the usual notation.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "L_{i} out of range for rank {n}");
        let mut coords = vec![T::zero(); n];
        coords[i - 1] = T::one();
        Self::new(coords).expect("rank checked by caller")
    }

    /// Highest weight `-L_n` of `g_1`.
    pub fn g1_highest(n: usize) -> Self {
        -Self::basis(n, n)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn scale(&self, factor: &T) -> Self {
        LWeight {
            coords: self.coords.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in weight arithmetic");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        LWeight { coords }
    }
}

impl<T: Scalar> std::ops::Add for LWeight<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl<T: Scalar> std::ops::Sub for LWeight<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl<T: Scalar> std::ops::Neg for LWeight<T> {
    type Output = Self;
    fn neg(self) -> Self {
        LWeight::new(self.coords.into_iter().map(|c| -c).collect()).expect("rank preserved")
    }
}

impl<T: Scalar> fmt::Display for LWeight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Normalized invariant form on `(h^S)^*`:
/// `(L_i, L_j) = n/(n+1) * (delta_ij - 1/n)`.
pub fn inner_product<T: Scalar>(mu: &LWeight<T>, nu: &LWeight<T>) -> Result<T> {
    if mu.rank() != nu.rank() {
        return Err(Error::RankMismatch(mu.rank(), nu.rank()));
    }
    let n = mu.rank() as i64;
    let dot = mu
        .coords
        .iter()
        .zip(&nu.coords)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    let sum = |w: &LWeight<T>| w.coords.iter().fold(T::zero(), |acc, c| acc + c.clone());
    let n1 = T::from_int(n + 1);
    Ok(T::from_int(n) * dot / n1.clone() - sum(mu) * sum(nu) / n1)
}

/// `(mu, mu + 2 rho)`, the Casimir eigenvalue up to normalization.
pub fn casimir_value<T: Scalar>(mu: &LWeight<T>) -> T {
    let rho = rho_levi::<T>(mu.rank());
    let shifted = mu.clone() + rho.scale(&T::from_int(2));
    inner_product(mu, &shifted).expect("equal ranks")
}

/// Half the sum of the positive roots of `sl(n)`: `sum_{i<n} (n-i) L_i`.
pub fn rho_levi<T: Scalar>(n: usize) -> LWeight<T> {
    let coords = (1..=n).map(|i| T::from_int((n - i) as i64)).collect();
    LWeight::new(coords).expect("rank >= 2 required")
}

/// An integer weight of `gl(n+1)` written `(a | b_0, ..., b_{n-1})`, flattened.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GlTuple {
    entries: Vec<i64>,
}

impl GlTuple {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.len() < 3 {
            return Err(Error::RankTooSmall(entries.len().saturating_sub(1)));
        }
        Ok(GlTuple { entries })
    }

    /// Rank `n` of the projective space, i.e. one less than the tuple length.
    pub fn rank(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn head(&self) -> i64 {
        self.entries[0]
    }

    pub fn tail(&self) -> &[i64] {
        &self.entries[1..]
    }

    pub fn shifted(&self, by: i64) -> GlTuple {
        GlTuple {
            entries: self.entries.iter().map(|e| e + by).collect(),
        }
    }

    /// `t + rho_g`, sorted: the invariant of the affine Weyl action.
    pub fn rho_shifted_sorted(&self) -> Vec<i64> {
        let rho = rho_g(self.rank());
        let mut v: Vec<i64> = self.entries.iter().zip(rho.entries()).map(|(a, r)| a + r).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for GlTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|", self.entries[0])?;
        for (i, b) in self.tail().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// `rho_g = (1, 2, ..., n+1)`.
pub fn rho_g(n: usize) -> GlTuple {
    GlTuple {
        entries: (1..=(n as i64 + 1)).collect(),
    }
}

/// True iff `t1 + rho_g` and `t2 + rho_g` agree as multisets.
pub fn affine_equivalent(t1: &GlTuple, t2: &GlTuple) -> bool {
    t1.entries.len() == t2.entries.len() && t1.rho_shifted_sorted() == t2.rho_shifted_sorted()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn alpha_norm() {
        for n in 2..=8 {
            let alpha = LWeight::<Rational>::g1_highest(n);
            let ni = n as i64;
            assert_eq!(inner_product(&alpha, &alpha).unwrap(), q(ni - 1, ni + 1));
        }
    }

    #[test]
    fn alpha_plus_l_against_rho() {
        for n in 2..=8usize {
            let ni = n as i64;
            let rho = rho_levi::<Rational>(n);
            for j in 0..n {
                let w = LWeight::g1_highest(n) + LWeight::basis(n, n - j);
                assert_eq!(inner_product(&w, &rho).unwrap(), q(ni * j as i64, ni + 1));
            }
        }
    }

    #[test]
    fn zero_pairs_to_zero() {
        let mu = LWeight::<Rational>::from_ints(&[3, -1, 2, 0]).unwrap();
        assert_eq!(inner_product(&LWeight::zero(4), &mu).unwrap(), q(0, 1));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = LWeight::<Rational>::zero(3);
        let b = LWeight::<Rational>::zero(4);
        assert_eq!(inner_product(&a, &b), Err(Error::RankMismatch(3, 4)));
    }

    #[test]
    fn rho_values() {
        let r = |n| rho_levi::<Rational>(n);
        assert_eq!(r(2), LWeight::from_ints(&[1, 0]).unwrap());
        assert_eq!(r(3), LWeight::from_ints(&[2, 1, 0]).unwrap());
        assert_eq!(r(4), LWeight::from_ints(&[3, 2, 1, 0]).unwrap());
        assert_eq!(rho_g(2).entries(), &[1, 2, 3]);
        assert_eq!(rho_g(3).entries(), &[1, 2, 3, 4]);
        assert_eq!(rho_g(4).entries(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn canonical_form_removes_shift() {
        let a = LWeight::<Rational>::from_ints(&[3, 2, 1]).unwrap();
        let b = LWeight::<Rational>::from_ints(&[5, 4, 3]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coords()[2], q(0, 1));
    }

    #[test]
    fn alpha_casimir_is_n_minus_one() {
        for n in 2..=8usize {
            let alpha = LWeight::<Rational>::g1_highest(n);
            assert_eq!(casimir_value(&alpha), q(n as i64 - 1, 1));
        }
    }

    #[test]
    fn affine_examples() {
        let t = GlTuple::new(vec![0, 0, 1]).unwrap();
        let u = GlTuple::new(vec![0, 1, 0]).unwrap();
        assert!(affine_equivalent(&t, &t));
        assert!(!affine_equivalent(&t, &u));
    }

    #[test]
    fn affine_lowered_entry_matches_closed_form() {
        // (M-k+l | .., b_j - l, ..) vs (M-k | .., b_j, ..) at k = -(sum a + j - l + 1)
        let a = [1i64, 2, 0];
        let m = 2;
        let mut b = vec![m];
        for x in a {
            b.push(b.last().unwrap() + x);
        }
        for j in 1..=a.len() {
            for l in 1..=a[j - 1] {
                let k = -(a[..j].iter().sum::<i64>() + j as i64 - l + 1);
                let mut lowered = b.clone();
                lowered[j] -= l;
                let mut t1 = vec![m - k + l];
                t1.extend(&lowered);
                let mut t2 = vec![m - k];
                t2.extend(&b);
                assert!(affine_equivalent(
                    &GlTuple::new(t1).unwrap(),
                    &GlTuple::new(t2).unwrap()
                ));
            }
        }
    }
}

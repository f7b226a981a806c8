//! Brute-force oracles, independent of the engine's combinatorics.
#![allow(dead_code)]

use std::collections::BTreeMap;

use diffpair::{GlTuple, Labels};
use itertools::Itertools;

pub type Character = BTreeMap<Vec<i64>, i64>;

pub fn partition(labels: &[i64]) -> Vec<i64> {
    (0..=labels.len()).map(|i| labels[i..].iter().sum()).collect()
}

/// Weight multiset of the `gl(n)` irreducible with highest weight `shape`,
/// by enumerating semistandard tableaux with entries `0..n`.
pub fn schur(shape: &[i64], n: usize) -> Character {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut filling: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out = Character::new();
    fill(&cells, 0, n, &mut filling, &mut out);
    out
}

fn fill(
    cells: &[(usize, usize)],
    idx: usize,
    n: usize,
    filling: &mut BTreeMap<(usize, usize), usize>,
    out: &mut Character,
) {
    if idx == cells.len() {
        let mut w = vec![0i64; n];
        for &v in filling.values() {
            w[v] += 1;
        }
        *out.entry(w).or_insert(0) += 1;
        return;
    }
    let (r, c) = cells[idx];
    let mut lo = 0;
    if c > 0 {
        lo = lo.max(filling[&(r, c - 1)]);
    }
    if r > 0 {
        lo = lo.max(filling[&(r - 1, c)] + 1);
    }
    for v in lo..n {
        filling.insert((r, c), v);
        fill(cells, idx + 1, n, filling, out);
    }
    filling.remove(&(r, c));
}

pub fn multiply(a: &Character, b: &Character) -> Character {
    let mut out = Character::new();
    for (wa, ma) in a {
        for (wb, mb) in b {
            let w: Vec<i64> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
            *out.entry(w).or_insert(0) += ma * mb;
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

/// Splits a character into irreducibles by repeatedly removing the
/// character of its lexicographically largest weight.
pub fn peel(mut ch: Character, n: usize) -> BTreeMap<Vec<i64>, i64> {
    let mut out = BTreeMap::new();
    while let Some((top, &mult)) = ch.iter().next_back() {
        let top = top.clone();
        assert!(top.windows(2).all(|w| w[0] >= w[1]), "non-dominant top weight {top:?}");
        let sub = schur(&top, n);
        for (w, m) in sub {
            *ch.entry(w).or_insert(0) -= m * mult;
        }
        ch.retain(|_, m| *m != 0);
        let labels: Vec<i64> = top.windows(2).map(|w| w[0] - w[1]).collect();
        *out.entry(labels).or_insert(0) += mult;
    }
    out
}

/// `E ⊗ F` for `sl(n)` labels, by characters.
pub fn tensor_by_characters(e: &Labels, f: &Labels) -> BTreeMap<Vec<i64>, i64> {
    let n = e.rank();
    let product = multiply(&schur(&partition(e.as_slice()), n), &schur(&partition(f.as_slice()), n));
    peel(product, n)
}

pub fn dimension_by_tableaux(labels: &Labels) -> i64 {
    schur(&partition(labels.as_slice()), labels.rank()).values().sum()
}

/// Some permutation `s` of `S_{n+1}` has `s(t1 + rho) = t2 + rho`.
pub fn affine_by_permutations(t1: &GlTuple, t2: &GlTuple) -> bool {
    let len = t1.entries().len();
    if len != t2.entries().len() {
        return false;
    }
    let a: Vec<i64> = t1.entries().iter().enumerate().map(|(i, x)| x + i as i64 + 1).collect();
    let b: Vec<i64> = t2.entries().iter().enumerate().map(|(i, x)| x + i as i64 + 1).collect();
    (0..len).permutations(len).any(|p| p.iter().enumerate().all(|(i, &j)| a[j] == b[i]))
}

/// All label sequences of length `n-1` with entries in `0..=max`.
pub fn all_labels(n: usize, max: i64) -> Vec<Labels> {
    (0..n - 1)
        .map(|_| 0..=max)
        .multi_cartesian_product()
        .map(|v| Labels::new(v).unwrap())
        .collect()
}

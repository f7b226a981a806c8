//! Type-A tensor combinatorics: Weyl dimensions, Pieri and
//! Littlewood–Richardson decompositions, `gl(n+1) -> gl(n)` interlacing and
//! the graded symbol space of a bilinear pairing.
//!
//! Decompositions work directly on label sequences. Since `(E ⊗ F)^* =
//! E^* ⊗ F^*`, decomposing dual labels yields the dual labels of the
//! components, which is exactly the notation used for bundles.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmodule::{
    from_bcoords, geometric_weight, labels_from_weight_and_gweight, to_bcoords, GModuleSpec, Labels,
    PModuleSpec,
};
use crate::rootdata::GlTuple;
use crate::scalar::Scalar;

/// A direct sum of irreducible `sl(r)`-modules with multiplicities, keyed and
/// ordered by labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    rank: usize,
    #[serde(serialize_with = "serialize_terms")]
    terms: BTreeMap<Labels, u64>,
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<Labels, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (labels, mult) in terms {
        seq.serialize_element(&(labels, mult))?;
    }
    seq.end()
}

impl Decomposition {
    pub fn empty(rank: usize) -> Self {
        Decomposition {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(labels: Labels) -> Self {
        let mut d = Decomposition::empty(labels.rank());
        d.add(labels, 1);
        d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add(&mut self, labels: Labels, mult: u64) {
        assert_eq!(labels.rank(), self.rank, "labels of the wrong rank");
        if mult > 0 {
            *self.terms.entry(labels).or_insert(0) += mult;
        }
    }

    pub fn merge(&mut self, other: &Decomposition) {
        for (l, &m) in &other.terms {
            self.add(l.clone(), m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Labels, u64)> {
        self.terms.iter().map(|(l, &m)| (l, m))
    }

    pub fn multiplicity(&self, labels: &Labels) -> u64 {
        self.terms.get(labels).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn total_dimension(&self) -> u64 {
        self.terms.iter().map(|(l, &m)| m * weyl_dimension(l)).sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.terms.values().all(|&m| m == 1)
    }

    /// Tensor every summand with `labels` and collect.
    pub fn tensor_with(&self, labels: &Labels) -> Decomposition {
        let mut out = Decomposition::empty(self.rank);
        for (l, &m) in &self.terms {
            for (c, cm) in lr_tensor(l, labels).terms() {
                out.add(c.clone(), m * cm);
            }
        }
        out
    }
}

/// Partition with at most `r-1` rows: `mu_i = a_i + ... + a_{r-1}`.
pub fn labels_to_partition(labels: &Labels) -> Vec<usize> {
    let a = labels.as_slice();
    (0..a.len()).map(|i| a[i..].iter().sum::<i64>() as usize).collect()
}

/// Labels of the `sl(rank)`-module of a partition with at most `rank` rows.
pub fn partition_to_labels(part: &[usize], rank: usize) -> Labels {
    assert!(part.len() <= rank, "partition has more rows than the rank allows");
    let row = |i: usize| part.get(i).copied().unwrap_or(0) as i64;
    Labels::new((0..rank - 1).map(|i| row(i) - row(i + 1)).collect()).expect("partition is weakly decreasing")
}

/// Weyl dimension formula: `prod_{i<j} (sum_{k=i}^{j-1} (a_k + 1)) / (j - i)`.
pub fn weyl_dimension(labels: &Labels) -> u64 {
    let a = labels.as_slice();
    let r = labels.rank();
    let mut dim = Ratio::<i128>::from_integer(1);
    for i in 0..r {
        for j in i + 1..r {
            let numer: i64 = a[i..j].iter().map(|x| x + 1).sum();
            dim *= Ratio::new(i128::from(numer), (j - i) as i128);
        }
    }
    assert!(dim.is_integer(), "Weyl dimension must be integral");
    u64::try_from(dim.to_integer()).expect("dimension fits in u64")
}

/// `⊙^l g_1 ⊗ E` as `sl(n)`-modules: add a horizontal strip of `l` boxes.
pub fn pieri_sym(labels: &Labels, l: usize) -> Result<Decomposition> {
    let n = labels.rank();
    let mut shape = labels_to_partition(labels);
    shape.push(0);
    let mut out = Decomposition::empty(n);
    let mut strip = vec![0usize; n];
    horizontal_strips(&shape, l, 0, &mut strip, &mut |grown| {
        out.add(partition_to_labels(grown, n), 1);
    });
    if !out.is_multiplicity_free() {
        return Err(Error::InvariantViolation(format!(
            "symmetric power decomposition of {labels} has multiplicities"
        )));
    }
    Ok(out)
}

/// Visits every shape obtained from `shape` by adding a horizontal strip of
/// `remaining` boxes in rows `row..`, never growing past `shape.len()` rows.
fn horizontal_strips(
    shape: &[usize],
    remaining: usize,
    row: usize,
    strip: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if row == shape.len() {
        if remaining == 0 {
            let grown: Vec<usize> = shape.iter().zip(strip.iter()).map(|(s, c)| s + c).collect();
            visit(&grown);
        }
        return;
    }
    let cap = if row == 0 {
        remaining
    } else {
        (shape[row - 1] - shape[row]).min(remaining)
    };
    for c in 0..=cap {
        strip[row] = c;
        horizontal_strips(shape, remaining - c, row + 1, strip, visit);
    }
    strip[row] = 0;
}

/// Littlewood–Richardson coefficients `c^nu_{lambda mu}` for all `nu` with at
/// most `max_rows` rows, by enumeration of LR skew tableaux.
pub fn lr_coefficients(lambda: &[usize], mu: &[usize], max_rows: usize) -> BTreeMap<Vec<usize>, u64> {
    let mut shape = vec![0usize; max_rows];
    for (i, &x) in lambda.iter().enumerate() {
        if x > 0 {
            assert!(i < max_rows, "lambda exceeds row bound");
            shape[i] = x;
        }
    }
    let mu: Vec<usize> = mu.iter().copied().filter(|&x| x > 0).collect();
    let mut filling: Vec<Vec<usize>> = vec![Vec::new(); max_rows];
    let mut out = BTreeMap::new();
    place_label(&mut shape, &mut filling, &mu, 0, &mut out);
    out
}

fn place_label(
    shape: &mut Vec<usize>,
    filling: &mut Vec<Vec<usize>>,
    mu: &[usize],
    label: usize,
    out: &mut BTreeMap<Vec<usize>, u64>,
) {
    if label == mu.len() {
        if is_lattice(filling, mu.len()) {
            let mut key = shape.clone();
            while key.last() == Some(&0) {
                key.pop();
            }
            *out.entry(key).or_insert(0) += 1;
        }
        return;
    }
    let base = shape.clone();
    let mut strip = vec![0usize; shape.len()];
    let mut grown_shapes = Vec::new();
    horizontal_strips(&base, mu[label], 0, &mut strip, &mut |grown| grown_shapes.push(grown.to_vec()));
    for grown in grown_shapes {
        // label t may only appear from row t-1 on
        if grown[..label].iter().zip(&base[..label]).any(|(g, b)| g != b) {
            continue;
        }
        for (row, (&g, &b)) in grown.iter().zip(&base).enumerate() {
            filling[row].extend(std::iter::repeat_n(label, g - b));
        }
        *shape = grown.clone();
        place_label(shape, filling, mu, label + 1, out);
        for (row, (&g, &b)) in grown.iter().zip(&base).enumerate() {
            let len = filling[row].len();
            filling[row].truncate(len - (g - b));
        }
        *shape = base.clone();
    }
}

/// Reading rows top to bottom, right to left, every prefix has at least as
/// many `t` as `t+1`.
fn is_lattice(filling: &[Vec<usize>], labels: usize) -> bool {
    let mut counts = vec![0usize; labels];
    for row in filling {
        for &t in row.iter().rev() {
            counts[t] += 1;
            if t > 0 && counts[t] > counts[t - 1] {
                return false;
            }
        }
    }
    true
}

/// Full decomposition of the `sl(r)` tensor product `E ⊗ F`.
pub fn lr_tensor(e: &Labels, f: &Labels) -> Decomposition {
    assert_eq!(e.rank(), f.rank(), "tensor factors of different rank");
    let r = e.rank();
    let (pe, pf) = (labels_to_partition(e), labels_to_partition(f));
    let (big, small) = if pe.iter().sum::<usize>() >= pf.iter().sum::<usize>() {
        (pe, pf)
    } else {
        (pf, pe)
    };
    let mut out = Decomposition::empty(r);
    for (nu, c) in lr_coefficients(&big, &small, r) {
        out.add(partition_to_labels(&nu, r), c);
    }
    out
}

/// Composition factors in slot `l` of `V_M(E)(twist)`: every
/// `(-twist + l | b~)` with `b~` interlacing `b` and `|b| - |b~| = l`.
pub fn interlacing_slot(g: &GModuleSpec, twist: i64, l: usize) -> Vec<PModuleSpec> {
    let top = to_bcoords(g, twist);
    let b = top.tail().to_vec();
    let mut out = Vec::new();
    let mut current = vec![0i64; b.len()];
    interlace(&b, 0, l as i64, &mut current, &mut |tilde| {
        let mut entries = vec![top.head() + l as i64];
        entries.extend_from_slice(tilde);
        let t = GlTuple::new(entries).expect("rank >= 2");
        out.push(from_bcoords(&t).expect("interlacing tuples are p-dominant"));
    });
    out
}

fn interlace(b: &[i64], i: usize, remaining: i64, current: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64])) {
    if i == b.len() {
        if remaining == 0 {
            visit(current);
        }
        return;
    }
    let lower = if i == 0 { 0 } else { b[i - 1] };
    // lowering b_i by d, with d bounded by the remaining budget
    let max_drop = (b[i] - lower).min(remaining);
    for drop in 0..=max_drop {
        current[i] = b[i] - drop;
        interlace(b, i + 1, remaining - drop, current, visit);
    }
}

/// One graded piece `⊙^l g_1 ⊗ V ⊗ ⊙^{M-l} g_1 ⊗ W` of the symbol space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolPiece {
    /// Number of derivatives falling on the first argument.
    pub v_derivatives: usize,
    pub decomposition: Decomposition,
}

/// The symbol space of an order-`M` pairing `V × W -> *`, graded by how the
/// derivatives are distributed. All components have geometric weight
/// `omega_1 + omega_2 + M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolSpace {
    pub order: usize,
    pub pieces: Vec<SymbolPiece>,
    pub components: Vec<(PModuleSpec, u64)>,
}

impl SymbolSpace {
    pub fn multiplicity(&self, labels: &Labels) -> u64 {
        self.pieces.iter().map(|p| p.decomposition.multiplicity(labels)).sum()
    }
}

pub fn symbol_space(v: &PModuleSpec, w: &PModuleSpec, order: usize) -> Result<SymbolSpace> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    let mut pieces = Vec::with_capacity(order + 1);
    let mut total = Decomposition::empty(v.rank());
    for l in (0..=order).rev() {
        let left = pieri_sym(v.labels(), l)?;
        let right = pieri_sym(w.labels(), order - l)?;
        let mut dec = Decomposition::empty(v.rank());
        for (r, rm) in right.terms() {
            let mut part = left.tensor_with(r);
            part.terms.values_mut().for_each(|m| *m *= rm);
            dec.merge(&part);
        }
        total.merge(&dec);
        pieces.push(SymbolPiece {
            v_derivatives: l,
            decomposition: dec,
        });
    }
    let gw = geometric_weight::<crate::Rational>(v)
        + geometric_weight::<crate::Rational>(w)
        + crate::Rational::from_int(order as i64);
    let components = total
        .terms()
        .map(|(l, m)| Ok((labels_from_weight_and_gweight(l, &gw)?, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolSpace {
        order,
        pieces,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(v: &[i64]) -> Labels {
        Labels::new(v.to_vec()).unwrap()
    }

    fn vector_fields(n: usize) -> Labels {
        Labels::fundamental(n, n - 1)
    }

    #[test]
    fn weyl_dimension_examples() {
        assert_eq!(weyl_dimension(&lab(&[0, 0, 0])), 1);
        for n in 2..=7 {
            assert_eq!(weyl_dimension(&Labels::fundamental(n, 1)), n as u64);
        }
        assert_eq!(weyl_dimension(&lab(&[0, 1, 0])), 6);
        assert_eq!(weyl_dimension(&lab(&[1, 1])), 8);
        assert_eq!(weyl_dimension(&lab(&[1, 0, 1, 0])), 45);
    }

    #[test]
    fn pieri_examples() {
        for n in 2..=6 {
            let vf = vector_fields(n);
            assert_eq!(pieri_sym(&vf, 0).unwrap(), Decomposition::single(vf.clone()));
            let one = pieri_sym(&vf, 1).unwrap();
            let adjoint = Labels::fundamental(n, 1).add(&vf);
            let mut expected = Decomposition::single(Labels::trivial(n));
            expected.add(adjoint, 1);
            assert_eq!(one, expected);

            let two = pieri_sym(&vf, 2).unwrap();
            let mut expected = Decomposition::single(Labels::fundamental(n, 1));
            let mut top = Labels::fundamental(n, 1).add(&Labels::fundamental(n, 1));
            top = top.add(&vf);
            expected.add(top, 1);
            assert_eq!(two, expected);
        }
    }

    #[test]
    fn lr_cp4_decomposition() {
        // (0,0,1) ⊗ g_1 ⊗ (0,1,0) on sl(4)
        let d = pieri_sym(&lab(&[0, 0, 1]), 1).unwrap().tensor_with(&lab(&[0, 1, 0]));
        let mut expected = Decomposition::empty(4);
        expected.add(lab(&[0, 1, 0]), 2);
        expected.add(lab(&[1, 1, 1]), 1);
        expected.add(lab(&[2, 0, 0]), 1);
        expected.add(lab(&[0, 0, 2]), 1);
        assert_eq!(d, expected);
    }

    #[test]
    fn lr_with_trivial() {
        let e = lab(&[2, 0, 1]);
        assert_eq!(lr_tensor(&e, &Labels::trivial(4)), Decomposition::single(e.clone()));
        assert_eq!(lr_tensor(&Labels::trivial(4), &e), Decomposition::single(e));
    }

    #[test]
    fn lr_known_coefficient() {
        // c^{(3,2,1)}_{(2,1),(2,1)} = 2
        let c = lr_coefficients(&[2, 1], &[2, 1], 3);
        assert_eq!(c[&vec![3, 2, 1]], 2);
        // s42 + s411 + s33 + 2 s321 + s222 within three rows
        assert_eq!(c.values().sum::<u64>(), 6);
        let unrestricted = lr_coefficients(&[2, 1], &[2, 1], 6);
        assert_eq!(unrestricted.values().sum::<u64>(), 8);
        assert_eq!(unrestricted[&vec![2, 2, 1, 1]], 1);
    }

    #[test]
    fn interlacing_examples() {
        let g = GModuleSpec::from_ints(&[1, 0, 1, 0]).unwrap();
        assert_eq!(interlacing_slot(&g, 0, 0), vec![g.top_factor()]);
        let mut s1 = interlacing_slot(&g, 0, 1);
        s1.sort();
        let mut expected = vec![
            PModuleSpec::from_ints(0, &[0, 0, 1]).unwrap(),
            PModuleSpec::from_ints(-1, &[1, 1, 0]).unwrap(),
        ];
        expected.sort();
        assert_eq!(s1, expected);
        assert_eq!(
            interlacing_slot(&g, 0, 2),
            vec![PModuleSpec::from_ints(-2, &[1, 0, 1]).unwrap()]
        );
        assert!(interlacing_slot(&g, 0, 3).is_empty());
    }

    #[test]
    fn weighted_function_slots() {
        for n in 2..=5 {
            for m in 1..=4 {
                let g = GModuleSpec::m_module(m, &Labels::trivial(n)).unwrap();
                for w in -3..=3 {
                    for l in 0..=m as usize {
                        let mut lab = vec![0; n - 1];
                        lab[0] = l as i64;
                        let expected = PModuleSpec::from_ints(w - 2 * l as i64, &lab).unwrap();
                        assert_eq!(interlacing_slot(&g, w - m, l), vec![expected]);
                    }
                    assert!(interlacing_slot(&g, w - m, m as usize + 1).is_empty());
                }
            }
        }
    }

    #[test]
    fn symbol_space_counts() {
        for n in 2..=6 {
            let f = PModuleSpec::line_bundle(n, 3);
            let tm = PModuleSpec::new(2, vector_fields(n)).unwrap();
            let s = symbol_space(&f, &tm, 2).unwrap();
            assert_eq!(s.pieces.len(), 3);
            assert_eq!(s.multiplicity(&Labels::fundamental(n, 1)), 4);

            let first = symbol_space(&f, &tm, 1).unwrap();
            assert_eq!(first.pieces.len(), 2);
            let zero = symbol_space(&f, &tm, 0).unwrap();
            assert_eq!(zero.pieces.len(), 1);
            assert_eq!(zero.pieces[0].decomposition, lr_tensor(f.labels(), tm.labels()));
        }
    }
}

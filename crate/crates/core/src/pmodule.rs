//! Irreducible `p`-modules (homogeneous bundles on `CP_n`) and irreducible
//! `g`-modules in crossed/uncrossed Dynkin notation.
//!
//! Labels always denote the highest weight of the *dual* representation. The
//! only place that reinterprets them as an actual highest weight is
//! [`highest_weight`].

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rootdata::{GlTuple, LWeight};
use crate::scalar::Scalar;

/// Non-negative Dynkin labels over the uncrossed nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Labels(Vec<i64>);

impl Labels {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.iter().any(|&v| v < 0) {
            return Err(Error::NotDominant(values));
        }
        Ok(Labels(values))
    }

    /// The trivial representation of `sl(n)`.
    pub fn trivial(n: usize) -> Self {
        Labels(vec![0; n - 1])
    }

    /// Label vector with a single `1` at 1-based node `i` of `sl(n)`.
    pub fn fundamental(n: usize, i: usize) -> Self {
        let mut v = vec![0; n - 1];
        v[i - 1] = 1;
        Labels(v)
    }

    /// Rank of the `sl` algebra these labels belong to.
    pub fn rank(&self) -> usize {
        self.0.len() + 1
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn max_label(&self) -> i64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `sum_i (n - i) a_i`, the label part of the geometric weight numerator.
    pub fn weighted_sum(&self) -> i64 {
        let n = self.rank() as i64;
        self.0
            .iter()
            .enumerate()
            .map(|(i, &a)| (n - 1 - i as i64) * a)
            .sum()
    }

    /// Dual labels: the reversed sequence.
    pub fn dual(&self) -> Labels {
        Labels(self.0.iter().rev().copied().collect())
    }

    pub fn add(&self, other: &Labels) -> Labels {
        assert_eq!(self.0.len(), other.0.len());
        Labels(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Labels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Labels {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// An irreducible `p`-module: one crossed node followed by `n-1` uncrossed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PModuleSpec {
    labels: Labels,
    crossed: i64,
}

impl PModuleSpec {
    pub fn new(crossed: i64, labels: Labels) -> Result<Self> {
        if labels.rank() < 2 {
            return Err(Error::RankTooSmall(labels.rank()));
        }
        Ok(PModuleSpec { labels, crossed })
    }

    pub fn from_ints(crossed: i64, labels: &[i64]) -> Result<Self> {
        Self::new(crossed, Labels::new(labels.to_vec())?)
    }

    /// `O(w)`.
    pub fn line_bundle(n: usize, w: i64) -> Self {
        PModuleSpec {
            labels: Labels::trivial(n),
            crossed: w,
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.rank()
    }

    pub fn crossed(&self) -> i64 {
        self.crossed
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// Tensor with `O(t)`.
    pub fn twisted(&self, t: i64) -> Self {
        PModuleSpec {
            labels: self.labels.clone(),
            crossed: self.crossed + t,
        }
    }

    /// A representative `(0 | k, k + a_1, ...)` of the corresponding weight.
    pub fn to_gl_tuple(&self) -> GlTuple {
        let mut entries = vec![0, self.crossed];
        for &a in self.labels.as_slice() {
            entries.push(entries.last().unwrap() + a);
        }
        GlTuple::new(entries).expect("rank >= 2")
    }
}

impl fmt::Display for PModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.crossed)?;
        for a in self.labels.as_slice() {
            write!(f, " o{a}")?;
        }
        Ok(())
    }
}

impl FromStr for PModuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

/// A finite-dimensional irreducible `g`-module: `n` uncrossed labels
/// `(M, a_1, ..., a_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GModuleSpec {
    labels: Labels,
}

impl GModuleSpec {
    pub fn new(labels: Labels) -> Result<Self> {
        if labels.rank() < 3 {
            return Err(Error::RankTooSmall(labels.rank().saturating_sub(1)));
        }
        Ok(GModuleSpec { labels })
    }

    pub fn from_ints(labels: &[i64]) -> Result<Self> {
        Self::new(Labels::new(labels.to_vec())?)
    }

    /// `V_M(E)` for `E` given by its `sl(n)` labels.
    pub fn m_module(order: i64, base: &Labels) -> Result<Self> {
        let mut v = vec![order];
        v.extend_from_slice(base.as_slice());
        Self::new(Labels::new(v)?)
    }

    /// Rank `n` of the projective space (the module lives on `sl(n+1)`).
    pub fn rank(&self) -> usize {
        self.labels.rank() - 1
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    /// The label over the node that is crossed for `p`.
    pub fn top(&self) -> i64 {
        self.labels.as_slice()[0]
    }

    /// The `sl(n)` labels left after erasing the first node.
    pub fn levi_labels(&self) -> Labels {
        Labels(self.labels.as_slice()[1..].to_vec())
    }

    /// Length `N = sum a_i + M` of the composition series, minus one.
    pub fn series_length(&self) -> i64 {
        self.labels.total()
    }

    /// The top composition factor (untwisted).
    pub fn top_factor(&self) -> PModuleSpec {
        PModuleSpec {
            labels: self.levi_labels(),
            crossed: self.top(),
        }
    }
}

impl fmt::Display for GModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.labels.as_slice().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "o{a}")?;
        }
        Ok(())
    }
}

impl FromStr for GModuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_g_spec(s)
    }
}

/// `(-twist | b_0, ..., b_{n-1})` with `b_0 = M`, `b_j = M + a_1 + ... + a_j`.
pub fn to_bcoords(g: &GModuleSpec, twist: i64) -> GlTuple {
    let mut entries = vec![-twist];
    let mut acc = 0;
    for &a in g.labels.as_slice() {
        acc += a;
        entries.push(acc);
    }
    GlTuple::new(entries).expect("rank >= 2")
}

/// Reads `(a | b_0, ..., b_{n-1})` as the `p`-module with crossed entry
/// `b_0 - a` and labels `b_j - b_{j-1}`.
pub fn from_bcoords(t: &GlTuple) -> Result<PModuleSpec> {
    let b = t.tail();
    let labels: Vec<i64> = b.windows(2).map(|w| w[1] - w[0]).collect();
    if labels.iter().any(|&d| d < 0) {
        return Err(Error::NotDominant(t.entries().to_vec()));
    }
    Ok(PModuleSpec {
        labels: Labels(labels),
        crossed: b[0] - t.head(),
    })
}

/// Eigenvalue of the grading element:
/// `-(n k + sum_i (n-i) a_i) / (n+1)`.
pub fn geometric_weight<T: Scalar>(p: &PModuleSpec) -> T {
    let n = p.rank() as i64;
    let numer = n * p.crossed + p.labels.weighted_sum();
    -T::ratio(numer, n + 1)
}

/// Highest weight of the underlying `sl(n)`-representation `E` (not of its
/// dual): `lambda_m = a_1 + ... + a_{n-m}`.
pub fn highest_weight<T: Scalar>(p: &PModuleSpec) -> LWeight<T> {
    labels_highest_weight(&p.labels)
}

pub fn labels_highest_weight<T: Scalar>(labels: &Labels) -> LWeight<T> {
    let n = labels.rank();
    let a = labels.as_slice();
    let coords = (1..=n)
        .map(|m| T::from_int(a[..n - m].iter().sum()))
        .collect();
    LWeight::new(coords).expect("rank >= 2")
}

/// The unique bundle with the given labels and geometric weight.
pub fn labels_from_weight_and_gweight<T: Scalar>(labels: &Labels, gw: &T) -> Result<PModuleSpec> {
    let n = labels.rank() as i64;
    let k = (-(T::from_int(n + 1) * gw.clone()) - T::from_int(labels.weighted_sum())) / T::from_int(n);
    match k.as_integer() {
        Some(crossed) => PModuleSpec::new(crossed, labels.clone()),
        None => Err(Error::NoSuchBundle(k.to_string())),
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

fn parse_int(pos: usize, body: &str) -> Result<i64> {
    body.parse::<i64>()
        .map_err(|_| Error::parse(pos, format!("expected an integer, found {body:?}")))
}

fn parse_label(pos: usize, tok: &str) -> Result<i64> {
    let body = tok
        .strip_prefix('o')
        .ok_or_else(|| Error::parse(pos, format!("expected uncrossed node 'o<uint>', found {tok:?}")))?;
    let value = parse_int(pos + 1, body)?;
    if value < 0 {
        return Err(Error::parse(pos + 1, "uncrossed labels must be non-negative"));
    }
    Ok(value)
}

/// Parses `"x<int> o<uint> ..."`; the rank is the node count.
pub fn parse_spec(text: &str) -> Result<PModuleSpec> {
    let mut toks = tokens(text);
    let (pos, first) = toks.next().ok_or_else(|| Error::parse(0, "empty bundle spec"))?;
    let body = first
        .strip_prefix('x')
        .ok_or_else(|| Error::parse(pos, format!("expected crossed node 'x<int>', found {first:?}")))?;
    let crossed = parse_int(pos + 1, body)?;
    let labels = toks
        .map(|(pos, tok)| parse_label(pos, tok))
        .collect::<Result<Vec<_>>>()?;
    if labels.is_empty() {
        return Err(Error::parse(text.len(), "a bundle needs at least two nodes"));
    }
    PModuleSpec::new(crossed, Labels(labels))
}

pub fn render_spec(p: &PModuleSpec) -> String {
    p.to_string()
}

/// Parses `"o<uint> o<uint> ..."` as a `g`-module; needs at least two nodes.
pub fn parse_g_spec(text: &str) -> Result<GModuleSpec> {
    let labels = tokens(text)
        .map(|(pos, tok)| parse_label(pos, tok))
        .collect::<Result<Vec<_>>>()?;
    if labels.len() < 2 {
        return Err(Error::parse(text.len(), "a g-module needs at least two nodes"));
    }
    GModuleSpec::new(Labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn bcoords_examples() {
        let g = GModuleSpec::from_ints(&[2, 0, 0, 0]).unwrap();
        assert_eq!(to_bcoords(&g, 0).entries(), &[0, 2, 2, 2, 2]);
        let g = GModuleSpec::from_ints(&[1, 0, 1, 0]).unwrap();
        assert_eq!(to_bcoords(&g, 0).entries(), &[0, 1, 1, 2, 2]);
        let g = GModuleSpec::from_ints(&[1, 0, 0, 1]).unwrap();
        assert_eq!(to_bcoords(&g, 0).entries(), &[0, 1, 1, 1, 2]);
    }

    #[test]
    fn from_bcoords_examples() {
        let t = |v: &[i64]| GlTuple::new(v.to_vec()).unwrap();
        assert_eq!(
            from_bcoords(&t(&[0, 1, 1, 2, 2])).unwrap(),
            PModuleSpec::from_ints(1, &[0, 1, 0]).unwrap()
        );
        assert_eq!(
            from_bcoords(&t(&[1, 1, 1, 2, 2])).unwrap(),
            PModuleSpec::from_ints(0, &[0, 1, 0]).unwrap()
        );
        assert_eq!(
            from_bcoords(&t(&[0, 1, 1, 1, 2])).unwrap(),
            PModuleSpec::from_ints(1, &[0, 0, 1]).unwrap()
        );
        assert!(matches!(from_bcoords(&t(&[0, 2, 1, 3])), Err(Error::NotDominant(_))));
    }

    #[test]
    fn geometric_weight_examples() {
        for n in 2..=8usize {
            let ni = n as i64;
            for w in -4..=4 {
                let o = PModuleSpec::line_bundle(n, w);
                assert_eq!(geometric_weight::<Rational>(&o), q(-w * ni, ni + 1));
                let mut vf = vec![0; n - 1];
                vf[n - 2] = 1;
                let tm = PModuleSpec::from_ints(1 + w, &vf).unwrap();
                assert_eq!(geometric_weight::<Rational>(&tm), q(-(ni * w + ni + 1), ni + 1));
            }
            assert_eq!(geometric_weight::<Rational>(&PModuleSpec::line_bundle(n, 0)), q(0, 1));
        }
    }

    #[test]
    fn tangent_and_cotangent_weights() {
        // g_{-1} and g_1 have geometric weight -1 and 1
        for n in 2..=6 {
            let mut vf = vec![0; n - 1];
            vf[n - 2] = 1;
            let tm = PModuleSpec::from_ints(1, &vf).unwrap();
            let mut one = vec![0; n - 1];
            one[0] = 1;
            let omega = PModuleSpec::from_ints(-2, &one).unwrap();
            assert_eq!(geometric_weight::<Rational>(&tm), q(-1, 1));
            assert_eq!(geometric_weight::<Rational>(&omega), q(1, 1));
        }
    }

    #[test]
    fn highest_weight_examples() {
        let hw = |l: &[i64]| highest_weight::<Rational>(&PModuleSpec::from_ints(0, l).unwrap());
        assert_eq!(hw(&[0, 0, 1]), LWeight::from_ints(&[1, 0, 0, 0]).unwrap());
        assert_eq!(hw(&[0, 0, 0]), LWeight::zero(4));
        assert_eq!(hw(&[1, 0, 0]), LWeight::from_ints(&[1, 1, 1, 0]).unwrap());
        // labels (1,0,...,0) are the labels of g_1, whose highest weight is -L_n
        assert_eq!(hw(&[1, 0, 0]), LWeight::g1_highest(4));
    }

    #[test]
    fn weight_inversion_examples() {
        for n in 3..=6usize {
            for (v, w) in [(0, 0), (2, -3), (-1, 5)] {
                let mut vf = vec![0; n - 1];
                vf[n - 2] = 1;
                let om1 = geometric_weight::<Rational>(&PModuleSpec::line_bundle(n, w));
                let om2 = geometric_weight::<Rational>(&PModuleSpec::from_ints(1 + v, &vf).unwrap());
                let gw = om1 + om2 + q(2, 1);
                let target = labels_from_weight_and_gweight(&Labels::fundamental(n, 1), &gw).unwrap();
                assert_eq!(target.crossed(), v + w - 2);
            }
        }
        let trivial = labels_from_weight_and_gweight(&Labels::trivial(4), &q(0, 1)).unwrap();
        assert_eq!(trivial, PModuleSpec::line_bundle(4, 0));
        // weighted 2-forms on CP_4: x(w-3) o0 o1 o0 with weight w, times vector fields
        let (v, w) = (3, -2);
        let om = geometric_weight::<Rational>(&PModuleSpec::from_ints(1 + v, &[0, 0, 1]).unwrap())
            + geometric_weight::<Rational>(&PModuleSpec::from_ints(w - 3, &[0, 1, 0]).unwrap())
            + q(1, 1);
        let target = labels_from_weight_and_gweight(&Labels::new(vec![0, 1, 0]).unwrap(), &om).unwrap();
        assert_eq!(target.crossed(), v + w - 3);
    }

    #[test]
    fn non_integral_crossed_entry_is_rejected() {
        let err = labels_from_weight_and_gweight(&Labels::trivial(3), &q(1, 2)).unwrap_err();
        assert!(matches!(err, Error::NoSuchBundle(_)));
    }

    #[test]
    fn parse_examples() {
        let p: PModuleSpec = "x2 o0 o1 o0".parse().unwrap();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.crossed(), 2);
        assert_eq!(p.labels().as_slice(), &[0, 1, 0]);
        let p = parse_spec("x-2 o1 o0").unwrap();
        assert_eq!(p.crossed(), -2);
        assert_eq!(p.labels().as_slice(), &[1, 0]);
        for s in ["x2 o0 o1 o0", "x-1 o1 o0 o2", "x0 o0"] {
            assert_eq!(render_spec(&parse_spec(s).unwrap()), s);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_spec("x1 o0 q3").unwrap_err(), Error::parse(6, "expected uncrossed node 'o<uint>', found \"q3\""));
        assert!(matches!(parse_spec("o1 o0"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_spec("x1 o-1"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_spec("x1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("xa o1"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_spec(""), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn g_spec_round_trip() {
        let g: GModuleSpec = "o1 o0 o1 o0".parse().unwrap();
        assert_eq!(g.rank(), 4);
        assert_eq!(g.to_string(), "o1 o0 o1 o0");
        assert_eq!(g.top_factor(), PModuleSpec::from_ints(1, &[0, 1, 0]).unwrap());
    }
}

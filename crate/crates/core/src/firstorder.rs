//! First-order pairings: Casimir constants, first-order exclusions, family
//! dimensions and explicit coefficients for multiplicity-one targets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pmodule::{geometric_weight, labels_from_weight_and_gweight, labels_highest_weight, Labels, PModuleSpec};
use crate::rootdata::{casimir_value, LWeight};
use crate::scalar::Scalar;
use crate::tensor::{lr_tensor, pieri_sym};
use crate::Rational;

/// `c = -1/2 [ (delta, delta+2rho) - (gamma, gamma+2rho) - (alpha, alpha+2rho) ]`.
pub fn casimir_constant<T: Scalar>(gamma: &LWeight<T>, delta: &LWeight<T>) -> Result<T> {
    if gamma.rank() != delta.rank() {
        return Err(Error::RankMismatch(gamma.rank(), delta.rank()));
    }
    let alpha = LWeight::<T>::g1_highest(gamma.rank());
    let bracket = casimir_value(delta) - casimir_value(gamma) - casimir_value(&alpha);
    Ok(-bracket / T::from_int(2))
}

/// Casimir constant for a source with labels `source` and a component
/// `component` of `g_1 ⊗ source`.
pub fn casimir_for_labels<T: Scalar>(source: &Labels, component: &Labels) -> Result<T> {
    casimir_constant(&labels_highest_weight::<T>(source), &labels_highest_weight::<T>(component))
}

/// The crossed entry at which a bundle with labels `source` has geometric
/// weight equal to the Casimir constant of `component`. May be non-integral,
/// in which case no bundle is ever excluded by this component.
pub fn excluded_crossed<T: Scalar>(source: &Labels, component: &Labels) -> Result<T> {
    let c: T = casimir_for_labels(source, component)?;
    let n = source.rank() as i64;
    Ok((-(T::from_int(n + 1) * c) - T::from_int(source.weighted_sum())) / T::from_int(n))
}

/// One component of `g_1 ⊗ V` with its Casimir constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasimirRecord {
    pub source: PModuleSpec,
    pub component: Labels,
    pub constant: Rational,
    /// Crossed entry of the source at which this component is excluded.
    pub excluded_at: Rational,
    pub excluded: bool,
    /// `V(tau)`: the bundle a first-order operator would map into.
    pub operator_target: PModuleSpec,
}

impl CasimirRecord {
    /// `omega - c` for the source.
    pub fn defect(&self) -> Rational {
        geometric_weight::<Rational>(&self.source) - self.constant
    }
}

pub fn first_order_excluded(v: &PModuleSpec) -> Result<Vec<CasimirRecord>> {
    let omega = geometric_weight::<Rational>(v);
    let target_weight = omega + Rational::from_int(1);
    pieri_sym(v.labels(), 1)?
        .terms()
        .map(|(tau, _)| {
            let constant: Rational = casimir_for_labels(v.labels(), tau)?;
            Ok(CasimirRecord {
                source: v.clone(),
                component: tau.clone(),
                constant,
                excluded_at: excluded_crossed(v.labels(), tau)?,
                excluded: omega == constant,
                operator_target: labels_from_weight_and_gweight(tau, &target_weight)?,
            })
        })
        .collect()
}

/// Which side of a first-order family is obstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    None,
    First,
    Second,
    /// Both sides excluded; the family count is not asserted.
    Both,
}

impl Exclusion {
    fn from_flags(v: bool, w: bool) -> Self {
        match (v, w) {
            (false, false) => Exclusion::None,
            (true, false) => Exclusion::First,
            (false, true) => Exclusion::Second,
            (true, true) => Exclusion::Both,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Exclusion::None => "none",
            Exclusion::First => "first",
            Exclusion::Second => "second",
            Exclusion::Both => "both",
        }
    }
}

/// `a` multiplies the term differentiating the first section, `b` the term
/// differentiating the second. `normalized_*` are scaled by `-(n+1)/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficients {
    pub a: Rational,
    pub b: Rational,
    pub normalized_a: Rational,
    pub normalized_b: Rational,
}

impl Coefficients {
    fn new(a: Rational, b: Rational, n: usize) -> Self {
        let scale = -Rational::new(n as i64 + 1, n as i64);
        Coefficients {
            normalized_a: a * scale,
            normalized_b: b * scale,
            a,
            b,
        }
    }

    /// True if `(a, b)` and `(a', b')` define the same family.
    pub fn proportional_to(&self, a: Rational, b: Rational) -> bool {
        self.a * b == self.b * a && !(a == Rational::from_int(0) && b == Rational::from_int(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultOne {
    Pairing(Coefficients),
    /// Both Casimir constants are hit: an operator on either side followed by
    /// a projection gives two independent pairings.
    TwoOperators { first: PModuleSpec, second: PModuleSpec },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderFamily {
    pub target: PModuleSpec,
    pub dimension: u64,
    /// Copies of the target inside `V(tau) ⊗ W`, per `tau`.
    pub via_first: Vec<(Labels, u64)>,
    /// Copies of the target inside `V ⊗ W(sigma)`, per `sigma`.
    pub via_second: Vec<(Labels, u64)>,
    pub exclusion: Exclusion,
    pub coefficients: Option<Coefficients>,
    /// Casimir records relevant to this target.
    pub diagnostics: Vec<CasimirRecord>,
}

struct Split {
    first: BTreeMap<Labels, Vec<(Labels, u64)>>,
    second: BTreeMap<Labels, Vec<(Labels, u64)>>,
}

fn split(v: &PModuleSpec, w: &PModuleSpec) -> Result<Split> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    let mut first: BTreeMap<Labels, Vec<(Labels, u64)>> = BTreeMap::new();
    for (tau, tm) in pieri_sym(v.labels(), 1)?.terms() {
        for (e, em) in lr_tensor(tau, w.labels()).terms() {
            first.entry(e.clone()).or_default().push((tau.clone(), tm * em));
        }
    }
    let mut second: BTreeMap<Labels, Vec<(Labels, u64)>> = BTreeMap::new();
    for (sigma, sm) in pieri_sym(w.labels(), 1)?.terms() {
        for (e, em) in lr_tensor(v.labels(), sigma).terms() {
            second.entry(e.clone()).or_default().push((sigma.clone(), sm * em));
        }
    }
    Ok(Split { first, second })
}

pub fn classify_first_order(v: &PModuleSpec, w: &PModuleSpec) -> Result<Vec<FirstOrderFamily>> {
    let Split { first, second } = split(v, w)?;
    let v_records = first_order_excluded(v)?;
    let w_records = first_order_excluded(w)?;
    let gw = geometric_weight::<Rational>(v) + geometric_weight::<Rational>(w) + Rational::from_int(1);
    let mut out = Vec::with_capacity(first.len());
    for (e, via_first) in first {
        let via_second = second.get(&e).cloned().unwrap_or_default();
        let dimension: u64 = via_first.iter().map(|x| x.1).sum();
        let other: u64 = via_second.iter().map(|x| x.1).sum();
        if dimension != other {
            return Err(Error::InvariantViolation(format!(
                "target {e} occurs {dimension} times via the first factor but {other} times via the second"
            )));
        }
        let relevant_v: Vec<_> = v_records
            .iter()
            .filter(|r| via_first.iter().any(|(t, _)| *t == r.component))
            .cloned()
            .collect();
        let relevant_w: Vec<_> = w_records
            .iter()
            .filter(|r| via_second.iter().any(|(s, _)| *s == r.component))
            .cloned()
            .collect();
        let exclusion = Exclusion::from_flags(
            relevant_v.iter().any(|r| r.excluded),
            relevant_w.iter().any(|r| r.excluded),
        );
        let coefficients = if dimension == 1 && exclusion == Exclusion::None {
            Some(Coefficients::new(
                relevant_w[0].defect(),
                -relevant_v[0].defect(),
                v.rank(),
            ))
        } else {
            None
        };
        out.push(FirstOrderFamily {
            target: labels_from_weight_and_gweight(&e, &gw)?,
            dimension,
            via_first,
            via_second,
            exclusion,
            coefficients,
            diagnostics: relevant_v.into_iter().chain(relevant_w).collect(),
        });
    }
    if second.keys().any(|e| !out.iter().any(|f| f.target.labels() == e)) {
        return Err(Error::InvariantViolation(
            "the two presentations of g_1 ⊗ V ⊗ W have different components".into(),
        ));
    }
    Ok(out)
}

/// Explicit pairing `a·(V-derivative term) + b·(W-derivative term)` onto the
/// unique copy of `e`.
pub fn mult_one_coefficients(v: &PModuleSpec, w: &PModuleSpec, e: &Labels) -> Result<MultOne> {
    let Split { first, second } = split(v, w)?;
    let via_first = first.get(e).cloned().unwrap_or_default();
    let via_second = second.get(e).cloned().unwrap_or_default();
    let mult: u64 = via_first.iter().map(|x| x.1).sum();
    if mult != 1 || via_second.len() != 1 || via_second[0].1 != 1 {
        return Err(Error::OutOfScope(format!("{e} occurs {mult} times in g_1 ⊗ V ⊗ W")));
    }
    let record = |source: &PModuleSpec, comp: &Labels| -> Result<CasimirRecord> {
        first_order_excluded(source)?
            .into_iter()
            .find(|r| r.component == *comp)
            .ok_or_else(|| Error::InvariantViolation(format!("{comp} missing from g_1 ⊗ {source}")))
    };
    let tau = record(v, &via_first[0].0)?;
    let sigma = record(w, &via_second[0].0)?;
    if tau.excluded && sigma.excluded {
        return Ok(MultOne::TwoOperators {
            first: tau.operator_target,
            second: sigma.operator_target,
        });
    }
    Ok(MultOne::Pairing(Coefficients::new(sigma.defect(), -tau.defect(), v.rank())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn p(k: i64, l: &[i64]) -> PModuleSpec {
        PModuleSpec::from_ints(k, l).unwrap()
    }

    fn vf(n: usize, v: i64) -> PModuleSpec {
        PModuleSpec::new(1 + v, Labels::fundamental(n, n - 1)).unwrap()
    }

    fn one_form(n: usize, v: i64) -> PModuleSpec {
        PModuleSpec::new(v - 2, Labels::fundamental(n, 1)).unwrap()
    }

    #[test]
    fn casimir_spot_values() {
        for n in 2..=8usize {
            let ni = n as i64;
            let zero = LWeight::<Rational>::zero(n);
            let alpha = LWeight::<Rational>::g1_highest(n);
            assert_eq!(casimir_constant(&zero, &alpha).unwrap(), q(0, 1));
            let vf_labels = Labels::fundamental(n, n - 1);
            let c: Rational = casimir_for_labels(&vf_labels, &Labels::trivial(n)).unwrap();
            assert_eq!(c, q(ni - 1, 1));
        }
    }

    #[test]
    fn vector_field_defects() {
        for n in 2..=8usize {
            let ni = n as i64;
            for v in [-4, -1, 0, 3, 7] {
                let mut defects: Vec<Rational> = first_order_excluded(&vf(n, v))
                    .unwrap()
                    .iter()
                    .map(CasimirRecord::defect)
                    .collect();
                defects.sort();
                let mut expected = vec![-q(ni, ni + 1) * q(ni + v + 1, 1), -q(ni, ni + 1) * q(v + 1, 1)];
                expected.sort();
                assert_eq!(defects, expected);
            }
        }
    }

    #[test]
    fn one_form_exclusion_at_two() {
        for n in 3..=6 {
            for v in -3..=5 {
                let recs = first_order_excluded(&one_form(n, v)).unwrap();
                let sym = recs.iter().find(|r| r.component == Labels::fundamental(n, 1).add(&Labels::fundamental(n, 1))).unwrap();
                assert_eq!(sym.excluded, v == 2);
            }
        }
    }

    #[test]
    fn gradient_exclusion_for_functions() {
        for w in -2..=3 {
            let recs = first_order_excluded(&PModuleSpec::line_bundle(4, w)).unwrap();
            assert_eq!(recs.len(), 1);
            assert_eq!(recs[0].excluded, w == 0);
            assert_eq!(recs[0].operator_target, p(w - 2, &[1, 0, 0]));
        }
    }

    #[test]
    fn functions_times_vector_fields() {
        for n in 2..=6usize {
            for (w, v) in [(3, 2), (-1, 5), (2, -3)] {
                let f = PModuleSpec::line_bundle(n, w);
                let MultOne::Pairing(c) = mult_one_coefficients(&f, &vf(n, v), &Labels::trivial(n)).unwrap() else {
                    panic!("expected a pairing");
                };
                assert_eq!((c.normalized_a, c.normalized_b), (q(n as i64 + v + 1, 1), q(-w, 1)));
            }
        }
    }

    #[test]
    fn functions_times_one_forms() {
        let n = 4;
        let sym = Labels::fundamental(n, 1).add(&Labels::fundamental(n, 1));
        for (w, v) in [(3, 5), (-1, 0)] {
            let f = PModuleSpec::line_bundle(n, w);
            let MultOne::Pairing(c) = mult_one_coefficients(&f, &one_form(n, v), &sym).unwrap() else {
                panic!("expected a pairing");
            };
            assert!(c.proportional_to(q(v - 2, 1), q(-w, 1)));
        }
    }

    #[test]
    fn projective_pairing_constants() {
        for n in 2..=6usize {
            let sym2 = PModuleSpec::new(2, Labels::fundamental(n, n - 1).add(&Labels::fundamental(n, n - 1))).unwrap();
            let MultOne::Pairing(c) = mult_one_coefficients(&sym2, &one_form(n, 0), &Labels::trivial(n)).unwrap() else {
                panic!("expected a pairing");
            };
            assert!(c.proportional_to(q(2, 1), q(n as i64 + 3, 1)));
        }
    }

    #[test]
    fn multiplicity_two_is_out_of_scope() {
        let v = vf(4, 0);
        let w = p(-3, &[0, 1, 0]);
        assert!(matches!(
            mult_one_coefficients(&v, &w, &Labels::new(vec![0, 1, 0]).unwrap()),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn both_sides_excluded() {
        let f = PModuleSpec::line_bundle(3, 0);
        let v = vf(3, -4);
        assert_eq!(
            mult_one_coefficients(&f, &v, &Labels::trivial(3)).unwrap(),
            MultOne::TwoOperators {
                first: p(-2, &[1, 0]),
                second: p(-4, &[0, 0]),
            }
        );
    }

    #[test]
    fn cp4_vector_fields_and_two_forms() {
        let fams = classify_first_order(&vf(4, 2), &p(5 - 3, &[0, 1, 0])).unwrap();
        assert_eq!(fams.len(), 4);
        assert_eq!(fams.iter().map(|f| f.dimension).sum::<u64>(), 5);
        let omega2 = fams.iter().find(|f| f.target.labels().as_slice() == [0, 1, 0]).unwrap();
        assert_eq!(omega2.dimension, 2);
        assert_eq!(omega2.target.crossed(), 2 + 5 - 3);
        assert!(omega2.coefficients.is_none());
    }
}

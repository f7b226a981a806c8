//! Order-`M` pairings: excluded weights, central characters, splitting of
//! the top factor, and the family dimensions of the main classification.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::mbundle::MModule;
use crate::pmodule::{geometric_weight, labels_from_weight_and_gweight, GModuleSpec, Labels, PModuleSpec};
use crate::rootdata::{affine_equivalent, GlTuple};
use crate::scalar::Scalar;
use crate::tensor::{interlacing_slot, lr_tensor, pieri_sym, Decomposition};
use crate::Rational;

/// An excluded crossed entry `k` together with the order-`l` operator it
/// produces by lowering entry `j` of the `b`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExclusionRecord {
    pub k: i64,
    pub l: usize,
    pub j: usize,
    pub operator_target: PModuleSpec,
}

/// Central characters of the two generalized Verma modules agree. The
/// `gl` tuples are only defined up to an overall shift, which is fixed by
/// comparing entry sums.
pub fn same_central_character(p1: &PModuleSpec, p2: &PModuleSpec) -> bool {
    if p1.rank() != p2.rank() {
        return false;
    }
    let t1 = p1.to_gl_tuple();
    let t2 = p2.to_gl_tuple();
    let diff: i64 = t2.entries().iter().sum::<i64>() - t1.entries().iter().sum::<i64>();
    let len = t1.entries().len() as i64;
    if diff % len != 0 {
        return false;
    }
    affine_equivalent(&t1.shifted(diff / len), &t2)
}

/// `k` such that `V(k)` carries an order-`l` operator from lowering node `j`,
/// or `None` when `j` cannot be lowered by `l`.
fn closed_form_k(labels: &Labels, l: usize, j: usize) -> Option<i64> {
    let a = labels.as_slice();
    let li = l as i64;
    if j == 0 {
        return Some(li - 1);
    }
    if a[j - 1] < li {
        return None;
    }
    Some(-(a[..j].iter().sum::<i64>() + j as i64 - li + 1))
}

pub fn operator_target(labels: &Labels, k: i64, l: usize, j: usize) -> Result<PModuleSpec> {
    let n = labels.rank();
    if l == 0 || j >= n || closed_form_k(labels, l, j) != Some(k) {
        return Err(Error::NotExcluded { k, l, j });
    }
    let li = l as i64;
    let mut a = labels.as_slice().to_vec();
    let crossed = if j == 0 {
        if let Some(first) = a.first_mut() {
            *first += li;
        }
        k - 2 * li
    } else {
        a[j - 1] -= li;
        if j < a.len() {
            a[j] += li;
        }
        k - li
    };
    PModuleSpec::new(crossed, Labels::new(a)?)
}

/// Excluded weights up to order `order`, from the closed form.
pub fn excluded_weights(labels: &Labels, order: usize) -> Result<Vec<ExclusionRecord>> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut out = BTreeSet::new();
    for l in 1..=order {
        for j in 0..labels.rank() {
            if let Some(k) = closed_form_k(labels, l, j) {
                out.insert(ExclusionRecord {
                    k,
                    l,
                    j,
                    operator_target: operator_target(labels, k, l, j)?,
                });
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Every `k` for which a factor in slot `l` of `V_M(E)(k-M)` shares its
/// central character with the top factor, found by matching `rho`-shifted
/// tuples with `k` left unknown.
pub fn slot_clashes(labels: &Labels, order: usize, l: usize) -> Result<Vec<ExclusionRecord>> {
    let g = GModuleSpec::m_module(order as i64, labels)?;
    let m = order as i64;
    let mut b = vec![m];
    for &a in labels.as_slice() {
        b.push(b.last().unwrap() + a);
    }
    let mut out = BTreeSet::new();
    for factor in interlacing_slot(&g, 0, l) {
        // factor is (l | b~) at twist 0; at twist k-M it is (M-k+l | b~)
        let tilde = factor_tail(&factor, l);
        let lowered: Vec<usize> = (0..b.len()).filter(|&i| tilde[i] != b[i]).collect();
        let candidates: BTreeSet<i64> = (0..b.len())
            .flat_map(|i| {
                let li = l as i64;
                let ii = i as i64;
                [b[i] + ii + 1 - li, tilde[i] + ii + 1]
            })
            .collect();
        for x in candidates {
            let mut top = vec![x];
            top.extend(&b);
            let mut low = vec![x + l as i64];
            low.extend(&tilde);
            if !affine_equivalent(&GlTuple::new(top)?, &GlTuple::new(low)?) {
                continue;
            }
            if lowered.len() != 1 {
                return Err(Error::InvariantViolation(format!(
                    "factor {factor} of {g} lowers {} entries yet clashes with the top",
                    lowered.len()
                )));
            }
            let k = m - x;
            out.insert(ExclusionRecord {
                k,
                l,
                j: lowered[0],
                operator_target: factor.twisted(k - m),
            });
        }
    }
    Ok(out.into_iter().collect())
}

/// `b~` of a slot-`l` factor taken at twist 0, where the head entry is `l`.
fn factor_tail(factor: &PModuleSpec, l: usize) -> Vec<i64> {
    let mut out = vec![factor.crossed() + l as i64];
    for &a in factor.labels().as_slice() {
        out.push(out.last().unwrap() + a);
    }
    out
}

/// Excluded weights up to order `order`, from central characters. Fails
/// if the result disagrees with [`excluded_weights`].
pub fn excluded_weights_via_characters(labels: &Labels, order: usize) -> Result<Vec<ExclusionRecord>> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut out = Vec::new();
    for l in 1..=order {
        out.extend(slot_clashes(labels, order, l)?);
    }
    out.sort();
    if out != excluded_weights(labels, order)? {
        return Err(Error::InvariantViolation(format!(
            "central-character exclusions for {labels} at order {order} disagree with the closed form"
        )));
    }
    Ok(out)
}

/// Factors of the series sharing the top factor's central character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCheck {
    pub admissible: bool,
    pub offenders: Vec<(usize, PModuleSpec)>,
}

/// Whether the top factor of `m` (crossed entry `M + twist`) splits off.
pub fn splitting_admissible(m: &MModule) -> SplitCheck {
    let g = m.g_module();
    let top = m.top_factor();
    let offenders: Vec<_> = (1..=g.series_length() as usize)
        .flat_map(|l| {
            interlacing_slot(&g, m.twist(), l)
                .into_iter()
                .filter(|f| same_central_character(&top, f))
                .map(move |f| (l, f))
        })
        .collect();
    SplitCheck {
        admissible: offenders.is_empty(),
        offenders,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherFamily {
    pub target: PModuleSpec,
    pub dimension: u64,
    pub order: usize,
    pub sources: (PModuleSpec, PModuleSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub families: Vec<HigherFamily>,
    /// Exclusion records hit by the first bundle's crossed entry.
    pub first_excluded: Vec<ExclusionRecord>,
    pub second_excluded: Vec<ExclusionRecord>,
    /// `M >= max` of all labels; outside this range the output is advisory.
    pub hypothesis_satisfied: bool,
}

impl Classification {
    pub fn guaranteed(&self) -> bool {
        self.hypothesis_satisfied && self.first_excluded.is_empty() && self.second_excluded.is_empty()
    }
}

/// `⊙^M g_1 ⊗ E ⊗ F` as `sl(n)`-types.
pub fn symbol_decomposition(e: &Labels, f: &Labels, order: usize) -> Result<Decomposition> {
    if e.rank() != f.rank() {
        return Err(Error::RankMismatch(e.rank(), f.rank()));
    }
    let mut out = Decomposition::empty(e.rank());
    for (h, hm) in pieri_sym(e, order)?.terms() {
        for (c, cm) in lr_tensor(h, f).terms() {
            out.add(c.clone(), hm * cm);
        }
    }
    Ok(out)
}

fn hits(p: &PModuleSpec, order: usize) -> Result<Vec<ExclusionRecord>> {
    Ok(excluded_weights(p.labels(), order)?
        .into_iter()
        .filter(|r| r.k == p.crossed())
        .collect())
}

pub fn classify_pairings(v: &PModuleSpec, w: &PModuleSpec, order: usize) -> Result<Classification> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let dec = symbol_decomposition(v.labels(), w.labels(), order)?;
    let gw = geometric_weight::<Rational>(v) + geometric_weight::<Rational>(w) + Rational::from_int(order as i64);
    let families = dec
        .terms()
        .map(|(c, r)| {
            Ok(HigherFamily {
                target: labels_from_weight_and_gweight(c, &gw)?,
                dimension: r,
                order,
                sources: (v.clone(), w.clone()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_label = v.labels().max_label().max(w.labels().max_label());
    Ok(Classification {
        families,
        first_excluded: hits(v, order)?,
        second_excluded: hits(w, order)?,
        hypothesis_satisfied: order as i64 >= max_label,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionPairings {
    pub classification: Classification,
    /// Set when the function weight is excluded at level `l`: the pairings
    /// involve no derivatives of the function of order below `l`.
    pub min_function_derivatives: Option<usize>,
}

/// Order-`M` pairings of `V` with functions of weight `w`. Only exclusions
/// of `V` obstruct the construction.
pub fn function_pairings(v: &PModuleSpec, function_weight: i64, order: usize) -> Result<FunctionPairings> {
    let f = PModuleSpec::line_bundle(v.rank(), function_weight);
    let mut classification = classify_pairings(v, &f, order)?;
    if classification.families.iter().any(|fam| fam.dimension != 1) {
        return Err(Error::InvariantViolation(format!(
            "symmetric power of g_1 times {} is not multiplicity free",
            v.labels()
        )));
    }
    let min_function_derivatives = classification.second_excluded.iter().map(|r| r.l).min();
    classification.second_excluded.clear();
    Ok(FunctionPairings {
        classification,
        min_function_derivatives,
    })
}

//! `M`-modules `V_M(E)(t)`, their `p`-module composition series, tensor
//! products of two such series, and the split of the tensor product into
//! irreducible `g`-modules.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmodule::{geometric_weight, labels_from_weight_and_gweight, GModuleSpec, Labels, PModuleSpec};
use crate::scalar::Scalar;
use crate::tensor::{interlacing_slot, lr_tensor, pieri_sym, weyl_dimension, Decomposition};
use crate::Rational;

/// `V_M(E) ⊗ O(twist)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MModule {
    base: Labels,
    order: usize,
    twist: i64,
}

impl MModule {
    pub fn new(base: Labels, order: usize, twist: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if base.rank() < 2 {
            return Err(Error::RankTooSmall(base.rank()));
        }
        Ok(MModule { base, order, twist })
    }

    /// The `M`-module whose top factor is the given bundle: `twist = k - M`.
    pub fn for_bundle(p: &PModuleSpec, order: usize) -> Result<Self> {
        Self::new(p.labels().clone(), order, p.crossed() - order as i64)
    }

    pub fn base(&self) -> &Labels {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    pub fn g_module(&self) -> GModuleSpec {
        GModuleSpec::m_module(self.order as i64, &self.base).expect("order and base validated")
    }

    /// The top composition factor `V_0(twist)`, crossed entry `M + twist`.
    pub fn top_factor(&self) -> PModuleSpec {
        PModuleSpec::new(self.order as i64 + self.twist, self.base.clone()).expect("validated")
    }
}

impl fmt::Display for MModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.g_module())?;
        if self.twist != 0 {
            write!(f, " ({})", self.twist)?;
        }
        Ok(())
    }
}

/// One slot of a composition series: a multiset of irreducible `p`-modules.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Slot {
    #[serde(serialize_with = "serialize_slot")]
    factors: BTreeMap<PModuleSpec, u64>,
}

fn serialize_slot<S: serde::Serializer>(
    factors: &BTreeMap<PModuleSpec, u64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(factors.len()))?;
    for (p, m) in factors {
        seq.serialize_element(&(p.to_string(), m))?;
    }
    seq.end()
}

impl Slot {
    pub fn add(&mut self, p: PModuleSpec, mult: u64) {
        if mult > 0 {
            *self.factors.entry(p).or_insert(0) += mult;
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&PModuleSpec, u64)> {
        self.factors.iter().map(|(p, &m)| (p, m))
    }

    pub fn multiplicity(&self, p: &PModuleSpec) -> u64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.factors.values().sum()
    }

    pub fn dimension(&self) -> u64 {
        self.factors.iter().map(|(p, &m)| m * weyl_dimension(p.labels())).sum()
    }

    /// Labels only, forgetting crossed entries.
    pub fn levi_types(&self) -> Decomposition {
        let rank = self.factors.keys().next().map_or(2, |p| p.rank());
        let mut d = Decomposition::empty(rank);
        for (p, &m) in &self.factors {
            d.add(p.labels().clone(), m);
        }
        d
    }

    pub fn twisted(&self, t: i64) -> Slot {
        Slot {
            factors: self.factors.iter().map(|(p, &m)| (p.twisted(t), m)).collect(),
        }
    }

    fn merge(&mut self, other: &Slot, times: u64) {
        for (p, &m) in &other.factors {
            self.add(p.clone(), m * times);
        }
    }
}

impl FromIterator<PModuleSpec> for Slot {
    fn from_iter<I: IntoIterator<Item = PModuleSpec>>(iter: I) -> Self {
        let mut slot = Slot::default();
        for p in iter {
            slot.add(p, 1);
        }
        slot
    }
}

/// Ordered slots; slot `j` sits at grading-element offset `j` from slot 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionSeries {
    pub origin: String,
    pub slots: Vec<Slot>,
}

impl CompositionSeries {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn dimension(&self) -> u64 {
        self.slots.iter().map(Slot::dimension).sum()
    }

    pub fn twisted(&self, t: i64) -> CompositionSeries {
        CompositionSeries {
            origin: format!("{} ({t})", self.origin),
            slots: self.slots.iter().map(|s| s.twisted(t)).collect(),
        }
    }

    /// Slot `j` holds only factors of geometric weight `omega(slot 0) + j`.
    pub fn check_weights(&self) -> Result<()> {
        let Some(base) = self.slots.first().and_then(|s| s.factors().next()) else {
            return Ok(());
        };
        let w0 = geometric_weight::<Rational>(base.0);
        for (j, slot) in self.slots.iter().enumerate() {
            for (p, _) in slot.factors() {
                if geometric_weight::<Rational>(p) != w0 + Rational::from_int(j as i64) {
                    return Err(Error::InvariantViolation(format!(
                        "{p} in slot {j} of {} has the wrong geometric weight",
                        self.origin
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Composition series of `V_M(E)(t)` from interlacing, cross-checked against
/// `⊙^j g_1 ⊗ E` for `j <= M`.
pub fn series(m: &MModule) -> Result<CompositionSeries> {
    let g = m.g_module();
    let length = g.series_length() as usize;
    let slots: Vec<Slot> = (0..=length)
        .map(|l| interlacing_slot(&g, m.twist, l).into_iter().collect())
        .collect();
    for (j, slot) in slots.iter().enumerate().take(m.order + 1) {
        let expected = pieri_sym(&m.base, j)?;
        if slot.levi_types() != expected {
            return Err(Error::InvariantViolation(format!(
                "slot {j} of {m} disagrees with the symmetric power decomposition"
            )));
        }
    }
    let out = CompositionSeries {
        origin: m.to_string(),
        slots,
    };
    out.check_weights()?;
    Ok(out)
}

/// Places each sl(n) component of `decomp` at geometric weight `gw`.
fn realize(decomp: &Decomposition, gw: &Rational) -> Result<Slot> {
    let mut slot = Slot::default();
    for (l, mult) in decomp.terms() {
        slot.add(labels_from_weight_and_gweight(l, gw)?, mult);
    }
    Ok(slot)
}

/// Slot `s` of the tensor product is `⊕_{i+j=s} V_i ⊗ W_j`.
pub fn tensor_series(v: &MModule, w: &MModule) -> Result<CompositionSeries> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    let sv = series(v)?;
    let sw = series(w)?;
    let w0 = geometric_weight::<Rational>(&v.top_factor()) + geometric_weight::<Rational>(&w.top_factor());
    let mut slots = vec![Slot::default(); sv.len() + sw.len() - 1];
    for (i, vi) in sv.slots.iter().enumerate() {
        for (j, wj) in sw.slots.iter().enumerate() {
            let mut dec = Decomposition::empty(v.rank());
            for (p, pm) in vi.factors() {
                for (q, qm) in wj.factors() {
                    for (c, cm) in lr_tensor(p.labels(), q.labels()).terms() {
                        dec.add(c.clone(), pm * qm * cm);
                    }
                }
            }
            let gw = w0 + Rational::from_int((i + j) as i64);
            let realized = realize(&dec, &gw)?;
            slots[i + j].merge(&realized, 1);
        }
    }
    let out = CompositionSeries {
        origin: format!("{v} ⊗ {w}"),
        slots,
    };
    out.check_weights()?;
    Ok(out)
}

/// Irreducible `g`-summands of the tensor product of the underlying modules.
pub fn g_split(v: &MModule, w: &MModule) -> Result<Vec<(GModuleSpec, u64)>> {
    if v.rank() != w.rank() {
        return Err(Error::RankMismatch(v.rank(), w.rank()));
    }
    let dec = lr_tensor(v.g_module().labels(), w.g_module().labels());
    dec.terms()
        .map(|(l, m)| Ok((GModuleSpec::new(l.clone())?, m)))
        .collect()
}

/// One `g`-summand of the tensor product with its own composition series,
/// placed at the slot where its top factor lands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSummand {
    pub module: GModuleSpec,
    pub multiplicity: u64,
    pub offset: usize,
    pub series: CompositionSeries,
}

/// The split presentation: each summand's series, twisted like the product.
pub fn split_presentation(v: &MModule, w: &MModule) -> Result<Vec<SplitSummand>> {
    let twist = v.twist + w.twist;
    let w0 = geometric_weight::<Rational>(&v.g_module().top_factor())
        + geometric_weight::<Rational>(&w.g_module().top_factor());
    g_split(v, w)?
        .into_iter()
        .map(|(g, mult)| {
            let offset = geometric_weight::<Rational>(&g.top_factor()) - w0;
            let offset = offset
                .as_integer()
                .filter(|&o| o >= 0)
                .ok_or_else(|| Error::InvariantViolation(format!("summand {g} sits at non-integral offset {offset}")))?
                as usize;
            let slots = (0..=g.series_length() as usize)
                .map(|l| interlacing_slot(&g, twist, l).into_iter().collect())
                .collect();
            Ok(SplitSummand {
                series: CompositionSeries {
                    origin: g.to_string(),
                    slots,
                },
                module: g,
                multiplicity: mult,
                offset,
            })
        })
        .collect()
}

/// Slotwise difference between two series; empty when they agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotDiff {
    pub slot: usize,
    /// Factors with their multiplicity in the first and second series.
    pub mismatches: Vec<(String, u64, u64)>,
}

pub fn slot_diff(expected: &[Slot], actual: &[Slot]) -> Vec<SlotDiff> {
    let len = expected.len().max(actual.len());
    let empty = Slot::default();
    (0..len)
        .filter_map(|j| {
            let a = expected.get(j).unwrap_or(&empty);
            let b = actual.get(j).unwrap_or(&empty);
            let mut keys: Vec<&PModuleSpec> = a.factors.keys().chain(b.factors.keys()).collect();
            keys.sort();
            keys.dedup();
            let mismatches: Vec<_> = keys
                .into_iter()
                .filter(|p| a.multiplicity(p) != b.multiplicity(p))
                .map(|p| (p.to_string(), a.multiplicity(p), b.multiplicity(p)))
                .collect();
            (!mismatches.is_empty()).then_some(SlotDiff { slot: j, mismatches })
        })
        .collect()
}

/// Result of comparing the two presentations of the tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub tensor: CompositionSeries,
    pub summands: Vec<SplitSummand>,
    pub diff: Vec<SlotDiff>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.diff.is_empty()
    }
}

/// Compares the slotwise tensor product with the union of the `g`-summands'
/// series aligned by slot.
pub fn verify_slot_consistency(v: &MModule, w: &MModule) -> Result<ConsistencyReport> {
    let tensor = tensor_series(v, w)?;
    let summands = split_presentation(v, w)?;
    let mut assembled = vec![Slot::default(); tensor.len()];
    for s in &summands {
        for (i, slot) in s.series.slots.iter().enumerate() {
            let at = s.offset + i;
            if at >= assembled.len() {
                assembled.resize(at + 1, Slot::default());
            }
            assembled[at].merge(slot, s.multiplicity);
        }
    }
    let diff = slot_diff(&tensor.slots, &assembled);
    Ok(ConsistencyReport { tensor, summands, diff })
}

/// Crossed entry of a tensor-slot component once the total twist is removed.
/// For a component of slot `l` of a product of two order-`M` modules this
/// is at least `2(M - l)`.
pub fn predictable_depth(component: &PModuleSpec, total_twist: i64) -> i64 {
    component.crossed() - total_twist
}

/// Renders a series the way it is written by hand: slots joined by `+`,
/// the summands of a slot stacked with `(+)` between them.
pub fn render_ascii(series: &CompositionSeries) -> String {
    let columns: Vec<Vec<String>> = series
        .slots
        .iter()
        .map(|slot| {
            let mut lines = Vec::new();
            for (i, (p, m)) in slot.factors().enumerate() {
                if i > 0 {
                    lines.push("(+)".to_string());
                }
                lines.push(if m == 1 { p.to_string() } else { format!("{m}x {p}") });
            }
            if lines.is_empty() {
                lines.push("0".to_string());
            }
            lines
        })
        .collect();
    let height = columns.iter().map(Vec::len).max().unwrap_or(1);
    let mid = height / 2;
    let mut rows = vec![String::new(); height];
    for (c, col) in columns.iter().enumerate() {
        let width = col.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let top = (height - col.len()) / 2;
        for (r, row) in rows.iter_mut().enumerate() {
            if c > 0 {
                row.push_str(if r == mid { " + " } else { "   " });
            }
            let text = r.checked_sub(top).and_then(|i| col.get(i)).map_or("", String::as_str);
            let pad = width - text.chars().count();
            let left = pad / 2;
            row.push_str(&" ".repeat(left));
            row.push_str(text);
            row.push_str(&" ".repeat(pad - left));
        }
    }
    let mut out = String::new();
    for row in rows {
        out.push_str(row.trim_end());
        out.push('\n');
    }
    out
}

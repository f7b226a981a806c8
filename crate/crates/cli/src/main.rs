use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diffpair::firstorder::{classify_first_order, excluded_crossed, first_order_excluded, Exclusion};
use diffpair::higher::{
    classify_pairings, excluded_weights, excluded_weights_via_characters, splitting_admissible, symbol_decomposition,
    ExclusionRecord,
};
use diffpair::mbundle::{render_ascii, series, verify_slot_consistency, CompositionSeries, MModule};
use diffpair::pmodule::parse_g_spec;
use diffpair::symbolic::{lift, Affine, Condition, SymbolicSpec};
use diffpair::tensor::{pieri_sym, weyl_dimension};
use diffpair::{Error, Labels, PModuleSpec, Rational, Scalar};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "diffpair", version, about = "Invariant bilinear differential pairings on CP_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Rank n of CP_n.
    #[arg(long)]
    rank: usize,
    /// Emit versioned JSON.
    #[arg(long, conflicts_with = "ascii")]
    json: bool,
    /// Draw composition series in slot layout.
    #[arg(long)]
    ascii: bool,
    /// Cross-check results with brute-force algorithms.
    #[arg(long)]
    oracle: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Order-M pairings V x W -> targets.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// First-order pairings with explicit coefficients.
    Firstorder {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
    },
    /// Excluded weights of a bundle up to order M.
    Exclude {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        order: usize,
    },
    /// Composition series of a g-module ("o.. o..") or of the M-module of a bundle.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        order: Option<usize>,
        /// Twist applied to a g-module spec.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Tensor product of two M-modules and its split into g-summands.
    Tensor {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        v: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Whether the top factor of the M-module of a bundle splits off.
    Splitcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        order: usize,
    },
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_invariant_violation() {
            Failure::Violation(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome<T> = Result<T, Failure>;

struct Report {
    command: &'static str,
    rank: usize,
    input: Value,
    result: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, outcome) = match &cli.command {
        Command::Classify { common, v, w, order } => (common, classify(common, v, w, *order)),
        Command::Firstorder { common, v, w } => (common, firstorder(common, v, w)),
        Command::Exclude { common, spec, order } => (common, exclude(common, spec, *order)),
        Command::Series { common, spec, order, twist } => (common, series_cmd(common, spec, *order, *twist)),
        Command::Tensor { common, v, w, order } => (common, tensor_cmd(common, v, w, *order)),
        Command::Splitcheck { common, spec, order } => (common, splitcheck(common, spec, *order)),
    };
    match outcome {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if common.json {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": report.command,
                    "rank": report.rank,
                    "input": report.input,
                    "result": report.result,
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            } else {
                let _ = write!(out, "{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_bundle(text: &str, rank: usize, flag: &str) -> Outcome<SymbolicSpec> {
    let spec = SymbolicSpec::parse(text).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))?;
    if spec.rank() != rank {
        return Err(Failure::Usage(format!(
            "--{flag}: {} nodes describe CP_{}, but --rank is {rank}",
            spec.rank(),
            spec.rank()
        )));
    }
    Ok(spec)
}

fn concrete(spec: &SymbolicSpec, flag: &str) -> Outcome<PModuleSpec> {
    if spec.is_concrete() {
        Ok(spec.base())
    } else {
        Err(Failure::Usage(format!("--{flag}: this command needs a concrete crossed entry")))
    }
}

fn parse_m_module(text: &str, rank: usize, order: Option<usize>, twist: i64, flag: &str) -> Outcome<MModule> {
    if text.trim_start().starts_with('o') {
        let g = parse_g_spec(text).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))?;
        if g.rank() != rank {
            return Err(Failure::Usage(format!("--{flag}: module lives on CP_{}, but --rank is {rank}", g.rank())));
        }
        if order.is_some() {
            return Err(Failure::Usage(format!("--{flag}: --order is implied by a g-module spec")));
        }
        let top = usize::try_from(g.top()).map_err(|_| Failure::Usage("negative label".into()))?;
        return Ok(MModule::new(g.levi_labels(), top, twist)?);
    }
    let spec = parse_bundle(text, rank, flag)?;
    let p = concrete(&spec, flag)?;
    let order = order.ok_or_else(|| Failure::Usage(format!("--{flag}: a bundle spec needs --order")))?;
    Ok(MModule::for_bundle(&p, order)?)
}

/// Conditions on the symbols of `spec` under which it meets an excluded weight.
fn exclusion_conditions(spec: &SymbolicSpec, records: &[ExclusionRecord]) -> Vec<(Condition<Rational>, Vec<ExclusionRecord>)> {
    let mut out: Vec<(Condition<Rational>, Vec<ExclusionRecord>)> = Vec::new();
    for r in records {
        let cond = spec.crossed_equals(&Rational::from_int(r.k));
        if cond == Condition::Never {
            continue;
        }
        match out.iter_mut().find(|(c, _)| *c == cond) {
            Some((_, rs)) => rs.push(r.clone()),
            None => out.push((cond, vec![r.clone()])),
        }
    }
    out
}

fn record_json(r: &ExclusionRecord) -> Value {
    json!({ "k": r.k, "order": r.l, "node": r.j, "operator_target": r.operator_target.to_string() })
}

fn conditions_json(conds: &[(Condition<Rational>, Vec<ExclusionRecord>)]) -> Value {
    Value::Array(
        conds
            .iter()
            .map(|(c, rs)| json!({ "condition": c.to_string(), "operators": rs.iter().map(record_json).collect::<Vec<_>>() }))
            .collect(),
    )
}

fn write_conditions(text: &mut String, name: &str, conds: &[(Condition<Rational>, Vec<ExclusionRecord>)]) {
    if conds.is_empty() {
        let _ = writeln!(text, "  {name}: no excluded weights");
        return;
    }
    let _ = writeln!(text, "  {name}:");
    for (c, rs) in conds {
        let ops: Vec<String> = rs.iter().map(|r| format!("order {} -> {}", r.l, r.operator_target)).collect();
        let _ = writeln!(text, "    {c}  ({})", ops.join("; "));
    }
}

fn classify(common: &Common, v: &str, w: &str, order: usize) -> Outcome<Report> {
    let sv = parse_bundle(v, common.rank, "v")?;
    let sw = parse_bundle(w, common.rank, "w")?;
    let (bv, bw) = (sv.base(), sw.base());
    let res = classify_pairings(&bv, &bw, order)?;
    let cv = exclusion_conditions(&sv, &excluded_weights(bv.labels(), order)?);
    let cw = exclusion_conditions(&sw, &excluded_weights(bw.labels(), order)?);
    let excluded_now = cv.iter().chain(&cw).any(|(c, _)| *c == Condition::Always);
    let guaranteed = res.hypothesis_satisfied && !excluded_now;

    if common.oracle {
        let expected = weyl_dimension(bv.labels()) * weyl_dimension(bw.labels()) * sym_dimension(common.rank, order);
        let total: u64 = res.families.iter().map(|f| f.dimension * weyl_dimension(f.target.labels())).sum();
        if total != expected {
            return Err(Failure::Violation(format!("symbol space has dimension {total}, expected {expected}")));
        }
        if order == 1 {
            let first: Vec<_> = classify_first_order(&bv, &bw)?.into_iter().map(|f| (f.target, f.dimension)).collect();
            let here: Vec<_> = res.families.iter().map(|f| (f.target.clone(), f.dimension)).collect();
            if first != here {
                return Err(Failure::Violation("first-order classification disagrees with the order-1 count".into()));
            }
        }
        let report = verify_slot_consistency(&MModule::for_bundle(&bv, order)?, &MModule::for_bundle(&bw, order)?)?;
        if !report.is_consistent() {
            return Err(Failure::Violation(format!("slot consistency failed: {:?}", report.diff)));
        }
    }

    let families: Vec<(SymbolicSpec, u64)> = res.families.iter().map(|f| (lift(&f.target, &[&sv, &sw]), f.dimension)).collect();
    let total: u64 = families.iter().map(|f| f.1).sum();
    let mut text = String::new();
    let _ = writeln!(text, "{sv} x {sw}, order {order}: {} targets, {total} pairings", families.len());
    for (t, r) in &families {
        let _ = writeln!(text, "  {r} x {t}");
    }
    let _ = writeln!(text, "excluded weights:");
    write_conditions(&mut text, "first", &cv);
    write_conditions(&mut text, "second", &cw);
    if !res.hypothesis_satisfied {
        let _ = writeln!(text, "note: order is below the largest label; counts are not guaranteed");
    }
    if excluded_now {
        let _ = writeln!(text, "note: an input weight is excluded; counts are not guaranteed");
    }
    Ok(Report {
        command: "classify",
        rank: common.rank,
        input: json!({ "v": sv.to_string(), "w": sw.to_string(), "order": order }),
        result: json!({
            "families": families.iter().map(|(t, r)| json!({ "target": t.to_string(), "dimension": r })).collect::<Vec<_>>(),
            "total": total,
            "excluded": { "first": conditions_json(&cv), "second": conditions_json(&cw) },
            "hypothesis_satisfied": res.hypothesis_satisfied,
            "guaranteed": guaranteed,
        }),
        text,
    })
}

fn sym_dimension(n: usize, order: usize) -> u64 {
    (0..order as u64).fold(1, |acc, i| acc * (n as u64 + i) / (i + 1))
}

struct Side {
    condition: Condition<Rational>,
    component: Labels,
    operator_target: Option<PModuleSpec>,
}

fn first_order_sides(spec: &SymbolicSpec, comps: &[(Labels, u64)]) -> Outcome<Vec<Side>> {
    let labels = &spec.labels;
    comps
        .iter()
        .map(|(c, _)| {
            let k: Rational = excluded_crossed(labels, c)?;
            let condition = spec.crossed_equals(&k);
            let operator_target = match k.as_integer() {
                Some(k) => first_order_excluded(&PModuleSpec::new(k, labels.clone())?)?
                    .into_iter()
                    .find(|r| r.component == *c)
                    .map(|r| r.operator_target),
                None => None,
            };
            Ok(Side { condition, component: c.clone(), operator_target })
        })
        .collect()
}

fn side_json(s: &Side) -> Value {
    json!({
        "component": s.component.to_string(),
        "condition": s.condition.to_string(),
        "operator_target": s.operator_target.as_ref().map(|p| p.to_string()),
    })
}

fn firstorder(common: &Common, v: &str, w: &str) -> Outcome<Report> {
    let sv = parse_bundle(v, common.rank, "v")?;
    let sw = parse_bundle(w, common.rank, "w")?;
    let (bv, bw) = (sv.base(), sw.base());
    let fams = classify_first_order(&bv, &bw)?;
    if common.oracle {
        let higher: Vec<_> = classify_pairings(&bv, &bw, 1)?.families.into_iter().map(|f| (f.target, f.dimension)).collect();
        let here: Vec<_> = fams.iter().map(|f| (f.target.clone(), f.dimension)).collect();
        if higher != here {
            return Err(Failure::Violation("first-order classification disagrees with the order-1 count".into()));
        }
        let dec = symbol_decomposition(bv.labels(), bw.labels(), 1)?;
        if dec.terms().count() != fams.len() {
            return Err(Failure::Violation("symbol space and family list differ".into()));
        }
    }
    let mut text = String::new();
    let total: u64 = fams.iter().map(|f| f.dimension).sum();
    let _ = writeln!(text, "{sv} x {sw}: {} targets, {total} first-order pairings", fams.len());
    let mut entries = Vec::new();
    for f in &fams {
        let target = lift(&f.target, &[&sv, &sw]);
        let first = first_order_sides(&sv, &f.via_first)?;
        let second = first_order_sides(&sw, &f.via_second)?;
        let _ = writeln!(text, "  {} x {target}", f.dimension);
        let mut coeffs = Value::Null;
        if f.dimension == 1 {
            let k_tau = excluded_crossed::<Rational>(&sv.labels, &f.via_first[0].0)?;
            let k_sigma = excluded_crossed::<Rational>(&sw.labels, &f.via_second[0].0)?;
            let a = sw.crossed.clone() - Affine::constant(k_sigma);
            let b = -(sv.crossed.clone() - Affine::constant(k_tau));
            if let Some(c) = &f.coefficients {
                let at_base = |x: &Affine<Rational>| *x.constant_part();
                if (c.normalized_a, c.normalized_b) != (at_base(&a), at_base(&b)) {
                    return Err(Failure::Violation(format!("coefficients at the base point disagree for {target}")));
                }
            }
            let _ = writeln!(text, "      a = {a}, b = {b}");
            coeffs = json!({ "a": a.to_string(), "b": b.to_string() });
        }
        for (name, sides) in [("first", &first), ("second", &second)] {
            for s in sides.iter().filter(|s| s.condition != Condition::Never) {
                let op = s.operator_target.as_ref().map_or(String::new(), |p| format!(" -> {p}"));
                let _ = writeln!(text, "      excluded ({name}): {}{op}", s.condition);
            }
        }
        let exclusion = (sv.is_concrete() && sw.is_concrete()).then_some(f.exclusion);
        if let Some(e) = exclusion.filter(|e| *e != Exclusion::None) {
            let _ = writeln!(text, "      excluded at the given weights: {}", e.as_str());
        }
        entries.push(json!({
            "target": target.to_string(),
            "dimension": f.dimension,
            "coefficients": coeffs,
            "exclusion": exclusion.map(Exclusion::as_str),
            "first": first.iter().map(side_json).collect::<Vec<_>>(),
            "second": second.iter().map(side_json).collect::<Vec<_>>(),
        }));
    }
    Ok(Report {
        command: "firstorder",
        rank: common.rank,
        input: json!({ "v": sv.to_string(), "w": sw.to_string() }),
        result: json!({ "families": entries, "total": total }),
        text,
    })
}

fn exclude(common: &Common, spec: &str, order: usize) -> Outcome<Report> {
    let s = parse_bundle(spec, common.rank, "spec")?;
    let records = excluded_weights(&s.labels, order)?;
    if common.oracle {
        let via = excluded_weights_via_characters(&s.labels, order)?;
        if via != records {
            return Err(Failure::Violation(format!("closed form {records:?} differs from central characters {via:?}")));
        }
    }
    let conds = exclusion_conditions(&s, &records);
    let mut text = String::new();
    let _ = writeln!(text, "{s}, order {order}:");
    for (c, rs) in &conds {
        for r in rs {
            let _ = writeln!(text, "  {c}  order {} via node {}: {}", r.l, r.j, r.operator_target);
        }
    }
    if conds.is_empty() {
        let _ = writeln!(text, "  no excluded weights");
    }
    let mut k_list: Vec<i64> = records.iter().map(|r| r.k).collect();
    k_list.dedup();
    Ok(Report {
        command: "exclude",
        rank: common.rank,
        input: json!({ "spec": s.to_string(), "order": order }),
        result: json!({ "crossed_values": k_list, "conditions": conditions_json(&conds) }),
        text,
    })
}

fn series_json(s: &CompositionSeries) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn series_text(s: &CompositionSeries, ascii: bool) -> String {
    if ascii {
        return render_ascii(s);
    }
    let mut text = String::new();
    for (j, slot) in s.slots.iter().enumerate() {
        let parts: Vec<String> = slot
            .factors()
            .map(|(p, m)| if m == 1 { p.to_string() } else { format!("{m}x {p}") })
            .collect();
        let _ = writeln!(text, "  slot {j}: {}", parts.join(" (+) "));
    }
    text
}

fn check_top_slots(m: &MModule, s: &CompositionSeries) -> Outcome<()> {
    s.check_weights()?;
    for j in 0..=m.order().min(s.len() - 1) {
        if s.slots[j].levi_types() != pieri_sym(m.base(), j)? {
            return Err(Failure::Violation(format!("slot {j} of {m} is not the symmetric power")));
        }
    }
    Ok(())
}

fn series_cmd(common: &Common, spec: &str, order: Option<usize>, twist: i64) -> Outcome<Report> {
    let m = parse_m_module(spec, common.rank, order, twist, "spec")?;
    let s = series(&m)?;
    if common.oracle {
        check_top_slots(&m, &s)?;
    }
    let mut text = format!("{m} =\n");
    text.push_str(&series_text(&s, common.ascii));
    Ok(Report {
        command: "series",
        rank: common.rank,
        input: json!({ "module": m.g_module().to_string(), "twist": m.twist() }),
        result: json!({ "series": series_json(&s), "dimension": s.dimension() }),
        text,
    })
}

fn tensor_cmd(common: &Common, v: &str, w: &str, order: Option<usize>) -> Outcome<Report> {
    let mv = parse_m_module(v, common.rank, order, 0, "v")?;
    let mw = parse_m_module(w, common.rank, order, 0, "w")?;
    let report = verify_slot_consistency(&mv, &mw)?;
    if !report.is_consistent() {
        return Err(Failure::Violation(format!(
            "slot consistency failed:\n{}",
            serde_json::to_string_pretty(&report.diff).expect("serializable")
        )));
    }
    if common.oracle {
        let sv = series(&mv)?;
        let sw = series(&mw)?;
        for (s, slot) in report.tensor.slots.iter().enumerate() {
            let expected: u64 = (0..=s)
                .filter(|&i| i < sv.len() && s - i < sw.len())
                .map(|i| sv.slots[i].dimension() * sw.slots[s - i].dimension())
                .sum();
            if slot.dimension() != expected {
                return Err(Failure::Violation(format!("slot {s} has dimension {}, expected {expected}", slot.dimension())));
            }
        }
    }
    let mut text = format!("{mv} ⊗ {mw} =\n");
    text.push_str(&series_text(&report.tensor, common.ascii));
    let _ = writeln!(text, "splits as");
    for s in &report.summands {
        let mult = if s.multiplicity == 1 { String::new() } else { format!("{}x ", s.multiplicity) };
        let _ = writeln!(text, "{mult}{} from slot {} =", s.module, s.offset);
        text.push_str(&series_text(&s.series, common.ascii));
    }
    let summands: Vec<Value> = report
        .summands
        .iter()
        .map(|s| json!({ "module": s.module.to_string(), "multiplicity": s.multiplicity, "offset": s.offset, "series": series_json(&s.series) }))
        .collect();
    Ok(Report {
        command: "tensor",
        rank: common.rank,
        input: json!({ "v": mv.to_string(), "w": mw.to_string() }),
        result: json!({ "tensor": series_json(&report.tensor), "summands": summands, "consistent": true }),
        text,
    })
}

fn splitcheck(common: &Common, spec: &str, order: usize) -> Outcome<Report> {
    let s = parse_bundle(spec, common.rank, "spec")?;
    let p = concrete(&s, "spec")?;
    let m = MModule::for_bundle(&p, order)?;
    let check = splitting_admissible(&m);
    let excluded = excluded_weights(p.labels(), order)?.iter().any(|r| r.k == p.crossed());
    if common.oracle && order as i64 >= p.labels().max_label() && check.admissible == excluded {
        return Err(Failure::Violation(format!(
            "splitting is {} but {p} is {}excluded",
            if check.admissible { "admissible" } else { "obstructed" },
            if excluded { "" } else { "not " }
        )));
    }
    let mut text = String::new();
    if check.admissible {
        let _ = writeln!(text, "{p} splits off {m}");
    } else {
        let _ = writeln!(text, "{p} does not split off {m}; same central character as");
        for (l, f) in &check.offenders {
            let _ = writeln!(text, "  slot {l}: {f}");
        }
    }
    Ok(Report {
        command: "splitcheck",
        rank: common.rank,
        input: json!({ "spec": p.to_string(), "order": order }),
        result: json!({
            "admissible": check.admissible,
            "excluded": excluded,
            "offenders": check.offenders.iter().map(|(l, f)| json!({ "slot": l, "factor": f.to_string() })).collect::<Vec<_>>(),
        }),
        text,
    })
}

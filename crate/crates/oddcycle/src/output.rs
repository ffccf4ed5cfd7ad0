//! Rendering to text, JSON, and CSV.
//!
//! Every renderer returns the complete stdout payload, trailing newline
//! included, and never embeds timings — identical inputs give identical
//! bytes across runs and worker counts. Integers above 2^53 are serialized
//! as decimal strings in JSON so downstream tools stay exact.

use serde::{Serialize, Serializer};

use crate::conjectures::{CheckKind, ConjectureReport, ScreenOutcome, Verdict};
use crate::cycles::{Cycle, CycleDecomposition, LengthHistogram};
use crate::group::{AxiomCheck, AxiomReport, QuotientGroup};
use crate::sweep::{CheckOutcome, SweepCheck, SweepResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Largest integer JSON readers with double-precision numbers keep exact.
const JSON_SAFE_MAX: u64 = 1 << 53;

#[derive(Debug, Clone, Copy)]
struct JsonU64(u64);

impl Serialize for JsonU64 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0 <= JSON_SAFE_MAX {
            serializer.serialize_u64(self.0)
        } else {
            serializer.collect_str(&self.0)
        }
    }
}

fn json_hist(h: &LengthHistogram) -> Vec<(JsonU64, JsonU64)> {
    h.iter().map(|(k, n)| (JsonU64(k), JsonU64(n))).collect()
}

/// `1 x 1 + 3 x 2 + ... = total` in count-times-length form.
fn expansion(h: &LengthHistogram) -> String {
    if h.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = h.iter().map(|(k, n)| format!("{n} x {k}")).collect();
    format!("{} = {}", terms.join(" + "), h.covered())
}

fn cycle_text(c: &Cycle) -> String {
    match &c.elements {
        Some(elements) => {
            let items: Vec<String> = elements.iter().map(u64::to_string).collect();
            format!("({})", items.join(", "))
        }
        None => format!(
            "cycle(min = {}, length = {}, xi = {}, gcd = {})",
            c.min, c.length, c.xi, c.gcd_with_q
        ),
    }
}

fn csv_hist(h: &LengthHistogram) -> String {
    let mut out = String::from("length,count\n");
    for (k, n) in h.iter() {
        out.push_str(&format!("{k},{n}\n"));
    }
    out
}

// ---- decompose ----------------------------------------------------------

#[derive(Serialize)]
struct CycleJson {
    min: JsonU64,
    length: JsonU64,
    xi: JsonU64,
    gcd: JsonU64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<JsonU64>>,
}

#[derive(Serialize)]
struct DecompositionJson {
    q: JsonU64,
    phi: JsonU64,
    epsilon: JsonU64,
    irreducible_count: JsonU64,
    histogram: Vec<(JsonU64, JsonU64)>,
    cycles: Vec<CycleJson>,
}

pub fn render_decomposition(d: &CycleDecomposition, format: Format) -> String {
    match format {
        Format::Json => {
            let view = DecompositionJson {
                q: JsonU64(d.q.get()),
                phi: JsonU64(d.phi),
                epsilon: JsonU64(d.epsilon),
                irreducible_count: JsonU64(d.irreducible_count),
                histogram: json_hist(&d.histogram),
                cycles: d
                    .cycles
                    .iter()
                    .map(|c| CycleJson {
                        min: JsonU64(c.min),
                        length: JsonU64(c.length),
                        xi: JsonU64(c.xi),
                        gcd: JsonU64(c.gcd_with_q),
                        elements: c
                            .elements
                            .as_ref()
                            .map(|e| e.iter().map(|&x| JsonU64(x)).collect()),
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string(&view).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => csv_hist(&d.histogram),
        Format::Text => {
            let q = d.q.get();
            let mut out = format!("G_{q}/R_{q}:\n");
            for c in &d.cycles {
                out.push_str(&cycle_text(c));
                out.push('\n');
            }
            out.push_str(&format!("|G_{q}| = {}\n", expansion(&d.histogram)));
            out.push_str(&format!("|G_{q}*| = {}\n", expansion(&d.irreducible_histogram)));
            out.push_str(&format!(
                "phi = {}, epsilon = {}, cycles = {}, irreducible = {}\n",
                d.phi,
                d.epsilon,
                d.cycles.len(),
                d.irreducible_count
            ));
            out
        }
    }
}

// ---- order ---------------------------------------------------------------

#[derive(Serialize)]
struct OrderJson {
    q: JsonU64,
    epsilon: JsonU64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<JsonU64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

pub fn render_order(q: u64, epsilon: u64, oracle: Option<u64>, format: Format) -> String {
    match format {
        Format::Json => {
            let view = OrderJson {
                q: JsonU64(q),
                epsilon: JsonU64(epsilon),
                oracle: oracle.map(JsonU64),
                agree: oracle.map(|o| o == epsilon),
            };
            let mut s = serde_json::to_string(&view).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => match oracle {
            Some(o) => format!("q,epsilon,oracle\n{q},{epsilon},{o}\n"),
            None => format!("q,epsilon\n{q},{epsilon}\n"),
        },
        Format::Text => {
            let mut out = format!("epsilon({q}) = {epsilon}\n");
            if let Some(o) = oracle {
                out.push_str(&format!("order2_oracle({q}) = {o}\n"));
                out.push_str(if o == epsilon {
                    "agreement: ok\n"
                } else {
                    "agreement: MISMATCH\n"
                });
            }
            out
        }
    }
}

// ---- group ---------------------------------------------------------------

#[derive(Serialize)]
struct AxiomCheckJson {
    pass: bool,
    trials: JsonU64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

impl From<&AxiomCheck> for AxiomCheckJson {
    fn from(c: &AxiomCheck) -> Self {
        Self { pass: c.pass, trials: JsonU64(c.trials), witness: c.witness.clone() }
    }
}

#[derive(Serialize)]
struct AxiomsJson {
    mode: &'static str,
    all_pass: bool,
    well_defined: AxiomCheckJson,
    associativity: AxiomCheckJson,
    commutativity: AxiomCheckJson,
    identity: AxiomCheckJson,
    inverses: AxiomCheckJson,
    element_associativity: AxiomCheckJson,
}

#[derive(Serialize)]
struct GroupJson {
    q: JsonU64,
    classes: JsonU64,
    reps: Vec<JsonU64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<JsonU64>>>,
    table_omitted: bool,
    axioms: AxiomsJson,
}

fn axiom_line(name: &str, c: &AxiomCheck) -> String {
    match (&c.pass, &c.witness) {
        (true, _) => format!("{name}: pass ({} trials)\n", c.trials),
        (false, Some(w)) => format!("{name}: FAIL ({w})\n"),
        (false, None) => format!("{name}: FAIL\n"),
    }
}

pub fn render_group(g: &QuotientGroup, axioms: &AxiomReport, format: Format) -> String {
    let mode = if axioms.exhaustive { "exhaustive" } else { "sampled" };
    match format {
        Format::Json => {
            let n = g.reps.len();
            let table = g.table.as_ref().map(|t| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| JsonU64(g.reps[t[i * n + j] as usize]))
                            .collect()
                    })
                    .collect()
            });
            let view = GroupJson {
                q: JsonU64(g.q.get()),
                classes: JsonU64(g.class_count()),
                reps: g.reps.iter().map(|&r| JsonU64(r)).collect(),
                table,
                table_omitted: g.table_omitted,
                axioms: AxiomsJson {
                    mode,
                    all_pass: axioms.all_pass(),
                    well_defined: (&axioms.well_defined).into(),
                    associativity: (&axioms.associativity).into(),
                    commutativity: (&axioms.commutativity).into(),
                    identity: (&axioms.identity).into(),
                    inverses: (&axioms.inverses).into(),
                    element_associativity: (&axioms.element_associativity).into(),
                },
            };
            let mut s = serde_json::to_string(&view).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("rep\n");
            for r in &g.reps {
                out.push_str(&format!("{r}\n"));
            }
            out
        }
        Format::Text => {
            let q = g.q.get();
            let reps: Vec<String> = g.reps.iter().map(u64::to_string).collect();
            let mut out = format!("G_{q}*/R_{q}*: {} classes\n", g.class_count());
            out.push_str(&format!("reps: {}\n", reps.join(", ")));
            if let Some(t) = &g.table {
                let n = g.reps.len();
                out.push_str("table:\n");
                for i in 0..n {
                    let row: Vec<String> = (0..n)
                        .map(|j| g.reps[t[i * n + j] as usize].to_string())
                        .collect();
                    out.push_str(&format!("  {}\n", row.join(" ")));
                }
            } else if g.table_omitted {
                out.push_str("table: omitted (class count above cap)\n");
            }
            out.push_str(&format!("axiom check ({mode}):\n"));
            out.push_str(&axiom_line("  well-defined", &axioms.well_defined));
            out.push_str(&axiom_line("  associativity", &axioms.associativity));
            out.push_str(&axiom_line("  commutativity", &axioms.commutativity));
            out.push_str(&axiom_line("  identity", &axioms.identity));
            out.push_str(&axiom_line("  inverses", &axioms.inverses));
            match (&axioms.element_associativity.pass, &axioms.element_associativity.witness) {
                (true, _) => out.push_str("element-level associativity: holds\n"),
                (false, Some(w)) => out.push_str(&format!(
                    "element-level associativity: fails at element level, classes unaffected ({w})\n"
                )),
                (false, None) => out.push_str("element-level associativity: fails\n"),
            }
            out
        }
    }
}

// ---- conjecture reports ---------------------------------------------------

fn kind_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::FermatCycles => "fermat-cycles",
        CheckKind::MersenneCounts => "mersenne-counts",
        CheckKind::MersenneSymmetry => "mersenne-symmetry",
    }
}

#[derive(Serialize)]
struct ReportJson {
    subject: JsonU64,
    target: String,
    check: &'static str,
    verdict: &'static str,
    histogram: Vec<(JsonU64, JsonU64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<Vec<(JsonU64, JsonU64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

pub fn render_report(r: &ConjectureReport, format: Format) -> String {
    let verdict = match r.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    };
    match format {
        Format::Json => {
            let view = ReportJson {
                subject: JsonU64(r.subject),
                target: r.target.label(),
                check: kind_name(r.kind),
                verdict,
                histogram: json_hist(&r.histogram),
                expected: r.expected.as_ref().map(json_hist),
                witness: r.witness.as_ref().map(|w| w.to_string()),
            };
            let mut s = serde_json::to_string(&view).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => match &r.expected {
            Some(expected) => {
                let mut out = String::from("length,expected,actual\n");
                let mut keys: Vec<u64> =
                    expected.lengths().chain(r.histogram.lengths()).collect();
                keys.sort_unstable();
                keys.dedup();
                for k in keys {
                    out.push_str(&format!(
                        "{k},{},{}\n",
                        expected.count(k),
                        r.histogram.count(k)
                    ));
                }
                out
            }
            None => csv_hist(&r.histogram),
        },
        Format::Text => {
            let mut out = format!(
                "check {} for {}: {}\n",
                kind_name(r.kind),
                r.subject,
                verdict.to_uppercase()
            );
            out.push_str(&format!(
                "|G_{}| = {}\n",
                r.subject,
                expansion(&r.histogram)
            ));
            if let Some(expected) = &r.expected {
                out.push_str(&format!("expected = {}\n", expansion(expected)));
            }
            if let Some(w) = &r.witness {
                out.push_str(&format!("witness: {w}\n"));
            }
            out
        }
    }
}

// ---- screen ----------------------------------------------------------------

#[derive(Serialize)]
struct ScreenHitJson {
    d: JsonU64,
    divides: bool,
    criterion: &'static str,
}

#[derive(Serialize)]
struct ScreenJson {
    target: String,
    lo: JsonU64,
    hi: JsonU64,
    candidates: Vec<ScreenHitJson>,
    missed_divisors: Vec<ScreenHitJson>,
    skipped: Vec<(JsonU64, String)>,
    violations: Vec<String>,
}

pub fn render_screen(s: &ScreenOutcome, format: Format) -> String {
    match format {
        Format::Json => {
            let view = ScreenJson {
                target: s.target.label(),
                lo: JsonU64(s.lo),
                hi: JsonU64(s.hi),
                candidates: s
                    .candidates
                    .iter()
                    .map(|h| ScreenHitJson { d: JsonU64(h.d), divides: h.divides, criterion: "pass" })
                    .collect(),
                missed_divisors: s
                    .missed_divisors
                    .iter()
                    .map(|h| ScreenHitJson { d: JsonU64(h.d), divides: h.divides, criterion: "fail" })
                    .collect(),
                skipped: s
                    .skipped
                    .iter()
                    .map(|(d, r)| (JsonU64(*d), r.clone()))
                    .collect(),
                violations: s.violations(),
            };
            let mut out = serde_json::to_string(&view).expect("serializable");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut out = String::from("d,criterion,divides\n");
            for h in &s.candidates {
                out.push_str(&format!("{},pass,{}\n", h.d, h.divides));
            }
            for h in &s.missed_divisors {
                out.push_str(&format!("{},fail,{}\n", h.d, h.divides));
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "screen [{}, {}] against {}\n",
                s.lo,
                s.hi,
                s.target.label()
            );
            for h in &s.candidates {
                out.push_str(&format!(
                    "candidate {}: divides {} = {}\n",
                    h.d,
                    s.target.label(),
                    h.divides
                ));
            }
            for h in &s.missed_divisors {
                out.push_str(&format!(
                    "MISSED DIVISOR {}: divides {} but fails the criterion\n",
                    h.d,
                    s.target.label()
                ));
            }
            for (d, reason) in &s.skipped {
                out.push_str(&format!("skipped {d}: {reason}\n"));
            }
            for v in s.violations() {
                out.push_str(&format!("VIOLATION: {v}\n"));
            }
            out.push_str(&format!(
                "{} candidates, {} violations, {} skipped\n",
                s.candidates.len(),
                s.violations().len(),
                s.skipped.len()
            ));
            out
        }
    }
}

// ---- sweep -----------------------------------------------------------------

fn outcome_word(o: &CheckOutcome) -> String {
    match o {
        CheckOutcome::Pass => "pass".into(),
        CheckOutcome::Fail(msg) => format!("fail: {msg}"),
        CheckOutcome::Skipped(msg) => format!("skip: {msg}"),
    }
}

fn outcome_short(o: &CheckOutcome) -> &'static str {
    match o {
        CheckOutcome::Pass => "pass",
        CheckOutcome::Fail(_) => "fail",
        CheckOutcome::Skipped(_) => "skip",
    }
}

/// One JSON object per modulus, one per line, keys in fixed order.
pub fn render_sweep(results: &[SweepResult], format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            for r in results {
                out.push_str(&format!("{{\"q\":{}", r.q));
                for (check, o) in &r.outcomes {
                    out.push_str(&format!(
                        ",\"{}\":{}",
                        check.name(),
                        serde_json::Value::String(outcome_word(o))
                    ));
                }
                out.push_str("}\n");
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("q,order,tau,prop3,group\n");
            for r in results {
                let cell = |kind: SweepCheck| {
                    r.outcomes
                        .iter()
                        .find(|(c, _)| *c == kind)
                        .map(|(_, o)| outcome_short(o))
                        .unwrap_or("-")
                };
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.q,
                    cell(SweepCheck::Order),
                    cell(SweepCheck::Tau),
                    cell(SweepCheck::Prop3),
                    cell(SweepCheck::Group)
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in results {
                out.push_str(&format!("q={}", r.q));
                for (check, o) in &r.outcomes {
                    out.push_str(&format!(" {}={}", check.name(), outcome_short(o)));
                }
                if let Some((check, msg)) = r.first_failure() {
                    out.push_str(&format!("  # {}: {msg}", check.name()));
                }
                out.push('\n');
            }
            out
        }
    }
}

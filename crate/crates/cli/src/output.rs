//! Rendering: property reports (text and JSON), DOT graphs, and the monoid
//! listing. All output is deterministic for a fixed input.

use serde::Serialize;
use stallings::monoid::{green_classes, idempotent_poset};
use stallings::{
    InverseAutomaton, PropertyReport, SubgroupIndex, TransitionMonoid, Word,
};

pub const REPORT_SCHEMA: &str = "stallings-report/1";

#[derive(Serialize)]
struct ReportDoc<'a> {
    schema: &'static str,
    input: &'a str,
    states: usize,
    rank: usize,
    index: Option<usize>,
    normal: bool,
    malnormal: bool,
    cyclonormal: bool,
    pure: bool,
    burnside: Vec<BurnsideEntry>,
    pi_groups: Vec<PiEntry>,
    monoid_size: usize,
    idempotents: Option<usize>,
    chain_length: Option<usize>,
    cross_checks: Vec<&'static str>,
}

#[derive(Serialize)]
struct BurnsideEntry {
    k: u32,
    holds: bool,
}

#[derive(Serialize)]
struct PiEntry {
    primes: Vec<u64>,
    holds: bool,
}

fn index_value(index: SubgroupIndex) -> Option<usize> {
    match index {
        SubgroupIndex::Finite(n) => Some(n),
        SubgroupIndex::Infinite => None,
    }
}

pub fn report_json(input: &str, report: &PropertyReport) -> String {
    let doc = ReportDoc {
        schema: REPORT_SCHEMA,
        input,
        states: report.state_count,
        rank: report.rank,
        index: index_value(report.index),
        normal: report.is_normal,
        malnormal: report.is_malnormal,
        cyclonormal: report.is_cyclonormal,
        pure: report.is_pure,
        burnside: report
            .burnside
            .iter()
            .map(|&(k, holds)| BurnsideEntry { k, holds })
            .collect(),
        pi_groups: report
            .prime_sets
            .iter()
            .map(|(primes, holds)| PiEntry { primes: primes.clone(), holds: *holds })
            .collect(),
        monoid_size: report.monoid_size,
        idempotents: report.idempotent_count,
        chain_length: report.chain_length,
        cross_checks: report.cross_checks.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

pub fn report_text(input: &str, report: &PropertyReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("schema: {REPORT_SCHEMA}"));
    line(format!("input: {input}"));
    line(format!("states: {}", report.state_count));
    line(format!("rank: {}", report.rank));
    line(format!("index: {}", report.index));
    line(format!("normal: {}", report.is_normal));
    line(format!("malnormal: {}", report.is_malnormal));
    line(format!("cyclonormal: {}", report.is_cyclonormal));
    line(format!("pure: {}", report.is_pure));
    for (k, holds) in &report.burnside {
        line(format!("burnside exponent {k}: {holds}"));
    }
    for (pi, holds) in &report.prime_sets {
        let primes: Vec<String> = pi.iter().map(u64::to_string).collect();
        line(format!("pi-group {{{}}}: {holds}", primes.join(",")));
    }
    line(format!("monoid size: {}", report.monoid_size));
    match (report.idempotent_count, report.chain_length) {
        (Some(e), Some(k)) => {
            line(format!("reduced-realizable idempotents: {e}"));
            line(format!("idempotent chain length: {k}"));
        }
        _ => line("idempotent poset: trivial subgroup".to_string()),
    }
    for check in &report.cross_checks {
        line(format!("cross-check: {check}"));
    }
    out
}

/// One node per state (basepoint double-circled), one directed edge per
/// positive edge labeled by its generator name.
pub fn dot(aut: &InverseAutomaton) -> String {
    let mut out = String::from("digraph stallings {\n");
    out.push_str("  rankdir=LR;\n");
    for q in 0..aut.state_count() {
        let shape = if q == aut.basepoint() { "doublecircle" } else { "circle" };
        out.push_str(&format!("  q{q} [shape={shape}];\n"));
    }
    for (s, g, t) in aut.positive_edges() {
        out.push_str(&format!(
            "  q{s} -> q{t} [label=\"{}\"];\n",
            aut.alphabet().name(g)
        ));
    }
    out.push_str("}\n");
    out
}

/// Element list with witnesses, Green's classes, and the idempotent poset.
pub fn monoid_listing(aut: &InverseAutomaton, cap: usize) -> stallings::Result<String> {
    let m = TransitionMonoid::generate(aut, cap)?;
    let mut out = String::new();
    out.push_str(&format!("monoid size: {}\n", m.len()));
    for id in 0..m.len() {
        let f = m.element(id);
        let map: Vec<String> = (0..f.degree())
            .map(|q| match f.apply(q) {
                Some(t) => format!("{q}>{t}"),
                None => format!("{q}>-"),
            })
            .collect();
        out.push_str(&format!(
            "element {id}: witness {} map [{}]\n",
            m.witness(id).display(aut.alphabet()),
            map.join(" ")
        ));
    }
    let format_classes = |name: &str, classes: &[Vec<usize>], out: &mut String| {
        let rendered: Vec<String> = classes
            .iter()
            .map(|class| {
                let ids: Vec<String> = class.iter().map(usize::to_string).collect();
                format!("{{{}}}", ids.join(","))
            })
            .collect();
        out.push_str(&format!("green {name}: {}\n", rendered.join(" ")));
    };
    let green = green_classes(&m);
    format_classes("R", &green.r, &mut out);
    format_classes("L", &green.l, &mut out);
    format_classes("H", &green.h, &mut out);
    format_classes("D", &green.d, &mut out);
    match idempotent_poset(aut, cap) {
        Ok(poset) => {
            out.push_str(&format!(
                "reduced-realizable idempotents: {}\n",
                poset.idempotents.len()
            ));
            for (f, w) in poset.idempotents.iter().zip(&poset.witnesses) {
                let domain: Vec<String> = f.domain().iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "idempotent on {{{}}} witness {}\n",
                    domain.join(","),
                    w.display(aut.alphabet())
                ));
            }
            out.push_str(&format!("idempotent chain length: {}\n", poset.chain_length));
        }
        Err(stallings::Error::TrivialSubgroup) => {
            out.push_str("idempotent poset: trivial subgroup\n");
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

/// Membership line for the `member` subcommand.
pub fn member_line(aut: &InverseAutomaton, word: &Word) -> String {
    format!("member: {}\n", aut.member(word))
}

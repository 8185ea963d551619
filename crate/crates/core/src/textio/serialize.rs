use std::fmt::Write;

use num_traits::One;

use crate::net::Net;
use crate::program::Program;
use crate::rational::format_rational;

/// Canonical program text: one line per neuron in universe order (a fact or
/// a threshold declaration), then the non-fact rules in canonical order.
/// Parsing the output yields an equal program, and serializing that again
/// yields the same bytes.
pub fn serialize_program(prog: &Program) -> String {
    let sig = prog.signature();
    let mut out = String::new();
    for i in 0..sig.len() {
        match sig.theta(i).finite() {
            None => writeln!(out, "{}.", sig.name(i)),
            Some(q) => writeln!(out, "theta {} = {}.", sig.name(i), format_rational(q)),
        }
        .unwrap();
    }
    for rule in prog.rules().iter().filter(|r| !r.is_fact()) {
        let body: Vec<String> = rule
            .body()
            .iter()
            .map(|(b, w)| {
                if w.is_one() {
                    sig.name(*b).to_string()
                } else {
                    format!("{} : {}", sig.name(*b), format_rational(w))
                }
            })
            .collect();
        writeln!(out, "{} <- {}.", sig.name(rule.head()), body.join(", ")).unwrap();
    }
    out
}

/// Canonical net text: node declarations in universe order, then edges
/// sorted by (source, target) position.
pub fn serialize_net(net: &Net) -> String {
    let sig = net.signature();
    let mut out = String::new();
    for i in 0..sig.len() {
        match sig.theta(i).finite() {
            None => writeln!(out, "node {} fact.", sig.name(i)),
            Some(q) => writeln!(out, "node {} theta {}.", sig.name(i), format_rational(q)),
        }
        .unwrap();
    }
    for ((from, to), w) in net.edges() {
        writeln!(out, "edge {} -> {} : {}.", sig.name(*from), sig.name(*to), format_rational(w)).unwrap();
    }
    out
}

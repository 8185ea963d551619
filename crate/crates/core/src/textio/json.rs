use serde_json::{json, Map, Value};

use crate::interp::{Interpretation, Signature};
use crate::net::Net;
use crate::program::Program;
use crate::rational::{format_extended_pq, format_rational_pq};

/// `{"kind": kind, "universe": [...], ...payload}`.
pub fn envelope(kind: &str, sig: &Signature, payload: Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("universe".into(), json!(sig.names().iter().map(|n| n.as_str()).collect::<Vec<_>>()));
    obj.extend(payload);
    Value::Object(obj)
}

/// Member names in universe order.
pub fn interpretation_json(sig: &Signature, i: &Interpretation) -> Value {
    json!(sig.names_of(i))
}

pub fn interpretations_json(sig: &Signature, is: &[Interpretation]) -> Value {
    Value::Array(is.iter().map(|i| interpretation_json(sig, i)).collect())
}

fn thresholds(sig: &Signature) -> Value {
    let mut m = Map::new();
    for (i, n) in sig.names().iter().enumerate() {
        m.insert(n.to_string(), json!(format_extended_pq(sig.theta(i))));
    }
    Value::Object(m)
}

pub fn program_json(prog: &Program) -> Value {
    let sig = prog.signature();
    let rules: Vec<Value> = prog
        .rules()
        .iter()
        .map(|r| {
            let body: Vec<Value> =
                r.body().iter().map(|(b, w)| json!({"neuron": sig.name(*b).as_str(), "weight": format_rational_pq(w)})).collect();
            json!({"head": sig.name(r.head()).as_str(), "body": body})
        })
        .collect();
    let mut payload = Map::new();
    payload.insert("thresholds".into(), thresholds(sig));
    payload.insert("rules".into(), Value::Array(rules));
    envelope("program", sig, payload)
}

pub fn net_json(net: &Net) -> Value {
    let sig = net.signature();
    let edges: Vec<Value> = net
        .edges()
        .iter()
        .map(|((f, t), w)| json!({"from": sig.name(*f).as_str(), "to": sig.name(*t).as_str(), "weight": format_rational_pq(w)}))
        .collect();
    let mut payload = Map::new();
    payload.insert("thresholds".into(), thresholds(sig));
    payload.insert("edges".into(), Value::Array(edges));
    envelope("net", sig, payload)
}

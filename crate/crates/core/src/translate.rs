//! Net ↔ program translations.
//!
//! A net becomes the minimalist program with one rule per neuron, whose body
//! is the neuron's weighted body; a minimalist program becomes its
//! dependency graph. Both directions reuse the same signature.

use crate::error::{Error, Result};
use crate::net::Net;
use crate::program::{NeuralRule, Program, ProgramOptions};

/// `P_N`: one rule `a ← b_N(a)` per neuron, weights taken from the edges.
/// Facts become fact rules.
pub fn net_to_program(net: &Net) -> Program {
    let rules = (0..net.len()).map(|a| NeuralRule::new(a, net.incoming(a).clone()));
    Program::new(net.signature().clone(), rules, ProgramOptions::default())
        .expect("a valid net always translates to a valid program")
}

/// `P̂_N` for an ordinary net: the same rules read as plain Horn clauses
/// (unit weights, threshold equal to body size).
pub fn ordinary_net_to_ordinary_program(net: &Net) -> Result<Program> {
    if !net.classify().ordinary {
        return Err(Error::NotOrdinary("net"));
    }
    Ok(net_to_program(net))
}

/// `dep(P)` packaged as a net; the program must be minimalist.
pub fn program_to_net(prog: &Program) -> Result<Net> {
    prog.dependency_graph()
}

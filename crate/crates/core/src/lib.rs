//! Exact operator semantics for boolean threshold nets and neural logic
//! programs: immediate consequence operators, least models, Fitting and
//! ultimate approximations with their stable answer sets, FLP answer sets,
//! net/program translations and equivalence checking.

pub mod equivalence;
pub mod error;
pub mod fixpoint;
pub mod interp;
pub mod net;
pub mod oracle;
pub mod program;
pub mod rational;
pub mod textio;
pub mod translate;

pub use error::{Error, Result};
pub use interp::{Cap, Interpretation, NeuronId, Signature, ThreeInterpretation};
pub use net::{LayeredNet, Net, NetBuilder, NetClass};
pub use rational::{ExtendedRational, Rational};
pub use program::{NeuralRule, Program, ProgramBuilder, ProgramClass, ProgramOptions};

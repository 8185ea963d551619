//! Brute-force reference semantics, seeded random instances, and the
//! FLP-versus-AFT answer set experiment.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{Cap, Interpretation, NeuronId, Signature, ThreeInterpretation};
use crate::net::Net;
use crate::program::{NeuralRule, Program, ProgramOptions};
use crate::rational::{ExtendedRational, Rational};
use crate::textio::{parse_program, serialize_program};

/// Largest universe the experiment accepts; FLP minimality checks are
/// exponential in the size of every candidate.
pub const EXPERIMENT_MAX_NEURONS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenParams {
    /// Inclusive range.
    pub neuron_count: (usize, usize),
    /// Probability of each possible edge (or body atom).
    pub edge_density: f64,
    pub negative_weight_fraction: f64,
    /// Inclusive range, clamped to the drawn neuron count.
    pub fact_count: (usize, usize),
    /// Weights are ±p/q with 1 ≤ p ≤ max_numerator, 1 ≤ q ≤ max_denominator.
    pub max_numerator: i64,
    pub max_denominator: i64,
    /// Only emit edges that go forward in a random topological order.
    pub acyclic: bool,
    /// Unit weights with thresholds equal to body size.
    pub ordinary: bool,
    /// Programs only: rules drawn per non-fact head, at least one.
    pub max_rules_per_head: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            neuron_count: (1, 6),
            edge_density: 0.4,
            negative_weight_fraction: 0.3,
            fact_count: (0, 2),
            max_numerator: 3,
            max_denominator: 2,
            acyclic: false,
            ordinary: false,
            max_rules_per_head: 1,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        GenParams { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InfeasibleParams(m.to_string()));
        if self.neuron_count.0 > self.neuron_count.1 {
            return bad("neuron_count range is empty");
        }
        if self.fact_count.0 > self.fact_count.1 {
            return bad("fact_count range is empty");
        }
        if self.fact_count.0 > self.neuron_count.1 {
            return bad("fact_count exceeds neuron_count");
        }
        if !(0.0..=1.0).contains(&self.edge_density) {
            return bad("edge_density must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.negative_weight_fraction) {
            return bad("negative_weight_fraction must lie in [0, 1]");
        }
        if self.max_numerator < 1 || self.max_denominator < 1 {
            return bad("weight bounds must be at least 1");
        }
        if self.max_rules_per_head < 1 {
            return bad("max_rules_per_head must be at least 1");
        }
        Ok(())
    }
}

/// Neuron names: `a`..`z`, then `n26`, `n27`, ...
pub fn neuron_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("n{i}")
    }
}

struct Draw<'a> {
    params: &'a GenParams,
    rng: ChaCha8Rng,
}

/// Shape shared by nets and programs: universe size, which neurons are
/// facts, and a position order that acyclic instances respect.
struct Skeleton {
    n: usize,
    is_fact: Vec<bool>,
    /// `rank[a] < rank[b]` whenever an edge a → b is allowed in acyclic mode.
    rank: Vec<usize>,
}

impl<'a> Draw<'a> {
    fn new(params: &'a GenParams) -> Result<Self> {
        params.validate()?;
        Ok(Draw { params, rng: ChaCha8Rng::seed_from_u64(params.seed) })
    }

    fn skeleton(&mut self) -> Skeleton {
        let p = self.params;
        let n = self.rng.gen_range(p.neuron_count.0.max(p.fact_count.0)..=p.neuron_count.1);
        let mut k = self.rng.gen_range(p.fact_count.0..=p.fact_count.1.min(n));
        // An acyclic instance needs a fact to start from.
        if p.acyclic && n > 0 && k == 0 {
            k = 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        let mut is_fact = vec![false; n];
        for &a in &order[..k] {
            is_fact[a] = true;
        }
        let mut rank = vec![0; n];
        for (r, &a) in order.iter().enumerate() {
            rank[a] = r;
        }
        Skeleton { n, is_fact, rank }
    }

    fn sources(&self, sk: &Skeleton, target: usize) -> Vec<usize> {
        (0..sk.n).filter(|&s| !self.params.acyclic || sk.rank[s] < sk.rank[target]).collect()
    }

    fn weight(&mut self) -> Rational {
        if self.params.ordinary {
            return Rational::one();
        }
        let num = self.rng.gen_range(1..=self.params.max_numerator);
        let den = self.rng.gen_range(1..=self.params.max_denominator);
        let w = Rational::new(num.into(), den.into());
        if self.rng.gen_bool(self.params.negative_weight_fraction) {
            -w
        } else {
            w
        }
    }

    /// A nonempty body over `candidates` (which must be nonempty), each atom
    /// kept with the edge density.
    fn body(&mut self, candidates: &[usize]) -> Vec<(usize, Rational)> {
        let mut atoms: Vec<usize> = candidates.iter().copied().filter(|_| self.rng.gen_bool(self.params.edge_density)).collect();
        if atoms.is_empty() {
            atoms.push(*candidates.choose(&mut self.rng).unwrap());
        }
        atoms.into_iter().map(|b| (b, self.weight())).collect()
    }

    /// `size` distinct atoms from `candidates` with unit weights.
    fn unit_body(&mut self, candidates: &[usize], size: usize) -> Vec<(usize, Rational)> {
        candidates.choose_multiple(&mut self.rng, size).map(|&b| (b, Rational::one())).collect()
    }

    /// A threshold that some subset of the body reaches: either an exact
    /// subset sum or a rational inside [min sum, max sum].
    fn threshold(&mut self, body: &[(usize, Rational)]) -> Rational {
        if self.params.ordinary {
            return Rational::from_integer(BigInt::from(body.len()));
        }
        if self.rng.gen_bool(0.5) {
            return body.iter().filter(|_| self.rng.gen_bool(0.5)).map(|(_, w)| w.clone()).sum();
        }
        let lo: Rational = body.iter().map(|(_, w)| w).filter(|w| w.is_negative()).sum();
        let hi: Rational = body.iter().map(|(_, w)| w).filter(|w| w.is_positive()).sum();
        let den = BigInt::from(self.rng.gen_range(1..=self.params.max_denominator));
        let from = (&lo * &den).ceil().to_integer();
        let to = (&hi * &den).floor().to_integer();
        let span: i64 = (&to - &from).try_into().unwrap_or(i64::MAX);
        let offset = self.rng.gen_range(0..=span.max(0));
        Rational::new(from + offset, den)
    }

    fn signature(&self, sk: &Skeleton, thetas: Vec<Option<Rational>>) -> Arc<Signature> {
        let entries = thetas.into_iter().enumerate().map(|(a, t)| {
            let theta = t.map_or(ExtendedRational::NegInfinity, ExtendedRational::Finite);
            (NeuronId::new(neuron_name(a)).unwrap(), theta)
        });
        debug_assert_eq!(sk.n, sk.is_fact.len());
        Arc::new(Signature::new(entries).expect("generated names are unique"))
    }
}

/// A random valid net, deterministic in `params.seed`.
pub fn random_net(params: &GenParams) -> Result<Net> {
    let mut d = Draw::new(params)?;
    let sk = d.skeleton();
    let mut edges = Vec::new();
    let mut thetas = vec![None; sk.n];
    for (a, theta) in thetas.iter_mut().enumerate() {
        if sk.is_fact[a] {
            continue;
        }
        let candidates = d.sources(&sk, a);
        let body = d.body(&candidates);
        *theta = Some(d.threshold(&body));
        edges.extend(body.into_iter().map(|(b, w)| (b, a, w)));
    }
    let sig = d.signature(&sk, thetas);
    Ok(Net::new(sig, edges).expect("generator emits valid nets"))
}

/// A random valid program, deterministic in `params.seed`. Every non-fact
/// neuron heads between 1 and `max_rules_per_head` rules.
pub fn random_program(params: &GenParams) -> Result<Program> {
    let mut d = Draw::new(params)?;
    let sk = d.skeleton();
    let mut rules = Vec::new();
    let mut thetas = vec![None; sk.n];
    for (a, theta) in thetas.iter_mut().enumerate() {
        if sk.is_fact[a] {
            rules.push(NeuralRule::fact(a));
            continue;
        }
        let candidates = d.sources(&sk, a);
        let count = d.rng.gen_range(1..=params.max_rules_per_head);
        let first = d.body(&candidates);
        let size = first.len();
        *theta = Some(d.threshold(&first));
        rules.push(NeuralRule::new(a, first));
        for _ in 1..count {
            // Ordinary rules for one head must share the body size.
            let body = if params.ordinary { d.unit_body(&candidates, size) } else { d.body(&candidates) };
            rules.push(NeuralRule::new(a, body));
        }
    }
    let sig = d.signature(&sk, thetas);
    Ok(Program::new(sig, rules, ProgramOptions::default()).expect("generator emits valid programs"))
}

/// Φ_N by its definition: `a` is included iff it fires under every K with
/// lower ⊆ K ⊆ upper. The gap may hold at most 20 neurons.
pub fn brute_fitting(net: &Net, p: &ThreeInterpretation) -> Result<Interpretation> {
    net.signature().check(p.lower())?;
    Cap::default().check(p.upper().difference(p.lower()).count())?;
    let mut out = Interpretation::full(net.len());
    for k in p.completions() {
        out = out.intersection(&net.t(&k)?);
    }
    Ok(out)
}

/// The ultimate operator by its definition: (∩ T(K), ∪ T(K)) over every K
/// in the interval. Same gap limit as [`brute_fitting`].
pub fn brute_ultimate(net: &Net, p: &ThreeInterpretation) -> Result<ThreeInterpretation> {
    net.signature().check(p.lower())?;
    Cap::default().check(p.upper().difference(p.lower()).count())?;
    let mut lower = Interpretation::full(net.len());
    let mut upper = Interpretation::empty(net.len());
    for k in p.completions() {
        let t = net.t(&k)?;
        lower = lower.intersection(&t);
        upper = upper.union(&t);
    }
    ThreeInterpretation::new(lower, upper)
}

/// An AFT answer set that is not an FLP answer set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub seed: u64,
    pub universe: Vec<String>,
    /// Canonical program text, replayable through the parser.
    pub program: String,
    pub witness: Vec<String>,
}

impl Counterexample {
    /// Re-parses the program and confirms the witness is an AFT answer set
    /// but not an FLP answer set.
    pub fn verify(&self) -> Result<bool> {
        let prog = parse_program(&self.program).map_err(|e| Error::InvalidProgram(e.to_string()))?;
        let w = prog.signature().interpretation(self.witness.iter().map(String::as_str))?;
        Ok(prog.phi_dagger(&w)? == w && !prog.is_flp_answer_set(&w)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: &'static str,
    /// Always empty: each counterexample carries its own universe.
    pub universe: Vec<String>,
    pub params: GenParams,
    pub instances: usize,
    /// Instances whose AFT answer sets are all FLP answer sets.
    pub aft_subset_flp: usize,
    /// Instances with an FLP answer set that is not an AFT answer set.
    pub flp_not_aft: usize,
    pub positive_instances: usize,
    pub positive_counterexamples: usize,
    pub counterexamples: Vec<Counterexample>,
}

struct InstanceResult {
    positive: bool,
    flp_not_aft: bool,
    counterexamples: Vec<Counterexample>,
}

/// Seed of instance `i`, independent of every other instance.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng.next_u64()
}

fn run_instance(params: &GenParams, i: usize) -> Result<InstanceResult> {
    let seed = instance_seed(params.seed, i);
    let prog = random_program(&params.with_seed(seed))?;
    let cap = Cap(EXPERIMENT_MAX_NEURONS);
    let aft = prog.answer_sets(cap)?;
    let flp = prog.flp_answer_sets(cap)?;
    let sig = prog.signature();
    let counterexamples = aft
        .iter()
        .filter(|w| !flp.contains(w))
        .map(|w| Counterexample {
            instance: i,
            seed,
            universe: sig.names().iter().map(|n| n.to_string()).collect(),
            program: serialize_program(&prog),
            witness: sig.names_of(w),
        })
        .collect();
    Ok(InstanceResult {
        positive: prog.classify().positive,
        flp_not_aft: flp.iter().any(|w| !aft.contains(w)),
        counterexamples,
    })
}

/// Draws `count` programs and compares their AFT and FLP answer sets.
/// The report depends only on `params` (including its seed) and `count`.
pub fn flp_vs_aft_experiment(params: &GenParams, count: usize) -> Result<ExperimentReport> {
    params.validate()?;
    if params.neuron_count.1 > EXPERIMENT_MAX_NEURONS {
        return Err(Error::InfeasibleParams(format!(
            "the experiment supports at most {EXPERIMENT_MAX_NEURONS} neurons per program"
        )));
    }
    let results: Vec<InstanceResult> = (0..count).into_par_iter().map(|i| run_instance(params, i)).collect::<Result<_>>()?;
    let mut report = ExperimentReport {
        kind: "flp_experiment",
        universe: Vec::new(),
        params: params.clone(),
        instances: count,
        aft_subset_flp: 0,
        flp_not_aft: 0,
        positive_instances: 0,
        positive_counterexamples: 0,
        counterexamples: Vec::new(),
    };
    for r in results {
        report.aft_subset_flp += usize::from(r.counterexamples.is_empty());
        report.flp_not_aft += usize::from(r.flp_not_aft);
        if r.positive {
            report.positive_instances += 1;
            report.positive_counterexamples += r.counterexamples.len();
        }
        report.counterexamples.extend(r.counterexamples);
    }
    Ok(report)
}

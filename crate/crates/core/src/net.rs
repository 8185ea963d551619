//! Boolean threshold nets and their semantics.
//!
//! A net is a weighted digraph over a [`Signature`]. A neuron fires under an
//! interpretation when the weighted sum of its active body neurons reaches
//! its threshold; facts (empty body, threshold `−∞`) always fire.
//!
//! Three-valued operators never enumerate the interval `[lower, upper]`: a
//! firing condition is linear in each body value, so its minimum over the
//! interval takes positive weights from `lower` and negative weights from
//! `upper`, and its maximum does the opposite. The brute-force versions in
//! [`crate::oracle`] check this.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fixpoint::{self, IterationTrace};
use crate::interp::{Cap, Interpretation, NeuronId, SharedSignature, Signature, ThreeInterpretation};
use crate::rational::{ext_ge, weighted_sum, ExtendedRational, Rational};

/// Incoming weighted edges of one neuron, sources in universe order.
pub(crate) type Body = Vec<(usize, Rational)>;

/// Whether `Σ w·[active(b)] ≥ θ`, with the empty sum being `−∞`.
pub(crate) fn threshold_met(body: &[(usize, Rational)], theta: &ExtendedRational, active: impl Fn(usize, &Rational) -> bool) -> bool {
    ext_ge(&weighted_sum(body.iter().map(|(b, w)| (w, active(*b, w)))), theta)
}

/// Firing condition minimised over every `K` between `lower` and `upper`.
pub(crate) fn fires_everywhere(body: &[(usize, Rational)], theta: &ExtendedRational, lower: &Interpretation, upper: &Interpretation) -> bool {
    threshold_met(body, theta, |b, w| if crate::rational::is_positive(w) { lower.contains(b) } else { upper.contains(b) })
}

/// Firing condition maximised over every `K` between `lower` and `upper`.
pub(crate) fn fires_somewhere(body: &[(usize, Rational)], theta: &ExtendedRational, lower: &Interpretation, upper: &Interpretation) -> bool {
    threshold_met(body, theta, |b, w| if crate::rational::is_positive(w) { upper.contains(b) } else { lower.contains(b) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NetClass {
    pub positive: bool,
    pub ordinary: bool,
    pub acyclic: bool,
}

#[derive(Clone, Debug)]
pub struct Net {
    sig: SharedSignature,
    weights: BTreeMap<(usize, usize), Rational>,
    incoming: Vec<Body>,
}

impl PartialEq for Net {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.weights == other.weights
    }
}

impl Eq for Net {}

impl Net {
    /// Validates and builds a net. Edges are `(source, target, weight)` by
    /// universe index.
    pub fn new(sig: SharedSignature, edges: impl IntoIterator<Item = (usize, usize, Rational)>) -> Result<Self> {
        let n = sig.len();
        let mut weights = BTreeMap::new();
        for (from, to, w) in edges {
            if from >= n || to >= n {
                return Err(Error::InvalidNet(format!("edge endpoint {} outside the universe", from.max(to))));
            }
            if w == Rational::from_integer(0.into()) {
                return Err(Error::InvalidNet(format!(
                    "edge {} -> {} has weight 0",
                    sig.name(from),
                    sig.name(to)
                )));
            }
            if weights.insert((from, to), w).is_some() {
                return Err(Error::InvalidNet(format!("duplicate edge {} -> {}", sig.name(from), sig.name(to))));
            }
        }
        let mut incoming = vec![Vec::new(); n];
        for ((from, to), w) in &weights {
            incoming[*to].push((*from, w.clone()));
        }
        for (a, body) in incoming.iter().enumerate() {
            let fact_theta = sig.theta(a).is_neg_infinity();
            if body.is_empty() && !fact_theta {
                return Err(Error::InvalidNet(format!(
                    "neuron '{}' has an empty body but threshold {}; facts need -inf",
                    sig.name(a),
                    sig.theta(a)
                )));
            }
            if !body.is_empty() && fact_theta {
                return Err(Error::InvalidNet(format!(
                    "neuron '{}' has threshold -inf but a nonempty body",
                    sig.name(a)
                )));
            }
        }
        Ok(Net { sig, weights, incoming })
    }

    pub fn signature(&self) -> &SharedSignature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.sig.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sig.is_empty()
    }

    /// Nonzero edges keyed by `(source, target)`.
    pub fn edges(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.weights
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&Rational> {
        self.weights.get(&(from, to))
    }

    pub(crate) fn incoming(&self, a: usize) -> &Body {
        &self.incoming[a]
    }

    /// `b_N(a)`: sources of nonzero edges into `a`.
    pub fn body(&self, a: &str) -> Result<Vec<NeuronId>> {
        let a = self.sig.require(a)?;
        Ok(self.incoming[a].iter().map(|(b, _)| self.sig.name(*b).clone()).collect())
    }

    pub fn body_indices(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.incoming[a].iter().map(|(b, _)| *b)
    }

    pub fn is_fact(&self, a: usize) -> bool {
        self.incoming[a].is_empty()
    }

    pub fn facts(&self) -> Interpretation {
        Interpretation::from_indices(self.len(), (0..self.len()).filter(|&a| self.is_fact(a)))
    }

    pub fn classify(&self) -> NetClass {
        let positive = self.weights.values().all(crate::rational::is_positive);
        let one = Rational::from_integer(1.into());
        let ordinary = (0..self.len()).filter(|&a| !self.is_fact(a)).all(|a| {
            let body = &self.incoming[a];
            body.iter().all(|(_, w)| *w == one)
                && *self.sig.theta(a) == ExtendedRational::from_integer(body.len() as i64)
        });
        NetClass { positive, ordinary, acyclic: self.levels().is_some() }
    }

    /// Longest-path level of every neuron (facts at 1), or `None` on a cycle.
    fn levels(&self) -> Option<Vec<usize>> {
        levels_of(self.len(), |a| self.body_indices(a).collect())
    }

    /// Immediate consequence operator `T_N`.
    pub fn t(&self, i: &Interpretation) -> Result<Interpretation> {
        self.sig.check(i)?;
        Ok(self.t_unchecked(i))
    }

    pub(crate) fn t_unchecked(&self, i: &Interpretation) -> Interpretation {
        let n = self.len();
        Interpretation::from_indices(
            n,
            (0..n).filter(|&a| threshold_met(&self.incoming[a], self.sig.theta(a), |b, _| i.contains(b))),
        )
    }

    pub fn least_model(&self) -> Result<Interpretation> {
        Ok(self.least_model_trace()?.last().clone())
    }

    /// The Kleene chain from `∅` under `T_N`; positive nets only.
    pub fn least_model_trace(&self) -> Result<IterationTrace> {
        if !self.classify().positive {
            return Err(Error::NotPositive("net"));
        }
        fixpoint::kleene(|i| self.t_unchecked(i), self.len(), false)
    }

    /// Prefixed points of `T_N`.
    pub fn models(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::enumerate(self.len(), cap, |i| self.t_unchecked(i).is_subset(i))
    }

    pub fn supported_models(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::all_fixed_points(|i| self.t_unchecked(i), self.len(), cap)
    }

    /// Fitting operator `Φ_N(lower, upper)`.
    pub fn fitting(&self, p: &ThreeInterpretation) -> Result<Interpretation> {
        self.sig.check(p.lower())?;
        Ok(self.fitting_bounds(p.lower(), p.upper()))
    }

    /// `Φ_N` on an arbitrary pair, consistent or not.
    pub(crate) fn fitting_bounds(&self, lower: &Interpretation, upper: &Interpretation) -> Interpretation {
        let n = self.len();
        Interpretation::from_indices(
            n,
            (0..n).filter(|&a| fires_everywhere(&self.incoming[a], self.sig.theta(a), lower, upper)),
        )
    }

    /// `Φ_N†(I)`: least fixed point of `J ↦ Φ_N(J, I)`.
    pub fn phi_dagger(&self, i: &Interpretation) -> Result<Interpretation> {
        Ok(self.phi_dagger_trace(i)?.last().clone())
    }

    pub fn phi_dagger_trace(&self, i: &Interpretation) -> Result<IterationTrace> {
        self.sig.check(i)?;
        fixpoint::kleene(|j| self.fitting_bounds(j, i), self.len(), false)
    }

    pub fn answer_sets(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::enumerate(self.len(), cap, |i| self.phi_dagger(i).as_ref() == Ok(i))
    }

    /// Ultimate operator `U_N(lower, upper) = (∩ T_N(K), ∪ T_N(K))`.
    pub fn ultimate(&self, p: &ThreeInterpretation) -> Result<ThreeInterpretation> {
        self.sig.check(p.lower())?;
        let (lo, hi) = self.ultimate_bounds(p.lower(), p.upper());
        ThreeInterpretation::new(lo, hi)
    }

    pub(crate) fn ultimate_bounds(&self, lower: &Interpretation, upper: &Interpretation) -> (Interpretation, Interpretation) {
        let n = self.len();
        let hi = Interpretation::from_indices(
            n,
            (0..n).filter(|&a| fires_somewhere(&self.incoming[a], self.sig.theta(a), lower, upper)),
        );
        (self.fitting_bounds(lower, upper), hi)
    }

    /// `U_N†(I)`: least fixed point of `J ↦ lower(U_N(J, I))`.
    pub fn ultimate_dagger(&self, i: &Interpretation) -> Result<Interpretation> {
        self.sig.check(i)?;
        fixpoint::lfp(|j| self.ultimate_bounds(j, i).0, self.len(), false)
    }

    pub fn ultimate_answer_sets(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::enumerate(self.len(), cap, |i| self.ultimate_dagger(i).as_ref() == Ok(i))
    }

    /// Canonical longest-path layering.
    pub fn layers(&self) -> Result<LayeredNet> {
        let levels = self.levels().ok_or(Error::NotAcyclic("net"))?;
        LayeredNet::new(self.clone(), group_levels(&levels))
    }
}

/// Longest-path levels for a graph given by its body function; `None` if
/// the graph has a cycle.
pub(crate) fn levels_of(n: usize, body: impl Fn(usize) -> Vec<usize>) -> Option<Vec<usize>> {
    let bodies: Vec<Vec<usize>> = (0..n).map(body).collect();
    let mut level = vec![0usize; n];
    let mut indegree: Vec<usize> = bodies.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (a, body) in bodies.iter().enumerate() {
        for &b in body {
            children[b].push(a);
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&a| indegree[a] == 0).collect();
    for &a in &ready {
        level[a] = 1;
    }
    let mut done = 0;
    while let Some(b) = ready.pop() {
        done += 1;
        for &a in &children[b] {
            level[a] = level[a].max(level[b] + 1);
            indegree[a] -= 1;
            if indegree[a] == 0 {
                ready.push(a);
            }
        }
    }
    (done == n).then_some(level)
}

pub(crate) fn group_levels(levels: &[usize]) -> Vec<Vec<usize>> {
    let depth = levels.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth];
    for (a, &l) in levels.iter().enumerate() {
        layers[l - 1].push(a);
    }
    layers
}

/// An acyclic net together with a partition of its universe into layers,
/// every edge pointing from a lower layer to a strictly higher one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredNet {
    net: Net,
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
}

impl LayeredNet {
    pub fn new(net: Net, layers: Vec<Vec<usize>>) -> Result<Self> {
        let n = net.len();
        let mut layer_of = vec![usize::MAX; n];
        for (k, layer) in layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidLayering(format!("layer {} is empty", k + 1)));
            }
            for &a in layer {
                if a >= n || layer_of[a] != usize::MAX {
                    return Err(Error::InvalidLayering("layers do not partition the universe".into()));
                }
                layer_of[a] = k;
            }
        }
        if let Some(a) = layer_of.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidLayering(format!("neuron '{}' is in no layer", net.sig.name(a))));
        }
        for &(from, to) in net.edges().keys() {
            if layer_of[from] >= layer_of[to] {
                return Err(Error::InvalidLayering(format!(
                    "edge {} -> {} does not go to a higher layer",
                    net.sig.name(from),
                    net.sig.name(to)
                )));
            }
        }
        if (0..n).any(|a| net.is_fact(a) != (layer_of[a] == 0)) {
            return Err(Error::InvalidLayering("the input layer must hold exactly the facts".into()));
        }
        Ok(LayeredNet { net, layers, layer_of })
    }

    pub fn net(&self) -> &Net {
        &self.net
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn layer_of(&self, a: usize) -> usize {
        self.layer_of[a] + 1
    }

    pub fn input_layer(&self) -> Interpretation {
        self.layer_set(0)
    }

    pub fn output_layer(&self) -> Interpretation {
        self.layer_set(self.layers.len().saturating_sub(1))
    }

    fn layer_set(&self, k: usize) -> Interpretation {
        let members = self.layers.get(k).cloned().unwrap_or_default();
        Interpretation::from_indices(self.net.len(), members)
    }

    /// Names of the neurons in every layer, in order.
    pub fn layer_names(&self) -> Vec<Vec<String>> {
        let sig = self.net.signature();
        self.layers
            .iter()
            .map(|l| l.iter().map(|&a| sig.name(a).to_string()).collect())
            .collect()
    }

    /// All activations reached when the input layer is clamped to `input`
    /// and each later layer is evaluated against everything active below it.
    pub fn activations(&self, input: &Interpretation) -> Result<Interpretation> {
        self.net.sig.check(input)?;
        if let Some(a) = input.iter().find(|&a| self.layer_of[a] != 0) {
            return Err(Error::InputOutsideInputLayer(self.net.sig.name(a).to_string()));
        }
        let mut active = input.clone();
        for layer in self.layers.iter().skip(1) {
            let fired: Vec<usize> = layer
                .iter()
                .copied()
                .filter(|&a| threshold_met(self.net.incoming(a), self.net.sig.theta(a), |b, _| active.contains(b)))
                .collect();
            for a in fired {
                active.insert(a);
            }
        }
        Ok(active)
    }

    /// The boolean function `f_N` from input layer to output layer.
    pub fn feed_forward(&self, input: &Interpretation) -> Result<Interpretation> {
        Ok(self.activations(input)?.intersection(&self.output_layer()))
    }
}

/// Fluent construction by neuron name, mostly for tests and the parser.
#[derive(Default, Debug, Clone)]
pub struct NetBuilder {
    neurons: Vec<(String, ExtendedRational)>,
    edges: Vec<(String, String, Rational)>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fact(mut self, name: &str) -> Self {
        self.neurons.push((name.to_string(), ExtendedRational::NegInfinity));
        self
    }

    pub fn neuron(mut self, name: &str, theta: Rational) -> Self {
        self.neurons.push((name.to_string(), ExtendedRational::Finite(theta)));
        self
    }

    pub fn edge(mut self, from: &str, to: &str, weight: Rational) -> Self {
        self.edges.push((from.to_string(), to.to_string(), weight));
        self
    }

    pub fn build(self) -> Result<Net> {
        let sig = Signature::from_pairs(self.neurons.iter().map(|(n, t)| (n.as_str(), t.clone())))?;
        let edges = self
            .edges
            .iter()
            .map(|(f, t, w)| Ok((sig.require(f)?, sig.require(t)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Net::new(Arc::new(sig), edges)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    /// Three-neuron chain: fact a; a -1-> b with θ(b)=1; b -(-1)-> c with θ(c)=0.
    pub(crate) fn n1() -> Net {
        NetBuilder::new()
            .fact("a")
            .neuron("b", q(1))
            .neuron("c", q(0))
            .edge("a", "b", q(1))
            .edge("b", "c", q(-1))
            .build()
            .unwrap()
    }

    pub(crate) fn xor() -> Net {
        NetBuilder::new()
            .fact("x")
            .fact("y")
            .neuron("h1", q(1))
            .neuron("h2", q(2))
            .neuron("z", q(1))
            .edge("x", "h1", q(1))
            .edge("y", "h1", q(1))
            .edge("x", "h2", q(1))
            .edge("y", "h2", q(1))
            .edge("h1", "z", q(1))
            .edge("h2", "z", q(-1))
            .build()
            .unwrap()
    }

    fn set(net: &Net, names: &[&str]) -> Interpretation {
        net.signature().interpretation(names.iter().copied()).unwrap()
    }

    fn three(net: &Net, lo: &[&str], hi: &[&str]) -> ThreeInterpretation {
        ThreeInterpretation::new(set(net, lo), set(net, hi)).unwrap()
    }

    fn show_all(net: &Net, family: &[Interpretation]) -> Vec<String> {
        family.iter().map(|i| net.signature().show(i)).collect()
    }

    #[test]
    fn validation() {
        let e = NetBuilder::new().neuron("a", q(0)).build();
        assert!(matches!(e, Err(Error::InvalidNet(m)) if m.contains("'a'")));
        let e = NetBuilder::new().fact("a").fact("b").edge("a", "b", q(1)).build();
        assert!(matches!(e, Err(Error::InvalidNet(m)) if m.contains("-inf but a nonempty body")));
        let e = NetBuilder::new().fact("a").neuron("b", q(1)).edge("a", "b", q(0)).build();
        assert!(matches!(e, Err(Error::InvalidNet(m)) if m.contains("weight 0")));
        let e = NetBuilder::new().fact("a").neuron("b", q(1)).edge("a", "c", q(1)).build();
        assert_eq!(e.unwrap_err(), Error::UnknownNeuron("c".into()));
    }

    #[test]
    fn bodies() {
        let n = n1();
        assert!(n.body("a").unwrap().is_empty());
        assert_eq!(n.body("b").unwrap(), vec![NeuronId::new("a").unwrap()]);
        assert_eq!(n.body("c").unwrap(), vec![NeuronId::new("b").unwrap()]);
        assert_eq!(n.body("zz"), Err(Error::UnknownNeuron("zz".into())));
    }

    #[test]
    fn immediate_consequence() {
        let n = n1();
        // c has θ = 0 and an all-inactive body sums to 0, so it joins the facts.
        assert_eq!(n.t(&set(&n, &[])).unwrap(), set(&n, &["a", "c"]));
        assert!(n.facts().is_subset(&n.t(&set(&n, &["b", "c"])).unwrap()));
        assert_eq!(n.t(&set(&n, &["a"])).unwrap(), set(&n, &["a", "b", "c"]));
        assert_eq!(n.t(&set(&n, &["a", "b", "c"])).unwrap(), set(&n, &["a", "b"]));
        assert!(matches!(n.t(&Interpretation::empty(2)), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn classification() {
        assert_eq!(n1().classify(), NetClass { positive: false, ordinary: false, acyclic: true });
        let single = NetBuilder::new().fact("a").build().unwrap();
        assert_eq!(single.classify(), NetClass { positive: true, ordinary: true, acyclic: true });
        let cyc = NetBuilder::new()
            .neuron("a", q(1))
            .neuron("b", q(1))
            .edge("a", "b", q(1))
            .edge("b", "a", q(1))
            .build()
            .unwrap();
        assert!(!cyc.classify().acyclic);
        assert!(cyc.classify().ordinary);
        assert!(matches!(cyc.layers(), Err(Error::NotAcyclic("net"))));
    }

    #[test]
    fn least_models() {
        let empty_pos = NetBuilder::new()
            .neuron("a", q(1))
            .neuron("b", q(1))
            .edge("a", "b", q(1))
            .edge("b", "a", q(1))
            .build()
            .unwrap();
        assert!(empty_pos.least_model().unwrap().is_empty());

        let pos = NetBuilder::new().fact("a").neuron("b", q(1)).edge("a", "b", q(1)).build().unwrap();
        let trace = pos.least_model_trace().unwrap();
        assert_eq!(show_all(&pos, &trace.steps), ["{}", "{a}", "{a, b}", "{a, b}"]);

        let half = NetBuilder::new().fact("a").neuron("b", q(1)).edge("a", "b", ratio(1, 2)).build().unwrap();
        assert_eq!(half.least_model().unwrap(), set(&half, &["a"]));

        assert_eq!(n1().least_model(), Err(Error::NotPositive("net")));
    }

    #[test]
    fn model_families() {
        let n = n1();
        let cap = Cap::default();
        assert_eq!(show_all(&n, &n.supported_models(cap).unwrap()), ["{a, b}"]);
        let models = n.models(cap).unwrap();
        assert!(n.supported_models(cap).unwrap().iter().all(|m| models.contains(m)));
        // {a,b} and {a,b,c}: T({a,b,c}) = {a,b} ⊆ {a,b,c}; {a,c}: T = {a,b,c} ⊄.
        assert_eq!(show_all(&n, &models), ["{a, b}", "{a, b, c}"]);

        let single = NetBuilder::new().fact("a").build().unwrap();
        assert_eq!(show_all(&single, &single.models(cap).unwrap()), ["{a}"]);
    }

    #[test]
    fn fitting_examples() {
        let n = n1();
        assert_eq!(n.fitting(&three(&n, &[], &["a", "b"])).unwrap(), set(&n, &["a"]));
        assert_eq!(n.fitting(&three(&n, &["a"], &["a", "b"])).unwrap(), set(&n, &["a", "b"]));
        for i in crate::interp::all_interpretations(3, Cap::default()).unwrap() {
            assert_eq!(n.fitting(&ThreeInterpretation::exact(i.clone())).unwrap(), n.t(&i).unwrap());
        }
    }

    #[test]
    fn stable_revision_examples() {
        let n = n1();
        assert_eq!(n.phi_dagger(&set(&n, &["a", "b"])).unwrap(), set(&n, &["a", "b"]));
        // Φ(∅,{a,c}) = {a,c} (c's minimum uses upper, where b is absent),
        // then b fires from a: the chain leaves {a,c}.
        let t = n.phi_dagger_trace(&set(&n, &["a", "c"])).unwrap();
        assert_eq!(show_all(&n, &t.steps), ["{}", "{a, c}", "{a, b, c}", "{a, b, c}"]);
        assert_eq!(show_all(&n, &n.answer_sets(Cap::default()).unwrap()), ["{a, b}"]);
        assert_eq!(show_all(&n, &n.ultimate_answer_sets(Cap::default()).unwrap()), ["{a, b}"]);
    }

    #[test]
    fn positive_nets_have_one_answer_set() {
        let pos = NetBuilder::new()
            .fact("a")
            .neuron("b", q(1))
            .neuron("c", q(2))
            .edge("a", "b", q(1))
            .edge("b", "c", q(1))
            .edge("c", "b", q(3))
            .build()
            .unwrap();
        let lm = pos.least_model().unwrap();
        for i in crate::interp::all_interpretations(3, Cap::default()).unwrap() {
            assert_eq!(pos.phi_dagger(&i).unwrap(), lm);
        }
        assert_eq!(pos.answer_sets(Cap::default()).unwrap(), vec![lm.clone()]);
        assert_eq!(pos.ultimate_answer_sets(Cap::default()).unwrap(), vec![lm]);

        let no_facts = NetBuilder::new().neuron("a", q(1)).edge("a", "a", q(1)).build().unwrap();
        assert_eq!(show_all(&no_facts, &no_facts.answer_sets(Cap::default()).unwrap()), ["{}"]);

        let nothing = NetBuilder::new().build().unwrap();
        assert_eq!(nothing.ultimate_answer_sets(Cap::default()).unwrap(), vec![Interpretation::empty(0)]);
    }

    #[test]
    fn ultimate_examples() {
        let n = n1();
        let u = n.ultimate(&three(&n, &[], &["a", "b", "c"])).unwrap();
        assert_eq!(u.lower(), &set(&n, &["a"]));
        assert_eq!(u.upper(), &set(&n, &["a", "b", "c"]));
        for i in crate::interp::all_interpretations(3, Cap::default()).unwrap() {
            let u = n.ultimate(&ThreeInterpretation::exact(i.clone())).unwrap();
            assert_eq!(u, ThreeInterpretation::exact(n.t(&i).unwrap()));
        }
    }

    #[test]
    fn layering() {
        let n = n1();
        let l = n.layers().unwrap();
        assert_eq!(l.layer_names(), vec![vec!["a"], vec!["b"], vec!["c"]]);
        let single = NetBuilder::new().fact("a").build().unwrap();
        assert_eq!(single.layers().unwrap().layer_names(), vec![vec!["a"]]);
        let join = NetBuilder::new()
            .fact("a")
            .neuron("b", q(2))
            .fact("c")
            .edge("a", "b", q(1))
            .edge("c", "b", q(1))
            .build()
            .unwrap();
        assert_eq!(join.layers().unwrap().layer_names(), vec![vec!["a", "c"], vec!["b"]]);
    }

    #[test]
    fn explicit_layerings_are_validated() {
        let n = n1();
        assert!(LayeredNet::new(n.clone(), vec![vec![0], vec![1, 2]]).is_err());
        assert!(LayeredNet::new(n.clone(), vec![vec![0, 1], vec![2]]).is_err());
        assert!(LayeredNet::new(n.clone(), vec![vec![0], vec![1]]).is_err());
        assert!(LayeredNet::new(n.clone(), vec![vec![0], vec![], vec![1], vec![2]]).is_err());
        assert!(LayeredNet::new(n, vec![vec![0], vec![1], vec![2]]).is_ok());
    }

    #[test]
    fn xor_truth_table() {
        let net = xor();
        let l = net.layers().unwrap();
        assert_eq!(l.layer_names(), vec![vec!["x", "y"], vec!["h1", "h2"], vec!["z"]]);
        for (input, out) in [(&[][..], &[][..]), (&["x"], &["z"]), (&["y"], &["z"]), (&["x", "y"], &[])] {
            assert_eq!(l.feed_forward(&set(&net, input)).unwrap(), set(&net, out), "{input:?}");
        }
        assert_eq!(
            l.feed_forward(&set(&net, &["h1"])),
            Err(Error::InputOutsideInputLayer("h1".into()))
        );
    }

    #[test]
    fn feed_forward_sees_skip_connections() {
        // x feeds z directly and through h.
        let net = NetBuilder::new()
            .fact("x")
            .neuron("h", q(1))
            .neuron("z", q(2))
            .edge("x", "h", q(1))
            .edge("h", "z", q(1))
            .edge("x", "z", q(1))
            .build()
            .unwrap();
        let l = net.layers().unwrap();
        assert_eq!(l.feed_forward(&set(&net, &["x"])).unwrap(), set(&net, &["z"]));
        assert!(l.feed_forward(&set(&net, &[])).unwrap().is_empty());
    }
}

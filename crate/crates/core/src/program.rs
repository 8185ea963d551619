//! Neural logic programs: rules `a ← b1:w1, …, bk:wk` over a signature.
//!
//! Rules are kept in a canonical order (by head, then body) with bodies
//! sorted by universe index, so a program is compared as a set of rules.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fixpoint::{self, IterationTrace};
use crate::interp::{Cap, Interpretation, SharedSignature, Signature, ThreeInterpretation};
use crate::net::{fires_everywhere, fires_somewhere, group_levels, levels_of, threshold_met, Net};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeuralRule {
    head: usize,
    body: Vec<(usize, Rational)>,
}

impl NeuralRule {
    /// Body atoms are sorted into universe order; duplicates are rejected
    /// by [`Program::new`].
    pub fn new(head: usize, mut body: Vec<(usize, Rational)>) -> Self {
        body.sort_by_key(|(b, _)| *b);
        NeuralRule { head, body }
    }

    pub fn fact(head: usize) -> Self {
        NeuralRule { head, body: Vec::new() }
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn body(&self) -> &[(usize, Rational)] {
        &self.body
    }

    pub fn body_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.body.iter().map(|(b, _)| *b)
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.body.iter().all(|(_, w)| !w.is_negative())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProgramOptions {
    /// Accept zero body weights, which the rule syntax otherwise forbids.
    pub permit_zero_weights: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgramClass {
    pub positive: bool,
    pub ordinary: bool,
    pub minimalist: bool,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    sig: SharedSignature,
    rules: Vec<NeuralRule>,
}

impl Program {
    pub fn new(sig: SharedSignature, rules: impl IntoIterator<Item = NeuralRule>, opts: ProgramOptions) -> Result<Self> {
        let n = sig.len();
        let rules: BTreeSet<NeuralRule> = rules.into_iter().collect();
        let mut fact_heads = vec![false; n];
        let mut rule_heads = vec![false; n];
        for r in &rules {
            if r.head >= n || r.body_atoms().any(|b| b >= n) {
                return Err(Error::InvalidProgram("rule mentions a neuron outside the universe".into()));
            }
            let head = sig.name(r.head);
            if r.body.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidProgram(format!("a rule for '{head}' repeats a body neuron")));
            }
            if !opts.permit_zero_weights {
                if let Some((b, _)) = r.body.iter().find(|(_, w)| w.is_zero()) {
                    return Err(Error::InvalidProgram(format!(
                        "body neuron '{}' of a rule for '{head}' has weight 0",
                        sig.name(*b)
                    )));
                }
            }
            let theta = sig.theta(r.head);
            if r.is_fact() {
                if !theta.is_neg_infinity() {
                    return Err(Error::InvalidProgram(format!(
                        "fact '{head}' must have threshold -inf, not {theta}"
                    )));
                }
                fact_heads[r.head] = true;
            } else {
                if theta.is_neg_infinity() {
                    return Err(Error::InvalidProgram(format!(
                        "neuron '{head}' has threshold -inf but heads a rule with a nonempty body"
                    )));
                }
                rule_heads[r.head] = true;
            }
        }
        if let Some(a) = (0..n).find(|&a| fact_heads[a] && rule_heads[a]) {
            return Err(Error::InvalidProgram(format!(
                "neuron '{}' is both a fact and the head of a rule",
                sig.name(a)
            )));
        }
        Ok(Program { sig, rules: rules.into_iter().collect() })
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

    pub fn rules(&self) -> &[NeuralRule] {
        &self.rules
    }

    fn rule_fires(&self, r: &NeuralRule, i: &Interpretation) -> bool {
        threshold_met(&r.body, self.sig.theta(r.head), |b, _| i.contains(b))
    }

    /// `I ⊨ r`: if the weighted body reaches the head's threshold, the head
    /// is in `I`.
    pub fn satisfies_rule(&self, i: &Interpretation, r: &NeuralRule) -> Result<bool> {
        self.sig.check(i)?;
        Ok(!self.rule_fires(r, i) || i.contains(r.head))
    }

    /// `I ⊨ P`, i.e. `I` is a model.
    pub fn satisfies(&self, i: &Interpretation) -> Result<bool> {
        self.sig.check(i)?;
        Ok(self.rules.iter().all(|r| !self.rule_fires(r, i) || i.contains(r.head)))
    }

    /// Immediate consequence operator `T_P`.
    pub fn t(&self, i: &Interpretation) -> Result<Interpretation> {
        self.sig.check(i)?;
        Ok(self.t_unchecked(i))
    }

    pub(crate) fn t_unchecked(&self, i: &Interpretation) -> Interpretation {
        Interpretation::from_indices(
            self.len(),
            self.rules.iter().filter(|r| self.rule_fires(r, i)).map(|r| r.head),
        )
    }

    /// The classical Horn operator `{h(r) | b(r) ⊆ I}`; ordinary programs only.
    pub fn t_horn(&self, i: &Interpretation) -> Result<Interpretation> {
        self.sig.check(i)?;
        if !self.classify().ordinary {
            return Err(Error::NotOrdinary("program"));
        }
        Ok(Interpretation::from_indices(
            self.len(),
            self.rules.iter().filter(|r| r.body_atoms().all(|b| i.contains(b))).map(|r| r.head),
        ))
    }

    pub fn models(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::enumerate(self.len(), cap, |i| self.t_unchecked(i).is_subset(i))
    }

    pub fn supported_models(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::all_fixed_points(|i| self.t_unchecked(i), self.len(), cap)
    }

    pub fn least_model(&self) -> Result<Interpretation> {
        Ok(self.least_model_trace()?.last().clone())
    }

    pub fn least_model_trace(&self) -> Result<IterationTrace> {
        if !self.classify().positive {
            return Err(Error::NotPositive("program"));
        }
        fixpoint::kleene(|i| self.t_unchecked(i), self.len(), false)
    }

    /// `Φ_P(lower, upper)`: heads of rules whose firing condition holds for
    /// every `K` in the interval.
    pub fn fitting(&self, p: &ThreeInterpretation) -> Result<Interpretation> {
        self.sig.check(p.lower())?;
        Ok(self.fitting_bounds(p.lower(), p.upper()))
    }

    pub(crate) fn fitting_bounds(&self, lower: &Interpretation, upper: &Interpretation) -> Interpretation {
        Interpretation::from_indices(
            self.len(),
            self.rules
                .iter()
                .filter(|r| fires_everywhere(&r.body, self.sig.theta(r.head), lower, upper))
                .map(|r| r.head),
        )
    }

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

    /// Ultimate operator; defined here for minimalist programs, where the
    /// per-rule interval minimum is exactly `∩_K T_P(K)`.
    pub fn ultimate(&self, p: &ThreeInterpretation) -> Result<ThreeInterpretation> {
        self.sig.check(p.lower())?;
        let (lo, hi) = self.ultimate_bounds(p.lower(), p.upper())?;
        ThreeInterpretation::new(lo, hi)
    }

    pub(crate) fn ultimate_bounds(
        &self,
        lower: &Interpretation,
        upper: &Interpretation,
    ) -> Result<(Interpretation, Interpretation)> {
        self.require_minimalist()?;
        let hi = Interpretation::from_indices(
            self.len(),
            self.rules
                .iter()
                .filter(|r| fires_somewhere(&r.body, self.sig.theta(r.head), lower, upper))
                .map(|r| r.head),
        );
        Ok((self.fitting_bounds(lower, upper), hi))
    }

    pub fn ultimate_answer_sets(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        self.require_minimalist()?;
        fixpoint::enumerate(self.len(), cap, |i| {
            let lfp = fixpoint::lfp(|j| self.fitting_bounds(j, i), self.len(), false);
            lfp.as_ref() == Ok(i)
        })
    }

    /// FLP reduct `P^I`: the rules whose body atoms all lie in `I`.
    pub fn flp_reduct(&self, i: &Interpretation) -> Result<Program> {
        self.sig.check(i)?;
        Ok(Program {
            sig: self.sig.clone(),
            rules: self.rules.iter().filter(|r| r.body_atoms().all(|b| i.contains(b))).cloned().collect(),
        })
    }

    /// Interpretations that are `⊆`-minimal models of their own reduct.
    pub fn flp_answer_sets(&self, cap: Cap) -> Result<Vec<Interpretation>> {
        fixpoint::enumerate(self.len(), cap, |i| self.is_flp_answer_set_unchecked(i))
    }

    pub fn is_flp_answer_set(&self, i: &Interpretation) -> Result<bool> {
        self.sig.check(i)?;
        Ok(self.is_flp_answer_set_unchecked(i))
    }

    fn is_flp_answer_set_unchecked(&self, i: &Interpretation) -> bool {
        let reduct: Vec<&NeuralRule> = self.rules.iter().filter(|r| r.body_atoms().all(|b| i.contains(b))).collect();
        let model = |j: &Interpretation| reduct.iter().all(|r| !self.rule_fires(r, j) || j.contains(r.head));
        model(i) && i.subsets().all(|j| j == *i || !model(&j))
    }

    pub fn classify(&self) -> ProgramClass {
        let one = Rational::one();
        let positive = self.rules.iter().all(NeuralRule::is_positive);
        let ordinary = self.rules.iter().all(|r| {
            r.is_fact()
                || (r.body.iter().all(|(_, w)| *w == one)
                    && *self.sig.theta(r.head) == ExtendedRational::from_integer(r.body.len() as i64))
        });
        ProgramClass {
            positive,
            ordinary,
            minimalist: self.duplicate_head().is_none(),
            acyclic: self.levels().is_some(),
        }
    }

    fn duplicate_head(&self) -> Option<usize> {
        // Rules are sorted by head.
        self.rules.windows(2).find(|w| w[0].head == w[1].head).map(|w| w[0].head)
    }

    fn require_minimalist(&self) -> Result<()> {
        match self.duplicate_head() {
            Some(h) => Err(Error::NotMinimalist { head: self.sig.name(h).to_string() }),
            None => Ok(()),
        }
    }

    fn levels(&self) -> Option<Vec<usize>> {
        let mut deps = vec![BTreeSet::new(); self.len()];
        for r in &self.rules {
            for (b, w) in &r.body {
                if !w.is_zero() {
                    deps[r.head].insert(*b);
                }
            }
        }
        levels_of(self.len(), |a| deps[a].iter().copied().collect())
    }

    /// Longest-path layering of an acyclic program: every head sits strictly
    /// above each of its body neurons.
    pub fn layers(&self) -> Result<Vec<Vec<usize>>> {
        let levels = self.levels().ok_or(Error::NotAcyclic("program"))?;
        Ok(group_levels(&levels))
    }

    /// The dependency graph `dep(P)` of a minimalist program, as a net.
    pub fn dependency_graph(&self) -> Result<Net> {
        self.require_minimalist()?;
        let edges = self
            .rules
            .iter()
            .flat_map(|r| r.body.iter().filter(|(_, w)| !w.is_zero()).map(move |(b, w)| (*b, r.head, w.clone())));
        Net::new(self.sig.clone(), edges)
    }
}

/// Fluent construction by neuron name for tests. Thresholds are given per
/// neuron; facts are declared with [`ProgramBuilder::fact`].
#[derive(Default, Debug, Clone)]
pub struct ProgramBuilder {
    neurons: Vec<(String, ExtendedRational)>,
    rules: Vec<(String, Vec<(String, Rational)>)>,
    opts: ProgramOptions,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn permit_zero_weights(mut self) -> Self {
        self.opts.permit_zero_weights = true;
        self
    }

    pub fn fact(mut self, name: &str) -> Self {
        self.neurons.push((name.to_string(), ExtendedRational::NegInfinity));
        self.rules.push((name.to_string(), Vec::new()));
        self
    }

    pub fn neuron(mut self, name: &str, theta: Rational) -> Self {
        self.neurons.push((name.to_string(), ExtendedRational::Finite(theta)));
        self
    }

    pub fn rule(mut self, head: &str, body: &[(&str, Rational)]) -> Self {
        self.rules.push((head.to_string(), body.iter().map(|(b, w)| (b.to_string(), w.clone())).collect()));
        self
    }

    pub fn build(self) -> Result<Program> {
        let sig = Signature::from_pairs(self.neurons.iter().map(|(n, t)| (n.as_str(), t.clone())))?;
        let rules = self
            .rules
            .iter()
            .map(|(h, body)| {
                let body = body.iter().map(|(b, w)| Ok((sig.require(b)?, w.clone()))).collect::<Result<Vec<_>>>()?;
                Ok(NeuralRule::new(sig.require(h)?, body))
            })
            .collect::<Result<Vec<_>>>()?;
        Program::new(Arc::new(sig), rules, self.opts)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q(n: i64) -> Rational {
        ratio(n, 1)
    }

    /// The translation of `n1`.
    pub(crate) fn p_n1() -> Program {
        ProgramBuilder::new()
            .fact("a")
            .neuron("b", q(1))
            .neuron("c", q(0))
            .rule("b", &[("a", q(1))])
            .rule("c", &[("b", q(-1))])
            .build()
            .unwrap()
    }

    fn example(w: Rational, theta_b: Rational, permissive: bool) -> Result<Program> {
        let b = ProgramBuilder::new().fact("a").neuron("b", theta_b).rule("b", &[("a", w)]);
        if permissive { b.permit_zero_weights() } else { b }.build()
    }

    fn set(p: &Program, names: &[&str]) -> Interpretation {
        p.signature().interpretation(names.iter().copied()).unwrap()
    }

    fn show_all(p: &Program, family: &[Interpretation]) -> Vec<String> {
        family.iter().map(|i| p.signature().show(i)).collect()
    }

    #[test]
    fn satisfaction() {
        let p = example(q(1), q(1), false).unwrap();
        let r = p.rules().iter().find(|r| !r.is_fact()).unwrap().clone();
        assert!(p.satisfies_rule(&set(&p, &["a", "b"]), &r).unwrap());
        assert!(!p.satisfies_rule(&set(&p, &["a"]), &r).unwrap());
        assert!(p.satisfies_rule(&set(&p, &[]), &r).unwrap());
        assert!(!p.satisfies(&set(&p, &[])).unwrap());
        assert!(p.satisfies(&set(&p, &["a", "b"])).unwrap());
    }

    #[test]
    fn weight_zero_example() {
        assert!(matches!(example(q(0), q(1), false), Err(Error::InvalidProgram(m)) if m.contains("weight 0")));
        let p = example(q(0), q(1), true).unwrap();
        assert_eq!(p.least_model().unwrap(), set(&p, &["a"]));
        assert!(p.dependency_graph().is_err());

        let p = example(q(1), q(1), false).unwrap();
        assert_eq!(p.least_model().unwrap(), set(&p, &["a", "b"]));
        assert!(p.classify().ordinary);

        let p = example(q(2), q(1), false).unwrap();
        assert_eq!(p.t(&set(&p, &["a"])).unwrap(), set(&p, &["a", "b"]));

        let p = example(ratio(1, 2), q(1), false).unwrap();
        assert_eq!(p.least_model().unwrap(), set(&p, &["a"]));
    }

    #[test]
    fn validation() {
        let e = ProgramBuilder::new().neuron("a", q(1)).rule("a", &[]).build();
        assert!(matches!(e, Err(Error::InvalidProgram(m)) if m.contains("fact 'a'")));
        let e = ProgramBuilder::new().fact("a").rule("a", &[("a", q(1))]).build();
        assert!(matches!(e, Err(Error::InvalidProgram(m)) if m.contains("-inf")));
        let e = ProgramBuilder::new().fact("a").neuron("b", q(1)).rule("b", &[("a", q(1)), ("a", q(2))]).build();
        assert!(matches!(e, Err(Error::InvalidProgram(m)) if m.contains("repeats")));
    }

    #[test]
    fn rules_form_a_set() {
        let a = ProgramBuilder::new()
            .fact("a")
            .fact("c")
            .neuron("b", q(2))
            .rule("b", &[("a", q(1)), ("c", q(1))])
            .rule("b", &[("c", q(1)), ("a", q(1))])
            .build()
            .unwrap();
        assert_eq!(a.rules().len(), 3);
        assert!(a.classify().minimalist);
    }

    #[test]
    fn chain_example() {
        let p = p_n1();
        let cap = Cap::default();
        assert_eq!(
            p.classify(),
            ProgramClass { positive: false, ordinary: false, minimalist: true, acyclic: true }
        );
        assert_eq!(show_all(&p, &p.supported_models(cap).unwrap()), ["{a, b}"]);
        assert_eq!(show_all(&p, &p.answer_sets(cap).unwrap()), ["{a, b}"]);
        assert_eq!(show_all(&p, &p.flp_answer_sets(cap).unwrap()), ["{a, b}"]);
        assert_eq!(show_all(&p, &p.ultimate_answer_sets(cap).unwrap()), ["{a, b}"]);
        assert_eq!(p.layers().unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(p.least_model(), Err(Error::NotPositive("program")));
    }

    #[test]
    fn reducts() {
        let p = p_n1();
        assert_eq!(p.flp_reduct(&set(&p, &["a", "b"])).unwrap().rules().len(), 3);
        let r = p.flp_reduct(&set(&p, &["a"])).unwrap();
        assert_eq!(r.rules().len(), 2);
        assert!(r.rules().iter().all(|r| r.head() != 2));
        let r = p.flp_reduct(&set(&p, &[])).unwrap();
        assert!(r.rules().iter().all(NeuralRule::is_fact));
        assert_eq!(r.rules().len(), 1);
    }

    #[test]
    fn flp_small_cases() {
        let single = ProgramBuilder::new().fact("a").build().unwrap();
        assert_eq!(show_all(&single, &single.flp_answer_sets(Cap::default()).unwrap()), ["{a}"]);

        // a; b <- a; c <- b, d; d <- c (ordinary, positive): least model {a, b}.
        let p = ProgramBuilder::new()
            .fact("a")
            .neuron("b", q(1))
            .neuron("c", q(2))
            .neuron("d", q(1))
            .rule("b", &[("a", q(1))])
            .rule("c", &[("b", q(1)), ("d", q(1))])
            .rule("d", &[("c", q(1))])
            .build()
            .unwrap();
        let lm = p.least_model().unwrap();
        assert_eq!(p.signature().show(&lm), "{a, b}");
        assert_eq!(p.flp_answer_sets(Cap::default()).unwrap(), vec![lm.clone()]);
        assert_eq!(p.answer_sets(Cap::default()).unwrap(), vec![lm]);
    }

    #[test]
    fn dependency_graphs() {
        let single = ProgramBuilder::new().fact("a").build().unwrap();
        let net = single.dependency_graph().unwrap();
        assert_eq!(net.len(), 1);
        assert!(net.is_fact(0));

        let two = ProgramBuilder::new()
            .fact("a")
            .neuron("b", q(1))
            .rule("b", &[("a", q(1))])
            .rule("b", &[("a", q(2))])
            .build()
            .unwrap();
        assert_eq!(two.dependency_graph(), Err(Error::NotMinimalist { head: "b".into() }));
        assert!(!two.classify().minimalist);
        assert!(matches!(two.ultimate_answer_sets(Cap::default()), Err(Error::NotMinimalist { .. })));
    }

    #[test]
    fn exists_forall_fitting_on_multiple_rules() {
        // b <- a and b <- c with θ(b)=1. Over the interval [{x}, {x,a,c}]
        // neither rule holds on every K, so b is not in Φ, although only
        // K = {x} fails to fire b at all.
        let p = ProgramBuilder::new()
            .fact("x")
            .neuron("a", q(1))
            .neuron("c", q(1))
            .neuron("b", q(1))
            .rule("a", &[("x", q(1))])
            .rule("c", &[("x", q(1))])
            .rule("b", &[("a", q(1))])
            .rule("b", &[("c", q(1))])
            .build()
            .unwrap();
        let lo = set(&p, &["x"]);
        let hi = set(&p, &["x", "a", "c"]);
        let phi = p.fitting(&ThreeInterpretation::new(lo.clone(), hi.clone()).unwrap()).unwrap();
        assert!(!phi.contains(p.signature().require("b").unwrap()));
        let lo = set(&p, &["x", "a"]);
        let phi = p.fitting(&ThreeInterpretation::new(lo, hi).unwrap()).unwrap();
        assert!(phi.contains(p.signature().require("b").unwrap()));
    }

    #[test]
    fn cyclic_program() {
        let p = ProgramBuilder::new()
            .neuron("a", q(1))
            .neuron("b", q(1))
            .rule("a", &[("b", q(1))])
            .rule("b", &[("a", q(1))])
            .build()
            .unwrap();
        assert!(!p.classify().acyclic);
        assert_eq!(p.layers(), Err(Error::NotAcyclic("program")));
    }
}

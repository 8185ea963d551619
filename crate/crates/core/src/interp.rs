//! Neuron signatures, interpretations and 3-interpretations.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::rational::ExtendedRational;

/// Default bound on the universe size for exhaustive enumeration.
pub const DEFAULT_CAP: usize = 20;

/// Upper bound on universe size for any operation that enumerates the
/// powerset lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Default for Cap {
    fn default() -> Self {
        Cap(DEFAULT_CAP)
    }
}

impl Cap {
    pub fn check(self, size: usize) -> Result<()> {
        if size > self.0 {
            Err(Error::CapExceeded { size, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronId(String);

impl NeuronId {
    /// Names start with an ASCII letter and continue with letters, digits
    /// or underscores.
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(NeuronId(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Borrow<str> for NeuronId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NeuronId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered neuron universe together with a threshold for every neuron.
#[derive(Clone, Debug)]
pub struct Signature {
    names: Vec<NeuronId>,
    theta: Vec<ExtendedRational>,
    index: HashMap<NeuronId, usize>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.theta == other.theta
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new(entries: impl IntoIterator<Item = (NeuronId, ExtendedRational)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut theta = Vec::new();
        let mut index = HashMap::new();
        for (name, t) in entries {
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicateNeuron(name.to_string()));
            }
            names.push(name);
            theta.push(t);
        }
        Ok(Signature { names, theta, index })
    }

    /// Convenience for tests and generators: `(name, threshold)` pairs.
    pub fn from_pairs<'a>(entries: impl IntoIterator<Item = (&'a str, ExtendedRational)>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|(n, t)| Ok((NeuronId::new(n)?, t)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[NeuronId] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &NeuronId {
        &self.names[i]
    }

    pub fn theta(&self, i: usize) -> &ExtendedRational {
        &self.theta[i]
    }

    pub fn thetas(&self) -> &[ExtendedRational] {
        &self.theta
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownNeuron(name.to_string()))
    }

    /// Builds an interpretation from neuron names.
    pub fn interpretation<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Interpretation> {
        let mut i = Interpretation::empty(self.len());
        for n in names {
            i.insert(self.require(n)?);
        }
        Ok(i)
    }

    pub fn names_of(&self, interp: &Interpretation) -> Vec<String> {
        interp.iter().map(|i| self.names[i].to_string()).collect()
    }

    /// Renders an interpretation as `{a, b}` in universe order.
    pub fn show(&self, interp: &Interpretation) -> String {
        format!("{{{}}}", self.names_of(interp).join(", "))
    }

    pub fn check(&self, interp: &Interpretation) -> Result<()> {
        if interp.universe_len() == self.len() {
            Ok(())
        } else {
            Err(Error::SignatureMismatch { expected: self.len(), found: interp.universe_len() })
        }
    }
}

pub type SharedSignature = Arc<Signature>;

/// A subset of a universe of known size.
///
/// Ordered by binary value with the last neuron of the universe as the most
/// significant bit, which is the enumeration order of
/// [`all_interpretations`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interpretation {
    bits: FixedBitSet,
}

impl Interpretation {
    pub fn empty(universe: usize) -> Self {
        Interpretation { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Interpretation { bits }
    }

    pub fn from_indices(universe: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut i = Self::empty(universe);
        for m in members {
            i.insert(m);
        }
        i
    }

    /// The `rank`-th subset in binary counting order (bit `k` of `rank`
    /// selects neuron `k`).
    pub fn from_rank(universe: usize, rank: u64) -> Self {
        let mut i = Self::empty(universe);
        for k in 0..universe.min(64) {
            if rank >> k & 1 == 1 {
                i.insert(k);
            }
        }
        i
    }

    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Interpretation { bits }
    }

    pub fn intersection(&self, other: &Interpretation) -> Interpretation {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Interpretation { bits }
    }

    pub fn difference(&self, other: &Interpretation) -> Interpretation {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Interpretation { bits }
    }

    /// Members in universe order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// All subsets of `self`, in binary counting order over the members.
    pub fn subsets(&self) -> impl Iterator<Item = Interpretation> + '_ {
        let members: Vec<usize> = self.iter().collect();
        let n = self.universe_len();
        (0..1u64 << members.len()).map(move |mask| {
            Interpretation::from_indices(
                n,
                members.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &m)| m),
            )
        })
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.universe_len().max(other.universe_len());
        for i in (0..n).rev() {
            match (self.contains(i), other.contains(i)) {
                (true, false) => return Ordering::Greater,
                (false, true) => return Ordering::Less,
                _ => {}
            }
        }
        self.universe_len().cmp(&other.universe_len())
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A pair `(lower, upper)` with `lower ⊆ upper`: members of `lower` are
/// true, members of `upper − lower` undefined, everything else false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreeInterpretation {
    lower: Interpretation,
    upper: Interpretation,
}

impl ThreeInterpretation {
    pub fn new(lower: Interpretation, upper: Interpretation) -> Result<Self> {
        if lower.universe_len() != upper.universe_len() {
            return Err(Error::SignatureMismatch {
                expected: lower.universe_len(),
                found: upper.universe_len(),
            });
        }
        if !lower.is_subset(&upper) {
            return Err(Error::Inconsistent);
        }
        Ok(ThreeInterpretation { lower, upper })
    }

    /// The exact (two-valued) pair `(I, I)`.
    pub fn exact(i: Interpretation) -> Self {
        ThreeInterpretation { lower: i.clone(), upper: i }
    }

    pub fn lower(&self) -> &Interpretation {
        &self.lower
    }

    pub fn upper(&self) -> &Interpretation {
        &self.upper
    }

    pub fn universe_len(&self) -> usize {
        self.lower.universe_len()
    }

    /// Every `K` with `lower ⊆ K ⊆ upper`.
    pub fn completions(&self) -> impl Iterator<Item = Interpretation> + '_ {
        self.upper
            .difference(&self.lower)
            .subsets()
            .map(move |gap| gap.union(&self.lower))
            .collect::<Vec<_>>()
            .into_iter()
    }
}

/// Precision order: `p ≤_p q` iff `p.lower ⊆ q.lower ⊆ q.upper ⊆ p.upper`.
pub fn precision_leq(p: &ThreeInterpretation, q: &ThreeInterpretation) -> Result<bool> {
    if p.universe_len() != q.universe_len() {
        return Err(Error::SignatureMismatch { expected: p.universe_len(), found: q.universe_len() });
    }
    Ok(p.lower.is_subset(&q.lower) && q.upper.is_subset(&p.upper))
}

/// All `2^n` subsets of a universe of size `n`, in binary counting order.
pub fn all_interpretations(universe: usize, cap: Cap) -> Result<impl Iterator<Item = Interpretation>> {
    cap.check(universe)?;
    Ok((0..1u64 << universe).map(move |rank| Interpretation::from_rank(universe, rank)))
}

/// All `3^n` consistent pairs, grouped by upper bound in counting order.
pub fn all_three_interpretations(
    universe: usize,
    cap: Cap,
) -> Result<impl Iterator<Item = ThreeInterpretation>> {
    Ok(all_interpretations(universe, cap)?.flat_map(|upper| {
        upper
            .subsets()
            .map(|lower| ThreeInterpretation { lower, upper: upper.clone() })
            .collect::<Vec<_>>()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(names: &[&str]) -> Signature {
        Signature::from_pairs(names.iter().map(|n| (*n, ExtendedRational::zero()))).unwrap()
    }

    fn three(s: &Signature, lo: &[&str], hi: &[&str]) -> ThreeInterpretation {
        ThreeInterpretation::new(
            s.interpretation(lo.iter().copied()).unwrap(),
            s.interpretation(hi.iter().copied()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn names_are_validated() {
        assert!(NeuronId::new("a_1").is_ok());
        assert!(NeuronId::new("X9").is_ok());
        for bad in ["", "1a", "_a", "a-b", "a b"] {
            assert_eq!(NeuronId::new(bad), Err(Error::InvalidName(bad.into())));
        }
        assert_eq!(NeuronId::new("a").unwrap(), NeuronId::new("a").unwrap());
    }

    #[test]
    fn duplicate_neurons_rejected() {
        let e = Signature::from_pairs([("a", ExtendedRational::zero()), ("a", ExtendedRational::zero())]);
        assert_eq!(e.unwrap_err(), Error::DuplicateNeuron("a".into()));
    }

    #[test]
    fn precision_examples() {
        let s = sig(&["a", "b"]);
        assert!(precision_leq(&three(&s, &[], &["a", "b"]), &three(&s, &["a"], &["a", "b"])).unwrap());
        assert!(precision_leq(&three(&s, &["a"], &["a"]), &three(&s, &["a"], &["a"])).unwrap());
        assert!(!precision_leq(&three(&s, &["a"], &["a", "b"]), &three(&s, &[], &["a", "b"])).unwrap());
    }

    #[test]
    fn inconsistent_pair_rejected() {
        let s = sig(&["a", "b"]);
        let e = ThreeInterpretation::new(
            s.interpretation(["a"]).unwrap(),
            s.interpretation(["b"]).unwrap(),
        );
        assert_eq!(e.unwrap_err(), Error::Inconsistent);
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<_> = all_interpretations(0, Cap::default()).unwrap().collect();
        assert_eq!(all, vec![Interpretation::empty(0)]);

        let s = sig(&["a"]);
        let all: Vec<_> = all_interpretations(1, Cap::default()).unwrap().map(|i| s.show(&i)).collect();
        assert_eq!(all, ["{}", "{a}"]);

        let s = sig(&["a", "b"]);
        let all: Vec<_> = all_interpretations(2, Cap::default()).unwrap().map(|i| s.show(&i)).collect();
        assert_eq!(all, ["{}", "{a}", "{b}", "{a, b}"]);

        let mut sorted = all_interpretations(4, Cap::default()).unwrap().collect::<Vec<_>>();
        let orig = sorted.clone();
        sorted.sort();
        assert_eq!(sorted, orig);
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(matches!(
            all_interpretations(5, Cap(4)).map(|_| ()),
            Err(Error::CapExceeded { size: 5, cap: 4 })
        ));
        assert_eq!(all_interpretations(10, Cap::default()).unwrap().count(), 1024);
        let distinct: std::collections::HashSet<_> = all_interpretations(6, Cap::default()).unwrap().collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn three_interpretation_count() {
        assert_eq!(all_three_interpretations(4, Cap::default()).unwrap().count(), 81);
        let p = ThreeInterpretation::new(
            Interpretation::from_indices(4, [0]),
            Interpretation::from_indices(4, [0, 2, 3]),
        )
        .unwrap();
        let ks: Vec<_> = p.completions().collect();
        assert_eq!(ks.len(), 4);
        assert!(ks.iter().all(|k| p.lower().is_subset(k) && k.is_subset(p.upper())));
    }

    #[test]
    fn precision_is_a_partial_order() {
        for n in 0..=3 {
            let all: Vec<_> = all_three_interpretations(n, Cap::default()).unwrap().collect();
            for p in &all {
                assert!(precision_leq(p, p).unwrap());
                for q in &all {
                    let pq = precision_leq(p, q).unwrap();
                    let qp = precision_leq(q, p).unwrap();
                    if pq && qp {
                        assert_eq!(p, q);
                    }
                    if pq {
                        for r in &all {
                            if precision_leq(q, r).unwrap() {
                                assert!(precision_leq(p, r).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
}

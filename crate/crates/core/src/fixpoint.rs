//! Fixed points on the powerset lattice of a finite universe.
//!
//! Least fixed points are computed by Kleene iteration from `∅`. Everything
//! that needs *all* fixed points (supported models, answer sets) goes
//! through [`enumerate`], which walks the `2^n` interpretations in binary
//! counting order and fans out across threads for larger universes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interp::{Cap, Interpretation};

/// Universes at least this large are enumerated in parallel.
const PARALLEL_THRESHOLD: usize = 10;

/// Random `I ⊆ J` pairs probed when a caller asks for a monotonicity check.
const MONOTONE_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    pub steps: Vec<Interpretation>,
    pub converged: bool,
}

impl IterationTrace {
    pub fn last(&self) -> &Interpretation {
        self.steps.last().expect("a trace always holds its start value")
    }

    /// Number of operator applications performed.
    pub fn applications(&self) -> usize {
        self.steps.len() - 1
    }
}

/// Applies `op` to `start` up to `max_steps` times, stopping early once an
/// application returns its own argument.
pub fn iterate<F>(op: F, start: Interpretation, max_steps: usize) -> IterationTrace
where
    F: Fn(&Interpretation) -> Interpretation,
{
    let mut steps = vec![start];
    let mut converged = false;
    for _ in 0..max_steps {
        let prev = steps.last().unwrap();
        let next = op(prev);
        let done = &next == prev;
        steps.push(next);
        if done {
            converged = true;
            break;
        }
    }
    IterationTrace { steps, converged }
}

/// The Kleene chain `∅, op(∅), op(op(∅)), …` up to its first repeat.
///
/// Fails with `NonMonotoneDetected` as soon as a step is not a superset of
/// its predecessor. Because every accepted step strictly grows, the chain
/// has at most `universe + 1` applications.
pub fn kleene<F>(op: F, universe: usize, require_monotone_hint: bool) -> Result<IterationTrace>
where
    F: Fn(&Interpretation) -> Interpretation,
{
    if require_monotone_hint {
        sample_monotonicity(&op, universe)?;
    }
    let mut steps = vec![Interpretation::empty(universe)];
    loop {
        let prev = steps.last().unwrap();
        let next = op(prev);
        if &next == prev {
            steps.push(next);
            return Ok(IterationTrace { steps, converged: true });
        }
        if !prev.is_subset(&next) {
            return Err(Error::NonMonotoneDetected(format!(
                "iteration shrank at step {}",
                steps.len()
            )));
        }
        steps.push(next);
    }
}

/// Least fixed point of a monotone operator.
pub fn lfp<F>(op: F, universe: usize, require_monotone_hint: bool) -> Result<Interpretation>
where
    F: Fn(&Interpretation) -> Interpretation,
{
    Ok(kleene(op, universe, require_monotone_hint)?.steps.pop().unwrap())
}

fn sample_monotonicity<F>(op: &F, universe: usize) -> Result<()>
where
    F: Fn(&Interpretation) -> Interpretation,
{
    let mut rng = ChaCha8Rng::seed_from_u64(universe as u64);
    for _ in 0..MONOTONE_SAMPLES {
        let mut small = Interpretation::empty(universe);
        let mut big = Interpretation::empty(universe);
        for k in 0..universe {
            match rng.gen_range(0..3) {
                0 => {}
                1 => big.insert(k),
                _ => {
                    small.insert(k);
                    big.insert(k);
                }
            }
        }
        if !op(&small).is_subset(&op(&big)) {
            return Err(Error::NonMonotoneDetected(format!(
                "found I ⊆ J with op(I) ⊄ op(J) ({} ⊆ {} members)",
                small.count(),
                big.count()
            )));
        }
    }
    Ok(())
}

/// Every interpretation satisfying `keep`, in binary counting order.
pub fn enumerate<F>(universe: usize, cap: Cap, keep: F) -> Result<Vec<Interpretation>>
where
    F: Fn(&Interpretation) -> bool + Sync,
{
    cap.check(universe)?;
    let ranks = 0..1u64 << universe;
    let hit = |rank: u64| {
        let i = Interpretation::from_rank(universe, rank);
        keep(&i).then_some(i)
    };
    Ok(if universe >= PARALLEL_THRESHOLD {
        ranks.into_par_iter().filter_map(hit).collect()
    } else {
        ranks.filter_map(hit).collect()
    })
}

/// The enumeration-least interpretation satisfying `pred`, if any.
pub fn find_first<F>(universe: usize, cap: Cap, pred: F) -> Result<Option<Interpretation>>
where
    F: Fn(&Interpretation) -> bool + Sync,
{
    cap.check(universe)?;
    let ranks = 0..1u64 << universe;
    let rank = if universe >= PARALLEL_THRESHOLD {
        ranks.into_par_iter().find_first(|&r| pred(&Interpretation::from_rank(universe, r)))
    } else {
        ranks.into_iter().find(|&r| pred(&Interpretation::from_rank(universe, r)))
    };
    Ok(rank.map(|r| Interpretation::from_rank(universe, r)))
}

pub fn all_fixed_points<F>(op: F, universe: usize, cap: Cap) -> Result<Vec<Interpretation>>
where
    F: Fn(&Interpretation) -> Interpretation + Sync,
{
    enumerate(universe, cap, |i| &op(i) == i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, members: &[usize]) -> Interpretation {
        Interpretation::from_indices(n, members.iter().copied())
    }

    #[test]
    fn lfp_of_identity_and_constant() {
        assert_eq!(lfp(|i: &Interpretation| i.clone(), 3, true).unwrap(), set(3, &[]));
        assert_eq!(lfp(|_: &Interpretation| set(1, &[0]), 1, true).unwrap(), set(1, &[0]));
    }

    #[test]
    fn lfp_of_chain_operator() {
        // a; b <- a; the operator adds a and then anything whose predecessor is in.
        let op = |i: &Interpretation| {
            let mut out = set(3, &[0]);
            for k in 1..3 {
                if i.contains(k - 1) {
                    out.insert(k);
                }
            }
            out
        };
        let trace = kleene(op, 3, true).unwrap();
        assert_eq!(trace.steps.len(), 5);
        assert!(trace.applications() <= 3 + 1);
        assert_eq!(trace.last(), &set(3, &[0, 1, 2]));
    }

    #[test]
    fn shrinking_chain_is_reported() {
        // ∅ ↦ {a}, {a} ↦ ∅.
        let op = |i: &Interpretation| if i.is_empty() { set(1, &[0]) } else { set(1, &[]) };
        assert!(matches!(lfp(op, 1, false), Err(Error::NonMonotoneDetected(_))));
    }

    #[test]
    fn monotonicity_sampling_catches_antitone_ops() {
        // complement is antitone; its chain from ∅ shrinks on the second step anyway,
        // but the sampled probe fires first.
        let op = |i: &Interpretation| Interpretation::full(4).difference(i);
        assert!(matches!(lfp(op, 4, true), Err(Error::NonMonotoneDetected(m)) if m.contains("op(I)")));
    }

    #[test]
    fn iterate_examples() {
        let t = iterate(|i: &Interpretation| i.clone(), set(1, &[0]), 5);
        assert_eq!(t.steps, vec![set(1, &[0]), set(1, &[0])]);
        assert!(t.converged);

        let t = iterate(|_: &Interpretation| set(2, &[1]), set(2, &[0]), 0);
        assert_eq!(t.steps, vec![set(2, &[0])]);
        assert!(!t.converged);

        // Alternates forever; the budget cuts it off.
        let flip = |i: &Interpretation| Interpretation::full(1).difference(i);
        let t = iterate(flip, set(1, &[]), 4);
        assert_eq!(t.steps.len(), 5);
        assert!(!t.converged);
    }

    #[test]
    fn fixed_point_examples() {
        let cap = Cap::default();
        assert_eq!(
            all_fixed_points(|i: &Interpretation| i.clone(), 1, cap).unwrap(),
            vec![set(1, &[]), set(1, &[0])]
        );
        assert_eq!(all_fixed_points(|_: &Interpretation| set(1, &[0]), 1, cap).unwrap(), vec![set(1, &[0])]);
        assert!(matches!(
            all_fixed_points(|i: &Interpretation| i.clone(), 30, cap),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn parallel_enumeration_keeps_order() {
        let evens = enumerate(12, Cap::default(), |i| i.count() % 2 == 0).unwrap();
        assert_eq!(evens.len(), 1 << 11);
        assert!(evens.windows(2).all(|w| w[0] < w[1]));
        let first = find_first(12, Cap::default(), |i| i.count() == 3).unwrap();
        assert_eq!(first, Some(set(12, &[0, 1, 2])));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        // Monotone operators of the form I ↦ {k | some clause of k is ⊆ I},
        // i.e. positive Horn programs over a small universe.
        fn horn(n: usize) -> impl Strategy<Value = Vec<(usize, Vec<usize>)>> {
            prop::collection::vec((0..n, prop::collection::vec(0..n, 0..3)), 0..8)
        }

        fn apply(clauses: &[(usize, Vec<usize>)], n: usize, i: &Interpretation) -> Interpretation {
            let mut out = Interpretation::empty(n);
            for (h, body) in clauses {
                if body.iter().all(|b| i.contains(*b)) {
                    out.insert(*h);
                }
            }
            out
        }

        proptest! {
            #[test]
            fn lfp_is_least_fixed_point(clauses in horn(6)) {
                let n = 6;
                let op = |i: &Interpretation| apply(&clauses, n, i);
                let trace = kleene(op, n, true).unwrap();
                prop_assert!(trace.converged);
                prop_assert!(trace.applications() <= n + 1);
                prop_assert!(trace.steps.windows(2).all(|w| w[0].is_subset(&w[1])));
                let least = trace.last().clone();
                prop_assert_eq!(&op(&least), &least);
                for fp in all_fixed_points(op, n, Cap::default()).unwrap() {
                    prop_assert!(least.is_subset(&fp));
                }
                let it = iterate(op, Interpretation::empty(n), n + 1);
                prop_assert!(it.converged);
                prop_assert_eq!(it.last(), &least);
            }
        }
    }
}

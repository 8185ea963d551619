//! Deciding equivalence between nets and programs by exhaustive enumeration.
//!
//! Operands over different universes are compared over the union universe;
//! a neuron missing from one side never fires on that side. Every negative
//! verdict carries the enumeration-least witness.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fixpoint;
use crate::interp::{all_three_interpretations, Cap, Interpretation, ThreeInterpretation};
use crate::net::Net;
use crate::program::Program;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Net(Net),
    Program(Program),
}

impl Operand {
    pub fn label(&self) -> &'static str {
        match self {
            Operand::Net(_) => "net",
            Operand::Program(_) => "program",
        }
    }

    pub fn names(&self) -> Vec<String> {
        let sig = match self {
            Operand::Net(n) => n.signature(),
            Operand::Program(p) => p.signature(),
        };
        sig.names().iter().map(ToString::to_string).collect()
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Operand::Net(n) => n.classify().positive,
            Operand::Program(p) => p.classify().positive,
        }
    }

    fn t(&self, i: &Interpretation) -> Interpretation {
        match self {
            Operand::Net(n) => n.t_unchecked(i),
            Operand::Program(p) => p.t_unchecked(i),
        }
    }

    fn fitting(&self, lower: &Interpretation, upper: &Interpretation) -> Interpretation {
        match self {
            Operand::Net(n) => n.fitting_bounds(lower, upper),
            Operand::Program(p) => p.fitting_bounds(lower, upper),
        }
    }

    fn ultimate(&self, lower: &Interpretation, upper: &Interpretation) -> Result<(Interpretation, Interpretation)> {
        match self {
            Operand::Net(n) => Ok(n.ultimate_bounds(lower, upper)),
            Operand::Program(p) => p.ultimate_bounds(lower, upper),
        }
    }

    fn least_model(&self) -> Result<Interpretation> {
        match self {
            Operand::Net(n) => n.least_model(),
            Operand::Program(p) => p.least_model(),
        }
    }

    /// Whether the ultimate operator is available (nets, minimalist programs).
    pub fn has_ultimate(&self) -> bool {
        match self {
            Operand::Net(_) => true,
            Operand::Program(p) => p.classify().minimalist,
        }
    }
}

impl From<Net> for Operand {
    fn from(n: Net) -> Self {
        Operand::Net(n)
    }
}

impl From<Program> for Operand {
    fn from(p: Program) -> Self {
        Operand::Program(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Subsumption,
    Supported,
    Least,
    AnswerSet,
    Ultimate,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Subsumption, Kind::Supported, Kind::Least, Kind::AnswerSet, Kind::Ultimate];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Subsumption => "subsumption",
            Kind::Supported => "supported",
            Kind::Least => "least",
            Kind::AnswerSet => "answerset",
            Kind::Ultimate => "ultimate",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown equivalence kind '{s}'"))
    }
}

/// Evidence that two operands differ. Interpretations range over the
/// verdict's (union) universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    /// Operators differ on this input.
    Operator { input: Interpretation, left: Interpretation, right: Interpretation },
    /// Three-valued operators differ on this pair.
    ThreeValued { input: ThreeInterpretation, left: ThreeInterpretation, right: ThreeInterpretation },
    /// The witness belongs to exactly one side's model family.
    Membership { witness: Interpretation, in_left: bool },
    LeastModels { left: Interpretation, right: Interpretation },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: Kind,
    pub universe: Vec<String>,
    pub equivalent: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn holds(kind: Kind, universe: &Embedding) -> Self {
        Verdict { kind, universe: universe.names.clone(), equivalent: true, counterexample: None }
    }

    fn fails(kind: Kind, universe: &Embedding, cx: Counterexample) -> Self {
        Verdict { kind, universe: universe.names.clone(), equivalent: false, counterexample: Some(cx) }
    }

    pub fn show(&self, i: &Interpretation) -> String {
        let names: Vec<&str> = i.iter().map(|k| self.universe[k].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub cap: Cap,
    /// Reject operands over different neuron sets instead of comparing over
    /// the union universe.
    pub strict: bool,
}

/// Maps the union universe onto each operand's own universe.
struct Embedding {
    names: Vec<String>,
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
    left_len: usize,
    right_len: usize,
}

impl Embedding {
    fn new(x: &Operand, y: &Operand, strict: bool) -> Result<Self> {
        let xs = x.names();
        let ys = y.names();
        if strict {
            let mut a = xs.clone();
            let mut b = ys.clone();
            a.sort();
            b.sort();
            if a != b {
                return Err(Error::UniverseMismatch);
            }
        }
        let mut names = xs.clone();
        names.extend(ys.iter().filter(|n| !xs.contains(n)).cloned());
        let position = |side: &[String]| names.iter().map(|n| side.iter().position(|m| m == n)).collect();
        Ok(Embedding { left: position(&xs), right: position(&ys), left_len: xs.len(), right_len: ys.len(), names })
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn restrict(&self, side: &[Option<usize>], local_len: usize, i: &Interpretation) -> Interpretation {
        Interpretation::from_indices(local_len, i.iter().filter_map(|k| side[k]))
    }

    fn embed(&self, side: &[Option<usize>], local: &Interpretation) -> Interpretation {
        Interpretation::from_indices(
            self.len(),
            (0..self.len()).filter(|&k| side[k].is_some_and(|l| local.contains(l))),
        )
    }

    fn sides(&self) -> [(&[Option<usize>], usize); 2] {
        [(&self.left, self.left_len), (&self.right, self.right_len)]
    }
}

/// An operand seen through the union universe.
struct View<'a> {
    op: &'a Operand,
    map: &'a [Option<usize>],
    local_len: usize,
    emb: &'a Embedding,
}

impl View<'_> {
    fn restrict(&self, i: &Interpretation) -> Interpretation {
        self.emb.restrict(self.map, self.local_len, i)
    }

    fn embed(&self, i: &Interpretation) -> Interpretation {
        self.emb.embed(self.map, i)
    }

    fn t(&self, i: &Interpretation) -> Interpretation {
        self.embed(&self.op.t(&self.restrict(i)))
    }

    fn fitting(&self, lower: &Interpretation, upper: &Interpretation) -> Interpretation {
        self.embed(&self.op.fitting(&self.restrict(lower), &self.restrict(upper)))
    }

    fn ultimate(&self, p: &ThreeInterpretation) -> Result<ThreeInterpretation> {
        let (lo, hi) = self.op.ultimate(&self.restrict(p.lower()), &self.restrict(p.upper()))?;
        ThreeInterpretation::new(self.embed(&lo), self.embed(&hi))
    }

    fn is_answer_set(&self, i: &Interpretation) -> bool {
        fixpoint::lfp(|j| self.fitting(j, i), self.emb.len(), false).as_ref() == Ok(i)
    }
}

pub fn check(kind: Kind, x: &Operand, y: &Operand, opts: CheckOptions) -> Result<Verdict> {
    let emb = Embedding::new(x, y, opts.strict)?;
    opts.cap.check(emb.len())?;
    let [(lm, ll), (rm, rl)] = emb.sides();
    let left = View { op: x, map: lm, local_len: ll, emb: &emb };
    let right = View { op: y, map: rm, local_len: rl, emb: &emb };
    let n = emb.len();

    match kind {
        Kind::Subsumption => {
            let witness = fixpoint::find_first(n, opts.cap, |i| left.t(i) != right.t(i))?;
            Ok(match witness {
                None => Verdict::holds(kind, &emb),
                Some(input) => {
                    let cx = Counterexample::Operator { left: left.t(&input), right: right.t(&input), input };
                    Verdict::fails(kind, &emb, cx)
                }
            })
        }
        Kind::Supported => membership(kind, &emb, opts.cap, |i| &left.t(i) == i, |i| &right.t(i) == i),
        Kind::AnswerSet => membership(kind, &emb, opts.cap, |i| left.is_answer_set(i), |i| right.is_answer_set(i)),
        Kind::Least => {
            for op in [x, y] {
                if !op.is_positive() {
                    return Err(Error::NotPositive(op.label()));
                }
            }
            let l = left.embed(&x.least_model()?);
            let r = right.embed(&y.least_model()?);
            Ok(if l == r {
                Verdict::holds(kind, &emb)
            } else {
                Verdict::fails(kind, &emb, Counterexample::LeastModels { left: l, right: r })
            })
        }
        Kind::Ultimate => {
            for p in all_three_interpretations(n, opts.cap)? {
                let l = left.ultimate(&p)?;
                let r = right.ultimate(&p)?;
                if l != r {
                    return Ok(Verdict::fails(kind, &emb, Counterexample::ThreeValued { input: p, left: l, right: r }));
                }
            }
            Ok(Verdict::holds(kind, &emb))
        }
    }
}

fn membership(
    kind: Kind,
    emb: &Embedding,
    cap: Cap,
    in_left: impl Fn(&Interpretation) -> bool + Sync,
    in_right: impl Fn(&Interpretation) -> bool + Sync,
) -> Result<Verdict> {
    let witness = fixpoint::find_first(emb.len(), cap, |i| in_left(i) != in_right(i))?;
    Ok(match witness {
        None => Verdict::holds(kind, emb),
        Some(w) => {
            let cx = Counterexample::Membership { in_left: in_left(&w), witness: w };
            Verdict::fails(kind, emb, cx)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LadderEntry {
    Checked(Verdict),
    Skipped(String),
}

/// All five verdicts for one pair of operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub entries: Vec<(Kind, LadderEntry)>,
}

impl Ladder {
    pub fn verdict(&self, kind: Kind) -> Option<&Verdict> {
        self.entries.iter().find_map(|(k, e)| match e {
            LadderEntry::Checked(v) if *k == kind => Some(v),
            _ => None,
        })
    }

    /// True when every checked kind came out equivalent.
    pub fn all_equivalent(&self) -> bool {
        self.entries.iter().all(|(_, e)| match e {
            LadderEntry::Checked(v) => v.equivalent,
            LadderEntry::Skipped(_) => true,
        })
    }
}

pub fn implication_ladder(x: &Operand, y: &Operand, opts: CheckOptions) -> Result<Ladder> {
    let mut entries = Vec::new();
    for kind in Kind::ALL {
        let skip = match kind {
            Kind::Least => [x, y]
                .iter()
                .find(|op| !op.is_positive())
                .map(|op| format!("least-model equivalence needs positive operands; the {} is not positive", op.label())),
            Kind::Ultimate => [x, y]
                .iter()
                .find(|op| !op.has_ultimate())
                .map(|_| "the ultimate operator is only defined here for nets and minimalist programs".to_string()),
            _ => None,
        };
        let entry = match skip {
            Some(reason) => LadderEntry::Skipped(reason),
            None => LadderEntry::Checked(check(kind, x, y, opts)?),
        };
        entries.push((kind, entry));
    }
    Ok(Ladder { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::tests::n1;
    use crate::net::NetBuilder;
    use crate::program::ProgramBuilder;
    use crate::rational::ratio;
    use crate::translate::net_to_program;

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    #[test]
    fn chain_example_is_equivalent_to_its_program() {
        let net: Operand = n1().into();
        let prog: Operand = net_to_program(&n1()).into();
        assert!(check(Kind::Subsumption, &net, &prog, opts()).unwrap().equivalent);
        assert!(check(Kind::AnswerSet, &net, &prog, opts()).unwrap().equivalent);
        let ladder = implication_ladder(&net, &prog, opts()).unwrap();
        assert!(ladder.all_equivalent());
        assert!(matches!(ladder.entries[2], (Kind::Least, LadderEntry::Skipped(_))));
        assert_eq!(ladder.entries.iter().filter(|(_, e)| matches!(e, LadderEntry::Checked(_))).count(), 4);
    }

    #[test]
    fn positive_pair_includes_least() {
        let net = NetBuilder::new().fact("a").neuron("b", ratio(1, 1)).edge("a", "b", ratio(1, 1)).build().unwrap();
        let prog = net_to_program(&net);
        let ladder = implication_ladder(&net.into(), &prog.into(), opts()).unwrap();
        assert!(ladder.verdict(Kind::Least).unwrap().equivalent);
        assert!(ladder.all_equivalent());
    }

    fn weighted(w: i64, theta: i64) -> Operand {
        ProgramBuilder::new()
            .fact("a")
            .neuron("b", ratio(theta, 1))
            .rule("b", &[("a", ratio(w, 1))])
            .build()
            .unwrap()
            .into()
    }

    #[test]
    fn weights_that_clear_the_same_threshold_are_subsumption_equivalent() {
        assert!(check(Kind::Subsumption, &weighted(1, 1), &weighted(2, 1), opts()).unwrap().equivalent);
    }

    #[test]
    fn threshold_two_separates_weights() {
        let v = check(Kind::Subsumption, &weighted(1, 2), &weighted(2, 2), opts()).unwrap();
        assert!(!v.equivalent);
        match v.counterexample.unwrap() {
            Counterexample::Operator { input, left, right } => {
                assert_eq!(v.universe, ["a", "b"]);
                assert_eq!(input, Interpretation::from_indices(2, [0]));
                assert_eq!(left, Interpretation::from_indices(2, [0]));
                assert_eq!(right, Interpretation::from_indices(2, [0, 1]));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn disjoint_universes() {
        let a: Operand = NetBuilder::new().fact("a").build().unwrap().into();
        let b: Operand = NetBuilder::new().fact("b").build().unwrap().into();
        let ladder = implication_ladder(&a, &b, opts()).unwrap();
        let v = ladder.verdict(Kind::Subsumption).unwrap();
        assert!(!v.equivalent);
        assert_eq!(v.universe, ["a", "b"]);
        match v.counterexample.as_ref().unwrap() {
            Counterexample::Operator { input, .. } => assert!(input.is_empty()),
            other => panic!("unexpected witness {other:?}"),
        }
        assert_eq!(
            check(Kind::Subsumption, &a, &b, CheckOptions { strict: true, ..opts() }),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn least_kind_requires_positive() {
        let net: Operand = n1().into();
        assert_eq!(check(Kind::Least, &net, &net, opts()), Err(Error::NotPositive("net")));
    }

    #[test]
    fn ultimate_on_non_minimalist_program_is_skipped() {
        let p: Operand = ProgramBuilder::new()
            .fact("a")
            .neuron("b", ratio(1, 1))
            .rule("b", &[("a", ratio(1, 1))])
            .rule("b", &[("a", ratio(2, 1))])
            .build()
            .unwrap()
            .into();
        let ladder = implication_ladder(&p, &p, opts()).unwrap();
        assert!(matches!(ladder.entries[4], (Kind::Ultimate, LadderEntry::Skipped(_))));
        assert!(matches!(check(Kind::Ultimate, &p, &p, opts()), Err(Error::NotMinimalist { .. })));
    }

    #[test]
    fn supported_models_can_differ_without_subsumption_failing_elsewhere() {
        // a <- a (θ=1) has supported models ∅ and {a}; b <- b likewise over b.
        let loop_a: Operand = NetBuilder::new().neuron("a", ratio(1, 1)).edge("a", "a", ratio(1, 1)).build().unwrap().into();
        let empty: Operand = NetBuilder::new().neuron("a", ratio(2, 1)).edge("a", "a", ratio(1, 1)).build().unwrap().into();
        let v = check(Kind::Supported, &loop_a, &empty, opts()).unwrap();
        assert!(!v.equivalent);
        assert_eq!(
            v.counterexample,
            Some(Counterexample::Membership { witness: Interpretation::from_indices(1, [0]), in_left: true })
        );
        // Neither has an answer set besides ∅.
        assert!(check(Kind::AnswerSet, &loop_a, &empty, opts()).unwrap().equivalent);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.as_str().parse::<Kind>().unwrap(), k);
        }
        assert!("bogus".parse::<Kind>().is_err());
    }
}

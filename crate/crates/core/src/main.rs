use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use neurosem::equivalence::{self, CheckOptions, Kind, LadderEntry, Operand, Verdict};
use neurosem::fixpoint::iterate;
use neurosem::interp::{Interpretation, Signature, ThreeInterpretation};
use neurosem::oracle::{flp_vs_aft_experiment, GenParams};
use neurosem::textio::{self, ParseOptions};
use neurosem::translate::{net_to_program, program_to_net};
use neurosem::{Cap, Error, Net, Program};

#[derive(Parser)]
#[command(name = "neurosem", version, about = "Exact semantics for boolean neural nets and neural logic programs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest universe to enumerate exhaustively.
    #[arg(long, global = true, env = "NEUROSEM_CAP", default_value_t = 20)]
    cap: usize,
    /// Accept rule weights of 0.
    #[arg(long, global = true)]
    permit_zero_weights: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the file kind inferred from the extension (.nnet / .nlp).
    #[arg(long = "as", global = true, value_enum)]
    file_kind: Option<FileKind>,
    /// Report every parse error instead of only the first.
    #[arg(long, global = true)]
    all_errors: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileKind {
    Net,
    Program,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Aft,
    Flp,
    Ultimate,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a file and print its canonical form.
    Parse { file: String },
    /// Apply the immediate consequence operator, or trace repeated applications.
    Tp {
        file: String,
        /// Comma-separated active neurons.
        #[arg(short = 'I', long = "interp", default_value = "")]
        interp: String,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Least model of a positive net or program.
    Lfp { file: String },
    /// All models, or all supported models.
    Models {
        file: String,
        #[arg(long)]
        supported: bool,
    },
    /// Answer sets under the chosen semantics.
    Answersets {
        file: String,
        #[arg(long, value_enum, default_value = "aft")]
        semantics: Semantics,
    },
    /// Feed an input through a layered acyclic net.
    Eval {
        file: String,
        /// Comma-separated active input neurons.
        #[arg(long, default_value = "")]
        input: String,
    },
    /// Longest-path layering of an acyclic net.
    Layers { file: String },
    /// Convert between nets and programs.
    Translate {
        file: String,
        #[arg(long, value_enum)]
        to: FileKind,
    },
    /// Compare two nets or programs.
    Equiv {
        left: String,
        right: String,
        #[arg(long, conflicts_with = "all")]
        kind: Option<Kind>,
        /// Check every kind.
        #[arg(long)]
        all: bool,
        /// Refuse operands over different neuron sets.
        #[arg(long)]
        strict: bool,
    },
    /// Compare AFT and FLP answer sets on random programs.
    ExploreFlp {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_neurons: usize,
        /// Write the report and one replayable program per counterexample here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Semantic negative such as "not equivalent"; the answer is already printed.
    Negative,
    Usage(String),
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

enum Doc {
    Net(Net),
    Program(Program),
}

impl Doc {
    fn signature(&self) -> &Signature {
        match self {
            Doc::Net(n) => n.signature(),
            Doc::Program(p) => p.signature(),
        }
    }

    fn t(&self, i: &Interpretation) -> Interpretation {
        match self {
            Doc::Net(n) => n.t(i),
            Doc::Program(p) => p.t(i),
        }
        .expect("interpretation built over the same signature")
    }

    fn into_operand(self) -> Operand {
        match self {
            Doc::Net(n) => n.into(),
            Doc::Program(p) => p.into(),
        }
    }
}

struct Ctx {
    g: Global,
    out: String,
}

impl Ctx {
    fn cap(&self) -> Cap {
        Cap(self.g.cap)
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn json(&mut self, v: Value) {
        let text = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
        self.line(text);
    }

    fn load(&self, path: &str) -> CliResult<Doc> {
        let kind = match self.g.file_kind {
            Some(k) => k,
            None => match Path::new(path).extension().and_then(|e| e.to_str()) {
                Some("nnet") => FileKind::Net,
                Some("nlp") => FileKind::Program,
                _ => return Err(Failure::Usage(format!("cannot tell whether '{path}' is a net or a program; pass --as net|program"))),
            },
        };
        let text = if path == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
        };
        let opts = ParseOptions {
            file: if path == "-" { "<stdin>".into() } else { path.to_string() },
            permit_zero_weights: self.g.permit_zero_weights,
            all_errors: self.g.all_errors,
        };
        let joined = |errs: Vec<textio::ParseError>| Failure::Input(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"));
        Ok(match kind {
            FileKind::Net => Doc::Net(textio::parse_net_with(&text, &opts).map_err(joined)?),
            FileKind::Program => Doc::Program(textio::parse_program_with(&text, &opts).map_err(joined)?),
        })
    }

    fn load_net(&self, path: &str) -> CliResult<Net> {
        match self.load(path)? {
            Doc::Net(n) => Ok(n),
            Doc::Program(_) => Err(Failure::Usage(format!("'{path}' is a program; this command needs a net"))),
        }
    }

    /// Prints a family of interpretations, one per line, or as JSON under `key`.
    fn family(&mut self, kind: &str, key: &str, sig: &Signature, sets: &[Interpretation]) {
        if self.g.json {
            let mut m = Map::new();
            m.insert(key.into(), textio::interpretations_json(sig, sets));
            self.json(textio::envelope(kind, sig, m));
        } else {
            for s in sets {
                self.line(sig.show(s));
            }
        }
    }
}

fn parse_set(sig: &Signature, list: &str) -> CliResult<Interpretation> {
    let names = list.split(',').map(str::trim).filter(|s| !s.is_empty());
    Ok(sig.interpretation(names)?)
}

fn run(cmd: Command, ctx: &mut Ctx) -> CliResult {
    match cmd {
        Command::Parse { file } => {
            let doc = ctx.load(&file)?;
            match (&doc, ctx.g.json) {
                (Doc::Net(n), true) => ctx.json(textio::net_json(n)),
                (Doc::Program(p), true) => ctx.json(textio::program_json(p)),
                (Doc::Net(n), false) => ctx.out.push_str(&textio::serialize_net(n)),
                (Doc::Program(p), false) => ctx.out.push_str(&textio::serialize_program(p)),
            }
        }
        Command::Tp { file, interp, steps } => {
            let doc = ctx.load(&file)?;
            let sig = doc.signature().clone();
            let start = parse_set(&sig, &interp)?;
            let trace = iterate(|i| doc.t(i), start, steps.unwrap_or(1));
            let shown = if steps.is_some() { &trace.steps[..] } else { &trace.steps[1..] };
            if ctx.g.json {
                let mut m = Map::new();
                m.insert("steps".into(), textio::interpretations_json(&sig, shown));
                m.insert("converged".into(), json!(trace.converged));
                ctx.json(textio::envelope("tp", &sig, m));
            } else if steps.is_some() {
                for (k, s) in shown.iter().enumerate() {
                    ctx.line(format!("{k}: {}", sig.show(s)));
                }
                if trace.converged {
                    ctx.line(format!("fixed point after {} applications", trace.applications() - 1));
                }
            } else {
                ctx.line(sig.show(&shown[0]));
            }
        }
        Command::Lfp { file } => {
            let doc = ctx.load(&file)?;
            let m = match &doc {
                Doc::Net(n) => n.least_model()?,
                Doc::Program(p) => p.least_model()?,
            };
            ctx.family("least_model", "models", doc.signature(), &[m]);
        }
        Command::Models { file, supported } => {
            let doc = ctx.load(&file)?;
            let cap = ctx.cap();
            let sets = match (&doc, supported) {
                (Doc::Net(n), false) => n.models(cap)?,
                (Doc::Net(n), true) => n.supported_models(cap)?,
                (Doc::Program(p), false) => p.models(cap)?,
                (Doc::Program(p), true) => p.supported_models(cap)?,
            };
            let kind = if supported { "supported_models" } else { "models" };
            ctx.family(kind, "models", doc.signature(), &sets);
        }
        Command::Answersets { file, semantics } => {
            let doc = ctx.load(&file)?;
            let cap = ctx.cap();
            let sets = match (&doc, semantics) {
                (Doc::Net(n), Semantics::Aft) => n.answer_sets(cap)?,
                (Doc::Net(n), Semantics::Ultimate) => n.ultimate_answer_sets(cap)?,
                (Doc::Net(n), Semantics::Flp) => {
                    eprintln!("note: nets have no FLP semantics; using the program translation of the net");
                    net_to_program(n).flp_answer_sets(cap)?
                }
                (Doc::Program(p), Semantics::Aft) => p.answer_sets(cap)?,
                (Doc::Program(p), Semantics::Ultimate) => p.ultimate_answer_sets(cap)?,
                (Doc::Program(p), Semantics::Flp) => p.flp_answer_sets(cap)?,
            };
            ctx.family("answer_sets", "answer_sets", doc.signature(), &sets);
        }
        Command::Eval { file, input } => {
            let net = ctx.load_net(&file)?;
            let layered = net.layers()?;
            let input = parse_set(net.signature(), &input)?;
            let acts = layered.activations(&input)?;
            let out = layered.feed_forward(&input)?;
            let sig = net.signature();
            if ctx.g.json {
                let mut m = Map::new();
                m.insert("activations".into(), textio::interpretation_json(sig, &acts));
                m.insert("output".into(), textio::interpretation_json(sig, &out));
                ctx.json(textio::envelope("eval", sig, m));
            } else {
                ctx.line(sig.show(&out));
            }
        }
        Command::Layers { file } => {
            let net = ctx.load_net(&file)?;
            let layered = net.layers()?;
            let names = layered.layer_names();
            if ctx.g.json {
                let mut m = Map::new();
                m.insert("layers".into(), json!(names));
                ctx.json(textio::envelope("layers", net.signature(), m));
            } else {
                for (k, layer) in names.iter().enumerate() {
                    ctx.line(format!("layer {}: {}", k + 1, layer.join(", ")));
                }
            }
        }
        Command::Translate { file, to } => {
            let doc = ctx.load(&file)?;
            let target = match (doc, to) {
                (Doc::Net(n), FileKind::Program) => Doc::Program(net_to_program(&n)),
                (Doc::Program(p), FileKind::Net) => Doc::Net(program_to_net(&p)?),
                (same, _) => same,
            };
            match (&target, ctx.g.json) {
                (Doc::Net(n), true) => ctx.json(textio::net_json(n)),
                (Doc::Program(p), true) => ctx.json(textio::program_json(p)),
                (Doc::Net(n), false) => ctx.out.push_str(&textio::serialize_net(n)),
                (Doc::Program(p), false) => ctx.out.push_str(&textio::serialize_program(p)),
            }
        }
        Command::Equiv { left, right, kind, all, strict } => {
            let x = ctx.load(&left)?.into_operand();
            let y = ctx.load(&right)?.into_operand();
            let opts = CheckOptions { cap: ctx.cap(), strict };
            let equivalent = if all {
                let ladder = equivalence::implication_ladder(&x, &y, opts)?;
                let mut rows = Vec::new();
                for (k, entry) in &ladder.entries {
                    match entry {
                        LadderEntry::Checked(v) => {
                            rows.push(verdict_json(v));
                            if !ctx.g.json {
                                ctx.line(verdict_text(v));
                            }
                        }
                        LadderEntry::Skipped(why) => {
                            rows.push(json!({"kind": k.as_str(), "skipped": why}));
                            if !ctx.g.json {
                                ctx.line(format!("{k}: skipped ({why})"));
                            }
                        }
                    }
                }
                if ctx.g.json {
                    let universe = ladder.entries.iter().find_map(|(_, e)| match e {
                        LadderEntry::Checked(v) => Some(v.universe.clone()),
                        LadderEntry::Skipped(_) => None,
                    });
                    ctx.json(json!({"kind": "equivalence", "universe": universe.unwrap_or_default(), "verdicts": rows}));
                }
                ladder.all_equivalent()
            } else {
                let v = equivalence::check(kind.unwrap_or(Kind::Subsumption), &x, &y, opts)?;
                if ctx.g.json {
                    ctx.json(json!({"kind": "equivalence", "universe": v.universe, "verdicts": [verdict_json(&v)]}));
                } else {
                    ctx.line(verdict_text(&v));
                }
                v.equivalent
            };
            if !equivalent {
                return Err(Failure::Negative);
            }
        }
        Command::ExploreFlp { count, max_neurons, out } => {
            let params = GenParams {
                neuron_count: (1, max_neurons),
                max_rules_per_head: 2,
                seed: ctx.g.seed,
                ..GenParams::default()
            };
            let report = flp_vs_aft_experiment(&params, count)?;
            let report_json = serde_json::to_value(&report).expect("reports serialize");
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                let text = serde_json::to_string_pretty(&report_json).expect("JSON values always serialize");
                fs::write(dir.join("report.json"), text + "\n")?;
                for (k, c) in report.counterexamples.iter().enumerate() {
                    let body = format!(
                        "% instance {} (seed {}): AFT answer set {{{}}} is not an FLP answer set\n{}",
                        c.instance,
                        c.seed,
                        c.witness.join(", "),
                        c.program
                    );
                    fs::write(dir.join(format!("counterexample-{k:04}.nlp")), body)?;
                }
            }
            if ctx.g.json {
                ctx.json(report_json);
            } else {
                ctx.line(format!("instances: {}", report.instances));
                ctx.line(format!("AFT answer sets all FLP: {}", report.aft_subset_flp));
                ctx.line(format!("FLP answer set outside AFT: {}", report.flp_not_aft));
                ctx.line(format!("positive instances: {}", report.positive_instances));
                ctx.line(format!("counterexamples: {}", report.counterexamples.len()));
                for c in &report.counterexamples {
                    ctx.line(format!("  instance {} (seed {}): witness {{{}}}", c.instance, c.seed, c.witness.join(", ")));
                }
            }
        }
    }
    Ok(())
}

fn verdict_text(v: &Verdict) -> String {
    use equivalence::Counterexample as C;
    let head = format!("{}: {}", v.kind, if v.equivalent { "equivalent" } else { "not equivalent" });
    let show3 = |p: &ThreeInterpretation| format!("({}, {})", v.show(p.lower()), v.show(p.upper()));
    match &v.counterexample {
        None => head,
        Some(C::Operator { input, left, right }) => {
            format!("{head}; on {} left gives {}, right gives {}", v.show(input), v.show(left), v.show(right))
        }
        Some(C::ThreeValued { input, left, right }) => {
            format!("{head}; on {} left gives {}, right gives {}", show3(input), show3(left), show3(right))
        }
        Some(C::Membership { witness, in_left }) => {
            let side = if *in_left { "left only" } else { "right only" };
            format!("{head}; {} holds for the {side}", v.show(witness))
        }
        Some(C::LeastModels { left, right }) => {
            format!("{head}; least models {} and {}", v.show(left), v.show(right))
        }
    }
}

fn verdict_json(v: &Verdict) -> Value {
    use equivalence::Counterexample as C;
    let names = |i: &Interpretation| json!(i.iter().map(|k| v.universe[k].clone()).collect::<Vec<_>>());
    let pair = |p: &ThreeInterpretation| json!([names(p.lower()), names(p.upper())]);
    let cx = match &v.counterexample {
        None => Value::Null,
        Some(C::Operator { input, left, right }) => {
            json!({"type": "operator", "input": names(input), "left": names(left), "right": names(right)})
        }
        Some(C::ThreeValued { input, left, right }) => {
            json!({"type": "three_valued", "input": pair(input), "left": pair(left), "right": pair(right)})
        }
        Some(C::Membership { witness, in_left }) => {
            json!({"type": "membership", "witness": names(witness), "in_left": in_left})
        }
        Some(C::LeastModels { left, right }) => json!({"type": "least_models", "left": names(left), "right": names(right)}),
    };
    json!({"kind": v.kind.as_str(), "equivalent": v.equivalent, "counterexample": cx})
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut ctx = Ctx { g: cli.global, out: String::new() };
    let result = run(cli.command, &mut ctx);
    let _ = io::stdout().write_all(ctx.out.as_bytes());
    let (code, message) = match result {
        Ok(()) => (0, None),
        Err(Failure::Negative) => (1, None),
        Err(Failure::Usage(m)) => (2, Some(m)),
        Err(Failure::Input(m)) => (3, Some(m)),
        Err(Failure::Cap(m)) => (4, Some(m)),
    };
    if let Some(m) = message {
        eprintln!("error: {m}");
    }
    ExitCode::from(code)
}

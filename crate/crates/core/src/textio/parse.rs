use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{Category, ParseError, ParseOptions, SourceSpan};
use crate::interp::{NeuronId, Signature};
use crate::net::Net;
use crate::program::{NeuralRule, Program, ProgramOptions};
use crate::rational::{parse_rational, ExtendedRational, Rational};

use num_traits::{One, Zero};

fn syntax(span: &SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError { span: span.clone(), message: message.into(), category: Category::Syntactic }
}

fn validation(span: &SourceSpan, message: impl Into<String>) -> ParseError {
    ParseError { span: span.clone(), message: message.into(), category: Category::Validation }
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.tokens.get(self.pos + k).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn last_span(&self) -> SourceSpan {
        self.tokens[self.pos.min(self.tokens.len()) - 1].span.clone()
    }

    fn next(&mut self, expected: &str) -> Result<&'a Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(syntax(&self.last_span(), format!("expected {expected} but the input ended"))),
        }
    }

    fn expect(&mut self, want: &Tok) -> Result<&'a Token, ParseError> {
        let t = self.next(&want.describe())?;
        if &t.tok == want {
            Ok(t)
        } else {
            Err(syntax(&t.span, format!("expected {} but found {}", want.describe(), t.tok.describe())))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        let t = self.next("a neuron name")?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.span.clone())),
            other => Err(syntax(&t.span, format!("expected a neuron name but found {}", other.describe()))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let (s, span) = self.ident()?;
        if s == kw {
            Ok(())
        } else {
            Err(syntax(&span, format!("expected '{kw}' but found identifier '{s}'")))
        }
    }

    fn rational(&mut self) -> Result<(Rational, SourceSpan), ParseError> {
        let t = self.next("a number")?;
        match &t.tok {
            Tok::Number(s) => parse_rational(s).map(|q| (q, t.span.clone())).map_err(|e| ParseError {
                span: t.span.clone(),
                message: e.to_string(),
                category: Category::Lexical,
            }),
            other => Err(syntax(&t.span, format!("expected a number but found {}", other.describe()))),
        }
    }

    /// Error recovery: drop everything up to and including the next '.'.
    fn skip_statement(&mut self) {
        while let Some(t) = self.peek() {
            self.pos += 1;
            if t.tok == Tok::Dot {
                break;
            }
        }
    }
}

/// Runs `statement` until the tokens run out, collecting errors.
fn statements<T>(
    cursor: &mut Cursor<'_>,
    errors: &mut Vec<ParseError>,
    mut statement: impl FnMut(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Vec<T> {
    let mut out = Vec::new();
    while !cursor.at_end() {
        let start = cursor.pos;
        match statement(cursor) {
            Ok(s) => out.push(s),
            Err(e) => {
                errors.push(e);
                // An unexpected '.' already ended the broken statement.
                if cursor.pos == start || cursor.tokens[cursor.pos - 1].tok != Tok::Dot {
                    cursor.skip_statement();
                }
            }
        }
    }
    out
}

/// Keeps the first error only unless every error was asked for.
fn finish<T>(value: Option<T>, mut errors: Vec<ParseError>, opts: &ParseOptions) -> Result<T, Vec<ParseError>> {
    if errors.is_empty() {
        return Ok(value.expect("no errors implies a value"));
    }
    errors.sort_by_key(|e| (e.span.line, e.span.column));
    if !opts.all_errors {
        errors.truncate(1);
    }
    Err(errors)
}

/// First-appearance order of neuron names.
#[derive(Default)]
struct Universe {
    order: Vec<String>,
    seen: HashSet<String>,
}

impl Universe {
    fn see(&mut self, name: &str) {
        if self.seen.insert(name.to_string()) {
            self.order.push(name.to_string());
        }
    }
}

enum ProgramStmt {
    Theta { name: String, span: SourceSpan, value: Rational },
    Fact { name: String, span: SourceSpan },
    Rule { head: String, span: SourceSpan, body: Vec<(String, SourceSpan, Option<Rational>)> },
}

fn program_statement(c: &mut Cursor<'_>) -> Result<ProgramStmt, ParseError> {
    let is_theta = matches!(c.peek_at(0), Some(Tok::Ident(k)) if k == "theta") && matches!(c.peek_at(1), Some(Tok::Ident(_)));
    if is_theta {
        c.keyword("theta")?;
        let (name, span) = c.ident()?;
        c.expect(&Tok::Equals)?;
        let (value, _) = c.rational()?;
        c.expect(&Tok::Dot)?;
        return Ok(ProgramStmt::Theta { name, span, value });
    }
    let (head, span) = c.ident()?;
    let t = c.next("'.' or '<-'")?;
    match t.tok {
        Tok::Dot => Ok(ProgramStmt::Fact { name: head, span }),
        Tok::LeftArrow => {
            let mut body = Vec::new();
            loop {
                let (atom, atom_span) = c.ident()?;
                let weight = if c.peek_at(0) == Some(&Tok::Colon) {
                    c.expect(&Tok::Colon)?;
                    Some(c.rational()?.0)
                } else {
                    None
                };
                body.push((atom, atom_span, weight));
                let t = c.next("',' or '.'")?;
                match t.tok {
                    Tok::Comma => continue,
                    Tok::Dot => break,
                    ref other => {
                        return Err(syntax(&t.span, format!("expected ',' or '.' but found {}", other.describe())))
                    }
                }
            }
            Ok(ProgramStmt::Rule { head, span, body })
        }
        ref other => Err(syntax(&t.span, format!("expected '.' or '<-' after '{head}' but found {}", other.describe()))),
    }
}

pub fn parse_program_with(text: &str, opts: &ParseOptions) -> Result<Program, Vec<ParseError>> {
    let (tokens, mut errors) = tokenize(text, &opts.file);
    let mut cursor = Cursor { tokens: &tokens, pos: 0 };
    let stmts = statements(&mut cursor, &mut errors, program_statement);
    let program = build_program(stmts, opts, &mut errors);
    finish(program, errors, opts)
}

fn build_program(stmts: Vec<ProgramStmt>, opts: &ParseOptions, errors: &mut Vec<ParseError>) -> Option<Program> {
    let mut universe = Universe::default();
    let mut thetas: HashMap<String, Rational> = HashMap::new();
    let mut facts: HashSet<String> = HashSet::new();
    let mut rules = Vec::new();
    // Heads of nonempty rules, with whether every incoming weight is 1 and
    // the largest body size.
    let mut heads: HashMap<String, (SourceSpan, bool, usize)> = HashMap::new();

    for stmt in &stmts {
        match stmt {
            ProgramStmt::Theta { name, span, value } => {
                universe.see(name);
                if facts.contains(name) {
                    errors.push(validation(span, format!("fact '{name}' cannot have a threshold declaration")));
                } else if thetas.insert(name.clone(), value.clone()).is_some() {
                    errors.push(validation(span, format!("threshold of '{name}' declared twice")));
                }
            }
            ProgramStmt::Fact { name, span } => {
                universe.see(name);
                if thetas.contains_key(name) {
                    errors.push(validation(span, format!("fact '{name}' cannot have a threshold declaration")));
                } else if heads.contains_key(name) {
                    errors.push(validation(span, format!("neuron '{name}' is both a fact and the head of a rule")));
                }
                facts.insert(name.clone());
            }
            ProgramStmt::Rule { head, span, body } => {
                universe.see(head);
                if facts.contains(head) {
                    errors.push(validation(span, format!("neuron '{head}' is both a fact and the head of a rule")));
                }
                let mut seen = HashSet::new();
                let mut weights = Vec::new();
                for (atom, atom_span, w) in body {
                    universe.see(atom);
                    if !seen.insert(atom) {
                        errors.push(validation(atom_span, format!("neuron '{atom}' repeated in the body of a rule for '{head}'")));
                    }
                    let w = w.clone().unwrap_or_else(Rational::one);
                    if w.is_zero() && !opts.permit_zero_weights {
                        errors.push(validation(
                            atom_span,
                            format!("body neuron '{atom}' of a rule for '{head}' has weight 0 (use --permit-zero-weights)"),
                        ));
                    }
                    weights.push((atom.clone(), w));
                }
                let unit = weights.iter().all(|(_, w)| w.is_one());
                let entry = heads.entry(head.clone()).or_insert((span.clone(), true, 0));
                if !unit && entry.1 {
                    entry.0 = span.clone();
                }
                entry.1 &= unit;
                entry.2 = entry.2.max(weights.len());
                rules.push((head.clone(), weights));
            }
        }
    }

    let mut entries = Vec::new();
    for name in &universe.order {
        let theta = if facts.contains(name) {
            ExtendedRational::NegInfinity
        } else if let Some(q) = thetas.get(name) {
            ExtendedRational::Finite(q.clone())
        } else if let Some((span, unit, size)) = heads.get(name) {
            if !unit {
                errors.push(validation(
                    span,
                    format!("non-fact neuron '{name}' lacks a threshold (needed because its rules use non-unit weights)"),
                ));
            }
            ExtendedRational::from_integer(*size as i64)
        } else {
            ExtendedRational::zero()
        };
        entries.push((NeuronId::new(name.clone()).expect("lexer only yields valid names"), theta));
    }
    if !errors.is_empty() {
        return None;
    }
    let sig = Signature::new(entries).expect("universe names are unique");
    let mut all_rules: Vec<NeuralRule> = universe
        .order
        .iter()
        .enumerate()
        .filter(|(_, n)| facts.contains(*n))
        .map(|(i, _)| NeuralRule::fact(i))
        .collect();
    for (head, body) in rules {
        let body = body.into_iter().map(|(b, w)| (sig.index_of(&b).unwrap(), w)).collect();
        all_rules.push(NeuralRule::new(sig.index_of(&head).unwrap(), body));
    }
    let popts = ProgramOptions { permit_zero_weights: opts.permit_zero_weights };
    match Program::new(Arc::new(sig), all_rules, popts) {
        Ok(p) => Some(p),
        Err(e) => {
            let span = stmts.first().map(stmt_span).unwrap_or_else(|| SourceSpan::start(&opts.file));
            errors.push(validation(&span, e.to_string()));
            None
        }
    }
}

fn stmt_span(s: &ProgramStmt) -> SourceSpan {
    match s {
        ProgramStmt::Theta { span, .. } | ProgramStmt::Fact { span, .. } | ProgramStmt::Rule { span, .. } => span.clone(),
    }
}

enum NetStmt {
    Node { name: String, span: SourceSpan, theta: Option<Rational> },
    Edge { from: (String, SourceSpan), to: (String, SourceSpan), weight: Rational, span: SourceSpan },
}

fn net_statement(c: &mut Cursor<'_>) -> Result<NetStmt, ParseError> {
    let (kw, kw_span) = c.ident()?;
    match kw.as_str() {
        "node" => {
            let (name, span) = c.ident()?;
            let (what, what_span) = c.ident()?;
            let theta = match what.as_str() {
                "fact" => None,
                "theta" => Some(c.rational()?.0),
                other => return Err(syntax(&what_span, format!("expected 'fact' or 'theta' but found identifier '{other}'"))),
            };
            c.expect(&Tok::Dot)?;
            Ok(NetStmt::Node { name, span, theta })
        }
        "edge" => {
            let from = c.ident()?;
            c.expect(&Tok::RightArrow)?;
            let to = c.ident()?;
            c.expect(&Tok::Colon)?;
            let (weight, span) = c.rational()?;
            c.expect(&Tok::Dot)?;
            Ok(NetStmt::Edge { from, to, weight, span })
        }
        other => Err(syntax(&kw_span, format!("expected 'node' or 'edge' but found identifier '{other}'"))),
    }
}

pub fn parse_net_with(text: &str, opts: &ParseOptions) -> Result<Net, Vec<ParseError>> {
    let (tokens, mut errors) = tokenize(text, &opts.file);
    let mut cursor = Cursor { tokens: &tokens, pos: 0 };
    let stmts = statements(&mut cursor, &mut errors, net_statement);
    let net = build_net(stmts, opts, &mut errors);
    finish(net, errors, opts)
}

fn build_net(stmts: Vec<NetStmt>, opts: &ParseOptions, errors: &mut Vec<ParseError>) -> Option<Net> {
    let mut nodes: Vec<(String, SourceSpan, Option<Rational>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for s in &stmts {
        if let NetStmt::Node { name, span, theta } = s {
            if index.contains_key(name) {
                errors.push(validation(span, format!("node '{name}' declared twice")));
            } else {
                index.insert(name.clone(), nodes.len());
                nodes.push((name.clone(), span.clone(), theta.clone()));
            }
        }
    }
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut has_body = vec![false; nodes.len()];
    for s in &stmts {
        if let NetStmt::Edge { from, to, weight, span } = s {
            let mut lookup = |(name, span): &(String, SourceSpan)| match index.get(name) {
                Some(&i) => Some(i),
                None => {
                    errors.push(validation(span, format!("edge mentions undeclared node '{name}'")));
                    None
                }
            };
            let (Some(f), Some(t)) = (lookup(from), lookup(to)) else { continue };
            has_body[t] = true;
            if weight.is_zero() {
                errors.push(validation(span, format!("edge {} -> {} has weight 0; omit disconnected edges", from.0, to.0)));
                continue;
            }
            if !seen.insert((f, t)) {
                errors.push(validation(&from.1, format!("duplicate edge {} -> {}", from.0, to.0)));
                continue;
            }
            edges.push((f, t, weight.clone()));
        }
    }
    for (k, (name, span, theta)) in nodes.iter().enumerate() {
        match (theta, has_body[k]) {
            (None, true) => errors.push(validation(span, format!("fact '{name}' has incoming edges"))),
            (Some(_), false) => errors.push(validation(span, format!("non-fact neuron '{name}' has no incoming edges"))),
            _ => {}
        }
    }
    if !errors.is_empty() {
        return None;
    }
    let sig = Signature::new(nodes.into_iter().map(|(name, _, theta)| {
        let theta = theta.map_or(ExtendedRational::NegInfinity, ExtendedRational::Finite);
        (NeuronId::new(name).expect("lexer only yields valid names"), theta)
    }))
    .expect("node names are unique");
    match Net::new(Arc::new(sig), edges) {
        Ok(n) => Some(n),
        Err(e) => {
            errors.push(validation(&SourceSpan::start(&opts.file), e.to_string()));
            None
        }
    }
}

//! Boolean network models: update-function expressions, the BoolNet-style
//! model-file parser, node controls and input-node classification.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Update-function expression over the nodes of a network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

impl BoolExpr {
    pub fn not(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    /// Conjunction; collapses empty and single-element operand lists.
    pub fn and(mut es: Vec<BoolExpr>) -> BoolExpr {
        match es.len() {
            0 => BoolExpr::Const(true),
            1 => es.pop().unwrap(),
            _ => BoolExpr::And(es),
        }
    }

    /// Disjunction; collapses empty and single-element operand lists.
    pub fn or(mut es: Vec<BoolExpr>) -> BoolExpr {
        match es.len() {
            0 => BoolExpr::Const(false),
            1 => es.pop().unwrap(),
            _ => BoolExpr::Or(es),
        }
    }

    /// Evaluates the expression on a full assignment of node values.
    pub fn eval(&self, bits: &[bool]) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(i) => bits[*i],
            BoolExpr::Not(e) => !e.eval(bits),
            BoolExpr::And(es) => es.iter().all(|e| e.eval(bits)),
            BoolExpr::Or(es) => es.iter().any(|e| e.eval(bits)),
        }
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(i) => {
                out.insert(*i);
            }
            BoolExpr::Not(e) => e.collect_vars(out),
            BoolExpr::And(es) | BoolExpr::Or(es) => {
                for e in es {
                    e.collect_vars(out);
                }
            }
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            BoolExpr::Const(_) => Ok(()),
            BoolExpr::Var(i) => {
                if *i < n {
                    Ok(())
                } else {
                    Err(Error::InvalidNetwork(format!(
                        "variable index {i} out of range for {n} nodes"
                    )))
                }
            }
            BoolExpr::Not(e) => e.validate(n),
            BoolExpr::And(es) | BoolExpr::Or(es) => {
                if es.len() < 2 {
                    return Err(Error::InvalidNetwork(
                        "conjunction/disjunction needs at least two operands".into(),
                    ));
                }
                es.iter().try_for_each(|e| e.validate(n))
            }
        }
    }

    // Precedence levels: 0 = disjunction, 1 = conjunction, 2 = atom/negation.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, names: &[String], prec: u8) -> fmt::Result {
        match self {
            BoolExpr::Const(b) => write!(f, "{}", if *b { '1' } else { '0' }),
            BoolExpr::Var(i) => write!(f, "{}", names[*i]),
            BoolExpr::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, names, 2)
            }
            BoolExpr::And(es) => {
                if prec > 1 {
                    write!(f, "(")?;
                }
                for (k, e) in es.iter().enumerate() {
                    if k > 0 {
                        write!(f, " & ")?;
                    }
                    e.fmt_prec(f, names, 2)?;
                }
                if prec > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            BoolExpr::Or(es) => {
                if prec > 0 {
                    write!(f, "(")?;
                }
                for (k, e) in es.iter().enumerate() {
                    if k > 0 {
                        write!(f, " | ")?;
                    }
                    e.fmt_prec(f, names, 1)?;
                }
                if prec > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// A single state of a network: one bit per node, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub bits: Vec<bool>,
}

impl State {
    pub fn new(bits: Vec<bool>) -> State {
        State { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Parses a bitstring such as `010` into a state.
    pub fn from_bitstring(s: &str) -> Result<State> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid character {c:?} in state bitstring"
                    )))
                }
            }
        }
        Ok(State { bits })
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A control: node indices held at 0 and node indices held at 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Control {
    zero: BTreeSet<usize>,
    one: BTreeSet<usize>,
}

impl Control {
    pub fn new(zero: BTreeSet<usize>, one: BTreeSet<usize>) -> Result<Control> {
        if let Some(i) = zero.intersection(&one).next() {
            return Err(Error::ConflictingControl(format!("#{i}")));
        }
        Ok(Control { zero, one })
    }

    pub fn empty() -> Control {
        Control::default()
    }

    pub fn from_literals<I: IntoIterator<Item = (usize, bool)>>(lits: I) -> Result<Control> {
        let mut zero = BTreeSet::new();
        let mut one = BTreeSet::new();
        for (i, v) in lits {
            let clash = if v { zero.contains(&i) } else { one.contains(&i) };
            if clash {
                return Err(Error::ConflictingControl(format!("#{i}")));
            }
            if v {
                one.insert(i);
            } else {
                zero.insert(i);
            }
        }
        Ok(Control { zero, one })
    }

    pub fn zero_set(&self) -> &BTreeSet<usize> {
        &self.zero
    }

    pub fn one_set(&self) -> &BTreeSet<usize> {
        &self.one
    }

    pub fn size(&self) -> usize {
        self.zero.len() + self.one.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Value this control forces on node `i`, if any.
    pub fn fixes(&self, i: usize) -> Option<bool> {
        if self.zero.contains(&i) {
            Some(false)
        } else if self.one.contains(&i) {
            Some(true)
        } else {
            None
        }
    }

    /// Fixed (index, value) pairs sorted by node index.
    pub fn literals(&self) -> Vec<(usize, bool)> {
        let mut lits: Vec<(usize, bool)> = self
            .zero
            .iter()
            .map(|&i| (i, false))
            .chain(self.one.iter().map(|&i| (i, true)))
            .collect();
        lits.sort_unstable();
        lits
    }

    /// Ordering key: size first, then literal list.
    pub fn sort_key(&self) -> (usize, Vec<(usize, bool)>) {
        (self.size(), self.literals())
    }

    /// Applies the control to a state, forcing the fixed nodes.
    pub fn apply(&self, s: &State) -> State {
        let mut bits = s.bits.clone();
        for &i in &self.zero {
            bits[i] = false;
        }
        for &i in &self.one {
            bits[i] = true;
        }
        State { bits }
    }

    pub fn display<'a>(&'a self, network: &'a BooleanNetwork) -> ControlDisplay<'a> {
        ControlDisplay {
            control: self,
            network,
        }
    }
}

pub struct ControlDisplay<'a> {
    control: &'a Control,
    network: &'a BooleanNetwork,
}

impl fmt::Display for ControlDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.control.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, (i, v)) in self.control.literals().into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}={}", self.network.names()[i], u8::from(v))?;
        }
        write!(f, "}}")
    }
}

/// Input-node classification: `inputs` have no parents besides themselves,
/// `specified` inputs carry a constant update function, `nonspecified` inputs
/// copy their own value. An input whose function negates itself oscillates
/// forever and is excluded from `inputs` (reported in `oscillating`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputClassification {
    pub inputs: BTreeSet<usize>,
    pub specified: BTreeSet<usize>,
    pub nonspecified: BTreeSet<usize>,
    pub oscillating: BTreeSet<usize>,
    /// Constant value of each specified input.
    pub constants: HashMap<usize, bool>,
}

/// A Boolean network: a list of named nodes with one update function each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanNetwork {
    names: Vec<String>,
    functions: Vec<BoolExpr>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl BooleanNetwork {
    pub fn new(names: Vec<String>, functions: Vec<BoolExpr>) -> Result<BooleanNetwork> {
        if names.is_empty() {
            return Err(Error::InvalidNetwork("a network needs at least one node".into()));
        }
        if names.len() != functions.len() {
            return Err(Error::InvalidNetwork(
                "node and function counts differ".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !valid_name(name) {
                return Err(Error::InvalidNetwork(format!("invalid node name {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidNetwork(format!("duplicate node name {name:?}")));
            }
        }
        let n = names.len();
        for f in &functions {
            f.validate(n)?;
        }
        Ok(BooleanNetwork { names, functions })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn functions(&self) -> &[BoolExpr] {
        &self.functions
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    /// Node indices occurring syntactically in the update function of node `i`.
    pub fn parents(&self, i: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.functions[i].collect_vars(&mut out);
        out
    }

    /// Classifies input nodes by the shape of their self-dependent function.
    pub fn classify_inputs(&self) -> InputClassification {
        let n = self.n();
        let mut ic = InputClassification::default();
        for i in 0..n {
            let parents = self.parents(i);
            if !parents.iter().all(|&p| p == i) {
                continue;
            }
            // The function depends on x_i at most; probe both values.
            let mut bits = vec![false; n];
            let at0 = self.functions[i].eval(&bits);
            bits[i] = true;
            let at1 = self.functions[i].eval(&bits);
            match (at0, at1) {
                (false, true) => {
                    ic.inputs.insert(i);
                    ic.nonspecified.insert(i);
                }
                (true, false) => {
                    ic.oscillating.insert(i);
                }
                (v, _) => {
                    ic.inputs.insert(i);
                    ic.specified.insert(i);
                    ic.constants.insert(i, v);
                }
            }
        }
        ic
    }

    /// The network with the controlled nodes' functions replaced by constants.
    pub fn under_control(&self, c: &Control) -> BooleanNetwork {
        let functions = self
            .functions
            .iter()
            .enumerate()
            .map(|(i, f)| match c.fixes(i) {
                Some(v) => BoolExpr::Const(v),
                None => f.clone(),
            })
            .collect();
        BooleanNetwork {
            names: self.names.clone(),
            functions,
        }
    }

    pub fn display_function(&self, i: usize) -> FunctionDisplay<'_> {
        FunctionDisplay { network: self, i }
    }
}

pub struct FunctionDisplay<'a> {
    network: &'a BooleanNetwork,
    i: usize,
}

impl fmt::Display for FunctionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.network.functions[self.i].fmt_prec(f, &self.network.names, 0)
    }
}

impl fmt::Display for BooleanNetwork {
    /// Serializes back to the BoolNet-style model format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "targets, factors")?;
        for i in 0..self.n() {
            writeln!(f, "{}, {}", self.names[i], self.display_function(i))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Model-file parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    And,
    Or,
    Not,
    LPar,
    RPar,
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '&' => {
                chars.next();
                toks.push(Tok::And);
            }
            '|' => {
                chars.next();
                toks.push(Tok::Or);
            }
            '!' => {
                chars.next();
                toks.push(Tok::Not);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LPar);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RPar);
            }
            _ if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "0" => toks.push(Tok::Zero),
                    "1" => toks.push(Tok::One),
                    w if valid_name(w) => toks.push(Tok::Ident(word)),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            msg: format!("invalid token {word:?}"),
                        })
                    }
                }
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(toks)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a HashMap<String, usize>,
    line: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<BoolExpr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(BoolExpr::or(terms))
    }

    fn term(&mut self) -> Result<BoolExpr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(BoolExpr::and(factors))
    }

    fn factor(&mut self) -> Result<BoolExpr> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(BoolExpr::not(self.factor()?))
            }
            Some(Tok::LPar) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RPar) {
                    return Err(self.err("missing closing parenthesis"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(BoolExpr::Const(false))
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(BoolExpr::Const(true))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.names.get(&name) {
                    Some(&i) => Ok(BoolExpr::Var(i)),
                    None => Err(self.err(format!("reference to undeclared node {name:?}"))),
                }
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

fn is_comment_or_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses a BoolNet-style model file. Node order follows declaration order.
pub fn parse_network(text: &str) -> Result<BooleanNetwork> {
    let mut header_seen = false;
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if is_comment_or_blank(line) {
            continue;
        }
        if !header_seen {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let ok = fields.len() == 2
                && fields[0].eq_ignore_ascii_case("targets")
                && fields[1].eq_ignore_ascii_case("factors");
            if !ok {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected header \"targets, factors\"".into(),
                });
            }
            header_seen = true;
            continue;
        }
        let (target, factors) = match line.split_once(',') {
            Some((t, f)) => (t.trim().to_string(), f.to_string()),
            None => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected \"<node>, <expression>\"".into(),
                })
            }
        };
        if !valid_name(&target) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("invalid node name {target:?}"),
            });
        }
        entries.push((lineno, target, factors));
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 1,
            msg: "missing header \"targets, factors\"".into(),
        });
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "model declares zero nodes".into(),
        });
    }

    let mut index = HashMap::new();
    let mut names = Vec::new();
    for (lineno, target, _) in &entries {
        if index.insert(target.clone(), names.len()).is_some() {
            return Err(Error::Parse {
                line: *lineno,
                msg: format!("duplicate target node {target:?}"),
            });
        }
        names.push(target.clone());
    }

    let mut functions = Vec::with_capacity(entries.len());
    for (lineno, _, factors) in &entries {
        let toks = tokenize(*lineno, factors)?;
        let mut parser = ExprParser {
            toks,
            pos: 0,
            names: &index,
            line: *lineno,
        };
        let expr = parser.expr()?;
        if parser.pos != parser.toks.len() {
            return Err(Error::Parse {
                line: *lineno,
                msg: "trailing input after expression".into(),
            });
        }
        functions.push(expr);
    }
    BooleanNetwork::new(names, functions)
}

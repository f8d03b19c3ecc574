//! Canonical symbolic state sets over the nodes of a Boolean network.
//!
//! Sets are stored as reduced ordered binary decision diagrams in a
//! [`Universe`] arena. The variable order is fixed to node declaration order;
//! there is no dynamic reordering, so covers and cube extractions are
//! reproducible across runs. State sets are tied to the universe that created
//! them and cannot be mixed across universes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::model::{BoolExpr, BooleanNetwork, Control, InputClassification, State};

const FALSE: u32 = 0;
const TRUE: u32 = 1;

const OP_AND: u8 = 0;
const OP_OR: u8 = 1;
const OP_XOR: u8 = 2;
const OP_NOT: u8 = 3;
const OP_EXISTS: u8 = 4;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: u32,
    hi: u32,
}

/// A canonical set of n-bit states, valid only within its owning [`Universe`].
#[derive(Debug, Clone, Copy)]
pub struct StateSet {
    root: u32,
    uid: u64,
}

/// Cube of states: nodes fixed to 0, fixed to 1, and free (don't-care) nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schema {
    n: usize,
    zero: BTreeSet<usize>,
    one: BTreeSet<usize>,
}

impl Schema {
    pub fn new(n: usize, zero: BTreeSet<usize>, one: BTreeSet<usize>) -> Result<Schema> {
        if let Some(i) = zero.intersection(&one).next() {
            return Err(Error::InvalidArgument(format!(
                "schema fixes node {i} to both 0 and 1"
            )));
        }
        if zero.iter().chain(one.iter()).any(|&i| i >= n) {
            return Err(Error::InvalidArgument("schema index out of range".into()));
        }
        Ok(Schema { n, zero, one })
    }

    /// Parses a pattern such as `00*` (`0` off, `1` on, `*` don't-care).
    pub fn from_pattern(pattern: &str) -> Result<Schema> {
        let mut zero = BTreeSet::new();
        let mut one = BTreeSet::new();
        let mut n = 0;
        for (i, c) in pattern.chars().enumerate() {
            match c {
                '0' => {
                    zero.insert(i);
                }
                '1' => {
                    one.insert(i);
                }
                '*' => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "invalid character {c:?} in schema pattern"
                    )))
                }
            }
            n = i + 1;
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty schema pattern".into()));
        }
        Ok(Schema { n, zero, one })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero_set(&self) -> &BTreeSet<usize> {
        &self.zero
    }

    pub fn one_set(&self) -> &BTreeSet<usize> {
        &self.one
    }

    pub fn dont_care_set(&self) -> BTreeSet<usize> {
        (0..self.n)
            .filter(|i| !self.zero.contains(i) && !self.one.contains(i))
            .collect()
    }

    pub fn num_dont_care(&self) -> usize {
        self.n - self.zero.len() - self.one.len()
    }

    pub fn support_size(&self) -> usize {
        self.zero.len() + self.one.len()
    }

    /// Number of states the cube denotes: 2^|don't-care|.
    pub fn denoted_count(&self) -> u128 {
        1u128 << self.num_dont_care()
    }

    pub fn pattern(&self) -> String {
        (0..self.n)
            .map(|i| {
                if self.zero.contains(&i) {
                    '0'
                } else if self.one.contains(&i) {
                    '1'
                } else {
                    '*'
                }
            })
            .collect()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

/// Arena of BDD nodes for one analysis; all [`StateSet`] operations go
/// through the universe that produced the sets.
pub struct Universe {
    n: usize,
    uid: u64,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    cache: HashMap<(u8, u32, u32), u32>,
    counts: HashMap<u32, u128>,
}

impl Universe {
    pub fn new(n: usize) -> Universe {
        assert!(n >= 1, "universe needs at least one variable");
        assert!(n <= 10_000, "unreasonable variable count");
        let terminal_var = n as u32;
        Universe {
            n,
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            nodes: vec![
                Node {
                    var: terminal_var,
                    lo: 0,
                    hi: 0,
                },
                Node {
                    var: terminal_var,
                    lo: 1,
                    hi: 1,
                },
            ],
            unique: HashMap::new(),
            cache: HashMap::new(),
            counts: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn chk(&self, s: StateSet) -> u32 {
        assert_eq!(
            s.uid, self.uid,
            "state set used with a universe other than its own"
        );
        s.root
    }

    fn wrap(&self, root: u32) -> StateSet {
        StateSet {
            root,
            uid: self.uid,
        }
    }

    fn mk(&mut self, var: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    fn bin(&mut self, op: u8, a: u32, b: u32) -> u32 {
        match op {
            OP_AND => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE || a == b {
                    return b;
                }
                if b == TRUE {
                    return a;
                }
            }
            OP_OR => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE || a == b {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
            }
            OP_XOR => {
                if a == b {
                    return FALSE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE {
                    return a;
                }
                if a == TRUE {
                    return self.neg(b);
                }
                if b == TRUE {
                    return self.neg(a);
                }
            }
            _ => unreachable!(),
        }
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        if let Some(&r) = self.cache.get(&(op, x, y)) {
            return r;
        }
        let na = self.nodes[x as usize];
        let nb = self.nodes[y as usize];
        let var = na.var.min(nb.var);
        let (x0, x1) = if na.var == var { (na.lo, na.hi) } else { (x, x) };
        let (y0, y1) = if nb.var == var { (nb.lo, nb.hi) } else { (y, y) };
        let lo = self.bin(op, x0, y0);
        let hi = self.bin(op, x1, y1);
        let r = self.mk(var, lo, hi);
        self.cache.insert((op, x, y), r);
        r
    }

    fn neg(&mut self, a: u32) -> u32 {
        if a == FALSE {
            return TRUE;
        }
        if a == TRUE {
            return FALSE;
        }
        if let Some(&r) = self.cache.get(&(OP_NOT, a, 0)) {
            return r;
        }
        let node = self.nodes[a as usize];
        let lo = self.neg(node.lo);
        let hi = self.neg(node.hi);
        let r = self.mk(node.var, lo, hi);
        self.cache.insert((OP_NOT, a, 0), r);
        r
    }

    fn exists_raw(&mut self, a: u32, var: u32) -> u32 {
        let node = self.nodes[a as usize];
        if a <= TRUE || node.var > var {
            return a;
        }
        if let Some(&r) = self.cache.get(&(OP_EXISTS, a, var)) {
            return r;
        }
        let r = if node.var == var {
            self.bin(OP_OR, node.lo, node.hi)
        } else {
            let lo = self.exists_raw(node.lo, var);
            let hi = self.exists_raw(node.hi, var);
            self.mk(node.var, lo, hi)
        };
        self.cache.insert((OP_EXISTS, a, var), r);
        r
    }

    // -- public set algebra -------------------------------------------------

    pub fn empty(&self) -> StateSet {
        self.wrap(FALSE)
    }

    pub fn full(&self) -> StateSet {
        self.wrap(TRUE)
    }

    /// The half-space where node `var` takes `value`.
    pub fn literal(&mut self, var: usize, value: bool) -> StateSet {
        assert!(var < self.n);
        let r = if value {
            self.mk(var as u32, FALSE, TRUE)
        } else {
            self.mk(var as u32, TRUE, FALSE)
        };
        self.wrap(r)
    }

    pub fn union(&mut self, a: StateSet, b: StateSet) -> StateSet {
        let (a, b) = (self.chk(a), self.chk(b));
        let r = self.bin(OP_OR, a, b);
        self.wrap(r)
    }

    pub fn intersect(&mut self, a: StateSet, b: StateSet) -> StateSet {
        let (a, b) = (self.chk(a), self.chk(b));
        let r = self.bin(OP_AND, a, b);
        self.wrap(r)
    }

    pub fn difference(&mut self, a: StateSet, b: StateSet) -> StateSet {
        let (a, b) = (self.chk(a), self.chk(b));
        let nb = self.neg(b);
        let r = self.bin(OP_AND, a, nb);
        self.wrap(r)
    }

    pub fn complement(&mut self, a: StateSet) -> StateSet {
        let a = self.chk(a);
        let r = self.neg(a);
        self.wrap(r)
    }

    pub fn symmetric_difference(&mut self, a: StateSet, b: StateSet) -> StateSet {
        let (a, b) = (self.chk(a), self.chk(b));
        let r = self.bin(OP_XOR, a, b);
        self.wrap(r)
    }

    pub fn is_empty(&self, a: StateSet) -> bool {
        self.chk(a) == FALSE
    }

    /// Canonical representation makes equality a root comparison.
    pub fn set_eq(&self, a: StateSet, b: StateSet) -> bool {
        self.chk(a) == self.chk(b)
    }

    pub fn is_subset(&mut self, a: StateSet, b: StateSet) -> bool {
        let d = self.difference(a, b);
        self.is_empty(d)
    }

    /// Exact cardinality of the denoted set.
    pub fn count(&mut self, a: StateSet) -> u128 {
        let root = self.chk(a);
        let below = self.count_below(root);
        // Scale by the skipped variables above the root.
        below << self.nodes[root as usize].var
    }

    fn count_below(&mut self, a: u32) -> u128 {
        if a == FALSE {
            return 0;
        }
        if a == TRUE {
            return 1;
        }
        if let Some(&c) = self.counts.get(&a) {
            return c;
        }
        let node = self.nodes[a as usize];
        let lo = self.count_below(node.lo);
        let hi = self.count_below(node.hi);
        let lo_gap = self.nodes[node.lo as usize].var - node.var - 1;
        let hi_gap = self.nodes[node.hi as usize].var - node.var - 1;
        let c = (lo << lo_gap) + (hi << hi_gap);
        self.counts.insert(a, c);
        c
    }

    pub fn contains(&self, a: StateSet, s: &State) -> bool {
        assert_eq!(s.len(), self.n, "state length does not match universe");
        let mut cur = self.chk(a);
        while cur > TRUE {
            let node = self.nodes[cur as usize];
            cur = if s.bits[node.var as usize] {
                node.hi
            } else {
                node.lo
            };
        }
        cur == TRUE
    }

    pub fn from_state(&mut self, s: &State) -> StateSet {
        assert_eq!(s.len(), self.n, "state length does not match universe");
        let mut acc = TRUE;
        for i in (0..self.n).rev() {
            acc = if s.bits[i] {
                self.mk(i as u32, FALSE, acc)
            } else {
                self.mk(i as u32, acc, FALSE)
            };
        }
        self.wrap(acc)
    }

    pub fn from_schema(&mut self, sch: &Schema) -> StateSet {
        assert_eq!(sch.n(), self.n, "schema width does not match universe");
        let mut acc = TRUE;
        for i in (0..self.n).rev() {
            if sch.zero.contains(&i) {
                acc = self.mk(i as u32, acc, FALSE);
            } else if sch.one.contains(&i) {
                acc = self.mk(i as u32, FALSE, acc);
            }
        }
        self.wrap(acc)
    }

    /// The cube of states consistent with the fixed nodes of `c`.
    pub fn control_cube(&mut self, c: &Control) -> StateSet {
        let mut acc = TRUE;
        for (i, v) in c.literals().into_iter().rev() {
            assert!(i < self.n);
            acc = if v {
                self.mk(i as u32, FALSE, acc)
            } else {
                self.mk(i as u32, acc, FALSE)
            };
        }
        self.wrap(acc)
    }

    /// `set` restricted to states agreeing with the control's fixed values.
    pub fn restrict_to_control(&mut self, set: StateSet, c: &Control) -> StateSet {
        let cube = self.control_cube(c);
        self.intersect(set, cube)
    }

    /// Image of `set` under forcing: { C(s) | s in set }.
    pub fn apply_control_set(&mut self, c: &Control, set: StateSet) -> StateSet {
        let mut r = self.chk(set);
        for (i, _) in c.literals() {
            r = self.exists_raw(r, i as u32);
        }
        let cube = self.control_cube(c);
        let cube = self.chk(cube);
        let r = self.bin(OP_AND, r, cube);
        self.wrap(r)
    }

    /// Lexicographically smallest member (bit 0 is most significant).
    pub fn smallest_state(&self, a: StateSet) -> Option<State> {
        let mut cur = self.chk(a);
        if cur == FALSE {
            return None;
        }
        let mut bits = vec![false; self.n];
        while cur > TRUE {
            let node = self.nodes[cur as usize];
            if node.lo != FALSE {
                cur = node.lo;
            } else {
                bits[node.var as usize] = true;
                cur = node.hi;
            }
        }
        Some(State::new(bits))
    }

    /// Enumerates members in lexicographic order; errors above `limit`.
    pub fn to_states(&mut self, a: StateSet, limit: usize) -> Result<Vec<State>> {
        let count = self.count(a);
        if count > limit as u128 {
            return Err(Error::EnumerationOverflow { count, limit });
        }
        let root = self.chk(a);
        let mut out = Vec::with_capacity(count as usize);
        let mut bits = vec![false; self.n];
        self.enumerate(root, 0, &mut bits, &mut out);
        Ok(out)
    }

    fn enumerate(&self, cur: u32, var: usize, bits: &mut Vec<bool>, out: &mut Vec<State>) {
        if cur == FALSE {
            return;
        }
        if var == self.n {
            out.push(State::new(bits.clone()));
            return;
        }
        let node = self.nodes[cur as usize];
        let (lo, hi) = if cur == TRUE || node.var as usize > var {
            (cur, cur)
        } else {
            (node.lo, node.hi)
        };
        bits[var] = false;
        self.enumerate(lo, var + 1, bits, out);
        bits[var] = true;
        self.enumerate(hi, var + 1, bits, out);
        bits[var] = false;
    }

    // -- largest cube and schema covers ------------------------------------

    /// A maximum-cardinality cube contained in `set`.
    ///
    /// Ties between maximum cubes are broken towards the pattern that is
    /// lexicographically smallest in variable order with `0 < 1 < *` at each
    /// position.
    pub fn largest_cube(&mut self, set: StateSet) -> Result<Schema> {
        let root = self.chk(set);
        if root == FALSE {
            return Err(Error::EmptySet);
        }
        let mut memo: HashMap<u32, Option<Rc<CubeInfo>>> = HashMap::new();
        let cube = self
            .best_cube(root, &mut memo)
            .expect("non-empty set has a cube");
        let mut zero = BTreeSet::new();
        let mut one = BTreeSet::new();
        for &(var, val) in &cube.literals {
            if val {
                one.insert(var as usize);
            } else {
                zero.insert(var as usize);
            }
        }
        Schema::new(self.n, zero, one)
    }

    fn best_cube(
        &mut self,
        f: u32,
        memo: &mut HashMap<u32, Option<Rc<CubeInfo>>>,
    ) -> Option<Rc<CubeInfo>> {
        if f == FALSE {
            return None;
        }
        if f == TRUE {
            return Some(Rc::new(CubeInfo {
                literals: Vec::new(),
            }));
        }
        if let Some(r) = memo.get(&f) {
            return r.clone();
        }
        let node = self.nodes[f as usize];
        let zero_branch = self
            .best_cube(node.lo, memo)
            .map(|c| Rc::new(c.prefixed(node.var, false)));
        let one_branch = self
            .best_cube(node.hi, memo)
            .map(|c| Rc::new(c.prefixed(node.var, true)));
        let both = self.bin(OP_AND, node.lo, node.hi);
        let free_branch = self.best_cube(both, memo);
        let mut best: Option<Rc<CubeInfo>> = None;
        for cand in [zero_branch, one_branch, free_branch].into_iter().flatten() {
            best = Some(match best {
                None => cand,
                Some(cur) => {
                    if cand.beats(&cur) {
                        cand
                    } else {
                        cur
                    }
                }
            });
        }
        memo.insert(f, best.clone());
        best
    }

    /// Greedy disjoint cube cover: repeatedly extracts the largest cube of
    /// what remains. The cubes partition `set`; order is discovery order.
    pub fn schema_cover(&mut self, set: StateSet) -> Vec<Schema> {
        let mut rest = set;
        let mut out = Vec::new();
        while !self.is_empty(rest) {
            let sch = self.largest_cube(rest).expect("non-empty remainder");
            let cube = self.from_schema(&sch);
            rest = self.difference(rest, cube);
            out.push(sch);
        }
        out
    }
}

/// A cube as a sorted literal list; fewer literals means a larger cube.
#[derive(Debug, Clone)]
struct CubeInfo {
    literals: Vec<(u32, bool)>,
}

impl CubeInfo {
    fn prefixed(&self, var: u32, val: bool) -> CubeInfo {
        let mut literals = Vec::with_capacity(self.literals.len() + 1);
        literals.push((var, val));
        literals.extend_from_slice(&self.literals);
        CubeInfo { literals }
    }

    /// True when `self` is preferred over `other`: fewer literals first,
    /// then the smaller pattern with position ranks 0 < 1 < don't-care.
    fn beats(&self, other: &CubeInfo) -> bool {
        if self.literals.len() != other.literals.len() {
            return self.literals.len() < other.literals.len();
        }
        let rank = |lit: Option<bool>| match lit {
            Some(false) => 0u8,
            Some(true) => 1,
            None => 2,
        };
        let mut a = self.literals.iter().peekable();
        let mut b = other.literals.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return false,
                (pa, pb) => {
                    let va = pa.map(|&&(v, _)| v).unwrap_or(u32::MAX);
                    let vb = pb.map(|&&(v, _)| v).unwrap_or(u32::MAX);
                    let var = va.min(vb);
                    let la = if va == var {
                        rank(a.next().map(|&(_, x)| x))
                    } else {
                        rank(None)
                    };
                    let lb = if vb == var {
                        rank(b.next().map(|&(_, x)| x))
                    } else {
                        rank(None)
                    };
                    if la != lb {
                        return la < lb;
                    }
                }
            }
        }
    }
}

/// A network compiled to per-node update-function BDDs, with the
/// asynchronous image operators.
pub struct SymbolicNetwork {
    network: BooleanNetwork,
    functions: Vec<StateSet>,
    inputs: InputClassification,
}

impl SymbolicNetwork {
    pub fn new(universe: &mut Universe, network: BooleanNetwork) -> SymbolicNetwork {
        assert_eq!(
            universe.n(),
            network.n(),
            "universe and network widths differ"
        );
        let functions = network
            .functions()
            .iter()
            .map(|f| expr_to_set(universe, f))
            .collect();
        let inputs = network.classify_inputs();
        SymbolicNetwork {
            network,
            functions,
            inputs,
        }
    }

    pub fn network(&self) -> &BooleanNetwork {
        &self.network
    }

    pub fn inputs(&self) -> &InputClassification {
        &self.inputs
    }

    /// States where f_i holds, as a set over the state variables.
    pub fn function_set(&self, i: usize) -> StateSet {
        self.functions[i]
    }

    /// States where every specified input node already holds its constant.
    /// All target-control analyses quantify initial states over this space.
    pub fn admissible(&self, u: &mut Universe) -> StateSet {
        let mut acc = u.full();
        for (&i, &v) in &self.inputs.constants {
            let lit = u.literal(i, v);
            acc = u.intersect(acc, lit);
        }
        acc
    }

    /// One-step successors under asynchronous update, including the hd = 0
    /// selfloop steps where some f_i agrees with the current value.
    pub fn async_post(&self, u: &mut Universe, set: StateSet) -> StateSet {
        let mut out = u.empty();
        for (i, &f) in self.functions.iter().enumerate() {
            let x = u.literal(i, true);
            let nx = u.literal(i, false);
            let nf = u.complement(f);

            // Rising flip: f_i = 1 while x_i = 0.
            let rising = u.intersect(set, f);
            let rising = u.intersect(rising, nx);
            let rising = {
                let r = u.exists_raw(u.chk(rising), i as u32);
                let r = u.wrap(r);
                u.intersect(r, x)
            };
            out = u.union(out, rising);

            // Falling flip: f_i = 0 while x_i = 1.
            let falling = u.intersect(set, nf);
            let falling = u.intersect(falling, x);
            let falling = {
                let r = u.exists_raw(u.chk(falling), i as u32);
                let r = u.wrap(r);
                u.intersect(r, nx)
            };
            out = u.union(out, falling);

            // Selfloop: f_i agrees with x_i.
            let agree = u.symmetric_difference(f, x);
            let agree = u.complement(agree);
            let selfloop = u.intersect(set, agree);
            out = u.union(out, selfloop);
        }
        out
    }

    /// One-step predecessors under asynchronous update.
    pub fn async_pre(&self, u: &mut Universe, set: StateSet) -> StateSet {
        let mut out = u.empty();
        for (i, &f) in self.functions.iter().enumerate() {
            let x = u.literal(i, true);
            let nx = u.literal(i, false);
            let nf = u.complement(f);

            // Predecessors that rise on x_i: successor has x_i = 1.
            let tgt = u.intersect(set, x);
            let tgt = {
                let r = u.exists_raw(u.chk(tgt), i as u32);
                u.wrap(r)
            };
            let pred = u.intersect(tgt, nx);
            let pred = u.intersect(pred, f);
            out = u.union(out, pred);

            // Predecessors that fall on x_i: successor has x_i = 0.
            let tgt = u.intersect(set, nx);
            let tgt = {
                let r = u.exists_raw(u.chk(tgt), i as u32);
                u.wrap(r)
            };
            let pred = u.intersect(tgt, x);
            let pred = u.intersect(pred, nf);
            out = u.union(out, pred);

            // Selfloop predecessors.
            let agree = u.symmetric_difference(f, x);
            let agree = u.complement(agree);
            let selfloop = u.intersect(set, agree);
            out = u.union(out, selfloop);
        }
        out
    }
}

fn expr_to_set(u: &mut Universe, e: &BoolExpr) -> StateSet {
    match e {
        BoolExpr::Const(true) => u.full(),
        BoolExpr::Const(false) => u.empty(),
        BoolExpr::Var(i) => u.literal(*i, true),
        BoolExpr::Not(inner) => {
            let s = expr_to_set(u, inner);
            u.complement(s)
        }
        BoolExpr::And(es) => {
            let mut acc = u.full();
            for e in es {
                let s = expr_to_set(u, e);
                acc = u.intersect(acc, s);
            }
            acc
        }
        BoolExpr::Or(es) => {
            let mut acc = u.empty();
            for e in es {
                let s = expr_to_set(u, e);
                acc = u.union(acc, s);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    fn example() -> (Universe, SymbolicNetwork) {
        let bn = parse_network("targets, factors\nx1, x2\nx2, x1\nx3, x2 & x3\n").unwrap();
        let mut u = Universe::new(3);
        let sym = SymbolicNetwork::new(&mut u, bn);
        (u, sym)
    }

    fn set_of(u: &mut Universe, states: &[&str]) -> StateSet {
        let mut acc = u.empty();
        for s in states {
            let st = State::from_bitstring(s).unwrap();
            let one = u.from_state(&st);
            acc = u.union(acc, one);
        }
        acc
    }

    fn states_of(u: &mut Universe, set: StateSet) -> Vec<String> {
        u.to_states(set, 1 << 20)
            .unwrap()
            .into_iter()
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn basic_set_algebra() {
        let mut u = Universe::new(3);
        let a = set_of(&mut u, &["000", "001"]);
        let empty = u.empty();
        let ua = u.union(a, empty);
        assert!(u.set_eq(ua, a));
        let ca = u.complement(a);
        let inter = u.intersect(a, ca);
        assert!(u.is_empty(inter));
        let b = set_of(&mut u, &["001"]);
        let d = u.difference(a, b);
        assert_eq!(states_of(&mut u, d), ["000"]);
    }

    #[test]
    fn counts_are_exact() {
        let mut u = Universe::new(3);
        let full = u.full();
        assert_eq!(u.count(full), 8);
        let a = set_of(&mut u, &["000", "001"]);
        assert_eq!(u.count(a), 2);
        let empty = u.empty();
        assert_eq!(u.count(empty), 0);
    }

    #[test]
    fn schema_denotation() {
        let mut u = Universe::new(3);
        let sch = Schema::from_pattern("00*").unwrap();
        let set = u.from_schema(&sch);
        assert_eq!(states_of(&mut u, set), ["000", "001"]);
        assert_eq!(u.count(set), sch.denoted_count());

        let all_free = Schema::from_pattern("***").unwrap();
        let set = u.from_schema(&all_free);
        let full = u.full();
        assert!(u.set_eq(set, full));

        let sch = Schema::from_pattern("10*").unwrap();
        let set = u.from_schema(&sch);
        assert_eq!(states_of(&mut u, set), ["100", "101"]);
    }

    #[test]
    fn enumeration_respects_limit() {
        let mut u = Universe::new(4);
        let full = u.full();
        assert!(matches!(
            u.to_states(full, 7),
            Err(Error::EnumerationOverflow { count: 16, .. })
        ));
        assert_eq!(u.to_states(full, 16).unwrap().len(), 16);
    }

    #[test]
    fn async_post_examples() {
        let (mut u, sym) = example();
        let s = set_of(&mut u, &["110"]);
        let post = sym.async_post(&mut u, s);
        assert_eq!(states_of(&mut u, post), ["110"]);

        let s = set_of(&mut u, &["001"]);
        let post = sym.async_post(&mut u, s);
        assert_eq!(states_of(&mut u, post), ["000", "001"]);

        let empty = u.empty();
        let post = sym.async_post(&mut u, empty);
        assert!(u.is_empty(post));
    }

    #[test]
    fn async_pre_examples() {
        let (mut u, sym) = example();
        let s = set_of(&mut u, &["000"]);
        let pre = sym.async_pre(&mut u, s);
        assert_eq!(states_of(&mut u, pre), ["000", "001", "010", "100"]);

        let full = u.full();
        let pre = sym.async_pre(&mut u, full);
        assert!(u.set_eq(pre, full));

        let empty = u.empty();
        let pre = sym.async_pre(&mut u, empty);
        assert!(u.is_empty(pre));
    }

    #[test]
    fn restrict_and_apply_control() {
        let mut u = Universe::new(3);
        let c = Control::from_literals([(1, false)]).unwrap();
        let full = u.full();
        let restricted = u.restrict_to_control(full, &c);
        assert_eq!(states_of(&mut u, restricted), ["000", "001", "100", "101"]);

        let s = set_of(&mut u, &["000", "110"]);
        let restricted = u.restrict_to_control(s, &c);
        assert_eq!(states_of(&mut u, restricted), ["000"]);

        let id = u.restrict_to_control(s, &Control::empty());
        assert!(u.set_eq(id, s));

        let c2 = Control::from_literals([(0, false), (1, false)]).unwrap();
        let forced = u.apply_control_set(&c2, full);
        assert_eq!(states_of(&mut u, forced), ["000", "001"]);

        let single = set_of(&mut u, &["110"]);
        let forced = u.apply_control_set(&c, single);
        assert_eq!(states_of(&mut u, forced), ["100"]);
    }

    #[test]
    fn largest_cube_examples() {
        let mut u = Universe::new(3);
        let a = set_of(&mut u, &["000", "001"]);
        assert_eq!(u.largest_cube(a).unwrap().pattern(), "00*");

        let full = u.full();
        assert_eq!(u.largest_cube(full).unwrap().pattern(), "***");

        let wb = set_of(&mut u, &["000", "001", "010", "011", "101", "100"]);
        assert_eq!(u.largest_cube(wb).unwrap().pattern(), "0**");

        let empty = u.empty();
        assert!(matches!(u.largest_cube(empty), Err(Error::EmptySet)));
    }

    #[test]
    fn schema_cover_examples() {
        let mut u = Universe::new(3);
        let wb = set_of(&mut u, &["000", "001", "010", "011", "101", "100"]);
        let cover: Vec<String> = u.schema_cover(wb).iter().map(Schema::pattern).collect();
        assert_eq!(cover, ["0**", "10*"]);

        let sb = set_of(&mut u, &["000", "001"]);
        let cover: Vec<String> = u.schema_cover(sb).iter().map(Schema::pattern).collect();
        assert_eq!(cover, ["00*"]);

        let single = set_of(&mut u, &["101"]);
        let cover = u.schema_cover(single);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover[0].pattern(), "101");
        assert_eq!(cover[0].num_dont_care(), 0);

        let empty = u.empty();
        assert!(u.schema_cover(empty).is_empty());
    }

    #[test]
    #[should_panic(expected = "universe other than its own")]
    fn cross_universe_use_panics() {
        let mut u1 = Universe::new(3);
        let u2 = Universe::new(3);
        let a = u1.full();
        let b = u2.full();
        let _ = u1.union(a, b);
    }
}

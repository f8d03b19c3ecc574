//! Explicit-state reference implementation for small networks: the full
//! transition graph, attractors by strongly-connected-component analysis,
//! basins by graph search, fair-path reachability, control validation and
//! brute-force minimal control search. Everything here is deliberately
//! independent of the symbolic engine so the two can cross-check each other.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::control::ControlMode;
use crate::error::{Error, Result};
use crate::model::{BoolExpr, BooleanNetwork, Control, State};

/// Hard bound on explicit enumeration: 2^20 states.
pub const MAX_EXPLICIT_NODES: usize = 20;

/// Truth columns of every update function, indexed by state mask. Node 0
/// occupies the highest mask bit so numeric order equals lexicographic
/// order of the bitstrings.
struct Columns {
    n: usize,
    values: Vec<Vec<bool>>,
}

fn node_bit(n: usize, i: usize) -> u32 {
    1u32 << (n - 1 - i)
}

fn mask_bits(n: usize, mask: u32) -> Vec<bool> {
    (0..n).map(|i| mask & node_bit(n, i) != 0).collect()
}

impl Columns {
    fn build(bn: &BooleanNetwork) -> Result<Columns> {
        let n = bn.n();
        if n > MAX_EXPLICIT_NODES {
            return Err(Error::TooLarge {
                n,
                max: MAX_EXPLICIT_NODES,
            });
        }
        let total = 1usize << n;
        let mut values = vec![vec![false; total]; n];
        for mask in 0..total as u32 {
            let bits = mask_bits(n, mask);
            for (i, f) in bn.functions().iter().enumerate() {
                values[i][mask as usize] = f.eval(&bits);
            }
        }
        Ok(Columns { n, values })
    }

    fn with_control(&self, c: &Control) -> Columns {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, col)| match c.fixes(i) {
                Some(v) => vec![v; col.len()],
                None => col.clone(),
            })
            .collect();
        Columns {
            n: self.n,
            values,
        }
    }

    /// Constants of specified inputs, probed semantically like the model
    /// layer but from the truth columns.
    fn admissible_constants(&self, bn: &BooleanNetwork, c: Option<&Control>) -> Vec<(usize, bool)> {
        let bn = match c {
            Some(c) => bn.under_control(c),
            None => bn.clone(),
        };
        let ic = bn.classify_inputs();
        ic.constants.iter().map(|(&i, &v)| (i, v)).collect()
    }
}

/// The exact asynchronous transition graph over the admissible states.
pub struct ExplicitGraph {
    n: usize,
    states: Vec<u32>,
    index: HashMap<u32, usize>,
    succs: Vec<Vec<usize>>,
}

impl ExplicitGraph {
    /// Builds the graph of `bn` over its admissible space.
    pub fn build(bn: &BooleanNetwork) -> Result<ExplicitGraph> {
        let cols = Columns::build(bn)?;
        let constants = cols.admissible_constants(bn, None);
        Ok(Self::from_columns(&cols, &constants))
    }

    fn from_columns(cols: &Columns, constants: &[(usize, bool)]) -> ExplicitGraph {
        let n = cols.n;
        let total = 1u32 << n;
        let admissible = |mask: u32| {
            constants
                .iter()
                .all(|&(i, v)| (mask & node_bit(n, i) != 0) == v)
        };
        let states: Vec<u32> = (0..total).filter(|&m| admissible(m)).collect();
        let index: HashMap<u32, usize> =
            states.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut succs = Vec::with_capacity(states.len());
        for &mask in &states {
            let mut out = Vec::new();
            let mut selfloop = false;
            for i in 0..n {
                let bit = node_bit(n, i);
                let cur = mask & bit != 0;
                let next = cols.values[i][mask as usize];
                if next == cur {
                    selfloop = true;
                } else {
                    let flipped = mask ^ bit;
                    out.push(index[&flipped]);
                }
            }
            if selfloop {
                out.push(index[&mask]);
            }
            out.sort_unstable();
            out.dedup();
            succs.push(out);
        }
        ExplicitGraph {
            n,
            states,
            index,
            succs,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn contains(&self, mask: u32) -> bool {
        self.index.contains_key(&mask)
    }

    pub fn successors(&self, mask: u32) -> Vec<u32> {
        self.succs[self.index[&mask]]
            .iter()
            .map(|&k| self.states[k])
            .collect()
    }

    pub fn state_mask(&self, s: &State) -> u32 {
        assert_eq!(s.len(), self.n);
        s.bits
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| if b { m | node_bit(self.n, i) } else { m })
    }

    pub fn mask_state(&self, mask: u32) -> State {
        State::new(mask_bits(self.n, mask))
    }

    /// Terminal strongly connected components, ordered by smallest member.
    pub fn attractors(&self) -> Vec<BTreeSet<u32>> {
        let sccs = self.tarjan();
        let mut terminal: Vec<BTreeSet<u32>> = Vec::new();
        for scc in &sccs {
            let members: BTreeSet<usize> = scc.iter().copied().collect();
            let escapes = scc
                .iter()
                .any(|&v| self.succs[v].iter().any(|s| !members.contains(s)));
            if !escapes {
                terminal.push(scc.iter().map(|&v| self.states[v]).collect());
            }
        }
        terminal.sort_by_key(|a| *a.iter().next().expect("SCC is non-empty"));
        terminal
    }

    /// Iterative Tarjan; recursion would overflow on 2^20-state graphs.
    fn tarjan(&self) -> Vec<Vec<usize>> {
        let m = self.states.len();
        const UNSET: usize = usize::MAX;
        let mut ids = vec![UNSET; m];
        let mut low = vec![0usize; m];
        let mut on_stack = vec![false; m];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_id = 0usize;
        let mut sccs: Vec<Vec<usize>> = Vec::new();
        // Call frames: (vertex, next successor position).
        let mut frames: Vec<(usize, usize)> = Vec::new();
        for root in 0..m {
            if ids[root] != UNSET {
                continue;
            }
            frames.push((root, 0));
            while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
                if *pos == 0 {
                    ids[v] = next_id;
                    low[v] = next_id;
                    next_id += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = self.succs[v].get(*pos) {
                    *pos += 1;
                    if ids[w] == UNSET {
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(ids[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == ids[v] {
                        let mut scc = Vec::new();
                        loop {
                            let w = stack.pop().expect("Tarjan stack underflow");
                            on_stack[w] = false;
                            scc.push(w);
                            if w == v {
                                break;
                            }
                        }
                        sccs.push(scc);
                    }
                }
            }
        }
        sccs
    }

    fn backward_reach(&self, seed: &BTreeSet<u32>, allow: impl Fn(usize) -> bool) -> Vec<bool> {
        let m = self.states.len();
        // Reverse adjacency on demand.
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (v, out) in self.succs.iter().enumerate() {
            for &w in out {
                preds[w].push(v);
            }
        }
        let mut hit = vec![false; m];
        let mut queue: Vec<usize> = Vec::new();
        for mask in seed {
            if let Some(&k) = self.index.get(mask) {
                hit[k] = true;
                queue.push(k);
            }
        }
        while let Some(v) = queue.pop() {
            for &p in &preds[v] {
                if !hit[p] && allow(p) {
                    hit[p] = true;
                    queue.push(p);
                }
            }
        }
        hit
    }

    /// States with some path into `target`.
    pub fn weak_basin(&self, target: &BTreeSet<u32>) -> BTreeSet<u32> {
        let hit = self.backward_reach(target, |_| true);
        self.collect(&hit)
    }

    /// States that can reach `target` and cannot reach any other terminal
    /// strongly connected component.
    pub fn strong_basin(&self, target: &BTreeSet<u32>) -> BTreeSet<u32> {
        let wb = self.weak_basin(target);
        let mut out = wb.clone();
        for other in self.attractors() {
            if other.is_disjoint(target) {
                for mask in self.weak_basin(&other) {
                    out.remove(&mask);
                }
            }
        }
        out
    }

    /// States from which every fair path reaches `target`: they can reach it
    /// and cannot reach, along a target-avoiding path, a terminal strongly
    /// connected component disjoint from it.
    pub fn fair_reach(&self, target: &BTreeSet<u32>) -> BTreeSet<u32> {
        let can = self.backward_reach(target, |_| true);
        let mut bad = BTreeSet::new();
        for scc in self.attractors() {
            if scc.is_disjoint(target) {
                bad.extend(scc);
            }
        }
        let doomed = self.backward_reach(&bad, |v| !target.contains(&self.states[v]));
        let mut out = BTreeSet::new();
        for (k, &mask) in self.states.iter().enumerate() {
            if can[k] && !doomed[k] {
                out.insert(mask);
            }
        }
        out
    }

    fn collect(&self, hit: &[bool]) -> BTreeSet<u32> {
        self.states
            .iter()
            .enumerate()
            .filter(|&(k, _)| hit[k])
            .map(|(_, &m)| m)
            .collect()
    }
}

fn apply_control_mask(n: usize, c: &Control, mask: u32) -> u32 {
    let mut out = mask;
    for (i, v) in c.literals() {
        let bit = node_bit(n, i);
        if v {
            out |= bit;
        } else {
            out &= !bit;
        }
    }
    out
}

/// Ground-truth validity of a control for the given mode and target
/// attractor, evaluated on the explicit graphs.
pub fn oracle_validate_control(
    bn: &BooleanNetwork,
    mode: ControlMode,
    c: &Control,
    target: &BTreeSet<u32>,
) -> Result<bool> {
    let cols = Columns::build(bn)?;
    let constants = cols.admissible_constants(bn, None);
    let graph = ExplicitGraph::from_columns(&cols, &constants);
    validate_with(&cols, &graph, bn, mode, c, target)
}

fn validate_with(
    cols: &Columns,
    graph: &ExplicitGraph,
    bn: &BooleanNetwork,
    mode: ControlMode,
    c: &Control,
    target: &BTreeSet<u32>,
) -> Result<bool> {
    let n = graph.n();
    match mode {
        ControlMode::Itc => {
            let sb = graph.strong_basin(target);
            Ok(graph
                .states()
                .iter()
                .all(|&s| sb.contains(&apply_control_mask(n, c, s))))
        }
        ControlMode::Ttc => {
            let sb = graph.strong_basin(target);
            let consistent = |m: u32| apply_control_mask(n, c, m) == m;
            let sb_c: BTreeSet<u32> = sb.into_iter().filter(|&m| consistent(m)).collect();
            if sb_c.is_empty() {
                return Ok(false);
            }
            let ccols = cols.with_control(c);
            let cconsts = ccols.admissible_constants(bn, Some(c));
            let cgraph = ExplicitGraph::from_columns(&ccols, &cconsts);
            let good = cgraph.fair_reach(&sb_c);
            Ok(graph
                .states()
                .iter()
                .all(|&s| good.contains(&apply_control_mask(n, c, s))))
        }
        ControlMode::Ptc => {
            let ccols = cols.with_control(c);
            let cconsts = ccols.admissible_constants(bn, Some(c));
            let cgraph = ExplicitGraph::from_columns(&ccols, &cconsts);
            if !cgraph.attractors().iter().any(|a| a == target) {
                return Ok(false);
            }
            let good = cgraph.fair_reach(target);
            Ok(graph
                .states()
                .iter()
                .all(|&s| good.contains(&apply_control_mask(n, c, s))))
        }
    }
}

/// All valid controls of minimum size at most `k_max`, by exhaustive
/// enumeration. Empty when no control of size ≤ `k_max` is valid.
pub fn brute_force_min_controls(
    bn: &BooleanNetwork,
    mode: ControlMode,
    target: &BTreeSet<u32>,
    k_max: usize,
) -> Result<Vec<Control>> {
    let cols = Columns::build(bn)?;
    let constants = cols.admissible_constants(bn, None);
    let graph = ExplicitGraph::from_columns(&cols, &constants);
    let n = bn.n();
    for k in 0..=k_max.min(n) {
        let mut found = Vec::new();
        for subset in combinations(n, k) {
            for vals in 0..(1u32 << k) {
                let lits = subset
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| (i, vals & (1 << j) != 0));
                let c = Control::from_literals(lits).expect("distinct nodes cannot conflict");
                if validate_with(&cols, &graph, bn, mode, &c, target)? {
                    found.push(c);
                }
            }
        }
        if !found.is_empty() {
            found.sort_by_key(Control::sort_key);
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Seeded random network: per node an in-degree in 1..=`max_indegree`,
/// distinct parents and a uniformly random truth table, rendered as a
/// canonical disjunctive normal form.
pub fn random_network(seed: u64, n: usize, max_indegree: usize) -> BooleanNetwork {
    assert!(n >= 1 && max_indegree >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let all: Vec<usize> = (0..n).collect();
    let mut functions = Vec::with_capacity(n);
    for _ in 0..n {
        let d = rng.gen_range(1..=max_indegree.min(n));
        let mut parents: Vec<usize> = all
            .choose_multiple(&mut rng, d)
            .copied()
            .collect();
        parents.sort_unstable();
        let rows = 1usize << d;
        let table: Vec<bool> = (0..rows).map(|_| rng.gen_bool(0.5)).collect();
        functions.push(table_to_expr(&parents, &table));
    }
    BooleanNetwork::new(names, functions).expect("generated network is well-formed")
}

fn table_to_expr(parents: &[usize], table: &[bool]) -> BoolExpr {
    if table.iter().all(|&b| !b) {
        return BoolExpr::Const(false);
    }
    if table.iter().all(|&b| b) {
        return BoolExpr::Const(true);
    }
    let d = parents.len();
    let minterms = table
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(row, _)| {
            let lits = (0..d)
                .map(|j| {
                    let v = BoolExpr::Var(parents[j]);
                    if row & (1 << j) != 0 {
                        v
                    } else {
                        BoolExpr::not(v)
                    }
                })
                .collect();
            BoolExpr::and(lits)
        })
        .collect();
    BoolExpr::or(minterms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_network;

    const EXAMPLE: &str = "targets, factors\nx1, x2\nx2, x1\nx3, x2 & x3\n";

    fn mask_of(g: &ExplicitGraph, s: &str) -> u32 {
        g.state_mask(&State::from_bitstring(s).unwrap())
    }

    fn set_of(g: &ExplicitGraph, states: &[&str]) -> BTreeSet<u32> {
        states.iter().map(|s| mask_of(g, s)).collect()
    }

    fn render(g: &ExplicitGraph, set: &BTreeSet<u32>) -> Vec<String> {
        set.iter().map(|&m| g.mask_state(m).to_string()).collect()
    }

    #[test]
    fn example_graph_structure() {
        let bn = parse_network(EXAMPLE).unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        assert_eq!(g.num_states(), 8);
        // 001 falls to 000 (and keeps selfloops on x1, x2).
        let succ = g.successors(mask_of(&g, "001"));
        assert!(succ.contains(&mask_of(&g, "000")));
        // 101 is the unique state where every function disagrees, so it is
        // the only state without a selfloop.
        for &m in g.states() {
            let has_selfloop = g.successors(m).contains(&m);
            assert_eq!(has_selfloop, m != mask_of(&g, "101"), "state {m:#b}");
        }
    }

    #[test]
    fn one_node_identity_graph() {
        let bn = parse_network("targets, factors\na, a\n").unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        assert_eq!(g.num_states(), 2);
        for &m in g.states() {
            assert_eq!(g.successors(m), vec![m]);
        }
    }

    #[test]
    fn size_bound_is_enforced() {
        let names: Vec<String> = (1..=21).map(|i| format!("x{i}")).collect();
        let fns = vec![BoolExpr::Const(false); 21];
        let bn = BooleanNetwork::new(names, fns).unwrap();
        assert!(matches!(
            ExplicitGraph::build(&bn),
            Err(Error::TooLarge { n: 21, max: 20 })
        ));
    }

    #[test]
    fn example_attractors_and_basins() {
        let bn = parse_network(EXAMPLE).unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        let atts = g.attractors();
        let rendered: Vec<Vec<String>> = atts.iter().map(|a| render(&g, a)).collect();
        assert_eq!(rendered, vec![vec!["000"], vec!["110"], vec!["111"]]);

        let a1 = &atts[0];
        assert_eq!(
            render(&g, &g.weak_basin(a1)),
            ["000", "001", "010", "011", "100", "101"]
        );
        assert_eq!(render(&g, &g.strong_basin(a1)), ["000", "001"]);
    }

    #[test]
    fn single_terminal_scc_has_full_basins() {
        let bn = parse_network("targets, factors\na, !b\nb, a\n").unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        let atts = g.attractors();
        assert_eq!(atts.len(), 1);
        assert_eq!(g.weak_basin(&atts[0]).len(), 4);
        assert_eq!(g.strong_basin(&atts[0]).len(), 4);
    }

    #[test]
    fn validate_controls_on_example() {
        let bn = parse_network(EXAMPLE).unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        let a1 = set_of(&g, &["000"]);

        let c_x1 = Control::from_literals([(0, false)]).unwrap();
        assert!(oracle_validate_control(&bn, ControlMode::Ttc, &c_x1, &a1).unwrap());
        assert!(oracle_validate_control(&bn, ControlMode::Ptc, &c_x1, &a1).unwrap());
        // Instantaneously forcing x1=0 from 110 lands on 010, outside SB.
        assert!(!oracle_validate_control(&bn, ControlMode::Itc, &c_x1, &a1).unwrap());

        let c_both = Control::from_literals([(0, false), (1, false)]).unwrap();
        assert!(oracle_validate_control(&bn, ControlMode::Itc, &c_both, &a1).unwrap());

        // The empty control cannot leave the other attractors.
        for mode in [ControlMode::Itc, ControlMode::Ttc, ControlMode::Ptc] {
            assert!(!oracle_validate_control(&bn, mode, &Control::empty(), &a1).unwrap());
        }

        // Destroying the target is never a permanent control.
        let c_x3 = Control::from_literals([(2, true)]).unwrap();
        assert!(!oracle_validate_control(&bn, ControlMode::Ptc, &c_x3, &a1).unwrap());
    }

    #[test]
    fn brute_force_on_example() {
        let bn = parse_network(EXAMPLE).unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        let a1 = set_of(&g, &["000"]);

        let ttc = brute_force_min_controls(&bn, ControlMode::Ttc, &a1, 2).unwrap();
        assert!(ttc.iter().all(|c| c.size() == 1));
        assert!(ttc.contains(&Control::from_literals([(0, false)]).unwrap()));

        let itc = brute_force_min_controls(&bn, ControlMode::Itc, &a1, 2).unwrap();
        assert!(itc.iter().all(|c| c.size() == 2));
        assert!(itc.contains(&Control::from_literals([(0, false), (1, false)]).unwrap()));
    }

    #[test]
    fn brute_force_single_attractor_needs_nothing() {
        let bn = parse_network("targets, factors\na, !b\nb, a\n").unwrap();
        let g = ExplicitGraph::build(&bn).unwrap();
        let target: BTreeSet<u32> = g.attractors().remove(0);
        for mode in [ControlMode::Itc, ControlMode::Ttc, ControlMode::Ptc] {
            let found = brute_force_min_controls(&bn, mode, &target, 2).unwrap();
            assert_eq!(found, vec![Control::empty()]);
        }
    }

    #[test]
    fn random_networks_are_reproducible() {
        let a = random_network(7, 6, 3);
        let b = random_network(7, 6, 3);
        assert_eq!(a, b);
        let c = random_network(8, 6, 3);
        assert_ne!(a, c);
        assert_eq!(a.n(), 6);
        for i in 0..a.n() {
            let parents = a.parents(i);
            assert!(parents.len() <= 3);
        }
    }
}

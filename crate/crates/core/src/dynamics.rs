//! Asynchronous dynamics: reachability closures, attractor detection and
//! basins of attraction, all over a caller-supplied state space (normally the
//! admissible space, which is forward-closed).

use crate::error::{Error, Result};
use crate::symbolic::{StateSet, SymbolicNetwork, Universe};

/// Shape of an attractor of the asynchronous transition system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractorKind {
    /// A single fixed-point state.
    Singleton,
    /// A cyclic attractor in which every state has exactly one successor
    /// besides itself.
    SimpleLoop,
    /// A cyclic attractor with branching inside the cycle.
    ComplexLoop,
}

impl AttractorKind {
    pub fn label(&self) -> &'static str {
        match self {
            AttractorKind::Singleton => "singleton",
            AttractorKind::SimpleLoop => "simple-loop",
            AttractorKind::ComplexLoop => "complex-loop",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AttractorInfo {
    /// Position in the deterministic ordering (by smallest member state).
    pub index: usize,
    pub states: StateSet,
    pub kind: AttractorKind,
}

/// All states reachable from `seed` without leaving `space`.
pub fn forward_closure(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    seed: StateSet,
    space: StateSet,
) -> StateSet {
    let mut reach = u.intersect(seed, space);
    loop {
        let post = sym.async_post(u, reach);
        let post = u.intersect(post, space);
        let next = u.union(reach, post);
        if u.set_eq(next, reach) {
            return reach;
        }
        reach = next;
    }
}

/// All states of `space` that can reach `seed` without leaving `space`.
pub fn backward_closure(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    seed: StateSet,
    space: StateSet,
) -> StateSet {
    let mut reach = u.intersect(seed, space);
    loop {
        let pre = sym.async_pre(u, reach);
        let pre = u.intersect(pre, space);
        let next = u.union(reach, pre);
        if u.set_eq(next, reach) {
            return reach;
        }
        reach = next;
    }
}

/// Weak basin of `target` within `space`: states with some path into the
/// target. Least fixpoint of backward steps, seeded with the target itself.
pub fn weak_basin(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    space: StateSet,
) -> StateSet {
    backward_closure(u, sym, target, space)
}

/// Strong basin of `target` within `space`: states from which every path
/// stays inside the weak basin, so the target is reached no matter how
/// update order is resolved. Requires the target to be forward-closed.
pub fn strong_basin(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    space: StateSet,
) -> Result<StateSet> {
    let inside = u.intersect(target, space);
    if !u.set_eq(inside, target) {
        return Err(Error::NotForwardClosed);
    }
    let post = sym.async_post(u, target);
    if !u.is_subset(post, target) {
        return Err(Error::NotForwardClosed);
    }
    let mut basin = weak_basin(u, sym, target, space);
    loop {
        // Drop states with an escaping transition into space \ basin.
        let outside = u.difference(space, basin);
        let escaping = sym.async_pre(u, outside);
        let escaping = u.intersect(escaping, basin);
        if u.is_empty(escaping) {
            return Ok(basin);
        }
        basin = u.difference(basin, escaping);
    }
}

/// True when `set` is an attractor (a terminal strongly connected component)
/// of the transition system restricted to `space`.
pub fn is_attractor(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    set: StateSet,
    space: StateSet,
) -> bool {
    if u.is_empty(set) || !u.is_subset(set, space) {
        return false;
    }
    let post = sym.async_post(u, set);
    let post = u.intersect(post, space);
    if !u.is_subset(post, set) {
        return false;
    }
    let seed_state = u.smallest_state(set).expect("set is non-empty");
    let seed = u.from_state(&seed_state);
    let fwd = forward_closure(u, sym, seed, set);
    let bwd = backward_closure(u, sym, seed, set);
    u.set_eq(fwd, set) && u.set_eq(bwd, set)
}

fn classify(u: &mut Universe, sym: &SymbolicNetwork, attractor: StateSet) -> AttractorKind {
    let size = u.count(attractor);
    if size == 1 {
        return AttractorKind::Singleton;
    }
    // Count flip transitions leaving each state; a simple loop has exactly
    // one per state.
    let mut flips: u128 = 0;
    for i in 0..sym.network().n() {
        let f = sym.function_set(i);
        let x = u.literal(i, true);
        let disagree = u.symmetric_difference(f, x);
        let flipping = u.intersect(attractor, disagree);
        flips += u.count(flipping);
    }
    if flips == size {
        AttractorKind::SimpleLoop
    } else {
        AttractorKind::ComplexLoop
    }
}

/// All attractors of the transition system restricted to `space`, ordered by
/// their lexicographically smallest state.
pub fn compute_attractors(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    space: StateSet,
) -> Vec<AttractorInfo> {
    let mut remaining = space;
    let mut found: Vec<StateSet> = Vec::new();
    while let Some(seed_state) = u.smallest_state(remaining) {
        let mut seed = u.from_state(&seed_state);
        let attractor = loop {
            let fwd = forward_closure(u, sym, seed, space);
            let bwd = backward_closure(u, sym, seed, fwd);
            let escaped = u.difference(fwd, bwd);
            if u.is_empty(escaped) {
                break fwd;
            }
            let next_seed = u.smallest_state(escaped).expect("non-empty remainder");
            seed = u.from_state(&next_seed);
        };
        let basin = weak_basin(u, sym, attractor, space);
        remaining = u.difference(remaining, basin);
        found.push(attractor);
    }
    found.sort_by_key(|&a| u.smallest_state(a).expect("attractor is non-empty"));
    found
        .into_iter()
        .enumerate()
        .map(|(index, states)| AttractorInfo {
            index,
            states,
            kind: classify(u, sym, states),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_network, State};

    fn setup(model: &str) -> (Universe, SymbolicNetwork) {
        let bn = parse_network(model).unwrap();
        let mut u = Universe::new(bn.n());
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

    const EXAMPLE: &str = "targets, factors\nx1, x2\nx2, x1\nx3, x2 & x3\n";

    #[test]
    fn example_attractors() {
        let (mut u, sym) = setup(EXAMPLE);
        let space = u.full();
        let atts = compute_attractors(&mut u, &sym, space);
        assert_eq!(atts.len(), 3);
        let rendered: Vec<(Vec<String>, AttractorKind)> = atts
            .iter()
            .map(|a| (states_of(&mut u, a.states), a.kind))
            .collect();
        assert_eq!(
            rendered,
            vec![
                (vec!["000".to_string()], AttractorKind::Singleton),
                (vec!["110".to_string()], AttractorKind::Singleton),
                (vec!["111".to_string()], AttractorKind::Singleton),
            ]
        );
        assert_eq!(atts[0].index, 0);
        assert_eq!(atts[2].index, 2);
    }

    #[test]
    fn example_basins() {
        let (mut u, sym) = setup(EXAMPLE);
        let space = u.full();
        let a1 = set_of(&mut u, &["000"]);
        let wb = weak_basin(&mut u, &sym, a1, space);
        assert_eq!(
            states_of(&mut u, wb),
            ["000", "001", "010", "011", "100", "101"]
        );
        let sb = strong_basin(&mut u, &sym, a1, space).unwrap();
        assert_eq!(states_of(&mut u, sb), ["000", "001"]);

        let a2 = set_of(&mut u, &["110"]);
        let wb = weak_basin(&mut u, &sym, a2, space);
        assert_eq!(states_of(&mut u, wb), ["010", "100", "101", "110"]);
        // 010 can also fall into the basin of 000 (via x2), so only 110 is
        // guaranteed to stay.
        let sb = strong_basin(&mut u, &sym, a2, space).unwrap();
        assert_eq!(states_of(&mut u, sb), ["110"]);

        let a3 = set_of(&mut u, &["111"]);
        let sb = strong_basin(&mut u, &sym, a3, space).unwrap();
        assert_eq!(states_of(&mut u, sb), ["111"]);
    }

    #[test]
    fn strong_basin_requires_forward_closed_target() {
        let (mut u, sym) = setup(EXAMPLE);
        let space = u.full();
        let not_closed = set_of(&mut u, &["001"]);
        assert!(matches!(
            strong_basin(&mut u, &sym, not_closed, space),
            Err(Error::NotForwardClosed)
        ));
    }

    #[test]
    fn simple_loop_attractor() {
        // a and b chase each other through a four-state cycle.
        let (mut u, sym) = setup("targets, factors\na, !b\nb, a\n");
        let space = u.full();
        let atts = compute_attractors(&mut u, &sym, space);
        assert_eq!(atts.len(), 1);
        assert_eq!(atts[0].kind, AttractorKind::SimpleLoop);
        assert_eq!(u.count(atts[0].states), 4);
    }

    #[test]
    fn complex_loop_attractor() {
        // The (a, b) cycle with c chasing a; some states can flip two ways.
        let (mut u, sym) = setup("targets, factors\na, !b\nb, a\nc, a\n");
        let space = u.full();
        let atts = compute_attractors(&mut u, &sym, space);
        assert_eq!(atts.len(), 1);
        assert_eq!(atts[0].kind, AttractorKind::ComplexLoop);
        assert_eq!(u.count(atts[0].states), 8);
    }

    #[test]
    fn attractors_within_admissible_space() {
        // One specified input pins half the state space.
        let (mut u, sym) = setup("targets, factors\na, 1\nb, a & b\n");
        let space = sym.admissible(&mut u);
        assert_eq!(states_of(&mut u, space), ["10", "11"]);
        let atts = compute_attractors(&mut u, &sym, space);
        let rendered: Vec<Vec<String>> = atts
            .iter()
            .map(|a| states_of(&mut u, a.states))
            .collect();
        assert_eq!(rendered, vec![vec!["10".to_string()], vec!["11".to_string()]]);
    }

    #[test]
    fn is_attractor_checks() {
        let (mut u, sym) = setup(EXAMPLE);
        let space = u.full();
        let a1 = set_of(&mut u, &["000"]);
        assert!(is_attractor(&mut u, &sym, a1, space));
        let not_att = set_of(&mut u, &["001"]);
        assert!(!is_attractor(&mut u, &sym, not_att, space));
        let pair = set_of(&mut u, &["000", "110"]);
        // Forward-closed but not strongly connected.
        assert!(!is_attractor(&mut u, &sym, pair, space));
        let empty = u.empty();
        assert!(!is_attractor(&mut u, &sym, empty, space));
    }

    #[test]
    fn closures() {
        let (mut u, sym) = setup(EXAMPLE);
        let space = u.full();
        let s = set_of(&mut u, &["101"]);
        let fwd = forward_closure(&mut u, &sym, s, space);
        assert_eq!(
            states_of(&mut u, fwd),
            ["000", "001", "100", "101", "110", "111"]
        );
        let bwd = backward_closure(&mut u, &sym, s, space);
        assert_eq!(states_of(&mut u, bwd), ["101"]);
    }
}

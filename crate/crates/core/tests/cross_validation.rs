//! Cross-validation of the symbolic engine against the explicit-state
//! reference implementation on a corpus of seeded random networks, plus
//! exhaustive checks of the cube-extraction invariants on small universes.

use std::collections::BTreeSet;

use proptest::prelude::*;

use bnctl_core::control::{itc, ptc, schema_to_control, ttc, ControlMode};
use bnctl_core::dynamics::{compute_attractors, strong_basin, weak_basin};
use bnctl_core::model::State;
use bnctl_core::oracle::{oracle_validate_control, random_network, ExplicitGraph};
use bnctl_core::symbolic::{StateSet, SymbolicNetwork, Universe};

fn render_set(u: &mut Universe, set: StateSet) -> BTreeSet<String> {
    u.to_states(set, 1 << 20)
        .unwrap()
        .into_iter()
        .map(|s| s.to_string())
        .collect()
}

fn render_masks(g: &ExplicitGraph, set: &BTreeSet<u32>) -> BTreeSet<String> {
    set.iter().map(|&m| g.mask_state(m).to_string()).collect()
}

#[test]
fn symbolic_and_explicit_agree_on_random_corpus() {
    for seed in 0..40u64 {
        let n = 4 + (seed as usize % 7);
        let bn = random_network(seed, n, 3);
        let g = ExplicitGraph::build(&bn).unwrap();
        let mut u = Universe::new(n);
        let sym = SymbolicNetwork::new(&mut u, bn.clone());
        let space = sym.admissible(&mut u);

        // Per-state successor agreement pins the transition relation itself.
        for &mask in g.states() {
            let s = g.mask_state(mask);
            let single = u.from_state(&s);
            let post = sym.async_post(&mut u, single);
            let expect: BTreeSet<String> = g
                .successors(mask)
                .into_iter()
                .map(|m| g.mask_state(m).to_string())
                .collect();
            assert_eq!(render_set(&mut u, post), expect, "seed {seed}, state {s}");
        }

        let atts = compute_attractors(&mut u, &sym, space);
        let oracle_atts = g.attractors();
        assert_eq!(atts.len(), oracle_atts.len(), "seed {seed}");
        for (a, oa) in atts.iter().zip(&oracle_atts) {
            assert_eq!(
                render_set(&mut u, a.states),
                render_masks(&g, oa),
                "seed {seed}, attractor {}",
                a.index
            );
            let wb = weak_basin(&mut u, &sym, a.states, space);
            assert_eq!(
                render_set(&mut u, wb),
                render_masks(&g, &g.weak_basin(oa)),
                "seed {seed}, weak basin {}",
                a.index
            );
            let sb = strong_basin(&mut u, &sym, a.states, space).unwrap();
            assert_eq!(
                render_set(&mut u, sb),
                render_masks(&g, &g.strong_basin(oa)),
                "seed {seed}, strong basin {}",
                a.index
            );
        }
    }
}

#[test]
fn every_returned_control_validates_on_the_explicit_graph() {
    for seed in 0..25u64 {
        let n = 4 + (seed as usize % 5);
        let bn = random_network(1000 + seed, n, 3);
        let g = ExplicitGraph::build(&bn).unwrap();
        let mut u = Universe::new(n);
        let sym = SymbolicNetwork::new(&mut u, bn.clone());

        let space = sym.admissible(&mut u);
        let atts = compute_attractors(&mut u, &sym, space);
        for a in &atts {
            let target: BTreeSet<u32> = u
                .to_states(a.states, 1 << 20)
                .unwrap()
                .iter()
                .map(|s| g.state_mask(s))
                .collect();
            type SearchFn = for<'a, 'b> fn(
                &'a mut Universe,
                &'b SymbolicNetwork,
                StateSet,
                usize,
                usize,
            )
                -> bnctl_core::Result<bnctl_core::control::ControlResult>;
            for (mode, run) in [
                (ControlMode::Itc, itc as SearchFn),
                (ControlMode::Ttc, ttc as SearchFn),
                (ControlMode::Ptc, ptc as SearchFn),
            ] {
                let res = run(&mut u, &sym, a.states, a.index, n).unwrap();
                assert_eq!(res.mode, mode);
                for rec in &res.controls {
                    assert!(
                        oracle_validate_control(&bn, mode, &rec.control, &target).unwrap(),
                        "seed {seed}, attractor {}, mode {}, control {:?}",
                        a.index,
                        mode.label(),
                        rec.control.literals()
                    );
                    assert!(rec.control.size() <= res.threshold);
                }
                if mode == ControlMode::Itc {
                    for rec in &res.controls {
                        let full = schema_to_control(&rec.schema);
                        let dc = rec.schema.num_dont_care();
                        assert_eq!(full.size(), n - dc, "seed {seed}");
                    }
                }
            }
        }
    }
}

/// Brute-force reference for the maximum cube: scan every cube of the
/// universe, keeping the one with the most free positions; ties resolved by
/// the smaller pattern under the per-position order 0 < 1 < *.
fn brute_force_largest_cube(u: &mut Universe, set: StateSet, n: usize) -> Option<String> {
    fn rank(c: char) -> u8 {
        match c {
            '0' => 0,
            '1' => 1,
            _ => 2,
        }
    }
    let mut best: Option<(usize, String)> = None;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut digits = Vec::with_capacity(n);
        let mut rest = code;
        for _ in 0..n {
            digits.push(rest % 3);
            rest /= 3;
        }
        let pattern: String = digits
            .iter()
            .map(|&d| ['0', '1', '*'][d])
            .collect();
        let sch = bnctl_core::symbolic::Schema::from_pattern(&pattern).unwrap();
        let cube = u.from_schema(&sch);
        if u.is_empty(cube) || !u.is_subset(cube, set) {
            continue;
        }
        let free = sch.num_dont_care();
        let better = match &best {
            None => true,
            Some((bf, bp)) => {
                free > *bf
                    || (free == *bf
                        && pattern
                            .chars()
                            .map(rank)
                            .lt(bp.chars().map(rank)))
            }
        };
        if better {
            best = Some((free, pattern));
        }
    }
    best.map(|(_, p)| p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn largest_cube_is_a_maximum_cube(n in 1usize..=5, members in proptest::collection::btree_set(0u32..32, 1..=32)) {
        let members: BTreeSet<u32> = members.into_iter().filter(|&m| m < (1 << n)).collect();
        prop_assume!(!members.is_empty());
        let mut u = Universe::new(n);
        let mut set = u.empty();
        for m in &members {
            let bits: Vec<bool> = (0..n).map(|i| m & (1 << (n - 1 - i)) != 0).collect();
            let one = u.from_state(&State::new(bits));
            set = u.union(set, one);
        }
        let got = u.largest_cube(set).unwrap().pattern();
        let expect = brute_force_largest_cube(&mut u, set, n).unwrap();
        prop_assert_eq!(got, expect);
    }
}

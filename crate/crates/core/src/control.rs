//! Search for minimal target controls: node perturbations that drive the
//! network from every admissible initial state into a chosen target
//! attractor. Three application modes are supported, all driven by schema
//! covers of the target's basins. The search is sound (every returned
//! control verifies) but, like the underlying heuristics, does not guarantee
//! minimum cardinality.

use std::collections::HashSet;

use itertools::Itertools;

use crate::dynamics::{is_attractor, strong_basin, weak_basin};
use crate::error::{Error, Result};
use crate::model::Control;
use crate::symbolic::{Schema, StateSet, SymbolicNetwork, Universe};

/// Control application modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    /// Instantaneous: a one-shot state reset, then the free dynamics.
    Itc,
    /// Temporary: held until the controlled system settles, then released.
    Ttc,
    /// Permanent: held forever.
    Ptc,
}

impl ControlMode {
    pub fn label(&self) -> &'static str {
        match self {
            ControlMode::Itc => "itc",
            ControlMode::Ttc => "ttc",
            ControlMode::Ptc => "ptc",
        }
    }
}

/// How a stored control was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyOutcome {
    /// Instantaneous mode: the control is the support of a strong-basin
    /// schema, valid by construction.
    SchemaSupport,
    /// All intermediate states already lie in the target's strong basin.
    WithinStrongBasin,
    /// Established through the strong basin of the controlled network.
    ViaControlledBasin,
}

impl VerifyOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            VerifyOutcome::SchemaSupport => "schema-support",
            VerifyOutcome::WithinStrongBasin => "within-strong-basin",
            VerifyOutcome::ViaControlledBasin => "via-controlled-basin",
        }
    }
}

/// A validated control together with its provenance.
#[derive(Debug, Clone)]
pub struct ControlRecord {
    pub control: Control,
    /// The basin schema whose support seeded this control.
    pub schema: Schema,
    pub outcome: VerifyOutcome,
}

/// Search-effort counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate controls enumerated, including duplicates skipped later.
    pub candidates: usize,
    /// Verification procedure invocations (duplicates are never re-checked).
    pub verifications: usize,
}

/// Outcome of a control search for one target attractor.
#[derive(Debug, Clone)]
pub struct ControlResult {
    pub mode: ControlMode,
    pub target_index: usize,
    /// Deduplicated, ordered by (size, literal order); all sizes are within
    /// the final threshold.
    pub controls: Vec<ControlRecord>,
    /// Perturbation bound in effect at completion.
    pub threshold: usize,
    pub stats: SearchStats,
}

/// The control fixing exactly the support variables of a schema.
pub fn schema_to_control(sch: &Schema) -> Control {
    Control::new(sch.zero_set().clone(), sch.one_set().clone())
        .expect("schema off-set and on-set are disjoint")
}

fn check_target(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    space: StateSet,
) -> Result<()> {
    if !is_attractor(u, sym, target, space) {
        return Err(Error::NotAnAttractor);
    }
    Ok(())
}

/// Instantaneous target control: covers the target's strong basin with
/// schemata; each schema's support, minus specified input nodes, is a
/// control. Resetting any admissible state by such a control lands inside
/// the strong basin.
pub fn itc(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    target_index: usize,
    zeta: usize,
) -> Result<ControlResult> {
    let space = sym.admissible(u);
    check_target(u, sym, target, space)?;
    let sb = strong_basin(u, sym, target, space)?;
    let cover = u.schema_cover(sb);
    let mut zeta = zeta;
    let mut stats = SearchStats::default();
    let mut records = Vec::new();
    for sch in cover {
        stats.candidates += 1;
        let full = schema_to_control(&sch);
        let specified = &sym.inputs().specified;
        let control = Control::from_literals(
            full.literals()
                .into_iter()
                .filter(|(i, _)| !specified.contains(i)),
        )
        .expect("filtered literals cannot conflict");
        if control.size() > zeta {
            continue;
        }
        zeta = zeta.min(control.size());
        records.push(ControlRecord {
            control,
            schema: sch,
            outcome: VerifyOutcome::SchemaSupport,
        });
    }
    Ok(finish(ControlMode::Itc, target_index, records, zeta, stats))
}

/// Temporary target control search over the weak-basin schema cover.
pub fn ttc(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    target_index: usize,
    zeta: usize,
) -> Result<ControlResult> {
    search(u, sym, target, target_index, zeta, ControlMode::Ttc)
}

/// Permanent target control: same search skeleton as temporary control with
/// the permanent-mode verifier.
pub fn ptc(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    target_index: usize,
    zeta: usize,
) -> Result<ControlResult> {
    search(u, sym, target, target_index, zeta, ControlMode::Ptc)
}

fn search(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    target: StateSet,
    target_index: usize,
    zeta: usize,
    mode: ControlMode,
) -> Result<ControlResult> {
    let space = sym.admissible(u);
    check_target(u, sym, target, space)?;
    let sb = strong_basin(u, sym, target, space)?;
    let wb = weak_basin(u, sym, target, space);
    let cover = u.schema_cover(wb);
    let cover_sets: Vec<StateSet> = cover.iter().map(|sch| u.from_schema(sch)).collect();

    let inputs = sym.inputs().clone();
    let mut zeta = zeta;
    let mut stats = SearchStats::default();
    let mut records: Vec<ControlRecord> = Vec::new();
    let mut omega: HashSet<Control> = HashSet::new();
    let mut theta = vec![false; cover.len()];

    for (idx, sch) in cover.iter().enumerate() {
        if theta[idx] {
            continue;
        }
        let support = schema_to_control(sch).literals();
        // Non-specified inputs in the support are essential and always kept;
        // specified inputs are dropped; the rest is open to reduction.
        let essential: Vec<(usize, bool)> = support
            .iter()
            .copied()
            .filter(|(i, _)| inputs.nonspecified.contains(i))
            .collect();
        let reducible: Vec<(usize, bool)> = support
            .iter()
            .copied()
            .filter(|(i, _)| !inputs.inputs.contains(i))
            .collect();
        if essential.len() > zeta {
            continue;
        }
        let k_max = (zeta - essential.len()).min(reducible.len());
        let mut valid_here = false;
        let mut k = 0;
        while !valid_here && k <= k_max {
            for subset in reducible.iter().combinations(k) {
                stats.candidates += 1;
                let control = Control::from_literals(
                    essential
                        .iter()
                        .copied()
                        .chain(subset.iter().map(|&&lit| lit)),
                )
                .expect("schema literals cannot conflict");
                if !omega.insert(control.clone()) {
                    continue;
                }
                stats.verifications += 1;
                let phi = u.apply_control_set(&control, space);
                let outcome = match mode {
                    ControlMode::Ttc => verify_ttc(u, sym, &control, sb, phi)?,
                    ControlMode::Ptc => verify_ptc(u, sym, &control, target, phi)?,
                    ControlMode::Itc => unreachable!("instantaneous mode has its own routine"),
                };
                if let Some(outcome) = outcome {
                    valid_here = true;
                    zeta = zeta.min(control.size());
                    // Later schemata fully inside the intermediate states of
                    // a validated control are already handled; skip them.
                    for (z, &cover_set) in cover_sets.iter().enumerate().skip(idx + 1) {
                        if u.is_subset(cover_set, phi) {
                            theta[z] = true;
                        }
                    }
                    records.push(ControlRecord {
                        control,
                        schema: sch.clone(),
                        outcome,
                    });
                }
            }
            k += 1;
        }
    }
    Ok(finish(mode, target_index, records, zeta, stats))
}

fn finish(
    mode: ControlMode,
    target_index: usize,
    mut records: Vec<ControlRecord>,
    threshold: usize,
    stats: SearchStats,
) -> ControlResult {
    records.retain(|r| r.control.size() <= threshold);
    let mut seen = HashSet::new();
    records.retain(|r| seen.insert(r.control.clone()));
    records.sort_by_key(|r| r.control.sort_key());
    ControlResult {
        mode,
        target_index,
        controls: records,
        threshold,
        stats,
    }
}

/// Temporary-control verification. `sb` is the target's strong basin in the
/// free network, `phi` the intermediate states reached by forcing the
/// control on every admissible state. Valid when the intermediate states are
/// already in the strong basin, or when the controlled network is certain to
/// funnel them into the part of the strong basin compatible with the control
/// (from where release is safe).
pub fn verify_ttc(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    c: &Control,
    sb: StateSet,
    phi: StateSet,
) -> Result<Option<VerifyOutcome>> {
    if u.is_subset(phi, sb) {
        return Ok(Some(VerifyOutcome::WithinStrongBasin));
    }
    let sb_c = u.restrict_to_control(sb, c);
    if u.is_empty(sb_c) {
        return Ok(None);
    }
    let controlled = sym.network().under_control(c);
    let csym = SymbolicNetwork::new(u, controlled);
    let cspace = csym.admissible(u);
    let basin = strong_basin(u, &csym, sb_c, cspace)?;
    Ok(if u.is_subset(phi, basin) {
        Some(VerifyOutcome::ViaControlledBasin)
    } else {
        None
    })
}

/// Permanent-control verification: the target must survive the permanent
/// fixation and attract all intermediate states in the controlled network.
pub fn verify_ptc(
    u: &mut Universe,
    sym: &SymbolicNetwork,
    c: &Control,
    target: StateSet,
    phi: StateSet,
) -> Result<Option<VerifyOutcome>> {
    let preserved = u.restrict_to_control(target, c);
    if !u.set_eq(preserved, target) {
        return Ok(None);
    }
    let controlled = sym.network().under_control(c);
    let csym = SymbolicNetwork::new(u, controlled);
    let cspace = csym.admissible(u);
    let basin = strong_basin(u, &csym, target, cspace)?;
    Ok(if u.is_subset(phi, basin) {
        Some(VerifyOutcome::ViaControlledBasin)
    } else {
        None
    })
}

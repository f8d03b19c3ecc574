//! Stable report structures shared by the JSON and text output paths.
//! Field order is fixed by struct declaration, and every collection is
//! sorted before it gets here, so identical inputs serialize byte-identically
//! (timing aside).

use serde::Serialize;

use bnctl_core::control::{ControlResult, VerifyOutcome};
use bnctl_core::dynamics::AttractorInfo;
use bnctl_core::model::{BooleanNetwork, Control};
use bnctl_core::symbolic::Universe;

#[derive(Serialize)]
pub struct Report {
    pub model: ModelMeta,
    pub command: String,
    pub params: Params,
    pub attractors: Vec<AttractorReport>,
    pub results: Vec<ResultEntry>,
    pub timing_ms: u64,
}

#[derive(Serialize)]
pub struct ModelMeta {
    pub name: String,
    pub n: usize,
    pub nodes: Vec<String>,
}

#[derive(Serialize, Default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control: Option<Vec<Literal>>,
}

#[derive(Serialize)]
pub struct AttractorReport {
    pub index: usize,
    pub kind: String,
    pub size: u64,
    pub witness: String,
    /// Pattern of the attractor itself when it forms a single cube.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub weak_basin_size: u64,
    pub strong_basin_size: u64,
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum ResultEntry {
    Controls(ControlsReport),
    Verdict(VerifyReport),
}

#[derive(Serialize)]
pub struct ControlsReport {
    pub mode: String,
    pub target_index: usize,
    pub threshold: usize,
    pub controls: Vec<ControlReport>,
    pub candidates: usize,
    pub verifications: usize,
}

#[derive(Serialize)]
pub struct ControlReport {
    pub literals: Vec<Literal>,
    pub size: usize,
    pub schema: String,
    pub outcome: String,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub mode: String,
    pub target_index: usize,
    pub control: Vec<Literal>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    /// Size of the strong basin compatible with the control (the safe
    /// release region); reported for temporary control only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub release_region_size: Option<u64>,
}

#[derive(Serialize, Clone)]
pub struct Literal {
    pub node: String,
    pub value: u8,
}

pub fn literals_of(c: &Control, bn: &BooleanNetwork) -> Vec<Literal> {
    c.literals()
        .into_iter()
        .map(|(i, v)| Literal {
            node: bn.names()[i].clone(),
            value: u8::from(v),
        })
        .collect()
}

pub fn attractor_report(
    u: &mut Universe,
    info: &AttractorInfo,
    weak_size: u128,
    strong_size: u128,
) -> AttractorReport {
    let size = u.count(info.states);
    let witness = u
        .smallest_state(info.states)
        .expect("attractor is non-empty")
        .to_string();
    let cube = u.largest_cube(info.states).expect("attractor is non-empty");
    let schema = if cube.denoted_count() == size {
        Some(cube.pattern())
    } else {
        None
    };
    AttractorReport {
        index: info.index,
        kind: info.kind.label().to_string(),
        size: size as u64,
        witness,
        schema,
        weak_basin_size: weak_size as u64,
        strong_basin_size: strong_size as u64,
    }
}

pub fn controls_report(res: &ControlResult, bn: &BooleanNetwork) -> ControlsReport {
    ControlsReport {
        mode: res.mode.label().to_string(),
        target_index: res.target_index,
        threshold: res.threshold,
        controls: res
            .controls
            .iter()
            .map(|rec| ControlReport {
                literals: literals_of(&rec.control, bn),
                size: rec.control.size(),
                schema: rec.schema.pattern(),
                outcome: rec.outcome.label().to_string(),
            })
            .collect(),
        candidates: res.stats.candidates,
        verifications: res.stats.verifications,
    }
}

pub fn outcome_label(outcome: Option<VerifyOutcome>) -> Option<String> {
    outcome.map(|o| o.label().to_string())
}

//! `bnctl`: attractor analysis and target control of asynchronous Boolean
//! networks from the command line.

mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use bnctl_core::control::{self, ControlMode};
use bnctl_core::dynamics::{compute_attractors, strong_basin, weak_basin, AttractorInfo};
use bnctl_core::model::{parse_network, BooleanNetwork, Control, State};
use bnctl_core::oracle::ExplicitGraph;
use bnctl_core::symbolic::{StateSet, SymbolicNetwork, Universe};

use report::{Report, ResultEntry};

#[derive(Parser)]
#[command(
    name = "bnctl",
    version,
    about = "Target control of asynchronous Boolean networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Itc,
    Ttc,
    Ptc,
}

impl From<ModeArg> for ControlMode {
    fn from(m: ModeArg) -> ControlMode {
        match m {
            ModeArg::Itc => ControlMode::Itc,
            ModeArg::Ttc => ControlMode::Ttc,
            ModeArg::Ptc => ControlMode::Ptc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List the attractors of the admissible state space with their basins.
    Attractors {
        /// Model file in BoolNet format ("targets, factors").
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Search for target controls driving the network into one attractor.
    Control {
        file: PathBuf,
        /// Control application mode.
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Target attractor: index, full state bitstring, or "name=0,..."
        /// literals; must match exactly one attractor.
        #[arg(long, required_unless_present = "all_targets")]
        target: Option<String>,
        /// Upper bound on the number of perturbed nodes (default: n).
        #[arg(long)]
        threshold: Option<usize>,
        /// Run the search for every attractor in turn.
        #[arg(long, conflicts_with = "target")]
        all_targets: bool,
        /// Worker threads for --all-targets (one symbolic universe each).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Verify a user-supplied control for a target attractor.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        target: String,
        /// Control literals, e.g. "x1=0,x3=1".
        #[arg(long = "set")]
        set: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Explicit-state reference analysis (debugging aid).
    #[command(hide = true)]
    Oracle {
        file: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Attractors { file, format } => cmd_attractors(&file, format),
        Command::Control {
            file,
            mode,
            target,
            threshold,
            all_targets,
            jobs,
            format,
        } => cmd_control(
            &file,
            mode.into(),
            target.as_deref(),
            threshold,
            all_targets,
            jobs,
            format,
        ),
        Command::Verify {
            file,
            mode,
            target,
            set,
            format,
        } => cmd_verify(&file, mode.into(), &target, &set, format),
        Command::Oracle { file } => cmd_oracle(&file),
    }
}

fn load_model(path: &Path) -> Result<(String, BooleanNetwork)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let bn = parse_network(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    let ic = bn.classify_inputs();
    for &i in &ic.oscillating {
        eprintln!(
            "warning: input node {} negates itself and oscillates forever; \
             it is not treated as an input",
            bn.names()[i]
        );
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((name, bn))
}

fn model_meta(name: &str, bn: &BooleanNetwork) -> report::ModelMeta {
    report::ModelMeta {
        name: name.to_string(),
        n: bn.n(),
        nodes: bn.names().to_vec(),
    }
}

/// Parses "name=0,name=1" literal lists against the model's node names.
fn parse_literals(bn: &BooleanNetwork, text: &str) -> Result<Vec<(usize, bool)>> {
    let mut lits = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected name=value, got {part:?}"))?;
        let i = bn
            .node_index(name.trim())
            .ok_or_else(|| anyhow!("unknown node {:?}", name.trim()))?;
        let v = match value.trim() {
            "0" => false,
            "1" => true,
            other => bail!("value for {} must be 0 or 1, got {other:?}", name.trim()),
        };
        lits.push((i, v));
    }
    Ok(lits)
}

/// Resolves a target selector to the single matching attractor.
fn resolve_target(
    u: &mut Universe,
    bn: &BooleanNetwork,
    attractors: &[AttractorInfo],
    selector: &str,
) -> Result<usize> {
    let n = bn.n();
    let selector = selector.trim();
    let matches: Vec<usize> = if selector.contains('=') {
        let lits = parse_literals(bn, selector)?;
        let c = Control::from_literals(lits.iter().copied())
            .map_err(|_| anyhow!("target selector fixes a node to both 0 and 1"))?;
        let cube = u.control_cube(&c);
        attractors
            .iter()
            .filter(|a| {
                let hit = u.intersect(a.states, cube);
                !u.is_empty(hit)
            })
            .map(|a| a.index)
            .collect()
    } else if selector.len() == n && selector.chars().all(|c| c == '0' || c == '1') {
        let s = State::from_bitstring(selector)?;
        attractors
            .iter()
            .filter(|a| u.contains(a.states, &s))
            .map(|a| a.index)
            .collect()
    } else if let Ok(idx) = selector.parse::<usize>() {
        attractors
            .iter()
            .filter(|a| a.index == idx)
            .map(|a| a.index)
            .collect()
    } else {
        bail!("target selector {selector:?} is neither an index, a bitstring of length {n}, nor a literal list");
    };
    match matches.as_slice() {
        [one] => Ok(*one),
        [] => bail!("target selector {selector:?} matches no attractor"),
        many => bail!(
            "target selector {selector:?} is ambiguous: matches attractors {many:?}"
        ),
    }
}

struct Analysis {
    u: Universe,
    sym: SymbolicNetwork,
    space: StateSet,
    attractors: Vec<AttractorInfo>,
}

fn analyze(bn: &BooleanNetwork) -> Analysis {
    let mut u = Universe::new(bn.n());
    let sym = SymbolicNetwork::new(&mut u, bn.clone());
    let space = sym.admissible(&mut u);
    let attractors = compute_attractors(&mut u, &sym, space);
    Analysis {
        u,
        sym,
        space,
        attractors,
    }
}

fn attractor_reports(a: &mut Analysis) -> Vec<report::AttractorReport> {
    let mut out = Vec::new();
    for info in &a.attractors {
        let wb = weak_basin(&mut a.u, &a.sym, info.states, a.space);
        let wb_size = a.u.count(wb);
        let sb = strong_basin(&mut a.u, &a.sym, info.states, a.space)
            .expect("attractors are forward-closed");
        let sb_size = a.u.count(sb);
        out.push(report::attractor_report(&mut a.u, info, wb_size, sb_size));
    }
    out
}

fn emit(report: &Report, format: FormatArg) -> Result<()> {
    match format {
        FormatArg::Json => {
            println!("{}", serde_json::to_string_pretty(report)?);
        }
        FormatArg::Text => {
            print_text(report);
        }
    }
    Ok(())
}

fn print_text(r: &Report) {
    println!(
        "model {} ({} nodes: {})",
        r.model.name,
        r.model.n,
        r.model.nodes.join(", ")
    );
    println!("command: {}", r.command);
    for a in &r.attractors {
        let schema = a
            .schema
            .as_deref()
            .map(|s| format!(" schema {s}"))
            .unwrap_or_default();
        println!(
            "attractor #{} {} size {} witness {}{} weak-basin {} strong-basin {}",
            a.index, a.kind, a.size, a.witness, schema, a.weak_basin_size, a.strong_basin_size
        );
    }
    for entry in &r.results {
        match entry {
            ResultEntry::Controls(c) => {
                println!(
                    "{} controls for attractor #{} (threshold {}, {} candidates, {} verifications):",
                    c.mode, c.target_index, c.threshold, c.candidates, c.verifications
                );
                if c.controls.is_empty() {
                    println!("  (none)");
                }
                for ctl in &c.controls {
                    let lits: Vec<String> = ctl
                        .literals
                        .iter()
                        .map(|l| format!("{}={}", l.node, l.value))
                        .collect();
                    println!(
                        "  {{{}}} size {} schema {} [{}]",
                        lits.join(", "),
                        ctl.size,
                        ctl.schema,
                        ctl.outcome
                    );
                }
            }
            ResultEntry::Verdict(v) => {
                let lits: Vec<String> = v
                    .control
                    .iter()
                    .map(|l| format!("{}={}", l.node, l.value))
                    .collect();
                let extra = match v.release_region_size {
                    Some(sz) => format!(", release region size {sz}"),
                    None => String::new(),
                };
                println!(
                    "{} control {{{}}} for attractor #{}: {}{}",
                    v.mode,
                    lits.join(", "),
                    v.target_index,
                    if v.valid { "valid" } else { "invalid" },
                    extra
                );
            }
        }
    }
    println!("timing_ms: {}", r.timing_ms);
}

fn cmd_attractors(file: &Path, format: FormatArg) -> Result<()> {
    let start = Instant::now();
    let (name, bn) = load_model(file)?;
    let mut analysis = analyze(&bn);
    let attractors = attractor_reports(&mut analysis);
    let report = Report {
        model: model_meta(&name, &bn),
        command: "attractors".into(),
        params: report::Params::default(),
        attractors,
        results: Vec::new(),
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, format)
}

fn run_search(
    bn: &BooleanNetwork,
    mode: ControlMode,
    target_index: usize,
    zeta: usize,
) -> Result<report::ControlsReport> {
    // A fresh universe per target keeps parallel workers independent.
    let mut analysis = analyze(bn);
    let info = analysis
        .attractors
        .iter()
        .find(|a| a.index == target_index)
        .expect("target index from this attractor list");
    let res = match mode {
        ControlMode::Itc => control::itc(
            &mut analysis.u,
            &analysis.sym,
            info.states,
            target_index,
            zeta,
        )?,
        ControlMode::Ttc => control::ttc(
            &mut analysis.u,
            &analysis.sym,
            info.states,
            target_index,
            zeta,
        )?,
        ControlMode::Ptc => control::ptc(
            &mut analysis.u,
            &analysis.sym,
            info.states,
            target_index,
            zeta,
        )?,
    };
    Ok(report::controls_report(&res, bn))
}

fn cmd_control(
    file: &Path,
    mode: ControlMode,
    target: Option<&str>,
    threshold: Option<usize>,
    all_targets: bool,
    jobs: usize,
    format: FormatArg,
) -> Result<()> {
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let start = Instant::now();
    let (name, bn) = load_model(file)?;
    let zeta = threshold.unwrap_or(bn.n());
    let mut analysis = analyze(&bn);
    let targets: Vec<usize> = if all_targets {
        analysis.attractors.iter().map(|a| a.index).collect()
    } else {
        let sel = target.expect("clap enforces --target without --all-targets");
        vec![resolve_target(
            &mut analysis.u,
            &bn,
            &analysis.attractors,
            sel,
        )?]
    };
    let attractors = attractor_reports(&mut analysis);

    let mut entries: Vec<(usize, report::ControlsReport)> = if jobs > 1 && targets.len() > 1 {
        let mut collected = Vec::new();
        std::thread::scope(|scope| -> Result<()> {
            let mut handles = Vec::new();
            for chunk in targets.chunks(targets.len().div_ceil(jobs)) {
                let bn = &bn;
                handles.push(scope.spawn(move || -> Result<Vec<_>> {
                    chunk
                        .iter()
                        .map(|&t| Ok((t, run_search(bn, mode, t, zeta)?)))
                        .collect()
                }));
            }
            for h in handles {
                collected.extend(
                    h.join()
                        .map_err(|_| anyhow!("search worker panicked"))??,
                );
            }
            Ok(())
        })?;
        collected
    } else {
        targets
            .iter()
            .map(|&t| Ok((t, run_search(&bn, mode, t, zeta)?)))
            .collect::<Result<_>>()?
    };
    entries.sort_by_key(|(t, _)| *t);

    let report = Report {
        model: model_meta(&name, &bn),
        command: "control".into(),
        params: report::Params {
            mode: Some(mode.label().to_string()),
            target: target.map(|s| s.to_string()).or_else(|| {
                all_targets.then(|| "all".to_string())
            }),
            threshold: Some(zeta),
            control: None,
        },
        attractors,
        results: entries
            .into_iter()
            .map(|(_, r)| ResultEntry::Controls(r))
            .collect(),
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, format)
}

fn cmd_verify(
    file: &Path,
    mode: ControlMode,
    target: &str,
    set: &str,
    format: FormatArg,
) -> Result<()> {
    let start = Instant::now();
    let (name, bn) = load_model(file)?;
    let lits = parse_literals(&bn, set)?;
    let control = Control::from_literals(lits)
        .map_err(|e| anyhow!("invalid control: {e}"))?;
    let mut analysis = analyze(&bn);
    let target_index = resolve_target(&mut analysis.u, &bn, &analysis.attractors, target)?;
    let info = analysis.attractors[target_index];
    let u = &mut analysis.u;
    let sym = &analysis.sym;
    let space = analysis.space;

    let sb = strong_basin(u, sym, info.states, space)
        .expect("attractors are forward-closed");
    let phi = u.apply_control_set(&control, space);
    let (valid, outcome, release) = match mode {
        ControlMode::Itc => {
            let ok = u.is_subset(phi, sb);
            (
                ok,
                ok.then_some(bnctl_core::control::VerifyOutcome::WithinStrongBasin),
                None,
            )
        }
        ControlMode::Ttc => {
            let outcome = control::verify_ttc(u, sym, &control, sb, phi)?;
            let sb_c = u.restrict_to_control(sb, &control);
            let release = u.count(sb_c) as u64;
            (outcome.is_some(), outcome, Some(release))
        }
        ControlMode::Ptc => {
            let outcome = control::verify_ptc(u, sym, &control, info.states, phi)?;
            (outcome.is_some(), outcome, None)
        }
    };

    let attractors = attractor_reports(&mut analysis);
    let report = Report {
        model: model_meta(&name, &bn),
        command: "verify".into(),
        params: report::Params {
            mode: Some(mode.label().to_string()),
            target: Some(target.to_string()),
            threshold: None,
            control: Some(report::literals_of(&control, &bn)),
        },
        attractors,
        results: vec![ResultEntry::Verdict(report::VerifyReport {
            mode: mode.label().to_string(),
            target_index,
            control: report::literals_of(&control, &bn),
            valid,
            outcome: report::outcome_label(outcome),
            release_region_size: release,
        })],
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, format)
}

fn cmd_oracle(file: &Path) -> Result<()> {
    let (_, bn) = load_model(file)?;
    let g = ExplicitGraph::build(&bn)?;
    println!("states: {}", g.num_states());
    for (k, att) in g.attractors().iter().enumerate() {
        let members: Vec<String> = att.iter().map(|&m| g.mask_state(m).to_string()).collect();
        let wb = g.weak_basin(att);
        let sb = g.strong_basin(att);
        println!(
            "attractor #{k}: {{{}}} weak-basin {} strong-basin {}",
            members.join(", "),
            wb.len(),
            sb.len()
        );
    }
    Ok(())
}

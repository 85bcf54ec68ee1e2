//! Report bodies for each subcommand. Every JSON report is one object tagged
//! with `"kind"`; the layout is published in `schema/report.schema.json`.

use std::io::{self, Write};

use infocausality::analysis::{
    ic_violated, min_violating_n, mutual_info_report, sufficient_bound_n, AppendixReport, BoundConvention,
    EntropyReport, GuessRecord, MutualInfoReport, SufficientBound,
};
use infocausality::polytope::{
    classical_simulation_optimum, classify, enumerate_deterministic, no_signaling_vertices, BehaviorClass,
    ClassicalOptimum, ClassificationResult,
};
use infocausality::protocol::{run_game_with, BobQuery, BoxSource, GameConfig, GameReport, RoundRecord};
use infocausality::{BoxBehavior, Correlation};
use serde::Serialize;

use crate::reproduce::ReproductionRow;
use crate::sweep::SweepReport;

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Game(GameOutput),
    Analyze(AnalyzeReport),
    Appendix(AppendixReport),
    Polytope(PolytopeReport),
    Reproduce { rows: Vec<ReproductionRow> },
    Sweep(SweepReport),
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] infocausality::Error),
    #[error("cannot write transcript: {0}")]
    Transcript(#[from] io::Error),
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| bit(b)).collect()
}

#[derive(Debug, Serialize)]
pub struct PathOutput {
    pub level: u32,
    pub position: usize,
    pub alice_input: u8,
    pub alice_output: u8,
    pub bob_input: u8,
    pub bob_output: u8,
    /// `A⊕B ≠ a·b`.
    pub error: bool,
}

/// One transcript line for a single-message round.
#[derive(Debug, Serialize)]
pub struct TranscriptLine {
    pub data: Vec<u8>,
    pub b: usize,
    pub x: u8,
    pub path_outputs: Vec<PathOutput>,
    pub guess: u8,
    pub correct: bool,
}

/// One transcript line for an `m`-pyramid round.
#[derive(Debug, Serialize)]
pub struct MultiTranscriptLine {
    pub data: Vec<u8>,
    pub indices: Vec<usize>,
    pub messages: Vec<u8>,
    pub guesses: Vec<u8>,
    pub correct: bool,
}

fn write_line(out: &mut dyn Write, record: &RoundRecord) -> io::Result<()> {
    let text = match record {
        RoundRecord::Single(t) => serde_json::to_string(&TranscriptLine {
            data: bits(&t.data),
            b: t.b,
            x: bit(t.x),
            path_outputs: t
                .path
                .iter()
                .map(|s| PathOutput {
                    level: s.level,
                    position: s.position,
                    alice_input: bit(s.record.alice_input),
                    alice_output: bit(s.record.alice_output),
                    bob_input: bit(s.record.bob_input),
                    bob_output: bit(s.record.bob_output),
                    error: s.record.erred(),
                })
                .collect(),
            guess: bit(t.guess),
            correct: t.correct,
        }),
        RoundRecord::Multi(t) => serde_json::to_string(&MultiTranscriptLine {
            data: bits(&t.data),
            indices: t.indices.clone(),
            messages: bits(&t.messages),
            guesses: bits(&t.guesses),
            correct: t.correct,
        }),
    }?;
    writeln!(out, "{text}")
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Isotropic,
    Behavior,
}

#[derive(Debug, Serialize)]
pub struct GameOutput {
    pub source: SourceKind,
    pub behavior: BoxBehavior,
    pub bob_query: BobQuery,
    pub guess_set: Option<Vec<usize>>,
    pub report: GameReport,
    /// Entropy verdict for one pyramid at the box's `E = K/4`.
    pub entropy: EntropyReport,
    /// Single-message games only.
    pub mutual_information: Option<MutualInfoReport>,
}

/// Plays the configured game, streaming transcript lines to `transcript`.
pub fn play(
    cfg: &GameConfig,
    guess_set: Option<&[usize]>,
    mut transcript: Option<&mut dyn Write>,
) -> Result<GameOutput, RunError> {
    let single = cfg.messages == 1 && guess_set.is_none();
    let mut records = Vec::new();
    let mut io_error = None;
    let report = run_game_with(cfg, guess_set, |round| {
        if let (RoundRecord::Single(t), true) = (round, single) {
            records.push(GuessRecord::from(t));
        }
        if let (Some(out), None) = (transcript.as_deref_mut(), &io_error) {
            io_error = write_line(out, round).err();
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if let Some(out) = transcript {
        out.flush()?;
    }
    let mutual_information = if single { Some(mutual_info_report(records, cfg.data_len(), 1)?) } else { None };
    let e = Correlation::new(report.correlation.clamp(-1.0, 1.0))?;
    Ok(GameOutput {
        source: match cfg.source {
            BoxSource::Isotropic(_) => SourceKind::Isotropic,
            BoxSource::Behavior(_) => SourceKind::Behavior,
        },
        behavior: cfg.source.behavior(),
        bob_query: cfg.bob_query,
        guess_set: guess_set.map(<[usize]>::to_vec),
        entropy: ic_violated(e, cfg.depth),
        report,
        mutual_information,
    })
}

/// Flat CSV summary of a game.
#[derive(Debug, Serialize)]
pub struct GameCsvRow {
    pub n: u32,
    #[serde(rename = "E")]
    pub e: f64,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub empirical_success: f64,
    pub analytic_success: f64,
    pub standard_error: f64,
    pub entropy: f64,
    pub threshold: f64,
    pub violated: bool,
    pub mutual_information: Option<f64>,
}

impl From<&GameOutput> for GameCsvRow {
    fn from(g: &GameOutput) -> Self {
        Self {
            n: g.report.depth,
            e: g.report.correlation,
            m: g.report.messages,
            trials: g.report.trials,
            seed: g.report.seed,
            successes: g.report.successes,
            empirical_success: g.report.empirical_success,
            analytic_success: g.report.analytic_success,
            standard_error: g.report.standard_error,
            entropy: g.entropy.entropy,
            threshold: g.entropy.threshold,
            violated: g.entropy.violated,
            mutual_information: g.mutual_information.as_ref().map(|m| m.total),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(rename = "E")]
    pub e: f64,
    pub n: Option<u32>,
    /// Verdict at `n`, when one was asked for.
    pub entropy: Option<EntropyReport>,
    pub scan_n_max: u32,
    pub min_violating_n: Option<u32>,
    /// One row per depth `1..=scan_n_max`.
    pub scan: Vec<EntropyReport>,
    pub bounds: Vec<SufficientBound>,
    pub bound_note: Option<String>,
}

pub fn analyze(e: Correlation, n: Option<u32>, scan_n_max: u32, conventions: &[BoundConvention]) -> AnalyzeReport {
    let mut bounds = Vec::new();
    let mut bound_note = None;
    for &c in conventions {
        match sufficient_bound_n(e, c) {
            Ok(b) => bounds.push(b),
            Err(err) => bound_note = Some(err.to_string()),
        }
    }
    AnalyzeReport {
        e: e.get(),
        n,
        entropy: n.map(|n| ic_violated(e, n)),
        scan_n_max,
        min_violating_n: min_violating_n(e, scan_n_max),
        scan: (1..=scan_n_max).map(|n| ic_violated(e, n)).collect(),
        bounds,
        bound_note,
    }
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Local,
    PrBox,
}

#[derive(Debug, Serialize)]
pub struct Vertex {
    pub index: usize,
    pub kind: VertexKind,
    pub behavior: BoxBehavior,
    pub class: BehaviorClass,
    pub max_abs_chsh: f64,
}

#[derive(Debug, Serialize)]
pub struct Enumeration {
    pub deterministic: usize,
    pub no_signaling_local: usize,
    pub signaling: usize,
    pub pr_variants: usize,
    pub vertices: Vec<Vertex>,
}

pub fn enumeration() -> Enumeration {
    let deterministic = enumerate_deterministic();
    let local = deterministic.iter().filter(|d| d.is_no_signaling()).count();
    let vertices: Vec<Vertex> = no_signaling_vertices()
        .into_iter()
        .enumerate()
        .map(|(index, behavior)| {
            let c = classify(&behavior);
            Vertex {
                index,
                kind: if index < local { VertexKind::Local } else { VertexKind::PrBox },
                behavior,
                class: c.class,
                max_abs_chsh: c.max_abs_chsh,
            }
        })
        .collect();
    Enumeration {
        deterministic: deterministic.len(),
        no_signaling_local: local,
        signaling: deterministic.len() - local,
        pr_variants: vertices.len() - local,
        vertices,
    }
}

#[derive(Debug, Serialize)]
pub struct Classification {
    pub source: String,
    pub behavior: BoxBehavior,
    pub result: ClassificationResult,
}

#[derive(Debug, Default, Serialize)]
pub struct PolytopeReport {
    pub enumeration: Option<Enumeration>,
    pub classification: Option<Classification>,
    pub classical_optimum: Option<ClassicalOptimum>,
}

impl PolytopeReport {
    pub fn build(enumerate: bool, classify_input: Option<(String, BoxBehavior)>, optimum: bool) -> Self {
        Self {
            enumeration: enumerate.then(enumeration),
            classification: classify_input.map(|(source, behavior)| Classification {
                source,
                result: classify(&behavior),
                behavior,
            }),
            classical_optimum: optimum.then(classical_simulation_optimum),
        }
    }

    /// `key,value` rows for CSV output.
    pub fn summary(&self) -> Vec<KeyValue> {
        let mut rows = Vec::new();
        let mut push = |key: String, value: String| rows.push(KeyValue { key, value });
        if let Some(e) = &self.enumeration {
            push("deterministic".into(), e.deterministic.to_string());
            push("no_signaling_local".into(), e.no_signaling_local.to_string());
            push("signaling".into(), e.signaling.to_string());
            push("pr_variants".into(), e.pr_variants.to_string());
            push("vertices".into(), e.vertices.len().to_string());
        }
        if let Some(c) = &self.classification {
            push("classify.source".into(), c.source.clone());
            push("classify.class".into(), class_name(c.result.class));
            push("classify.no_signaling".into(), c.result.no_signaling.to_string());
            push("classify.signaling_gap".into(), c.result.signaling_gap.to_string());
            push("classify.max_abs_chsh".into(), c.result.max_abs_chsh.to_string());
        }
        if let Some(o) = &self.classical_optimum {
            push("classical_optimum".into(), o.optimum.to_string());
            push("classical_optimum.strategies".into(), o.achieving.len().to_string());
        }
        rows
    }
}

fn class_name(class: BehaviorClass) -> String {
    match serde_json::to_value(class) {
        Ok(serde_json::Value::String(s)) => s,
        _ => format!("{class:?}"),
    }
}

#[derive(Debug, Serialize)]
pub struct KeyValue {
    pub key: String,
    pub value: String,
}

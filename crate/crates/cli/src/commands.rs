//! One runner per subcommand. Each returns the JSON result, a CSV table
//! and a one-line summary.

use serde::Serialize;
use serde_json::Value;

use vacancy_core::estimators::{
    crossing_prob_sweep, estimate_e_event, estimate_lambda_d, estimate_threshold, ThresholdConfig,
};
use vacancy_core::geometry::{build_lemma1_layout, verify_knitting, Orientation, Region};
use vacancy_core::model::{sample_boolean, RngStream};
use vacancy_core::multiscale::{
    check_recursion, summability_certificate, vacancy_certificate, ScaleLadder,
};
use vacancy_core::percolation::Phase;
use vacancy_core::slice::slice_consistency;
use vacancy_core::stats::{BernoulliEstimate, Verdict};

use crate::config::ExperimentConfig;

#[cfg(test)]
pub const COMMANDS: [&str; 11] = [
    "sample",
    "sweep",
    "recursion-check",
    "summability",
    "vacancy-cert",
    "slice-check",
    "threshold",
    "lambda-d",
    "e-event",
    "layout-dump",
    "knitting-check",
];

pub struct Outcome {
    pub result: Value,
    /// CSV bytes including the header row.
    pub table: Vec<u8>,
    pub summary: String,
    /// False when a deterministic check the command exists to confirm fails.
    pub ok: bool,
}

#[derive(Debug)]
pub enum RunError {
    Core(vacancy_core::Error),
    Output(String),
}

impl From<vacancy_core::Error> for RunError {
    fn from(e: vacancy_core::Error) -> Self {
        RunError::Core(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Output(e) => write!(f, "{e}"),
        }
    }
}

type Run = Result<Outcome, RunError>;

fn to_value<T: Serialize>(v: &T) -> Result<Value, RunError> {
    serde_json::to_value(v).map_err(|e| RunError::Output(e.to_string()))
}

fn csv_of<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| RunError::Output(e.to_string()))?;
    }
    w.into_inner().map_err(|e| RunError::Output(e.to_string()))
}

fn outcome<T: Serialize, R: Serialize>(result: &T, rows: &[R], summary: String, ok: bool) -> Run {
    Ok(Outcome {
        result: to_value(result)?,
        table: csv_of(rows)?,
        summary,
        ok,
    })
}

fn ladder(c: &ExperimentConfig) -> ScaleLadder {
    ScaleLadder {
        base: c.b,
        lambda: c.lambda,
        law: c.law.clone(),
        kappa: c.kappa,
        n_max: c.n_max,
    }
}

fn snake<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn run(command: &str, c: &ExperimentConfig, stream: &RngStream) -> Run {
    match command {
        "sample" => sample(c, stream),
        "sweep" => sweep(c, stream),
        "recursion-check" => recursion(c, stream),
        "summability" => summability(c, stream),
        "vacancy-cert" => vacancy(c, stream),
        "slice-check" => slice(c, stream),
        "threshold" => threshold(c, stream),
        "lambda-d" => lambda_d(c, stream),
        "e-event" => e_event(c, stream),
        "layout-dump" => layout(c),
        "knitting-check" => knitting(c),
        other => unreachable!("unvalidated command {other}"),
    }
}

#[derive(Serialize)]
struct GrainRow {
    x: f64,
    y: f64,
    radius: f64,
}

fn sample(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let window = c.window_rect().expect("validated");
    let set = sample_boolean(&Region::Rect(window), c.lambda, &c.law, stream)?;
    let rows: Vec<GrainRow> = set
        .grains
        .iter()
        .map(|g| GrainRow {
            x: g.center.x,
            y: g.center.y,
            radius: g.radius,
        })
        .collect();
    let summary = format!("{} grains in {:?}", set.len(), c.window);
    outcome(&set, &rows, summary, true)
}

/// Columns shared by every Bernoulli estimate in a table. The csv writer
/// cannot flatten nested structs, so rows carry this as a tuple tail.
type EstimateCols = (u64, u64, f64, f64, f64);

fn estimate_cols(e: &BernoulliEstimate) -> EstimateCols {
    (e.successes, e.trials, e.point, e.ci_lo, e.ci_hi)
}

const ESTIMATE_HEADER: [&str; 5] = ["successes", "trials", "point", "ci_lo", "ci_hi"];

/// CSV with an explicit header; rows serialize as plain records.
fn csv_with_header<T: Serialize>(header: &[&str], rows: &[T]) -> Result<Vec<u8>, RunError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| RunError::Output(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| RunError::Output(e.to_string()))?;
    }
    w.into_inner().map_err(|e| RunError::Output(e.to_string()))
}

fn sweep(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let rows = crossing_prob_sweep(&c.lambdas, c.side, &c.law, c.phase, c.n_reps, stream)?;
    let table: Vec<(f64, f64, String, EstimateCols)> = rows
        .iter()
        .map(|r| (r.lambda, r.side, snake(&r.phase), estimate_cols(&r.estimate)))
        .collect();
    let header = [&["lambda", "side", "phase"][..], &ESTIMATE_HEADER].concat();
    Ok(Outcome {
        result: to_value(&rows)?,
        table: csv_with_header(&header, &table)?,
        summary: format!("{} intensities at side {}", rows.len(), c.side),
        ok: true,
    })
}

#[derive(Serialize)]
struct RecursionCsv {
    alpha: f64,
    lambda: f64,
    kappa: f64,
    f_alpha: f64,
    f_alpha_hi: f64,
    f_10alpha: f64,
    f_10alpha_lo: f64,
    g_alpha: f64,
    rhs: f64,
    slack: f64,
    verdict: String,
}

fn recursion(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let mut entries = Vec::new();
    let mut k = 0;
    for &lambda in &c.lambdas_or_lambda() {
        for &alpha in &c.alphas {
            entries.push(check_recursion(alpha, lambda, &c.law, c.kappa, c.n_reps, &stream.substream("grid", k))?);
            k += 1;
        }
    }
    let table: Vec<RecursionCsv> = entries
        .iter()
        .map(|e| RecursionCsv {
            alpha: e.alpha,
            lambda: e.lambda,
            kappa: e.kappa,
            f_alpha: e.f_alpha.point,
            f_alpha_hi: e.f_alpha.ci_hi,
            f_10alpha: e.f_10alpha.point,
            f_10alpha_lo: e.f_10alpha.ci_lo,
            g_alpha: e.g_alpha,
            rhs: e.rhs,
            slack: e.slack,
            verdict: snake(&e.verdict),
        })
        .collect();
    let violated = entries.iter().filter(|e| e.verdict == Verdict::Violated).count();
    let summary = format!("{} grid points, {violated} violated", entries.len());
    outcome(&entries, &table, summary, true)
}

#[derive(Serialize)]
struct ScaleCsv {
    n: u32,
    alpha: f64,
    f_hat: Option<f64>,
    f_hat_hi: Option<f64>,
    f_bound: Option<f64>,
    g_exact: f64,
    g_markov: f64,
}

fn summability(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let r = summability_certificate(&ladder(c), c.n_empirical, c.n_reps, stream)?;
    let table: Vec<ScaleCsv> = r
        .scales
        .iter()
        .map(|t| ScaleCsv {
            n: t.n,
            alpha: t.alpha,
            f_hat: t.f_hat.map(|e| e.point),
            f_hat_hi: t.f_hat.map(|e| e.ci_hi),
            f_bound: t.f_bound,
            g_exact: t.g_exact,
            g_markov: t.g_markov,
        })
        .collect();
    let summary = format!("verdict {}, total {:e}", snake(&r.verdict), r.total);
    outcome(&r, &table, summary, true)
}

#[derive(Serialize)]
struct HJCsv {
    n: u32,
    h: f64,
    h_hi: f64,
    j: f64,
    f_hat_hi: f64,
    g: f64,
    union_point: f64,
    rhs_hi: f64,
    containment: bool,
    verdict: String,
}

fn vacancy(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let r = vacancy_certificate(&ladder(c), c.n_direct, c.n_reps, stream)?;
    let table: Vec<HJCsv> = r
        .entries
        .iter()
        .map(|e| HJCsv {
            n: e.n,
            h: e.h.point,
            h_hi: e.h.ci_hi,
            j: e.j,
            f_hat_hi: e.f_hat.ci_hi,
            g: e.g,
            union_point: e.union_point,
            rhs_hi: e.rhs_hi,
            containment: e.containment,
            verdict: snake(&e.verdict),
        })
        .collect();
    let summary = format!(
        "lower bound {:.6}, at least 1/2: {}, summability {}",
        r.bound,
        r.at_least_half,
        snake(&r.summability.verdict)
    );
    outcome(&r, &table, summary, true)
}

#[derive(Serialize)]
struct ComparisonCsv {
    quantity: String,
    direct: f64,
    reference: f64,
    z: f64,
    agrees: bool,
}

fn slice(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let window = c.window_rect().expect("validated");
    let r = slice_consistency(c.lambda, c.d, &c.law, &window, c.n_reps, stream)?;
    let table: Vec<ComparisonCsv> = r
        .comparisons
        .iter()
        .map(|(k, v)| ComparisonCsv {
            quantity: k.clone(),
            direct: v.direct,
            reference: v.reference,
            z: v.z,
            agrees: v.agrees,
        })
        .collect();
    let summary = format!(
        "intensity ratio {:.4}, {} grains, consistent: {}",
        r.intensity_ratio, r.direct.grains, r.consistent
    );
    outcome(&r, &table, summary, true)
}

fn threshold(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let defaults = ThresholdConfig::with_defaults(c.law.clone(), c.phase, c.scales.clone());
    let config = ThresholdConfig {
        target: c.target,
        tol: c.tol,
        reps_per_probe: c.n_reps,
        budget: c.budget,
        lambda_lo: c.lambda_lo.unwrap_or(defaults.lambda_lo),
        lambda_hi: c.lambda_hi.unwrap_or(defaults.lambda_hi),
        ..defaults
    };
    let r = estimate_threshold(&config, stream)?;
    let table: Vec<(f64, f64, EstimateCols, String)> = r
        .trace
        .iter()
        .flat_map(|s| {
            s.bracket
                .probes
                .iter()
                .map(|p| (s.side, p.lambda, estimate_cols(&p.estimate), snake(&p.decision)))
        })
        .collect();
    let header = [&["side", "lambda"][..], &ESTIMATE_HEADER, &["decision"]].concat();
    let phase = if c.phase == Phase::Occupied { "occupied" } else { "vacant" };
    Ok(Outcome {
        result: to_value(&r)?,
        table: csv_with_header(&header, &table)?,
        summary: format!("{phase} threshold at side {}: [{:.6}, {:.6}]", r.side, r.lo, r.hi),
        ok: true,
    })
}

#[derive(Serialize)]
struct StageCsv {
    lambda: f64,
    radius: f64,
    censored: f64,
    censored_hi: f64,
    diameter_mean: f64,
    diameter_se: f64,
}

fn lambda_d(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let estimates = c
        .lambdas_or_lambda()
        .iter()
        .enumerate()
        .map(|(i, &lambda)| estimate_lambda_d(lambda, &c.law, c.k_max, c.n_reps, &stream.substream("lambda", i as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let table: Vec<StageCsv> = estimates
        .iter()
        .flat_map(|e| {
            e.stages.iter().map(|s| StageCsv {
                lambda: e.lambda,
                radius: s.radius,
                censored: s.censored.point,
                censored_hi: s.censored.ci_hi,
                diameter_mean: s.diameter.mean,
                diameter_se: s.diameter.std_error,
            })
        })
        .collect();
    let summary = estimates
        .iter()
        .map(|e| format!("λ={}: E[D] {:.4} (window {}, unreliable {})", e.lambda, e.mean_diameter.mean, e.radius, e.unreliable))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(&estimates, &table, summary, true)
}

#[derive(Serialize)]
struct EEventCsv {
    lambda: f64,
    k_max: u32,
    truncated: f64,
    truncated_lo: f64,
    tail_bound: f64,
    lower_bound: f64,
    empty_start: f64,
    empty_start_exact: f64,
    informative: bool,
}

fn e_event(c: &ExperimentConfig, stream: &RngStream) -> Run {
    let reports = c
        .lambdas_or_lambda()
        .iter()
        .enumerate()
        .map(|(i, &lambda)| estimate_e_event(lambda, &c.law, c.k_max, c.n_reps, &stream.substream("lambda", i as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let table: Vec<EEventCsv> = reports
        .iter()
        .map(|r| EEventCsv {
            lambda: r.lambda,
            k_max: r.k_max,
            truncated: r.truncated.point,
            truncated_lo: r.truncated.ci_lo,
            tail_bound: r.tail_bound,
            lower_bound: r.lower_bound,
            empty_start: r.empty_start.point,
            empty_start_exact: r.empty_start_exact,
            informative: r.informative,
        })
        .collect();
    let summary = reports
        .iter()
        .map(|r| format!("λ={}: P[E] >= {:.4}", r.lambda, r.lower_bound))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(&reports, &table, summary, true)
}

#[derive(Serialize)]
struct LayoutCsv {
    index: usize,
    orientation: String,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    disc_x: f64,
    disc_y: f64,
    disc_radius: f64,
}

fn layout(c: &ExperimentConfig) -> Run {
    let l = build_lemma1_layout(c.alpha, c.reach_factor)?;
    let table: Vec<LayoutCsv> = l
        .rects
        .iter()
        .map(|r| LayoutCsv {
            index: r.index,
            orientation: if r.orientation == Orientation::Horizontal { "horizontal" } else { "vertical" }.into(),
            x0: r.rect.lo.x,
            x1: r.rect.hi.x,
            y0: r.rect.lo.y,
            y1: r.rect.hi.y,
            disc_x: r.disc_center.x,
            disc_y: r.disc_center.y,
            disc_radius: r.disc_radius,
        })
        .collect();
    let summary = format!("{} rectangles at α = {}", l.rects.len(), c.alpha);
    outcome(&l, &table, summary, true)
}

#[derive(Serialize)]
struct JunctionCsv {
    left: usize,
    bridge: usize,
    right: usize,
    pass: bool,
}

fn knitting(c: &ExperimentConfig) -> Run {
    let l = build_lemma1_layout(c.alpha, c.reach_factor)?;
    let k = verify_knitting(&l);
    let table: Vec<JunctionCsv> = k
        .junctions
        .iter()
        .map(|j| JunctionCsv {
            left: j.left,
            bridge: j.bridge,
            right: j.right,
            pass: j.pass,
        })
        .collect();
    let summary = format!(
        "{}/{} junctions pass, ends covered {}/{}",
        k.junctions.iter().filter(|j| j.pass).count(),
        k.junctions.len(),
        k.lower_ends_covered,
        k.upper_ends_covered
    );
    outcome(&k, &table, summary, k.pass)
}


use chebwidom::asymptotics::{entry_from_frame, fmt_f64, random_corpus, SetData, WidomEntry, CSV_HEADER};
use chebwidom::bands::build_frame;
use chebwidom::chebyshev::{chebyshev_with, ChebyshevOptions, Poly};
use chebwidom::jacobi::{chebyshev_identity_check, IdentityReport, JacobiParams};
use chebwidom::potential::EquilibriumSummary;
use chebwidom::{EquilibriumData, IntervalSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CliError, Format, RunConfig};
use crate::output::to_json;

/// Coefficient tolerance of the Jacobi identity certificate.
pub const IDENTITY_TOL: f64 = 1e-8;

pub const CHEB_CSV: &str = "n,norm,log_norm,capacity,widom_factor,iterations,residual,zeros,alternation";
pub const POTENTIAL_CSV: &str = "capacity,robin,pw_sum,critical_points,band_measures,gap_integrals";
pub const BANDS_CSV: &str = "band,lo,hi,zero,mass,left_half,right_half";
pub const JACOBI_CSV: &str = "p,a,b,coefficient_residual,capacity_residual,norm_residual,passed,spectrum";

/// Text to emit and whether a bound check failed.
pub struct Artifact {
    pub text: String,
    pub violation: Option<String>,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Self { text, violation: None }
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(";")
}

fn bands_field(set: &IntervalSet) -> String {
    set.bands().iter().map(|b| format!("{}:{}", fmt_f64(b.lo), fmt_f64(b.hi))).collect::<Vec<_>>().join(";")
}

fn options(cfg: &RunConfig) -> ChebyshevOptions {
    ChebyshevOptions { tol: Some(cfg.tol), ..Default::default() }
}

fn equilibrium(set: &IntervalSet, cfg: &RunConfig) -> Result<EquilibriumData, CliError> {
    Ok(EquilibriumData::with_order(set, cfg.quad_order).map_err(chebwidom::Error::from)?)
}

#[derive(Serialize)]
struct ChebOutput<'a> {
    set: &'a IntervalSet,
    n: usize,
    norm: f64,
    log_norm: f64,
    capacity: f64,
    widom_factor: f64,
    zeros: &'a [f64],
    alternation: &'a [f64],
    iterations: usize,
    residual: f64,
    poly: &'a Poly,
}

pub fn cheb(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let set = cfg.require_set()?;
    let n = cfg.require_n()?;
    let eq = equilibrium(set, cfg)?;
    let t = chebyshev_with(set, n, &options(cfg), Some(&eq)).map_err(chebwidom::Error::from)?;
    let w = t.widom_factor(eq.capacity);
    let text = match cfg.format {
        Format::Json => to_json(&ChebOutput {
            set,
            n,
            norm: t.norm,
            log_norm: t.log_norm,
            capacity: eq.capacity,
            widom_factor: w,
            zeros: t.zeros(),
            alternation: &t.alternation,
            iterations: t.iterations,
            residual: t.residual,
            poly: &t.poly,
        }),
        Format::Csv => format!(
            "{CHEB_CSV}\n{},{},{},{},{},{},{},{},{}\n",
            n,
            fmt_f64(t.norm),
            fmt_f64(t.log_norm),
            fmt_f64(eq.capacity),
            fmt_f64(w),
            t.iterations,
            fmt_f64(t.residual),
            join(t.zeros()),
            join(&t.alternation)
        ),
    };
    Ok(Artifact::ok(text))
}

#[derive(Serialize)]
struct PotentialOutput<'a> {
    set: &'a IntervalSet,
    quad_order: usize,
    #[serde(flatten)]
    summary: EquilibriumSummary,
    gap_integrals: Vec<f64>,
}

pub fn potential(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let set = cfg.require_set()?;
    let eq = equilibrium(set, cfg)?;
    let s = eq.summary();
    let gaps = eq.gap_integrals(2 * cfg.quad_order);
    let text = match cfg.format {
        Format::Json => to_json(&PotentialOutput { set, quad_order: cfg.quad_order, summary: s, gap_integrals: gaps }),
        Format::Csv => format!(
            "{POTENTIAL_CSV}\n{},{},{},{},{},{}\n",
            fmt_f64(s.capacity),
            fmt_f64(s.robin),
            fmt_f64(s.pw_sum),
            join(&s.critical_points),
            join(&s.band_measures),
            join(&gaps)
        ),
    };
    Ok(Artifact::ok(text))
}

#[derive(Serialize)]
struct BandsOutput<'a> {
    set: &'a IntervalSet,
    #[serde(flatten)]
    summary: chebwidom::bands::FrameSummary,
    closed: &'a [bool],
    critical: &'a [f64],
}

pub fn bands(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let set = cfg.require_set()?;
    let n = cfg.require_n()?;
    let eq = equilibrium(set, cfg)?;
    let t = chebyshev_with(set, n, &options(cfg), Some(&eq)).map_err(chebwidom::Error::from)?;
    let frame = build_frame(&t).map_err(chebwidom::Error::from)?;
    let text = match cfg.format {
        Format::Json => to_json(&BandsOutput {
            set,
            summary: frame.summary(),
            closed: &frame.closed,
            critical: &frame.critical,
        }),
        Format::Csv => {
            let mut s = format!("{BANDS_CSV}\n");
            for (j, m) in frame.band_masses().iter().enumerate() {
                s.push_str(&format!(
                    "{j},{},{},{},{},{},{}\n",
                    fmt_f64(m.lo),
                    fmt_f64(m.hi),
                    fmt_f64(frame.zeros[j]),
                    fmt_f64(m.mass),
                    fmt_f64(m.left_half),
                    fmt_f64(m.right_half)
                ));
            }
            s
        }
    };
    Ok(Artifact::ok(text))
}

pub fn jacobi(cfg: &RunConfig, params: Option<JacobiParams>, period: usize) -> Result<Artifact, CliError> {
    let params = match params {
        Some(p) => p,
        None => JacobiParams::random(&mut ChaCha8Rng::seed_from_u64(cfg.seed), period),
    };
    let report: IdentityReport = chebyshev_identity_check(&params, IDENTITY_TOL);
    if let Some(code) = &report.failure {
        log::error!("identity check aborted: {code}");
    }
    let text = match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "{JACOBI_CSV}\n{},{},{},{},{},{},{},{}\n",
            params.period(),
            join(params.a()),
            join(params.b()),
            fmt_f64(report.coefficient_residual),
            fmt_f64(report.capacity_residual),
            fmt_f64(report.norm_residual),
            report.passed,
            report.spectrum.as_ref().map(bands_field).unwrap_or_default()
        ),
    };
    let violation = (!report.passed).then(|| match &report.failure {
        Some(code) => format!("identity check could not run ({code})"),
        None => format!(
            "coefficient residual {:e}, capacity residual {:e}",
            report.coefficient_residual, report.capacity_residual
        ),
    });
    Ok(Artifact { text, violation })
}

/// Widom entries for `n = 1..=n_max` of every set, computed on a pool of
/// `cfg.jobs` workers and returned in `(set, n)` order.
fn widom_table(sets: &[IntervalSet], n_max: usize, cfg: &RunConfig) -> Result<Vec<(SetData, Vec<WidomEntry>)>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::config("ThreadPool", e.to_string()))?;
    let opts = options(cfg);
    pool.install(|| {
        let eqs: Vec<EquilibriumData> = sets.par_iter().map(|s| equilibrium(s, cfg)).collect::<Result<_, _>>()?;
        let jobs: Vec<(usize, usize)> = (0..sets.len()).flat_map(|i| (1..=n_max).map(move |n| (i, n))).collect();
        let entries: Vec<Result<WidomEntry, CliError>> = jobs
            .par_iter()
            .map(|&(i, n)| {
                log::debug!("set {i} n {n}");
                let t = chebyshev_with(&sets[i], n, &opts, Some(&eqs[i])).map_err(chebwidom::Error::from)?;
                let frame = build_frame(&t).map_err(chebwidom::Error::from)?;
                Ok(entry_from_frame(&SetData::from_equilibrium(&eqs[i]), &frame))
            })
            .collect();
        let mut entries = entries.into_iter();
        eqs.iter()
            .map(|eq| {
                let d = SetData::from_equilibrium(eq);
                let rows = entries.by_ref().take(n_max).collect::<Result<Vec<_>, _>>()?;
                Ok((d, rows))
            })
            .collect()
    })
}

#[derive(Serialize)]
struct SeriesOutput<'a> {
    set_id: String,
    set: &'a IntervalSet,
    capacity: f64,
    pw_sum: f64,
    totik_widom_bound: f64,
    entries: &'a [WidomEntry],
}

fn series_artifact(ids: &[String], table: &[(SetData, Vec<WidomEntry>)], format: Format) -> Artifact {
    let mut failed = Vec::new();
    for (id, (_, entries)) in ids.iter().zip(table) {
        for e in entries.iter().filter(|e| !e.checks.passed) {
            failed.push(format!("{id}:n={}", e.n));
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for (id, (_, entries)) in ids.iter().zip(table) {
                for e in entries {
                    s.push_str(&e.csv_row(id));
                    s.push('\n');
                }
            }
            s
        }
        Format::Json => {
            let out: Vec<SeriesOutput> = ids
                .iter()
                .zip(table)
                .map(|(id, (d, entries))| SeriesOutput {
                    set_id: id.clone(),
                    set: &d.set,
                    capacity: d.capacity,
                    pw_sum: d.pw_sum,
                    totik_widom_bound: 2.0 * d.pw_sum.exp(),
                    entries,
                })
                .collect();
            to_json(&out)
        }
    };
    let violation = (!failed.is_empty()).then(|| format!("bound checks failed at {}", failed.join(", ")));
    Artifact { text, violation }
}

pub fn verify(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let set = cfg.require_set()?.clone();
    let n_max = cfg.require_n_max()?;
    let table = widom_table(std::slice::from_ref(&set), n_max, cfg)?;
    Ok(series_artifact(&["input".to_string()], &table, cfg.format))
}

pub fn sweep(cfg: &RunConfig, count: usize) -> Result<Artifact, CliError> {
    let n_max = cfg.n_max.unwrap_or(40);
    let sets = match &cfg.set {
        Some(s) => vec![s.clone()],
        None => random_corpus(cfg.seed, count),
    };
    let ids: Vec<String> = (0..sets.len()).map(|i| format!("set{i}")).collect();
    let table = widom_table(&sets, n_max, cfg)?;
    Ok(series_artifact(&ids, &table, cfg.format))
}

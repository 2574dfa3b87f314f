//! Experiment execution and file output.
//!
//! Each detuning in the sweep is an independent run producing its own pair
//! of CSV files; runs execute on their own threads and a summary is written
//! once all of them finish. Output is deterministic: fixed-step integration
//! plus fixed-precision formatting give byte-identical files for identical
//! configurations on the same platform.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use stirap_ssi::dynamics::{evolve, TrajectoryFrame};
use stirap_ssi::entropy::{
    equality_condition_residual, ghz_reduced_density, reduced_entropy, ssi_parameter,
    ssi_parameter_of, EntropyReport,
};
use stirap_ssi::model::{dark_state, ModelParams};
use stirap_ssi::qstate::{von_neumann_entropy, SubsystemId};

use crate::config::{ExperimentConfig, Preset};

/// Population positions reported in the trajectory CSV: the initial state
/// |g,g,n,mu> and the transfer target |f,f,n-2,mu+2>.
const POP_INITIAL: usize = 0;
const POP_TARGET: usize = 5;

pub struct RunOutcome {
    pub delta_tau: f64,
    pub frames: usize,
    pub final_report: EntropyReport,
    pub final_pop_initial: f64,
    pub final_pop_target: f64,
    pub min_e: f64,
    pub min_dark_overlap: Option<f64>,
}

/// Execute the configured experiment and write its files into `out_dir`.
pub fn run(config: &ExperimentConfig) -> Result<()> {
    fs::create_dir_all(&config.out_dir).with_context(|| {
        format!(
            "cannot create output directory `{}`",
            config.out_dir.display()
        )
    })?;

    if config.preset == Preset::Ghz {
        return run_ghz(&config.out_dir);
    }

    let outcomes = run_sweep(config)?;
    let summary_path = config.out_dir.join("summary.txt");
    fs::write(&summary_path, render_summary(&outcomes))
        .with_context(|| format!("cannot write `{}`", summary_path.display()))?;

    for outcome in &outcomes {
        println!(
            "delta_tau = {}: {} frames, final E = {:.6e}, min E = {:.6e}, final target population = {:.6}",
            fmt_dtau(outcome.delta_tau),
            outcome.frames,
            outcome.final_report.e,
            outcome.min_e,
            outcome.final_pop_target,
        );
    }
    println!("wrote {}", summary_path.display());
    Ok(())
}

/// One evolution per detuning, on parallel threads; files are per-run, the
/// summary comes after every run has finished.
fn run_sweep(config: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    let grid = config.time_grid()?;
    let results: Vec<Result<RunOutcome>> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .delta_tau_list
            .iter()
            .map(|&delta_tau| {
                scope.spawn(move || -> Result<RunOutcome> {
                    let params = config.model_params(delta_tau)?;
                    let frames = evolve(&params, &grid)?;
                    let reports = frames
                        .iter()
                        .map(ssi_parameter)
                        .collect::<stirap_ssi::Result<Vec<_>>>()?;
                    write_trajectory_csv(&config.out_dir, delta_tau, &frames, &reports)?;
                    write_darkstate_csv(&config.out_dir, delta_tau, &frames, &params)?;
                    summarize(delta_tau, &frames, &reports)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    results.into_iter().collect()
}

fn summarize(
    delta_tau: f64,
    frames: &[TrajectoryFrame],
    reports: &[EntropyReport],
) -> Result<RunOutcome> {
    let last_frame = frames.last().ok_or_else(|| anyhow!("no frames recorded"))?;
    let final_report = *reports.last().ok_or_else(|| anyhow!("no reports"))?;
    let min_e = reports.iter().map(|r| r.e).fold(f64::INFINITY, f64::min);
    let min_dark_overlap = frames
        .iter()
        .filter_map(|f| f.dark_overlap)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.min(x)))
        });
    Ok(RunOutcome {
        delta_tau,
        frames: frames.len(),
        final_report,
        final_pop_initial: last_frame.state.population(POP_INITIAL),
        final_pop_target: last_frame.state.population(POP_TARGET),
        min_e,
        min_dark_overlap,
    })
}

fn write_trajectory_csv(
    out_dir: &Path,
    delta_tau: f64,
    frames: &[TrajectoryFrame],
    reports: &[EntropyReport],
) -> Result<()> {
    let mut text = String::from("s,E,S_A,S_AB,S_An,S_ABn,Ic_AB,dark_overlap,pop_1,pop_6\n");
    for (frame, report) in frames.iter().zip(reports) {
        let overlap = frame.dark_overlap.map_or(String::new(), fmt_value);
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_value(frame.s),
            fmt_value(report.e),
            fmt_value(report.s_a),
            fmt_value(report.s_ab),
            fmt_value(report.s_an),
            fmt_value(report.s_abn),
            fmt_value(report.ic_ab),
            overlap,
            fmt_value(frame.state.population(POP_INITIAL)),
            fmt_value(frame.state.population(POP_TARGET)),
        )?;
    }
    write_file(&trajectory_path(out_dir, delta_tau), &text)
}

fn write_darkstate_csv(
    out_dir: &Path,
    delta_tau: f64,
    frames: &[TrajectoryFrame],
    params: &ModelParams,
) -> Result<()> {
    let mut text = String::from("s,alpha_over_P,beta_over_P,gamma_over_P,delta_over_P\n");
    for frame in frames {
        let dark = dark_state(frame.g1_tau, frame.g2_tau, params);
        match dark.magnitudes() {
            Some([alpha, beta, gamma, delta]) => writeln!(
                text,
                "{},{},{},{},{}",
                fmt_value(frame.s),
                fmt_value(alpha),
                fmt_value(beta),
                fmt_value(gamma),
                fmt_value(delta),
            )?,
            None => writeln!(text, "{},,,,", fmt_value(frame.s))?,
        }
    }
    write_file(&darkstate_path(out_dir, delta_tau), &text)
}

fn render_summary(outcomes: &[RunOutcome]) -> String {
    let mut text = String::from("# final-frame values and run minima per detuning\n");
    for o in outcomes {
        let min_overlap = o
            .min_dark_overlap
            .map_or_else(|| "n/a".to_string(), fmt_value);
        let _ = write!(
            text,
            "delta_tau = {}\n  frames           = {}\n  E_final          = {}\n  S_A_final        = {}\n  S_AB_final       = {}\n  S_An_final       = {}\n  S_ABn_final      = {}\n  Ic_AB_final      = {}\n  pop_1_final      = {}\n  pop_6_final      = {}\n  min_E            = {}\n  min_dark_overlap = {}\n",
            fmt_dtau(o.delta_tau),
            o.frames,
            fmt_value(o.final_report.e),
            fmt_value(o.final_report.s_a),
            fmt_value(o.final_report.s_ab),
            fmt_value(o.final_report.s_an),
            fmt_value(o.final_report.s_abn),
            fmt_value(o.final_report.ic_ab),
            fmt_value(o.final_pop_initial),
            fmt_value(o.final_pop_target),
            fmt_value(o.min_e),
            min_overlap,
        );
    }
    text
}

/// GHZ preset: entropies of the three-qubit GHZ reduction, its E value, and
/// the defect of the logarithmic equality condition.
fn run_ghz(out_dir: &Path) -> Result<()> {
    use SubsystemId::{AtomA, AtomB, ModeA};
    let rho = ghz_reduced_density();
    let s_abc = von_neumann_entropy(&rho)?;
    let s_a = reduced_entropy(&rho, &[AtomA])?;
    let s_ab = reduced_entropy(&rho, &[AtomA, AtomB])?;
    let s_bc = reduced_entropy(&rho, &[AtomB, ModeA])?;
    let e = ssi_parameter_of(&rho, (AtomA, AtomB, ModeA))?;
    let residual = equality_condition_residual(&rho, (AtomA, AtomB, ModeA))?;

    // keep sub-precision noise from printing as "-0.0000"
    let fixed4 = |x: f64| format!("{:.4}", if x.abs() < 0.5e-4 { 0.0 } else { x });
    let report = format!(
        "S_ABC={}\nS_A={}\nS_AB={}\nS_BC={}\nE={}\nlog_identity_residual={residual:.3e}\n",
        fixed4(s_abc),
        fixed4(s_a),
        fixed4(s_ab),
        fixed4(s_bc),
        fixed4(e),
    );
    let path = out_dir.join("ghz_report.txt");
    write_file(&path, &report)?;
    print!("{report}");
    println!("wrote {}", path.display());
    Ok(())
}

pub fn trajectory_path(out_dir: &Path, delta_tau: f64) -> PathBuf {
    out_dir.join(format!("trajectory_{}.csv", fmt_dtau(delta_tau)))
}

pub fn darkstate_path(out_dir: &Path, delta_tau: f64) -> PathBuf {
    out_dir.join(format!("darkstate_{}.csv", fmt_dtau(delta_tau)))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))
}

/// Ten significant digits, locale-independent.
fn fmt_value(x: f64) -> String {
    format!("{x:.9e}")
}

/// Detuning as a file-name token: integers without a decimal point.
fn fmt_dtau(delta_tau: f64) -> String {
    if delta_tau.fract() == 0.0 && delta_tau.abs() < 1e15 {
        format!("{}", delta_tau as i64)
    } else {
        format!("{delta_tau}")
    }
}

use std::path::Path;
use std::sync::Arc;

use borncount_core::measure::{
    check_monotone, pushforward_density, MonotoneMap, Monotonicity, SampleGrid,
};
use borncount_core::refinement::{
    build_refinement, convergence_study, counting_probability, max_safe_depth, ConvergenceReport,
    MemberBoundary, RefinementOrdering, RefinementSequence,
};
use borncount_core::scenarios::{
    finite_uniform_case, random_ket, random_spin_amplitudes, stern_gerlach_state, FiniteCaseConfig,
    ScenarioFile, SternGerlachConfig, DOWN_LABEL, UP_LABEL,
};
use borncount_core::state::{
    born_probabilities, gauge_absorb, most_probable_label, Ket, MacrostatePartition,
};
use borncount_core::wavefunctional::{build_config_space, emit_density_phase_map};
use serde::Serialize;

use crate::args::{
    ConvergeArgs, DiracArgs, FiniteArgs, GaugeArgs, PartitionArgs, RefineArgs, SternGerlachArgs,
    WavefunctionalArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{Artifact, Output};

fn load_scenario(path: &Path) -> CliResult<ScenarioFile> {
    ScenarioFile::load(path)
        .map_err(|e| CliError::Config(format!("scenario {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Core(e.into()))
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> borncount_core::Result<()>) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn refine(
    psi: &Ket,
    partition: &MacrostatePartition,
    n_max: Option<u32>,
    ordering: RefinementOrdering,
) -> CliResult<RefinementSequence> {
    let n_max = match n_max {
        Some(n) => n,
        None => max_safe_depth(psi)?,
    };
    Ok(build_refinement(psi, partition, n_max, ordering)?)
}

fn report_artifact(stem: &'static str, report: &ConvergenceReport) -> CliResult<Artifact> {
    Ok(Artifact {
        stem,
        csv: csv_bytes(|buf| report.write_csv(buf))?,
        json: report.to_json()?,
        prefer_json: false,
    })
}

fn report_summary(report: &ConvergenceReport) -> Vec<String> {
    let mut lines = vec![format!(
        "n_max={} eps_grid={:e} ordering={:?} within_bound={}",
        report.n_max,
        report.eps_grid,
        report.ordering,
        report.within_bound()
    )];
    for row in report.rows_at(report.n_max) {
        lines.push(format!(
            "  {}: count={} born={} abs_error={:e}",
            row.alpha, row.count_prob, row.born_prob, row.abs_error
        ));
    }
    lines
}

pub fn converge(args: &ConvergeArgs) -> CliResult<()> {
    let scenario = load_scenario(&args.scenario)?;
    let r = &args.refine;
    let (psi, partition) = scenario.build(r.seed, r.resolution)?;
    let seq = refine(&psi, &partition, r.n_max, r.ordering.into())?;
    let report = convergence_study(&seq, partition.labels(), r.tau)?;
    Output::resolve(&args.output).emit(
        &[report_artifact("convergence", &report)?],
        &report_summary(&report),
    )
}

#[derive(Serialize)]
struct SternGerlachSummary<'a> {
    a: [f64; 2],
    b: [f64; 2],
    screen_cells: usize,
    sigma: f64,
    u_center: f64,
    d_center: f64,
    born: LabelPair,
    expected: LabelPair,
    n_max: u32,
    counting: LabelPair,
    report: &'a ConvergenceReport,
}

#[derive(Serialize)]
struct LabelPair {
    up: f64,
    down: f64,
}

fn default_stern_gerlach(seed: u64, resolution: Option<usize>) -> CliResult<SternGerlachConfig> {
    let (a, b) = random_spin_amplitudes(seed);
    Ok(SternGerlachConfig {
        a,
        b,
        screen: Arc::new(SampleGrid::uniform(
            -8.0,
            8.0,
            resolution.unwrap_or(1 << 16),
        )?),
        sigma: 1.0,
        u_center: 3.5,
        d_center: -3.5,
    })
}

pub fn stern_gerlach(args: &SternGerlachArgs) -> CliResult<()> {
    let r = &args.refine;
    let config = match &args.scenario {
        Some(path) => load_scenario(path)?.stern_gerlach_config(r.resolution)?,
        None => default_stern_gerlach(r.seed, r.resolution)?,
    };
    let (psi, partition) = stern_gerlach_state(&config)?;
    let born = born_probabilities(&psi, &partition)?;
    let seq = refine(&psi, &partition, r.n_max, r.ordering.into())?;
    let report = convergence_study(&seq, partition.labels(), r.tau)?;
    let n = seq.n_max();
    let summary = SternGerlachSummary {
        a: [config.a.re, config.a.im],
        b: [config.b.re, config.b.im],
        screen_cells: config.screen.len(),
        sigma: config.sigma,
        u_center: config.u_center,
        d_center: config.d_center,
        born: LabelPair {
            up: born[0].1,
            down: born[1].1,
        },
        expected: LabelPair {
            up: config.a.norm_sqr(),
            down: config.b.norm_sqr(),
        },
        n_max: n,
        counting: LabelPair {
            up: counting_probability(&seq, n, UP_LABEL, r.tau)?,
            down: counting_probability(&seq, n, DOWN_LABEL, r.tau)?,
        },
        report: &report,
    };
    let artifact = Artifact {
        stem: "stern_gerlach",
        csv: csv_bytes(|buf| report.write_csv(buf))?,
        json: to_json(&summary)?,
        prefer_json: false,
    };
    let mut lines = vec![format!(
        "|a|^2={} |b|^2={} born_up={} born_down={}",
        summary.expected.up, summary.expected.down, summary.born.up, summary.born.down
    )];
    lines.extend(report_summary(&report));
    Output::resolve(&args.output).emit(&[artifact], &lines)
}

pub fn finite(args: &FiniteArgs) -> CliResult<()> {
    let labels: Vec<String> = match (&args.scenario, &args.labels) {
        (Some(path), _) => match load_scenario(path)? {
            ScenarioFile::FiniteUniform { n, labels } => {
                if n != labels.len() {
                    return Err(CliError::Config(format!(
                        "n = {n} but {} labels given",
                        labels.len()
                    )));
                }
                labels
            }
            other => {
                return Err(CliError::Config(format!(
                    "expected a finite_uniform scenario, got {}",
                    other.kind()
                )))
            }
        },
        (None, Some(list)) => list.split(',').map(|s| s.trim().to_string()).collect(),
        (None, None) => {
            return Err(CliError::Config(
                "finite needs --labels or --scenario".into(),
            ))
        }
    };
    if let Some(n) = args.n {
        if n != labels.len() {
            return Err(CliError::Config(format!(
                "--n {n} but {} labels given",
                labels.len()
            )));
        }
    }
    let config = FiniteCaseConfig::new(&labels)?;
    let probs = finite_uniform_case(&config)?;
    let mut csv = String::from("label,probability\n");
    for (label, p) in probs.iter() {
        csv.push_str(&format!("{label},{p}\n"));
    }
    let json = serde_json::to_string(&probs).map_err(|e| CliError::Core(e.into()))?;
    let lines = vec![json.clone()];
    let artifact = Artifact {
        stem: "finite",
        csv: csv.into_bytes(),
        json,
        prefer_json: true,
    };
    Output::resolve(&args.output).emit(&[artifact], &lines)
}

#[derive(Serialize)]
struct GaugeRow {
    label: String,
    p_before: f64,
    p_after: f64,
    abs_delta: f64,
}

#[derive(Serialize)]
struct GaugeSummary {
    seed: u64,
    cells: usize,
    rows: Vec<GaugeRow>,
    max_abs_delta: f64,
    max_modulus_delta: f64,
    max_restore_error: f64,
    real_non_negative: bool,
    argmax_before: String,
    argmax_after: String,
}

fn default_gauge_state(
    seed: u64,
    resolution: Option<usize>,
) -> CliResult<(Ket, MacrostatePartition)> {
    let grid = Arc::new(SampleGrid::uniform(-1.0, 1.0, resolution.unwrap_or(1024))?);
    let psi = random_ket(seed, &grid, 8);
    let partition = MacrostatePartition::from_fn(grid, &["q0", "q1", "q2", "q3"], |x| {
        (((x[0] + 1.0) * 2.0) as usize).min(3)
    })?;
    Ok((psi, partition))
}

pub fn gauge(args: &GaugeArgs) -> CliResult<()> {
    let (psi, partition) = match &args.scenario {
        Some(path) => load_scenario(path)?.build(args.seed, args.resolution)?,
        None => default_gauge_state(args.seed, args.resolution)?,
    };
    let before = born_probabilities(&psi, &partition)?;
    let (real, record) = gauge_absorb(&psi);
    let after = born_probabilities(&real, &partition)?;
    let restored = record.restore(&real)?;
    let rows: Vec<GaugeRow> = before
        .iter()
        .zip(&after)
        .map(|((label, b), (_, a))| GaugeRow {
            label: label.clone(),
            p_before: *b,
            p_after: *a,
            abs_delta: (a - b).abs(),
        })
        .collect();
    let labels = partition.labels();
    let summary = GaugeSummary {
        seed: args.seed,
        cells: psi.len(),
        max_abs_delta: rows.iter().map(|r| r.abs_delta).fold(0.0, f64::max),
        max_modulus_delta: psi
            .amplitudes()
            .iter()
            .zip(real.amplitudes())
            .map(|(p, q)| (p.norm() - q.norm()).abs())
            .fold(0.0, f64::max),
        max_restore_error: psi
            .amplitudes()
            .iter()
            .zip(restored.amplitudes())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max),
        real_non_negative: real.amplitudes().iter().all(|a| a.im == 0.0 && a.re >= 0.0),
        argmax_before: labels[most_probable_label(&psi, &partition)?].clone(),
        argmax_after: labels[most_probable_label(&real, &partition)?].clone(),
        rows,
    };
    let mut csv = String::from("label,p_before,p_after,abs_delta\n");
    for r in &summary.rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.label, r.p_before, r.p_after, r.abs_delta
        ));
    }
    let lines = vec![format!(
        "max_abs_delta={:e} argmax_before={} argmax_after={} real_non_negative={}",
        summary.max_abs_delta,
        summary.argmax_before,
        summary.argmax_after,
        summary.real_non_negative
    )];
    let artifact = Artifact {
        stem: "gauge",
        csv: csv.into_bytes(),
        json: to_json(&summary)?,
        prefer_json: false,
    };
    Output::resolve(&args.output).emit(&[artifact], &lines)
}

#[derive(Serialize)]
struct DiracSummary {
    map: String,
    lo: f64,
    hi: f64,
    cells: usize,
    increasing: bool,
    max_abs_diff: f64,
    pushforward_mass: f64,
    image_measure: f64,
}

pub fn dirac(args: &DiracArgs) -> CliResult<()> {
    let map = MonotoneMap::parse(&args.map)?;
    let grid = Arc::new(SampleGrid::uniform(args.lo, args.hi, args.resolution)?);
    let direction = check_monotone(&grid, &map)?;
    let density = pushforward_density(&grid, &map)?;
    let mut csv = String::from("x,f_x,density,fd_jacobian,secant,abs_diff\n");
    let mut max_abs_diff = 0.0f64;
    for (c, &r) in density.values().iter().enumerate() {
        let x = grid.center(c)[0];
        let h = 1e-5 * x.abs().max(1.0);
        let fd = ((map.apply(x + h) - map.apply(x - h)) / (2.0 * h)).abs();
        let (a, b) = grid.cell_interval(c)?;
        let secant = map.image_measure(a, b) / grid.weight(c);
        let diff = (r - fd).abs();
        max_abs_diff = max_abs_diff.max(diff);
        csv.push_str(&format!("{x},{},{r},{fd},{secant},{diff}\n", map.apply(x)));
    }
    let summary = DiracSummary {
        map: map.name().to_string(),
        lo: args.lo,
        hi: args.hi,
        cells: grid.len(),
        increasing: direction == Monotonicity::Increasing,
        max_abs_diff,
        pushforward_mass: density.total_mass(),
        image_measure: map.image_measure(args.lo, args.hi),
    };
    let lines = vec![format!(
        "map={} max_abs_diff={:e} pushforward_mass={} image_measure={}",
        summary.map, summary.max_abs_diff, summary.pushforward_mass, summary.image_measure
    )];
    let artifact = Artifact {
        stem: "dirac",
        csv: csv.into_bytes(),
        json: to_json(&summary)?,
        prefer_json: false,
    };
    Output::resolve(&args.output).emit(&[artifact], &lines)
}

pub fn wavefunctional(args: &WavefunctionalArgs) -> CliResult<()> {
    let space = build_config_space(args.sites, args.levels, (args.lo, args.hi))?;
    let mut psi = random_ket(args.seed, &space.grid, args.smoothness);
    if args.gauge {
        psi = gauge_absorb(&psi).0;
    }
    let map = emit_density_phase_map(&psi)?;
    let mut artifacts = vec![Artifact {
        stem: "density_phase",
        csv: csv_bytes(|buf| map.write_csv(buf))?,
        json: to_json(&map)?,
        prefer_json: false,
    }];
    let mut lines = vec![format!(
        "sites={} levels={} cells={} total_probability={}",
        args.sites,
        args.levels,
        space.grid.len(),
        map.total_probability()
    )];
    if let Some(n_max) = args.n_max {
        let partition =
            MacrostatePartition::from_fn(space.grid.clone(), &["phi1_le0", "phi1_gt0"], |phi| {
                usize::from(phi[0] > 0.0)
            })?;
        let seq = build_refinement(&psi, &partition, n_max, RefinementOrdering::MacrostateMajor)?;
        let report = convergence_study(&seq, partition.labels(), args.tau)?;
        lines.extend(report_summary(&report));
        artifacts.push(report_artifact("convergence", &report)?);
    }
    Output::resolve(&args.output).emit(&artifacts, &lines)
}

#[derive(Serialize)]
struct PartitionSummary {
    n_max: u32,
    eps_grid: f64,
    ordering: RefinementOrdering,
    support_cells: usize,
    boundaries: Vec<MemberBoundary>,
}

pub fn partition(args: &PartitionArgs) -> CliResult<()> {
    let scenario = load_scenario(&args.scenario)?;
    let r: &RefineArgs = &args.refine;
    let (psi, partition) = scenario.build(r.seed, r.resolution)?;
    let seq = refine(&psi, &partition, r.n_max, r.ordering.into())?;
    let summary = PartitionSummary {
        n_max: seq.n_max(),
        eps_grid: seq.eps_grid(),
        ordering: seq.ordering(),
        support_cells: seq.table().len(),
        boundaries: seq.boundaries(),
    };
    let lines = vec![format!(
        "n_max={} eps_grid={:e} support_cells={} members={}",
        summary.n_max,
        summary.eps_grid,
        summary.support_cells,
        summary.boundaries.len()
    )];
    let artifact = Artifact {
        stem: "boundaries",
        csv: csv_bytes(|buf| seq.write_boundaries_csv(buf))?,
        json: to_json(&summary)?,
        prefer_json: false,
    };
    Output::resolve(&args.output).emit(&[artifact], &lines)
}

//! `galilei` — command-line laboratory for Galilean symmetry checks.
//!
//! Subcommands:
//!
//! * `cohomology` — exact degree-two Lie-algebra cohomology of a
//!   structure-constant file, with optional two-form classification and
//!   witness reconstruction.
//! * `verify` — numerical identity checks (kernel transformation laws,
//!   projective phases, solution maps, action boundary terms, path
//!   residuals) swept over at least three resolutions.
//! * `propagate` — evolve a Gaussian packet from a flat config file,
//!   writing the sampled series as CSV with norm-conservation and
//!   cross-route checks.
//! * `fixtures` — regenerate the built-in input files.
//!
//! Exit codes: `0` all checks passed, `1` at least one check failed,
//! `2` usage or input-parse error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use galilei::algebra::parse_algebra_file;
use galilei::config::Config;
use galilei::grid::{SpatialGrid, WaveFunction, C64};
use galilei::lagrangian::{
    boost_divergence_defect, el_residual_max, scaling_equivalence_defect, ActionKind, Path as
    SampledPath, Potential, System,
};
use galilei::propagator::{
    analytic_kernel, build_sliced, build_spectral, check_boost_identity,
    check_scaled_space_identity, check_scaled_time_identity, cn_evolve_scaled,
    schrodinger_residual, windowed_rel_deviation, KernelKind,
};
use galilei::rng::PathDraw;
use galilei::symmetry::{
    check_solution_map, expected_projective_phase, phase_distance, projective_phase, Picture,
    WaveOperator,
};
use report::{order_note, Report};

#[derive(Parser)]
#[command(name = "galilei", version, about = "Galilean symmetry laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact degree-two cohomology of structure constants; optionally
    /// classify a two-form (closed/exact, with witness reconstruction).
    Cohomology {
        /// Structure-constant file (`dim`/`C` records).
        algebra: PathBuf,
        /// Optional two-form (`D` records) or one-cochain (`E` records) file.
        two_form: Option<PathBuf>,
        /// Directory for `report.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical identity checks over ≥3-resolution sweeps.
    Verify {
        kind: VerifyKind,
        /// Particle mass.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Planck constant.
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Space-translation parameter.
        #[arg(long)]
        b: Option<f64>,
        /// Boost velocity.
        #[arg(long)]
        u: Option<f64>,
        /// Time-translation parameter.
        #[arg(long)]
        a: Option<f64>,
        /// Potential: `free`, `harmonic:omega=W`, ...
        #[arg(long, default_value = "free")]
        potential: String,
        /// Operator spec for `solution-map`, e.g. `boost:u=0.5;picture=standard`.
        #[arg(long)]
        operator: Option<String>,
        /// Sampled path CSV for `el-residual`.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        t2: Option<f64>,
        /// Number of random paths for `divergence`.
        #[arg(long, default_value_t = 20)]
        draws: u64,
        /// Pass tolerance for `el-residual`.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Directory for `report.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a packet from a flat `key = value` config, writing CSV series.
    Propagate {
        /// Configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV series and `report.txt`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the built-in fixture files.
    Fixtures {
        /// Target directory.
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    /// Kernel boost-transformation identity (free exact; harmonic is an
    /// expected-negative control).
    BoostKernel,
    /// Scaled-kernel space/time translation identities.
    TranslateKernel,
    /// Projective phase of space∘boost vs boost∘space.
    Projective,
    /// Transform-then-evolve vs evolve-then-transform.
    SolutionMap,
    /// Boundary-term (total-derivative) identities of the action on random
    /// paths.
    Divergence,
    /// Euler–Lagrange residual of a sampled path CSV.
    ElResidual,
}

fn main() -> ExitCode {
    // Die quietly like any Unix filter when the reader closes the pipe
    // (e.g. `galilei ... | head`), instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> galilei::Result<bool> {
    match cli.command {
        Command::Cohomology {
            algebra,
            two_form,
            out,
        } => cmd_cohomology(&algebra, two_form.as_deref(), out.as_deref()),
        Command::Verify {
            kind,
            m,
            hbar,
            b,
            u,
            a,
            potential,
            operator,
            path,
            t1,
            t2,
            draws,
            tol,
            out,
        } => {
            let args = VerifyArgs {
                kind,
                m,
                hbar,
                b,
                u,
                a,
                potential,
                operator,
                path,
                t1,
                t2,
                draws,
                tol,
            };
            cmd_verify(&args, out.as_deref())
        }
        Command::Propagate { config, out } => cmd_propagate(&config, &out),
        Command::Fixtures { out_dir } => cmd_fixtures(&out_dir),
    }
}

// ---------------------------------------------------------------- cohomology

fn cmd_cohomology(
    algebra_path: &Path,
    two_form_path: Option<&Path>,
    out: Option<&Path>,
) -> galilei::Result<bool> {
    let mut rep = Report::new();
    let parsed = parse_algebra_file(&std::fs::read_to_string(algebra_path)?)?;
    let alg = parsed.constants.ok_or_else(|| {
        galilei::Error::Parse(format!(
            "{}: no structure constants (`C` records)",
            algebra_path.display()
        ))
    })?;
    rep.note(format!(
        "algebra dim={} nonzero_constants={}",
        alg.dim,
        alg.nonzero().count()
    ));

    let violations = alg.jacobi_violations();
    let jacobi = violations.is_empty();
    rep.note(format!("jacobi={jacobi}"));
    rep.check("jacobi", violations.len() as f64, 0.0, jacobi);
    if !jacobi {
        for (a, b, c) in violations.iter().take(5) {
            rep.note(format!("jacobi_violation at ({a},{b},{c})"));
        }
        rep.note("cohomology skipped: the constants do not define a Lie algebra");
        return Ok(rep.finish(out)?);
    }

    let coh = alg.cohomology();
    rep.note(format!(
        "two_cochain_dim={} rank_closedness={} closed_dim={} exact_dim={} h2_dim={}",
        coh.two_cochain_dim, coh.rank_closedness, coh.closed_dim, coh.exact_dim, coh.h2_dim
    ));

    let Some(path) = two_form_path else {
        return Ok(rep.finish(out)?);
    };
    let extra = parse_algebra_file(&std::fs::read_to_string(path)?)?;

    // a one-cochain file: echo its coboundary, which is exact by definition
    let two_form = if let Some(phi) = &extra.one_cochain {
        let b = alg.coboundary(phi)?;
        rep.note("input is a one-cochain; classifying its coboundary");
        for ((a, c), v) in b.nonzero() {
            rep.note(format!("coboundary D {a} {c} {v}"));
        }
        b
    } else {
        extra.two_form.ok_or_else(|| {
            galilei::Error::Parse(format!(
                "{}: no two-form (`D`) or one-cochain (`E`) records",
                path.display()
            ))
        })?
    };

    let closed = alg.is_closed(&two_form)?;
    rep.note(format!("closed={closed}"));
    let witness = alg.exactness_witness(&two_form)?;
    rep.note(format!("exact={}", witness.is_some()));
    if let Some(phi) = witness {
        for (g, v) in phi.iter().enumerate() {
            if !num_is_zero(v) {
                rep.note(format!("witness E {g} {v}"));
            }
        }
        // the witness must reproduce the input exactly (rational arithmetic)
        let rebuilt = alg.coboundary(&phi)?;
        let matches = rebuilt == two_form;
        rep.check("witness_reproduces_input", if matches { 0.0 } else { 1.0 }, 0.0, matches);
    }
    Ok(rep.finish(out)?)
}

fn num_is_zero(r: &galilei::algebra::Rat) -> bool {
    use num_traits::Zero;
    r.is_zero()
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
    kind: VerifyKind,
    m: f64,
    hbar: f64,
    b: Option<f64>,
    u: Option<f64>,
    a: Option<f64>,
    potential: String,
    operator: Option<String>,
    path: Option<PathBuf>,
    t1: Option<f64>,
    t2: Option<f64>,
    draws: u64,
    tol: f64,
}

fn test_packets(grid: SpatialGrid) -> Vec<WaveFunction> {
    let a = WaveFunction::gaussian(grid, 0.0, 1.0, 0.0);
    let b = WaveFunction::gaussian(grid, 1.5, 0.7, 2.0);
    let mixed = {
        let c = WaveFunction::gaussian(grid, -1.0, 0.8, -0.5);
        let d = WaveFunction::gaussian(grid, 1.2, 0.6, 1.0);
        let values = c
            .values
            .iter()
            .zip(&d.values)
            .map(|(x, y)| x + 0.6 * y)
            .collect();
        WaveFunction::new(grid, values).expect("same grid")
    };
    vec![a, b, mixed]
}

fn cmd_verify(args: &VerifyArgs, out: Option<&Path>) -> galilei::Result<bool> {
    let mut rep = Report::new();
    match args.kind {
        VerifyKind::BoostKernel => verify_boost_kernel(args, &mut rep)?,
        VerifyKind::TranslateKernel => verify_translate_kernel(args, &mut rep)?,
        VerifyKind::Projective => verify_projective(args, &mut rep)?,
        VerifyKind::SolutionMap => verify_solution_map(args, &mut rep)?,
        VerifyKind::Divergence => verify_divergence(args, &mut rep)?,
        VerifyKind::ElResidual => verify_el_residual(args, &mut rep)?,
    }
    Ok(rep.finish(out)?)
}

fn verify_boost_kernel(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    let potential = Potential::parse(&args.potential)?;
    let u = args.u.unwrap_or(0.7);
    let (t1, t2) = (args.t1.unwrap_or(0.0), args.t2.unwrap_or(1.0));
    let system = System {
        masses: vec![args.m],
        potential: potential.clone(),
    };
    let free = potential == Potential::Free;
    let mut values = Vec::new();
    for npoints in [256usize, 384, 512] {
        let grid = SpatialGrid::with_spacing(npoints, 0.025)?;
        let kernel = if free {
            analytic_kernel(KernelKind::Free, &system, args.hbar, &grid, t1, t2)?
        } else {
            build_spectral(&system, args.hbar, &grid, t1, t2, ActionKind::Standard, 0)?
        };
        let dev = check_boost_identity(&kernel, args.m, args.hbar, t1, t2, u, 0.15)?;
        rep.note(format!("sweep npoints={npoints} deviation={dev:.6e}"));
        values.push(dev);
    }
    let worst = values.iter().cloned().fold(0.0f64, f64::max);
    rep.note(format!("order={}", order_note(&values)));
    let tol = 1e-10;
    let pass = worst <= tol;
    if !pass && !free {
        rep.note(
            "expected-negative: no spatially uniform multiplier exists for this potential, \
             so the identity must fail at order one",
        );
    }
    rep.check("boost_kernel_identity", worst, tol, pass);
    Ok(())
}

fn verify_translate_kernel(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    let potential = Potential::parse(&args.potential)?;
    let system = System {
        masses: vec![args.m],
        potential,
    };
    let b = args.b.unwrap_or(0.4);
    let a = args.a.unwrap_or(0.3);
    let (t1, t2) = (args.t1.unwrap_or(1.0), args.t2.unwrap_or(2.0));
    let n_intervals = 32;
    let mut space_vals = Vec::new();
    let mut time_vals = Vec::new();
    for npoints in [96usize, 128, 192] {
        let grid = SpatialGrid::with_spacing(npoints, 0.0175)?;
        let ds = check_scaled_space_identity(&system, args.hbar, &grid, t1, t2, n_intervals, b)?;
        let dt = check_scaled_time_identity(&system, args.hbar, &grid, t1, t2, n_intervals, a)?;
        rep.note(format!(
            "sweep npoints={npoints} space_deviation={ds:.6e} time_deviation={dt:.6e}"
        ));
        space_vals.push(ds);
        time_vals.push(dt);
    }
    let tol = 1e-5;
    let ws = space_vals.iter().cloned().fold(0.0f64, f64::max);
    let wt = time_vals.iter().cloned().fold(0.0f64, f64::max);
    rep.note("order=n/a (identities hold exactly; deviations sit at roundoff)");
    rep.check("space_translation_identity", ws, tol, ws <= tol);
    rep.check("time_translation_identity", wt, tol, wt <= tol);
    Ok(())
}

fn verify_projective(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    let b = args.b.unwrap_or(0.5);
    let u = args.u.unwrap_or(2.0);
    let t = 1.0;
    let target = expected_projective_phase(args.m, args.hbar, b, u);
    let mut worst_dev = 0.0f64;
    let mut worst_phase = 0.0f64;
    let mut phase_at_finest = 0.0f64;
    for npoints in [256usize, 512, 1024] {
        let grid = SpatialGrid::with_spacing(npoints, 1.0 / 32.0)?;
        let mut level_dev = 0.0f64;
        for picture in ["standard", "noether"] {
            let space = WaveOperator::parse(
                &format!("space:b={b};picture={picture}"),
                args.m,
                args.hbar,
            )?;
            let boost = WaveOperator::parse(
                &format!("boost:u={u};picture={picture}"),
                args.m,
                args.hbar,
            )?;
            for psi in test_packets(grid) {
                let stats = projective_phase(&space, &boost, &psi, t)?;
                level_dev = level_dev.max(stats.max_dev);
                worst_phase = worst_phase.max(phase_distance(stats.phase, target));
                phase_at_finest = stats.phase;
            }
        }
        rep.note(format!("sweep npoints={npoints} ratio_wander={level_dev:.6e}"));
        worst_dev = worst_dev.max(level_dev);
    }
    rep.note(format!(
        "ratio_phase={phase_at_finest:.6} rad expected={target:.6} rad"
    ));
    rep.note("order=n/a (constant ratio; deviations sit at roundoff)");
    rep.check("projective_ratio_constant", worst_dev, 1e-8, worst_dev <= 1e-8);
    rep.check("projective_phase", worst_phase, 1e-10, worst_phase <= 1e-10);
    Ok(())
}

fn verify_solution_map(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    let spec = args
        .operator
        .as_deref()
        .unwrap_or("boost:u=0.5;picture=standard");
    let op = WaveOperator::parse(spec, args.m, args.hbar)?;
    let potential = Potential::parse(&args.potential)?;
    let system = System {
        masses: vec![args.m],
        potential,
    };
    let noether = op.picture == Picture::Noether;
    let (t1, t2) = (
        args.t1.unwrap_or(if noether { 1.0 } else { 0.0 }),
        args.t2.unwrap_or(if noether { 2.0 } else { 1.0 }),
    );
    let mut values = Vec::new();
    for npoints in [128usize, 256, 512] {
        let grid = SpatialGrid::with_spacing(npoints, 1.0 / 32.0)?;
        let psi0 = if noether {
            WaveFunction::gaussian(grid, 0.0, 0.6, 0.0)
        } else {
            WaveFunction::gaussian(grid, -0.25, 1.25, 0.0)
        };
        let window = grid.window_abs_le(0.85 * grid.x_max());
        let dev = check_solution_map(&op, &system, &psi0, t1, t2, 256, &window)?;
        rep.note(format!("sweep npoints={npoints} deviation={dev:.6e}"));
        values.push(dev);
    }
    let finest = *values.last().expect("nonempty sweep");
    rep.note(format!("order={}", order_note(&values)));
    rep.check("solution_map", finest, 1e-4, finest <= 1e-4);
    Ok(())
}

fn verify_divergence(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    if args.draws == 0 {
        return Err(galilei::Error::InvalidArgument("need ≥ 1 draw".into()));
    }
    let mut boost_sweep = Vec::new();
    let mut scale_sweep = Vec::new();
    for n in [1024usize, 2048, 4096] {
        let mut worst_boost = 0.0f64;
        let mut worst_scale = 0.0f64;
        for k in 0..args.draws {
            let draw = PathDraw::sample(k);
            let path = SampledPath::cubic_from_draw(&draw, n);
            let system = System::free(vec![draw.mass]);
            worst_boost =
                worst_boost.max(boost_divergence_defect(&path, &system, &[draw.boost])?);
            worst_scale = worst_scale.max(scaling_equivalence_defect(&path, &system)?);
        }
        rep.note(format!(
            "sweep intervals={n} boost_defect={worst_boost:.6e} scaling_defect={worst_scale:.6e}"
        ));
        boost_sweep.push(worst_boost);
        scale_sweep.push(worst_scale);
    }
    let tol = 1e-8;
    for (name, sweep) in [
        ("boost_divergence", &boost_sweep),
        ("scaling_divergence", &scale_sweep),
    ] {
        let finest = *sweep.last().expect("nonempty");
        let order = report::last_pair_order(sweep);
        rep.note(format!("{name} order={}", order_note(sweep)));
        let order_ok = order.map_or(true, |o| o >= 1.9);
        rep.check(name, finest, tol, finest <= tol && order_ok);
    }
    Ok(())
}

fn verify_el_residual(args: &VerifyArgs, rep: &mut Report) -> galilei::Result<()> {
    let path_file = args.path.as_ref().ok_or_else(|| {
        galilei::Error::InvalidArgument("el-residual requires --path <csv>".into())
    })?;
    let full = galilei::csvio::path_from_csv(&std::fs::read_to_string(path_file)?)?;
    let potential = Potential::parse(&args.potential)?;
    let system = System {
        masses: vec![args.m; full.ncoords()],
        potential,
    };
    let mut values = Vec::new();
    for stride in [4usize, 2, 1] {
        if (full.nsamples() - 1) % stride != 0 || (full.nsamples() - 1) / stride < 2 {
            continue;
        }
        let times: Vec<f64> = full.times.iter().cloned().step_by(stride).collect();
        let coords: Vec<Vec<f64>> = full.coords.iter().cloned().step_by(stride).collect();
        let sub = SampledPath::new(times, coords)?;
        let r = el_residual_max(&sub, &system)?;
        rep.note(format!(
            "sweep samples={} residual={r:.6e}",
            sub.nsamples()
        ));
        values.push(r);
    }
    if values.is_empty() {
        return Err(galilei::Error::InvalidArgument(
            "path too short for a residual sweep (need ≥ 9 samples)".into(),
        ));
    }
    let finest = *values.last().expect("nonempty");
    rep.note(format!("order={}", order_note(&values)));
    rep.check("el_residual", finest, args.tol, finest <= args.tol);
    Ok(())
}

// ----------------------------------------------------------------- propagate

fn cmd_propagate(config_path: &Path, out: &Path) -> galilei::Result<bool> {
    let cfg = Config::from_file(config_path)?;
    let mut rep = Report::new();

    let method = cfg.str_or("method", "spectral").to_string();
    if method != "spectral" && method != "sliced" {
        return Err(galilei::Error::Parse(format!(
            "method must be `spectral` or `sliced`, got `{method}`"
        )));
    }
    let form = match cfg.str_or("form", "standard") {
        "standard" => ActionKind::Standard,
        "scaled" => ActionKind::Scaled,
        other => {
            return Err(galilei::Error::Parse(format!(
                "form must be `standard` or `scaled`, got `{other}`"
            )))
        }
    };
    let potential = Potential::parse(cfg.str_or("potential", "free"))?;
    let mass = cfg.f64("mass")?;
    let hbar = cfg.f64_or("hbar", 1.0)?;
    let npoints = cfg.usize("npoints")?;
    let half_span = cfg.f64("half_span")?;
    let t1 = cfg.f64("t1")?;
    let t2 = cfg.f64("t2")?;
    let nt = cfg.usize_or("nt", 8)?;
    let n_intervals = cfg.usize_or("n_intervals", 64)?;
    let substeps = cfg.usize_or("substeps", 256)?;
    let dump_kernel = cfg.bool_or("dump_kernel", false)?;
    if nt < 2 {
        return Err(galilei::Error::InvalidArgument("need nt ≥ 2".into()));
    }
    if t2 <= t1 {
        return Err(galilei::Error::InvalidArgument("need t2 > t1".into()));
    }
    let system = System {
        masses: vec![mass],
        potential,
    };
    let grid = SpatialGrid::centered(npoints, half_span)?;
    let psi0 = WaveFunction::gaussian(
        grid,
        cfg.f64_or("packet_x0", 0.0)?,
        cfg.f64_or("packet_sigma0", 1.0)?,
        cfg.f64_or("packet_k0", 0.0)?,
    );

    // -- sampled series along [t1, t2]
    let dt = (t2 - t1) / nt as f64;
    let times: Vec<f64> = (0..=nt).map(|j| t1 + j as f64 * dt).collect();
    let series: Vec<WaveFunction> = match form {
        ActionKind::Standard => {
            let ham = galilei::eig::SpectralHamiltonian::build(grid, mass, hbar, |x| {
                system.potential.value(&system.masses, &[x])
            })?;
            times
                .iter()
                .map(|&t| ham.evolve(&psi0, t - t1))
                .collect::<galilei::Result<_>>()?
        }
        ActionKind::Scaled => {
            let per = (substeps / nt).max(1);
            let mut acc = vec![psi0.clone()];
            for j in 1..=nt {
                let prev = acc.last().expect("nonempty");
                acc.push(cn_evolve_scaled(&system, hbar, prev, times[j - 1], times[j], per)?);
            }
            acc
        }
    };

    std::fs::create_dir_all(out)?;
    for (j, psi) in series.iter().enumerate() {
        let text = galilei::csvio::wavefunction_to_csv(&grid, &psi.values)?;
        std::fs::write(out.join(format!("psi_{j:04}.csv")), text)?;
    }
    rep.note(format!(
        "wrote {} states on t ∈ [{t1}, {t2}] to {}",
        series.len(),
        out.display()
    ));

    // -- norm conservation along the series
    let norm0 = series[0].norm();
    let drift = series
        .iter()
        .map(|p| (p.norm() - norm0).abs())
        .fold(0.0f64, f64::max);
    rep.check("norm_drift", drift, 1e-10, drift <= 1e-10);

    // -- equation residual of the written series (finite differences in t
    //    and x; limited by the coarse series time step, hence informative)
    let values: Vec<Vec<C64>> = series.iter().map(|p| p.values.clone()).collect();
    let residual = schrodinger_residual(
        &system,
        hbar,
        &grid,
        &times,
        &values,
        form,
        (npoints / 10).max(1),
    )?;
    rep.note(format!(
        "schrodinger_residual={residual:.3e} (central differences across the {nt}-step series)"
    ));

    // -- independent-route comparison for the sliced method
    if method == "sliced" {
        let eps = (t2 - t1) / (n_intervals + 1) as f64;
        let local_chirp = mass * grid.dx * grid.dx / (2.0 * hbar * eps);
        let span_chirp = mass * 2.0 * grid.x_max() * grid.dx / (hbar * eps);
        rep.note(format!(
            "aliasing_warning={} (m·Δx²/2ħε = {local_chirp:.3})",
            local_chirp > std::f64::consts::PI
        ));
        rep.check(
            "aliasing_guard",
            if local_chirp > std::f64::consts::PI { 1.0 } else { 0.0 },
            0.0,
            local_chirp <= std::f64::consts::PI,
        );
        // the iterated one-step sum is stable only while the chirp is
        // resolved over the full span: adjacent-column phase increment
        // m·(2L)·Δx/(ħε) below one full cycle
        rep.note(format!(
            "full_span_chirp={span_chirp:.3} (iteration unstable above ≈ 2π)"
        ));
        let final_state = series.last().expect("nonempty series");
        let via_sliced =
            galilei::propagator::evolve_sliced(&system, hbar, &psi0, t1, t2, n_intervals, form)?;
        let window = grid.window_margin_frac(0.15);
        let dev = windowed_rel_deviation(final_state, &via_sliced, &window);
        rep.note(format!("sliced n_intervals={n_intervals} vs spectral route"));
        rep.check("sliced_vs_spectral", dev, 1e-3, dev <= 1e-3);
        if dump_kernel {
            let kernel = build_sliced(&system, hbar, &grid, t1, t2, n_intervals, form)?;
            std::fs::write(out.join("kernel.csv"), galilei::csvio::kernel_to_csv(&kernel))?;
            rep.note("wrote kernel.csv");
        }
    } else if dump_kernel {
        let kernel = build_spectral(&system, hbar, &grid, t1, t2, form, substeps)?;
        std::fs::write(out.join("kernel.csv"), galilei::csvio::kernel_to_csv(&kernel))?;
        rep.note("wrote kernel.csv");
    }

    // -- scaled form: the mixed-term residual operator must converge at
    //    second order on the dressed closed-form reference solution
    if form == ActionKind::Scaled {
        let order = scaled_residual_order()?;
        rep.note(format!("scaled_residual_orders fine-pair={order:.2}"));
        rep.check("scaled_residual_order", (order - 2.0).abs(), 0.3, (order - 2.0).abs() <= 0.3);
    }

    Ok(rep.finish(Some(out))?)
}

/// Convergence order of the scaled-equation residual on the dressed
/// closed-form free Gaussian, measured over a mesh-halving sweep.
fn scaled_residual_order() -> galilei::Result<f64> {
    use galilei::analytic::gaussian_free_state;
    use galilei::grid::I;
    let system = System::free(vec![1.0]);
    let nt = 256usize;
    let times: Vec<f64> = (0..=nt).map(|j| 1.0 + j as f64 / nt as f64).collect();
    let mut vals = Vec::new();
    for n in [128usize, 256, 512] {
        let grid = SpatialGrid::centered(n, 7.0)?;
        let series: Vec<Vec<C64>> = times
            .iter()
            .map(|&t| {
                (0..n)
                    .map(|i| {
                        let x = grid.x(i);
                        (-I * (x * x / (2.0 * t))).exp()
                            * gaussian_free_state(1.0, 1.0, 0.0, 1.0, 0.0, t, x)
                    })
                    .collect()
            })
            .collect();
        let r = schrodinger_residual(
            &system,
            1.0,
            &grid,
            &times,
            &series,
            ActionKind::Scaled,
            n / 10,
        )?;
        vals.push(r);
    }
    report::last_pair_order(&vals)
        .ok_or_else(|| galilei::Error::Numerical("residual sweep hit the roundoff floor".into()))
}

// ------------------------------------------------------------------ fixtures

fn cmd_fixtures(out_dir: &Path) -> galilei::Result<bool> {
    use galilei::fixtures as fx;
    std::fs::create_dir_all(out_dir)?;
    let mut rep = Report::new();

    let alg = fx::galilei_algebra();
    let files: Vec<(&str, String)> = vec![
        (
            "galilei.alg",
            format!("# Galilei algebra (10 generators)\n{}", alg.serialize()),
        ),
        (
            "galilei_mass.2form",
            format!(
                "# central-extension two-form pairing translations with boosts\n{}",
                fx::mass_two_form().serialize()
            ),
        ),
        (
            "heisenberg3.alg",
            format!("# nilpotent dim-3 algebra\n{}", fx::heisenberg_algebra().serialize()),
        ),
        (
            "abelian4.alg",
            format!("# abelian dim-4 algebra\n{}", fx::abelian_algebra_dim4().serialize()),
        ),
        (
            "rotation3.alg",
            format!("# rotation algebra (Jacobi holds)\n{}", fx::rotation_algebra().serialize()),
        ),
        (
            "jacobi_violator.alg",
            format!(
                "# antisymmetric constants failing the Jacobi identity\n{}",
                fx::jacobi_violator().serialize()
            ),
        ),
        (
            "exact_two_form.2form",
            {
                // coboundary of the dual of generator 1 — exact by construction
                let parsed = parse_algebra_file("dim 10\nE 1 1\n")?;
                let phi = parsed.one_cochain.expect("E record parsed");
                let b = alg.coboundary(&phi)?;
                format!("# coboundary (exact two-form) for witness reconstruction\n{}", b.serialize())
            },
        ),
        ("one_cochain_e1.cochain", "# dual of generator 1\ndim 10\nE 1 1\n".to_string()),
        ("straightline.csv", fx::straight_line_path_csv()),
        ("propagate.conf", fx::sample_propagate_config()),
        (
            "propagate_sliced.conf",
            "\
# sliced-route propagation cross-checked against the spectral route;
# the grid resolves the one-step chirp over the full span
# (m·(2L)·Δx/(ħε) ≈ 5.6 < 2π), which keeps the iteration stable
method = sliced
form = standard
potential = free
mass = 1.0
hbar = 1.0
npoints = 1152
half_span = 5.0
t1 = 0.0
t2 = 1.0
n_intervals = 64
nt = 8
packet_sigma0 = 0.707
"
            .to_string(),
        ),
        (
            "propagate_harmonic.conf",
            "\
# sliced oscillator propagation; source-endpoint potential sampling is
# first order in the step, so 128 intervals are needed for the 1e-3 gate
method = sliced
form = standard
potential = harmonic:omega=0.5
mass = 1.0
hbar = 1.0
npoints = 1792
half_span = 4.4
t1 = 0.0
t2 = 1.0
n_intervals = 128
nt = 8
packet_sigma0 = 0.707
"
            .to_string(),
        ),
        (
            "propagate_scaled.conf",
            "\
# scaled-form propagation (Crank-Nicolson route)
method = spectral
form = scaled
potential = free
mass = 1.0
hbar = 1.0
npoints = 256
half_span = 8.0
t1 = 1.0
t2 = 2.0
substeps = 256
nt = 8
"
            .to_string(),
        ),
    ];
    for (name, text) in files {
        std::fs::write(out_dir.join(name), text)?;
        rep.note(format!("wrote {name}"));
    }
    Ok(rep.finish(None)?)
}

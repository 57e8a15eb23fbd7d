//! End-to-end acceptance checks. Each test prints exactly one line
//!
//! ```text
//! check=<name> value=<v> tol=<t> pass=<bool>
//! ```
//!
//! (run with `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing tests too). `value` is the measured defect for the check and
//! `tol` its bound; auxiliary gates (runtimes, negative controls,
//! convergence orders) are folded into `pass` and asserted with their own
//! messages.
//!
//! `sliced_entrywise_convergence` is EXPECTED TO FAIL — pointwise
//! convergence of the sliced kernel is not a property the composition has;
//! see that test and the README section "Known failing check".

use std::time::Instant;

use galilei::algebra::{rat, Rat};
use galilei::eig::SpectralHamiltonian;
use galilei::fixtures;
use galilei::grid::{SpatialGrid, WaveFunction, C64};
use galilei::lagrangian::{
    boost_divergence_defect, scaling_equivalence_defect, ActionKind, Path, Potential, System,
};
use galilei::propagator::{
    analytic_kernel, build_sliced, build_spectral, check_boost_identity,
    check_boost_identity_two_free, schrodinger_residual, KernelKind,
};
use galilei::rng::PathDraw;
use galilei::symmetry::{
    boost_rep_defect, check_solution_map, commutator_defect, expected_projective_phase,
    phase_distance, projective_phase, projective_phase_two_particle, Picture, WaveFunction2P,
    WaveOperator,
};

fn print_check(name: &str, value: f64, tol: f64, pass: bool) {
    println!("check={name} value={value:.6e} tol={tol:.3e} pass={pass}");
}

fn last_pair_order(values: &[f64]) -> f64 {
    let n = values.len();
    (values[n - 2] / values[n - 1]).log2()
}

fn assert_close_to_frozen(measured: &[f64], frozen: &[f64], rel: f64) {
    for (m, f) in measured.iter().zip(frozen) {
        assert!(
            (m - f).abs() <= rel * f.abs(),
            "drifted from the frozen reference: measured {m:.6e}, expected {f:.6e}"
        );
    }
}

fn free_packets(grid: SpatialGrid) -> Vec<WaveFunction> {
    let a = WaveFunction::gaussian(grid, 0.0, 1.0, 0.0);
    let b = WaveFunction::gaussian(grid, 1.5, 0.7, 2.0);
    let c = WaveFunction::gaussian(grid, -1.0, 0.8, -0.5);
    let d = WaveFunction::gaussian(grid, 1.2, 0.6, 1.0);
    let mixed_values: Vec<C64> = c
        .values
        .iter()
        .zip(&d.values)
        .map(|(x, y)| x + 0.6 * y)
        .collect();
    vec![a, b, WaveFunction::new(grid, mixed_values).unwrap()]
}

// ------------------------------------------------------------------ algebra

/// The ten-generator algebra has a one-dimensional space of closed
/// two-forms modulo exact ones, computed through two independent ranks,
/// and the mass pairing is its representative: closed but not exact.
#[test]
fn central_charge_dimension() {
    let start = Instant::now();
    let alg = fixtures::galilei_algebra();
    assert!(alg.jacobi_holds(), "structure constants must close");
    let coh = alg.cohomology();
    let mass = fixtures::mass_two_form();
    let closed = alg.is_closed(&mass).unwrap();
    let witness = alg.exactness_witness(&mass).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    assert_eq!(coh.two_cochain_dim, 45);
    assert_eq!(coh.closed_dim, 10, "nullity of the closedness system");
    assert_eq!(coh.exact_dim, 9, "rank of the coboundary map");
    let value = (coh.h2_dim as f64 - 1.0).abs()
        + (coh.closed_dim as f64 - coh.exact_dim as f64 - 1.0).abs();
    let pass = value == 0.0 && closed && witness.is_none() && elapsed < 1.0;
    print_check("central_charge_dimension", value, 0.0, pass);
    assert!(closed, "mass two-form must be closed");
    assert!(witness.is_none(), "mass two-form must not be exact");
    assert!(elapsed < 1.0, "took {elapsed:.3}s");
    assert!(pass);
}

/// Every coboundary hands back a witness whose coboundary reproduces the
/// input exactly in rational arithmetic, while the removal attempt on the
/// mass pairing comes back empty.
#[test]
fn witness_reconstruction() {
    let alg = fixtures::galilei_algebra();
    assert!(
        alg.exactness_witness(&fixtures::mass_two_form())
            .unwrap()
            .is_none(),
        "the obstruction must not admit a witness"
    );

    let mut one_cochains: Vec<Vec<Rat>> = Vec::new();
    let mut phi = vec![rat(0, 1); 10];
    phi[1] = rat(1, 1);
    one_cochains.push(phi);
    let mut phi = vec![rat(0, 1); 10];
    phi[0] = rat(2, 1);
    phi[5] = rat(-1, 3);
    phi[8] = rat(1, 1);
    one_cochains.push(phi);
    let mut phi = vec![rat(0, 1); 10];
    phi[2] = rat(-2, 1);
    phi[7] = rat(5, 1);
    one_cochains.push(phi);

    let mut mismatches = 0usize;
    for phi in &one_cochains {
        let b = alg.coboundary(phi).unwrap();
        let witness = alg
            .exactness_witness(&b)
            .unwrap()
            .expect("a coboundary is exact by construction");
        if alg.coboundary(&witness).unwrap() != b {
            mismatches += 1;
        }
    }
    let pass = mismatches == 0;
    print_check("witness_reconstruction", mismatches as f64, 0.0, pass);
    assert!(pass, "{mismatches} witnesses failed to reproduce their input");
}

// ------------------------------------------------------------------- action

fn divergence_sweep(defect: impl Fn(&PathDraw, &Path, &System) -> f64) -> Vec<f64> {
    [1024usize, 2048, 4096]
        .iter()
        .map(|&n| {
            (0..20)
                .map(|k| {
                    let draw = PathDraw::sample(k);
                    let path = Path::cubic_from_draw(&draw, n);
                    let system = System::free(vec![draw.mass]);
                    defect(&draw, &path, &system)
                })
                .fold(0.0f64, f64::max)
        })
        .collect()
}

/// The action changes under a boost by exactly the boundary term of the
/// accompanying total time derivative, to quadrature accuracy, on twenty
/// random cubic paths.
#[test]
fn boost_total_derivative() {
    let sweep = divergence_sweep(|draw, path, system| {
        boost_divergence_defect(path, system, &[draw.boost]).unwrap()
    });
    let order = last_pair_order(&sweep);
    let value = *sweep.last().unwrap();
    let tol = 1e-8;
    let pass = value <= tol && order >= 1.9;
    print_check("boost_total_derivative", value, tol, pass);
    assert!(pass, "defect {value:.3e} at 4096 intervals, order {order:.2}");
}

/// Replacing the integrand by its rescaled form changes the action by
/// exactly the boundary values of the scaling term, on the same paths.
#[test]
fn scaling_total_derivative() {
    let sweep =
        divergence_sweep(|_, path, system| scaling_equivalence_defect(path, system).unwrap());
    let order = last_pair_order(&sweep);
    let value = *sweep.last().unwrap();
    let tol = 1e-8;
    let pass = value <= tol && order >= 1.9;
    print_check("scaling_total_derivative", value, tol, pass);
    assert!(pass, "defect {value:.3e} at 4096 intervals, order {order:.2}");
}

// -------------------------------------------------------------- propagators

/// The spectral kernel at coincident times acts as the identity on
/// packets, and the equation residual of spectrally evolved free packets
/// converges at second order under mesh halving.
#[test]
fn spectral_delta_and_residual_order() {
    let start = Instant::now();

    let grid = SpatialGrid::centered(256, 12.0).unwrap();
    let ham = SpectralHamiltonian::build(grid, 1.0, 1.0, |_| 0.0).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.0, 1.0, 0.5);
    let back = ham.kernel(0.0).apply(&psi).unwrap();
    let delta_dev = psi
        .values
        .iter()
        .zip(&back.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max)
        / psi.max_abs();

    let system = System::free(vec![1.0]);
    let mut residuals = Vec::new();
    for (n, nt) in [(128usize, 8usize), (256, 16), (512, 32), (1024, 64)] {
        let grid = SpatialGrid::centered(n, 12.0).unwrap();
        let ham = SpectralHamiltonian::build(grid, 1.0, 1.0, |_| 0.0).unwrap();
        let psi0 = WaveFunction::gaussian(grid, 0.0, 1.0, 0.5);
        let dt = 0.6 / nt as f64;
        let times: Vec<f64> = (0..=nt).map(|j| 0.2 + j as f64 * dt).collect();
        let series: Vec<Vec<C64>> = times
            .iter()
            .map(|&t| ham.evolve(&psi0, t).unwrap().values)
            .collect();
        residuals.push(
            schrodinger_residual(&system, 1.0, &grid, &times, &series, ActionKind::Standard, 3)
                .unwrap(),
        );
    }
    assert_close_to_frozen(
        &residuals,
        &[6.595e-4, 1.697e-4, 4.274e-5, 1.070e-5],
        0.02,
    );
    let order = last_pair_order(&residuals);
    let elapsed = start.elapsed().as_secs_f64();

    let value = (order - 2.0).abs();
    let tol = 0.3;
    let pass = value <= tol && delta_dev <= 1e-12 && elapsed < 30.0;
    print_check("spectral_delta_and_residual_order", value, tol, pass);
    assert!(delta_dev <= 1e-12, "coincident-time kernel moved a packet by {delta_dev:.3e}");
    assert!(elapsed < 30.0, "sweep took {elapsed:.1}s");
    assert!(pass, "residual order {order:.2}, residuals {residuals:?}");
}

/// EXPECTED FAILURE. Pointwise, the sliced free kernel does not approach
/// the closed-form kernel as the slicing is refined: the deviation grows.
/// Each factor is a resolved chirp, but the composed grid sum accumulates
/// an O(1) boundary contribution at every entry, because the integrand of
/// each intermediate integral has modulus one everywhere and the grid
/// truncates it sharply; only packet-smeared quantities converge (see the
/// library tests and the propagate cross-checks). The check line and this
/// failure document the measured behaviour honestly instead of relaxing
/// the bound.
#[test]
fn sliced_entrywise_convergence() {
    let grid = SpatialGrid::centered(512, 2.0).unwrap();
    let system = System::free(vec![1.0]);
    let exact = analytic_kernel(KernelKind::Free, &system, 1.0, &grid, 0.0, 1.0).unwrap();
    let window = grid.window_abs_le(0.85 * 2.0);

    let mut denom = 0.0f64;
    for &i in &window {
        for &j in &window {
            denom = denom.max(exact.get(i, j).norm());
        }
    }
    let mut errs = Vec::new();
    for n_intervals in [8usize, 16, 32, 64] {
        let sliced =
            build_sliced(&system, 1.0, &grid, 0.0, 1.0, n_intervals, ActionKind::Standard)
                .unwrap();
        let mut worst = 0.0f64;
        for &i in &window {
            for &j in &window {
                worst = worst.max((sliced.get(i, j) - exact.get(i, j)).norm());
            }
        }
        errs.push(worst / denom);
    }
    assert_close_to_frozen(&errs, &[9.521e-1, 1.159, 1.417, 1.806], 0.02);

    let value = *errs.last().unwrap();
    let tol = 1e-3;
    let monotone_decrease = errs.windows(2).all(|w| w[1] < w[0]);
    print_check("sliced_entrywise_convergence", value, tol, value <= tol && monotone_decrease);
    panic!(
        "pointwise kernel error grows with refinement ({errs:?} over 8/16/32/64 intervals): \
         entrywise convergence of the sliced composition is not attainable — the composed \
         unimodular-integrand grid sums accumulate O(1) window-boundary contributions at \
         every entry. Packet-level convergence is verified elsewhere (library tests, \
         propagate cross-route checks). See README, section \"Known failing check\"."
    );
}

/// Shifting both kernel arguments by `tu` and multiplying the documented
/// boundary phases reproduces the free kernel (single and two particle);
/// a confining potential admits no such spatially uniform phase, so the
/// same identity fails by orders of magnitude — a negative control.
#[test]
fn kernel_boost_identity() {
    let grid = SpatialGrid::with_spacing(512, 0.025).unwrap();
    let system = System::free(vec![1.0]);
    let kernel = analytic_kernel(KernelKind::Free, &system, 1.0, &grid, 0.0, 1.0).unwrap();
    let one_particle = check_boost_identity(&kernel, 1.0, 1.0, 0.0, 1.0, 0.7, 0.15).unwrap();

    let grid2 = SpatialGrid::with_spacing(65, 0.1).unwrap();
    let two_particle =
        check_boost_identity_two_free([1.0, 2.0], 1.0, &grid2, 0.0, 1.0, 0.5, 0.15).unwrap();

    let harmonic = System {
        masses: vec![1.0],
        potential: Potential::Harmonic { omega: 1.0 },
    };
    let hk = build_spectral(&harmonic, 1.0, &grid, 0.0, 1.0, ActionKind::Standard, 0).unwrap();
    let negative = check_boost_identity(&hk, 1.0, 1.0, 0.0, 1.0, 0.7, 0.15).unwrap();

    let value = one_particle.max(two_particle);
    let tol = 1e-5;
    let pass = value <= tol && negative > 1e-1;
    print_check("kernel_boost_identity", value, tol, pass);
    assert!(
        negative > 1e-1,
        "confined-case control unexpectedly satisfied the identity: {negative:.3e}"
    );
    assert!(pass, "1p {one_particle:.3e}, 2p {two_particle:.3e}");
}

// ----------------------------------------------------------- wave functions

/// Transforming an evolved state equals evolving the transformed state,
/// for the boost in the standard picture and for space/time translations
/// in the rescaled picture.
#[test]
fn transform_vs_evolve() {
    let grid = SpatialGrid::with_spacing(512, 1.0 / 32.0).unwrap();
    let window = grid.window_abs_le(0.85 * grid.x_max());
    let system = System::free(vec![1.0]);

    let boost = WaveOperator::parse("boost:u=0.5;picture=standard", 1.0, 1.0).unwrap();
    let psi_std = WaveFunction::gaussian(grid, -0.25, 1.25, 0.0);
    let d_boost = check_solution_map(&boost, &system, &psi_std, 0.0, 1.0, 256, &window).unwrap();

    let psi_noe = WaveFunction::gaussian(grid, 0.0, 0.6, 0.0);
    let space = WaveOperator::parse("space:b=0.25;picture=noether", 1.0, 1.0).unwrap();
    let d_space = check_solution_map(&space, &system, &psi_noe, 1.0, 2.0, 256, &window).unwrap();
    let time = WaveOperator::parse("time:a=0.2;picture=noether", 1.0, 1.0).unwrap();
    let d_time = check_solution_map(&time, &system, &psi_noe, 1.0, 2.0, 256, &window).unwrap();

    let value = d_boost.max(d_space).max(d_time);
    let tol = 1e-4;
    let pass = value <= tol && value >= 1e-7;
    print_check("transform_vs_evolve", value, tol, pass);
    assert!(
        value >= 1e-7,
        "suspiciously exact for finite-difference evolution: {value:.3e}"
    );
    assert!(pass, "boost {d_boost:.3e}, space {d_space:.3e}, time {d_time:.3e}");
}

/// Swapping the order of a space translation and a boost multiplies the
/// state by the constant phase exp{−i·M·b·u/ħ}: the ratio is constant
/// across the grid and matches the predicted phase in both pictures, for
/// three parameter triples, three packets, and a two-particle state whose
/// phase carries the total mass.
#[test]
fn projective_multiplier() {
    let grid = SpatialGrid::with_spacing(512, 1.0 / 32.0).unwrap();
    let t = 1.0;
    let mut worst_dev = 0.0f64;
    let mut worst_phase = 0.0f64;
    for picture in ["standard", "noether"] {
        // b and u·t must be whole numbers of grid cells (dx = 1/32) so the
        // translations are exact sample shifts rather than interpolations.
        for (m, b, u) in [(1.0, 0.5, 2.0), (1.5, 0.25, 1.0), (0.7, 0.75, 1.25)] {
            let space = WaveOperator::parse(&format!("space:b={b};picture={picture}"), m, 1.0)
                .unwrap();
            let boost = WaveOperator::parse(&format!("boost:u={u};picture={picture}"), m, 1.0)
                .unwrap();
            let target = expected_projective_phase(m, 1.0, b, u);
            for psi in free_packets(grid) {
                let stats = projective_phase(&space, &boost, &psi, t).unwrap();
                worst_dev = worst_dev.max(stats.max_dev);
                worst_phase = worst_phase.max(phase_distance(stats.phase, target));
            }
        }
    }

    let grid2 = SpatialGrid::with_spacing(65, 0.1).unwrap();
    let psi2 = WaveFunction2P::from_fn(grid2, [1.0, 2.0], |x1, x2| {
        let envelope = -((x1 - 0.4) / 0.8).powi(2) / 4.0 - ((x2 + 0.3) / 0.7).powi(2) / 4.0;
        C64::new(envelope.exp(), 0.0) * C64::new(0.0, 0.5 * x1 - 0.2 * x2).exp()
    });
    let target2 = expected_projective_phase(3.0, 1.0, 0.3, 0.5);
    assert!((target2 - (-0.45)).abs() < 1e-15);
    for picture in ["standard", "noether"] {
        let space = WaveOperator::parse(&format!("space:b=0.3;picture={picture}"), 1.0, 1.0)
            .unwrap();
        let boost = WaveOperator::parse(&format!("boost:u=0.5;picture={picture}"), 1.0, 1.0)
            .unwrap();
        let stats = projective_phase_two_particle(&space, &boost, &psi2, t).unwrap();
        worst_dev = worst_dev.max(stats.max_dev);
        worst_phase = worst_phase.max(phase_distance(stats.phase, target2));
    }

    let tol = 1e-8;
    let pass = worst_dev <= tol && worst_phase <= 1e-10;
    print_check("projective_multiplier", worst_dev, tol, pass);
    assert!(worst_phase <= 1e-10, "phase off by {worst_phase:.3e}");
    assert!(pass, "ratio wander {worst_dev:.3e}");
}

/// Boosts compose without any phase: applying u₁ then u₂ equals applying
/// u₁+u₂ to within grid interpolation accuracy, in both pictures.
#[test]
fn boost_true_representation() {
    let grid = SpatialGrid::with_spacing(1024, 0.025).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.3, 1.0, 0.8);
    let window = grid.window_margin_frac(0.15);
    let mut worst = 0.0f64;
    for picture in [Picture::Standard, Picture::Noether] {
        for (u1, u2) in [(0.3, 0.4), (0.5, -0.5)] {
            worst = worst
                .max(boost_rep_defect(picture, 1.0, 1.0, &psi, 1.0, u1, u2, &window).unwrap());
        }
    }
    let tol = 1e-6;
    let pass = worst <= tol;
    print_check("boost_true_representation", worst, tol, pass);
    assert!(pass, "composition defect {worst:.3e}");
}

/// The commutator of the numerical space-translation and boost generators
/// is the constant mass phase i·M/ħ on states, with the defect shrinking
/// as the generator step and the grid are refined together.
#[test]
fn central_extension_commutator() {
    let coarse_grid = SpatialGrid::with_spacing(512, 0.025).unwrap();
    let coarse_psi = WaveFunction::gaussian(coarse_grid, 0.0, 1.0, 0.3);
    let coarse_window = coarse_grid.window_abs_le(0.85 * coarse_grid.x_max());
    let coarse = commutator_defect(
        Picture::Standard,
        1.0,
        1.0,
        &coarse_psi,
        1.0,
        1e-3,
        &coarse_window,
    )
    .unwrap();

    let fine_grid = SpatialGrid::with_spacing(1024, 0.0125).unwrap();
    let fine_psi = WaveFunction::gaussian(fine_grid, 0.0, 1.0, 0.3);
    let fine_window = fine_grid.window_abs_le(0.85 * fine_grid.x_max());
    let fine = commutator_defect(
        Picture::Standard,
        1.0,
        1.0,
        &fine_psi,
        1.0,
        1e-4,
        &fine_window,
    )
    .unwrap();

    assert_close_to_frozen(&[coarse, fine], &[1.867e-4, 4.528e-5], 0.02);
    let tol = 1e-3;
    let pass = fine <= tol && fine < coarse;
    print_check("central_extension_commutator", fine, tol, pass);
    assert!(fine < coarse, "no convergence: coarse {coarse:.3e}, fine {fine:.3e}");
    assert!(pass, "fine-step defect {fine:.3e}");
}

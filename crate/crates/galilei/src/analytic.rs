//! Closed-form propagation kernels and reference states.
//!
//! * Free particle: `K(x″,t₂; x′,t₁) = √(m/(2πiħT))·exp(i m (x″−x′)²/(2ħT))`,
//!   `T = t₂ − t₁`.
//! * Harmonic oscillator (Mehler):
//!   `K = √(mω/(2πiħ sin ωT))·exp{ i mω [ (x″²+x′²) cos ωT − 2x″x′ ] / (2ħ sin ωT) }`,
//!   valid away from the caustics `sin ωT = 0`; it reduces to the free kernel
//!   as `ω → 0`.
//! * Free Gaussian packets evolve in closed form, giving an independent check
//!   of any grid propagator.
//!
//! The semigroup (composition) property `K(3,1) = ∫K(3,2)K(2,1) dx₂` involves
//! a non-decaying oscillatory integrand; on the real axis a Riemann sum never
//! converges, so the quadrature here follows the steepest-descent line
//! through the stationary point (slope `e^{iπ/4}`), where the integrand is a
//! decaying Gaussian and Gauss–Legendre quadrature converges spectrally.

use std::f64::consts::PI;

use crate::grid::{C64, I};
use crate::{Error, Result};

/// Free-particle kernel.
pub fn free_kernel(mass: f64, hbar: f64, t1: f64, t2: f64, x_out: f64, x_in: f64) -> Result<C64> {
    let t_span = t2 - t1;
    if t_span == 0.0 {
        return Err(Error::InvalidArgument(
            "free kernel is a delta distribution at zero time span".into(),
        ));
    }
    let pref = (C64::new(mass, 0.0) / (C64::new(0.0, 2.0 * PI * hbar * t_span))).sqrt();
    let dxv = x_out - x_in;
    Ok(pref * (I * (mass * dxv * dxv / (2.0 * hbar * t_span))).exp())
}

/// Harmonic-oscillator (Mehler) kernel; errors on a caustic.
pub fn harmonic_kernel(
    mass: f64,
    omega: f64,
    hbar: f64,
    t1: f64,
    t2: f64,
    x_out: f64,
    x_in: f64,
) -> Result<C64> {
    let t_span = t2 - t1;
    let s = (omega * t_span).sin();
    if s.abs() < 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "harmonic kernel caustic: sin(ωT) = {s:.3e} at ωT = {}",
            omega * t_span
        )));
    }
    let c = (omega * t_span).cos();
    let pref = (C64::new(mass * omega, 0.0) / C64::new(0.0, 2.0 * PI * hbar * s)).sqrt();
    let phase = mass * omega * ((x_out * x_out + x_in * x_in) * c - 2.0 * x_out * x_in)
        / (2.0 * hbar * s);
    Ok(pref * (I * phase).exp())
}

/// Closed-form free evolution of the Gaussian
/// `ψ(x, 0) ∝ exp(−(x−x0)²/(4σ0²) + i k0 (x−x0))` (see below for the exact
/// normalization): at time `t`,
///
/// `ψ(x,t) = (2π)^(−1/4) √(σ0/a) · exp(−(x−x0−v t)²/(4a) + i k0 (x−x0) − i ħk0² t/(2m))`
///
/// with `a = σ0² + iħt/(2m)` and `v = ħ k0/m`. The prefactor normalizes
/// `∫|ψ|²dx = 1` in the continuum.
pub fn gaussian_free_state(
    mass: f64,
    hbar: f64,
    x0: f64,
    sigma0: f64,
    k0: f64,
    t: f64,
    x: f64,
) -> C64 {
    let a = C64::new(sigma0 * sigma0, hbar * t / (2.0 * mass));
    let pref = (2.0 * PI).powf(-0.25) * (C64::new(sigma0, 0.0) / a).sqrt();
    let xc = x - x0 - hbar * k0 * t / mass;
    pref * ((-C64::new(xc * xc, 0.0)) / (4.0 * a)
        + I * (k0 * (x - x0))
        - I * (hbar * k0 * k0 * t / (2.0 * mass)))
        .exp()
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one node".into()));
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess for the i-th positive root
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P'_n(x) via the three-term recurrence
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n, p0 = P_{n−1}
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// Relative deviation of the free-kernel semigroup property
/// `K(x″,t₃; x′,t₁) = ∫ K(x″,t₃; y,t₂)·K(y,t₂; x′,t₁) dy`, evaluated by
/// Gauss–Legendre quadrature along the steepest-descent contour
/// `y(s) = y* + e^{iπ/4}·s`, `s ∈ [−S, S]`, through the stationary point
/// `y* = (a x″ + b x′)/(a + b)` with `a = m/(2ħ(t₃−t₂))`, `b = m/(2ħ(t₂−t₁))`.
/// `S = 7/√(a+b)` covers the Gaussian decay to below double precision.
pub fn semigroup_contour_deviation(
    mass: f64,
    hbar: f64,
    t1: f64,
    t2: f64,
    t3: f64,
    x_out: f64,
    x_in: f64,
    nodes: usize,
) -> Result<f64> {
    if !(t1 < t2 && t2 < t3) {
        return Err(Error::InvalidArgument("need t1 < t2 < t3".into()));
    }
    let a = mass / (2.0 * hbar * (t3 - t2));
    let b = mass / (2.0 * hbar * (t2 - t1));
    let ystar = (a * x_out + b * x_in) / (a + b);
    let half_width = 7.0 / (a + b).sqrt();
    let (gl_nodes, gl_weights) = gauss_legendre(nodes)?;
    let rot = (I * (PI / 4.0)).exp();
    // the kernels continue analytically: evaluate with complex y
    let kernel_c = |xa: C64, xb: C64, ta: f64, tb: f64| -> C64 {
        let span = tb - ta;
        let pref = (C64::new(mass, 0.0) / C64::new(0.0, 2.0 * PI * hbar * span)).sqrt();
        let d = xa - xb;
        pref * (I * (mass / (2.0 * hbar * span)) * d * d).exp()
    };
    let mut integral = C64::new(0.0, 0.0);
    for (&s, &w) in gl_nodes.iter().zip(&gl_weights) {
        let y = C64::new(ystar, 0.0) + rot * (half_width * s);
        let f = kernel_c(C64::new(x_out, 0.0), y, t2, t3) * kernel_c(y, C64::new(x_in, 0.0), t1, t2);
        integral += f * w;
    }
    integral *= rot * half_width;
    let exact = free_kernel(mass, hbar, t1, t3, x_out, x_in)?;
    Ok((integral - exact).norm() / exact.norm())
}

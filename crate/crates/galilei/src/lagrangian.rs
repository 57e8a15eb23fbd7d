//! Sampled classical paths, Lagrangians, discrete actions, Euler–Lagrange
//! residuals, and total-derivative (boundary-term) identities under boosts.
//!
//! Two Lagrangians are supported for a system of masses `m_j` in one spatial
//! dimension per coordinate:
//!
//! * standard: `L = Σ_j m_j v_j²/2 − U(x)`;
//! * scaled:  `L̃ = Σ_j (m_j/2)(v_j − x_j/t)² − U(x)` — the kinetic term is
//!   `(m/2)·t²·[d(x/t)/dt]²`, which differs from the standard one by the
//!   total derivative `d/dt[−Σ_j m_j x_j²/(2t)]`, so both produce the same
//!   equations of motion (the scaled form needs `t ≠ 0`).
//!
//! Under a boost `x ↦ x − u·t` the standard free (and pairwise-interacting)
//! Lagrangian changes by the total derivative of
//! `F(t, x) = Σ_j m_j u_j (t u_j/2 − x_j)`, so the boosted action differs
//! from the original by boundary terms only. The checks in this module
//! measure that statement on sampled paths with second-order finite
//! differences and trapezoid quadrature.

use crate::rng::PathDraw;
use crate::{Error, Result};

/// A path sampled at strictly increasing times; `coords[k]` holds the `d`
/// coordinates at `times[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub times: Vec<f64>,
    pub coords: Vec<Vec<f64>>,
}

impl Path {
    pub fn new(times: Vec<f64>, coords: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != coords.len() {
            return Err(Error::Dimension(format!(
                "{} times vs {} coordinate rows",
                times.len(),
                coords.len()
            )));
        }
        if times.len() < 3 {
            return Err(Error::InvalidArgument(
                "a path needs at least 3 samples".into(),
            ));
        }
        let d = coords[0].len();
        if d == 0 || coords.iter().any(|row| row.len() != d) {
            return Err(Error::Dimension("ragged coordinate rows".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(Path { times, coords })
    }

    pub fn nsamples(&self) -> usize {
        self.times.len()
    }

    pub fn ncoords(&self) -> usize {
        self.coords[0].len()
    }

    /// Uniform time step, or an error if the spacing varies by more than
    /// one part in 10⁹.
    pub fn uniform_dt(&self) -> Result<f64> {
        let dt = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs() {
                return Err(Error::InvalidArgument(
                    "operation requires uniformly sampled times".into(),
                ));
            }
        }
        Ok(dt)
    }

    /// Sample a 1-D cubic path from a deterministic draw on `t ∈ [1, 2]`
    /// with `n` intervals (`n + 1` points).
    pub fn cubic_from_draw(draw: &PathDraw, n: usize) -> Path {
        let dt = 1.0 / n as f64;
        let times: Vec<f64> = (0..=n).map(|k| 1.0 + dt * k as f64).collect();
        let coords = times.iter().map(|&t| vec![draw.position(t)]).collect();
        Path { times, coords }
    }

    /// The boosted image of this path: `x_j(t) ↦ x_j(t) − u_j·t`.
    pub fn boosted(&self, u: &[f64]) -> Result<Path> {
        if u.len() != self.ncoords() {
            return Err(Error::Dimension(format!(
                "boost has {} components, path has {}",
                u.len(),
                self.ncoords()
            )));
        }
        let coords = self
            .times
            .iter()
            .zip(&self.coords)
            .map(|(&t, row)| row.iter().zip(u).map(|(&x, &uu)| x - uu * t).collect())
            .collect();
        Ok(Path {
            times: self.times.clone(),
            coords,
        })
    }

    /// Central-difference velocities (second-order one-sided at the ends).
    pub fn central_velocities(&self) -> Result<Vec<Vec<f64>>> {
        let dt = self.uniform_dt()?;
        let n = self.nsamples();
        let d = self.ncoords();
        let mut v = vec![vec![0.0; d]; n];
        for j in 0..d {
            for k in 1..n - 1 {
                v[k][j] = (self.coords[k + 1][j] - self.coords[k - 1][j]) / (2.0 * dt);
            }
            v[0][j] =
                (-3.0 * self.coords[0][j] + 4.0 * self.coords[1][j] - self.coords[2][j]) / (2.0 * dt);
            v[n - 1][j] = (3.0 * self.coords[n - 1][j] - 4.0 * self.coords[n - 2][j]
                + self.coords[n - 3][j])
                / (2.0 * dt);
        }
        Ok(v)
    }
}

/// Potential energy of the configuration.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Free,
    /// `U = Σ_j m_j ω² x_j² / 2`.
    Harmonic { omega: f64 },
    /// `U = (k/2) Σ_{i<j} (x_i − x_j)²` — translation- and boost-invariant.
    PairwiseHooke { hooke: f64 },
}

impl Potential {
    pub fn value(&self, masses: &[f64], x: &[f64]) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Harmonic { omega } => {
                0.5 * omega
                    * omega
                    * masses
                        .iter()
                        .zip(x)
                        .map(|(&m, &xi)| m * xi * xi)
                        .sum::<f64>()
            }
            Potential::PairwiseHooke { hooke } => {
                let mut u = 0.0;
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        let dxy = x[i] - x[j];
                        u += 0.5 * hooke * dxy * dxy;
                    }
                }
                u
            }
        }
    }

    pub fn gradient(&self, masses: &[f64], x: &[f64]) -> Vec<f64> {
        match self {
            Potential::Free => vec![0.0; x.len()],
            Potential::Harmonic { omega } => masses
                .iter()
                .zip(x)
                .map(|(&m, &xi)| m * omega * omega * xi)
                .collect(),
            Potential::PairwiseHooke { hooke } => {
                let mut g = vec![0.0; x.len()];
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        let f = hooke * (x[i] - x[j]);
                        g[i] += f;
                        g[j] -= f;
                    }
                }
                g
            }
        }
    }

    /// Parse `free`, `harmonic:omega=W`, or `pairwise:hooke:k=K`.
    pub fn parse(s: &str) -> Result<Potential> {
        let s = s.trim();
        if s == "free" {
            return Ok(Potential::Free);
        }
        if let Some(rest) = s.strip_prefix("harmonic:omega=") {
            let omega: f64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad omega in `{s}`")))?;
            return Ok(Potential::Harmonic { omega });
        }
        if let Some(rest) = s.strip_prefix("pairwise:hooke:k=") {
            let hooke: f64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad spring constant in `{s}`")))?;
            return Ok(Potential::PairwiseHooke { hooke });
        }
        Err(Error::Parse(format!("unknown potential `{s}`")))
    }
}

/// Masses plus potential.
#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub masses: Vec<f64>,
    pub potential: Potential,
}

impl System {
    pub fn free(masses: Vec<f64>) -> Self {
        System {
            masses,
            potential: Potential::Free,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Standard Lagrangian `Σ m v²/2 − U`.
    pub fn lagrangian(&self, _t: f64, x: &[f64], v: &[f64]) -> f64 {
        let kin: f64 = self
            .masses
            .iter()
            .zip(v)
            .map(|(&m, &vj)| 0.5 * m * vj * vj)
            .sum();
        kin - self.potential.value(&self.masses, x)
    }

    /// Scaled Lagrangian `Σ (m/2)(v − x/t)² − U`; requires `t ≠ 0`.
    pub fn scaled_lagrangian(&self, t: f64, x: &[f64], v: &[f64]) -> f64 {
        let kin: f64 = self
            .masses
            .iter()
            .zip(x.iter().zip(v))
            .map(|(&m, (&xj, &vj))| {
                let w = vj - xj / t;
                0.5 * m * w * w
            })
            .sum();
        kin - self.potential.value(&self.masses, x)
    }

    /// Boundary function whose total derivative relates the two Lagrangians:
    /// `L̃ = L + dF/dt` with `F(t, x) = −Σ m_j x_j²/(2t)`.
    pub fn scaling_boundary_term(&self, t: f64, x: &[f64]) -> f64 {
        -self
            .masses
            .iter()
            .zip(x)
            .map(|(&m, &xj)| m * xj * xj)
            .sum::<f64>()
            / (2.0 * t)
    }

    /// Boundary function for a boost `x ↦ x − u·t`:
    /// `L(boosted) − L = dF/dt` with `F(t, x) = Σ m_j u_j (t u_j/2 − x_j)`
    /// (exact for free and pairwise-invariant potentials).
    pub fn boost_boundary_term(&self, t: f64, x: &[f64], u: &[f64]) -> f64 {
        self.masses
            .iter()
            .zip(x.iter().zip(u))
            .map(|(&m, (&xj, &uj))| m * uj * (t * uj / 2.0 - xj))
            .sum()
    }
}

/// Which Lagrangian enters a discrete action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    Standard,
    Scaled,
}

/// Discretization of the action integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrature {
    /// Left-endpoint rectangle rule with forward-difference velocities —
    /// the time-sliced form `Σ_k L(t_k, x_k, (x_{k+1}−x_k)/Δt_k)·Δt_k`.
    ForwardRectangle,
    /// Trapezoid rule with central-difference velocities (second order).
    CentralTrapezoid,
}

/// Discrete action of a sampled path.
pub fn action(path: &Path, system: &System, kind: ActionKind, quad: Quadrature) -> Result<f64> {
    if system.masses.len() != path.ncoords() {
        return Err(Error::Dimension(format!(
            "{} masses vs {} coordinates",
            system.masses.len(),
            path.ncoords()
        )));
    }
    let lag = |t: f64, x: &[f64], v: &[f64]| match kind {
        ActionKind::Standard => system.lagrangian(t, x, v),
        ActionKind::Scaled => system.scaled_lagrangian(t, x, v),
    };
    match quad {
        Quadrature::ForwardRectangle => {
            let n = path.nsamples();
            let mut s = 0.0;
            let mut v = vec![0.0; path.ncoords()];
            for k in 0..n - 1 {
                let dt = path.times[k + 1] - path.times[k];
                for j in 0..v.len() {
                    v[j] = (path.coords[k + 1][j] - path.coords[k][j]) / dt;
                }
                s += lag(path.times[k], &path.coords[k], &v) * dt;
            }
            Ok(s)
        }
        Quadrature::CentralTrapezoid => {
            let dt = path.uniform_dt()?;
            let vels = path.central_velocities()?;
            let vals: Vec<f64> = path
                .times
                .iter()
                .zip(path.coords.iter().zip(&vels))
                .map(|(&t, (x, v))| lag(t, x, v))
                .collect();
            Ok(trapezoid(&vals, dt))
        }
    }
}

fn trapezoid(vals: &[f64], dt: f64) -> f64 {
    let n = vals.len();
    dt * (0.5 * vals[0] + vals[1..n - 1].iter().sum::<f64>() + 0.5 * vals[n - 1])
}

/// Euler–Lagrange residual `m_j ẍ_j + ∂U/∂x_j` at the interior samples
/// (central second differences). Rows are interior times `k = 1..n−2`.
pub fn el_residual(path: &Path, system: &System) -> Result<Vec<Vec<f64>>> {
    if system.masses.len() != path.ncoords() {
        return Err(Error::Dimension(format!(
            "{} masses vs {} coordinates",
            system.masses.len(),
            path.ncoords()
        )));
    }
    let dt = path.uniform_dt()?;
    let n = path.nsamples();
    let d = path.ncoords();
    let mut out = Vec::with_capacity(n - 2);
    for k in 1..n - 1 {
        let grad = system.potential.gradient(&system.masses, &path.coords[k]);
        let mut row = vec![0.0; d];
        for j in 0..d {
            let acc = (path.coords[k + 1][j] - 2.0 * path.coords[k][j] + path.coords[k - 1][j])
                / (dt * dt);
            row[j] = system.masses[j] * acc + grad[j];
        }
        out.push(row);
    }
    Ok(out)
}

/// Largest absolute Euler–Lagrange residual over interior samples.
pub fn el_residual_max(path: &Path, system: &System) -> Result<f64> {
    Ok(el_residual(path, system)?
        .iter()
        .flatten()
        .fold(0.0f64, |acc, r| acc.max(r.abs())))
}

/// Defect of the boost boundary-term identity on a sampled path:
///
/// `| ∫(L∘boost − L) dt − [F(t₂, x(t₂)) − F(t₁, x(t₁))] |`
///
/// with trapezoid quadrature over central-difference velocities. Exact for
/// free and pairwise potentials up to the O(Δt²) discretization defect this
/// function measures; an external potential (e.g. harmonic) breaks the
/// identity at order one.
pub fn boost_divergence_defect(path: &Path, system: &System, u: &[f64]) -> Result<f64> {
    if u.len() != path.ncoords() {
        return Err(Error::Dimension(format!(
            "boost has {} components, path has {}",
            u.len(),
            path.ncoords()
        )));
    }
    let dt = path.uniform_dt()?;
    let vels = path.central_velocities()?;
    let vals: Vec<f64> = path
        .times
        .iter()
        .zip(path.coords.iter().zip(&vels))
        .map(|(&t, (x, v))| {
            let xb: Vec<f64> = x.iter().zip(u).map(|(&xj, &uj)| xj - uj * t).collect();
            let vb: Vec<f64> = v.iter().zip(u).map(|(&vj, &uj)| vj - uj).collect();
            system.lagrangian(t, &xb, &vb) - system.lagrangian(t, x, v)
        })
        .collect();
    let integral = trapezoid(&vals, dt);
    let n = path.nsamples();
    let df = system.boost_boundary_term(path.times[n - 1], &path.coords[n - 1], u)
        - system.boost_boundary_term(path.times[0], &path.coords[0], u);
    Ok((integral - df).abs())
}

/// Defect of the scaled-Lagrangian equivalence on a sampled path:
///
/// `| ∫(L̃ − L) dt − [F(t₂, x(t₂)) − F(t₁, x(t₁))] |`, `F = −Σ m x²/(2t)`,
///
/// with trapezoid quadrature over central-difference velocities.
pub fn scaling_equivalence_defect(path: &Path, system: &System) -> Result<f64> {
    let dt = path.uniform_dt()?;
    let vels = path.central_velocities()?;
    let vals: Vec<f64> = path
        .times
        .iter()
        .zip(path.coords.iter().zip(&vels))
        .map(|(&t, (x, v))| system.scaled_lagrangian(t, x, v) - system.lagrangian(t, x, v))
        .collect();
    let integral = trapezoid(&vals, dt);
    let n = path.nsamples();
    let df = system.scaling_boundary_term(path.times[n - 1], &path.coords[n - 1])
        - system.scaling_boundary_term(path.times[0], &path.coords[0]);
    Ok((integral - df).abs())
}

//! Symmetry operators on wave functions: boosts, space and time
//! translations in two pictures, their projective composition phase, the
//! exact boost representation property, infinitesimal generators, and the
//! central-extension commutator.
//!
//! * **standard picture** — operators map solutions of the ordinary
//!   Schrödinger equation to solutions: a boost shifts the argument by `tu`
//!   and multiplies by `exp{−(i/ħ)mu(tu/2 − x)}`; a space translation is a
//!   plain argument shift.
//! * **noether picture** — operators map solutions of the scaled equation
//!   (`H_s = p²/2m + (x·p+p·x)/(2t) + U`) to solutions: the boost becomes a
//!   pure shift by `tu`, while space and time translations acquire the
//!   `1/t`-dressed phases.
//!
//! In both pictures composing a space translation with a boost in the two
//! orders differs by the constant phase `exp{−(i/ħ)M·b·u}` — the projective
//! phase whose infinitesimal counterpart is the central term measured by
//! `commutator_defect`.

use crate::grid::{l2_weighted, rel_l2_windowed, SpatialGrid, WaveFunction, C64, I};
use crate::lagrangian::{ActionKind, System};
use crate::propagator::{build_spectral, cn_evolve_scaled};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picture {
    Standard,
    Noether,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    Boost { u: f64 },
    Space { b: f64 },
    Time { a: f64 },
    /// One-dimensional remnant of rotations: parity (`+1` identity, `−1`
    /// reflection through the grid center, which is exact on centered grids).
    Rotation { parity: i8 },
}

/// A one-parameter symmetry operator acting on wave functions at a fixed
/// time `t` (supplied at application, since the realizations are
/// time-dependent).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveOperator {
    pub kind: OperatorKind,
    pub picture: Picture,
    pub mass: f64,
    pub hbar: f64,
}

impl WaveOperator {
    pub fn new(kind: OperatorKind, picture: Picture, mass: f64, hbar: f64) -> Result<Self> {
        if mass <= 0.0 || hbar <= 0.0 {
            return Err(Error::InvalidArgument("mass and ħ must be positive".into()));
        }
        if let OperatorKind::Rotation { parity } = kind {
            if parity != 1 && parity != -1 {
                return Err(Error::InvalidArgument("parity must be ±1".into()));
            }
        }
        Ok(WaveOperator {
            kind,
            picture,
            mass,
            hbar,
        })
    }

    /// Parse `kind:param=value[;picture=standard|noether]`, e.g.
    /// `boost:u=0.5;picture=standard` or `space:b=0.25;picture=noether`.
    /// The picture defaults to `standard`.
    pub fn parse(text: &str, mass: f64, hbar: f64) -> Result<Self> {
        let (kind_name, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("operator `{text}`: expected `kind:param=...`")))?;
        let mut param: Option<(String, f64)> = None;
        let mut picture = Picture::Standard;
        for piece in rest.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (k, v) = piece
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("operator field `{piece}`: expected k=v")))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "picture" {
                picture = match v {
                    "standard" => Picture::Standard,
                    "noether" => Picture::Noether,
                    other => {
                        return Err(Error::Parse(format!("unknown picture `{other}`")));
                    }
                };
            } else {
                let num: f64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("field `{k}`: bad number `{v}`")))?;
                if param.is_some() {
                    return Err(Error::Parse("operator takes a single parameter".into()));
                }
                param = Some((k.to_string(), num));
            }
        }
        let (pname, pval) =
            param.ok_or_else(|| Error::Parse(format!("operator `{kind_name}` missing parameter")))?;
        let kind = match (kind_name.trim(), pname.as_str()) {
            ("boost", "u") => OperatorKind::Boost { u: pval },
            ("space", "b") => OperatorKind::Space { b: pval },
            ("time", "a") => OperatorKind::Time { a: pval },
            ("rotation", "parity") => OperatorKind::Rotation {
                parity: if pval >= 0.0 { 1 } else { -1 },
            },
            (k, p) => {
                return Err(Error::Parse(format!(
                    "unknown operator kind/parameter `{k}:{p}`"
                )));
            }
        };
        WaveOperator::new(kind, picture, mass, hbar)
    }

    /// Same kind and picture with the group parameter replaced (the
    /// one-parameter family through the identity used for generators).
    pub fn with_parameter(&self, value: f64) -> Result<WaveOperator> {
        let kind = match self.kind {
            OperatorKind::Boost { .. } => OperatorKind::Boost { u: value },
            OperatorKind::Space { .. } => OperatorKind::Space { b: value },
            OperatorKind::Time { .. } => OperatorKind::Time { a: value },
            OperatorKind::Rotation { .. } => {
                return Err(Error::InvalidArgument(
                    "parity is discrete; it has no one-parameter family".into(),
                ));
            }
        };
        WaveOperator::new(kind, self.picture, self.mass, self.hbar)
    }

    /// Apply the operator to a wave function at time `t`.
    pub fn apply(&self, psi: &WaveFunction, t: f64) -> Result<WaveFunction> {
        let (m, hb) = (self.mass, self.hbar);
        match (self.kind, self.picture) {
            (OperatorKind::Boost { u }, Picture::Standard) => Ok(psi
                .shifted(t * u)
                .with_phase(|x| -(m * u * (t * u / 2.0 - x)) / hb)),
            (OperatorKind::Boost { u }, Picture::Noether) => Ok(psi.shifted(t * u)),
            (OperatorKind::Space { b }, Picture::Standard) => Ok(psi.shifted(b)),
            (OperatorKind::Space { b }, Picture::Noether) => {
                if t == 0.0 {
                    return Err(Error::InvalidArgument(
                        "dressed space translation is singular at t = 0".into(),
                    ));
                }
                Ok(psi
                    .shifted(b)
                    .with_phase(|x| -(m / (hb * t)) * b * (x - b / 2.0)))
            }
            (OperatorKind::Time { .. }, Picture::Standard) => {
                // relabels the time argument only; no instantaneous action
                Ok(psi.clone())
            }
            (OperatorKind::Time { a }, Picture::Noether) => {
                if t == 0.0 || t == a {
                    return Err(Error::InvalidArgument(
                        "dressed time translation is singular at t = 0 and t = a".into(),
                    ));
                }
                Ok(psi.with_phase(|x| a * m * x * x / (2.0 * hb * t * (t - a))))
            }
            (OperatorKind::Rotation { parity }, _) => {
                if parity == 1 {
                    Ok(psi.clone())
                } else {
                    let n = psi.grid.npoints;
                    let values = (0..n).map(|i| psi.values[n - 1 - i]).collect();
                    WaveFunction::new(psi.grid, values)
                }
            }
        }
    }

    /// Apply to a two-particle state at time `t` (boost and space kinds;
    /// shifts must be commensurate with the grid).
    pub fn apply_two_particle(&self, psi: &WaveFunction2P, t: f64) -> Result<WaveFunction2P> {
        let hb = self.hbar;
        let [m1, m2] = psi.masses;
        let m_tot = m1 + m2;
        match (self.kind, self.picture) {
            (OperatorKind::Boost { u }, Picture::Standard) => {
                let shifted = psi.shifted_both(t * u)?;
                Ok(shifted
                    .with_phase(|x1, x2| -(u * (t * u * m_tot / 2.0 - (m1 * x1 + m2 * x2))) / hb))
            }
            (OperatorKind::Boost { u }, Picture::Noether) => psi.shifted_both(t * u),
            (OperatorKind::Space { b }, Picture::Standard) => psi.shifted_both(b),
            (OperatorKind::Space { b }, Picture::Noether) => {
                if t == 0.0 {
                    return Err(Error::InvalidArgument(
                        "dressed space translation is singular at t = 0".into(),
                    ));
                }
                let shifted = psi.shifted_both(b)?;
                Ok(shifted.with_phase(|x1, x2| {
                    -(b / (hb * t)) * (m1 * (x1 - b / 2.0) + m2 * (x2 - b / 2.0))
                }))
            }
            _ => Err(Error::InvalidArgument(
                "two-particle action is implemented for boost and space kinds".into(),
            )),
        }
    }
}

/// Two-particle wave function on a shared one-dimensional grid:
/// `values[i·n + j] = ψ(x_i, x_j)` with particle masses attached.
#[derive(Clone, Debug)]
pub struct WaveFunction2P {
    pub grid: SpatialGrid,
    pub masses: [f64; 2],
    pub values: Vec<C64>,
}

impl WaveFunction2P {
    pub fn new(grid: SpatialGrid, masses: [f64; 2], values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.npoints * grid.npoints {
            return Err(Error::Dimension(format!(
                "{} values on a {}² grid",
                values.len(),
                grid.npoints
            )));
        }
        Ok(WaveFunction2P {
            grid,
            masses,
            values,
        })
    }

    pub fn from_fn<F: Fn(f64, f64) -> C64>(grid: SpatialGrid, masses: [f64; 2], f: F) -> Self {
        let n = grid.npoints;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(grid.x(i), grid.x(j)));
            }
        }
        WaveFunction2P {
            grid,
            masses,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.norm()))
    }

    /// Both arguments shifted by the same displacement:
    /// `ψ(x₁ − d, x₂ − d)`, zero-filled; `d` must be an integer number of
    /// cells (within `1e-9`).
    pub fn shifted_both(&self, d: f64) -> Result<WaveFunction2P> {
        let cells = d / self.grid.dx;
        let k = cells.round();
        if (cells - k).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "two-particle shift {d} is not an integer number of cells (Δx = {})",
                self.grid.dx
            )));
        }
        let k = k as i64;
        let n = self.grid.npoints as i64;
        let mut out = vec![C64::new(0.0, 0.0); self.values.len()];
        for i in 0..n {
            let si = i - k;
            if !(0..n).contains(&si) {
                continue;
            }
            for j in 0..n {
                let sj = j - k;
                if (0..n).contains(&sj) {
                    out[(i * n + j) as usize] = self.values[(si * n + sj) as usize];
                }
            }
        }
        WaveFunction2P::new(self.grid, self.masses, out)
    }

    pub fn with_phase<F: Fn(f64, f64) -> f64>(&self, phase: F) -> WaveFunction2P {
        let n = self.grid.npoints;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let (i, j) = (idx / n, idx % n);
                v * (I * phase(self.grid.x(i), self.grid.x(j))).exp()
            })
            .collect();
        WaveFunction2P {
            grid: self.grid,
            masses: self.masses,
            values,
        }
    }
}

/// Statistics of the pointwise ratio of two fields over the support of the
/// denominator (`|den| > 1e-6·max|den|`).
#[derive(Clone, Copy, Debug)]
pub struct RatioStats {
    /// Complex mean of the pointwise ratios.
    pub mean: C64,
    /// Maximum absolute deviation of any ratio from the mean — zero iff the
    /// two fields are exactly proportional on the support.
    pub max_dev: f64,
    /// Argument of the mean ratio (radians).
    pub phase: f64,
}

fn ratio_stats(num: &[C64], den: &[C64]) -> Result<RatioStats> {
    let mx = den.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if mx == 0.0 {
        return Err(Error::Numerical("denominator field vanishes".into()));
    }
    let threshold = 1e-6 * mx;
    let mut sum = C64::new(0.0, 0.0);
    let mut count = 0usize;
    for (a, b) in num.iter().zip(den) {
        if b.norm() > threshold {
            sum += a / b;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Numerical("empty ratio support".into()));
    }
    let mean = sum / count as f64;
    let mut max_dev = 0.0f64;
    for (a, b) in num.iter().zip(den) {
        if b.norm() > threshold {
            max_dev = max_dev.max((a / b - mean).norm());
        }
    }
    Ok(RatioStats {
        mean,
        max_dev,
        phase: mean.arg(),
    })
}

/// Difference of an angle from a target, wrapped to `(−π, π]`.
pub fn phase_distance(phase: f64, target: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut d = (phase - target) % two_pi;
    if d > std::f64::consts::PI {
        d -= two_pi;
    }
    if d <= -std::f64::consts::PI {
        d += two_pi;
    }
    d.abs()
}

/// The predicted projective phase of `Space(b)∘Boost(u)` relative to
/// `Boost(u)∘Space(b)`: `−M·b·u/ħ` (radians).
pub fn expected_projective_phase(total_mass: f64, hbar: f64, b: f64, u: f64) -> f64 {
    -total_mass * b * u / hbar
}

/// Pointwise ratio statistics of `space(boost ψ)` against `boost(space ψ)`
/// at time `t`. Exact proportionality (max_dev at roundoff) with the
/// constant `exp{−(i/ħ)M·b·u}` is the projective-representation signature;
/// it holds in both pictures.
pub fn projective_phase(
    space: &WaveOperator,
    boost: &WaveOperator,
    psi: &WaveFunction,
    t: f64,
) -> Result<RatioStats> {
    validate_projective_pair(space, boost)?;
    let sb = space.apply(&boost.apply(psi, t)?, t)?;
    let bs = boost.apply(&space.apply(psi, t)?, t)?;
    ratio_stats(&sb.values, &bs.values)
}

/// Two-particle version of [`projective_phase`]; the expected phase carries
/// the total mass `m₁ + m₂`.
pub fn projective_phase_two_particle(
    space: &WaveOperator,
    boost: &WaveOperator,
    psi: &WaveFunction2P,
    t: f64,
) -> Result<RatioStats> {
    validate_projective_pair(space, boost)?;
    let sb = space.apply_two_particle(&boost.apply_two_particle(psi, t)?, t)?;
    let bs = boost.apply_two_particle(&space.apply_two_particle(psi, t)?, t)?;
    ratio_stats(&sb.values, &bs.values)
}

fn validate_projective_pair(space: &WaveOperator, boost: &WaveOperator) -> Result<()> {
    if !matches!(space.kind, OperatorKind::Space { .. }) {
        return Err(Error::InvalidArgument("first operator must be a space translation".into()));
    }
    if !matches!(boost.kind, OperatorKind::Boost { .. }) {
        return Err(Error::InvalidArgument("second operator must be a boost".into()));
    }
    if space.picture != boost.picture {
        return Err(Error::InvalidArgument("operators must share a picture".into()));
    }
    Ok(())
}

/// Compare transforming an evolved solution with evolving the transformed
/// initial state: `‖op(U(t₂,t₁)ψ₀) − U(t₂,t₁)(op ψ₀)‖ / ‖op(U ψ₀)‖` on the
/// window. Standard-picture operators are checked against the spectral
/// propagator of `system`; noether-picture ones against the Crank–Nicolson
/// scaled evolution with `substeps` steps. A noether time translation uses
/// the shifted window `[t₁−a, t₂−a]` on the left side.
pub fn check_solution_map(
    op: &WaveOperator,
    system: &System,
    psi0: &WaveFunction,
    t1: f64,
    t2: f64,
    substeps: usize,
    window: &[usize],
) -> Result<f64> {
    if window.is_empty() {
        return Err(Error::InvalidArgument("empty comparison window".into()));
    }
    let grid = psi0.grid;
    let (lhs, rhs) = match op.picture {
        Picture::Standard => {
            let kernel = build_spectral(system, op.hbar, &grid, t1, t2, ActionKind::Standard, 0)?;
            let evolved = kernel.apply(psi0)?;
            let lhs = op.apply(&evolved, t2)?;
            let rhs = kernel.apply(&op.apply(psi0, t1)?)?;
            (lhs, rhs)
        }
        Picture::Noether => match op.kind {
            OperatorKind::Time { a } => {
                let shifted = cn_evolve_scaled(system, op.hbar, psi0, t1 - a, t2 - a, substeps)?;
                let lhs = op.apply(&shifted, t2)?;
                let rhs =
                    cn_evolve_scaled(system, op.hbar, &op.apply(psi0, t1)?, t1, t2, substeps)?;
                (lhs, rhs)
            }
            _ => {
                let evolved = cn_evolve_scaled(system, op.hbar, psi0, t1, t2, substeps)?;
                let lhs = op.apply(&evolved, t2)?;
                let rhs =
                    cn_evolve_scaled(system, op.hbar, &op.apply(psi0, t1)?, t1, t2, substeps)?;
                (lhs, rhs)
            }
        },
    };
    Ok(rel_l2_windowed(&lhs.values, &rhs.values, &lhs.values, window))
}

/// Boosts compose exactly (a true, non-projective representation):
/// `‖B(u₂)B(u₁)ψ − B(u₁+u₂)ψ‖` (Δx-weighted, windowed). Holds in both
/// pictures; in the noether picture the boosts are plain shifts.
pub fn boost_rep_defect(
    picture: Picture,
    mass: f64,
    hbar: f64,
    psi: &WaveFunction,
    t: f64,
    u1: f64,
    u2: f64,
    window: &[usize],
) -> Result<f64> {
    let b1 = WaveOperator::new(OperatorKind::Boost { u: u1 }, picture, mass, hbar)?;
    let b2 = WaveOperator::new(OperatorKind::Boost { u: u2 }, picture, mass, hbar)?;
    let b12 = WaveOperator::new(OperatorKind::Boost { u: u1 + u2 }, picture, mass, hbar)?;
    let lhs = b2.apply(&b1.apply(psi, t)?, t)?;
    let rhs = b12.apply(psi, t)?;
    let diff: Vec<C64> = lhs
        .values
        .iter()
        .zip(&rhs.values)
        .map(|(a, b)| a - b)
        .collect();
    Ok(l2_weighted(&diff, window, psi.grid.dx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferenceScheme {
    /// `(op(ε)ψ − ψ)/ε` — first order in ε.
    Forward,
    /// `(op(ε)ψ − op(−ε)ψ)/(2ε)` — second order (one Richardson step).
    Symmetric,
}

/// Finite-difference generator of the operator's one-parameter family at
/// the identity. `ε < 1e-9` is rejected (roundoff would dominate).
pub fn infinitesimal_generator(
    family: &WaveOperator,
    psi: &WaveFunction,
    t: f64,
    eps: f64,
    scheme: DifferenceScheme,
) -> Result<WaveFunction> {
    if eps < 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "ε = {eps} below the 1e-9 floor"
        )));
    }
    let plus = family.with_parameter(eps)?.apply(psi, t)?;
    let values: Vec<C64> = match scheme {
        DifferenceScheme::Forward => plus
            .values
            .iter()
            .zip(&psi.values)
            .map(|(p, o)| (p - o) / eps)
            .collect(),
        DifferenceScheme::Symmetric => {
            let minus = family.with_parameter(-eps)?.apply(psi, t)?;
            plus.values
                .iter()
                .zip(&minus.values)
                .map(|(p, m)| (p - m) / (2.0 * eps))
                .collect()
        }
    };
    WaveFunction::new(psi.grid, values)
}

/// Closed-form boost generator in the standard picture:
/// `Aψ = −t·∂ψ/∂x + (i m/ħ)·x·ψ`, with the derivative realized by central
/// differences (one-sided at the boundary points).
pub fn boost_generator_analytic(
    psi: &WaveFunction,
    mass: f64,
    hbar: f64,
    t: f64,
) -> Result<WaveFunction> {
    let n = psi.grid.npoints;
    let dx = psi.grid.dx;
    if n < 3 {
        return Err(Error::InvalidArgument("need ≥ 3 points".into()));
    }
    let p = &psi.values;
    let mut values = vec![C64::new(0.0, 0.0); n];
    for (i, out) in values.iter_mut().enumerate() {
        let grad = if i == 0 {
            (p[1] - p[0]) / dx
        } else if i == n - 1 {
            (p[n - 1] - p[n - 2]) / dx
        } else {
            (p[i + 1] - p[i - 1]) / (2.0 * dx)
        };
        *out = -t * grad + I * (mass / hbar) * psi.grid.x(i) * p[i];
    }
    WaveFunction::new(psi.grid, values)
}

/// Central-extension commutator: with `δ_s`, `δ_b` the symmetric-difference
/// generators of space translations and boosts,
/// `δ_b(δ_s ψ) − δ_s(δ_b ψ) = (i M/ħ)·ψ` up to O(ε² + Δx²). Returns
/// `‖δ_b δ_s ψ − δ_s δ_b ψ − (iM/ħ)ψ‖ / ‖ψ‖` on the window.
pub fn commutator_defect(
    picture: Picture,
    mass: f64,
    hbar: f64,
    psi: &WaveFunction,
    t: f64,
    eps: f64,
    window: &[usize],
) -> Result<f64> {
    let space = WaveOperator::new(OperatorKind::Space { b: 0.0 }, picture, mass, hbar)?;
    let boost = WaveOperator::new(OperatorKind::Boost { u: 0.0 }, picture, mass, hbar)?;
    let gs = |p: &WaveFunction| -> Result<WaveFunction> {
        infinitesimal_generator(&space, p, t, eps, DifferenceScheme::Symmetric)
    };
    let gb = |p: &WaveFunction| -> Result<WaveFunction> {
        infinitesimal_generator(&boost, p, t, eps, DifferenceScheme::Symmetric)
    };
    let bs = gb(&gs(psi)?)?;
    let sb = gs(&gb(psi)?)?;
    let target = I * (mass / hbar);
    let residual: Vec<C64> = bs
        .values
        .iter()
        .zip(&sb.values)
        .zip(&psi.values)
        .map(|((a, b), p)| a - b - target * p)
        .collect();
    let num = l2_weighted(&residual, window, psi.grid.dx);
    let den = l2_weighted(&psi.values, window, psi.grid.dx);
    if den == 0.0 {
        return Err(Error::Numerical("vanishing reference in window".into()));
    }
    Ok(num / den)
}

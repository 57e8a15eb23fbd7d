//! Built-in algebras, two-forms, and sample inputs.
//!
//! Generator ordering for the Galilei algebra (10 generators):
//!
//! | index | generator        |
//! |-------|------------------|
//! | 0     | time translation |
//! | 1–3   | space translations|
//! | 4–6   | rotations        |
//! | 7–9   | boosts           |

use crate::algebra::{rat, StructureConstants, TwoForm};

/// Structure constants of the Galilei algebra in 3+1 dimensions.
///
/// Nonzero brackets (with `H = e0`, `P_i = e_{1..3}`, `J_i = e_{4..6}`,
/// `K_i = e_{7..9}`):
/// `[H, K_i] = P_i`, `[J_i, J_j] = ε_{ijk} J_k`, `[J_i, P_j] = ε_{ijk} P_k`,
/// `[J_i, K_j] = ε_{ijk} K_k`; all other brackets vanish.
pub fn galilei_algebra() -> StructureConstants {
    let mut s = StructureConstants::new(10);
    let mut put = |a: usize, b: usize, g: usize, v: i64| {
        s.set(a, b, g, rat(v, 1)).unwrap();
    };
    // [H, K_i] = P_i
    put(0, 7, 1, 1);
    put(0, 8, 2, 1);
    put(0, 9, 3, 1);
    // [P_i, J_j] = -ε_{jik} P_k  (translations rotate as a vector)
    put(1, 5, 3, 1);
    put(1, 6, 2, -1);
    put(2, 4, 3, -1);
    put(2, 6, 1, 1);
    put(3, 4, 2, 1);
    put(3, 5, 1, -1);
    // [J_i, J_j] = ε_{ijk} J_k
    put(4, 5, 6, 1);
    put(4, 6, 5, -1);
    put(5, 6, 4, 1);
    // [J_i, K_j] = ε_{ijk} K_k  (boosts rotate as a vector)
    put(4, 8, 9, 1);
    put(4, 9, 8, -1);
    put(5, 7, 9, -1);
    put(5, 9, 7, 1);
    put(6, 7, 8, 1);
    put(6, 8, 7, -1);
    s
}

/// The mass two-form on the Galilei algebra: `B(P_i, K_i) = 1`.
///
/// Closed but not exact — the one-dimensional obstruction class whose
/// coefficient is the total mass in the projective wave-function
/// representation.
pub fn mass_two_form() -> TwoForm {
    let mut b = TwoForm::new(10);
    b.set(1, 7, rat(1, 1)).unwrap();
    b.set(2, 8, rat(1, 1)).unwrap();
    b.set(3, 9, rat(1, 1)).unwrap();
    b
}

/// Three-dimensional nilpotent algebra `[e0, e1] = e2` (position, momentum,
/// centre). Its degree-two cohomology is two-dimensional.
pub fn heisenberg_algebra() -> StructureConstants {
    let mut s = StructureConstants::new(3);
    s.set(0, 1, 2, rat(1, 1)).unwrap();
    s
}

/// Four-dimensional abelian algebra: every two-form is closed, none exact.
pub fn abelian_algebra_dim4() -> StructureConstants {
    StructureConstants::new(4)
}

/// The rotation algebra `[e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e1`.
/// Satisfies the Jacobi identity (useful as a negative control for the
/// violation detector).
pub fn rotation_algebra() -> StructureConstants {
    let mut s = StructureConstants::new(3);
    s.set(0, 1, 2, rat(1, 1)).unwrap();
    s.set(1, 2, 0, rat(1, 1)).unwrap();
    s.set(2, 0, 1, rat(1, 1)).unwrap();
    s
}

/// Antisymmetric constants that fail the Jacobi identity:
/// `[e0,e1] = e2, [e1,e2] = e2, [e2,e0] = e1`. The cyclic sum at `(0,1,2)`
/// equals `−e1 ≠ 0`, so these constants define no Lie algebra.
pub fn jacobi_violator() -> StructureConstants {
    let mut s = StructureConstants::new(3);
    s.set(0, 1, 2, rat(1, 1)).unwrap();
    s.set(1, 2, 2, rat(1, 1)).unwrap();
    s.set(2, 0, 1, rat(1, 1)).unwrap();
    s
}

/// A straight-line path sampled at 17 points on `t ∈ [1, 2]`, in the CSV
/// exchange format (`t,x_1`): zero acceleration, so its Euler–Lagrange
/// residual for a free particle vanishes identically.
pub fn straight_line_path_csv() -> String {
    let mut out = String::from("t,x_1\n");
    let (x0, v) = (0.25, 0.6);
    for k in 0..=16 {
        let t = 1.0 + (k as f64) / 16.0;
        out.push_str(&format!("{:.17e},{:.17e}\n", t, x0 + v * (t - 1.0)));
    }
    out
}

/// Sample flat-format configuration for the propagator CLI.
pub fn sample_propagate_config() -> String {
    "\
# free-particle spectral propagation of a Gaussian packet
method = spectral
potential = free
mass = 1.0
hbar = 1.0
npoints = 256
half_span = 8.0
t1 = 0.0
t2 = 1.0
packet_x0 = 0.0
packet_sigma0 = 1.0
packet_k0 = 0.5
"
    .to_string()
}

//! Lie-algebra structure constants over exact rational arithmetic, and
//! degree-two Chevalley–Eilenberg cohomology.
//!
//! A finite-dimensional algebra is given by structure constants
//! `[e_a, e_b] = Σ_g C^g_{ab} e_g` with `C^g_{ab} = −C^g_{ba}`. A real-valued
//! antisymmetric two-form `B(e_a, e_b)` is *closed* when its
//! Chevalley–Eilenberg differential vanishes,
//!
//! ```text
//! (dB)(a,b,c) = Σ_e [ C^e_{ab} B(e,c) + C^e_{bc} B(e,a) + C^e_{ca} B(e,b) ] = 0 ,
//! ```
//!
//! and *exact* when `B(a,b) = φ([e_a, e_b]) = Σ_g C^g_{ab} φ_g` for some
//! one-cochain `φ`. The quotient closed/exact in degree two measures the
//! inequivalent central extensions of the algebra; a closed, non-exact
//! two-form is an obstruction that no redefinition of generators removes.
//!
//! All linear algebra here is exact (arbitrary-precision rationals), so
//! ranks, dimensions, witnesses, and non-exactness verdicts carry no
//! floating-point caveats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::{Error, Result};

pub type Rat = BigRational;

/// `p/q` with small integer arguments.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator `{num}`")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator `{den}`")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(p, q))
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Antisymmetric structure constants of a finite-dimensional algebra.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    /// Canonical entries `(g, a, b) → C^g_{ab}` with `a < b`.
    entries: BTreeMap<(usize, usize, usize), Rat>,
}

impl StructureConstants {
    pub fn new(dim: usize) -> Self {
        StructureConstants {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Set `C^g_{ab} = v` (and implicitly `C^g_{ba} = −v`).
    pub fn set(&mut self, a: usize, b: usize, g: usize, v: Rat) -> Result<()> {
        if a >= self.dim || b >= self.dim || g >= self.dim {
            return Err(Error::Dimension(format!(
                "index out of range in C^{g}_{{{a}{b}}} for dim {}",
                self.dim
            )));
        }
        if a == b {
            if !v.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "C^{g}_{{{a}{a}}} must vanish by antisymmetry"
                )));
            }
            return Ok(());
        }
        let (key, val) = if a < b { ((g, a, b), v) } else { ((g, b, a), -v) };
        if val.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, val);
        }
        Ok(())
    }

    /// `C^g_{ab}` with antisymmetry applied.
    pub fn c(&self, a: usize, b: usize, g: usize) -> Rat {
        if a == b {
            return Rat::zero();
        }
        let (key, sign) = if a < b {
            ((g, a, b), 1)
        } else {
            ((g, b, a), -1)
        };
        match self.entries.get(&key) {
            Some(v) if sign > 0 => v.clone(),
            Some(v) => -v.clone(),
            None => Rat::zero(),
        }
    }

    /// Nonzero canonical entries `((a, b, g), value)` with `a < b`.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize, usize), &Rat)> + '_ {
        self.entries.iter().map(|(&(g, a, b), v)| ((a, b, g), v))
    }

    /// All Jacobi-identity violations `(a, b, c)` with `a < b < c`.
    ///
    /// The identity checked, component-wise on index `d`, is
    /// `Σ_e [ C^e_{ab} C^d_{ec} + C^e_{bc} C^d_{ea} + C^e_{ca} C^d_{eb} ] = 0`.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim;
        let mut bad = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    'd: for d in 0..n {
                        let mut s = Rat::zero();
                        for e in 0..n {
                            s += self.c(a, b, e) * self.c(e, c, d)
                                + self.c(b, c, e) * self.c(e, a, d)
                                + self.c(c, a, e) * self.c(e, b, d);
                        }
                        if !s.is_zero() {
                            bad.push((a, b, c));
                            break 'd;
                        }
                    }
                }
            }
        }
        bad
    }

    pub fn jacobi_holds(&self) -> bool {
        self.jacobi_violations().is_empty()
    }

    /// Ordered basis of index pairs `a < b` (the degree-two cochain basis).
    pub fn pair_basis(&self) -> Vec<(usize, usize)> {
        let mut ps = Vec::new();
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                ps.push((a, b));
            }
        }
        ps
    }

    /// Ordered basis of index triples `a < b < c`.
    pub fn triple_basis(&self) -> Vec<(usize, usize, usize)> {
        let mut ts = Vec::new();
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                for c in (b + 1)..self.dim {
                    ts.push((a, b, c));
                }
            }
        }
        ts
    }

    /// Matrix of the degree-two differential: rows indexed by triples,
    /// columns by pairs; `(dB)(a,b,c)` as a linear map of `B`.
    pub fn closedness_matrix(&self) -> Vec<Vec<Rat>> {
        let pairs = self.pair_basis();
        let triples = self.triple_basis();
        let col_of: BTreeMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut mat = vec![vec![Rat::zero(); pairs.len()]; triples.len()];
        let add = |row: &mut Vec<Rat>, i: usize, j: usize, w: Rat| {
            if i == j || w.is_zero() {
                return;
            }
            // B(i,j) = sign · B(min,max)
            let (key, val) = if i < j { ((i, j), w) } else { ((j, i), -w) };
            let col = col_of[&key];
            row[col] += val;
        };
        for (r, &(a, b, c)) in triples.iter().enumerate() {
            // work around simultaneous borrows: build the row separately
            let mut row = std::mem::take(&mut mat[r]);
            for e in 0..self.dim {
                add(&mut row, e, c, self.c(a, b, e));
                add(&mut row, e, a, self.c(b, c, e));
                add(&mut row, e, b, self.c(c, a, e));
            }
            mat[r] = row;
        }
        mat
    }

    /// Matrix of the degree-one differential: rows indexed by pairs,
    /// columns by generators; `(dφ)(a,b) = Σ_g C^g_{ab} φ_g`.
    pub fn coboundary_matrix(&self) -> Vec<Vec<Rat>> {
        let pairs = self.pair_basis();
        let mut mat = vec![vec![Rat::zero(); self.dim]; pairs.len()];
        for (r, &(a, b)) in pairs.iter().enumerate() {
            for g in 0..self.dim {
                mat[r][g] = self.c(a, b, g);
            }
        }
        mat
    }

    /// Coboundary `dφ` of a one-cochain as a two-form.
    pub fn coboundary(&self, phi: &[Rat]) -> Result<TwoForm> {
        if phi.len() != self.dim {
            return Err(Error::Dimension(format!(
                "one-cochain length {} for algebra of dim {}",
                phi.len(),
                self.dim
            )));
        }
        let mut b = TwoForm::new(self.dim);
        for (a, bx) in self.pair_basis() {
            let mut v = Rat::zero();
            for g in 0..self.dim {
                v += self.c(a, bx, g) * phi[g].clone();
            }
            b.set(a, bx, v)?;
        }
        Ok(b)
    }

    /// Differential of a two-form; empty map means closed.
    pub fn two_form_differential(&self, b: &TwoForm) -> Result<BTreeMap<(usize, usize, usize), Rat>> {
        if b.dim != self.dim {
            return Err(Error::Dimension(format!(
                "two-form dim {} vs algebra dim {}",
                b.dim, self.dim
            )));
        }
        let mut out = BTreeMap::new();
        for (a, bb, c) in self.triple_basis() {
            let mut s = Rat::zero();
            for e in 0..self.dim {
                s += self.c(a, bb, e) * b.get(e, c)
                    + self.c(bb, c, e) * b.get(e, a)
                    + self.c(c, a, e) * b.get(e, bb);
            }
            if !s.is_zero() {
                out.insert((a, bb, c), s);
            }
        }
        Ok(out)
    }

    pub fn is_closed(&self, b: &TwoForm) -> Result<bool> {
        Ok(self.two_form_differential(b)?.is_empty())
    }

    /// Exact solve of `dφ = B`. Returns a witness one-cochain if `B` is a
    /// coboundary, `None` otherwise.
    pub fn exactness_witness(&self, b: &TwoForm) -> Result<Option<Vec<Rat>>> {
        if b.dim != self.dim {
            return Err(Error::Dimension(format!(
                "two-form dim {} vs algebra dim {}",
                b.dim, self.dim
            )));
        }
        let pairs = self.pair_basis();
        let mut aug: Vec<Vec<Rat>> = self.coboundary_matrix();
        for (r, &(pa, pb)) in pairs.iter().enumerate() {
            aug[r].push(b.get(pa, pb));
        }
        Ok(solve_consistent(aug, self.dim))
    }

    /// Degree-two cohomology summary, all ranks exact.
    pub fn cohomology(&self) -> CohomologyReport {
        let pairs = self.pair_basis().len();
        let rank_d2 = rank(self.closedness_matrix());
        let rank_d1 = rank(self.coboundary_matrix());
        let closed_dim = pairs - rank_d2;
        CohomologyReport {
            two_cochain_dim: pairs,
            rank_closedness: rank_d2,
            closed_dim,
            exact_dim: rank_d1,
            h2_dim: closed_dim - rank_d1,
        }
    }

    /// Serialize to the line format parsed by [`parse_algebra_file`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        for ((a, b, g), v) in self.nonzero() {
            let _ = writeln!(out, "C {a} {b} {g} {}", format_rat(v));
        }
        out
    }
}

/// Antisymmetric two-form on the algebra.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwoForm {
    pub dim: usize,
    /// Canonical entries `(a, b) → B(a,b)` with `a < b`.
    entries: BTreeMap<(usize, usize), Rat>,
}

impl TwoForm {
    pub fn new(dim: usize) -> Self {
        TwoForm {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, a: usize, b: usize, v: Rat) -> Result<()> {
        if a >= self.dim || b >= self.dim {
            return Err(Error::Dimension(format!(
                "index out of range in B({a},{b}) for dim {}",
                self.dim
            )));
        }
        if a == b {
            if !v.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "B({a},{a}) must vanish by antisymmetry"
                )));
            }
            return Ok(());
        }
        let (key, val) = if a < b { ((a, b), v) } else { ((b, a), -v) };
        if val.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, val);
        }
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> Rat {
        if a == b {
            return Rat::zero();
        }
        let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
        match self.entries.get(&key) {
            Some(v) if sign > 0 => v.clone(),
            Some(v) => -v.clone(),
            None => Rat::zero(),
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize), &Rat)> + '_ {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        for ((a, b), v) in self.nonzero() {
            let _ = writeln!(out, "D {a} {b} {}", format_rat(v));
        }
        out
    }
}

/// Exact cohomology dimensions in degree two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    /// Dimension of the space of antisymmetric two-forms, `dim·(dim−1)/2`.
    pub two_cochain_dim: usize,
    /// Rank of the degree-two differential.
    pub rank_closedness: usize,
    /// Dimension of the space of closed two-forms.
    pub closed_dim: usize,
    /// Dimension of the space of exact two-forms (rank of the coboundary map).
    pub exact_dim: usize,
    /// `closed_dim − exact_dim`.
    pub h2_dim: usize,
}

/// Exact rank of a rational matrix by Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // pick the largest-magnitude pivot to keep intermediate entries tame
        let pivot = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .max_by(|&i, &j| m[i][c].abs().cmp(&m[j][c].abs()));
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for i in (r + 1)..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / inv.clone();
            for j in c..cols {
                let sub = f.clone() * m[r][j].clone();
                m[i][j] -= sub;
            }
        }
        r += 1;
    }
    r
}

/// Solve `A·x = rhs` exactly where the last column of `aug` is `rhs` and the
/// first `ncols` columns are `A`. Returns a particular solution if the system
/// is consistent (free variables set to zero), `None` if inconsistent.
fn solve_consistent(mut aug: Vec<Vec<Rat>>, ncols: usize) -> Option<Vec<Rat>> {
    let rows = aug.len();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !aug[i][c].is_zero())
            .max_by(|&i, &j| aug[i][c].abs().cmp(&aug[j][c].abs()));
        let Some(p) = pivot else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].clone();
        for j in c..=ncols {
            let v = aug[r][j].clone() / inv.clone();
            aug[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=ncols {
                    let sub = f.clone() * aug[r][j].clone();
                    aug[i][j] -= sub;
                }
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
    }
    // consistency: no row of the form [0 … 0 | nonzero]
    for row in aug.iter().skip(r) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &c) in pivot_col_of_row.iter().enumerate() {
        x[c] = aug[row][ncols].clone();
    }
    Some(x)
}

/// Parsed contents of an algebra/two-form file.
#[derive(Clone, Debug, Default)]
pub struct AlgebraFile {
    pub constants: Option<StructureConstants>,
    pub two_form: Option<TwoForm>,
    pub one_cochain: Option<Vec<Rat>>,
}

/// Parse the line-oriented exchange format:
///
/// ```text
/// # comment
/// dim 10
/// C a b g v     # structure constant C^g_{ab} = v
/// D a b v       # two-form entry B(a,b) = v
/// E g v         # one-cochain entry φ_g = v
/// ```
///
/// Values are integers or `p/q` fractions. `dim` must precede any entry.
pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    let mut dim: Option<usize> = None;
    let mut out = AlgebraFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap();
        let ctx = |msg: &str| Error::Parse(format!("line {}: {}", lineno + 1, msg));
        let idx = |t: Option<&str>| -> Result<usize> {
            t.ok_or_else(|| ctx("missing index"))?
                .parse::<usize>()
                .map_err(|_| ctx("bad index"))
        };
        match head {
            "dim" => {
                let n = idx(tok.next())?;
                if n == 0 {
                    return Err(ctx("dim must be positive"));
                }
                dim = Some(n);
            }
            "C" => {
                let n = dim.ok_or_else(|| ctx("`dim` must come before entries"))?;
                let (a, b, g) = (idx(tok.next())?, idx(tok.next())?, idx(tok.next())?);
                let v = parse_rat(tok.next().ok_or_else(|| ctx("missing value"))?)?;
                out.constants
                    .get_or_insert_with(|| StructureConstants::new(n))
                    .set(a, b, g, v)?;
            }
            "D" => {
                let n = dim.ok_or_else(|| ctx("`dim` must come before entries"))?;
                let (a, b) = (idx(tok.next())?, idx(tok.next())?);
                let v = parse_rat(tok.next().ok_or_else(|| ctx("missing value"))?)?;
                out.two_form
                    .get_or_insert_with(|| TwoForm::new(n))
                    .set(a, b, v)?;
            }
            "E" => {
                let n = dim.ok_or_else(|| ctx("`dim` must come before entries"))?;
                let g = idx(tok.next())?;
                if g >= n {
                    return Err(ctx("one-cochain index out of range"));
                }
                let v = parse_rat(tok.next().ok_or_else(|| ctx("missing value"))?)?;
                let phi = out.one_cochain.get_or_insert_with(|| vec![Rat::zero(); n]);
                phi[g] = v;
            }
            other => return Err(ctx(&format!("unknown record `{other}`"))),
        }
        if tok.next().is_some() {
            return Err(Error::Parse(format!("line {}: trailing tokens", lineno + 1)));
        }
    }
    // carry an explicit dim even when a file only declares `dim` + D/E lines
    if out.constants.is_none() {
        if let Some(n) = dim {
            if out.two_form.is_none() && out.one_cochain.is_none() {
                out.constants = Some(StructureConstants::new(n));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_roundtrip() {
        let alg = fixtures::galilei_algebra();
        let text = alg.serialize();
        let parsed = parse_algebra_file(&text).unwrap().constants.unwrap();
        assert_eq!(alg, parsed);

        let b = fixtures::mass_two_form();
        let parsed_b = parse_algebra_file(&b.serialize()).unwrap().two_form.unwrap();
        assert_eq!(b, parsed_b);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_algebra_file("dim 3\nC 0 1 2").is_err()); // missing value
        assert!(parse_algebra_file("C 0 1 2 1").is_err()); // no dim
        assert!(parse_algebra_file("dim 3\nQ 0 1 2 1").is_err()); // unknown record
        assert!(parse_algebra_file("dim 3\nC 0 5 2 1").is_err()); // out of range
        assert!(parse_algebra_file("dim 3\nC 0 1 2 1/0").is_err()); // zero denom
    }

    #[test]
    fn rank_of_known_matrix() {
        // [[1,2],[2,4],[0,1]] has rank 2
        let m = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ];
        assert_eq!(rank(m), 2);
    }

    #[test]
    fn witness_solve_simple() {
        // B = dφ for the three-dimensional nilpotent algebra [e0,e1] = e2:
        // (dφ)(0,1) = φ_2, so B(0,1)=5 has witness φ = (0,0,5).
        let alg = fixtures::heisenberg_algebra();
        let mut b = TwoForm::new(3);
        b.set(0, 1, rat(5, 1)).unwrap();
        let w = alg.exactness_witness(&b).unwrap().unwrap();
        assert_eq!(alg.coboundary(&w).unwrap(), b);
        // B(0,2) = 1 is closed (dim-3: no triples beyond (0,1,2)) but not exact.
        let mut b2 = TwoForm::new(3);
        b2.set(0, 2, rat(1, 1)).unwrap();
        assert!(alg.exactness_witness(&b2).unwrap().is_none());
    }
}

//! CSV exchange formats.
//!
//! * paths — header `t,x_1,...,x_n`, one sampled instant per row;
//! * wave functions — header `x,re,im`;
//! * kernels — header `x_out,x_in,re,im`, row-major over the grid square.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which round-trips `f64` exactly.

use crate::grid::{PropagatorMatrix, SpatialGrid, C64};
use crate::lagrangian::Path;
use crate::{Error, Result};

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

/// Serialize a sampled path (`t,x_1,...,x_n`).
pub fn path_to_csv(path: &Path) -> String {
    let ncoords = path.coords.first().map_or(0, Vec::len);
    let mut out = String::from("t");
    for j in 1..=ncoords {
        out.push_str(&format!(",x_{j}"));
    }
    out.push('\n');
    for (t, row) in path.times.iter().zip(&path.coords) {
        out.push_str(&fmt(*t));
        for v in row {
            out.push(',');
            out.push_str(&fmt(*v));
        }
        out.push('\n');
    }
    out
}

/// Parse a sampled path from `t,x_1,...,x_n` CSV.
pub fn path_from_csv(text: &str) -> Result<Path> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty path CSV".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"t") || cols.len() < 2 {
        return Err(Error::Parse(format!(
            "path CSV header must be `t,x_1,...`; got `{header}`"
        )));
    }
    for (j, c) in cols[1..].iter().enumerate() {
        let expected = format!("x_{}", j + 1);
        if *c != expected {
            return Err(Error::Parse(format!(
                "path CSV column {} must be `{expected}`; got `{c}`",
                j + 2
            )));
        }
    }
    let ncoords = cols.len() - 1;
    let mut times = Vec::new();
    let mut coords = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse(format!(
                "path CSV row {}: {} fields, expected {}",
                i + 2,
                fields.len(),
                cols.len()
            )));
        }
        let mut nums = Vec::with_capacity(fields.len());
        for f in &fields {
            nums.push(f.parse::<f64>().map_err(|_| {
                Error::Parse(format!("path CSV row {}: bad number `{f}`", i + 2))
            })?);
        }
        times.push(nums[0]);
        coords.push(nums[1..].to_vec());
    }
    if coords.iter().any(|r| r.len() != ncoords) {
        return Err(Error::Parse("ragged path CSV".into()));
    }
    Path::new(times, coords)
}

/// Serialize a wave function (`x,re,im`).
pub fn wavefunction_to_csv(grid: &SpatialGrid, values: &[C64]) -> Result<String> {
    if values.len() != grid.npoints {
        return Err(Error::Dimension(format!(
            "{} values on a {}-point grid",
            values.len(),
            grid.npoints
        )));
    }
    let mut out = String::from("x,re,im\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", fmt(grid.x(i)), fmt(v.re), fmt(v.im)));
    }
    Ok(out)
}

/// Parse a wave function's values from `x,re,im` CSV (the grid is implied
/// by the row count and the `x` column, which is checked for uniformity).
pub fn wavefunction_from_csv(text: &str) -> Result<(SpatialGrid, Vec<C64>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty wave-function CSV".into()))?;
    if header.split(',').map(str::trim).collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(Error::Parse(format!(
            "wave-function CSV header must be `x,re,im`; got `{header}`"
        )));
    }
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("row {}: expected 3 fields", i + 2)));
        }
        let mut nums = [0.0f64; 3];
        for (slot, f) in nums.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad number `{f}`", i + 2)))?;
        }
        xs.push(nums[0]);
        values.push(C64::new(nums[1], nums[2]));
    }
    if xs.len() < 2 {
        return Err(Error::Parse("need at least two samples".into()));
    }
    let dx = xs[1] - xs[0];
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs() {
            return Err(Error::Parse("non-uniform x column".into()));
        }
    }
    let grid = SpatialGrid::with_spacing(xs.len(), dx)?;
    // centered-grid convention: the x column must match the implied points
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.x(i)).abs() > 1e-9 * dx.abs() {
            return Err(Error::Parse(
                "x column is not centered on the origin".into(),
            ));
        }
    }
    Ok((grid, values))
}

/// Serialize a kernel (`x_out,x_in,re,im`, row-major).
pub fn kernel_to_csv(kernel: &PropagatorMatrix) -> String {
    let n = kernel.grid.npoints;
    let mut out = String::from("x_out,x_in,re,im\n");
    for i in 0..n {
        for j in 0..n {
            let v = kernel.get(i, j);
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt(kernel.grid.x(i)),
                fmt(kernel.grid.x(j)),
                fmt(v.re),
                fmt(v.im)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WaveFunction;

    #[test]
    fn path_round_trips_exactly() {
        let p = path_from_csv(&crate::fixtures::straight_line_path_csv()).unwrap();
        assert_eq!(p.times.len(), 17);
        assert_eq!(p.coords[0].len(), 1);
        let text = path_to_csv(&p);
        let q = path_from_csv(&text).unwrap();
        assert_eq!(p.times, q.times);
        assert_eq!(p.coords, q.coords);
    }

    #[test]
    fn path_rejects_bad_headers_and_ragged_rows() {
        assert!(path_from_csv("").is_err());
        assert!(path_from_csv("time,x_1\n1,2\n").is_err());
        assert!(path_from_csv("t,x_2\n1,2\n").is_err());
        assert!(path_from_csv("t,x_1\n1\n").is_err());
        assert!(path_from_csv("t,x_1\n1,abc\n").is_err());
    }

    #[test]
    fn wavefunction_round_trips_exactly() {
        let grid = SpatialGrid::centered(64, 3.0).unwrap();
        let psi = WaveFunction::gaussian(grid, 0.3, 0.8, 1.1);
        let text = wavefunction_to_csv(&grid, &psi.values).unwrap();
        let (g2, v2) = wavefunction_from_csv(&text).unwrap();
        assert_eq!(g2, grid);
        assert_eq!(v2, psi.values);
    }

    #[test]
    fn kernel_csv_has_row_major_layout() {
        let grid = SpatialGrid::centered(3, 1.0).unwrap();
        let k = PropagatorMatrix::identity(grid);
        let text = kernel_to_csv(&k);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 1 + 9);
        assert_eq!(rows[0], "x_out,x_in,re,im");
        // row 1 is (x_out[0], x_in[0]) = (−Δx·1, −Δx·1) on the 3-point grid
        assert!(rows[1].starts_with(&format!("{:.17e},{:.17e},", grid.x(0), grid.x(0))));
    }
}

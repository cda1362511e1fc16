use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest number of cells accepted for a grid.
pub const MAX_CELLS: usize = 1 << 24;

/// Cell-centred uniform grid on `[0,1]^d` with `n` cells per side.
///
/// Cell `(i_0, …, i_{d−1})` has centre `((i_a + ½)/n)_a` and linear index
/// `Σ i_a n^a` (axis 0 varies fastest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeGrid {
    pub d: usize,
    pub n: usize,
}

impl CubeGrid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::Domain(format!("grid dimension must be 1, 2 or 3, got {d}")));
        }
        if n < 2 {
            return Err(Error::Size(format!("need at least 2 cells per side, got {n}")));
        }
        match n.checked_pow(d as u32) {
            Some(len) if len <= MAX_CELLS => Ok(Self { d, n }),
            _ => Err(Error::Size(format!("{n}^{d} cells exceeds {MAX_CELLS}"))),
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Measure `h^d` of one cell.
    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.d as i32)
    }

    /// `n^a`, the index offset of one step along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow(axis as u32)
    }

    pub fn multi_index(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for slot in out.iter_mut().take(self.d) {
            *slot = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn center(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        let h = self.h();
        let mut x = [0.0; 3];
        for a in 0..self.d {
            x[a] = (m[a] as f64 + 0.5) * h;
        }
        x
    }

    pub fn is_power_of_two(&self) -> bool {
        self.n.is_power_of_two()
    }
}

/// Runs `f` on every line of `data` parallel to `axis`, in place.
pub(crate) fn for_each_line(grid: CubeGrid, data: &mut [f64], axis: usize, mut f: impl FnMut(&mut [f64])) {
    let n = grid.n;
    let stride = grid.stride(axis);
    let mut line = vec![0.0; n];
    for start in 0..grid.len() {
        if (start / stride) % n != 0 {
            continue;
        }
        for (j, slot) in line.iter_mut().enumerate() {
            *slot = data[start + j * stride];
        }
        f(&mut line);
        for (j, v) in line.iter().enumerate() {
            data[start + j * stride] = *v;
        }
    }
}

/// Real values on the cells of a [`CubeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    grid: CubeGrid,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    d: usize,
    n: usize,
}

impl GridFunction {
    pub fn new(grid: CubeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Size(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: CubeGrid) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    /// Samples `f` at the cell centres.
    pub fn from_fn(grid: CubeGrid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.center(i)[..grid.d])).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> CubeGrid {
        self.grid
    }

    pub fn d(&self) -> usize {
        self.grid.d
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// `∫u` as a cell sum.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    /// `∫u²` as a cell sum.
    pub fn l2_mass(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Measure of `{u > 0}`.
    pub fn support_measure(&self) -> f64 {
        self.values.iter().filter(|&&v| v > 0.0).count() as f64 * self.grid.cell_volume()
    }

    /// JSON header `{"d":…,"n":…}`.
    pub fn header_json(&self) -> String {
        serde_json::to_string(&Header { d: self.grid.d, n: self.grid.n }).expect("plain struct")
    }

    /// `index,value` CSV with a header row; values round-trip exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{v}");
        }
        out
    }

    pub fn from_csv(header_json: &str, csv: &str) -> Result<Self> {
        let header: Header = serde_json::from_str(header_json)?;
        let grid = CubeGrid::new(header.d, header.n)?;
        let mut lines = csv.lines();
        if lines.next().map(str::trim) != Some("index,value") {
            return Err(Error::Format("missing `index,value` header".into()));
        }
        let mut values = vec![f64::NAN; grid.len()];
        let mut seen = 0;
        for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::Format(format!("bad CSV row {}: {line:?}", lineno + 2));
            let (idx, val) = line.split_once(',').ok_or_else(bad)?;
            let idx: usize = idx.trim().parse().map_err(|_| bad())?;
            let val: f64 = val.trim().parse().map_err(|_| bad())?;
            if idx >= values.len() || !values[idx].is_nan() {
                return Err(bad());
            }
            values[idx] = val;
            seen += 1;
        }
        if seen != grid.len() {
            return Err(Error::Format(format!("expected {} rows, got {seen}", grid.len())));
        }
        Self::new(grid, values)
    }

    fn header_path(csv_path: &Path) -> PathBuf {
        csv_path.with_extension("json")
    }

    /// Writes the CSV to `csv_path` and the header next to it with a `.json`
    /// extension.
    pub fn save(&self, csv_path: &Path) -> Result<()> {
        fs::write(csv_path, self.to_csv())?;
        fs::write(Self::header_path(csv_path), self.header_json())?;
        Ok(())
    }

    pub fn load(csv_path: &Path) -> Result<Self> {
        let header = fs::read_to_string(Self::header_path(csv_path))?;
        Self::from_csv(&header, &fs::read_to_string(csv_path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_centres() {
        let g = CubeGrid::new(2, 4).unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g.multi_index(6), [2, 1, 0]);
        assert_eq!(g.center(6)[..2], [0.625, 0.375]);
        assert!(CubeGrid::new(4, 4).is_err());
        assert!(CubeGrid::new(3, 1 << 9).is_err());
        assert!(GridFunction::new(g, vec![0.0; 15]).is_err());
    }

    #[test]
    fn lines_cover_every_cell_once() {
        let g = CubeGrid::new(3, 3).unwrap();
        for axis in 0..3 {
            let mut data: Vec<f64> = (0..g.len()).map(|i| i as f64).collect();
            let mut count = 0;
            for_each_line(g, &mut data, axis, |line| {
                count += 1;
                let first = line[0];
                for (j, v) in line.iter().enumerate() {
                    assert_eq!(*v, first + (j * g.stride(axis)) as f64);
                }
                line.iter_mut().for_each(|v| *v = -*v);
            });
            assert_eq!(count, 9);
            assert!(data.iter().enumerate().all(|(i, v)| *v == -(i as f64)));
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = CubeGrid::new(2, 8).unwrap();
        let u = GridFunction::from_fn(g, |x| (x[0] * 3.1).sin() + x[1] / 7.0).unwrap();
        let back = GridFunction::from_csv(&u.header_json(), &u.to_csv()).unwrap();
        assert_eq!(back, u);
        assert!(GridFunction::from_csv(&u.header_json(), "index,value\n0,1\n").is_err());
        assert!(GridFunction::from_csv("{\"d\":2}", &u.to_csv()).is_err());
    }
}

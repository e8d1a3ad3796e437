//! Complete weighted graphs, Euclidean instance generation and the
//! line-oriented instance file format.
//!
//! ```text
//! HPMP-INSTANCE 1
//! NAME <string without spaces>
//! N <int>
//! COORDS | MATRIX
//! <x> <y>            (N lines, COORDS only)
//! <N reals>          (N lines, MATRIX only)
//! END
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const FILE_MAGIC: &str = "HPMP-INSTANCE 1";

/// Side length of the sampling square used by default.
pub const DEFAULT_BOX: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn distance(&self, other: &Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// A complete graph on `n >= 3` vertices with a symmetric, zero-diagonal,
/// nonnegative weight matrix. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    n: usize,
    weights: Vec<f64>,
    coords: Option<Vec<Point2D>>,
    seed: Option<u64>,
}

impl Instance {
    /// Euclidean instance on the given points.
    pub fn from_coords(name: impl Into<String>, coords: Vec<Point2D>) -> Result<Self> {
        let name = validate_name(name.into())?;
        let n = coords.len();
        if n < 3 {
            return Err(Error::InvalidInstance(format!("n must be ≥ 3, got {n}")));
        }
        if let Some(i) = coords
            .iter()
            .position(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(Error::InvalidInstance(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = coords[i].distance(&coords[j]);
                weights[i * n + j] = d;
                weights[j * n + i] = d;
            }
        }
        Ok(Instance {
            name,
            n,
            weights,
            coords: Some(coords),
            seed: None,
        })
    }

    /// Instance from an explicit row-major `n × n` matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, weights: Vec<f64>) -> Result<Self> {
        let name = validate_name(name.into())?;
        if n < 3 {
            return Err(Error::InvalidInstance(format!("n must be ≥ 3, got {n}")));
        }
        if weights.len() != n * n {
            return Err(Error::InvalidInstance(format!(
                "expected {} matrix entries, got {}",
                n * n,
                weights.len()
            )));
        }
        if let Some((i, j)) = first_matrix_defect(n, &weights) {
            return Err(Error::InvalidInstance(format!(
                "matrix entry ({i}, {j}) breaks symmetry, zero diagonal or nonnegativity"
            )));
        }
        Ok(Instance {
            name,
            n,
            weights,
            coords: None,
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges of the complete graph.
    pub fn m(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n..(i + 1) * self.n]
    }

    pub fn coords(&self) -> Option<&[Point2D]> {
        self.coords.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// All edges `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.weight(i, j))))
    }

    /// Total weight of the closed tour through `cycle`.
    pub fn cycle_weight(&self, cycle: &[usize]) -> f64 {
        match cycle.len() {
            0 | 1 => 0.0,
            k => (0..k)
                .map(|i| self.weight(cycle[i], cycle[(i + 1) % k]))
                .sum(),
        }
    }
}

fn validate_name(name: String) -> Result<String> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(Error::InvalidInstance(format!(
            "name {name:?} must be non-empty and contain no whitespace"
        )));
    }
    Ok(name)
}

fn first_matrix_defect(n: usize, w: &[f64]) -> Option<(usize, usize)> {
    for i in 0..n {
        if w[i * n + i] != 0.0 {
            return Some((i, i));
        }
        for j in (i + 1)..n {
            let a = w[i * n + j];
            if !(a.is_finite() && a >= 0.0) || a != w[j * n + i] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Samples `n` points uniformly in `[0, side]²` and builds their Euclidean
/// instance.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`;
/// each point draws `x` then `y` as `side * U[0, 1)` with 53-bit uniforms.
pub fn generate_euclidean(n: usize, seed: u64, side: f64) -> Result<Instance> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("n must be ≥ 3, got {n}")));
    }
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::InvalidInstance(format!(
            "box side must be positive, got {side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let x = side * rng.gen::<f64>();
            let y = side * rng.gen::<f64>();
            Point2D::new(x, y)
        })
        .collect();
    Ok(Instance::from_coords(format!("euclid-n{n}-s{seed}"), points)?.with_seed(seed))
}

/// True iff `w(i,k) <= w(i,j) + w(j,k) + eps` for all triples.
pub fn check_triangle_inequality(inst: &Instance, eps: f64) -> bool {
    let n = inst.n();
    (0..n).all(|j| {
        let rj = inst.row(j);
        (0..n).all(|i| {
            let ri = inst.row(i);
            let wij = rj[i];
            (0..n).all(|k| ri[k] <= wij + rj[k] + eps)
        })
    })
}

/// Serialises an instance. Reals use the shortest representation that
/// parses back to the same bits.
pub fn format_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let n = inst.n();
    writeln!(out, "{FILE_MAGIC}").unwrap();
    writeln!(out, "NAME {}", inst.name()).unwrap();
    writeln!(out, "N {n}").unwrap();
    match inst.coords() {
        Some(points) => {
            out.push_str("COORDS\n");
            for p in points {
                writeln!(out, "{:?} {:?}", p.x, p.y).unwrap();
            }
        }
        None => {
            out.push_str("MATRIX\n");
            for i in 0..n {
                let row: Vec<String> = inst.row(i).iter().map(|w| format!("{w:?}")).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
    }
    out.push_str("END\n");
    out
}

/// Parses the instance file format. Errors carry the 1-based line number.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| -> Result<(usize, &str)> {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header != FILE_MAGIC {
        return Err(Error::parse(ln, format!("expected header {FILE_MAGIC:?}")));
    }

    let (ln, line) = next("NAME")?;
    let name = match line.split_whitespace().collect::<Vec<_>>()[..] {
        ["NAME", name] => name.to_string(),
        _ => return Err(Error::parse(ln, "expected `NAME <name>`")),
    };

    let (ln, line) = next("N")?;
    let n: usize = match line.split_whitespace().collect::<Vec<_>>()[..] {
        ["N", count] => count
            .parse()
            .map_err(|_| Error::parse(ln, format!("invalid vertex count {count:?}")))?,
        _ => return Err(Error::parse(ln, "expected `N <count>`")),
    };
    if n < 3 {
        return Err(Error::parse(ln, format!("n must be ≥ 3, got {n}")));
    }

    let (kind_line, kind) = next("COORDS or MATRIX")?;
    let width = match kind {
        "COORDS" => 2,
        "MATRIX" => n,
        _ => return Err(Error::parse(kind_line, "expected COORDS or MATRIX")),
    };

    let mut values = Vec::new();
    let mut row_lines = Vec::new();
    for row in 0..n {
        let (ln, line) = next("data row")?;
        if line == "END" {
            return Err(Error::parse(
                ln,
                format!("expected {n} data lines, found {row}"),
            ));
        }
        let start = values.len();
        for token in line.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| Error::parse(ln, format!("invalid number {token:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(ln, format!("non-finite number {token:?}")));
            }
            values.push(v);
        }
        if values.len() - start != width {
            return Err(Error::parse(
                ln,
                format!("expected {width} values, found {}", values.len() - start),
            ));
        }
        row_lines.push(ln);
    }

    let (ln, line) = next("END")?;
    if line != "END" {
        return Err(Error::parse(
            ln,
            format!("expected END after {n} data lines"),
        ));
    }
    for (ln, line) in lines {
        if !line.is_empty() {
            return Err(Error::parse(ln, "trailing content after END"));
        }
    }

    if width == 2 {
        let points = values.chunks(2).map(|c| Point2D::new(c[0], c[1])).collect();
        Instance::from_coords(name, points).map_err(|e| Error::parse(kind_line, e.to_string()))
    } else {
        if let Some((i, j)) = first_matrix_defect(n, &values) {
            let line = row_lines[i.max(j)];
            let what = if i == j {
                format!("nonzero diagonal entry at ({i}, {i})")
            } else if values[i * n + j] != values[j * n + i] {
                format!("asymmetric entries at ({i}, {j}) and ({j}, {i})")
            } else {
                format!("negative weight at ({i}, {j})")
            };
            return Err(Error::parse(line, what));
        }
        Instance::from_matrix(name, n, values).map_err(|e| Error::parse(kind_line, e.to_string()))
    }
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_instance(inst)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

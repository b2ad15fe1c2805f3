//! Compactly supported probability measures: exact atoms plus a density that
//! is constant on each cell of a uniform grid.
//!
//! Storing the density per cell (rather than at nodes) makes the distribution
//! function exactly piecewise linear, so total mass, Kolmogorov distances and
//! quantiles are all computed exactly for the stored object.

use std::io::{BufRead, Write};

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{QuantileMap, SupportSet, QUANTILE_GRID};
use faer::c64;

/// Default number of density cells.
pub const DEFAULT_CELLS: usize = 4096;

/// Fraction of the support width added on each side of the grid interval.
pub const PADDING: f64 = 0.05;

/// Allowed deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

impl Atom {
    pub const fn new(location: f64, mass: f64) -> Self {
        Self { location, mass }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactMeasure {
    atoms: Vec<Atom>,
    interval: [f64; 2],
    density: Vec<f64>,
    /// Continuous mass to the left of each node; `cells + 1` entries.
    cumulative: Vec<f64>,
    quantile: QuantileMap,
}

/// `[lo, hi]` widened by [`PADDING`] of its width on each side. Degenerate
/// intervals are widened by a unit-scale amount instead.
pub fn padded_interval(lo: f64, hi: f64) -> [f64; 2] {
    let w = hi - lo;
    let pad = if w > 0.0 { PADDING * w } else { PADDING * lo.abs().max(1.0) };
    [lo - pad, hi + pad]
}

impl CompactMeasure {
    /// Atoms plus a per-cell density on `interval`. Atoms are sorted and
    /// merged; zero-mass atoms are dropped.
    pub fn from_parts(atoms: Vec<Atom>, interval: [f64; 2], density: Vec<f64>) -> Result<Self> {
        for a in &atoms {
            if !a.location.is_finite() || !a.mass.is_finite() || a.mass < 0.0 {
                return Err(Error::InvalidMeasure(format!("bad atom {a:?}")));
            }
        }
        let mut atoms: Vec<Atom> = atoms.into_iter().filter(|a| a.mass > 0.0).collect();
        atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        if !density.is_empty() && !(interval[0].is_finite() && interval[1].is_finite() && interval[0] < interval[1]) {
            return Err(Error::InvalidMeasure(format!("bad interval {interval:?}")));
        }
        if density.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidMeasure("density must be finite and nonnegative".into()));
        }
        let interval = if density.is_empty() {
            match (merged.first(), merged.last()) {
                (Some(f), Some(l)) => [f.location, l.location],
                _ => return Err(Error::EmptySupport),
            }
        } else {
            interval
        };
        let h = if density.is_empty() { 0.0 } else { (interval[1] - interval[0]) / density.len() as f64 };
        let mut cumulative = Vec::with_capacity(density.len() + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for d in &density {
            acc += d * h;
            cumulative.push(acc);
        }
        let total = acc + merged.iter().map(|a| a.mass).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total} differs from 1")));
        }
        let mut m = Self {
            atoms: merged,
            interval,
            density,
            cumulative,
            quantile: QuantileMap::from_fn(2, |_| c64::new(0.0, 0.0))?,
        };
        m.quantile = QuantileMap::from_fn(QUANTILE_GRID, |s| c64::new(m.quantile_at(s), 0.0))?;
        Ok(m)
    }

    /// Atoms only.
    pub fn atomic(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::from_parts(atoms.iter().map(|&(x, m)| Atom::new(x, m)).collect(), [0.0, 0.0], Vec::new())
    }

    pub fn dirac(x: f64) -> Self {
        Self::atomic(&[(x, 1.0)]).expect("unit atom")
    }

    /// Cells with the given masses.
    pub fn from_cell_masses(atoms: Vec<Atom>, interval: [f64; 2], masses: &[f64]) -> Result<Self> {
        let h = (interval[1] - interval[0]) / masses.len().max(1) as f64;
        Self::from_parts(atoms, interval, masses.iter().map(|m| m / h).collect())
    }

    /// Cell masses `cdf(x_{i+1}) − cdf(x_i)` of a continuous distribution
    /// function on `cells` cells of `interval`.
    pub fn from_cdf(interval: [f64; 2], cells: usize, cdf: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (interval[1] - interval[0]) / cells as f64;
        let values: Vec<f64> = (0..=cells).map(|i| cdf(interval[0] + i as f64 * h)).collect();
        let masses: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect();
        Self::from_cell_masses(Vec::new(), interval, &masses)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn interval(&self) -> [f64; 2] {
        self.interval
    }

    /// Per-cell density values.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn cells(&self) -> usize {
        self.density.len()
    }

    pub fn cell_width(&self) -> f64 {
        if self.density.is_empty() {
            0.0
        } else {
            (self.interval[1] - self.interval[0]) / self.density.len() as f64
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        self.interval[0] + i as f64 * self.cell_width()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells()).map(|i| self.node(i)).collect()
    }

    pub fn cell_mass(&self, i: usize) -> f64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn continuous_mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.continuous_mass()
    }

    pub fn mass_at(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.location == x).map(|a| a.mass).sum()
    }

    pub fn quantile(&self) -> &QuantileMap {
        &self.quantile
    }

    fn continuous_cdf(&self, x: f64) -> f64 {
        if self.density.is_empty() || x <= self.interval[0] {
            return 0.0;
        }
        if x >= self.interval[1] {
            return self.continuous_mass();
        }
        let h = self.cell_width();
        let u = (x - self.interval[0]) / h;
        let i = (u.floor() as usize).min(self.cells() - 1);
        let frac = u - i as f64;
        self.cumulative[i] + frac * self.cell_mass(i)
    }

    /// μ((−∞, x]).
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().take_while(|a| a.location <= x).map(|a| a.mass).sum();
        atoms + self.continuous_cdf(x)
    }

    /// μ((−∞, x)).
    pub fn cdf_left(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().take_while(|a| a.location < x).map(|a| a.mass).sum();
        atoms + self.continuous_cdf(x)
    }

    /// Points between which the distribution function is linear.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = self.nodes();
        pts.extend(self.atoms.iter().map(|a| a.location));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// inf{x : F(x) ≥ s}; for s ≤ 0 the left end of the support.
    pub fn quantile_at(&self, s: f64) -> f64 {
        let pts = self.breakpoints();
        if s <= 0.0 {
            let first_cell = (0..self.cells()).find(|&i| self.cell_mass(i) > 0.0).map(|i| self.node(i));
            let first_atom = self.atoms.first().map(|a| a.location);
            return match (first_cell, first_atom) {
                (Some(c), Some(a)) => c.min(a),
                (Some(c), None) => c,
                (None, Some(a)) => a,
                (None, None) => self.interval[0],
            };
        }
        let values: Vec<f64> = pts.iter().map(|&p| self.cdf(p)).collect();
        let k = values.partition_point(|&v| v < s);
        if k >= pts.len() {
            return *pts.last().unwrap();
        }
        if k == 0 {
            return pts[0];
        }
        let (x0, x1) = (pts[k - 1], pts[k]);
        let f0 = values[k - 1];
        let f1_left = self.cdf_left(x1);
        if f1_left >= s && f1_left > f0 {
            x0 + (s - f0) / (f1_left - f0) * (x1 - x0)
        } else {
            x1
        }
    }

    /// ∫ t^k dμ, exact for the stored representation.
    pub fn moment(&self, k: u32) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * a.location.powi(k as i32)).sum();
        let kp = (k + 1) as f64;
        let cont: f64 = self
            .density
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > 0.0)
            .map(|(i, d)| {
                let (a, b) = (self.node(i), self.node(i + 1));
                d * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / kp
            })
            .sum();
        atoms + cont
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2) - m * m
    }

    /// Image under t ↦ t + shift.
    pub fn translate(&self, shift: f64) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom::new(a.location + shift, a.mass)).collect();
        let interval = [self.interval[0] + shift, self.interval[1] + shift];
        Self::from_parts(atoms, interval, self.density.clone()).expect("translation preserves validity")
    }

    /// Image under t ↦ c·t for c ≠ 0.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::OutOfDomain {
                value: c,
                domain: "nonzero finite dilation",
            });
        }
        let atoms = self.atoms.iter().map(|a| Atom::new(a.location * c, a.mass)).collect();
        let mut density: Vec<f64> = self.density.iter().map(|d| d / c.abs()).collect();
        let mut interval = [self.interval[0] * c, self.interval[1] * c];
        if c < 0.0 {
            density.reverse();
            interval.swap(0, 1);
        }
        Self::from_parts(atoms, interval, density)
    }

    /// `w·self + (1 − w)·other` on this measure's grid when both grids
    /// coincide, otherwise an error.
    pub fn mixture(&self, w: f64, other: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::OutOfDomain {
                value: w,
                domain: "[0, 1]",
            });
        }
        let mut atoms: Vec<Atom> = self.atoms.iter().map(|a| Atom::new(a.location, w * a.mass)).collect();
        atoms.extend(other.atoms.iter().map(|a| Atom::new(a.location, (1.0 - w) * a.mass)));
        let (interval, density) = match (self.density.is_empty(), other.density.is_empty()) {
            (true, true) => ([0.0, 0.0], Vec::new()),
            (false, true) => (self.interval, self.density.iter().map(|d| w * d).collect()),
            (true, false) => (other.interval, other.density.iter().map(|d| (1.0 - w) * d).collect()),
            (false, false) => {
                if self.interval != other.interval || self.cells() != other.cells() {
                    return Err(Error::GridMismatch("mixture components must share a grid".into()));
                }
                (
                    self.interval,
                    self.density.iter().zip(&other.density).map(|(a, b)| w * a + (1.0 - w) * b).collect(),
                )
            }
        };
        Self::from_parts(atoms, interval, density)
    }

    /// Atom points plus the union of cells with density above `threshold`,
    /// merging pieces separated by at most one cell.
    pub fn support(&self, threshold: f64) -> Result<SupportSet> {
        let h = self.cell_width();
        let mut pieces: Vec<[f64; 2]> = self.atoms.iter().map(|a| [a.location, a.location]).collect();
        let mut i = 0;
        while i < self.cells() {
            if self.density[i] > threshold {
                let start = i;
                while i < self.cells() && self.density[i] > threshold {
                    i += 1;
                }
                pieces.push([self.node(start), self.node(i)]);
            } else {
                i += 1;
            }
        }
        if pieces.is_empty() {
            return Err(Error::EmptySupport);
        }
        pieces.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if p[0] <= last[1] + h * (1.0 + 1e-9) => last[1] = last[1].max(p[1]),
                _ => out.push(p),
            }
        }
        SupportSet::new(out)
    }

    /// One JSON header line, a `density` line, then one density value per line.
    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        let header = MeasureHeader {
            interval: self.interval,
            cells: self.cells(),
            atoms: self.atoms.iter().map(|a| [a.location, a.mass]).collect(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(|e| Error::Format(e.to_string()))?)?;
        writeln!(w, "density")?;
        for d in &self.density {
            writeln!(w, "{d:?}")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header_line = lines.next().ok_or_else(|| Error::Format("missing header".into()))??;
        let header: MeasureHeader = serde_json::from_str(&header_line).map_err(|e| Error::Format(e.to_string()))?;
        match lines.next() {
            Some(Ok(l)) if l.trim() == "density" => {}
            _ => return Err(Error::Format("expected a 'density' column header".into())),
        }
        let mut density = Vec::with_capacity(header.cells);
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            density.push(line.trim().parse::<f64>().map_err(|e| Error::Parse {
                position: i + 2,
                message: e.to_string(),
            })?);
        }
        if density.len() != header.cells {
            return Err(Error::Format(format!("header declares {} cells, found {}", header.cells, density.len())));
        }
        let atoms = header.atoms.iter().map(|a| Atom::new(a[0], a[1])).collect();
        Self::from_parts(atoms, header.interval, density)
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureHeader {
    interval: [f64; 2],
    cells: usize,
    atoms: Vec<[f64; 2]>,
}

/// sup |F_μ − F_ν|, exact for the stored representations.
pub fn kolmogorov_distance(mu: &CompactMeasure, nu: &CompactMeasure) -> f64 {
    let mut pts = mu.breakpoints();
    pts.extend(nu.breakpoints());
    pts.iter()
        .map(|&p| (mu.cdf(p) - nu.cdf(p)).abs().max((mu.cdf_left(p) - nu.cdf_left(p)).abs()))
        .fold(0.0, f64::max)
}

/// sup |F_N − F_μ| for the empirical law of `samples`, exact for the stored
/// representation of μ.
pub fn kolmogorov_to_empirical(samples: &[f64], mu: &CompactMeasure) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let emp = |x: f64, left: bool| {
        let k = if left {
            sorted.partition_point(|&s| s < x)
        } else {
            sorted.partition_point(|&s| s <= x)
        };
        k as f64 / n
    };
    let mut pts = mu.breakpoints();
    pts.extend_from_slice(&sorted);
    pts.iter()
        .map(|&p| (emp(p, false) - mu.cdf(p)).abs().max((emp(p, true) - mu.cdf_left(p)).abs()))
        .fold(0.0, f64::max)
}

/// max |F_μ − F| over the breakpoints of μ for a continuous distribution
/// function F. Between breakpoints F_μ is the linear interpolant of F up to
/// this error, so the value measures the discretized law against F on the
/// grid μ is stored on.
pub fn kolmogorov_to_cdf(mu: &CompactMeasure, cdf: impl Fn(f64) -> f64) -> f64 {
    mu.breakpoints()
        .iter()
        .map(|&p| (mu.cdf(p) - cdf(p)).abs().max((mu.cdf_left(p) - cdf(p)).abs()))
        .fold(0.0, f64::max)
}

/// Distribution function of the semicircle law of the given variance.
pub fn semicircle_cdf(variance: f64, x: f64) -> f64 {
    let r = 2.0 * variance.sqrt();
    if x <= -r {
        0.0
    } else if x >= r {
        1.0
    } else {
        0.5 + x * (r * r - x * x).sqrt() / (std::f64::consts::PI * r * r) + (x / r).asin() / std::f64::consts::PI
    }
}

/// Distribution function of the arcsine law on (−2, 2).
pub fn arcsine_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + (x / 2.0).asin() / std::f64::consts::PI
    }
}

/// Semicircle law with support [−2σ, 2σ], σ² = variance.
pub fn semicircle_measure(variance: f64) -> Result<CompactMeasure> {
    semicircle_measure_with(variance, DEFAULT_CELLS)
}

pub fn semicircle_measure_with(variance: f64, cells: usize) -> Result<CompactMeasure> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::OutOfDomain {
            value: variance,
            domain: "variance > 0",
        });
    }
    let r = 2.0 * variance.sqrt();
    CompactMeasure::from_cdf(padded_interval(-r, r), cells, |x| semicircle_cdf(variance, x))
}

/// Arcsine law on (−2, 2), the law of u + u* for a Haar unitary u.
pub fn arcsine_measure() -> CompactMeasure {
    CompactMeasure::from_cdf(padded_interval(-2.0, 2.0), DEFAULT_CELLS, arcsine_cdf).expect("valid arcsine grid")
}

/// Uniform law on [a, b].
pub fn uniform_measure(a: f64, b: f64) -> Result<CompactMeasure> {
    if !(a < b) {
        return Err(Error::InvalidMeasure(format!("empty interval [{a}, {b}]")));
    }
    CompactMeasure::from_cdf(padded_interval(a, b), DEFAULT_CELLS, |x| ((x - a) / (b - a)).clamp(0.0, 1.0))
}

/// Spectral law of Σᵢ (uᵢ + uᵢ*) for p free Haar unitaries (Kesten–McKay law
/// of degree 2p), supported on [−2√(2p−1), 2√(2p−1)].
pub fn kesten_measure(p: usize) -> Result<CompactMeasure> {
    if p == 0 {
        return Err(Error::OutOfDomain {
            value: 0.0,
            domain: "p >= 1",
        });
    }
    let d = 2.0 * p as f64;
    let r = 2.0 * (d - 1.0).sqrt();
    let interval = padded_interval(-r, r);
    let cells = DEFAULT_CELLS;
    let h = (interval[1] - interval[0]) / cells as f64;
    // x = R sin θ removes the square-root edge behaviour.
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        d * r * r * c * c / (2.0 * std::f64::consts::PI * (d * d - r * r * s * s))
    };
    let rule = GaussLegendre::new(8.try_into().expect("nonzero order"));
    let masses: Vec<f64> = (0..cells)
        .map(|i| {
            let a = (interval[0] + i as f64 * h).clamp(-r, r);
            let b = (interval[0] + (i + 1) as f64 * h).clamp(-r, r);
            if b <= a {
                0.0
            } else {
                rule.integrate((a / r).asin(), (b / r).asin(), integrand)
            }
        })
        .collect();
    let total: f64 = masses.iter().sum();
    let masses: Vec<f64> = masses.iter().map(|m| m / total).collect();
    CompactMeasure::from_cell_masses(Vec::new(), interval, &masses)
}

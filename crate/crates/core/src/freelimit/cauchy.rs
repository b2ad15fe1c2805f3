//! Cauchy transform G(z) = ∫ dμ(t)/(z − t) of a [`CompactMeasure`].
//!
//! For a density constant on cells the integral is exact:
//! G(z) = Σ_k w_k log(z − t_k) with w_k the density jump at node t_k. The
//! principal logarithm is continuous on the upper half-plane, so no branch
//! bookkeeping is needed there. Groups of nodes far from z are summed through
//! a truncated Laurent expansion about the group centre.

use faer::c64;

use super::measure::CompactMeasure;
use crate::error::{Error, Result};

/// Nodes per far-field group.
const PANEL: usize = 32;
/// Expansion order; the far criterion |z − c| > 3r bounds the tail by 3⁻ᴷ.
const ORDER: usize = 30;
const FAR_RATIO: f64 = 3.0;

#[derive(Debug, Clone)]
struct Panel {
    centre: f64,
    radius: f64,
    first: usize,
    end: usize,
    /// Σ w.
    total: f64,
    /// Σ w (t − c)^k / k for k = 1..=ORDER.
    log_coeffs: Vec<f64>,
    /// Σ w (t − c)^k for k = 0..=ORDER.
    moments: Vec<f64>,
}

/// Reusable evaluator of G and G′ for one measure.
#[derive(Debug, Clone)]
pub struct CauchyTransform {
    atoms: Vec<(f64, f64)>,
    nodes: Vec<f64>,
    jumps: Vec<f64>,
    panels: Vec<Panel>,
}

impl CauchyTransform {
    pub fn new(mu: &CompactMeasure) -> Self {
        let atoms = mu.atoms().iter().map(|a| (a.location, a.mass)).collect();
        let d = mu.density();
        let mut nodes = Vec::new();
        let mut jumps = Vec::new();
        for k in 0..=d.len() {
            let left = if k == 0 { 0.0 } else { d[k - 1] };
            let right = if k == d.len() { 0.0 } else { d[k] };
            let w = right - left;
            if w != 0.0 {
                nodes.push(mu.node(k));
                jumps.push(w);
            }
        }
        let panels = nodes
            .chunks(PANEL)
            .enumerate()
            .map(|(p, chunk)| {
                let first = p * PANEL;
                let end = first + chunk.len();
                let centre = 0.5 * (chunk[0] + chunk[chunk.len() - 1]);
                let radius = 0.5 * (chunk[chunk.len() - 1] - chunk[0]);
                let mut moments = vec![0.0; ORDER + 1];
                for (t, w) in nodes[first..end].iter().zip(&jumps[first..end]) {
                    let u = t - centre;
                    let mut pow = *w;
                    for m in moments.iter_mut() {
                        *m += pow;
                        pow *= u;
                    }
                }
                let log_coeffs = (1..=ORDER).map(|k| moments[k] / k as f64).collect();
                Panel {
                    centre,
                    radius,
                    first,
                    end,
                    total: moments[0],
                    log_coeffs,
                    moments,
                }
            })
            .collect();
        Self {
            atoms,
            nodes,
            jumps,
            panels,
        }
    }

    /// (G(z), G′(z)) off the support; G(z̄) = conj G(z) below the axis.
    pub fn eval(&self, z: c64) -> (c64, c64) {
        if z.im < 0.0 {
            let (g, dg) = self.eval(z.conj());
            return (g.conj(), dg.conj());
        }
        let mut g = c64::new(0.0, 0.0);
        let mut dg = c64::new(0.0, 0.0);
        for &(a, m) in &self.atoms {
            let r = (z - a).inv();
            g += r * m;
            dg -= r * r * m;
        }
        for p in &self.panels {
            let u = z - p.centre;
            if u.norm() > FAR_RATIO * p.radius {
                let q = u.inv();
                let mut s = c64::new(0.0, 0.0);
                for a in p.log_coeffs.iter().rev() {
                    s = (s + a) * q;
                }
                g += u.ln() * p.total - s;
                let mut d = c64::new(0.0, 0.0);
                for m in p.moments.iter().rev() {
                    d = (d + m) * q;
                }
                dg += d;
            } else {
                for (t, w) in self.nodes[p.first..p.end].iter().zip(&self.jumps[p.first..p.end]) {
                    let v = z - t;
                    g += v.ln() * w;
                    dg += v.inv() * w;
                }
            }
        }
        (g, dg)
    }

    pub fn g(&self, z: c64) -> c64 {
        self.eval(z).0
    }
}

/// ∫ dμ(t)/(z − t) for Im z > 0.
pub fn cauchy_transform(mu: &CompactMeasure, z: c64) -> Result<c64> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::OutOfDomain {
            value: z.im,
            domain: "Im z > 0",
        });
    }
    Ok(CauchyTransform::new(mu).g(z))
}

//! Quadrature rules for K and for Haar integration on G.
//!
//! Normalization: `|K| = 1`, i.e. `dk = dphi / 2pi`. The Haar measure on G is
//! fixed (consistently across coordinate systems) as
//!
//! * Iwasawa `(phi, s, x)`: density `e^{2s} * (dphi/2pi) ds dx`,
//! * Cartan `(phi1, t, phi2)`: density `(1/4pi) sinh(t) dphi1 dt dphi2`
//!   with both angles running over the full circle (the K x A+ x K chart is
//!   2-to-1, which the `1/4pi` accounts for).
//!
//! Angles use the trapezoid rule (spectrally accurate for periodic smooth
//! integrands); the non-compact axes use composite Gauss-Legendre panels.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Coordinate system a rule integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordSystem {
    Circle,
    Iwasawa,
    Cartan,
    Line,
}

/// Nodes and positive weights of a product quadrature rule. Nodes are stored
/// as coordinate triples; `Circle` and `Line` rules use only the first slot.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub system: CoordSystem,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Integration box for the non-compact axes of a Haar rule.
#[derive(Debug, Clone, Copy)]
pub struct SupportBox {
    /// Iwasawa: `(s_min, s_max)`; Cartan: `(t_min, t_max)` with `t_min >= 0`.
    pub radial: (f64, f64),
    /// Iwasawa only: `(x_min, x_max)`.
    pub x: (f64, f64),
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pprev = if n == 1 { 1.0 } else { p0 };
            pp = n as f64 * (x * pn - pprev) / (x * x - 1.0);
            let dx = pn / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Uniform `points`-node rule on the circle with total mass one (`|K| = 1`).
pub fn circle_rule(points: usize) -> Result<QuadratureRule> {
    if points < 4 {
        return Err(Error::Domain(format!("circle rule needs >= 4 points, got {points}")));
    }
    let w = 1.0 / points as f64;
    Ok(QuadratureRule {
        system: CoordSystem::Circle,
        nodes: (0..points).map(|j| [2.0 * PI * j as f64 / points as f64, 0.0, 0.0]).collect(),
        weights: vec![w; points],
    })
}

/// Product Haar rule in the requested coordinate system.
///
/// `resolution` is the node count per axis (angles get exactly `resolution`
/// trapezoid nodes, radial and `x` axes a Gauss-Legendre rule of the same
/// size). Weights include the Haar density, so plain weighted sums of
/// integrand values approximate the Haar integral.
pub fn haar_rule(system: CoordSystem, resolution: usize, support: SupportBox) -> Result<QuadratureRule> {
    if resolution < 4 {
        return Err(Error::Domain(format!("haar rule needs resolution >= 4, got {resolution}")));
    }
    let (lo, hi) = support.radial;
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty radial box [{lo}, {hi}]")));
    }
    match system {
        CoordSystem::Iwasawa => {
            let (xlo, xhi) = support.x;
            if !(xlo < xhi) {
                return Err(Error::Domain(format!("empty x box [{xlo}, {xhi}]")));
            }
            let (sn, sw) = gauss_legendre_on(resolution, lo, hi);
            let (xn, xw) = gauss_legendre_on(resolution, xlo, xhi);
            let m = resolution;
            let mut nodes = Vec::with_capacity(m * m * m);
            let mut weights = Vec::with_capacity(m * m * m);
            for j in 0..m {
                let phi = 2.0 * PI * j as f64 / m as f64;
                for (s, ws) in sn.iter().zip(&sw) {
                    let dens = (2.0 * s).exp() * ws / m as f64;
                    for (x, wx) in xn.iter().zip(&xw) {
                        nodes.push([phi, *s, *x]);
                        weights.push(dens * wx);
                    }
                }
            }
            Ok(QuadratureRule { system, nodes, weights })
        }
        CoordSystem::Cartan => {
            if lo < 0.0 {
                return Err(Error::Domain(format!("Cartan radial box must have t >= 0, got {lo}")));
            }
            let (tn, tw) = gauss_legendre_on(resolution, lo, hi);
            let m = resolution;
            let mut nodes = Vec::with_capacity(m * m * m);
            let mut weights = Vec::with_capacity(m * m * m);
            for j1 in 0..m {
                let phi1 = 2.0 * PI * j1 as f64 / m as f64;
                for (t, wt) in tn.iter().zip(&tw) {
                    let dens = t.sinh() * wt * PI / (m * m) as f64;
                    for j2 in 0..m {
                        let phi2 = 2.0 * PI * j2 as f64 / m as f64;
                        nodes.push([phi1, *t, phi2]);
                        weights.push(dens);
                    }
                }
            }
            Ok(QuadratureRule { system, nodes, weights })
        }
        CoordSystem::Circle => circle_rule(resolution),
        CoordSystem::Line => {
            let (n, w) = gauss_legendre_on(resolution, lo, hi);
            Ok(QuadratureRule {
                system,
                nodes: n.into_iter().map(|t| [t, 0.0, 0.0]).collect(),
                weights: w,
            })
        }
    }
}

impl QuadratureRule {
    /// Group element at a node, per the rule's coordinate system.
    pub fn group_at(&self, idx: usize) -> GroupElement {
        let [u, v, w] = self.nodes[idx];
        match self.system {
            CoordSystem::Circle => GroupElement::rotation(u),
            CoordSystem::Iwasawa => {
                let es = v.exp();
                GroupElement::rotation(u).mul(&GroupElement { a: es, b: es * w, c: 0.0, d: 1.0 / es })
            }
            CoordSystem::Cartan => GroupElement::rotation(u)
                .mul(&GroupElement::diag(v))
                .mul(&GroupElement::rotation(w)),
            CoordSystem::Line => GroupElement::diag(u),
        }
    }

    /// Weighted sum of a complex integrand over group-element nodes.
    pub fn integrate_group<F: FnMut(&GroupElement) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            acc += f(&self.group_at(i)) * self.weights[i];
        }
        acc
    }

    /// Weighted sum of a real integrand over group-element nodes.
    pub fn integrate_group_real<F: FnMut(&GroupElement) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.nodes.len() {
            acc += f(&self.group_at(i)) * self.weights[i];
        }
        acc
    }

    /// Total mass of the rule (the measure of its support box).
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `| integral of h(g0 g) - integral of h(g) |` relative to `|integral of h|`,
/// for a compactly supported `h`; the rule's box must contain the support of
/// both integrands.
pub fn left_invariance_defect<F>(rule: &QuadratureRule, g0: &GroupElement, h: F) -> f64
where
    F: Fn(&GroupElement) -> f64 + Copy,
{
    let base = rule.integrate_group_real(h);
    let shifted = rule.integrate_group_real(|g| h(&g0.mul(g)));
    (shifted - base).abs() / base.abs().max(f64::MIN_POSITIVE)
}

/// Same as [`left_invariance_defect`] for right translation.
pub fn right_invariance_defect<F>(rule: &QuadratureRule, g0: &GroupElement, h: F) -> f64
where
    F: Fn(&GroupElement) -> f64 + Copy,
{
    let base = rule.integrate_group_real(h);
    let shifted = rule.integrate_group_real(|g| h(&g.mul(g0)));
    (shifted - base).abs() / base.abs().max(f64::MIN_POSITIVE)
}

/// Smooth bump in one variable: `exp(1 - 1/(1-xi^2))` on `(-1, 1)`, else 0.
pub fn bump01(xi: f64) -> f64 {
    if xi.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - xi * xi)).exp()
    } else {
        0.0
    }
}

/// Reference test function on G used by the Haar checks: an analytic Gaussian
/// in `||g||_F^2` that falls below machine precision for `||g||^2 > 6`, so it
/// is compactly supported as far as quadrature is concerned.
pub fn haar_test_function(g: &GroupElement) -> f64 {
    let r = g.norm_sq();
    (-((r - 2.0) / 0.6).powi(2)).exp()
}

/// Iwasawa box containing the support of [`haar_test_function`] and its
/// translates by the mild reference shifts used in the invariance checks.
pub fn haar_reference_box_iwasawa() -> SupportBox {
    SupportBox { radial: (-1.05, 1.05), x: (-4.0, 4.0) }
}

/// Cartan box for the same support.
pub fn haar_reference_box_cartan() -> SupportBox {
    SupportBox { radial: (0.0, 1.8), x: (0.0, 0.0) }
}

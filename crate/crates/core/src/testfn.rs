//! Bi-K-finite test functions on G.
//!
//! A test function is a finite sum of components
//! `h(k_phi1 a_t k_phi2) = coeff * e^{-i l phi1} chi(t) e^{-i n phi2}`
//! with `chi` smooth, real and compactly supported in `(0, infinity)`, and
//! `l = n (mod 2)` so the value does not depend on the choice of Cartan
//! coordinates. A component `(l, n)` spans the `(l, n)` bi-isotypic block:
//! the operator `pi(h)` of any series has its only nonzero entry at row `l`,
//! column `n`.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::harmonics::Parity;
use crate::quadrature::bump01;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Radial profile `chi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Profile {
    /// `amplitude * exp(1 - 1/(1-xi^2))` on `(t0, t1)`, zero outside.
    Bump { t0: f64, t1: f64, amplitude: f64 },
    /// Piecewise-linear interpolation of `values` on the strictly increasing
    /// `grid`; zero outside the grid range.
    Samples { grid: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Bump { t0, t1, amplitude } => {
                if !(*t0 > 0.0 && t1 > t0) {
                    return Err(Error::Domain(format!(
                        "bump profile needs 0 < t0 < t1, got [{t0}, {t1}]"
                    )));
                }
                if !amplitude.is_finite() {
                    return Err(Error::Domain("bump amplitude must be finite".into()));
                }
                Ok(())
            }
            Profile::Samples { grid, values } => {
                if grid.len() != values.len() || grid.len() < 2 {
                    return Err(Error::Domain("samples profile needs matching grid/values, len >= 2".into()));
                }
                if grid[0] <= 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Domain("samples grid must be strictly increasing and positive".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Bump { t0, t1, amplitude } => {
                let xi = (2.0 * t - t0 - t1) / (t1 - t0);
                amplitude * bump01(xi)
            }
            Profile::Samples { grid, values } => {
                if t <= grid[0] || t >= *grid.last().unwrap() {
                    return 0.0;
                }
                let j = grid.partition_point(|g| *g <= t) - 1;
                let frac = (t - grid[j]) / (grid[j + 1] - grid[j]);
                values[j] + frac * (values[j + 1] - values[j])
            }
        }
    }

    /// Support interval `[t0, t1]`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::Bump { t0, t1, .. } => (*t0, *t1),
            Profile::Samples { grid, .. } => (grid[0], *grid.last().unwrap()),
        }
    }
}

/// One bi-isotypic component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub l: i64,
    pub n: i64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coeff: Complex64,
    pub profile: Profile,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn is_one(c: &Complex64) -> bool {
    *c == one()
}

/// A bi-K-finite test function with components of a single parity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub parity: Parity,
    pub components: Vec<Component>,
}

impl TestFunction {
    pub fn new(parity: Parity, components: Vec<Component>) -> Result<Self> {
        let f = TestFunction { parity, components };
        f.validate()?;
        Ok(f)
    }

    /// Single-component constructor with the reference bump profile.
    pub fn single(l: i64, n: i64, profile: Profile) -> Result<Self> {
        let parity = if l.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
        TestFunction::new(parity, vec![Component { l, n, coeff: one(), profile }])
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Domain("test function needs at least one component".into()));
        }
        for c in &self.components {
            if (c.l - c.n).rem_euclid(2) != 0 {
                return Err(Error::ParityMismatch(format!(
                    "component ({}, {}) mixes parities",
                    c.l, c.n
                )));
            }
            if !self.parity.matches(c.l) {
                return Err(Error::ParityMismatch(format!(
                    "component ({}, {}) does not match declared parity",
                    c.l, c.n
                )));
            }
            c.profile.validate()?;
        }
        Ok(())
    }

    /// Pointwise evaluation through the Cartan decomposition of `g`.
    pub fn eval(&self, g: &GroupElement) -> Complex64 {
        let ct = g.cartan();
        self.eval_cartan(ct.phi1, ct.t, ct.phi2)
    }

    pub fn eval_cartan(&self, phi1: f64, t: f64, phi2: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.components {
            let chi = c.profile.eval(t);
            if chi != 0.0 {
                let phase = Complex64::from_polar(1.0, -(c.l as f64) * phi1 - (c.n as f64) * phi2);
                acc += c.coeff * chi * phase;
            }
        }
        acc
    }

    /// Union of the component supports.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for c in &self.components {
            let (a, b) = c.profile.support();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// The adjoint `h*(g) = conj(h(g^{-1}))`: component `(l, n)` maps to
    /// `(n, l)` with coefficient `conj(coeff) * (-1)^{(l-n)/2}`.
    pub fn star(&self) -> Self {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                l: c.n,
                n: c.l,
                coeff: c.coeff.conj()
                    * Complex64::new(if (c.l - c.n).rem_euclid(4) == 0 { 1.0 } else { -1.0 }, 0.0),
                profile: c.profile.clone(),
            })
            .collect();
        TestFunction { parity: self.parity, components }
    }
}

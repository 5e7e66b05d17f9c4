//! Standard intertwining operators and the unitarizing rescalings.
//!
//! The intertwiner `A(u): P^{parity,u} -> P^{parity,-u}` is diagonal in the
//! K-type basis with eigenvalues
//!
//! `c_n(u) = int_R (1+x^2)^{-(u+1)/2} ((x - i)/sqrt(1+x^2))^n dx`,
//!
//! convergent for `Re u > 0` and meromorphically continued through the
//! two-step recursion `c_{n+2}(u) = -(u - (n+1))/(u + (n+1)) c_n(u)`,
//! together with `c_{-n}(u) = (-1)^n c_n(u)`. Ratios against the parity base
//! eigenvalue (`c_0` even, `c_1` odd) are rational in `u` and drive both the
//! complementary-series rescaling `d_n(u) = sqrt(c_n(u)/c_0(u))` on `(0,1)`
//! and its endpoint limits at `u = 1`.

use crate::error::{Error, Result};
use crate::harmonics::{KTypeWindow, Parity};
use crate::operator::TruncatedOperator;
use crate::principal::group_fourier;
use crate::quadrature::{gauss_legendre_on, QuadratureRule};
use crate::testfn::TestFunction;
use num_complex::Complex64;

/// Numerically integrated intertwiner eigenvalue plus a certified bound on
/// the truncated tails.
#[derive(Debug, Clone, Copy)]
pub struct EigenValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `c_n(u)` by direct quadrature after `x = sinh(w)`; needs `Re u > 0`.
///
/// The substitution turns the integrand into
/// `cosh(w)^{-u} exp(i n theta(w))` with `theta = atan2(-1, sinh w)`, whose
/// modulus decays like `e^{-Re(u) |w|}`; the cutoff is chosen so the
/// analytic tail bound `2 (2 cosh W)^{-Re u} ... <= 2^{Re u + 1} e^{-Re u W} / Re u`
/// sits near machine precision relative to `pi`, and is reported back.
pub fn knapp_stein_eigen(n: i64, u: Complex64) -> Result<EigenValue> {
    let a = u.re;
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "eigenvalue integral diverges for Re u = {a} <= 0; use the rational continuation"
        )));
    }
    // 2^{a+1} e^{-a W} / a <= 1e-15  =>  W >= (ln(2^{a+1}/a) + 34.6) / a.
    let w_cut = (((a + 1.0) * std::f64::consts::LN_2 - a.ln() + 34.6) / a).max(12.0);
    if w_cut > 5000.0 {
        return Err(Error::Domain(format!("Re u = {a} too small to certify the tail")));
    }
    let panels = (2.0 * w_cut).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = -w_cut + 2.0 * w_cut * p as f64 / panels as f64;
        let hi = -w_cut + 2.0 * w_cut * (p + 1) as f64 / panels as f64;
        let (nodes, weights) = gauss_legendre_on(20, lo, hi);
        for (w, wt) in nodes.iter().zip(&weights) {
            let theta = (-1.0_f64).atan2(w.sinh());
            let log_cosh = w.abs() + (1.0 + (-2.0 * w.abs()).exp()).ln() - std::f64::consts::LN_2;
            let expo = Complex64::new(-a * log_cosh, -u.im * log_cosh + n as f64 * theta);
            acc += expo.exp() * *wt;
        }
    }
    let tail = 2.0_f64.powf(a + 1.0) * (-a * w_cut).exp() / a;
    Ok(EigenValue { value: acc, tail_bound: tail })
}

fn base_index(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        0
    } else {
        1
    }
}

fn pole_guard(denom: Complex64, at: f64) -> Result<Complex64> {
    if denom.norm() < 1e-12 {
        return Err(Error::RatioPole(at));
    }
    Ok(denom)
}

/// `c_n(u) / c_base(u)` with `base = 0` (even `n`) or `1` (odd `n`), as a
/// rational function of `u`; poles raise [`Error::RatioPole`].
pub fn ratio_c(n: i64, u: Complex64) -> Result<Complex64> {
    ratio_quotient(n, base_index(n), u)
}

/// `c_n(u) / c_m(u)` for `n, m` of equal parity, with the common poles of the
/// two base ratios cancelled before evaluation.
pub fn ratio_quotient(n: i64, m: i64, u: Complex64) -> Result<Complex64> {
    if (n - m).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch(format!("ratio of c_{n} to c_{m} mixes parities")));
    }
    // c_{-j} = (-1)^j c_j reduces everything to |n|, |m|.
    let mut sign = 1.0;
    if n < 0 && n % 2 != 0 {
        sign = -sign;
    }
    if m < 0 && m % 2 != 0 {
        sign = -sign;
    }
    let (lo, hi, ascending) = if n.abs() >= m.abs() {
        (m.abs(), n.abs(), true)
    } else {
        (n.abs(), m.abs(), false)
    };
    let mut q = Complex64::new(sign, 0.0);
    let mut j = lo;
    while j < hi {
        let k = (j + 1) as f64;
        let step = if ascending {
            -(u - k) / pole_guard(u + k, -k)?
        } else {
            -(u + k) / pole_guard(u - k, k)?
        };
        q *= step;
        j += 2;
    }
    Ok(q)
}

/// `max_u |ratio_c(n, u) ratio_c(n, -u) - 1|` over the grid; the product is
/// identically one, so this measures pure evaluation noise.
pub fn gamma_invariance_defect(n: i64, grid: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for u in grid {
        let p = ratio_c(n, *u)? * ratio_c(n, -*u)?;
        worst = worst.max((p - Complex64::new(1.0, 0.0)).norm());
    }
    Ok(worst)
}

/// Residual of the intertwining relation
/// `ratio_c(l, u) M^u_{l,n}(g) = ratio_c(n, u) M^{-u}_{l,n}(g)`.
pub fn intertwining_defect(
    parity: Parity,
    u: Complex64,
    g: &crate::group::GroupElement,
    l: i64,
    n: i64,
    circle: &QuadratureRule,
) -> Result<f64> {
    let lhs = ratio_c(l, u)? * crate::principal::matrix_element(parity, u, g, l, n, circle)?;
    let rhs = ratio_c(n, u)? * crate::principal::matrix_element(parity, -u, g, l, n, circle)?;
    Ok((lhs - rhs).norm())
}

/// Diagonal rescaling between the naturally-truncated picture of a series
/// and its unitary `L^2(K)` picture. Zero diagonal entries mark K-types
/// outside the domain; conjugation annihilates anything they touch.
#[derive(Debug, Clone)]
pub struct RescalingOperator {
    pub window: KTypeWindow,
    pub diag: Vec<f64>,
}

impl RescalingOperator {
    /// `K_u = diag(d_n(u))`, `d_n(u) = sqrt(c_n(u)/c_0(u))`, the complementary
    /// unitarizer; requires `u` in the open interval `(0, 1)`.
    pub fn complementary(u: f64, window: KTypeWindow) -> Result<Self> {
        if window.parity != Parity::Even {
            return Err(Error::ParityMismatch("complementary rescaling lives on even windows".into()));
        }
        if !(0.0 < u && u < 1.0) {
            return Err(Error::Domain(format!("complementary parameter must lie in (0,1), got {u}")));
        }
        let uc = Complex64::new(u, 0.0);
        let mut diag = Vec::new();
        for n in window.indices() {
            let r = ratio_c(n, uc)?.re;
            if r <= 0.0 {
                return Err(Error::Domain(format!("non-positive ratio at K-type {n}, u = {u}")));
            }
            diag.push(r.sqrt());
        }
        Ok(RescalingOperator { window, diag })
    }

    /// Unitarizer of the weight-`(m+1)` ladder inside `P^{e,m}`: diagonal
    /// `sqrt(c_|n|/c_{m+1})(m)` on K-types with `sign * n >= m + 1`, zero
    /// elsewhere. `positive = true` selects the lowest-weight (`+`) ladder.
    pub fn discrete(m: u32, positive: bool, window: KTypeWindow) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("discrete parameter m must be >= 1".into()));
        }
        let expected = if m % 2 == 1 { Parity::Even } else { Parity::Odd };
        if window.parity != expected {
            return Err(Error::ParityMismatch(format!(
                "discrete m = {m} lives on {expected:?} windows"
            )));
        }
        let base = (m + 1) as i64;
        let um = Complex64::new(m as f64, 0.0);
        let mut diag = Vec::new();
        for n in window.indices() {
            let in_ladder = if positive { n >= base } else { n <= -base };
            if in_ladder {
                let q = ratio_quotient(n.abs(), base, um)?.re;
                if q <= 0.0 {
                    return Err(Error::Domain(format!("non-positive ladder ratio at K-type {n}")));
                }
                diag.push(q.sqrt());
            } else {
                diag.push(0.0);
            }
        }
        Ok(RescalingOperator { window, diag })
    }

    /// `K_(1) = diag(sqrt(2/n))` on K-types `n >= 2`, the `u -> 1` limit of
    /// the complementary rescaling renormalized at the lowest weight.
    pub fn discrete_limit_plus(window: KTypeWindow) -> Result<Self> {
        Self::discrete(1, true, window)
    }

    /// `K_[1] = diag(sqrt(2/|n|))` on K-types `n <= -2`.
    pub fn discrete_limit_minus(window: KTypeWindow) -> Result<Self> {
        Self::discrete(1, false, window)
    }

    pub fn as_operator(&self) -> TruncatedOperator {
        let mut op = TruncatedOperator::zero(self.window, self.window);
        for (i, d) in self.diag.iter().enumerate() {
            op.entries[(i, i)] = Complex64::new(*d, 0.0);
        }
        op
    }

    /// Inverse on the domain, zero outside (a pseudo-inverse when the
    /// rescaling is partial).
    pub fn inverse_operator(&self) -> TruncatedOperator {
        let mut op = TruncatedOperator::zero(self.window, self.window);
        for (i, d) in self.diag.iter().enumerate() {
            if *d != 0.0 {
                op.entries[(i, i)] = Complex64::new(1.0 / *d, 0.0);
            }
        }
        op
    }

    /// `K op K^{-1}` (with the pseudo-inverse when partial).
    pub fn conjugate(&self, op: &TruncatedOperator) -> Result<TruncatedOperator> {
        self.as_operator().compose(op)?.compose(&self.inverse_operator())
    }
}

/// `C^u(h)` in the unitary picture by the scalar route: entry `(l, n)` is
/// `sqrt(c_l/c_n)(u)` times the principal-series entry.
pub fn comp_series_fourier(
    u: f64,
    h: &TestFunction,
    window: KTypeWindow,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<TruncatedOperator> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("complementary parameter must lie in (0,1), got {u}")));
    }
    let uc = Complex64::new(u, 0.0);
    let mut op = group_fourier(Parity::Even, uc, h, window, circle, t_points)?;
    let idx = window.indices();
    for (i, l) in idx.iter().enumerate() {
        for (j, n) in idx.iter().enumerate() {
            let q = ratio_quotient(*l, *n, uc)?.re;
            if q <= 0.0 {
                return Err(Error::Domain(format!("non-positive rescaling quotient at ({l}, {n})")));
            }
            op.entries[(i, j)] *= q.sqrt();
        }
    }
    Ok(op)
}

/// `C^u(h)` by explicit conjugation `K_u P^{+,u}(h) K_u^{-1}`; kept as an
/// independent route for cross-checking [`comp_series_fourier`].
pub fn comp_series_fourier_conjugation(
    u: f64,
    h: &TestFunction,
    window: KTypeWindow,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<TruncatedOperator> {
    let p = group_fourier(Parity::Even, Complex64::new(u, 0.0), h, window, circle, t_points)?;
    RescalingOperator::complementary(u, window)?.conjugate(&p)
}

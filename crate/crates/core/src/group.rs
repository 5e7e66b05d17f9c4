//! The group SL(2,R) and its standard decompositions.
//!
//! Conventions used throughout the crate:
//! * `K = SO(2)` with `k_phi = [[cos phi, -sin phi], [sin phi, cos phi]]`,
//! * `A = { a_t = diag(e^{t/2}, e^{-t/2}) }`,
//! * `N = { mu_x = [[1, x], [0, 1]] }`,
//! * Iwasawa `g = k_phi * diag(e^s, e^{-s}) * mu_x` (note `a_t = e^H` means `s = t/2`),
//! * Cartan `g = k_phi1 * a_t * k_phi2` with `t >= 0` and `phi1` normalized to `[0, pi)`.

use crate::error::{Error, Result};

const DET_TOL: f64 = 1e-9;

/// An element of SL(2,R), stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Iwasawa coordinates: `g = k_phi * diag(e^s, e^{-s}) * mu_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords {
    pub phi: f64,
    pub s: f64,
    pub x: f64,
}

/// Cartan coordinates: `g = k_phi1 * a_t * k_phi2` with `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartanCoords {
    pub phi1: f64,
    pub t: f64,
    pub phi2: f64,
}

impl GroupElement {
    /// Builds a group element, rejecting matrices with `|det - 1|` above 1e-9.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnimodular(det));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// The rotation `k_phi`.
    pub fn rotation(phi: f64) -> Self {
        let (sn, cs) = phi.sin_cos();
        GroupElement { a: cs, b: -sn, c: sn, d: cs }
    }

    /// The diagonal element `a_t = diag(e^{t/2}, e^{-t/2})`.
    pub fn diag(t: f64) -> Self {
        GroupElement { a: (0.5 * t).exp(), b: 0.0, c: 0.0, d: (-0.5 * t).exp() }
    }

    /// The unipotent element `mu_x`.
    pub fn unipotent(x: f64) -> Self {
        GroupElement { a: 1.0, b: x, c: 0.0, d: 1.0 }
    }

    pub fn mul(&self, rhs: &GroupElement) -> Self {
        GroupElement {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Inverse; exact for determinant one.
    pub fn inv(&self) -> Self {
        GroupElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Squared Frobenius norm. Equals `2 cosh t` in Cartan coordinates.
    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Iwasawa decomposition. `e^s` and `phi` are read off the first column:
    /// `(a, c) = e^s (cos phi, sin phi)`, then `x = (ab + cd) e^{-2s}`.
    pub fn iwasawa(&self) -> IwasawaCoords {
        let r2 = self.a * self.a + self.c * self.c;
        let s = 0.5 * r2.ln();
        let phi = self.c.atan2(self.a);
        let x = (self.a * self.b + self.c * self.d) / r2;
        IwasawaCoords { phi, s, x }
    }

    /// Iwasawa `s`-coordinate alone (the quantity `H(g)` evaluated on `diag(1,-1)/2`).
    pub fn iwasawa_s(&self) -> f64 {
        0.5 * (self.a * self.a + self.c * self.c).ln()
    }

    /// Cartan decomposition via the closed-form SVD of a 2x2 matrix.
    ///
    /// Returns `(phi1, t, phi2)` with `t >= 0` and `phi1` in `[0, pi)`; the
    /// double cover `(k1, k2) -> (-k1, -k2)` is resolved by that normalization.
    /// For `g` in `K` (so `t = 0`) the convention is `(phi(g) mod pi, 0, 0 or pi)`.
    pub fn cartan(&self) -> CartanCoords {
        // Angles diagonalizing g^T g and g g^T. For E = (a^2+b^2+c^2+d^2)/2,
        // F = det g = 1: singular values are sqrt(E +- sqrt(E^2-1)).
        let e = 0.5 * self.norm_sq();
        let disc = (e * e - 1.0).max(0.0).sqrt();
        let sigma1 = (e + disc).sqrt();
        let t = 2.0 * sigma1.ln();
        if t.abs() < 1e-15 || disc == 0.0 {
            // g is a rotation.
            let phi = self.c.atan2(self.a);
            let (phi1, phi2) = if phi.rem_euclid(2.0 * std::f64::consts::PI) < std::f64::consts::PI
            {
                (phi.rem_euclid(2.0 * std::f64::consts::PI), 0.0)
            } else {
                (
                    phi.rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI,
                    std::f64::consts::PI,
                )
            };
            return CartanCoords { phi1, t: 0.0, phi2 };
        }
        // g^T g = k_{-phi2} diag(s1^2, s2^2) k_{phi2}; 2x2 symmetric eigenproblem.
        let p = self.a * self.a + self.c * self.c;
        let q = self.a * self.b + self.c * self.d;
        let r = self.b * self.b + self.d * self.d;
        // Eigenvector of [[p, q], [q, r]] for the largest eigenvalue s1^2.
        let lam = sigma1 * sigma1;
        let (v0, v1) = if (p - lam).abs() > (r - lam).abs() {
            (q, lam - p)
        } else {
            (lam - r, q)
        };
        let phi2 = (-v1).atan2(v0); // k_{phi2} maps the eigenvector to e_1
        let ks = GroupElement::rotation(phi2);
        let at_inv = GroupElement::diag(-t);
        // k1 = g * k_phi2^{-1} * a_t^{-1}
        let k1 = self.mul(&ks.inv()).mul(&at_inv);
        let mut phi1 = k1.c.atan2(k1.a);
        let mut phi2n = phi2;
        phi1 = phi1.rem_euclid(2.0 * std::f64::consts::PI);
        if phi1 >= std::f64::consts::PI {
            phi1 -= std::f64::consts::PI;
            phi2n += std::f64::consts::PI;
        }
        CartanCoords { phi1, t, phi2: phi2n.rem_euclid(2.0 * std::f64::consts::PI) }
    }

    pub fn from_iwasawa(c: IwasawaCoords) -> Self {
        let es = c.s.exp();
        GroupElement::rotation(c.phi).mul(&GroupElement {
            a: es,
            b: es * c.x,
            c: 0.0,
            d: 1.0 / es,
        })
    }

    pub fn from_cartan(c: CartanCoords) -> Self {
        GroupElement::rotation(c.phi1)
            .mul(&GroupElement::diag(c.t))
            .mul(&GroupElement::rotation(c.phi2))
    }
}

/// A traceless 2x2 matrix, i.e. an element of sl(2,R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieAlgebraElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LieAlgebraElement {
    /// `[[a, b], [c, -a]]`.
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        LieAlgebraElement { a, b, c }
    }

    /// `H = diag(1, -1)`.
    pub fn h() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }

    /// `E = [[0, 1], [0, 0]]`.
    pub fn e() -> Self {
        Self::new(0.0, 1.0, 0.0)
    }

    /// `F = [[0, 0], [1, 0]]`.
    pub fn f() -> Self {
        Self::new(0.0, 0.0, 1.0)
    }

    pub fn scale(&self, lam: f64) -> Self {
        Self::new(lam * self.a, lam * self.b, lam * self.c)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }

    /// The invariant form `<X, Y> = 2 tr(XY)`.
    pub fn pairing(&self, rhs: &Self) -> f64 {
        2.0 * (2.0 * self.a * rhs.a + self.b * rhs.c + self.c * rhs.b)
    }
}

/// `exp(tau X)` for traceless `X`, via Cayley-Hamilton: `X^2 = -det(X) I`.
pub fn exp_one_param(x: &LieAlgebraElement, tau: f64) -> GroupElement {
    let det = -x.a * x.a - x.b * x.c;
    // cosh/cos and sinh(z)/z resp. sin(z)/z of tau*sqrt(|det|), stable near 0.
    let (ch, sh_over) = if det < 0.0 {
        let lam = (-det).sqrt();
        let z = tau * lam;
        (z.cosh(), if z.abs() < 1e-8 { 1.0 + z * z / 6.0 } else { z.sinh() / z })
    } else if det > 0.0 {
        let lam = det.sqrt();
        let z = tau * lam;
        (z.cos(), if z.abs() < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z })
    } else {
        (1.0, 1.0)
    };
    let m = tau * sh_over;
    GroupElement {
        a: ch + m * x.a,
        b: m * x.b,
        c: m * x.c,
        d: ch - m * x.a,
    }
}

/// Dual basis pairs `(X_i, X^i)` for the Casimir element with respect to
/// `<X, Y> = 2 tr(XY)`: since `<H, H> = 4` and `<E, F> = 2`, the element is
/// `C = H (H/4) + E (F/2) + F (E/2)`.
pub fn casimir_dual_basis() -> Vec<(LieAlgebraElement, LieAlgebraElement)> {
    vec![
        (LieAlgebraElement::h(), LieAlgebraElement::h().scale(0.25)),
        (LieAlgebraElement::e(), LieAlgebraElement::f().scale(0.5)),
        (LieAlgebraElement::f(), LieAlgebraElement::e().scale(0.5)),
    ]
}

/// An alternative dual-basis set used to cross-check basis independence:
/// `{H, E+F, E-F}` with pairings `4, 4, -4`.
pub fn casimir_dual_basis_alt() -> Vec<(LieAlgebraElement, LieAlgebraElement)> {
    let epf = LieAlgebraElement::e().add(&LieAlgebraElement::f());
    let emf = LieAlgebraElement::e().add(&LieAlgebraElement::f().scale(-1.0));
    vec![
        (LieAlgebraElement::h(), LieAlgebraElement::h().scale(0.25)),
        (epf, epf.scale(0.25)),
        (emf, emf.scale(-0.25)),
    ]
}

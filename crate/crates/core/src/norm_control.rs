//! Norm control at the three boundary degenerations of the dual.
//!
//! Each case pairs a parameter strand with the structure map `nu` that
//! assembles the limit operator from the boundary fibers:
//!
//! * case i — `P^{-,iv}` as `v -> 0`; `nu(psi) = psi(D+) p_+ + psi(D-) p_-`,
//! * case ii — `C^u` as `u -> 0`; `nu(psi) = psi(P^{+,0})`,
//! * case iii — `C^u` as `u -> 1`;
//!   `nu(psi) = psi(D1+) p_+ + psi(D1-) p_- + psi(F1) p_0`.
//!
//! Boundary samples are stored in the unitary `L^2(K)` picture of each
//! fiber (the weight-ladder rescalings are applied when sampling), which is
//! what makes `nu` involutive and norm-contractive entry by entry. The
//! verification routine walks a boundary-distance schedule and reports, per
//! step, the measured operator defect together with a composite certified
//! bound built from the kernel-gap estimate and the rescaling drift.

use crate::dual::{fourier_of_point, DualPoint, Sign, Stage};
use crate::error::{Error, Result};
use crate::harmonics::{projection_minus, projection_plus, projection_zero, KTypeWindow, Parity};
use crate::intertwiner::{ratio_quotient, RescalingOperator};
use crate::operator::TruncatedOperator;
use crate::principal::{convergence_bound, group_fourier};
use crate::quadrature::QuadratureRule;
use crate::testfn::TestFunction;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The three norm-control cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NuCase {
    I,
    II,
    III,
}

impl NuCase {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "i" => Ok(NuCase::I),
            "ii" => Ok(NuCase::II),
            "iii" => Ok(NuCase::III),
            other => Err(Error::MalformedDescriptor(format!("unknown case {other:?}, expected i|ii|iii"))),
        }
    }

    /// Parity of the window the case lives on.
    pub fn parity(&self) -> Parity {
        match self {
            NuCase::I => Parity::Odd,
            NuCase::II | NuCase::III => Parity::Even,
        }
    }

    /// The parameter strand walking into the boundary.
    pub fn strand(&self) -> Stage {
        match self {
            NuCase::I => Stage::PrincipalOddTo { v: 0.0 },
            NuCase::II => Stage::ComplementaryTo { u: 0.0 },
            NuCase::III => Stage::ComplementaryTo { u: 1.0 },
        }
    }

    /// Boundary fibers, in canonical order.
    pub fn boundary_points(&self) -> Vec<DualPoint> {
        self.strand().limit_set().expect("case strands are always valid")
    }
}

impl fmt::Display for NuCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuCase::I => write!(f, "i"),
            NuCase::II => write!(f, "ii"),
            NuCase::III => write!(f, "iii"),
        }
    }
}

/// Operator samples over finitely many dual points, all on one window.
#[derive(Debug, Clone)]
pub struct RestrictedField {
    pub samples: Vec<(DualPoint, TruncatedOperator)>,
}

impl RestrictedField {
    pub fn new(samples: Vec<(DualPoint, TruncatedOperator)>) -> Result<Self> {
        let mut window: Option<KTypeWindow> = None;
        for (p, op) in &samples {
            p.validate()?;
            if op.row_window != op.col_window {
                return Err(Error::WindowMismatch(format!("sample at {p} is not square")));
            }
            match window {
                None => window = Some(op.row_window),
                Some(w) if w == op.row_window => {}
                Some(w) => {
                    return Err(Error::WindowMismatch(format!(
                        "sample at {p} lives on a different window than {w:?}"
                    )))
                }
            }
        }
        Ok(RestrictedField { samples })
    }

    pub fn get(&self, point: &DualPoint) -> Result<&TruncatedOperator> {
        self.samples
            .iter()
            .find(|(p, _)| p == point)
            .map(|(_, op)| op)
            .ok_or_else(|| Error::MissingSample(point.to_string()))
    }

    /// `sup_q ||psi(q)||_op` over the sampled points.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|(_, op)| op.op_norm()).fold(0.0, f64::max)
    }

    /// Pointwise adjoint, the `*` of the restricted algebra.
    pub fn adjoint(&self) -> Self {
        RestrictedField {
            samples: self.samples.iter().map(|(p, op)| (*p, op.adjoint())).collect(),
        }
    }
}

/// Samples `pi_q(h)` at the boundary fibers of the case, in the unitary
/// picture of each fiber.
pub fn fourier_restriction(
    case: NuCase,
    h: &TestFunction,
    max_index: u32,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<RestrictedField> {
    if h.parity != case.parity() {
        return Err(Error::ParityMismatch(format!(
            "case {case} needs a {:?}-parity test function",
            case.parity()
        )));
    }
    let mut samples = Vec::new();
    for q in case.boundary_points() {
        let op = fourier_of_point(&q, h, max_index, circle, t_points)?;
        samples.push((q, op));
    }
    RestrictedField::new(samples)
}

/// The structure map `nu` of the case applied to boundary samples.
pub fn nu_apply(case: NuCase, field: &RestrictedField) -> Result<TruncatedOperator> {
    match case {
        NuCase::I => {
            let plus = field.get(&DualPoint::LimitDiscrete { sign: Sign::Plus })?;
            let minus = field.get(&DualPoint::LimitDiscrete { sign: Sign::Minus })?;
            let w = plus.row_window;
            plus.compose(&projection_plus(w))?.add(&minus.compose(&projection_minus(w))?)
        }
        NuCase::II => Ok(field.get(&DualPoint::PrincipalEven { v: 0.0 })?.clone()),
        NuCase::III => {
            let dp = field.get(&DualPoint::Discrete { m: 1, sign: Sign::Plus })?;
            let dm = field.get(&DualPoint::Discrete { m: 1, sign: Sign::Minus })?;
            let f1 = field.get(&DualPoint::Trivial)?;
            let w = dp.row_window;
            dp.compose(&projection_plus(w))?
                .add(&dm.compose(&projection_minus(w))?)?
                .add(&f1.compose(&projection_zero(w))?)
        }
    }
}

/// `max(0, ||nu(psi)|| - sup_q ||psi(q)||)`: how far `nu` is from being a
/// contraction on the sampled field.
pub fn nu_norm_bound_defect(case: NuCase, field: &RestrictedField) -> Result<f64> {
    let assembled = nu_apply(case, field)?.op_norm();
    Ok((assembled - field.sup_norm()).max(0.0))
}

/// `||nu(psi^*) - nu(psi)^*||_op`: failure of `nu` to intertwine the
/// involutions.
pub fn nu_involution_defect(case: NuCase, field: &RestrictedField) -> Result<f64> {
    let lhs = nu_apply(case, &field.adjoint())?;
    let rhs = nu_apply(case, field)?.adjoint();
    Ok(lhs.sub(&rhs)?.op_norm())
}

/// The approaching operator of the case at boundary distance `delta`, in
/// its unitary picture.
pub fn approach_operator(
    case: NuCase,
    h: &TestFunction,
    delta: f64,
    max_index: u32,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<TruncatedOperator> {
    let point = case.strand().point_at(delta)?;
    fourier_of_point(&point, h, max_index, circle, t_points)
}

/// One row of a norm-control verification run.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NcdlRow {
    pub delta: f64,
    pub defect: f64,
    pub bound: f64,
}

/// The `nu`-side scalar of case iii at entry `(l, n)`: the continued
/// rescaling quotient on the two weight ladders and the fixed line, zero on
/// every entry the boundary fibers cannot see.
fn nu_scalar_iii(l: i64, n: i64) -> Result<f64> {
    if l == 0 && n == 0 {
        return Ok(1.0);
    }
    let same_plus = l >= 2 && n >= 2;
    let same_minus = l <= -2 && n <= -2;
    if same_plus || same_minus {
        let q = ratio_quotient(l.abs(), n.abs(), Complex64::new(1.0, 0.0))?.re;
        return Ok(q.sqrt());
    }
    Ok(0.0)
}

fn bound_case_iii(
    h: &TestFunction,
    delta: f64,
    window: KTypeWindow,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<f64> {
    let u = 1.0 - delta;
    let uc = Complex64::new(u, 0.0);
    let pu = group_fourier(Parity::Even, uc, h, window, circle, t_points)?;
    let p1 = group_fourier(Parity::Even, Complex64::new(1.0, 0.0), h, window, circle, t_points)?;
    let eq9 = convergence_bound(h, uc, Complex64::new(1.0, 0.0))?;
    let idx = window.indices();
    let mut acc = 0.0;
    for (i, l) in idx.iter().enumerate() {
        for (j, n) in idx.iter().enumerate() {
            let qu = ratio_quotient(*l, *n, uc)?.re.max(0.0).sqrt();
            let q1 = nu_scalar_iii(*l, *n)?;
            // nu entry is q1 * P^1_{l,n}; the sampled entry is qu * P^u_{l,n}.
            let entry_bound = (qu - q1).abs() * pu.entries[(i, j)].norm()
                + q1 * (eq9 + if q1 > 0.0 { 0.0 } else { p1.entries[(i, j)].norm() });
            acc += entry_bound * entry_bound;
        }
    }
    Ok(acc.sqrt())
}

fn bound_case_ii(
    h: &TestFunction,
    delta: f64,
    window: KTypeWindow,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<f64> {
    let u = delta;
    let k = RescalingOperator::complementary(u, window)?;
    let kinv_max = k.diag.iter().map(|d| 1.0 / d).fold(0.0, f64::max);
    let kdrift = k.diag.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    let kinv_drift = k.diag.iter().map(|d| (1.0 / d - 1.0).abs()).fold(0.0, f64::max);
    let pu = group_fourier(Parity::Even, Complex64::new(u, 0.0), h, window, circle, t_points)?;
    let pnorm = pu.op_norm();
    // ||K P K^{-1} - P|| <= ||K - 1|| ||P|| ||K^{-1}|| + ||P|| ||K^{-1} - 1||.
    let rescale_term = kdrift * pnorm * kinv_max + pnorm * kinv_drift;
    let eq9 = convergence_bound(h, Complex64::new(u, 0.0), Complex64::new(0.0, 0.0))?;
    Ok(rescale_term + eq9)
}

fn bound_case_i(
    h: &TestFunction,
    delta: f64,
    window: KTypeWindow,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<f64> {
    let eq9 = convergence_bound(h, Complex64::new(0.0, delta), Complex64::new(0.0, 0.0))?;
    // The boundary operator is assembled block-diagonally; account for the
    // (theoretically vanishing) cross-block mass of the computed P^{-,0}(h).
    let p0 = group_fourier(Parity::Odd, Complex64::new(0.0, 0.0), h, window, circle, t_points)?;
    let cross = p0
        .sub(&p0.mask(|n| n > 0))?
        .sub(&p0.mask(|n| n < 0))?
        .op_norm();
    Ok(eq9 + cross)
}

/// Walks the boundary-distance schedule and reports the measured defect
/// `||gamma_delta(h) - nu(restriction of h)||_op` next to its certified
/// composite bound.
pub fn verify_ncdl_limit(
    case: NuCase,
    h: &TestFunction,
    schedule: &[f64],
    max_index: u32,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<Vec<NcdlRow>> {
    if schedule.is_empty() {
        return Err(Error::Domain("empty boundary schedule".into()));
    }
    for d in schedule {
        if !(*d > 0.0 && *d < 1.0) {
            return Err(Error::Domain(format!("schedule distances must lie in (0,1), got {d}")));
        }
    }
    let field = fourier_restriction(case, h, max_index, circle, t_points)?;
    let limit = nu_apply(case, &field)?;
    let window = KTypeWindow::new(case.parity(), max_index)?;
    let mut rows = Vec::with_capacity(schedule.len());
    for delta in schedule {
        let gamma = approach_operator(case, h, *delta, max_index, circle, t_points)?;
        let defect = gamma.sub(&limit)?.op_norm();
        let bound = match case {
            NuCase::I => bound_case_i(h, *delta, window, circle, t_points)?,
            NuCase::II => bound_case_ii(h, *delta, window, circle, t_points)?,
            NuCase::III => bound_case_iii(h, *delta, window, circle, t_points)?,
        };
        rows.push(NcdlRow { delta: *delta, defect, bound });
    }
    Ok(rows)
}

/// The calibrated reference test function of a case. Bi-type coefficients
/// are chosen to exercise every boundary branch; the `(2,0)` profile is kept
/// small because its boundary decay is only `sqrt(delta)`.
pub fn reference_test_function(case: NuCase) -> TestFunction {
    use crate::testfn::{Component, Profile};
    let c = |l: i64, n: i64, t0: f64, t1: f64, amplitude: f64| Component {
        l,
        n,
        coeff: Complex64::new(1.0, 0.0),
        profile: Profile::Bump { t0, t1, amplitude },
    };
    let (parity, components) = match case {
        NuCase::I => (
            Parity::Odd,
            vec![c(1, 1, 0.4, 1.0, 1.0), c(3, 1, 0.5, 1.1, 0.7), c(-1, -3, 0.3, 0.9, 0.5)],
        ),
        NuCase::II => (
            Parity::Even,
            vec![c(0, 0, 0.4, 1.0, 1.0), c(2, 2, 0.5, 1.1, 0.8), c(4, -2, 0.3, 0.9, 0.6)],
        ),
        NuCase::III => (
            Parity::Even,
            vec![
                c(2, 4, 0.4, 1.0, 0.8),
                c(-2, -4, 0.5, 1.1, 0.6),
                c(2, 0, 0.4, 1.0, 0.05),
                c(0, 0, 0.3, 0.9, 1.0),
            ],
        ),
    };
    TestFunction::new(parity, components).expect("reference functions are valid")
}

/// A random boundary field of the case: independent uniform complex entries
/// on each fiber's model block, in the unitary picture.
pub fn random_field(case: NuCase, max_index: u32, seed: u64) -> Result<RestrictedField> {
    let window = KTypeWindow::new(case.parity(), max_index)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::new();
    for q in case.boundary_points() {
        let mut op = TruncatedOperator::zero(window, window);
        let idx = window.indices();
        for (i, l) in idx.iter().enumerate() {
            for (j, n) in idx.iter().enumerate() {
                if q.ktype_in_model(*l) && q.ktype_in_model(*n) {
                    op.entries[(i, j)] =
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
        }
        samples.push((q, op));
    }
    RestrictedField::new(samples)
}

//! The unitary dual as a concrete point set, realizations of each point
//! inside truncated principal series, Casimir data, and a sequential model
//! of the Fell topology.
//!
//! Every dual point is realized on a K-type window: principal points
//! directly, complementary points through the unitarizing rescaling,
//! discrete-type points as masked weight ladders, and the trivial
//! representation as the fixed K-type-zero line at parameter `u = -1`. The
//! topology is modeled by interleaved parameter strands; a sequence
//! converges to exactly the points shared by every strand's limit set, and
//! converges *properly* when all strands limit onto one identical nonempty
//! set.

use crate::error::{Error, Result};
use crate::group::{casimir_dual_basis, exp_one_param, LieAlgebraElement};
use crate::harmonics::{KTypeWindow, Parity};
use crate::intertwiner::RescalingOperator;
use crate::operator::TruncatedOperator;
use crate::principal::{group_fourier, matrix_element};
use crate::quadrature::QuadratureRule;
use crate::testfn::TestFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Holomorphic/antiholomorphic label of a discrete-type point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn glyph(&self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A point of the unitary dual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DualPoint {
    /// The trivial representation.
    Trivial,
    /// Discrete series `D_m` (`m >= 1`) with lowest (`+`) or highest (`-`)
    /// weight ladder.
    Discrete { m: u32, sign: Sign },
    /// The two limits of discrete series sitting inside `P^{-,0}`.
    LimitDiscrete { sign: Sign },
    /// Spherical unitary principal series, `v >= 0`.
    PrincipalEven { v: f64 },
    /// Non-spherical unitary principal series, `v > 0`.
    PrincipalOdd { v: f64 },
    /// Complementary series, `0 < u < 1`.
    Complementary { u: f64 },
}

impl DualPoint {
    pub fn validate(&self) -> Result<()> {
        match self {
            DualPoint::Trivial | DualPoint::LimitDiscrete { .. } => Ok(()),
            DualPoint::Discrete { m, .. } => {
                if *m == 0 {
                    Err(Error::MalformedDescriptor("discrete series need m >= 1".into()))
                } else {
                    Ok(())
                }
            }
            DualPoint::PrincipalEven { v } => {
                if v.is_finite() && *v >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::MalformedDescriptor(format!("spherical principal needs v >= 0, got {v}")))
                }
            }
            DualPoint::PrincipalOdd { v } => {
                if v.is_finite() && *v > 0.0 {
                    Ok(())
                } else {
                    Err(Error::MalformedDescriptor(format!(
                        "non-spherical principal needs v > 0, got {v} (v = 0 is reducible)"
                    )))
                }
            }
            DualPoint::Complementary { u } => {
                if u.is_finite() && 0.0 < *u && *u < 1.0 {
                    Ok(())
                } else {
                    Err(Error::MalformedDescriptor(format!("complementary needs 0 < u < 1, got {u}")))
                }
            }
        }
    }

    /// Casimir eigenvalue: `(u^2 - 1)/4` at the realization parameter.
    pub fn casimir_value(&self) -> f64 {
        match self {
            DualPoint::Trivial => 0.0,
            DualPoint::Discrete { m, .. } => ((*m as f64).powi(2) - 1.0) / 4.0,
            DualPoint::LimitDiscrete { .. } => -0.25,
            DualPoint::PrincipalEven { v } | DualPoint::PrincipalOdd { v } => -(v * v + 1.0) / 4.0,
            DualPoint::Complementary { u } => (u * u - 1.0) / 4.0,
        }
    }

    /// Stratum index `0..=8`, ordered so every initial union is closed.
    pub fn stratum(&self) -> u8 {
        match self {
            DualPoint::Trivial => 0,
            DualPoint::Discrete { m: 1, sign: Sign::Plus } => 1,
            DualPoint::Discrete { m: 1, sign: Sign::Minus } => 2,
            DualPoint::LimitDiscrete { sign: Sign::Plus } => 3,
            DualPoint::LimitDiscrete { sign: Sign::Minus } => 4,
            DualPoint::Discrete { .. } => 5,
            DualPoint::PrincipalEven { .. } => 6,
            DualPoint::PrincipalOdd { .. } => 7,
            DualPoint::Complementary { .. } => 8,
        }
    }

    fn sort_key(&self) -> (u8, u32, u8, u64) {
        let (m, s, x) = match self {
            DualPoint::Trivial => (0, 0, 0.0),
            DualPoint::Discrete { m, sign } => (*m, matches!(sign, Sign::Minus) as u8, 0.0),
            DualPoint::LimitDiscrete { sign } => (0, matches!(sign, Sign::Minus) as u8, 0.0),
            DualPoint::PrincipalEven { v } | DualPoint::PrincipalOdd { v } => (0, 0, *v),
            DualPoint::Complementary { u } => (0, 0, *u),
        };
        (self.stratum(), m, s, x.to_bits())
    }

    /// Ambient principal-series parameter and parity of the model.
    pub fn realization(&self) -> (Parity, Complex64) {
        match self {
            DualPoint::Trivial => (Parity::Even, Complex64::new(-1.0, 0.0)),
            DualPoint::Discrete { m, .. } => {
                let parity = if m % 2 == 1 { Parity::Even } else { Parity::Odd };
                (parity, Complex64::new(*m as f64, 0.0))
            }
            DualPoint::LimitDiscrete { .. } => (Parity::Odd, Complex64::new(0.0, 0.0)),
            DualPoint::PrincipalEven { v } => (Parity::Even, Complex64::new(0.0, *v)),
            DualPoint::PrincipalOdd { v } => (Parity::Odd, Complex64::new(0.0, *v)),
            DualPoint::Complementary { u } => (Parity::Even, Complex64::new(*u, 0.0)),
        }
    }

    /// Whether K-type `n` belongs to the model subspace of the point.
    pub fn ktype_in_model(&self, n: i64) -> bool {
        let (parity, _) = self.realization();
        if !parity.matches(n) {
            return false;
        }
        match self {
            DualPoint::Trivial => n == 0,
            DualPoint::Discrete { m, sign } => {
                let base = (*m as i64) + 1;
                match sign {
                    Sign::Plus => n >= base,
                    Sign::Minus => n <= -base,
                }
            }
            DualPoint::LimitDiscrete { sign } => match sign {
                Sign::Plus => n >= 1,
                Sign::Minus => n <= -1,
            },
            _ => true,
        }
    }
}

impl fmt::Display for DualPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualPoint::Trivial => write!(f, "F1"),
            DualPoint::Discrete { m, sign } => write!(f, "D{m}{}", sign.glyph()),
            DualPoint::LimitDiscrete { sign } => write!(f, "D{}", sign.glyph()),
            DualPoint::PrincipalEven { v } => write!(f, "P+(v={v:.6})"),
            DualPoint::PrincipalOdd { v } => write!(f, "P-(v={v:.6})"),
            DualPoint::Complementary { u } => write!(f, "C(u={u:.6})"),
        }
    }
}

/// Whether `p` lies in the closed set `S_i`, the union of strata `0..=i`.
pub fn in_filtration(i: u8, p: &DualPoint) -> bool {
    p.stratum() <= i
}

/// Coordinate of a dual point on the three parameter lines of the
/// continuous-field model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "line", rename_all = "snake_case")]
pub enum FieldCoordinate {
    /// `u = iv` on the tempered half, `u in (0,1)` on the complementary
    /// arc, `u = 1` at the degenerate endpoint.
    EvenLine { re: f64, im: f64 },
    /// `v >= 0`, the reducible point sitting at `v = 0`.
    OddLine { v: f64 },
    /// Isolated points `m >= 2`.
    DiscretePoint { m: u32, sign: Sign },
}

/// Where a dual point sits in the continuous-field parameter space.
pub fn parametrize(p: &DualPoint) -> Result<FieldCoordinate> {
    p.validate()?;
    Ok(match p {
        DualPoint::Trivial => FieldCoordinate::EvenLine { re: 1.0, im: 0.0 },
        DualPoint::Discrete { m: 1, .. } => FieldCoordinate::EvenLine { re: 1.0, im: 0.0 },
        DualPoint::Discrete { m, sign } => FieldCoordinate::DiscretePoint { m: *m, sign: *sign },
        DualPoint::LimitDiscrete { .. } => FieldCoordinate::OddLine { v: 0.0 },
        DualPoint::PrincipalEven { v } => FieldCoordinate::EvenLine { re: 0.0, im: *v },
        DualPoint::PrincipalOdd { v } => FieldCoordinate::OddLine { v: *v },
        DualPoint::Complementary { u } => FieldCoordinate::EvenLine { re: *u, im: 0.0 },
    })
}

/// `pi_q(h)` in the unitary picture of the point `q`, on a window of the
/// matching parity. Test functions of the opposite parity map to zero.
pub fn fourier_of_point(
    point: &DualPoint,
    h: &TestFunction,
    max_index: u32,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<TruncatedOperator> {
    point.validate()?;
    let (parity, u) = point.realization();
    let window = KTypeWindow::new(parity, max_index)?;
    if h.parity != parity {
        return Ok(TruncatedOperator::zero(window, window));
    }
    let raw = group_fourier(parity, u, h, window, circle, t_points)?;
    let masked = raw.mask(|n| point.ktype_in_model(n));
    match point {
        DualPoint::Complementary { u } => {
            RescalingOperator::complementary(*u, window)?.conjugate(&masked)
        }
        DualPoint::Discrete { m, sign } => {
            RescalingOperator::discrete(*m, matches!(sign, Sign::Plus), window)?.conjugate(&masked)
        }
        _ => Ok(masked),
    }
}

/// Numeric Casimir eigenvalue through the diagonal matrix coefficient at
/// K-type `n`: mixed central second differences of
/// `<pi(exp(s X_i) exp(r X^i)) e_n, e_n>` summed over a dual basis, with one
/// Richardson extrapolation step in the difference width.
pub fn casimir_numeric(
    point: &DualPoint,
    n: i64,
    circle: &QuadratureRule,
    h_step: f64,
) -> Result<Complex64> {
    casimir_numeric_with_basis(point, n, &casimir_dual_basis(), circle, h_step)
}

/// [`casimir_numeric`] over an explicit dual-basis pairing, exposed to check
/// basis independence.
pub fn casimir_numeric_with_basis(
    point: &DualPoint,
    n: i64,
    basis: &[(LieAlgebraElement, LieAlgebraElement)],
    circle: &QuadratureRule,
    h_step: f64,
) -> Result<Complex64> {
    point.validate()?;
    if !point.ktype_in_model(n) {
        return Err(Error::Domain(format!("K-type {n} is not in the model of {point}")));
    }
    if !(h_step > 0.0) {
        return Err(Error::Domain("difference step must be positive".into()));
    }
    let (parity, u) = point.realization();
    let probe = |g: &crate::group::GroupElement| matrix_element(parity, u, g, n, n, circle);
    let mixed = |x: &LieAlgebraElement, y: &LieAlgebraElement, h: f64| -> Result<Complex64> {
        let f = |s: f64, r: f64| -> Result<Complex64> {
            probe(&exp_one_param(x, s).mul(&exp_one_param(y, r)))
        };
        Ok((f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h))
    };
    let second = |h: f64| -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, y) in basis {
            acc += mixed(x, y, h)?;
        }
        Ok(acc)
    };
    let coarse = second(h_step)?;
    let fine = second(0.5 * h_step)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// One strand of a sequence in the dual: a constant point, or a family
/// walking toward a designated boundary parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Stage {
    Constant { point: DualPoint },
    /// `P^{+,iv_j}` with `v_j` decreasing to `v >= 0`.
    PrincipalEvenTo { v: f64 },
    /// `P^{-,iv_j}` with `v_j` decreasing to `v >= 0`.
    PrincipalOddTo { v: f64 },
    /// `C^{u_j}` with `u_j` tending to `u in [0,1]`: upward to an interior
    /// or unit target, downward to zero.
    ComplementaryTo { u: f64 },
}

impl Stage {
    pub fn validate(&self) -> Result<()> {
        match self {
            Stage::Constant { point } => point.validate(),
            Stage::PrincipalEvenTo { v } | Stage::PrincipalOddTo { v } => {
                if v.is_finite() && *v >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::MalformedDescriptor(format!("principal strand target must be >= 0, got {v}")))
                }
            }
            Stage::ComplementaryTo { u } => {
                if u.is_finite() && (0.0..=1.0).contains(u) {
                    Ok(())
                } else {
                    Err(Error::MalformedDescriptor(format!(
                        "complementary strand target must lie in [0,1], got {u}"
                    )))
                }
            }
        }
    }

    /// Fell limit set of the strand alone, canonically ordered.
    pub fn limit_set(&self) -> Result<Vec<DualPoint>> {
        self.validate()?;
        Ok(match self {
            Stage::Constant { point } => vec![*point],
            Stage::PrincipalEvenTo { v } => vec![DualPoint::PrincipalEven { v: *v }],
            Stage::PrincipalOddTo { v } => {
                if *v > 0.0 {
                    vec![DualPoint::PrincipalOdd { v: *v }]
                } else {
                    vec![
                        DualPoint::LimitDiscrete { sign: Sign::Plus },
                        DualPoint::LimitDiscrete { sign: Sign::Minus },
                    ]
                }
            }
            Stage::ComplementaryTo { u } => {
                if *u == 0.0 {
                    vec![DualPoint::PrincipalEven { v: 0.0 }]
                } else if *u == 1.0 {
                    vec![
                        DualPoint::Trivial,
                        DualPoint::Discrete { m: 1, sign: Sign::Plus },
                        DualPoint::Discrete { m: 1, sign: Sign::Minus },
                    ]
                } else {
                    vec![DualPoint::Complementary { u: *u }]
                }
            }
        })
    }

    /// The strand member at boundary distance `delta > 0`.
    pub fn point_at(&self, delta: f64) -> Result<DualPoint> {
        self.validate()?;
        if !(delta > 0.0) {
            return Err(Error::Domain(format!("boundary distance must be positive, got {delta}")));
        }
        let p = match self {
            Stage::Constant { point } => *point,
            Stage::PrincipalEvenTo { v } => DualPoint::PrincipalEven { v: v + delta },
            Stage::PrincipalOddTo { v } => DualPoint::PrincipalOdd { v: v + delta },
            Stage::ComplementaryTo { u } => {
                let uj = if *u == 0.0 { delta } else if *u == 1.0 { 1.0 - delta } else { u - delta };
                if !(0.0 < uj && uj < 1.0) {
                    return Err(Error::Domain(format!(
                        "distance {delta} leaves the complementary interval from target {u}"
                    )));
                }
                DualPoint::Complementary { u: uj }
            }
        };
        p.validate()?;
        Ok(p)
    }

    /// Stratum the moving members live in.
    pub fn member_stratum(&self) -> u8 {
        match self {
            Stage::Constant { point } => point.stratum(),
            Stage::PrincipalEvenTo { .. } => 6,
            Stage::PrincipalOddTo { .. } => 7,
            Stage::ComplementaryTo { .. } => 8,
        }
    }
}

fn canonical_sort(points: &mut Vec<DualPoint>) {
    points.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    points.dedup();
}

/// A sequence in the dual, described as finitely many interleaved strands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDescriptor {
    pub strands: Vec<Stage>,
}

impl SequenceDescriptor {
    pub fn new(strands: Vec<Stage>) -> Result<Self> {
        if strands.is_empty() {
            return Err(Error::MalformedDescriptor("a sequence needs at least one strand".into()));
        }
        for s in &strands {
            s.validate()?;
        }
        Ok(SequenceDescriptor { strands })
    }

    /// Fell limit set of the interleaved sequence: a point attracts the
    /// whole sequence exactly when every strand limits onto it, so this is
    /// the intersection of the strand limit sets (possibly empty).
    pub fn limit_set(&self) -> Result<Vec<DualPoint>> {
        let mut iter = self.strands.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::MalformedDescriptor("a sequence needs at least one strand".into()))?;
        let mut acc = first.limit_set()?;
        for s in iter {
            let ls = s.limit_set()?;
            acc.retain(|p| ls.contains(p));
        }
        canonical_sort(&mut acc);
        Ok(acc)
    }

    /// The limit set, rejecting divergent sequences.
    pub fn limit_set_nonempty(&self) -> Result<Vec<DualPoint>> {
        let ls = self.limit_set()?;
        if ls.is_empty() {
            return Err(Error::NoLimit(format!("{} strands share no limit point", self.strands.len())));
        }
        Ok(ls)
    }

    /// True when every subsequence has the same nonempty limit set, i.e.
    /// all strands limit onto one identical set.
    pub fn is_properly_converging(&self) -> Result<bool> {
        let mut sets = Vec::new();
        for s in &self.strands {
            let mut ls = s.limit_set()?;
            canonical_sort(&mut ls);
            sets.push(ls);
        }
        let first = &sets[0];
        Ok(!first.is_empty() && sets.iter().all(|s| s == first))
    }
}

/// `max_strand | ||pi_{p(delta)}(h)||_op - sup_{q in lim} ||pi_q(h)||_op |`,
/// the empirical Fell-convergence defect at boundary distance `delta`.
pub fn empirical_convergence_defect(
    seq: &SequenceDescriptor,
    h: &TestFunction,
    max_index: u32,
    circle: &QuadratureRule,
    t_points: usize,
    delta: f64,
) -> Result<f64> {
    let limits = seq.limit_set_nonempty()?;
    let mut target = 0.0_f64;
    for q in &limits {
        target = target.max(fourier_of_point(q, h, max_index, circle, t_points)?.op_norm());
    }
    let mut worst = 0.0_f64;
    for s in &seq.strands {
        let p = s.point_at(delta)?;
        let norm = fourier_of_point(&p, h, max_index, circle, t_points)?.op_norm();
        worst = worst.max((norm - target).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::circle_rule;
    use crate::testfn::Profile;
    use approx::assert_abs_diff_eq;

    fn pt_c(u: f64) -> DualPoint {
        DualPoint::Complementary { u }
    }

    #[test]
    fn validation_guards_parameters() {
        assert!(pt_c(0.5).validate().is_ok());
        assert!(pt_c(0.0).validate().is_err());
        assert!(pt_c(1.0).validate().is_err());
        assert!(DualPoint::PrincipalOdd { v: 0.0 }.validate().is_err());
        assert!(DualPoint::PrincipalEven { v: 0.0 }.validate().is_ok());
        assert!(DualPoint::Discrete { m: 0, sign: Sign::Plus }.validate().is_err());
    }

    #[test]
    fn casimir_closed_values() {
        assert_abs_diff_eq!(DualPoint::Trivial.casimir_value(), 0.0);
        assert_abs_diff_eq!(DualPoint::PrincipalEven { v: 2.0 }.casimir_value(), -1.25);
        assert_abs_diff_eq!(pt_c(0.5).casimir_value(), -0.1875);
        assert_abs_diff_eq!(DualPoint::Discrete { m: 3, sign: Sign::Minus }.casimir_value(), 2.0);
        assert_abs_diff_eq!(DualPoint::LimitDiscrete { sign: Sign::Plus }.casimir_value(), -0.25);
    }

    #[test]
    fn display_is_stable() {
        assert_eq!(DualPoint::Trivial.to_string(), "F1");
        assert_eq!(DualPoint::Discrete { m: 1, sign: Sign::Plus }.to_string(), "D1+");
        assert_eq!(DualPoint::LimitDiscrete { sign: Sign::Minus }.to_string(), "D-");
        assert_eq!(DualPoint::PrincipalEven { v: 0.5 }.to_string(), "P+(v=0.500000)");
        assert_eq!(pt_c(0.25).to_string(), "C(u=0.250000)");
    }

    #[test]
    fn numeric_casimir_matches_closed_values() {
        let c = circle_rule(256).unwrap();
        let cases: Vec<(DualPoint, i64)> = vec![
            (DualPoint::PrincipalEven { v: 1.0 }, 0),
            (DualPoint::PrincipalEven { v: 1.0 }, 4),
            (DualPoint::PrincipalOdd { v: 0.7 }, 3),
            (pt_c(0.6), 2),
            (DualPoint::Discrete { m: 2, sign: Sign::Plus }, 5),
            (DualPoint::Discrete { m: 3, sign: Sign::Minus }, -4),
            (DualPoint::LimitDiscrete { sign: Sign::Plus }, 1),
            (DualPoint::Trivial, 0),
        ];
        for (p, n) in cases {
            let num = casimir_numeric(&p, n, &c, 1e-2).unwrap();
            let defect = (num - Complex64::new(p.casimir_value(), 0.0)).norm();
            assert!(defect < 1e-3, "{p} at n={n}: numeric {num} vs {}", p.casimir_value());
        }
    }

    #[test]
    fn numeric_casimir_is_basis_independent() {
        let c = circle_rule(256).unwrap();
        let p = DualPoint::PrincipalEven { v: 0.5 };
        let a = casimir_numeric(&p, 2, &c, 1e-2).unwrap();
        let b = casimir_numeric_with_basis(&p, 2, &crate::group::casimir_dual_basis_alt(), &c, 1e-2)
            .unwrap();
        assert!((a - b).norm() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn casimir_rejects_ktypes_outside_model() {
        let c = circle_rule(128).unwrap();
        assert!(casimir_numeric(&DualPoint::Discrete { m: 2, sign: Sign::Plus }, 1, &c, 1e-2).is_err());
        assert!(casimir_numeric(&DualPoint::Trivial, 2, &c, 1e-2).is_err());
    }

    #[test]
    fn strand_limits_follow_boundary_rules() {
        let interior = Stage::ComplementaryTo { u: 0.4 };
        assert_eq!(interior.limit_set().unwrap(), vec![pt_c(0.4)]);
        let zero = Stage::ComplementaryTo { u: 0.0 };
        assert_eq!(zero.limit_set().unwrap(), vec![DualPoint::PrincipalEven { v: 0.0 }]);
        let one = Stage::ComplementaryTo { u: 1.0 };
        assert_eq!(
            one.limit_set().unwrap(),
            vec![
                DualPoint::Trivial,
                DualPoint::Discrete { m: 1, sign: Sign::Plus },
                DualPoint::Discrete { m: 1, sign: Sign::Minus },
            ]
        );
        let odd_zero = Stage::PrincipalOddTo { v: 0.0 };
        assert_eq!(
            odd_zero.limit_set().unwrap(),
            vec![
                DualPoint::LimitDiscrete { sign: Sign::Plus },
                DualPoint::LimitDiscrete { sign: Sign::Minus },
            ]
        );
    }

    #[test]
    fn interleaved_limits_intersect() {
        // Two principal strands with different targets never co-converge.
        let seq = SequenceDescriptor::new(vec![
            Stage::PrincipalEvenTo { v: 0.3 },
            Stage::PrincipalEvenTo { v: 0.5 },
        ])
        .unwrap();
        assert!(seq.limit_set().unwrap().is_empty());
        assert!(matches!(seq.limit_set_nonempty(), Err(Error::NoLimit(_))));
        assert!(!seq.is_properly_converging().unwrap());

        // A complementary strand into u = 1 interleaved with the constant
        // trivial point converges to the trivial point only, not properly.
        let seq = SequenceDescriptor::new(vec![
            Stage::ComplementaryTo { u: 1.0 },
            Stage::Constant { point: DualPoint::Trivial },
        ])
        .unwrap();
        assert_eq!(seq.limit_set().unwrap(), vec![DualPoint::Trivial]);
        assert!(!seq.is_properly_converging().unwrap());

        // Spherical principal and complementary strands meeting at the
        // reducibility point share the single limit and converge properly.
        let seq = SequenceDescriptor::new(vec![
            Stage::PrincipalEvenTo { v: 0.0 },
            Stage::ComplementaryTo { u: 0.0 },
        ])
        .unwrap();
        assert_eq!(seq.limit_set().unwrap(), vec![DualPoint::PrincipalEven { v: 0.0 }]);
        assert!(seq.is_properly_converging().unwrap());

        // A single strand into u = 1 converges properly to all three
        // boundary points at once.
        let seq = SequenceDescriptor::new(vec![Stage::ComplementaryTo { u: 1.0 }]).unwrap();
        assert_eq!(seq.limit_set().unwrap().len(), 3);
        assert!(seq.is_properly_converging().unwrap());
    }

    #[test]
    fn filtration_sets_are_closed_under_strand_limits() {
        let catalog = [
            Stage::Constant { point: DualPoint::Trivial },
            Stage::Constant { point: DualPoint::Discrete { m: 1, sign: Sign::Plus } },
            Stage::Constant { point: DualPoint::Discrete { m: 4, sign: Sign::Minus } },
            Stage::Constant { point: DualPoint::LimitDiscrete { sign: Sign::Minus } },
            Stage::Constant { point: DualPoint::PrincipalEven { v: 0.8 } },
            Stage::PrincipalEvenTo { v: 0.0 },
            Stage::PrincipalEvenTo { v: 0.7 },
            Stage::PrincipalOddTo { v: 0.0 },
            Stage::PrincipalOddTo { v: 0.4 },
            Stage::ComplementaryTo { u: 0.0 },
            Stage::ComplementaryTo { u: 0.5 },
            Stage::ComplementaryTo { u: 1.0 },
        ];
        for i in 0..=8u8 {
            for stage in &catalog {
                if stage.member_stratum() <= i {
                    for q in stage.limit_set().unwrap() {
                        assert!(
                            in_filtration(i, &q),
                            "S_{i} loses the limit {q} of a strand inside it"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fourier_respects_parity_and_masks() {
        let c = circle_rule(256).unwrap();
        let h = TestFunction::single(2, 4, Profile::Bump { t0: 0.4, t1: 1.0, amplitude: 1.0 })
            .unwrap();
        // Odd-parity points annihilate an even test function.
        let odd = fourier_of_point(&DualPoint::PrincipalOdd { v: 0.5 }, &h, 9, &c, 48).unwrap();
        assert_eq!(odd.frobenius_norm(), 0.0);
        // The D_1^- ladder lives on n <= -2, so the (2,4) bi-type is masked away.
        let dm = fourier_of_point(&DualPoint::Discrete { m: 1, sign: Sign::Minus }, &h, 8, &c, 48)
            .unwrap();
        assert_eq!(dm.frobenius_norm(), 0.0);
        let dp = fourier_of_point(&DualPoint::Discrete { m: 1, sign: Sign::Plus }, &h, 8, &c, 48)
            .unwrap();
        assert!(dp.op_norm() > 1e-4);
        // The trivial point sees only the (0,0) bi-type.
        let f1 = fourier_of_point(&DualPoint::Trivial, &h, 8, &c, 48).unwrap();
        assert_eq!(f1.frobenius_norm(), 0.0);
        let h00 = TestFunction::single(0, 0, Profile::Bump { t0: 0.4, t1: 1.0, amplitude: 1.0 })
            .unwrap();
        let f1 = fourier_of_point(&DualPoint::Trivial, &h00, 8, &c, 48).unwrap();
        let entry = f1.get(0, 0).unwrap();
        assert!(entry.re > 0.1 && entry.im.abs() < 1e-12);
    }

    #[test]
    fn unitary_pictures_contract() {
        // Rescaled models of non-tempered points must still be contractive
        // in operator norm on group elements; probe via a convolution-like
        // bound ||pi(h)|| <= ||h||_1 with h >= 0.
        let c = circle_rule(512).unwrap();
        let h = TestFunction::single(0, 0, Profile::Bump { t0: 0.3, t1: 0.9, amplitude: 1.0 })
            .unwrap();
        let l1: f64 = {
            // pi * int chi(t) sinh t dt is the L^1 mass of the (0,0) bump.
            let (tn, tw) = crate::quadrature::gauss_legendre_on(64, 0.3, 0.9);
            std::f64::consts::PI
                * tn.iter().zip(&tw).map(|(t, w)| h.eval_cartan(0.0, *t, 0.0).re * t.sinh() * w).sum::<f64>()
        };
        for p in [pt_c(0.3), pt_c(0.7), DualPoint::PrincipalEven { v: 0.9 }] {
            let norm = fourier_of_point(&p, &h, 10, &c, 64).unwrap().op_norm();
            assert!(norm <= l1 * (1.0 + 1e-9), "{p}: {norm} > {l1}");
        }
    }

    #[test]
    fn empirical_defect_shrinks_toward_interior_limit() {
        let c = circle_rule(512).unwrap();
        let h = TestFunction::single(0, 0, Profile::Bump { t0: 0.4, t1: 1.0, amplitude: 1.0 })
            .unwrap();
        let seq = SequenceDescriptor::new(vec![Stage::PrincipalEvenTo { v: 0.5 }]).unwrap();
        let d1 = empirical_convergence_defect(&seq, &h, 8, &c, 48, 0.1).unwrap();
        let d2 = empirical_convergence_defect(&seq, &h, 8, &c, 48, 0.01).unwrap();
        let d3 = empirical_convergence_defect(&seq, &h, 8, &c, 48, 0.001).unwrap();
        assert!(d2 < d1 && d3 < d2, "defects not decreasing: {d1} {d2} {d3}");
        assert!(d3 < 1e-3);
    }

    #[test]
    fn parametrization_lands_on_the_three_lines() {
        assert_eq!(
            parametrize(&DualPoint::PrincipalEven { v: 2.0 }).unwrap(),
            FieldCoordinate::EvenLine { re: 0.0, im: 2.0 }
        );
        assert_eq!(
            parametrize(&pt_c(0.3)).unwrap(),
            FieldCoordinate::EvenLine { re: 0.3, im: 0.0 }
        );
        assert_eq!(
            parametrize(&DualPoint::Trivial).unwrap(),
            FieldCoordinate::EvenLine { re: 1.0, im: 0.0 }
        );
        assert_eq!(
            parametrize(&DualPoint::Discrete { m: 1, sign: Sign::Minus }).unwrap(),
            FieldCoordinate::EvenLine { re: 1.0, im: 0.0 }
        );
        assert_eq!(
            parametrize(&DualPoint::LimitDiscrete { sign: Sign::Plus }).unwrap(),
            FieldCoordinate::OddLine { v: 0.0 }
        );
        assert_eq!(
            parametrize(&DualPoint::Discrete { m: 5, sign: Sign::Plus }).unwrap(),
            FieldCoordinate::DiscretePoint { m: 5, sign: Sign::Plus }
        );
    }

    #[test]
    fn descriptors_round_trip_through_json() {
        let seq = SequenceDescriptor::new(vec![
            Stage::ComplementaryTo { u: 1.0 },
            Stage::Constant { point: DualPoint::Discrete { m: 2, sign: Sign::Minus } },
        ])
        .unwrap();
        let text = serde_json::to_string(&seq).unwrap();
        let back: SequenceDescriptor = serde_json::from_str(&text).unwrap();
        assert_eq!(seq, back);
    }
}

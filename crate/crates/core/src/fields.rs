//! The continuous-field model of the group C*-algebra at desk scale.
//!
//! The field lives over three parameter lines: the even line I1 (`u = iv`
//! tempered, `u in (0,1)` complementary, degenerate endpoint `u = 1`), the
//! odd line I2 (`v >= 0`, reducible at `v = 0`), and the discrete points I3
//! (`m >= 2`, both signs). A [`FourierSample`] holds fiber data of one
//! element: interior fibers in their unitary pictures, but the three
//! `u = 1` fibers raw — the `D_1^{+/-}` blocks in ladder coordinates and the
//! scalar at the trivial point. [`forward`] assembles the endpoint field
//! value
//!
//! `F1(1) = K_(1) phi(D1+) K_(1)^{-1} p_+ + K_[1] phi(D1-) K_[1]^{-1} p_- + phi(F1) p_0`
//!
//! and [`backward`] inverts it fiber by fiber, e.g.
//! `phi(D1+) = K_(1)^{-1} p_+ F1(1) K_(1)`. Endpoint values commute with the
//! three K-type projections; interior axes are `*`-compatible, while the raw
//! I3 ladders are deliberately left in natural coordinates (their `*` is the
//! rescaled one, so no entrywise compatibility is claimed there).

use crate::dual::{fourier_of_point, DualPoint, Sign};
use crate::error::{Error, Result};
use crate::harmonics::{projection_minus, projection_plus, projection_zero, KTypeWindow, Parity};
use crate::intertwiner::RescalingOperator;
use crate::operator::TruncatedOperator;
use crate::principal::group_fourier;
use crate::quadrature::QuadratureRule;
use crate::testfn::TestFunction;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::io::{Read as _, Write as _};
use std::path::Path;

/// Parameter grids of the three field lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    /// Tempered even-line points `iv`, ascending, `v >= 0`.
    pub even_v: Vec<f64>,
    /// Complementary arc points, ascending, strictly inside `(0, 1)`.
    pub comp_u: Vec<f64>,
    /// Odd-line points, ascending, `v >= 0`.
    pub odd_v: Vec<f64>,
    /// Discrete parameters `m >= 2`, ascending; both signs are sampled.
    pub discrete_m: Vec<u32>,
    /// K-type window bound shared by all fibers.
    pub max_index: u32,
}

impl FieldGrid {
    pub fn validate(&self) -> Result<()> {
        let ascending = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
        if !ascending(&self.even_v) || self.even_v.iter().any(|v| *v < 0.0) {
            return Err(Error::Config("even-line grid must be ascending and >= 0".into()));
        }
        if !ascending(&self.odd_v) || self.odd_v.iter().any(|v| *v < 0.0) {
            return Err(Error::Config("odd-line grid must be ascending and >= 0".into()));
        }
        if !ascending(&self.comp_u) || self.comp_u.iter().any(|u| !(0.0 < *u && *u < 1.0)) {
            return Err(Error::Config("complementary grid must be ascending inside (0,1)".into()));
        }
        if self.discrete_m.windows(2).any(|w| w[0] >= w[1]) || self.discrete_m.iter().any(|m| *m < 2) {
            return Err(Error::Config("discrete grid must be ascending with m >= 2".into()));
        }
        KTypeWindow::new(Parity::Even, self.max_index)?;
        Ok(())
    }

    pub fn even_window(&self) -> KTypeWindow {
        KTypeWindow { parity: Parity::Even, max_index: self.max_index }
    }

    pub fn odd_window(&self) -> KTypeWindow {
        KTypeWindow { parity: Parity::Odd, max_index: self.max_index }
    }

    /// A small grid exercising every axis.
    pub fn reference() -> Self {
        FieldGrid {
            even_v: vec![0.0, 0.5, 1.0, 1.5, 2.0],
            comp_u: vec![0.2, 0.4, 0.6, 0.8],
            odd_v: vec![0.0, 0.5, 1.0, 1.5, 2.0],
            discrete_m: vec![2, 3],
            max_index: 8,
        }
    }
}

/// Fiber data of one element over the grid: interior fibers unitary, the
/// endpoint fibers raw.
#[derive(Debug, Clone)]
pub struct FourierSample {
    pub grid: FieldGrid,
    /// `P^{+,iv}(a)` along `even_v`.
    pub even: Vec<TruncatedOperator>,
    /// `C^u(a)` (unitary picture) along `comp_u`.
    pub comp: Vec<TruncatedOperator>,
    /// Raw `D_1^+` block: rows and columns `n >= 2` of `P^{+,1}(a)`.
    pub d1_plus: TruncatedOperator,
    /// Raw `D_1^-` block: rows and columns `n <= -2`.
    pub d1_minus: TruncatedOperator,
    /// Scalar fiber at the trivial point.
    pub trivial: Complex64,
    /// `P^{-,iv}(a)` along `odd_v`.
    pub odd: Vec<TruncatedOperator>,
    /// Raw ladder blocks of `P^{e,m}(a)` at each `(m, sign)`, `m` ascending,
    /// `+` before `-`.
    pub discrete: Vec<(u32, Sign, TruncatedOperator)>,
}

/// The assembled field triple `(F1, F2, F3)`.
#[derive(Debug, Clone)]
pub struct FieldTriple {
    pub grid: FieldGrid,
    pub f1_even: Vec<TruncatedOperator>,
    pub f1_comp: Vec<TruncatedOperator>,
    /// Field value at the degenerate endpoint `u = 1`.
    pub f1_end: TruncatedOperator,
    pub f2: Vec<TruncatedOperator>,
    pub f3: Vec<(u32, Sign, TruncatedOperator)>,
}

fn ladder_mask(m: u32, sign: Sign) -> impl Fn(i64) -> bool {
    let base = (m as i64) + 1;
    move |n: i64| match sign {
        Sign::Plus => n >= base,
        Sign::Minus => n <= -base,
    }
}

/// Samples the full fiber data of a bi-K-finite test function.
pub fn sample_test_function(
    h: &TestFunction,
    grid: &FieldGrid,
    circle: &QuadratureRule,
    t_points: usize,
) -> Result<FourierSample> {
    grid.validate()?;
    h.validate()?;
    let ew = grid.even_window();
    let ow = grid.odd_window();
    let mi = grid.max_index;
    let mut even = Vec::new();
    for v in &grid.even_v {
        even.push(fourier_of_point(&DualPoint::PrincipalEven { v: *v }, h, mi, circle, t_points)?);
    }
    let mut comp = Vec::new();
    for u in &grid.comp_u {
        comp.push(fourier_of_point(&DualPoint::Complementary { u: *u }, h, mi, circle, t_points)?);
    }
    let (d1_plus, d1_minus, trivial) = if h.parity == Parity::Even {
        let p1 = group_fourier(Parity::Even, Complex64::new(1.0, 0.0), h, ew, circle, t_points)?;
        let tri = fourier_of_point(&DualPoint::Trivial, h, mi, circle, t_points)?;
        (p1.mask(ladder_mask(1, Sign::Plus)), p1.mask(ladder_mask(1, Sign::Minus)), tri.get(0, 0)?)
    } else {
        (
            TruncatedOperator::zero(ew, ew),
            TruncatedOperator::zero(ew, ew),
            Complex64::new(0.0, 0.0),
        )
    };
    let mut odd = Vec::new();
    for v in &grid.odd_v {
        let p = if *v > 0.0 {
            fourier_of_point(&DualPoint::PrincipalOdd { v: *v }, h, mi, circle, t_points)?
        } else if h.parity == Parity::Odd {
            group_fourier(Parity::Odd, Complex64::new(0.0, 0.0), h, ow, circle, t_points)?
        } else {
            TruncatedOperator::zero(ow, ow)
        };
        odd.push(p);
    }
    let mut discrete = Vec::new();
    for m in &grid.discrete_m {
        let parity = if m % 2 == 1 { Parity::Even } else { Parity::Odd };
        let w = if parity == Parity::Even { ew } else { ow };
        let raw = if h.parity == parity {
            group_fourier(parity, Complex64::new(*m as f64, 0.0), h, w, circle, t_points)?
        } else {
            TruncatedOperator::zero(w, w)
        };
        for sign in [Sign::Plus, Sign::Minus] {
            discrete.push((*m, sign, raw.mask(ladder_mask(*m, sign))));
        }
    }
    Ok(FourierSample { grid: grid.clone(), even, comp, d1_plus, d1_minus, trivial, odd, discrete })
}

/// Assembles the field triple; the two endpoint values carry the assembly
/// formulas verbatim, so they commute with the K-type projections by
/// construction.
pub fn forward(sample: &FourierSample) -> Result<FieldTriple> {
    sample.grid.validate()?;
    let ew = sample.grid.even_window();
    let kp = RescalingOperator::discrete_limit_plus(ew)?;
    let km = RescalingOperator::discrete_limit_minus(ew)?;
    let f1_end = kp
        .conjugate(&sample.d1_plus)?
        .compose(&projection_plus(ew))?
        .add(&km.conjugate(&sample.d1_minus)?.compose(&projection_minus(ew))?)?
        .add(&projection_zero(ew).scale(sample.trivial))?;
    let ow = sample.grid.odd_window();
    let mut f2 = Vec::with_capacity(sample.odd.len());
    for (v, op) in sample.grid.odd_v.iter().zip(&sample.odd) {
        if *v == 0.0 {
            // F2(0) = fiber(D+) p_+ + fiber(D-) p_-.
            let assembled = op
                .mask(|n| n > 0)
                .compose(&projection_plus(ow))?
                .add(&op.mask(|n| n < 0).compose(&projection_minus(ow))?)?;
            f2.push(assembled);
        } else {
            f2.push(op.clone());
        }
    }
    Ok(FieldTriple {
        grid: sample.grid.clone(),
        f1_even: sample.even.clone(),
        f1_comp: sample.comp.clone(),
        f1_end,
        f2,
        f3: sample.discrete.clone(),
    })
}

fn lookup<'a>(
    grid: &[f64],
    ops: &'a [TruncatedOperator],
    x: f64,
    axis: &str,
) -> Result<&'a TruncatedOperator> {
    grid.iter()
        .position(|g| (g - x).abs() < 1e-12)
        .map(|i| &ops[i])
        .ok_or_else(|| Error::Config(format!("{axis} axis has no sample at {x}")))
}

/// Reads one fiber back out of a field triple: interior points by
/// evaluation, endpoint fibers by the inversion formulas.
pub fn backward_at(triple: &FieldTriple, point: &DualPoint) -> Result<TruncatedOperator> {
    point.validate()?;
    let g = &triple.grid;
    let ew = g.even_window();
    match point {
        DualPoint::PrincipalEven { v } => Ok(lookup(&g.even_v, &triple.f1_even, *v, "even")?.clone()),
        DualPoint::Complementary { u } => {
            Ok(lookup(&g.comp_u, &triple.f1_comp, *u, "complementary")?.clone())
        }
        DualPoint::PrincipalOdd { v } => Ok(lookup(&g.odd_v, &triple.f2, *v, "odd")?.clone()),
        DualPoint::Trivial => {
            let p0 = projection_zero(ew);
            p0.compose(&triple.f1_end)?.compose(&p0)
        }
        DualPoint::Discrete { m: 1, sign } => {
            let k = match sign {
                Sign::Plus => RescalingOperator::discrete_limit_plus(ew)?,
                Sign::Minus => RescalingOperator::discrete_limit_minus(ew)?,
            };
            let p = match sign {
                Sign::Plus => projection_plus(ew),
                Sign::Minus => projection_minus(ew),
            };
            k.inverse_operator().compose(&p)?.compose(&triple.f1_end)?.compose(&k.as_operator())
        }
        DualPoint::Discrete { m, sign } => triple
            .f3
            .iter()
            .find(|(fm, fs, _)| fm == m && fs == sign)
            .map(|(_, _, op)| op.clone())
            .ok_or_else(|| Error::Config(format!("discrete axis has no sample at m = {m}"))),
        DualPoint::LimitDiscrete { sign } => {
            let f2_0 = lookup(&g.odd_v, &triple.f2, 0.0, "odd")?;
            let p = match sign {
                Sign::Plus => projection_plus(g.odd_window()),
                Sign::Minus => projection_minus(g.odd_window()),
            };
            p.compose(f2_0)
        }
    }
}

/// Recovers the full fiber sample from a field triple.
pub fn backward(triple: &FieldTriple) -> Result<FourierSample> {
    triple.grid.validate()?;
    let d1_plus = backward_at(triple, &DualPoint::Discrete { m: 1, sign: Sign::Plus })?;
    let d1_minus = backward_at(triple, &DualPoint::Discrete { m: 1, sign: Sign::Minus })?;
    let trivial = triple.f1_end.get(0, 0)?;
    Ok(FourierSample {
        grid: triple.grid.clone(),
        even: triple.f1_even.clone(),
        comp: triple.f1_comp.clone(),
        d1_plus,
        d1_minus,
        trivial,
        odd: triple.f2.clone(),
        discrete: triple.f3.clone(),
    })
}

/// `max_p ||[op, p]||` over the three K-type projections of the operator's
/// own window.
pub fn commutation_defect(op: &TruncatedOperator) -> f64 {
    let w = op.row_window;
    [projection_plus(w), projection_minus(w), projection_zero(w)]
        .iter()
        .map(|p| op.commutator_norm(p).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Endpoint commutation pair: `F1(1)` against `{p_+, p_-, p_0}` and `F2(0)`
/// against `{p_+, p_-}` (zero when the odd grid does not sample 0).
pub fn endpoint_commutation(triple: &FieldTriple) -> (f64, f64) {
    let first = commutation_defect(&triple.f1_end);
    let second = match lookup(&triple.grid.odd_v, &triple.f2, 0.0, "odd") {
        Ok(f2_0) => {
            let w = triple.grid.odd_window();
            [projection_plus(w), projection_minus(w)]
                .iter()
                .map(|p| f2_0.commutator_norm(p).unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max)
        }
        Err(_) => 0.0,
    };
    (first, second)
}

/// Tail norms at the far end of each axis, compared against a decay
/// threshold; `offending` lists the axes that fail.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub f1_tail: f64,
    pub f2_tail: f64,
    pub f3_tail: f64,
    pub threshold: f64,
    pub offending: Vec<String>,
}

/// Checks vanishing at infinity on the sampled horizon.
pub fn vanishing_check(triple: &FieldTriple, threshold: f64) -> TailReport {
    let f1_tail = triple.f1_even.last().map_or(0.0, |op| op.op_norm());
    let f2_tail = triple.f2.last().map_or(0.0, |op| op.op_norm());
    let m_max = triple.f3.iter().map(|(m, _, _)| *m).max().unwrap_or(0);
    let f3_tail = triple
        .f3
        .iter()
        .filter(|(m, _, _)| *m == m_max)
        .map(|(_, _, op)| op.op_norm())
        .fold(0.0, f64::max);
    let mut offending = Vec::new();
    for (name, tail) in [("f1", f1_tail), ("f2", f2_tail), ("f3", f3_tail)] {
        if tail > threshold {
            offending.push(name.to_string());
        }
    }
    TailReport { f1_tail, f2_tail, f3_tail, threshold, offending }
}

/// Largest operator norm over every fiber of the triple.
pub fn sup_norm(triple: &FieldTriple) -> f64 {
    let mut worst = triple.f1_end.op_norm();
    for op in triple.f1_even.iter().chain(&triple.f1_comp).chain(&triple.f2) {
        worst = worst.max(op.op_norm());
    }
    for (_, _, op) in &triple.f3 {
        worst = worst.max(op.op_norm());
    }
    worst
}

/// Largest Frobenius mass left on I3 ladders the test function cannot
/// reach: exactly zero whenever `m + 1` exceeds every bi-type index of `h`.
pub fn vanishing_violation(sample: &FourierSample, h: &TestFunction) -> f64 {
    let reach = h.components.iter().map(|c| c.l.abs().max(c.n.abs())).max().unwrap_or(0);
    let mut worst = 0.0_f64;
    for (m, _, op) in &sample.discrete {
        if (*m as i64) + 1 > reach {
            worst = worst.max(op.frobenius_norm());
        }
    }
    worst
}

/// A random bi-K-finite test function inside the window: 1–3 components of
/// one parity with random bump profiles and complex coefficients.
pub fn random_test_function(max_index: u32, seed: u64) -> Result<TestFunction> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let bound = max_index as i64 - 2;
    let picks: Vec<i64> = (-bound..=bound).filter(|n| (n - start) % 2 == 0).collect();
    let count = rng.gen_range(1..=3);
    let mut components = Vec::new();
    for _ in 0..count {
        let l = picks[rng.gen_range(0..picks.len())];
        let n = picks[rng.gen_range(0..picks.len())];
        let t0 = rng.gen_range(0.2..0.6);
        let t1 = t0 + rng.gen_range(0.3..0.6);
        components.push(crate::testfn::Component {
            l,
            n,
            coeff: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            profile: crate::testfn::Profile::Bump { t0, t1, amplitude: 1.0 },
        });
    }
    TestFunction::new(parity, components)
}

/// A random fiber sample: uniform complex entries on every interior fiber
/// and on the raw endpoint blocks.
pub fn random_sample(grid: &FieldGrid, seed: u64) -> Result<FourierSample> {
    grid.validate()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ew = grid.even_window();
    let ow = grid.odd_window();
    fn rand_op(rng: &mut rand_chacha::ChaCha8Rng, w: KTypeWindow) -> TruncatedOperator {
        let mut op = TruncatedOperator::zero(w, w);
        for i in 0..w.dim() {
            for j in 0..w.dim() {
                op.entries[(i, j)] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        op
    }
    let even = (0..grid.even_v.len()).map(|_| rand_op(&mut rng, ew)).collect();
    let comp = (0..grid.comp_u.len()).map(|_| rand_op(&mut rng, ew)).collect();
    let d1_plus = rand_op(&mut rng, ew).mask(ladder_mask(1, Sign::Plus));
    let d1_minus = rand_op(&mut rng, ew).mask(ladder_mask(1, Sign::Minus));
    let trivial = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let odd: Vec<TruncatedOperator> = grid
        .odd_v
        .iter()
        .map(|v| {
            let op = rand_op(&mut rng, ow);
            if *v == 0.0 {
                // The v = 0 fiber is the pair of ladder blocks.
                op.mask(|n| n > 0).add(&op.mask(|n| n < 0)).unwrap()
            } else {
                op
            }
        })
        .collect();
    let mut discrete = Vec::new();
    for m in &grid.discrete_m {
        let w = if m % 2 == 1 { ew } else { ow };
        for sign in [Sign::Plus, Sign::Minus] {
            discrete.push((*m, sign, rand_op(&mut rng, w).mask(ladder_mask(*m, sign))));
        }
    }
    Ok(FourierSample { grid: grid.clone(), even, comp, d1_plus, d1_minus, trivial, odd, discrete })
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldManifest {
    schema_version: u32,
    grid: FieldGrid,
    even_window: KTypeWindow,
    odd_window: KTypeWindow,
    trivial: [f64; 2],
}

fn write_ops(path: &Path, ops: &[&TruncatedOperator]) -> Result<()> {
    let mut bytes = Vec::new();
    for op in ops {
        for i in 0..op.row_window.dim() {
            for j in 0..op.col_window.dim() {
                let z = op.entries[(i, j)];
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

fn read_ops(path: &Path, window: KTypeWindow, count: usize) -> Result<Vec<TruncatedOperator>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let dim = window.dim();
    let expect = count * dim * dim * 16;
    if bytes.len() != expect {
        return Err(Error::Config(format!(
            "{}: expected {expect} bytes for {count} samples, found {}",
            path.display(),
            bytes.len()
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut off = 0;
    for _ in 0..count {
        let mut op = TruncatedOperator::zero(window, window);
        for i in 0..dim {
            for j in 0..dim {
                let re = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
                let im = f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap());
                op.entries[(i, j)] = Complex64::new(re, im);
                off += 16;
            }
        }
        out.push(op);
    }
    Ok(out)
}

/// Writes a field triple as a JSON manifest, little-endian complex blobs
/// (row-major, one per axis), and a deterministic norm-profile CSV.
pub fn write_field(dir: &Path, triple: &FieldTriple) -> Result<()> {
    triple.grid.validate()?;
    std::fs::create_dir_all(dir)?;
    let manifest = FieldManifest {
        schema_version: 1,
        grid: triple.grid.clone(),
        even_window: triple.grid.even_window(),
        odd_window: triple.grid.odd_window(),
        trivial: {
            let z = triple.f1_end.get(0, 0)?;
            [z.re, z.im]
        },
    };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    write_ops(dir.join("f1_even.bin").as_path(), &triple.f1_even.iter().collect::<Vec<_>>())?;
    write_ops(dir.join("f1_comp.bin").as_path(), &triple.f1_comp.iter().collect::<Vec<_>>())?;
    write_ops(dir.join("f1_end.bin").as_path(), &[&triple.f1_end])?;
    write_ops(dir.join("f2.bin").as_path(), &triple.f2.iter().collect::<Vec<_>>())?;
    write_ops(dir.join("f3.bin").as_path(), &triple.f3.iter().map(|(_, _, op)| op).collect::<Vec<_>>())?;
    std::fs::write(dir.join("norms.csv"), norms_csv(triple))?;
    Ok(())
}

/// Deterministic norm-profile CSV of a field triple.
pub fn norms_csv(triple: &FieldTriple) -> String {
    let mut csv = String::from("axis,param,sign,op_norm\n");
    for (v, op) in triple.grid.even_v.iter().zip(&triple.f1_even) {
        csv.push_str(&format!("f1_even,{v:.6},,{:.12e}\n", op.op_norm()));
    }
    for (u, op) in triple.grid.comp_u.iter().zip(&triple.f1_comp) {
        csv.push_str(&format!("f1_comp,{u:.6},,{:.12e}\n", op.op_norm()));
    }
    csv.push_str(&format!("f1_end,1.000000,,{:.12e}\n", triple.f1_end.op_norm()));
    for (v, op) in triple.grid.odd_v.iter().zip(&triple.f2) {
        csv.push_str(&format!("f2,{v:.6},,{:.12e}\n", op.op_norm()));
    }
    for (m, sign, op) in &triple.f3 {
        let s = match sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        csv.push_str(&format!("f3,{m},{s},{:.12e}\n", op.op_norm()));
    }
    csv
}

/// Reads a field triple written by [`write_field`], validating shapes.
pub fn read_field(dir: &Path) -> Result<FieldTriple> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    let manifest: FieldManifest = serde_json::from_str(&text)?;
    if manifest.schema_version != 1 {
        return Err(Error::Config(format!("unsupported schema version {}", manifest.schema_version)));
    }
    manifest.grid.validate()?;
    let ew = manifest.grid.even_window();
    let ow = manifest.grid.odd_window();
    if manifest.even_window != ew || manifest.odd_window != ow {
        return Err(Error::Config("manifest windows do not match its grid".into()));
    }
    let f1_even = read_ops(dir.join("f1_even.bin").as_path(), ew, manifest.grid.even_v.len())?;
    let f1_comp = read_ops(dir.join("f1_comp.bin").as_path(), ew, manifest.grid.comp_u.len())?;
    let f1_end = read_ops(dir.join("f1_end.bin").as_path(), ew, 1)?.remove(0);
    let f2 = read_ops(dir.join("f2.bin").as_path(), ow, manifest.grid.odd_v.len())?;
    let mut f3_meta = Vec::new();
    for m in &manifest.grid.discrete_m {
        for sign in [Sign::Plus, Sign::Minus] {
            f3_meta.push((*m, sign));
        }
    }
    // I3 fibers alternate window parity with m, so read them one at a time.
    let mut f3 = Vec::new();
    {
        let mut bytes = Vec::new();
        std::fs::File::open(dir.join("f3.bin"))?.read_to_end(&mut bytes)?;
        let mut off = 0;
        for (m, sign) in f3_meta {
            let w = if m % 2 == 1 { ew } else { ow };
            let need = w.dim() * w.dim() * 16;
            if off + need > bytes.len() {
                return Err(Error::Config("f3.bin too short for its grid".into()));
            }
            let mut op = TruncatedOperator::zero(w, w);
            for i in 0..w.dim() {
                for j in 0..w.dim() {
                    let re = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
                    let im = f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap());
                    op.entries[(i, j)] = Complex64::new(re, im);
                    off += 16;
                }
            }
            f3.push((m, sign, op));
        }
        if off != bytes.len() {
            return Err(Error::Config("f3.bin longer than its grid".into()));
        }
    }
    Ok(FieldTriple { grid: manifest.grid, f1_even, f1_comp, f1_end, f2, f3 })
}

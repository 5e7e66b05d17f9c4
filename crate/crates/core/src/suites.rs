//! Named verification suites shared by the command-line harness and the
//! acceptance tests.
//!
//! Each runner executes a fixed battery of checks against a [`Config`] and
//! returns per-suite summaries plus deterministic CSV artifacts (fixed
//! check order, fixed float formatting, single-threaded accumulation), so
//! identical configurations produce byte-identical outputs.

use crate::config::Config;
use crate::dual::{casimir_numeric, DualPoint, SequenceDescriptor, Sign, Stage};
use crate::error::Result;
use crate::fields;
use crate::group::GroupElement;
use crate::harmonics::{KTypeWindow, Parity};
use crate::intertwiner::{
    gamma_invariance_defect, intertwining_defect, knapp_stein_eigen, ratio_c,
};
use crate::norm_control::{
    nu_involution_defect, nu_norm_bound_defect, random_field, verify_ncdl_limit, NuCase,
};
use crate::principal::unitarity_defect;
use crate::quadrature::{
    circle_rule, haar_reference_box_cartan, haar_reference_box_iwasawa, haar_rule,
    haar_test_function, left_invariance_defect, CoordSystem,
};
use crate::testfn::{Component, Profile, TestFunction};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Machine-readable result of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub pass: bool,
    pub max_defect: f64,
    pub tolerance: f64,
    pub runtime_ms: u128,
}

/// Summaries plus CSV artifacts keyed by file name.
#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub summaries: Vec<SuiteSummary>,
    pub csv: BTreeMap<String, String>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.summaries.iter().all(|s| s.pass)
    }

    fn merge(&mut self, other: SuiteOutput) {
        self.summaries.extend(other.summaries);
        self.csv.extend(other.csv);
    }
}

fn summarize(suite: &str, tolerance: f64, defects: &[f64], started: Instant) -> SuiteSummary {
    let max_defect = defects.iter().copied().fold(0.0, f64::max);
    SuiteSummary {
        suite: suite.to_string(),
        pass: max_defect <= tolerance,
        max_defect,
        tolerance,
        runtime_ms: started.elapsed().as_millis(),
    }
}

/// Haar normalization: Iwasawa and Cartan rules integrate a reference
/// function to the same value, and the rule is left-translation invariant.
pub fn run_haar(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let iw = haar_rule(CoordSystem::Iwasawa, cfg.haar_resolution, haar_reference_box_iwasawa())?;
    let ca = haar_rule(CoordSystem::Cartan, cfg.haar_resolution, haar_reference_box_cartan())?;
    let vi = iw.integrate_group_real(haar_test_function);
    let vc = ca.integrate_group_real(haar_test_function);
    let agreement = (vi - vc).abs() / vc.abs();
    let shifts = [
        ("a(0.2)", GroupElement::diag(0.2)),
        ("k(0.5)", GroupElement::rotation(0.5)),
        ("mu(0.3)", GroupElement::unipotent(0.3)),
    ];
    let mut csv = String::from("check,value\n");
    csv.push_str(&format!("integral_iwasawa,{vi:.12e}\n"));
    csv.push_str(&format!("integral_cartan,{vc:.12e}\n"));
    csv.push_str(&format!("iwasawa_vs_cartan,{agreement:.12e}\n"));
    let mut defects = vec![agreement];
    for (label, g0) in &shifts {
        let d = left_invariance_defect(&iw, g0, haar_test_function);
        csv.push_str(&format!("left_shift_{label},{d:.12e}\n"));
        defects.push(d);
    }
    let mut out = SuiteOutput::default();
    out.summaries.push(summarize("haar", cfg.tolerance("haar")?, &defects, started));
    out.csv.insert("haar.csv".into(), csv);
    Ok(out)
}

/// Unitarity of the tempered principal series on the truncated windows.
pub fn run_unitarity(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let circle = circle_rule(cfg.circle_points)?;
    let gs = [
        ("a(1.0)", GroupElement::diag(1.0)),
        ("mu(1.0)a(0.5)", GroupElement::unipotent(1.0).mul(&GroupElement::diag(0.5))),
        ("k(0.3)a(0.7)", GroupElement::rotation(0.3).mul(&GroupElement::diag(0.7))),
    ];
    let mut csv = String::from("parity,v,g,defect\n");
    let mut defects = Vec::new();
    for (parity, sign) in [(Parity::Even, "+"), (Parity::Odd, "-")] {
        let window = KTypeWindow::new(parity, cfg.max_index)?;
        for v in [0.0, 0.5, 2.5] {
            for (label, g) in &gs {
                let d = unitarity_defect(parity, v, g, window, &circle)?;
                csv.push_str(&format!("{sign},{v:.6},{label},{d:.12e}\n"));
                defects.push(d);
            }
        }
    }
    let mut out = SuiteOutput::default();
    out.summaries.push(summarize("unitarity", cfg.tolerance("unitarity")?, &defects, started));
    out.csv.insert("unitarity.csv".into(), csv);
    Ok(out)
}

/// Intertwiner eigenvalues: numeric ratios against the closed meromorphic
/// form, endpoint degeneration, the gamma product, and the intertwining
/// relation on matrix elements.
pub fn run_cn(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let mut out = SuiteOutput::default();

    let started = Instant::now();
    let us = [Complex64::new(0.5, 0.0), Complex64::new(1.5, 0.0), Complex64::new(2.0, 0.5)];
    let ns = [2i64, -2, 4, -4, 6, -6];
    let mut csv = String::from("n,u_re,u_im,defect\n");
    let mut defects = Vec::new();
    for u in us {
        let c0 = knapp_stein_eigen(0, u)?.value;
        for n in ns {
            let numeric = knapp_stein_eigen(n, u)?.value / c0;
            let d = (numeric - ratio_c(n, u)?).norm();
            csv.push_str(&format!("{n},{:.6},{:.6},{d:.12e}\n", u.re, u.im));
            defects.push(d);
        }
    }
    out.summaries.push(summarize("cn-ratios", cfg.tolerance("cn-ratios")?, &defects, started));
    out.csv.insert("cn_ratios.csv".into(), csv);

    let started = Instant::now();
    let one = Complex64::new(1.0, 0.0);
    let c0 = knapp_stein_eigen(0, one)?.value;
    let mut csv = String::from("n,defect\n");
    let mut defects = Vec::new();
    for n in ns {
        let d = (knapp_stein_eigen(n, one)?.value / c0).norm();
        csv.push_str(&format!("{n},{d:.12e}\n"));
        defects.push(d);
    }
    out.summaries.push(summarize("cn-endpoint", cfg.tolerance("cn-endpoint")?, &defects, started));
    out.csv.insert("cn_endpoint.csv".into(), csv);

    let started = Instant::now();
    let grid: Vec<Complex64> =
        (0..50).map(|k| Complex64::new(-2.0 + 4.0 * k as f64 / 49.0, 0.25)).collect();
    let mut csv = String::from("n,defect\n");
    let mut defects = Vec::new();
    for n in (-12i64..=12).step_by(2) {
        let d = gamma_invariance_defect(n, &grid)?;
        csv.push_str(&format!("{n},{d:.12e}\n"));
        defects.push(d);
    }
    out.summaries.push(summarize("gamma", cfg.tolerance("gamma")?, &defects, started));
    out.csv.insert("cn_gamma.csv".into(), csv);

    let started = Instant::now();
    let circle = circle_rule(cfg.circle_points)?;
    let gs = [
        ("a(0.9)", GroupElement::diag(0.9)),
        ("mu(0.6)", GroupElement::unipotent(0.6)),
        ("k(0.4)a(0.5)", GroupElement::rotation(0.4).mul(&GroupElement::diag(0.5))),
        ("mu(-0.3)a(0.8)", GroupElement::unipotent(-0.3).mul(&GroupElement::diag(0.8))),
        ("k(1.2)mu(0.5)", GroupElement::rotation(1.2).mul(&GroupElement::unipotent(0.5))),
    ];
    let mut csv = String::from("u,g,l,n,defect\n");
    let mut defects = Vec::new();
    for u in [Complex64::new(0.3, 0.0), Complex64::new(0.6, 0.0)] {
        for (label, g) in &gs {
            for l in (-6i64..=6).step_by(2) {
                for n in (-6i64..=6).step_by(2) {
                    let d = intertwining_defect(Parity::Even, u, g, l, n, &circle)?;
                    csv.push_str(&format!("{:.6},{label},{l},{n},{d:.12e}\n", u.re));
                    defects.push(d);
                }
            }
        }
    }
    out.summaries.push(summarize(
        "intertwining",
        cfg.tolerance("intertwining")?,
        &defects,
        started,
    ));
    out.csv.insert("cn_intertwining.csv".into(), csv);
    Ok(out)
}

/// Representatives of every dual family paired with the K-types probed by
/// the numeric Casimir check.
pub fn casimir_catalog() -> Vec<(DualPoint, Vec<i64>)> {
    vec![
        (DualPoint::Trivial, vec![0]),
        (DualPoint::PrincipalEven { v: 0.9 }, vec![0, 2, 4]),
        (DualPoint::PrincipalOdd { v: 1.3 }, vec![-1, 1, 3]),
        (DualPoint::Complementary { u: 0.45 }, vec![-2, 0, 2]),
        (DualPoint::Discrete { m: 1, sign: Sign::Plus }, vec![2, 4]),
        (DualPoint::Discrete { m: 2, sign: Sign::Plus }, vec![3, 5]),
        (DualPoint::Discrete { m: 2, sign: Sign::Minus }, vec![-3, -5]),
        (DualPoint::Discrete { m: 3, sign: Sign::Plus }, vec![4, 6]),
        (DualPoint::Discrete { m: 3, sign: Sign::Minus }, vec![-4, -6]),
        (DualPoint::LimitDiscrete { sign: Sign::Plus }, vec![1, 3]),
        (DualPoint::LimitDiscrete { sign: Sign::Minus }, vec![-1, -3]),
    ]
}

/// Finite-difference Casimir eigenvalues against the closed values, plus
/// the cross-K-type spread at each point.
pub fn run_casimir(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let circle = circle_rule(cfg.circle_points)?;
    let mut csv = String::from("point,n,numeric_re,numeric_im,closed,defect\n");
    let mut var_csv = String::from("point,spread\n");
    let mut defects = Vec::new();
    let mut spreads = Vec::new();
    for (point, ns) in casimir_catalog() {
        let closed = point.casimir_value();
        let mut values = Vec::new();
        for n in &ns {
            let numeric = casimir_numeric(&point, *n, &circle, 1e-2)?;
            let d = (numeric - Complex64::new(closed, 0.0)).norm();
            csv.push_str(&format!(
                "{point},{n},{:.12e},{:.12e},{closed:.12e},{d:.12e}\n",
                numeric.re, numeric.im
            ));
            defects.push(d);
            values.push(numeric);
        }
        let mut spread = 0.0_f64;
        for a in &values {
            for b in &values {
                spread = spread.max((a - b).norm());
            }
        }
        var_csv.push_str(&format!("{point},{spread:.12e}\n"));
        spreads.push(spread);
    }
    let mut out = SuiteOutput::default();
    out.summaries.push(summarize("casimir", cfg.tolerance("casimir")?, &defects, started));
    out.summaries.push(summarize(
        "casimir-variance",
        cfg.tolerance("casimir-variance")?,
        &spreads,
        started,
    ));
    out.csv.insert("casimir.csv".into(), csv);
    out.csv.insert("casimir_variance.csv".into(), var_csv);
    Ok(out)
}

/// One row of the convergence catalog: a named sequence descriptor with its
/// expected limit set and proper-convergence flag.
pub struct CatalogRow {
    pub id: &'static str,
    pub strands: Vec<Stage>,
    pub expected_limits: &'static str,
    pub expected_proper: bool,
}

fn stage_label(stage: &Stage) -> String {
    match stage {
        Stage::Constant { point } => format!("const {point}"),
        Stage::PrincipalEvenTo { v } => format!("P+(v->{v:.6})"),
        Stage::PrincipalOddTo { v } => format!("P-(v->{v:.6})"),
        Stage::ComplementaryTo { u } => format!("C(u->{u:.6})"),
    }
}

/// The sequence catalog of the convergence table: the seven single-law
/// limits, constants, and every mixed interleaving pattern, with hand-derived
/// expectations.
pub fn topology_catalog() -> Vec<CatalogRow> {
    let row = |id, strands, expected_limits, expected_proper| CatalogRow {
        id,
        strands,
        expected_limits,
        expected_proper,
    };
    vec![
        row("p_even_to_interior", vec![Stage::PrincipalEvenTo { v: 1.0 }], "P+(v=1.000000)", true),
        row("p_even_to_zero", vec![Stage::PrincipalEvenTo { v: 0.0 }], "P+(v=0.000000)", true),
        row("p_odd_to_interior", vec![Stage::PrincipalOddTo { v: 1.5 }], "P-(v=1.500000)", true),
        row("p_odd_to_zero", vec![Stage::PrincipalOddTo { v: 0.0 }], "D+|D-", true),
        row("comp_to_interior", vec![Stage::ComplementaryTo { u: 0.5 }], "C(u=0.500000)", true),
        row("comp_to_zero", vec![Stage::ComplementaryTo { u: 0.0 }], "P+(v=0.000000)", true),
        row("comp_to_one", vec![Stage::ComplementaryTo { u: 1.0 }], "F1|D1+|D1-", true),
        row("const_trivial", vec![Stage::Constant { point: DualPoint::Trivial }], "F1", true),
        row(
            "const_discrete",
            vec![Stage::Constant { point: DualPoint::Discrete { m: 2, sign: Sign::Plus } }],
            "D2+",
            true,
        ),
        row(
            "const_p_even",
            vec![Stage::Constant { point: DualPoint::PrincipalEven { v: 0.7 } }],
            "P+(v=0.700000)",
            true,
        ),
        row(
            "const_comp",
            vec![Stage::Constant { point: DualPoint::Complementary { u: 0.3 } }],
            "C(u=0.300000)",
            true,
        ),
        row(
            "const_limit_disc",
            vec![Stage::Constant { point: DualPoint::LimitDiscrete { sign: Sign::Plus } }],
            "D+",
            true,
        ),
        row(
            "pair_even_same_target",
            vec![Stage::PrincipalEvenTo { v: 0.5 }, Stage::PrincipalEvenTo { v: 0.5 }],
            "P+(v=0.500000)",
            true,
        ),
        row(
            "pair_even_split_targets",
            vec![Stage::PrincipalEvenTo { v: 0.3 }, Stage::PrincipalEvenTo { v: 0.8 }],
            "(none)",
            false,
        ),
        row(
            "even_comp_to_zero",
            vec![Stage::PrincipalEvenTo { v: 0.0 }, Stage::ComplementaryTo { u: 0.0 }],
            "P+(v=0.000000)",
            true,
        ),
        row(
            "even_comp_mismatch",
            vec![Stage::PrincipalEvenTo { v: 0.4 }, Stage::ComplementaryTo { u: 0.0 }],
            "(none)",
            false,
        ),
        row(
            "comp_one_with_d1plus",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Discrete { m: 1, sign: Sign::Plus } },
            ],
            "D1+",
            false,
        ),
        row(
            "comp_one_with_d1minus",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Discrete { m: 1, sign: Sign::Minus } },
            ],
            "D1-",
            false,
        ),
        row(
            "comp_one_with_trivial",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Trivial },
            ],
            "F1",
            false,
        ),
        row(
            "odd_zero_with_dplus",
            vec![
                Stage::PrincipalOddTo { v: 0.0 },
                Stage::Constant { point: DualPoint::LimitDiscrete { sign: Sign::Plus } },
            ],
            "D+",
            false,
        ),
        row(
            "odd_zero_with_dminus",
            vec![
                Stage::PrincipalOddTo { v: 0.0 },
                Stage::Constant { point: DualPoint::LimitDiscrete { sign: Sign::Minus } },
            ],
            "D-",
            false,
        ),
        row(
            "comp_one_with_d2plus",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Discrete { m: 2, sign: Sign::Plus } },
            ],
            "(none)",
            false,
        ),
        row(
            "cross_parity_zero",
            vec![Stage::PrincipalOddTo { v: 0.0 }, Stage::PrincipalEvenTo { v: 0.0 }],
            "(none)",
            false,
        ),
        row(
            "comp_one_with_dplus",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::LimitDiscrete { sign: Sign::Plus } },
            ],
            "(none)",
            false,
        ),
    ]
}

fn limits_label(limits: &[DualPoint]) -> String {
    if limits.is_empty() {
        "(none)".to_string()
    } else {
        limits.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|")
    }
}

/// The expected convergence table rendered from the hand-derived catalog.
pub fn topology_expected_csv() -> String {
    let mut csv = String::from("id,strands,limit_set,properly_converging\n");
    for r in topology_catalog() {
        let strands =
            r.strands.iter().map(stage_label).collect::<Vec<_>>().join("; ");
        csv.push_str(&format!("{},{strands},{},{}\n", r.id, r.expected_limits, r.expected_proper));
    }
    csv
}

/// Computes limit sets and proper-convergence flags for the whole catalog
/// and counts mismatches against the expectations.
pub fn run_topology(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let mut csv = String::from("id,strands,limit_set,properly_converging\n");
    let mut mismatches = 0u32;
    for r in topology_catalog() {
        let seq = SequenceDescriptor::new(r.strands.clone())?;
        let limits = limits_label(&seq.limit_set()?);
        let proper = seq.is_properly_converging()?;
        let strands =
            r.strands.iter().map(stage_label).collect::<Vec<_>>().join("; ");
        csv.push_str(&format!("{},{strands},{limits},{proper}\n", r.id));
        if limits != r.expected_limits || proper != r.expected_proper {
            mismatches += 1;
        }
    }
    let mut out = SuiteOutput::default();
    out.summaries.push(summarize(
        "topology",
        cfg.tolerance("topology")?,
        &[f64::from(mismatches)],
        started,
    ));
    out.csv.insert("topology.csv".into(), csv);
    Ok(out)
}

/// The bi-types exercised per boundary case, with the slow branch kept at a
/// small amplitude because its decay toward the boundary is only
/// `sqrt(delta)`.
pub fn ncdl_bitypes(case: NuCase) -> Vec<(i64, i64, f64)> {
    match case {
        NuCase::I => vec![(1, 1, 1.0), (3, 1, 1.0), (-1, -3, 1.0)],
        NuCase::II => vec![(0, 0, 1.0), (2, 2, 1.0), (4, -2, 1.0)],
        NuCase::III => vec![(2, 4, 1.0), (-2, -4, 1.0), (2, 0, 0.05), (0, 0, 1.0)],
    }
}

fn ncdl_test_function(l: i64, n: i64, amplitude: f64) -> Result<TestFunction> {
    let parity = if l.rem_euclid(2) == 0 { Parity::Even } else { Parity::Odd };
    TestFunction::new(
        parity,
        vec![Component {
            l,
            n,
            coeff: Complex64::new(1.0, 0.0),
            profile: Profile::Bump { t0: 0.4, t1: 1.0, amplitude },
        }],
    )
}

/// One boundary case of the norm-control verification: defect curves per
/// bi-type (decreasing along the schedule, certified by the computed bound)
/// plus boundedness and involutivity of the limit map on random fields.
pub fn run_ncdl(cfg: &Config, case: NuCase) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let circle = circle_rule(cfg.circle_points)?;
    let tol = cfg.tolerance(&format!("ncdl-{case}"))?;
    let mut csv = String::from("bitype,delta,defect,bound\n");
    let mut finals = Vec::new();
    let mut pass = true;
    for (l, n, amplitude) in ncdl_bitypes(case) {
        let h = ncdl_test_function(l, n, amplitude)?;
        let rows = verify_ncdl_limit(
            case,
            &h,
            &cfg.boundary_schedule,
            cfg.max_index,
            &circle,
            cfg.t_points,
        )?;
        for row in &rows {
            csv.push_str(&format!(
                "({l};{n}),{:.6},{:.12e},{:.12e}\n",
                row.delta, row.defect, row.bound
            ));
            if row.defect > row.bound * (1.0 + 1e-9) + 1e-12 {
                pass = false;
            }
        }
        for pair in rows.windows(2) {
            if pair[1].defect >= pair[0].defect {
                pass = false;
            }
        }
        finals.push(rows.last().map_or(f64::INFINITY, |r| r.defect));
    }
    let mut summary = summarize(&format!("ncdl-{case}"), tol, &finals, started);
    summary.pass = summary.pass && pass;
    let mut out = SuiteOutput::default();
    out.summaries.push(summary);
    out.csv.insert(format!("ncdl_case_{case}.csv"), csv);

    let started = Instant::now();
    let mut bounded = Vec::new();
    let mut involutive = Vec::new();
    for seed in 0..100 {
        let field = random_field(case, cfg.max_index, seed)?;
        bounded.push(nu_norm_bound_defect(case, &field)?);
        involutive.push(nu_involution_defect(case, &field)?);
    }
    out.summaries.push(summarize(
        &format!("ncdl-{case}-bounded"),
        cfg.tolerance("ncdl-bounded")?,
        &bounded,
        started,
    ));
    out.summaries.push(summarize(
        &format!("ncdl-{case}-involutive"),
        cfg.tolerance("ncdl-involutive")?,
        &involutive,
        started,
    ));
    Ok(out)
}

fn cross_parity_mass(sample: &fields::FourierSample, parity: Parity) -> f64 {
    let mut worst = 0.0_f64;
    match parity {
        Parity::Even => {
            for op in &sample.odd {
                worst = worst.max(op.frobenius_norm());
            }
            for (m, _, op) in &sample.discrete {
                if m % 2 == 0 {
                    worst = worst.max(op.frobenius_norm());
                }
            }
        }
        Parity::Odd => {
            for op in sample.even.iter().chain(&sample.comp) {
                worst = worst.max(op.frobenius_norm());
            }
            worst = worst.max(sample.d1_plus.frobenius_norm());
            worst = worst.max(sample.d1_minus.frobenius_norm());
            worst = worst.max(sample.trivial.norm());
            for (m, _, op) in &sample.discrete {
                if m % 2 == 1 {
                    worst = worst.max(op.frobenius_norm());
                }
            }
        }
    }
    worst
}

/// Field-model verification: round trips on random elements, endpoint
/// commutation, parity separation, and exact vanishing on unreachable
/// ladders; also emits the norm profile of a reference field.
pub fn run_fields(cfg: &Config) -> Result<SuiteOutput> {
    cfg.validate()?;
    let started = Instant::now();
    let circle = circle_rule(cfg.circle_points)?;
    let grid = &cfg.field_grid;
    let mut csv = String::from("seed,parity,roundtrip,commutation_f1,commutation_f2,cross_parity,vanishing\n");
    let mut roundtrips = Vec::new();
    let mut commutations = Vec::new();
    let mut parities = Vec::new();
    let mut vanishings = Vec::new();
    for seed in 0..20u64 {
        let h = fields::random_test_function(grid.max_index, 1000 + seed)?;
        let s = fields::sample_test_function(&h, grid, &circle, cfg.t_points)?;
        let t = fields::forward(&s)?;
        let back = fields::backward(&t)?;
        let mut rt = back
            .d1_plus
            .sub(&s.d1_plus)?
            .op_norm()
            .max(back.d1_minus.sub(&s.d1_minus)?.op_norm())
            .max((back.trivial - s.trivial).norm());
        for (a, b) in back.even.iter().zip(&s.even) {
            rt = rt.max(a.sub(b)?.op_norm());
        }
        for (a, b) in back.comp.iter().zip(&s.comp) {
            rt = rt.max(a.sub(b)?.op_norm());
        }
        for (a, b) in back.odd.iter().zip(&s.odd) {
            rt = rt.max(a.sub(b)?.op_norm());
        }
        for ((_, _, a), (_, _, b)) in back.discrete.iter().zip(&s.discrete) {
            rt = rt.max(a.sub(b)?.op_norm());
        }
        let (end1, end2) = fields::endpoint_commutation(&t);
        let cross = cross_parity_mass(&s, h.parity);
        let vanish = fields::vanishing_violation(&s, &h);
        let parity = match h.parity {
            Parity::Even => "+",
            Parity::Odd => "-",
        };
        csv.push_str(&format!(
            "{seed},{parity},{rt:.12e},{end1:.12e},{end2:.12e},{cross:.12e},{vanish:.12e}\n"
        ));
        roundtrips.push(rt);
        commutations.push(end1.max(end2));
        parities.push(cross);
        vanishings.push(vanish);
    }
    let mut out = SuiteOutput::default();
    out.summaries.push(summarize(
        "fields-roundtrip",
        cfg.tolerance("fields-roundtrip")?,
        &roundtrips,
        started,
    ));
    out.summaries.push(summarize(
        "fields-commutation",
        cfg.tolerance("fields-commutation")?,
        &commutations,
        started,
    ));
    out.summaries.push(summarize(
        "fields-parity",
        cfg.tolerance("fields-parity")?,
        &parities,
        started,
    ));
    out.summaries.push(summarize(
        "fields-vanishing",
        cfg.tolerance("fields-vanishing")?,
        &vanishings,
        started,
    ));
    let h_ref = TestFunction::new(
        Parity::Even,
        vec![
            Component {
                l: 2,
                n: 4,
                coeff: Complex64::new(0.8, 0.0),
                profile: Profile::Bump { t0: 0.4, t1: 1.0, amplitude: 1.0 },
            },
            Component {
                l: 0,
                n: 0,
                coeff: Complex64::new(0.5, 0.0),
                profile: Profile::Bump { t0: 0.3, t1: 0.9, amplitude: 1.0 },
            },
        ],
    )?;
    let t_ref = fields::forward(&fields::sample_test_function(&h_ref, grid, &circle, cfg.t_points)?)?;
    out.csv.insert("field_norms.csv".into(), fields::norms_csv(&t_ref));
    out.csv.insert("fields.csv".into(), csv);
    Ok(out)
}

/// Runs every suite in a fixed order.
pub fn run_all(cfg: &Config) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    out.merge(run_haar(cfg)?);
    out.merge(run_unitarity(cfg)?);
    out.merge(run_cn(cfg)?);
    out.merge(run_casimir(cfg)?);
    out.merge(run_topology(cfg)?);
    out.merge(run_ncdl(cfg, NuCase::I)?);
    out.merge(run_ncdl(cfg, NuCase::II)?);
    out.merge(run_ncdl(cfg, NuCase::III)?);
    out.merge(run_fields(cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_suite_passes_at_reference_resolution() {
        let out = run_haar(&Config::reference()).unwrap();
        assert!(out.all_pass(), "{:?}", out.summaries);
        assert!(out.csv["haar.csv"].lines().count() >= 7);
    }

    #[test]
    fn unitarity_suite_passes() {
        let out = run_unitarity(&Config::reference()).unwrap();
        assert!(out.all_pass(), "{:?}", out.summaries);
        // 2 parities x 3 speeds x 3 group elements plus the header.
        assert_eq!(out.csv["unitarity.csv"].lines().count(), 19);
    }

    #[test]
    fn cn_suite_passes() {
        let out = run_cn(&Config::reference()).unwrap();
        assert!(out.all_pass(), "{:?}", out.summaries);
        assert_eq!(out.summaries.len(), 4);
    }

    #[test]
    fn casimir_suite_passes() {
        let out = run_casimir(&Config::reference()).unwrap();
        assert!(out.all_pass(), "{:?}", out.summaries);
    }

    #[test]
    fn topology_suite_matches_expectations() {
        let out = run_topology(&Config::reference()).unwrap();
        assert!(out.all_pass(), "{:?}", out.summaries);
        assert_eq!(out.csv["topology.csv"], topology_expected_csv());
        assert!(topology_catalog().len() >= 20);
    }

    #[test]
    fn suite_summaries_serialize_with_fixed_keys() {
        let s = summarize("demo", 1e-3, &[1e-4, 5e-4], Instant::now());
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"suite\":\"demo\""));
        assert!(json.contains("\"pass\":true"));
        assert!(json.contains("\"max_defect\":0.0005"));
    }
}

//! End-to-end acceptance battery: every shipped guarantee is asserted here,
//! one printed line per criterion, with tolerances pinned in this file.

use sl2r_fourier::config::Config;
use sl2r_fourier::dual::{DualPoint, SequenceDescriptor, Sign, Stage};
use sl2r_fourier::norm_control::NuCase;
use sl2r_fourier::suites::{self, SuiteOutput, SuiteSummary};
use std::path::Path;
use std::process::Command;

struct Gate {
    failed: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate { failed: Vec::new() }
    }

    fn check(&mut self, id: &str, name: &str, pass: bool, detail: &str) {
        println!("{id} {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(format!("{id} {name}: {detail}"));
        }
    }

    fn finish(self) {
        assert!(self.failed.is_empty(), "failed criteria:\n{}", self.failed.join("\n"));
    }
}

fn summary<'a>(out: &'a SuiteOutput, suite: &str) -> &'a SuiteSummary {
    out.summaries.iter().find(|s| s.suite == suite).expect(suite)
}

#[test]
fn acceptance() {
    let cfg = Config::reference();
    let mut gate = Gate::new();

    // 1. Haar normalization: coordinate-system agreement and left invariance.
    let haar = suites::run_haar(&cfg).unwrap();
    let s = summary(&haar, "haar");
    gate.check(
        "A01",
        "haar invariance and Iwasawa/Cartan agreement",
        s.max_defect < 1e-6,
        &format!("max relative defect {:.3e} < 1e-6", s.max_defect),
    );

    // 2. Unitarity on the truncated window for both parities.
    let unit = suites::run_unitarity(&cfg).unwrap();
    let s = summary(&unit, "unitarity");
    gate.check(
        "A02",
        "tempered-series unitarity",
        s.max_defect < 1e-8,
        &format!("max defect {:.3e} < 1e-8", s.max_defect),
    );

    // 3-5. Intertwiner eigenvalues: numeric ratios, endpoint, intertwining
    // relation, gamma product.
    let cn = suites::run_cn(&cfg).unwrap();
    let ratios = summary(&cn, "cn-ratios");
    let endpoint = summary(&cn, "cn-endpoint");
    gate.check(
        "A03",
        "eigenvalue ratios and endpoint degeneration",
        ratios.max_defect < 1e-5 && endpoint.max_defect < 1e-5,
        &format!(
            "ratio defect {:.3e} < 1e-5, endpoint defect {:.3e} < 1e-5",
            ratios.max_defect, endpoint.max_defect
        ),
    );
    let intertwining = summary(&cn, "intertwining");
    gate.check(
        "A04",
        "intertwining relation on matrix elements",
        intertwining.max_defect < 1e-6,
        &format!("max residual {:.3e} < 1e-6", intertwining.max_defect),
    );
    let gamma = summary(&cn, "gamma");
    gate.check(
        "A05",
        "gamma product invariance",
        gamma.max_defect <= 1e-12,
        &format!("max defect {:.3e} <= 1e-12", gamma.max_defect),
    );

    // 6. Casimir eigenvalues for representatives of every family.
    let cas = suites::run_casimir(&cfg).unwrap();
    let value = summary(&cas, "casimir");
    let spread = summary(&cas, "casimir-variance");
    gate.check(
        "A06",
        "numeric Casimir against closed values",
        value.max_defect < 1e-3 && spread.max_defect < 1e-4,
        &format!(
            "eigenvalue defect {:.3e} < 1e-3, cross-K-type spread {:.3e} < 1e-4",
            value.max_defect, spread.max_defect
        ),
    );

    // 7. Convergence table against the golden file plus designed
    // positive/negative proper-convergence cases.
    let topo = suites::run_topology(&cfg).unwrap();
    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/topology_golden.csv");
    let golden = std::fs::read_to_string(&golden_path).unwrap();
    let table = &topo.csv["topology.csv"];
    let rows = table.lines().count() - 1;
    let proper_cases: [(&str, Vec<Stage>, bool); 6] = [
        ("comp to one", vec![Stage::ComplementaryTo { u: 1.0 }], true),
        (
            "even and comp to zero",
            vec![Stage::PrincipalEvenTo { v: 0.0 }, Stage::ComplementaryTo { u: 0.0 }],
            true,
        ),
        ("odd to zero", vec![Stage::PrincipalOddTo { v: 0.0 }], true),
        (
            "comp to one with constant D1+",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Discrete { m: 1, sign: Sign::Plus } },
            ],
            false,
        ),
        (
            "split tempered targets",
            vec![Stage::PrincipalEvenTo { v: 0.3 }, Stage::PrincipalEvenTo { v: 0.8 }],
            false,
        ),
        (
            "comp to one with constant D2+",
            vec![
                Stage::ComplementaryTo { u: 1.0 },
                Stage::Constant { point: DualPoint::Discrete { m: 2, sign: Sign::Plus } },
            ],
            false,
        ),
    ];
    let mut proper_ok = true;
    for (label, strands, expected) in proper_cases {
        let seq = SequenceDescriptor::new(strands).unwrap();
        if seq.is_properly_converging().unwrap() != expected {
            proper_ok = false;
            println!("    proper-convergence mismatch: {label}");
        }
    }
    gate.check(
        "A07",
        "dual-space convergence table",
        summary(&topo, "topology").pass && *table == golden && rows >= 20 && proper_ok,
        &format!("{rows} rows match the golden table; 6 designed proper-convergence cases agree"),
    );

    // 8-10. Boundary limits: defect curves decrease along the schedule, stay
    // under the computed bounds, and end below tolerance; the limit maps are
    // bounded and involutive on random fields.
    let mut random_field_ok = true;
    let mut random_detail = String::new();
    for (id, case) in [("A08", NuCase::I), ("A09", NuCase::II), ("A10", NuCase::III)] {
        let out = suites::run_ncdl(&cfg, case).unwrap();
        let s = summary(&out, &format!("ncdl-{case}"));
        gate.check(
            id,
            &format!("boundary case {case}"),
            s.pass && s.max_defect < 1e-3,
            &format!("final defect {:.3e} < 1e-3, decreasing, within bound", s.max_defect),
        );
        let bounded = summary(&out, &format!("ncdl-{case}-bounded"));
        let involutive = summary(&out, &format!("ncdl-{case}-involutive"));
        if bounded.max_defect > 1e-10 || involutive.max_defect > 1e-12 {
            random_field_ok = false;
        }
        random_detail.push_str(&format!(
            "case {case}: bounded {:.1e}, involutive {:.1e}; ",
            bounded.max_defect, involutive.max_defect
        ));
    }
    gate.check(
        "A10b",
        "limit maps bounded (1e-10) and involutive (1e-12) on 100 random fields per case",
        random_field_ok,
        random_detail.trim_end_matches("; "),
    );

    // 11. Field model: round trip, endpoint commutation, parity separation,
    // unreachable-ladder vanishing.
    let fields = suites::run_fields(&cfg).unwrap();
    let rt = summary(&fields, "fields-roundtrip");
    let comm = summary(&fields, "fields-commutation");
    let par = summary(&fields, "fields-parity");
    let van = summary(&fields, "fields-vanishing");
    gate.check(
        "A11",
        "field-model round trip and endpoint structure",
        rt.max_defect < 1e-8
            && comm.max_defect < 1e-10
            && par.max_defect == 0.0
            && van.max_defect == 0.0,
        &format!(
            "round trip {:.3e} < 1e-8, commutation {:.3e} < 1e-10, parity separation exact, ladder vanishing exact",
            rt.max_defect, comm.max_defect
        ),
    );

    // 12. Determinism: two full runs of the binary produce byte-identical
    // CSV artifacts (and both exit 0).
    let dir = tempfile::tempdir().unwrap();
    let (d1, d2) = (dir.path().join("run1"), dir.path().join("run2"));
    let mut codes = Vec::new();
    for d in [&d1, &d2] {
        let status = Command::new(env!("CARGO_BIN_EXE_sl2r-verify"))
            .arg("all")
            .arg("--out")
            .arg(d)
            .status()
            .unwrap();
        codes.push(status.code());
    }
    let read_csvs = |d: &Path| {
        let mut files = std::collections::BTreeMap::new();
        for entry in std::fs::read_dir(d).unwrap() {
            let p = entry.unwrap().path();
            if p.extension().is_some_and(|e| e == "csv") {
                files.insert(p.file_name().unwrap().to_os_string(), std::fs::read(&p).unwrap());
            }
        }
        files
    };
    let (a, b) = (read_csvs(&d1), read_csvs(&d2));
    gate.check(
        "A12",
        "deterministic artifacts from the full run",
        codes == [Some(0), Some(0)] && !a.is_empty() && a == b,
        &format!("{} CSV files byte-identical across two runs, both exit 0", a.len()),
    );

    gate.finish();
}

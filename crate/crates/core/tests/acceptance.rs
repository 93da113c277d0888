//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cohent_core::catalog;
use cohent_core::convert::{build_entangling_unitary, rel_ent_entanglement_bounds};
use cohent_core::measure::block_dephase;
use cohent_core::qmat::{max_abs_diff, partial_trace, von_neumann_entropy};
use cohent_core::random::{random_density, random_projective, random_pure, rng};
use cohent_core::repro::{self, DEFAULT_GRID};
use cohent_core::{
    block_coherence, canonical_extension, convert, embed_state, extract_povm_family, fourier_family_extension,
    minimal_rank_one_extension, povm_coherence, verify_extension, ComplexMatrix, DensityMatrix, Povm, Result,
};

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> Result<Outcome>;

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn binary_entropy(a: f64) -> f64 {
    -(a * a.log2() + (1.0 - a) * (1.0 - a).log2())
}

fn trine_maximal_coherence() -> Result<Outcome> {
    let start = Instant::now();
    let value = povm_coherence(&DensityMatrix::basis(2, 0), &catalog::trine_povm())?.value;
    let elapsed = start.elapsed();
    let err = (value - 3f64.log2()).abs();
    outcome(
        err < 1e-9 && elapsed < Duration::from_millis(10),
        format!("C_r = {value:.10}, |err| = {err:.1e}, {elapsed:?}"),
    )
}

fn trine_conversion() -> Result<Outcome> {
    let ext = catalog::trine_extension()?;
    let embedded = embed_state(&DensityMatrix::basis(2, 0), &ext)?;
    let s = rel_ent_entanglement_bounds(&embedded, &ext.measurement)?;
    let err = (s.upper - 3f64.log2()).abs();
    outcome(
        err < 1e-8 && (s.upper - s.lower).abs() < 1e-8,
        format!("E_r = {:.10}, bounds [{:.10}, {:.10}]", s.upper, s.lower, s.upper),
    )
}

fn four_element_maximal() -> Result<Outcome> {
    let zero = DensityMatrix::basis(2, 0);
    let c = povm_coherence(&zero, &catalog::four_element_povm())?.value;
    let ext = catalog::four_element_extension()?;
    let s = rel_ent_entanglement_bounds(&embed_state(&zero, &ext)?, &ext.measurement)?;
    outcome(
        (c - 2.0).abs() < 1e-9 && (s.upper - 2.0).abs() < 1e-8 && (s.lower - 2.0).abs() < 1e-8,
        format!("C_r = {c:.10}, E_r = {:.10}", s.upper),
    )
}

fn fig2_anchors() -> Result<Outcome> {
    let start = Instant::now();
    let csv = repro::fig2_csv(&repro::fig2_rows(DEFAULT_GRID)?);
    let elapsed = start.elapsed();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let anchors = [(0.0, 2.0, 1.5), (FRAC_PI_4, 1.5, 2.0), (FRAC_PI_2, 2.0, 1.5), (3.0 * FRAC_PI_4, 1.5, 2.0)];
    let mut worst = 0.0f64;
    for (t, e0, e1) in anchors {
        let row = rows
            .iter()
            .find(|r| (r[0] - t).abs() < 1e-12)
            .expect("anchor lies on the grid");
        worst = worst.max((row[1] - e0).abs()).max((row[2] - e1).abs());
    }
    outcome(
        rows.len() == DEFAULT_GRID && worst < 1e-9 && elapsed < Duration::from_secs(2),
        format!("{} rows, worst anchor error {worst:.1e}, {elapsed:?}", rows.len()),
    )
}

fn naimark_reproduction() -> Result<Outcome> {
    let mut checks: Vec<(String, Povm, cohent_core::NaimarkExtension)> = Vec::new();
    for a in [0.1, 0.25, 0.4] {
        let povm = catalog::example1_povm(a)?;
        let (ext, _) = canonical_extension(&povm)?;
        checks.push((format!("canonical E(a={a})"), povm, ext));
    }
    let e4 = catalog::four_element_povm();
    let (ext, _) = canonical_extension(&e4)?;
    checks.push(("canonical E4".into(), e4, ext));
    let trine = catalog::trine_povm();
    let ext = minimal_rank_one_extension(&trine)?;
    checks.push(("minimal trine".into(), trine, ext));
    for d in [3, 5, 7] {
        let (povm, ext) = fourier_family_extension(d)?;
        checks.push((format!("fourier d={d}"), povm, ext));
    }
    let mut passed = true;
    let mut worst = 0.0f64;
    for (i, (name, povm, ext)) in checks.iter().enumerate() {
        let report = verify_extension(povm, ext, 100, 1000 + i as u64)?;
        if !report.passed {
            passed = false;
            eprintln!("  {name}: deviation {:.1e}", report.max_deviation);
        }
        worst = worst.max(report.max_deviation);
    }
    outcome(passed && worst < 1e-9, format!("{} builders, worst deviation {worst:.1e}", checks.len()))
}

fn theorem1_suite() -> Result<Outcome> {
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    for d in [2, 3, 4, 6] {
        let report = repro::run_sweep(d, 200, 7);
        if let Some(f) = report.failures.first() {
            passed = false;
            eprintln!("  d={d}: trial {} (seed {}): {}", f.trial, f.seed, f.detail);
        }
        parts.push(format!("d={d} {}/{}", report.passed, report.trials));
        passed &= report.worst_equality_deviation < 1e-8;
    }
    let elapsed = start.elapsed();
    outcome(
        passed && elapsed < Duration::from_secs(60),
        format!("{}, {elapsed:?}", parts.join(", ")),
    )
}

fn example1_confinement() -> Result<Outcome> {
    let mut worst_purity = 0.0f64;
    let mut worst_negativity = 0.0f64;
    let mut worst_entropy = 0.0f64;
    for a in [0.1, 0.25, 0.4] {
        for k in 0..2 {
            let row = repro::example1_row(a, k)?;
            worst_purity = worst_purity.max((1.0 - row.s0_purity).abs());
            // pure output with Schmidt probabilities {a, 1-a}
            worst_negativity = worst_negativity.max((row.negativity - (a * (1.0 - a)).sqrt()).abs());
            worst_entropy = worst_entropy
                .max((row.rel_ent_entanglement - binary_entropy(a)).abs())
                .max((row.coherence - binary_entropy(a)).abs());
        }
    }
    outcome(
        worst_purity < 1e-9 && worst_negativity < 1e-8 && worst_entropy < 1e-8,
        format!("purity err {worst_purity:.1e}, negativity err {worst_negativity:.1e}, E_r err {worst_entropy:.1e}"),
    )
}

fn structural_invariants() -> Result<Outcome> {
    let (mut unitarity, mut idempotence, mut marginal, mut purity) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..50u64 {
        let mut r = rng(5000 + i);
        let d = 2 + (i as usize % 5);
        let rho = if i % 2 == 0 { random_density(d, &mut r) } else { random_pure(d, &mut r) };
        let p = random_projective(d, &mut r);
        let target = p.outcomes() + (i as usize % 2);
        let u = build_entangling_unitary(&p, target)?;
        let n = d * target;
        unitarity = unitarity.max(max_abs_diff(&(u.adjoint() * &u), &ComplexMatrix::identity(n, n)));
        let once = block_dephase(&rho, &p)?;
        idempotence = idempotence.max(max_abs_diff(once.matrix(), block_dephase(&once, &p)?.matrix()));
        let out = convert(&rho, &p, target)?;
        let reduced = partial_trace(out.output_state.matrix(), &out.dims, &[0])?;
        marginal = marginal.max(max_abs_diff(&reduced, once.matrix()));
        purity = purity.max((von_neumann_entropy(&out.output_state) - von_neumann_entropy(&rho)).abs());
    }
    outcome(
        unitarity < 1e-10 && idempotence < 1e-10 && marginal < 1e-9 && purity < 1e-8,
        format!("unitarity {unitarity:.1e}, idempotence {idempotence:.1e}, marginal {marginal:.1e}, entropy {purity:.1e}"),
    )
}

fn extraction_consistency() -> Result<Outcome> {
    let ext = catalog::four_element_extension()?;
    let family = extract_povm_family(&ext)?;
    let expected = [catalog::four_element_povm(), catalog::selected_povm_e1()];
    let mut projector_err = 0.0f64;
    for (got, want) in family.iter().zip(&expected) {
        for (a, b) in got.effects().iter().zip(want.effects()) {
            projector_err = projector_err.max(max_abs_diff(a, b));
        }
    }
    let mut coherence_err = 0.0f64;
    for i in 0..50u64 {
        let mut r = rng(7000 + i);
        let rho = if i % 2 == 0 { random_density(2, &mut r) } else { random_pure(2, &mut r) };
        for (a, povm) in expected.iter().enumerate() {
            let sel = ext.with_reference(a)?;
            let embedded = block_coherence(&embed_state(&rho, &sel)?, &sel.measurement)?;
            coherence_err = coherence_err.max((embedded - povm_coherence(&rho, povm)?.value).abs());
        }
    }
    outcome(
        family.len() == 2 && projector_err < 1e-9 && coherence_err < 1e-8,
        format!("projector err {projector_err:.1e}, coherence err {coherence_err:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("trine maximal coherence", trine_maximal_coherence),
        ("trine conversion", trine_conversion),
        ("four-element maximal values", four_element_maximal),
        ("phase sweep anchors", fig2_anchors),
        ("Naimark reproduction", naimark_reproduction),
        ("coherence iff entanglement", theorem1_suite),
        ("two-outcome confinement", example1_confinement),
        ("structural invariants", structural_invariants),
        ("extraction consistency", extraction_consistency),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (passed, detail) = match check() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!("criterion {}: {} {name}: {detail}", i + 1, if passed { "PASS" } else { "FAIL" });
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all criteria passed");
        ExitCode::SUCCESS
    }
}

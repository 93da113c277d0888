//! Reproduction tables for the worked examples, the phase sweep over the
//! four-outcome extension, and randomized coherence/entanglement sweeps.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use crate::catalog;
use crate::coherence::{block_coherence, povm_coherence, povm_coherence_via_naimark};
use crate::convert::{convert, pure_state_negativity, rel_ent_entanglement_bounds, theorem1_check, Theorem1Report};
use crate::error::{Error, Result};
use crate::measure::{block_dephase, DensityMatrix, ProjectiveMeasurement};
use crate::naimark::{canonical_extension, embed_state, fourier_family_extension};
use crate::qmat::{partial_trace, shannon_entropy};
use crate::random;

pub const DEFAULT_GRID: usize = 256;
/// Tolerance for `entanglement_selected = max(coherence_E0, coherence_E1)`.
pub const SELECTION_TOL: f64 = 1e-10;

/// One point of the phase sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub coherence_e0: f64,
    pub coherence_e1: f64,
    /// Entanglement of the converted state for the better ancilla choice.
    pub entanglement_selected: f64,
    pub ancilla_choice: usize,
}

/// Closed form of `C(psi_t, E_0)`: the outcome distribution is
/// `{1/4, (1 + sin 2t)/4, 1/4, (1 - sin 2t)/4}` and every post-measurement state is pure.
pub fn fig2_e0_oracle(t: f64) -> f64 {
    let s = (2.0 * t).sin();
    shannon_entropy(&[0.25, (1.0 + s) / 4.0, 0.25, (1.0 - s) / 4.0]).expect("distribution")
}

/// Closed form of `C(psi_t, E_1)` with distribution `{cos^2 t / 2, 1/4, sin^2 t / 2, 1/4}`.
pub fn fig2_e1_oracle(t: f64) -> f64 {
    let (c, s) = (t.cos().powi(2), t.sin().powi(2));
    shannon_entropy(&[c / 2.0, 0.25, s / 2.0, 0.25]).expect("distribution")
}

/// Sweep row at phase `t`.
pub fn fig2_row(t: f64) -> Result<SweepRow> {
    let rho = catalog::phase_state(t);
    let coherence_e0 = povm_coherence(&rho, &catalog::four_element_povm())?.value;
    let coherence_e1 = povm_coherence(&rho, &catalog::selected_povm_e1())?.value;
    let ancilla_choice = usize::from(coherence_e1 > coherence_e0);
    let ext = catalog::four_element_extension()?.with_reference(ancilla_choice)?;
    let embedded = embed_state(&rho, &ext)?;
    let entanglement_selected = rel_ent_entanglement_bounds(&embedded, &ext.measurement)?.upper;
    let best = coherence_e0.max(coherence_e1);
    if (entanglement_selected - best).abs() > SELECTION_TOL {
        return Err(Error::InconsistentExtension {
            direct: best,
            embedded: entanglement_selected,
        });
    }
    Ok(SweepRow {
        t,
        coherence_e0,
        coherence_e1,
        entanglement_selected,
        ancilla_choice,
    })
}

/// Rows at `t_k = pi k / grid`, `k = 0..grid`.
pub fn fig2_rows(grid: usize) -> Result<Vec<SweepRow>> {
    (0..grid).map(|k| fig2_row(PI * k as f64 / grid as f64)).collect()
}

pub fn fig2_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("t,coherence_E0,coherence_E1,entanglement_selected,ancilla_choice\n");
    for r in rows {
        writeln!(
            out,
            "{:.15},{:.15},{:.15},{:.15},{}",
            r.t, r.coherence_e0, r.coherence_e1, r.entanglement_selected, r.ancilla_choice
        )
        .unwrap();
    }
    out
}

/// Two-outcome full-rank POVM example for input `|k><k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example1Row {
    pub a: f64,
    pub k: usize,
    /// `H[a, 1-a]`.
    pub closed_form: f64,
    pub coherence: f64,
    pub coherence_naimark: f64,
    pub rel_ent_entanglement: f64,
    pub negativity: f64,
    /// Negativity of a pure state with Schmidt probabilities `{a, 1-a}`.
    pub implied_negativity: f64,
    /// `tr(r^2)` for the reduced state `r` of the original system after conversion.
    pub s0_purity: f64,
}

pub fn example1_row(a: f64, k: usize) -> Result<Example1Row> {
    let povm = catalog::example1_povm(a)?;
    let rho = DensityMatrix::basis(2, k);
    let (ext, _) = canonical_extension(&povm)?;
    let coherence = povm_coherence(&rho, &povm)?.value;
    let coherence_naimark = povm_coherence_via_naimark(&rho, &povm, &ext)?;
    let embedded = embed_state(&rho, &ext)?;
    let result = convert(&embedded, &ext.measurement, povm.outcomes())?;
    let r = partial_trace(result.output_state.matrix(), &[2, ext.dim() / 2, povm.outcomes()], &[0])?;
    let s0_purity = (&r * &r).trace().re;
    Ok(Example1Row {
        a,
        k,
        closed_form: shannon_entropy(&[a, 1.0 - a])?,
        coherence,
        coherence_naimark,
        rel_ent_entanglement: result.rel_ent_entanglement,
        negativity: result.negativity,
        implied_negativity: pure_state_negativity(&[a, 1.0 - a]),
        s0_purity,
    })
}

/// `a` on `(0, 1/2]` at `grid` evenly spaced points, both basis inputs.
pub fn example1_rows(grid: usize) -> Result<Vec<Example1Row>> {
    let mut rows = Vec::with_capacity(2 * grid);
    for i in 1..=grid {
        let a = 0.5 * i as f64 / grid as f64;
        for k in 0..2 {
            rows.push(example1_row(a, k)?);
        }
    }
    Ok(rows)
}

/// Fourier-family pipeline: `|0><0|` embedded, then converted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrineRow {
    pub d: usize,
    pub coherence: f64,
    pub coherence_naimark: f64,
    pub rel_ent_entanglement: f64,
    pub negativity: f64,
    pub expected: f64,
}

pub fn trine_row(d: usize) -> Result<TrineRow> {
    let (povm, ext) = fourier_family_extension(d)?;
    let rho = DensityMatrix::basis(2, 0);
    let coherence = povm_coherence(&rho, &povm)?.value;
    let coherence_naimark = povm_coherence_via_naimark(&rho, &povm, &ext)?;
    let embedded = embed_state(&rho, &ext)?;
    let result = convert(&embedded, &ext.measurement, d)?;
    Ok(TrineRow {
        d,
        coherence,
        coherence_naimark,
        rel_ent_entanglement: result.rel_ent_entanglement,
        negativity: result.negativity,
        expected: (d as f64).log2(),
    })
}

pub fn trine_rows() -> Result<Vec<TrineRow>> {
    [3, 5, 7].into_iter().map(trine_row).collect()
}

/// Four-outcome extension evaluated with ancilla reference `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourElementRow {
    pub t: f64,
    pub ancilla: usize,
    pub coherence: f64,
    pub coherence_embedded: f64,
    pub rel_ent_entanglement: f64,
}

pub fn four_element_rows() -> Result<Vec<FourElementRow>> {
    let povms = [catalog::four_element_povm(), catalog::selected_povm_e1()];
    let mut rows = Vec::new();
    for t in [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4] {
        let rho = catalog::phase_state(t);
        for (ancilla, povm) in povms.iter().enumerate() {
            let ext = catalog::four_element_extension()?.with_reference(ancilla)?;
            let embedded = embed_state(&rho, &ext)?;
            let result = convert(&embedded, &ext.measurement, 4)?;
            rows.push(FourElementRow {
                t,
                ancilla,
                coherence: povm_coherence(&rho, povm)?.value,
                coherence_embedded: block_coherence(&embedded, &ext.measurement)?,
                rel_ent_entanglement: result.rel_ent_entanglement,
            });
        }
    }
    Ok(rows)
}

pub fn example1_table(rows: &[Example1Row]) -> String {
    let mut out = String::from("a          k  H[a,1-a]   C_r        C_r(V)     E_r        N          N(pure)    tr(r0^2)\n");
    for r in rows {
        writeln!(
            out,
            "{:<10.7} {}  {:.7}  {:.7}  {:.7}  {:.7}  {:.7}  {:.7}  {:.7}",
            r.a,
            r.k,
            r.closed_form,
            r.coherence,
            r.coherence_naimark,
            r.rel_ent_entanglement,
            r.negativity,
            r.implied_negativity,
            r.s0_purity
        )
        .unwrap();
    }
    out
}

pub fn example1_csv(rows: &[Example1Row]) -> String {
    let mut out =
        String::from("a,k,closed_form,coherence,coherence_naimark,rel_ent_entanglement,negativity,implied_negativity,s0_purity\n");
    for r in rows {
        writeln!(
            out,
            "{:.15},{},{:.15},{:.15},{:.15},{:.15},{:.15},{:.15},{:.15}",
            r.a,
            r.k,
            r.closed_form,
            r.coherence,
            r.coherence_naimark,
            r.rel_ent_entanglement,
            r.negativity,
            r.implied_negativity,
            r.s0_purity
        )
        .unwrap();
    }
    out
}

pub fn trine_table(rows: &[TrineRow]) -> String {
    let mut out = String::from("d  C_r        C_r(P)     E_r        N          log2 d\n");
    for r in rows {
        writeln!(
            out,
            "{}  {:.7}  {:.7}  {:.7}  {:.7}  {:.7}",
            r.d, r.coherence, r.coherence_naimark, r.rel_ent_entanglement, r.negativity, r.expected
        )
        .unwrap();
    }
    out
}

pub fn trine_csv(rows: &[TrineRow]) -> String {
    let mut out = String::from("d,coherence,coherence_naimark,rel_ent_entanglement,negativity,expected\n");
    for r in rows {
        writeln!(
            out,
            "{},{:.15},{:.15},{:.15},{:.15},{:.15}",
            r.d, r.coherence, r.coherence_naimark, r.rel_ent_entanglement, r.negativity, r.expected
        )
        .unwrap();
    }
    out
}

pub fn four_element_table(rows: &[FourElementRow]) -> String {
    let mut out = String::from("t          ancilla  C(rho,E_a)  C(rho(x)a,P)  E_r\n");
    for r in rows {
        writeln!(
            out,
            "{:<10.7} {}        {:.7}   {:.7}     {:.7}",
            r.t, r.ancilla, r.coherence, r.coherence_embedded, r.rel_ent_entanglement
        )
        .unwrap();
    }
    out
}

pub fn four_element_csv(rows: &[FourElementRow]) -> String {
    let mut out = String::from("t,ancilla,coherence,coherence_embedded,rel_ent_entanglement\n");
    for r in rows {
        writeln!(
            out,
            "{:.15},{},{:.15},{:.15},{:.15}",
            r.t, r.ancilla, r.coherence, r.coherence_embedded, r.rel_ent_entanglement
        )
        .unwrap();
    }
    out
}

/// A trial that failed the coherence/entanglement check, with its inputs.
#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub trial: usize,
    pub seed: u64,
    pub state: DensityMatrix,
    pub measurement: ProjectiveMeasurement,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub dim: usize,
    pub trials: usize,
    pub passed: usize,
    /// Largest distance of either entanglement bound from the coherence.
    pub worst_equality_deviation: f64,
    /// Smallest negativity seen among coherent trials.
    pub min_coherent_negativity: Option<f64>,
    /// Largest negativity seen among incoherent trials.
    pub max_incoherent_negativity: Option<f64>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dim {}: {}/{} passed", self.dim, self.passed, self.trials).unwrap();
        writeln!(out, "worst |E_r - C_r|: {:.3e}", self.worst_equality_deviation).unwrap();
        if let Some(n) = self.min_coherent_negativity {
            writeln!(out, "min negativity (coherent inputs): {n:.7}").unwrap();
        }
        if let Some(n) = self.max_incoherent_negativity {
            writeln!(out, "max negativity (incoherent inputs): {n:.3e}").unwrap();
        }
        out
    }
}

/// Input for trial `trial`: mixed, pure and block-dephased states in turn,
/// each paired with a random projective measurement.
pub fn sweep_inputs(dim: usize, seed: u64) -> (DensityMatrix, ProjectiveMeasurement, usize) {
    let mut rng = random::rng(seed);
    let p = random::random_projective(dim, &mut rng);
    let rho = match seed % 3 {
        0 => random::random_density(dim, &mut rng),
        1 => random::random_pure(dim, &mut rng),
        _ => block_dephase(&random::random_density(dim, &mut rng), &p).expect("matching dimensions"),
    };
    let target = p.outcomes();
    (rho, p, target)
}

/// Runs `trials` seeded trials; trial `j` uses seed `seed + j`.
pub fn run_sweep(dim: usize, trials: usize, seed: u64) -> SweepReport {
    let mut report = SweepReport {
        dim,
        trials,
        ..Default::default()
    };
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial as u64);
        let (rho, p, target) = sweep_inputs(dim, trial_seed);
        let fail = |detail: String| SweepFailure {
            trial,
            seed: trial_seed,
            state: rho.clone(),
            measurement: p.clone(),
            detail,
        };
        match theorem1_check(&rho, &p, target) {
            Ok(r) => {
                record(&mut report, &r);
                if r.passed {
                    report.passed += 1;
                } else {
                    report.failures.push(fail(format!("{r:?}")));
                }
            }
            Err(e) => report.failures.push(fail(e.to_string())),
        }
    }
    report
}

fn record(report: &mut SweepReport, r: &Theorem1Report) {
    report.worst_equality_deviation = report.worst_equality_deviation.max(r.sandwich.width());
    let n = r.negativity;
    if r.coherence > crate::convert::POSITIVITY_TOL {
        report.min_coherent_negativity = Some(report.min_coherent_negativity.map_or(n, |v| v.min(n)));
    } else {
        report.max_incoherent_negativity = Some(report.max_incoherent_negativity.map_or(n, |v| v.max(n)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_anchor_points() {
        for (t, e0, e1) in [(0.0, 2.0, 1.5), (FRAC_PI_4, 1.5, 2.0), (FRAC_PI_2, 2.0, 1.5), (3.0 * FRAC_PI_4, 1.5, 2.0)] {
            let r = fig2_row(t).unwrap();
            assert!((r.coherence_e0 - e0).abs() < 1e-9, "{r:?}");
            assert!((r.coherence_e1 - e1).abs() < 1e-9, "{r:?}");
            assert!((r.entanglement_selected - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fig2_matches_closed_forms() {
        for r in fig2_rows(16).unwrap() {
            assert!((r.coherence_e0 - fig2_e0_oracle(r.t)).abs() < 1e-10);
            assert!((r.coherence_e1 - fig2_e1_oracle(r.t)).abs() < 1e-10);
        }
    }

    #[test]
    fn fig2_csv_is_deterministic() {
        let a = fig2_csv(&fig2_rows(8).unwrap());
        let b = fig2_csv(&fig2_rows(8).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 9);
    }

    #[test]
    fn example1_quarter() {
        let r = example1_row(0.25, 0).unwrap();
        assert!((r.coherence - 0.8112781).abs() < 1e-7);
        assert!((r.s0_purity - 1.0).abs() < 1e-9);
        assert!((r.negativity - r.implied_negativity).abs() < 1e-8);
        assert!((r.implied_negativity - (0.25f64 * 0.75).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn trine_rows_hit_log_d() {
        for r in trine_rows().unwrap() {
            assert!((r.coherence - r.expected).abs() < 1e-9);
            assert!((r.rel_ent_entanglement - r.expected).abs() < 1e-8);
        }
    }

    #[test]
    fn four_element_table_values() {
        let rows = four_element_rows().unwrap();
        assert!((rows[0].coherence - 2.0).abs() < 1e-9);
        assert!((rows[1].coherence - 1.5).abs() < 1e-9);
        assert!((rows[2].coherence - 1.5).abs() < 1e-9);
        assert!((rows[3].coherence - 2.0).abs() < 1e-9);
        for r in rows {
            assert!((r.coherence - r.coherence_embedded).abs() < 1e-8);
            assert!((r.coherence - r.rel_ent_entanglement).abs() < 1e-8);
        }
    }

    #[test]
    fn small_sweep_passes() {
        let r = run_sweep(3, 12, 7);
        assert!(r.all_passed(), "{:?}", r.failures);
        assert!(r.min_coherent_negativity.is_some());
        assert!(r.max_incoherent_negativity.is_some());
        let empty = run_sweep(4, 0, 7);
        assert!(empty.all_passed());
    }
}

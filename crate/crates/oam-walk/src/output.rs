//! Execution of a validated plan and serialization of the results.
//!
//! CSV rows are `iteration, ell, probability_or_power`, one row per populated
//! (iteration, ℓ); unpopulated ℓ are omitted, never written as zero rows. Ring
//! output adds `detected_power, clipped_power` columns. JSON carries the same
//! records structurally; complex amplitudes serialize as `[re, im]` pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coherent;
use crate::config::{Format, Plan};
use crate::fock::{self, Occupation};
use crate::jones;
use crate::ring::{self, IterationRecord};
use crate::walk;

/// One detected or computed spectrum: value per populated ℓ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub iteration: u32,
    pub spectrum: BTreeMap<i64, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingReport {
    pub entry_rejected: f64,
    pub records: Vec<IterationRecord>,
    pub final_circulating: f64,
    pub energy_audit_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomTerm {
    /// Occupied (ℓ, polarization) modes with photon counts.
    pub occupation: Occupation,
    pub amplitude: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomReport {
    pub input_ell: i64,
    /// Largest |amplitude| over one-photon-at-ℓ, one-at-ℓ+2 configurations.
    pub coincidence_amplitude: f64,
    pub coincidence_probability: f64,
    pub terms: Vec<HomTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutput {
    Spectra(Vec<SpectrumRecord>),
    Ring(RingReport),
    Hom(HomReport),
}

/// Run the plan to completion. Deterministic for a fixed plan.
pub fn execute(plan: &Plan) -> Result<RunOutput, ring::RingError> {
    match plan {
        Plan::Ideal { initial, params, steps } => {
            let states = walk::run(initial, params, *steps as usize);
            let records = states
                .iter()
                .skip(1)
                .map(|s| SpectrumRecord {
                    iteration: s.step_count(),
                    spectrum: walk::distribution(s),
                })
                .collect();
            Ok(RunOutput::Spectra(records))
        }
        Plan::Jones { initial, params, steps } => {
            let op = jones::step_mode_operator(params);
            let mut field = initial.clone();
            let mut records = Vec::with_capacity(*steps as usize);
            for n in 1..=*steps {
                field = jones::apply(&op, &field);
                let spectrum = field
                    .amplitudes()
                    .iter()
                    .map(|(&ell, a)| (ell, a[0].norm_sqr() + a[1].norm_sqr()))
                    .collect();
                records.push(SpectrumRecord { iteration: n, spectrum });
            }
            Ok(RunOutput::Spectra(records))
        }
        Plan::Ring { initial, config } => {
            let run = ring::run_ring(initial, config)?;
            let residual = ring::energy_audit(&run.records, run.final_circulating, run.entry_rejected);
            Ok(RunOutput::Ring(RingReport {
                entry_rejected: run.entry_rejected,
                records: run.records,
                final_circulating: run.final_circulating,
                energy_audit_residual: residual,
            }))
        }
        Plan::Coherent { initial, params, steps } => {
            let mut field = initial.clone();
            let mut records = Vec::with_capacity(*steps as usize);
            for n in 1..=*steps {
                field = coherent::evolve_coherent(&field, params);
                records.push(SpectrumRecord {
                    iteration: n,
                    spectrum: coherent::mean_photon_spectrum(&field),
                });
            }
            Ok(RunOutput::Spectra(records))
        }
        Plan::Hom { ell } => {
            let state = fock::hom_two_roundtrips(*ell);
            let terms = state
                .terms()
                .iter()
                .map(|(occ, &amplitude)| HomTerm { occupation: occ.clone(), amplitude })
                .collect();
            Ok(RunOutput::Hom(HomReport {
                input_ell: *ell,
                coincidence_amplitude: fock::max_coincidence_amplitude(&state, *ell, *ell + 2),
                coincidence_probability: fock::coincidence_probability(&state, *ell, *ell + 2),
                terms,
            }))
        }
    }
}

/// Render the output in the requested format. HOM reports are JSON-only;
/// config validation rejects the CSV combination before execution.
pub fn render(output: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(output).expect("serializable output");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(output),
    }
}

fn render_csv(output: &RunOutput) -> String {
    let mut s = String::new();
    match output {
        RunOutput::Spectra(records) => {
            s.push_str("iteration,ell,probability_or_power\n");
            for r in records {
                for (ell, value) in &r.spectrum {
                    writeln!(s, "{},{},{}", r.iteration, ell, value).expect("string write");
                }
            }
        }
        RunOutput::Ring(report) => {
            s.push_str("iteration,ell,probability_or_power,detected_power,clipped_power\n");
            for r in &report.records {
                for (ell, value) in &r.spectrum {
                    writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.iteration, ell, value, r.detected_power, r.clipped_power
                    )
                    .expect("string write");
                }
            }
        }
        RunOutput::Hom(_) => unreachable!("hom output is validated as json-only"),
    }
    s
}

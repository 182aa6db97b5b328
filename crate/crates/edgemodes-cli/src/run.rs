//! Scenario dispatch: one scenario per call, CSV tables plus `meta.json`.

use std::f64::consts::PI;
use std::time::{SystemTime, UNIX_EPOCH};

use edgemodes::core::{ChainParams, Parity};
use edgemodes::experiments::{
    scenario_edge_vs_bulk, scenario_noise_resilience, scenario_pairing, scenario_spectroscopy_sweep, scenario_zero_mem,
    splitting_law, EnsembleSpec, NuMaxRow, ResilienceModel, Table,
};
use edgemodes::lindblad::{lifetime_vs_g, LifetimeOptions, NoiseParams};
use edgemodes::reconstruct::{run_reconstruction, theory_coefficients, Engine, MeasurementPlan};
use edgemodes::spectroscopy::{SpectrumOptions, Window};
use serde_json::json;

use crate::config::{RunConfig, Scenario, WindowKind};
use crate::schema::{params_hash, write_csv, write_meta, Meta, SCHEMA_VERSION};
use crate::CliError;

struct Output {
    tables: Vec<Table>,
    results: serde_json::Value,
    notes: Vec<String>,
}

fn push(t: &mut Table, row: Vec<f64>) -> Result<(), CliError> {
    t.push(row).map_err(CliError::from)
}

fn chain(c: &RunConfig) -> Result<ChainParams, CliError> {
    Ok(ChainParams::kicked_ising(c.l, c.g()?, c.j).with_h(c.h.clone()))
}

fn options(c: &RunConfig) -> SpectrumOptions {
    let window = match c.window {
        WindowKind::Rectangular => Window::Rectangular,
        WindowKind::Hann => Window::Hann,
    };
    SpectrumOptions { window, pad_factor: 1 }
}

fn desk_note(c: &RunConfig) -> String {
    format!("L = {} in place of the 47-qubit device chain", c.l)
}

fn spectrum(c: &RunConfig) -> Result<Output, CliError> {
    let pts = scenario_spectroscopy_sweep(&c.g_grid, &c.l_set, c.j, c.t_len, options(c))?;
    let mut spec = Table::new("spectrum", &[("L", ""), ("g", ""), ("omega", "rad"), ("nu", "")]);
    let mut phases = Table::new("eigenphases", &[("L", ""), ("g", ""), ("k", ""), ("theta", "rad")]);
    let mut summary = Vec::new();
    for p in &pts {
        for (w, v) in p.spectrum.omega.iter().zip(&p.spectrum.nu) {
            push(&mut spec, vec![p.l as f64, p.g, *w, *v])?;
        }
        for (k, th) in p.eigenphases.iter().enumerate() {
            push(&mut phases, vec![p.l as f64, p.g, k as f64, *th])?;
        }
        summary.push(json!({
            "L": p.l, "g": p.g, "delta_eig": p.delta_eig, "delta_spec": p.delta_spec, "bulk_gap": p.bulk_gap,
        }));
    }
    Ok(Output { tables: vec![spec, phases], results: json!({ "points": summary }), notes: vec![] })
}

fn dynamics(c: &RunConfig) -> Result<Output, CliError> {
    let ens = EnsembleSpec::new(c.ensemble, c.seed, c.delta);
    let r = scenario_edge_vs_bulk(&chain(c)?, &ens, c.t_len)?;
    let mut heat = Table::new("dynamics", &[("t", "cycles"), ("site", ""), ("autocorrelation", "")]);
    let mut eb = Table::new("edge_bulk", &[("t", "cycles"), ("edge", ""), ("bulk", "")]);
    for (t, row) in r.autocorrelation.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            push(&mut heat, vec![t as f64, (j + 1) as f64, *v])?;
        }
        push(&mut eb, vec![t as f64, r.edge[t], r.bulk[t]])?;
    }
    Ok(Output {
        tables: vec![heat, eb],
        results: json!({ "edge_lifetime": r.edge_lifetime, "bulk_lifetime": r.bulk_lifetime }),
        notes: vec![desk_note(c)],
    })
}

fn nu_table(rows: &[NuMaxRow]) -> Result<Table, CliError> {
    let mut t = Table::new(
        "nu_max",
        &[("delta_over_pi", ""), ("delta", "rad"), ("nu_max", ""), ("normalized", ""), ("omega", "rad")],
    );
    for r in rows {
        push(&mut t, vec![r.delta / PI, r.delta, r.nu_max, r.normalized, r.omega])?;
    }
    Ok(t)
}

fn disorder_sweep(c: &RunConfig) -> Result<Output, CliError> {
    let g = c.g()?;
    let notes = vec![desk_note(c), format!("ensemble of {} disorder and bitstring draws", c.ensemble)];
    if g < c.j {
        let z = scenario_zero_mem(g, c.j, c.l, &c.delta_grid, c.ensemble, c.seed, c.t_len)?;
        let results = json!({ "regime": "zero", "dominant_omega": z.dominant_omega });
        return Ok(Output { tables: vec![nu_table(&z.rows)?], results, notes });
    }
    let model = ResilienceModel::KickedIsing { g, j: c.j };
    let rows = scenario_noise_resilience(model, c.l, &c.delta_grid, c.ensemble, c.seed, c.t_len)?;
    Ok(Output { tables: vec![nu_table(&rows)?], results: json!({ "regime": "pi" }), notes })
}

fn xy(c: &RunConfig) -> Result<Output, CliError> {
    let zeta = c.zeta.expect("resolved");
    let rows = scenario_noise_resilience(ResilienceModel::Xy { zeta }, c.l, &c.delta_grid, c.ensemble, c.seed, c.t_len)?;
    Ok(Output { tables: vec![nu_table(&rows)?], results: json!({ "zeta": zeta }), notes: vec![desk_note(c)] })
}

fn lindblad(c: &RunConfig) -> Result<Output, CliError> {
    let noise = NoiseParams::uniform(c.l, c.gamma_phi, c.gamma_d);
    noise.validate()?;
    let template = ChainParams::kicked_ising(c.l, c.g_grid[0], c.j).with_h(c.h.clone());
    let opts = LifetimeOptions { t_len: c.t_len, fit_from: c.t_len / 4 };
    let rows = lifetime_vs_g(&c.g_grid, &template, &noise, opts);
    let mut t = Table::new("lifetime", &[("g", ""), ("rate", "1/cycle"), ("t_m", "cycles"), ("gamma_eff", "1/cycle")]);
    for r in &rows {
        push(&mut t, vec![r.g, r.rate, r.t_m, r.gamma_eff.unwrap_or(f64::NAN)])?;
    }
    let errors: Vec<_> = rows.iter().filter_map(|r| r.error.as_ref().map(|e| json!({ "g": r.g, "error": e }))).collect();
    Ok(Output { tables: vec![t], results: json!({ "errors": errors }), notes: vec![desk_note(c)] })
}

fn reconstruct(c: &RunConfig) -> Result<Output, CliError> {
    let g = c.g()?;
    let params = chain(c)?;
    let mut plan = MeasurementPlan::new(c.l, g, c.j)?;
    plan.n_shots = c.shots;
    plan.sample_shots = c.sample_shots;
    plan.seed = c.seed;
    plan.disorder = c.delta / PI;
    let engine = if c.gamma_phi > 0.0 || c.gamma_d > 0.0 {
        Engine::Lindblad(NoiseParams::uniform(c.l, c.gamma_phi, c.gamma_d))
    } else {
        Engine::Statevector
    };
    let got = run_reconstruction(&plan, &engine, &params)?;
    let theory = theory_coefficients(g, c.j, plan.sector, plan.side, c.l)?;
    let mut t = Table::new("coefficients", &[("n", "site"), ("parity", "Z=0;Y=1"), ("alpha", ""), ("error", ""), ("theory", "")]);
    for s in &plan.strings {
        let parity = if s.parity == Parity::Z { 0.0 } else { 1.0 };
        push(&mut t, vec![s.n as f64, parity, got.get(*s), got.error(*s), theory.get(*s)])?;
    }
    let results = json!({
        "a_norm": got.a_norm,
        "normalization_residual": got.normalization_residual,
        "warnings": got.warnings,
        "window": [plan.window.start, plan.window.end],
    });
    Ok(Output { tables: vec![t], results, notes: vec![desk_note(c)] })
}

fn splitting(c: &RunConfig) -> Result<Output, CliError> {
    let mut t = Table::new("splitting", &[("g", ""), ("L", ""), ("delta", "rad")]);
    let mut fits = Vec::new();
    for &g in &c.g_grid {
        let law = splitting_law(g, c.j, &c.l_set)?;
        for (l, d) in law.ls.iter().zip(&law.deltas) {
            push(&mut t, vec![g, *l as f64, *d])?;
        }
        fits.push(json!({ "g": g, "slope": law.slope, "xi_pi": law.xi_pi, "relative_error": law.relative_error }));
    }
    Ok(Output { tables: vec![t], results: json!({ "fits": fits }), notes: vec![] })
}

fn pairing(c: &RunConfig) -> Result<Output, CliError> {
    let rows = scenario_pairing(c.g()?, c.j, c.l, &c.h_grid)?;
    let mut t = Table::new("pairing", &[("g", ""), ("L", ""), ("h", "rad"), ("defect", "rad"), ("ratio", "")]);
    for r in &rows {
        push(&mut t, vec![r.g, r.l as f64, r.h, r.defect, r.ratio])?;
    }
    Ok(Output { tables: vec![t], results: json!({}), notes: vec![] })
}

/// Runs the scenario and writes `<name>.csv` per table plus `meta.json` into `config.out`.
pub fn run(config: &RunConfig) -> Result<Meta, CliError> {
    config.validate()?;
    let out = match config.scenario {
        Scenario::Spectrum => spectrum(config),
        Scenario::Dynamics => dynamics(config),
        Scenario::DisorderSweep => disorder_sweep(config),
        Scenario::Lindblad => lindblad(config),
        Scenario::Reconstruct => reconstruct(config),
        Scenario::Xy => xy(config),
        Scenario::Splitting => splitting(config),
        Scenario::Pairing => pairing(config),
    }?;
    std::fs::create_dir_all(&config.out)?;
    let mut files = Vec::new();
    for t in &out.tables {
        let name = format!("{}.csv", t.name);
        write_csv(&config.out.join(&name), t)?;
        files.push(name);
    }
    let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let meta = Meta {
        schema_version: SCHEMA_VERSION.into(),
        scenario: config.scenario.name().into(),
        seed: config.seed,
        params_hash: params_hash(&config.file),
        created_unix,
        config: config.file.clone(),
        files,
        notes: out.notes,
        results: out.results,
    };
    write_meta(&config.out.join("meta.json"), &meta)?;
    Ok(meta)
}

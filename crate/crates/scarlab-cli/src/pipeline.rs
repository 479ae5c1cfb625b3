//! Stage orchestration and artifact emission for `scarlab run`.
//!
//! Stages execute in dependency order; every run writes `manifest.json`
//! (config hash, seed, per-stage wall clock and details), even when a
//! stage fails. Data stages (spectrum, levelstats, entanglement_scatter,
//! entropy_scaling) emit artifacts; verification stages (verify_tl,
//! verify_scars, fragmentation, solve_annihilators, supplementary_suite)
//! also gate the exit status on their tolerances.

use crate::config::{CliError, CliResult, ModelPreset, RunConfig};
use ndarray::Array1;
use num_complex::Complex64 as C64;
use scarlab::annihilators::{
    self, singlet_projector, solve_annihilators, verify_temperley_lieb,
};
use scarlab::entanglement::{bipartite_entropy, entropy_scaling};
use scarlab::fragmentation::{
    krylov_components, label_sets, max_cross_class_coupling, verify_xxz_reduction,
    SectorDecomposition, SectorKind,
};
use scarlab::hilbert::BasisIndex;
use scarlab::models::{
    self, build_clock_hamiltonian, build_fermionic_hamiltonian, build_hamiltonian,
    library_hamiltonian, spin_one_sz_total, tl_generator, LibraryModel,
};
use scarlab::scars::{
    build_scar_tower, clock_scar_tower, scar_dimension, supplementary_tower, ScarTower,
    TowerModel,
};
use scarlab::spectral::{
    diagonal_expectation, eigensolve_sector, r_statistic, restrict_to_sector, scar_overlaps,
    scatter_to_full, spacing_histogram, EigenSystem,
};
use scarlab::ManyBodyOperator;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

const TOWER_TOL: f64 = 1e-10;
const XXZ_TOL: f64 = 1e-12;

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

#[derive(serde::Serialize)]
struct StageRecord {
    name: String,
    status: String,
    wall_ms: u128,
    details: serde_json::Value,
}

struct State {
    config: RunConfig,
    out_dir: PathBuf,
    hamiltonian: Option<ManyBodyOperator>,
    basis: Option<BasisIndex>,
    decomposition: Option<SectorDecomposition>,
    /// Eigendecomposition of the largest non-integrable component.
    sector_eigen: Option<(Vec<usize>, EigenSystem)>,
    tower: Option<ScarTower>,
}

impl State {
    fn basis(&mut self) -> CliResult<&BasisIndex> {
        if self.basis.is_none() {
            let m = &self.config.model;
            self.basis = Some(BasisIndex::new(m.n, m.length).map_err(CliError::from)?);
        }
        Ok(self.basis.as_ref().unwrap())
    }

    fn build_h(&self, with_splitting: bool) -> CliResult<ManyBodyOperator> {
        let m = &self.config.model;
        let pert = self.config.perturbation_spec()?;
        let splitting = if with_splitting { self.config.splitting } else { None };
        let h = match m.preset {
            ModelPreset::Xxc => {
                let spec = self.config.model_spec()?;
                build_hamiltonian(&spec, pert.as_ref(), splitting.as_ref())?
            }
            ModelPreset::Fermionic => {
                let gamma = m.gamma.expect("validated").radians();
                build_fermionic_hamiltonian(gamma, m.length, pert.as_ref(), splitting.as_ref())?
            }
            ModelPreset::Clock => {
                let lambda = splitting.map(|s| s.j1);
                build_clock_hamiltonian(m.n, m.length, pert.as_ref(), lambda)?
            }
        };
        Ok(h)
    }

    fn hamiltonian(&mut self) -> CliResult<&ManyBodyOperator> {
        if self.hamiltonian.is_none() {
            self.hamiltonian = Some(self.build_h(true)?);
        }
        Ok(self.hamiltonian.as_ref().unwrap())
    }

    fn tower(&mut self) -> CliResult<&ScarTower> {
        if self.tower.is_none() {
            let m = &self.config.model;
            let tower = match m.preset {
                ModelPreset::Clock => clock_scar_tower(
                    m.n,
                    m.length,
                    self.config.splitting.map(|s| s.j1),
                )?,
                _ => {
                    let spec = self.config.model_spec()?;
                    build_scar_tower(&spec, self.config.splitting.as_ref())?
                }
            };
            self.tower = Some(tower);
        }
        Ok(self.tower.as_ref().unwrap())
    }

    fn decomposition(&mut self) -> CliResult<&SectorDecomposition> {
        if self.decomposition.is_none() {
            let spec = self.config.model_spec()?;
            self.hamiltonian()?;
            self.basis()?;
            let dec = krylov_components(
                self.hamiltonian.as_ref().unwrap(),
                self.basis.as_ref().unwrap(),
                &spec,
            )?;
            self.decomposition = Some(dec);
        }
        Ok(self.decomposition.as_ref().unwrap())
    }

    fn write(&self, name: &str, contents: &[u8]) -> CliResult<()> {
        fs::write(self.out_dir.join(name), contents)
            .map_err(|e| CliError::Schema(format!("writing {name}: {e}")))
    }
}

/// Execute `scarlab run <config>`; returns the process exit code.
pub fn run(config_path: &Path) -> i32 {
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return 2;
        }
    };
    let config = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    let out_dir = PathBuf::from(&config.output_dir);
    if let Err(e) = fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return 2;
    }
    let config_hash: String = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let seed = config.seed;
    let dense_cap = config.dense_cap();
    let plan = config.stage_plan();
    let mut state = State {
        config,
        out_dir: out_dir.clone(),
        hamiltonian: None,
        basis: None,
        decomposition: None,
        sector_eigen: None,
        tower: None,
    };

    let mut records: Vec<StageRecord> = Vec::new();
    let mut failure: Option<(String, CliError)> = None;
    for stage in plan {
        let started = Instant::now();
        let outcome = run_stage(stage, &mut state);
        let wall_ms = started.elapsed().as_millis();
        match outcome {
            Ok(details) => {
                records.push(StageRecord {
                    name: stage.to_string(),
                    status: "ok".into(),
                    wall_ms,
                    details,
                });
            }
            Err(e) => {
                records.push(StageRecord {
                    name: stage.to_string(),
                    status: "failed".into(),
                    wall_ms,
                    details: serde_json::json!({ "error": e.message() }),
                });
                failure = Some((stage.to_string(), e));
                break;
            }
        }
    }

    let manifest = serde_json::json!({
        "config_hash": config_hash,
        "seed": seed,
        "dense_cap": dense_cap,
        "version": env!("CARGO_PKG_VERSION"),
        "status": if failure.is_none() { "ok" } else { "failed" },
        "failing_stage": failure.as_ref().map(|(s, _)| s.clone()),
        "stages": records,
    });
    let manifest_text = serde_json::to_string_pretty(&manifest).expect("manifest");
    if let Err(e) = fs::write(out_dir.join("manifest.json"), manifest_text) {
        eprintln!("error: cannot write manifest: {e}");
        return 2;
    }
    match failure {
        None => 0,
        Some((stage, e)) => {
            eprintln!("error: stage {stage} failed: {}", e.message());
            e.exit_code()
        }
    }
}

fn run_stage(stage: &str, state: &mut State) -> CliResult<serde_json::Value> {
    match stage {
        "verify_tl" => stage_verify_tl(state),
        "verify_scars" => stage_verify_scars(state),
        "fragmentation" => stage_fragmentation(state),
        "spectrum" => stage_spectrum(state),
        "levelstats" => stage_levelstats(state),
        "entanglement_scatter" => stage_entanglement_scatter(state),
        "entropy_scaling" => stage_entropy_scaling(state),
        "solve_annihilators" => stage_solve_annihilators(state),
        "supplementary_suite" => stage_supplementary_suite(state),
        other => Err(CliError::Schema(format!("unknown stage '{other}'"))),
    }
}

fn stage_verify_tl(state: &mut State) -> CliResult<serde_json::Value> {
    let spec = state.config.model_spec()?;
    let e = tl_generator(&spec)?;
    let report = verify_temperley_lieb(&e, spec.gamma)?;
    let details = serde_json::to_value(&report).expect("report json");
    if !report.pass {
        return Err(CliError::Tolerance(format!(
            "verify_tl: deviations {details}"
        )));
    }
    Ok(details)
}

fn stage_verify_scars(state: &mut State) -> CliResult<serde_json::Value> {
    let expected = match state.config.model.preset {
        ModelPreset::Clock => (state.config.model.length * (state.config.model.n - 1) + 1) as u64,
        _ => scar_dimension(state.config.model.n, state.config.model.length),
    };
    state.tower()?;
    state.hamiltonian()?;
    let tower = state.tower.as_ref().unwrap();
    let h = state.hamiltonian.as_ref().unwrap();
    let residual = tower.max_eigen_residual(h)?;
    let gram = tower.orthonormality_deviation();
    let count = tower.len() as u64;
    let details = serde_json::json!({
        "count": count,
        "expected": expected,
        "max_eigen_residual": residual,
        "orthonormality_deviation": gram,
    });
    let tower_json = serde_json::to_string_pretty(&tower.to_json()).expect("tower json");
    state.write("tower.json", tower_json.as_bytes())?;
    if state.config.dump_amplitudes {
        state.write("tower.bin", &tower.amplitude_bytes())?;
    }
    if count != expected || residual >= TOWER_TOL || gram >= TOWER_TOL {
        return Err(CliError::Tolerance(format!("verify_scars: {details}")));
    }
    Ok(details)
}

fn stage_fragmentation(state: &mut State) -> CliResult<serde_json::Value> {
    let spec = state.config.model_spec()?;
    state.basis()?;
    state.hamiltonian()?;
    state.decomposition()?;
    let basis = state.basis.as_ref().unwrap();
    let h = state.hamiltonian.as_ref().unwrap();
    let decomposition = state.decomposition.as_ref().unwrap();

    let stat = label_sets(basis, &spec.a_labels, &spec.b_labels)?;
    let bookkeeping = stat.total_size() == basis.dim();
    let cross = max_cross_class_coupling(h, basis, &spec)?;
    let dynamic_ok = decomposition.total_size() == basis.dim();
    let sectors_json = decomposition.to_json(basis)?;
    state.write(
        "sectors.json",
        serde_json::to_string_pretty(&sectors_json).expect("sectors").as_bytes(),
    )?;

    // XXZ reduction against the independent reference, splitting excluded
    let bare = state.build_h(false)?;
    let mut reductions = Vec::new();
    let mut worst = 0.0f64;
    for &a in &spec.a_labels {
        for &b in &spec.b_labels {
            if spec.eta(b) == -1.0 && state.config.model.length % 2 == 1 {
                continue; // the gauge needs even L
            }
            let report = verify_xxz_reduction(&bare, basis, &spec, a, b)?;
            worst = worst.max(report.max_deviation).max(report.leakage);
            reductions.push(serde_json::to_value(&report).expect("reduction"));
        }
    }
    let details = serde_json::json!({
        "bookkeeping": bookkeeping && dynamic_ok,
        "cross_class_coupling": cross,
        "xxz_max_deviation": worst,
        "reductions": reductions,
        "sectors": decomposition.sectors.len(),
    });
    if !(bookkeeping && dynamic_ok) || cross != 0.0 || worst >= XXZ_TOL {
        return Err(CliError::Tolerance(format!("fragmentation: {details}")));
    }
    Ok(details)
}

fn stage_spectrum(state: &mut State) -> CliResult<serde_json::Value> {
    state.decomposition()?;
    state.hamiltonian()?;
    let decomposition = state.decomposition.as_ref().unwrap();
    let h = state.hamiltonian.as_ref().unwrap();
    let sector = decomposition
        .largest_non_integrable()
        .ok_or_else(|| CliError::Tolerance("spectrum: no non-integrable component".into()))?;
    let indices = sector.indices.clone();
    let eigen = eigensolve_sector(h, &indices, state.config.dense_cap())?;

    let mut csv = String::from("index,energy\n");
    for (i, e) in eigen.energies.iter().enumerate() {
        csv.push_str(&format!("{i},{}\n", fmt(*e)));
    }
    state.write("spectrum.csv", csv.as_bytes())?;
    let details = serde_json::json!({
        "sector_dim": indices.len(),
        "e_min": eigen.energies.first(),
        "e_max": eigen.energies.last(),
    });
    state.sector_eigen = Some((indices, eigen));
    Ok(details)
}

fn stage_levelstats(state: &mut State) -> CliResult<serde_json::Value> {
    let (_, eigen) = state
        .sector_eigen
        .as_ref()
        .ok_or_else(|| CliError::Schema("levelstats needs the spectrum stage".into()))?;
    let window = 0.8;
    let r_mean = r_statistic(&eigen.energies, window)?;
    let hist = spacing_histogram(&eigen.energies, 7, 50, window)?;

    let rstat = serde_json::json!({
        "r_mean": r_mean,
        "window": window,
        "n_levels": eigen.energies.len(),
    });
    state.write(
        "rstat.json",
        serde_json::to_string_pretty(&rstat).expect("rstat").as_bytes(),
    )?;

    let mut csv = String::from("s,density,goe_reference\n");
    for i in 0..hist.densities.len() {
        let center = 0.5 * (hist.bin_edges[i] + hist.bin_edges[i + 1]);
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt(center),
            fmt(hist.densities[i]),
            fmt(hist.goe_reference[i])
        ));
    }
    state.write("pofs.csv", csv.as_bytes())?;

    Ok(serde_json::json!({
        "r_mean": r_mean,
        "ks_distance_to_goe": hist.ks_distance,
        "n_levels": eigen.energies.len(),
        "unfolding_degree": hist.unfolding_degree,
    }))
}

fn stage_entanglement_scatter(state: &mut State) -> CliResult<serde_json::Value> {
    state.decomposition()?;
    state.tower()?;
    state.hamiltonian()?;
    state.basis()?;
    let config_cap = state.config.dense_cap();
    let l = state.config.model.length;
    let n = state.config.model.n;
    let sz_weights = state.config.sz_weights();

    // pull the cached big-sector eigendecomposition out; other sectors are
    // small and solved here
    let cached = state.sector_eigen.take();
    let decomposition = state.decomposition.as_ref().unwrap();
    let tower = state.tower.as_ref().unwrap();
    let h = state.hamiltonian.as_ref().unwrap();
    let basis = state.basis.as_ref().unwrap();
    let full_dim = basis.dim();

    struct Record {
        energy: f64,
        sz: f64,
        entropy: f64,
        overlap: f64,
        flag: bool,
    }
    let mut records: Vec<Record> = Vec::new();
    let mut flagged = 0usize;

    for sector in &decomposition.sectors {
        // split single-sector Frozen bookkeeping into per-string blocks
        let blocks: Vec<Vec<usize>> = if matches!(sector.kind, SectorKind::Frozen) {
            sector.indices.iter().map(|&i| vec![i]).collect()
        } else {
            vec![sector.indices.clone()]
        };
        for indices in blocks {
            let mut eigen = match &cached {
                Some((cached_idx, cached_eigen)) if *cached_idx == indices => cached_eigen.clone(),
                _ => eigensolve_sector(h, &indices, config_cap)?,
            };
            // scar states supported inside this block
            let mut scars_here: Vec<Array1<C64>> = Vec::new();
            for s in &tower.states {
                let (restricted, lost) = restrict_to_sector(s, &indices);
                if lost < 1e-20 {
                    scars_here.push(restricted);
                }
            }
            let overlaps = scar_overlaps(&mut eigen, &scars_here)?;
            for k in 0..eigen.len() {
                let column = eigen.vectors.column(k);
                let sz = diagonal_expectation(column, &indices, basis, &sz_weights)?;
                let full = scatter_to_full(column, &indices, full_dim);
                let entropy = bipartite_entropy(&full, l / 2, n)?.value;
                if overlaps.flags[k] {
                    flagged += 1;
                }
                records.push(Record {
                    energy: eigen.energies[k],
                    sz,
                    entropy,
                    overlap: overlaps.overlaps[k],
                    flag: overlaps.flags[k],
                });
            }
        }
    }
    records.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    let mut csv = String::from("energy,sz,entropy,scar_overlap,scar_flag\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(r.energy),
            fmt(r.sz),
            fmt(r.entropy),
            fmt(r.overlap),
            u8::from(r.flag)
        ));
    }
    state.write("eigenstates.csv", csv.as_bytes())?;

    Ok(serde_json::json!({
        "n_eigenstates": records.len(),
        "n_flagged": flagged,
        "tower_size": tower.len(),
    }))
}

fn stage_entropy_scaling(state: &mut State) -> CliResult<serde_json::Value> {
    let (fractions, lengths) = state.config.entropy_scaling_params()?;
    let curve = entropy_scaling(&fractions, &lengths)?;
    let mut csv = String::from("L,f1,f2,f3,S_ent,fit_slope\n");
    for &(l, s) in &curve.points {
        csv.push_str(&format!(
            "{l},{}/{},{}/{},{}/{},{},{}\n",
            fractions[0].num,
            fractions[0].den,
            fractions[1].num,
            fractions[1].den,
            fractions[2].num,
            fractions[2].den,
            fmt(s),
            fmt(curve.slope)
        ));
    }
    state.write("scaling.csv", csv.as_bytes())?;
    Ok(serde_json::json!({
        "slope": curve.slope,
        "intercept": curve.intercept,
        "rms_residual": curve.rms_residual,
        "lengths": lengths,
    }))
}

fn stage_solve_annihilators(state: &mut State) -> CliResult<serde_json::Value> {
    // default input: the Dicke/singlet projector
    let p = singlet_projector();
    let solution = solve_annihilators(&p)?;
    state.write(
        "annihilators.json",
        serde_json::to_string_pretty(&solution.to_json())
            .expect("annihilators")
            .as_bytes(),
    )?;
    Ok(serde_json::json!({
        "solution_dim": solution.dimension(),
        "singular_values": solution.singular_values,
    }))
}

fn stage_supplementary_suite(state: &mut State) -> CliResult<serde_json::Value> {
    let l = if state.config.model.length % 2 == 0 {
        state.config.model.length.clamp(4, 8)
    } else {
        6
    };
    let cap = state.config.dense_cap();
    let mut rows = Vec::new();
    let mut pass = true;

    let dicke = supplementary_tower(TowerModel::Dicke, l, cap)?;
    for model in [LibraryModel::DmiX, LibraryModel::DmiY, LibraryModel::DmiZ] {
        let h = library_hamiltonian(model, l, 0.0)?;
        let r = annihilators::verify_extensive_annihilation(&h, &dicke)?;
        pass &= r.max_residual < 1e-10;
        rows.push(serde_json::json!({
            "model": format!("{model:?}"), "tower": "dicke",
            "residual": r.max_residual, "tolerance": 1e-10,
        }));
    }
    {
        let tower = supplementary_tower(TowerModel::Spin1Xy, l, cap)?;
        let h = library_hamiltonian(LibraryModel::Spin1XyAnnihilator, l, 0.0)?;
        let r = annihilators::verify_extensive_annihilation(&h, &tower)?;
        pass &= r.max_residual < 1e-10;
        rows.push(serde_json::json!({
            "model": "Spin1XyAnnihilator", "tower": "spin1_xy",
            "residual": r.max_residual, "tolerance": 1e-10,
        }));
    }
    {
        let tower = supplementary_tower(TowerModel::EtaPairing, l, cap)?;
        let h = library_hamiltonian(LibraryModel::EtaDmi, l, 0.0)?;
        let r = annihilators::verify_extensive_annihilation(&h, &tower)?;
        pass &= r.max_residual < 1e-10;
        rows.push(serde_json::json!({
            "model": "EtaDmi", "tower": "eta_pairing",
            "residual": r.max_residual, "tolerance": 1e-10,
        }));
    }
    {
        let tower = supplementary_tower(TowerModel::Aklt, l, cap)?;
        let h = library_hamiltonian(LibraryModel::Aklt, l, 0.0)?;
        let type2 = h.add(&spin_one_sz_total(l)?.scale(C64::new(-1.0, 0.0)))?;
        let r = annihilators::verify_extensive_annihilation(&type2, &tower)?;
        pass &= r.max_residual < 1e-8;
        rows.push(serde_json::json!({
            "model": "Aklt (H - Sz_tot)", "tower": "aklt",
            "residual": r.max_residual, "tolerance": 1e-8,
        }));
    }
    let details = serde_json::json!({ "length": l, "checks": rows });
    state.write(
        "supplementary.json",
        serde_json::to_string_pretty(&details).expect("suite").as_bytes(),
    )?;
    if !pass {
        return Err(CliError::Tolerance(format!("supplementary_suite: {details}")));
    }
    Ok(details)
}

/* Standalone subcommands ******************************************************/

/// `scarlab verify-tl`: quick Temperley-Lieb check for an untwisted
/// partition `A = {1..na}`.
pub fn verify_tl_command(n: usize, na: usize, gamma: (i64, i64)) -> i32 {
    let gamma_rad = std::f64::consts::PI * gamma.0 as f64 / gamma.1 as f64;
    let spec = match models::ModelSpec::simple(n, na, gamma_rad, 4) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let e = match tl_generator(&spec) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match verify_temperley_lieb(&e, gamma_rad) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report"));
            if report.pass {
                0
            } else {
                eprintln!("error: Temperley-Lieb relations violated");
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// `scarlab solve-annihilators`: run the solver on a projector JSON file.
pub fn solve_annihilators_command(projector: &Path, out: Option<&Path>) -> i32 {
    let text = match fs::read_to_string(projector) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", projector.display());
            return 2;
        }
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: projector JSON: {e}");
            return 2;
        }
    };
    let p = match scarlab::LocalOperator::from_json(&value) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match solve_annihilators(&p) {
        Ok(solution) => {
            let rendered =
                serde_json::to_string_pretty(&solution.to_json()).expect("solution json");
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => println!("{rendered}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                scarlab::Error::VerificationFailed(_) => 1,
                _ => 2,
            }
        }
    }
}

/// `scarlab entropy-scaling`: analytic scaling curve to CSV or stdout.
pub fn entropy_scaling_command(fractions: &str, lmax: usize, out: Option<&Path>) -> i32 {
    let fractions = match scarlab::entanglement::parse_fractions(fractions) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let lengths = crate::config::default_scaling_lengths(lmax);
    match entropy_scaling(&fractions, &lengths) {
        Ok(curve) => {
            let mut csv = String::from("L,f1,f2,f3,S_ent,fit_slope\n");
            for &(l, s) in &curve.points {
                csv.push_str(&format!(
                    "{l},{}/{},{}/{},{}/{},{},{}\n",
                    fractions[0].num,
                    fractions[0].den,
                    fractions[1].num,
                    fractions[1].den,
                    fractions[2].num,
                    fractions[2].den,
                    fmt(s),
                    fmt(curve.slope)
                ));
            }
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(path, csv) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{csv}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

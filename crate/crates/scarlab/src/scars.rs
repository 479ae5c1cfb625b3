//! Generalized spin-helix states, the unfolded orthogonal scar basis, and
//! the supplementary scar towers (Dicke, eta-pairing, spin-1 XY, AKLT).
//!
//! Helix states are product states whose B-label amplitudes wind by
//! `e^{i (j-1) gamma} eta_b^{j-1}` per site. Expanding the product in the
//! amplitudes `beta_c` yields one orthogonal scar state per occupation
//! vector `(m_1, ..., m_N)` with `sum m_c = L`; these are built here by
//! direct enumeration of occupation-constrained strings, which is exact
//! and free of cancellation error.

use crate::hilbert::{embed, standard_basis_element, BasisIndex, LocalOperator, ManyBodyOperator, StateVector};
use crate::models::{self, ModelSpec, SplittingSpec};
use crate::{C64, Error, Result};
use ndarray::Array1;
use std::f64::consts::PI;

/* Helix states ***************************************************************/

/// Amplitudes `beta_c` attached to a model.
#[derive(Debug, Clone)]
pub struct HelixParams {
    pub model: ModelSpec,
    pub betas: Vec<C64>,
}

impl HelixParams {
    pub fn new(model: ModelSpec, betas: Vec<C64>) -> Result<Self> {
        if betas.len() != model.n {
            return Err(Error::DimensionMismatch(format!(
                "{} betas for local dimension {}",
                betas.len(),
                model.n
            )));
        }
        if betas.iter().all(|b| b.norm() == 0.0) {
            return Err(Error::InvalidArgument("all beta amplitudes are zero".into()));
        }
        Ok(Self { model, betas })
    }
}

/// Per-site factor of the helix product state at (1-based) site `j`.
fn helix_site_factor(params: &HelixParams, j: usize) -> Vec<C64> {
    let spec = &params.model;
    let phase = C64::from_polar(1.0, (j as f64 - 1.0) * spec.gamma);
    (1..=spec.n as u8)
        .map(|c| {
            let beta = params.betas[(c - 1) as usize];
            if spec.is_a(c) {
                beta
            } else {
                let eta_pow = if (j - 1) % 2 == 0 { 1.0 } else { spec.eta(c) };
                phase * C64::new(eta_pow, 0.0) * beta
            }
        })
        .collect()
}

/// The generalized spin-helix product state
/// `(x)_j [ sum_{a in A} beta_a |a> + e^{i(j-1)gamma} sum_{b in B} eta_b^{j-1} beta_b |b> ]`,
/// unnormalized as written unless `normalize`.
pub fn helix_state(params: &HelixParams, normalize: bool) -> Result<StateVector> {
    let spec = &params.model;
    spec.require_helix_compatible()?;
    let mut amps: Vec<C64> = vec![C64::new(1.0, 0.0)];
    for j in 1..=spec.length {
        let factor = helix_site_factor(params, j);
        let mut next = Vec::with_capacity(amps.len() * spec.n);
        for &a in &amps {
            for &f in &factor {
                next.push(a * f);
            }
        }
        amps = next;
    }
    let v = StateVector::new(Array1::from_vec(amps));
    Ok(if normalize { v.normalized() } else { v })
}

/* Scar labels and the unfolded basis *****************************************/

/// Occupation label `(m_1, ..., m_N)` of an unfolded scar state.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ScarLabel {
    pub occupations: Vec<usize>,
}

impl ScarLabel {
    pub fn new(occupations: Vec<usize>, l: usize) -> Result<Self> {
        if occupations.iter().sum::<usize>() != l {
            return Err(Error::InvalidArgument(format!(
                "occupations {occupations:?} do not sum to L = {l}"
            )));
        }
        Ok(Self { occupations })
    }

    pub fn total(&self) -> usize {
        self.occupations.iter().sum()
    }
}

/// `binom(L + N - 1, N - 1)`: the number of scar labels.
pub fn scar_dimension(n: usize, l: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 1..=(n as u64 - 1) {
        acc = acc * (l as u64 + i) / i;
    }
    acc
}

/// All occupation labels with `sum m_c = L`, lexicographic in `m`.
pub fn all_labels(n: usize, l: usize) -> Vec<ScarLabel> {
    fn rec(n: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<ScarLabel>) {
        if prefix.len() == n - 1 {
            prefix.push(remaining);
            out.push(ScarLabel { occupations: prefix.clone() });
            prefix.pop();
            return;
        }
        for m in 0..=remaining {
            prefix.push(m);
            rec(n, remaining - m, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, l, &mut Vec::new(), &mut out);
    out
}

/// Exact multinomial `L! / prod_c m_c!` (desk scale; u128 internally).
pub fn multinomial(occupations: &[usize]) -> Result<u128> {
    let mut acc: u128 = 1;
    let mut k = 0usize;
    for &m in occupations {
        for i in 1..=m {
            k += 1;
            acc = acc
                .checked_mul(k as u128)
                .ok_or_else(|| Error::InvalidArgument("multinomial overflow".into()))?;
            acc /= i as u128;
        }
    }
    Ok(acc)
}

/// The unfolded scar state `|S_{m_1,...,m_N}>`: the sum over all strings
/// with occupation `m`, each weighted by
/// `prod_{sites j carrying b in B} e^{i(j-1)gamma} eta_b^{j-1}`, normalized.
/// The squared norm before normalization is the multinomial
/// `L!/prod_c m_c!`.
pub fn unfolded_scar(spec: &ModelSpec, label: &ScarLabel) -> Result<StateVector> {
    spec.validate()?;
    if label.occupations.len() != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "label has {} entries for N = {}",
            label.occupations.len(),
            spec.n
        )));
    }
    if label.total() != spec.length {
        return Err(Error::InvalidArgument(format!(
            "occupations sum to {} != L = {}",
            label.total(),
            spec.length
        )));
    }
    let mut amps: Vec<C64> = vec![C64::new(0.0, 0.0); spec.dim()];
    fn rec(
        spec: &ModelSpec,
        site: usize,
        index: usize,
        phase: C64,
        remaining: &mut Vec<usize>,
        amps: &mut [C64],
    ) {
        let n = spec.n;
        if site > spec.length {
            amps[index] += phase;
            return;
        }
        for c in 1..=n as u8 {
            if remaining[(c - 1) as usize] == 0 {
                continue;
            }
            remaining[(c - 1) as usize] -= 1;
            let step = if spec.is_b(c) {
                let eta_pow = if (site - 1) % 2 == 0 { 1.0 } else { spec.eta(c) };
                C64::from_polar(1.0, (site as f64 - 1.0) * spec.gamma) * C64::new(eta_pow, 0.0)
            } else {
                C64::new(1.0, 0.0)
            };
            rec(spec, site + 1, index * n + (c as usize - 1), phase * step, remaining, amps);
            remaining[(c - 1) as usize] += 1;
        }
    }
    let mut remaining = label.occupations.clone();
    rec(spec, 1, 0, C64::new(1.0, 0.0), &mut remaining, &mut amps);
    let norm = (multinomial(&label.occupations)? as f64).sqrt();
    let amps = Array1::from_vec(amps).mapv(|z| z / norm);
    Ok(StateVector::new(amps).with_label(format!("S{:?}", label.occupations)))
}

/// Scar energy under the `N = 3` splitting convention:
/// `(J1 + J2) m_2 - (J1 - J2) m_3`.
pub fn scar_energy(label: &ScarLabel, splitting: &SplittingSpec) -> Result<f64> {
    if label.occupations.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "the N = 3 splitting formula needs 3 occupations, got {}",
            label.occupations.len()
        )));
    }
    let m2 = label.occupations[1] as f64;
    let m3 = label.occupations[2] as f64;
    Ok((splitting.j1 + splitting.j2) * m2 - (splitting.j1 - splitting.j2) * m3)
}

/// Scar energy from per-label diagonal weights (any `N`).
pub fn scar_energy_from_weights(label: &ScarLabel, weights: &[f64]) -> f64 {
    label
        .occupations
        .iter()
        .zip(weights)
        .map(|(&m, &w)| m as f64 * w)
        .sum()
}

/* Scar towers ****************************************************************/

/// An ordered, normalized, pairwise-orthogonal family of scar states.
#[derive(Debug, Clone)]
pub struct ScarTower {
    pub states: Vec<StateVector>,
    pub labels: Vec<ScarLabel>,
    /// Eigenvalue of the full (split) Hamiltonian on each state.
    pub energies: Vec<f64>,
    /// Norm of each state before normalization (e.g. sqrt of the
    /// multinomial for unfolded helix scars).
    pub norms: Vec<f64>,
}

impl ScarTower {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate().skip(i) {
                let g = a.dot(b);
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - C64::new(want, 0.0)).norm());
            }
        }
        dev
    }

    /// Largest eigen-residual `||H|S> - E|S>||` over the tower.
    pub fn max_eigen_residual(&self, h: &ManyBodyOperator) -> Result<f64> {
        let mut worst = 0.0f64;
        for (state, &energy) in self.states.iter().zip(&self.energies) {
            let hv = h.apply(state)?;
            let res = hv.add_scaled(C64::new(-energy, 0.0), state).norm();
            worst = worst.max(res);
        }
        Ok(worst)
    }

    /// JSON export: one `{label, energy, norm}` record per state.
    pub fn to_json(&self) -> serde_json::Value {
        let records: Vec<serde_json::Value> = self
            .labels
            .iter()
            .zip(self.energies.iter().zip(&self.norms))
            .map(|(label, (&energy, &norm))| {
                serde_json::json!({
                    "label": label.occupations,
                    "energy": energy,
                    "norm": norm,
                })
            })
            .collect();
        serde_json::Value::Array(records)
    }

    /// Amplitudes of all states, concatenated, as little-endian
    /// `(re: f64, im: f64)` pairs (16 bytes per amplitude).
    pub fn amplitude_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for state in &self.states {
            for z in state.amplitudes() {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out
    }
}

/// The full unfolded tower of an XXC model, with energies from the
/// splitting weights (zero without a splitting).
pub fn build_scar_tower(spec: &ModelSpec, splitting: Option<&SplittingSpec>) -> Result<ScarTower> {
    spec.require_helix_compatible()?;
    let labels = all_labels(spec.n, spec.length);
    let weights = splitting
        .map(|s| models::splitting_weights(spec.n, s))
        .unwrap_or_else(|| vec![0.0; spec.n]);
    let mut states = Vec::with_capacity(labels.len());
    let mut energies = Vec::with_capacity(labels.len());
    let mut norms = Vec::with_capacity(labels.len());
    for label in &labels {
        states.push(unfolded_scar(spec, label)?);
        energies.push(scar_energy_from_weights(label, &weights));
        norms.push((multinomial(&label.occupations)? as f64).sqrt());
    }
    Ok(ScarTower { states, labels, energies, norms })
}

/* Clock and fermionic helix states *******************************************/

/// Higher-spin clock helix `(x)_j sum_p beta^p e^{i p (j-1)(pi - gamma)} |p>`
/// with `gamma = pi / M`.
pub fn clock_helix(m: usize, beta: C64, l: usize, normalize: bool) -> Result<StateVector> {
    let gamma = PI / m as f64;
    let winding = l as f64 * (PI - gamma) / (2.0 * PI);
    if (winding - winding.round()).abs() >= 1e-12 {
        return Err(Error::HelixIncompatible(winding));
    }
    let mut amps: Vec<C64> = vec![C64::new(1.0, 0.0)];
    for j in 1..=l {
        let mut factor = Vec::with_capacity(m);
        let mut beta_pow = C64::new(1.0, 0.0);
        for p in 0..m {
            let phase = C64::from_polar(1.0, p as f64 * (j as f64 - 1.0) * (PI - gamma));
            factor.push(beta_pow * phase);
            if p + 1 < m {
                beta_pow *= beta;
            }
        }
        let mut next = Vec::with_capacity(amps.len() * m);
        for &a in &amps {
            for &f in &factor {
                next.push(a * f);
            }
        }
        amps = next;
    }
    let v = StateVector::new(Array1::from_vec(amps));
    Ok(if normalize { v.normalized() } else { v })
}

/// Unfolded clock tower: one state per total level `n = sum_j p_j`,
/// `n = 0..=L(M-1)`. With a charge coupling `lambda sum_j Q_j` the energies
/// are `lambda (L(M-1)/2 - n)`.
pub fn clock_scar_tower(m: usize, l: usize, charge_coupling: Option<f64>) -> Result<ScarTower> {
    let gamma = PI / m as f64;
    let winding = l as f64 * (PI - gamma) / (2.0 * PI);
    if (winding - winding.round()).abs() >= 1e-12 {
        return Err(Error::HelixIncompatible(winding));
    }
    let dim = m.pow(l as u32);
    let basis = BasisIndex::new(m, l)?;
    let n_max = l * (m - 1);
    let mut amp_sets: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); dim]; n_max + 1];
    let mut string = vec![0u8; l];
    for idx in 0..dim {
        basis.decode_into(idx, &mut string)?;
        let mut total = 0usize;
        let mut arg = 0.0f64;
        for (site, &c) in string.iter().enumerate() {
            let p = (c - 1) as usize;
            total += p;
            arg += p as f64 * site as f64 * (PI - gamma);
        }
        amp_sets[total][idx] = C64::from_polar(1.0, arg);
    }
    let lambda = charge_coupling.unwrap_or(0.0);
    let mut states = Vec::with_capacity(n_max + 1);
    let mut labels = Vec::with_capacity(n_max + 1);
    let mut energies = Vec::with_capacity(n_max + 1);
    let mut norms = Vec::with_capacity(n_max + 1);
    for (n, amps) in amp_sets.into_iter().enumerate() {
        let raw = StateVector::new(Array1::from_vec(amps));
        let norm = raw.norm();
        states.push(raw.normalized().with_label(format!("clock S_{n}")));
        labels.push(ScarLabel { occupations: vec![n] });
        energies.push(lambda * (l as f64 * (m as f64 - 1.0) / 2.0 - n as f64));
        norms.push(norm);
    }
    Ok(ScarTower { states, labels, energies, norms })
}

/// Fermionic helix of the `N = 4` model in the bosonic basis:
/// `(x)_j (|0> + b_up e^{i(j-1)gamma}|up> + b_down e^{i(j-1)gamma}|down>
///        + b_d (-1)^{j-1} |d>)`.
/// With `b_up = b_down = 0` this is the eta-pairing family.
pub fn fermionic_helix(
    beta_up: C64,
    beta_down: C64,
    beta_d: C64,
    l: usize,
    gamma: f64,
    normalize: bool,
) -> Result<StateVector> {
    if l % 2 == 1 {
        return Err(Error::InvalidArgument(
            "fermionic helix needs even L (staggered double occupancy)".into(),
        ));
    }
    let winding = gamma * l as f64 / (2.0 * PI);
    if (winding - winding.round()).abs() >= 1e-12 {
        return Err(Error::HelixIncompatible(winding));
    }
    let mut amps: Vec<C64> = vec![C64::new(1.0, 0.0)];
    for j in 1..=l {
        let phase = C64::from_polar(1.0, (j as f64 - 1.0) * gamma);
        let stagger = if (j - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let factor = [
            C64::new(1.0, 0.0),
            beta_up * phase,
            beta_down * phase,
            beta_d * C64::new(stagger, 0.0),
        ];
        let mut next = Vec::with_capacity(amps.len() * 4);
        for &a in &amps {
            for &f in &factor {
                next.push(a * f);
            }
        }
        amps = next;
    }
    let v = StateVector::new(Array1::from_vec(amps));
    Ok(if normalize { v.normalized() } else { v })
}

/* Supplementary towers *******************************************************/

/// Scar towers of the reference models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerModel {
    /// `(sum_j S^+_j)^n |down...down>` on spin-1/2.
    Dicke,
    /// `(sum_j (-1)^j c^dag_up c^dag_down)^n |vacuum>` in the bosonic basis.
    EtaPairing,
    /// `(sum_j (-1)^j (S^+_j)^2)^n |-1...-1>` on spin-1.
    Spin1Xy,
    /// `(sum_j (-1)^j (S^+_j)^2)^n |AKLT ground state>`.
    Aklt,
}

impl TowerModel {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "dicke" => Self::Dicke,
            "eta_pairing" => Self::EtaPairing,
            "spin1_xy" => Self::Spin1Xy,
            "aklt" => Self::Aklt,
            other => return Err(Error::InvalidArgument(format!("unknown tower '{other}'"))),
        })
    }
}

/// Staggered ladder operator `sum_j (-1)^j embed(op, j)`.
fn staggered_sum(op: &LocalOperator, l: usize) -> Result<ManyBodyOperator> {
    let mut acc = ManyBodyOperator::zero(op.local_dim().pow(l as u32));
    for j in 1..=l {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&embed(&op.scale(C64::new(sign, 0.0)), j, l, true)?)?;
    }
    Ok(acc)
}

fn uniform_sum(op: &LocalOperator, l: usize) -> Result<ManyBodyOperator> {
    let mut acc = ManyBodyOperator::zero(op.local_dim().pow(l as u32));
    for j in 1..=l {
        acc = acc.add(&embed(op, j, l, true)?)?;
    }
    Ok(acc)
}

/// Repeatedly apply a ladder operator, normalizing, until the tower ends.
fn ladder_tower(
    seed: StateVector,
    ladder: &ManyBodyOperator,
    energies: impl Fn(usize) -> f64,
    name: &str,
) -> Result<ScarTower> {
    let mut norms = vec![seed.norm()];
    let mut states = vec![seed.normalized().with_label(format!("{name} S_0"))];
    let mut current = states[0].clone();
    loop {
        let next = ladder.apply(&current)?;
        let norm = next.norm();
        if norm < 1e-9 {
            break;
        }
        current = next.normalized().with_label(format!("{name} S_{}", states.len()));
        norms.push(norm);
        states.push(current.clone());
    }
    let count = states.len();
    let labels = (0..count)
        .map(|n| ScarLabel { occupations: vec![n] })
        .collect();
    let energies = (0..count).map(energies).collect();
    Ok(ScarTower { states, labels, energies, norms })
}

/// AKLT ground state: the unique zero mode of the periodic AKLT chain.
/// Dense diagonalization when the dimension fits under `dense_cap`,
/// shifted power iteration otherwise; degeneracy is an error either way.
pub fn aklt_ground_state(l: usize, dense_cap: usize) -> Result<StateVector> {
    let h = models::library_hamiltonian(models::LibraryModel::Aklt, l, 0.0)?;
    let dim = h.dim();
    if dim <= dense_cap {
        let dense = h.to_dense(dense_cap)?;
        let (evals, evecs) = crate::linalg::hermitian_eigen(&dense)?;
        if evals[0].abs() > 1e-8 {
            return Err(Error::VerificationFailed(format!(
                "AKLT ground energy {} is not zero",
                evals[0]
            )));
        }
        if evals.len() > 1 && evals[1].abs() < 1e-8 {
            return Err(Error::DegenerateGroundState(format!(
                "second AKLT eigenvalue {} also vanishes (wrong boundary?)",
                evals[1]
            )));
        }
        Ok(StateVector::new(evecs.column(0).to_owned()).with_label("AKLT ground state"))
    } else {
        // Power iteration on (c - H) targets the H = 0 ground state.
        let shift = 1.1 * l as f64;
        let iterate =
            |mut v: StateVector, ortho: Option<&StateVector>| -> Result<(StateVector, f64)> {
                let mut residual = f64::INFINITY;
                for _ in 0..20_000 {
                    let hv = h.apply(&v)?;
                    residual = hv.norm();
                    if residual < 1e-11 {
                        break;
                    }
                    let mut next =
                        v.scale(C64::new(shift, 0.0)).add_scaled(C64::new(-1.0, 0.0), &hv);
                    if let Some(o) = ortho {
                        let overlap = o.dot(&next);
                        next = next.add_scaled(-overlap, o);
                    }
                    v = next.normalized();
                }
                Ok((v, residual))
            };
        let pseudo_random = |seed: u64, dim: usize| -> StateVector {
            let mut v = StateVector::zero(dim);
            let mut s = seed;
            for amp in v.amplitudes_mut().iter_mut() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *amp = C64::new(((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5, 0.0);
            }
            v.normalized()
        };
        let (ground, res) = iterate(pseudo_random(0x5eed_0001, dim), None)?;
        if res >= 1e-11 {
            return Err(Error::Eigensolver(format!(
                "AKLT power iteration stalled at residual {res}"
            )));
        }
        // degeneracy guard: a second vector kept orthogonal to the first
        // must not also converge to zero energy
        let probe = pseudo_random(0x5eed_0002, dim);
        let overlap = ground.dot(&probe);
        let probe = probe.add_scaled(-overlap, &ground).normalized();
        let (second, second_res) = iterate(probe, Some(&ground))?;
        let second_energy = second.dot(&h.apply(&second)?).re;
        if second_res < 1e-11 || second_energy.abs() < 1e-8 {
            return Err(Error::DegenerateGroundState(format!(
                "a second AKLT state converged to energy {second_energy:.3e}"
            )));
        }
        Ok(ground.with_label("AKLT ground state"))
    }
}

/// Build a supplementary scar tower.
///
/// Towers with staggered ladders need even `L`. The AKLT tower carries
/// energies `2n` (eigenvalues of `H_AKLT`); the others are annihilated by
/// their reference Hamiltonians, so their energies are zero.
pub fn supplementary_tower(model: TowerModel, l: usize, dense_cap: usize) -> Result<ScarTower> {
    match model {
        TowerModel::Dicke => {
            let basis = BasisIndex::new(2, l)?;
            let down = basis.encode(&vec![2u8; l])?;
            let seed = StateVector::basis_state(basis.dim(), down)?;
            let raise = standard_basis_element(2, 1, 2)?; // S^+ = |up><down|
            let ladder = uniform_sum(&raise, l)?;
            ladder_tower(seed, &ladder, |_| 0.0, "dicke")
        }
        TowerModel::EtaPairing => {
            if l % 2 == 1 {
                return Err(Error::InvalidArgument("eta-pairing tower needs even L".into()));
            }
            let basis = BasisIndex::new(4, l)?;
            let vacuum = basis.encode(&vec![1u8; l])?;
            let seed = StateVector::basis_state(basis.dim(), vacuum)?;
            let pair = standard_basis_element(4, 4, 1)?; // |d><0|
            let ladder = staggered_sum(&pair, l)?;
            ladder_tower(seed, &ladder, |_| 0.0, "eta")
        }
        TowerModel::Spin1Xy => {
            if l % 2 == 1 {
                return Err(Error::InvalidArgument("spin-1 XY tower needs even L".into()));
            }
            let basis = BasisIndex::new(3, l)?;
            let ferro = basis.encode(&vec![3u8; l])?;
            let seed = StateVector::basis_state(basis.dim(), ferro)?;
            let sp = models::spin_one_raise();
            let sp2 = sp.matmul(&sp)?;
            let ladder = staggered_sum(&sp2, l)?;
            ladder_tower(seed, &ladder, |_| 0.0, "spin1xy")
        }
        TowerModel::Aklt => {
            if l % 2 == 1 {
                return Err(Error::InvalidArgument("AKLT tower needs even L".into()));
            }
            let ground = aklt_ground_state(l, dense_cap)?;
            let sp = models::spin_one_raise();
            let sp2 = sp.matmul(&sp)?;
            let ladder = staggered_sum(&sp2, l)?;
            ladder_tower(ground, &ladder, |n| 2.0 * n as f64, "aklt")
        }
    }
}

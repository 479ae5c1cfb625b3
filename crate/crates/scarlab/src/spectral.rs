//! Dense Hermitian eigensolving on sectors, level-spacing diagnostics
//! (r-ratio, unfolded spacing histogram against the GOE surmise), and scar
//! identification inside spectra.
//!
//! The r-ratio needs no unfolding and is the primary chaos diagnostic;
//! the unfolded `P(s)` histogram is secondary. Exact degeneracies are
//! collapsed at `1e-12` relative to the spectral bandwidth before any
//! spacing statistics.

use crate::hilbert::{BasisIndex, ManyBodyOperator, StateVector};
use crate::{linalg, C64, Error, Result};
use ndarray::{Array1, Array2};

/// Relative threshold (to the bandwidth) for exact-degeneracy collapse.
pub const DEGENERACY_COLLAPSE_REL: f64 = 1e-12;

/// Poisson reference value `2 ln 2 - 1`.
pub const POISSON_R: f64 = 0.386_294_361_119_890_6;

/// GOE reference value of the mean level-spacing ratio.
pub const GOE_R: f64 = 0.5307;

/// Dense eigendecomposition of one sector.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Ascending eigenvalues.
    pub energies: Vec<f64>,
    /// Matching eigenvectors as columns, in the sector's masked basis.
    pub vectors: Array2<C64>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Full dense Hermitian eigendecomposition of a sector-restricted matrix.
///
/// The sector must be invariant (no leakage) and fit under the dense cap.
/// A few eigenpair residuals are sampled as a sanity check.
pub fn eigensolve_sector(
    h: &ManyBodyOperator,
    sector_indices: &[usize],
    dense_cap: usize,
) -> Result<EigenSystem> {
    let (restricted, leakage) = h.restrict(sector_indices)?;
    if leakage > 0.0 {
        return Err(Error::VerificationFailed(format!(
            "sector is not invariant: leakage {leakage:.3e}"
        )));
    }
    let dense = restricted.to_dense(dense_cap)?;
    eigensolve_dense(&dense)
}

/// Dense Hermitian eigendecomposition with residual sampling.
pub fn eigensolve_dense(dense: &Array2<C64>) -> Result<EigenSystem> {
    let n = dense.nrows();
    let mut dev = 0.0f64;
    for ((r, c), v) in dense.indexed_iter() {
        dev = dev.max((v - dense[(c, r)].conj()).norm());
    }
    if dev >= 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (energies, vectors) = linalg::hermitian_eigen(dense)?;
    // sampled residual check: ||Hv - Ev|| < 1e-9 ||H||
    let scale = energies
        .iter()
        .fold(1.0f64, |acc, &e| acc.max(e.abs()));
    let step = (n / 5).max(1);
    for k in (0..n).step_by(step) {
        let v = vectors.column(k).to_owned();
        let hv = linalg::dense_matvec(dense, &v);
        let mut res = 0.0f64;
        for i in 0..n {
            res = res.max((hv[i] - C64::new(energies[k], 0.0) * v[i]).norm());
        }
        if res > 1e-9 * scale {
            return Err(Error::Eigensolver(format!(
                "residual {res:.3e} at eigenpair {k} exceeds 1e-9 * {scale:.3e}"
            )));
        }
    }
    Ok(EigenSystem { energies, vectors })
}

/// Collapse exact degeneracies: keep one representative per cluster of
/// levels closer than `1e-12` times the bandwidth.
pub fn collapse_degeneracies(energies: &[f64]) -> Vec<f64> {
    if energies.is_empty() {
        return Vec::new();
    }
    let mut sorted = energies.to_vec();
    sorted.sort_by(f64::total_cmp);
    let bandwidth = sorted[sorted.len() - 1] - sorted[0];
    let tol = DEGENERACY_COLLAPSE_REL * bandwidth.max(f64::MIN_POSITIVE);
    let mut out = vec![sorted[0]];
    for &e in &sorted[1..] {
        if e - *out.last().unwrap() > tol {
            out.push(e);
        }
    }
    out
}

/// Central window by index: keep the middle `fraction` of the levels.
fn central_window(levels: &[f64], fraction: f64) -> &[f64] {
    let n = levels.len();
    let keep = ((n as f64 * fraction).round() as usize).clamp(1, n);
    let start = (n - keep) / 2;
    &levels[start..start + keep]
}

/// Mean level-spacing ratio `<r>` over the central window (default
/// `fraction = 0.8`), with exact degeneracies collapsed first.
pub fn r_statistic(energies: &[f64], window_fraction: f64) -> Result<f64> {
    let collapsed = collapse_degeneracies(energies);
    let window = central_window(&collapsed, window_fraction);
    if window.len() < 50 {
        return Err(Error::TooFewLevels { have: window.len(), need: 50 });
    }
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for w in window.windows(3) {
        let s1 = w[1] - w[0];
        let s2 = w[2] - w[1];
        if s1 > 0.0 && s2 > 0.0 {
            sum += s1.min(s2) / s1.max(s2);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::TooFewLevels { have: 0, need: 1 });
    }
    Ok(sum / count as f64)
}

/// Wigner-Dyson (GOE) surmise `P(s) = (pi s / 2) exp(-pi s^2 / 4)`.
pub fn goe_surmise(s: f64) -> f64 {
    use std::f64::consts::PI;
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

/// CDF of the GOE surmise: `F(s) = 1 - exp(-pi s^2 / 4)`.
pub fn goe_surmise_cdf(s: f64) -> f64 {
    use std::f64::consts::PI;
    1.0 - (-0.25 * PI * s * s).exp()
}

/// Unfolded nearest-neighbor spacings: fit the cumulative staircase of the
/// windowed spectrum with a polynomial, map the levels through the fit,
/// and normalize the spacings to unit mean. The fit degree is reduced
/// automatically when the staircase is rank-deficient.
pub fn unfolded_spacings(
    energies: &[f64],
    unfolding_degree: usize,
    window_fraction: f64,
) -> Result<(Vec<f64>, usize)> {
    let collapsed = collapse_degeneracies(energies);
    let window = central_window(&collapsed, window_fraction);
    if window.len() < 50 {
        return Err(Error::TooFewLevels { have: window.len(), need: 50 });
    }
    let staircase: Vec<f64> = (0..window.len()).map(|i| i as f64 + 0.5).collect();
    let fit = linalg::polyfit(window, &staircase, unfolding_degree)?;
    let unfolded: Vec<f64> = window.iter().map(|&e| fit.eval(e)).collect();
    let mut spacings: Vec<f64> = unfolded
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&s| s > 0.0)
        .collect();
    if spacings.is_empty() {
        return Err(Error::TooFewLevels { have: 0, need: 1 });
    }
    let mean: f64 = spacings.iter().sum::<f64>() / spacings.len() as f64;
    for s in spacings.iter_mut() {
        *s /= mean;
    }
    Ok((spacings, fit.degree))
}

/// Normalized spacing histogram with the GOE surmise sampled on bin
/// centers, plus the Kolmogorov-Smirnov distance of the spacings to the
/// surmise.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpacingHistogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub goe_reference: Vec<f64>,
    pub ks_distance: f64,
    pub n_spacings: usize,
    pub unfolding_degree: usize,
}

/// Histogram of unfolded spacings (`bins` equal-width bins over
/// `[0, max s]`); densities integrate to one.
pub fn spacing_histogram(
    energies: &[f64],
    unfolding_degree: usize,
    bins: usize,
    window_fraction: f64,
) -> Result<SpacingHistogram> {
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".into()));
    }
    let (spacings, degree) = unfolded_spacings(energies, unfolding_degree, window_fraction)?;
    let s_max = spacings.iter().cloned().fold(0.0f64, f64::max).max(1e-12);
    let width = s_max / bins as f64;
    let mut counts = vec![0usize; bins];
    for &s in &spacings {
        let b = ((s / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let n = spacings.len();
    let densities: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (n as f64 * width))
        .collect();
    let bin_edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();
    let goe_reference: Vec<f64> = (0..bins)
        .map(|i| goe_surmise((i as f64 + 0.5) * width))
        .collect();
    Ok(SpacingHistogram {
        bin_edges,
        densities,
        goe_reference,
        ks_distance: ks_distance_to_goe(&spacings),
        n_spacings: n,
        unfolding_degree: degree,
    })
}

/// Kolmogorov-Smirnov distance of a spacing sample to the GOE surmise CDF.
pub fn ks_distance_to_goe(spacings: &[f64]) -> f64 {
    let mut sorted = spacings.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &s) in sorted.iter().enumerate() {
        let f = goe_surmise_cdf(s);
        d = d.max((i as f64 / n - f).abs());
        d = d.max(((i as f64 + 1.0) / n - f).abs());
    }
    d
}

/// Summary emitted as `rstat.json`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralReport {
    pub r_mean: f64,
    pub window: f64,
    pub n_levels: usize,
}

/* Scar identification ********************************************************/

/// Per-eigenstate scar overlaps and flags.
#[derive(Debug, Clone)]
pub struct ScarOverlaps {
    /// Squared norm of each eigenstate's projection onto the scar subspace.
    pub overlaps: Vec<f64>,
    /// `overlap > 0.99`.
    pub flags: Vec<bool>,
}

/// Squared projections of every eigenstate onto the span of the scar
/// states, with energy-degenerate clusters rotated so that scar weight
/// concentrates on as few cluster members as principal angles allow
/// (this makes flags deterministic under degenerate-cluster rotations).
///
/// `scar_states` are given in the same masked basis as the eigenvectors
/// and are orthonormalized here (near-dependent directions dropped).
/// Cluster rotations are applied to `eigen.vectors` in place.
pub fn scar_overlaps(eigen: &mut EigenSystem, scar_states: &[Array1<C64>]) -> Result<ScarOverlaps> {
    let dim = eigen.vectors.nrows();
    let n = eigen.len();
    for s in scar_states {
        if s.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "scar state dim {} vs sector dim {dim}",
                s.len()
            )));
        }
    }
    // orthonormal scar basis via modified Gram-Schmidt
    let mut basis: Vec<Array1<C64>> = Vec::new();
    for s in scar_states {
        let mut v = s.clone();
        for b in &basis {
            let ip: C64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
            v.zip_mut_with(b, |vi, bi| *vi -= ip * bi);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.mapv_inplace(|z| z / norm);
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return Ok(ScarOverlaps { overlaps: vec![0.0; n], flags: vec![false; n] });
    }

    // degenerate clusters by the same relative tolerance as the collapse
    let bandwidth = (eigen.energies[n - 1] - eigen.energies[0]).max(f64::MIN_POSITIVE);
    let tol = DEGENERACY_COLLAPSE_REL * bandwidth;
    let mut overlaps = vec![0.0f64; n];
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && eigen.energies[end] - eigen.energies[end - 1] <= tol {
            end += 1;
        }
        let cluster = end - start;
        // M = S^dag V_cluster (k x cluster)
        let k = basis.len();
        let mut m = Array2::<C64>::zeros((k, cluster));
        for (bi, b) in basis.iter().enumerate() {
            for ci in 0..cluster {
                let col = eigen.vectors.column(start + ci);
                let ip: C64 = b.iter().zip(col.iter()).map(|(x, y)| x.conj() * y).sum();
                m[(bi, ci)] = ip;
            }
        }
        if cluster == 1 {
            overlaps[start] = m.column(0).iter().map(|z| z.norm_sqr()).sum();
        } else {
            // rotate the cluster by the full right singular basis of M
            let (_, sigma, w) = linalg::svd_complex_full(&m)?;
            let mut rotated = Array2::<C64>::zeros((dim, cluster));
            for new in 0..cluster {
                for old in 0..cluster {
                    let wv = w[(old, new)];
                    if wv.norm() == 0.0 {
                        continue;
                    }
                    for row in 0..dim {
                        rotated[(row, new)] += eigen.vectors[(row, start + old)] * wv;
                    }
                }
            }
            for ci in 0..cluster {
                for row in 0..dim {
                    eigen.vectors[(row, start + ci)] = rotated[(row, ci)];
                }
                overlaps[start + ci] = if ci < sigma.len() {
                    sigma[ci] * sigma[ci]
                } else {
                    0.0
                };
            }
        }
        start = end;
    }
    let flags = overlaps.iter().map(|&o| o > 0.99).collect();
    Ok(ScarOverlaps { overlaps, flags })
}

/// Expectation value of a per-label diagonal observable (e.g. total `S^z`)
/// in a sector eigenvector.
pub fn diagonal_expectation(
    vector: ndarray::ArrayView1<C64>,
    sector_indices: &[usize],
    basis: &BasisIndex,
    label_weights: &[f64],
) -> Result<f64> {
    if vector.len() != sector_indices.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector dim {} vs sector size {}",
            vector.len(),
            sector_indices.len()
        )));
    }
    let l = basis.chain_length();
    let mut string = vec![0u8; l];
    let mut acc = 0.0f64;
    for (amp, &full_idx) in vector.iter().zip(sector_indices) {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        basis.decode_into(full_idx, &mut string)?;
        let w: f64 = string.iter().map(|&c| label_weights[(c - 1) as usize]).sum();
        acc += p * w;
    }
    Ok(acc)
}

/// Scatter a sector vector back into the full Hilbert space.
pub fn scatter_to_full(
    vector: ndarray::ArrayView1<C64>,
    sector_indices: &[usize],
    full_dim: usize,
) -> StateVector {
    let mut amps = Array1::<C64>::zeros(full_dim);
    for (amp, &idx) in vector.iter().zip(sector_indices) {
        amps[idx] = *amp;
    }
    StateVector::new(amps)
}

/// Restrict a full-space state to a sector mask, returning the masked
/// amplitudes and the weight lost outside the mask.
pub fn restrict_to_sector(
    state: &StateVector,
    sector_indices: &[usize],
) -> (Array1<C64>, f64) {
    let mut amps = Array1::<C64>::zeros(sector_indices.len());
    let mut captured = 0.0f64;
    for (k, &idx) in sector_indices.iter().enumerate() {
        let a = state.amplitudes()[idx];
        amps[k] = a;
        captured += a.norm_sqr();
    }
    let lost = (state.norm().powi(2) - captured).max(0.0);
    (amps, lost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragmentation::spin_half_xxz_dense;
    use crate::linalg::tests_support::SplitMix;

    /// Sylvester-inertia eigenvalue oracle for small Hermitian matrices:
    /// the number of eigenvalues below `x` equals the number of negative
    /// pivots in the LDL* elimination of `H - x I`; bisection between
    /// Gershgorin bounds then pins every eigenvalue, counting multiplicity.
    /// Independent of the faer solver path.
    fn inertia_eigenvalues(h: &Array2<C64>) -> Vec<f64> {
        let n = h.nrows();
        let count_below = |x: f64| -> usize {
            let mut a = h.clone();
            for i in 0..n {
                a[(i, i)] -= C64::new(x, 0.0);
            }
            let mut negatives = 0usize;
            for k in 0..n {
                let mut pivot = a[(k, k)].re;
                if pivot.abs() < 1e-300 {
                    pivot = 1e-300; // exact hit; jittered by the caller's grid
                }
                if pivot < 0.0 {
                    negatives += 1;
                }
                for i in k + 1..n {
                    let f = a[(i, k)] / C64::new(pivot, 0.0);
                    for j in k + 1..=i {
                        let update = f * a[(j, k)].conj();
                        a[(i, j)] -= update;
                    }
                }
            }
            negatives
        };
        // Gershgorin bounds
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let center = h[(i, i)].re;
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| h[(i, j)].norm()).sum();
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        lo -= 1e-6;
        hi += 1e-6;
        (0..n)
            .map(|k| {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if count_below(mid) >= k + 1 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    #[test]
    fn pauli_x_eigensolve() {
        let mut h = Array2::<C64>::zeros((2, 2));
        h[(0, 1)] = C64::new(1.0, 0.0);
        h[(1, 0)] = C64::new(1.0, 0.0);
        let eig = eigensolve_dense(&h).unwrap();
        assert!((eig.energies[0] + 1.0).abs() < 1e-12);
        assert!((eig.energies[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xxz_sz_zero_sector_matches_inertia_oracle() {
        // XXZ L=4 restricted to the 6-dimensional S^z = 0 sector.
        let l = 4;
        let gamma = 0.6;
        let full = spin_half_xxz_dense(l, gamma);
        let indices: Vec<usize> = (0..16)
            .filter(|&i: &usize| (i as u32).count_ones() == 2)
            .collect();
        let mut sector = Array2::<C64>::zeros((6, 6));
        for (r, &ir) in indices.iter().enumerate() {
            for (c, &ic) in indices.iter().enumerate() {
                sector[(r, c)] = full[(ir, ic)];
            }
        }
        let eig = eigensolve_dense(&sector).unwrap();
        let mut oracle = inertia_eigenvalues(&sector);
        oracle.sort_by(f64::total_cmp);
        assert_eq!(oracle.len(), 6, "oracle must find all six roots");
        for (a, b) in eig.energies.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "eigenvalue {a} vs oracle {b}");
        }
        // eigenvector orthonormality
        let v = &eig.vectors;
        let mut dev = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                let mut ip = C64::new(0.0, 0.0);
                for k in 0..6 {
                    ip += v[(k, i)].conj() * v[(k, j)];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((ip - C64::new(want, 0.0)).norm());
            }
        }
        assert!(dev < 1e-10);
    }

    #[test]
    fn trace_identity() {
        let mut rng = SplitMix::new(2);
        let n = 40;
        let mut h = Array2::<C64>::zeros((n, n));
        for i in 0..n {
            for j in 0..=i {
                let z = rng.next_c64();
                if i == j {
                    h[(i, j)] = C64::new(z.re, 0.0);
                } else {
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
        }
        let eig = eigensolve_dense(&h).unwrap();
        let trace: f64 = (0..n).map(|i| h[(i, i)].re).sum();
        let sum: f64 = eig.energies.iter().sum();
        assert!((trace - sum).abs() < 1e-8 * trace.abs().max(1.0));
    }

    #[test]
    fn equally_spaced_ladder_gives_r_one() {
        let energies: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let r = r_statistic(&energies, 0.8).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_spacings_reproduce_known_r() {
        // seeded exponential spacings; <r> = 2 ln 2 - 1
        let mut rng = SplitMix::new(424242);
        let mut energies = Vec::with_capacity(100_000);
        let mut e = 0.0f64;
        for _ in 0..100_000 {
            e += -(1.0 - rng.next_f64()).ln();
            energies.push(e);
        }
        let r = r_statistic(&energies, 0.8).unwrap();
        assert!(
            (r - POISSON_R).abs() < 0.005,
            "Poisson r = {r}, want {POISSON_R} +- 0.005"
        );
    }

    #[test]
    fn r_statistic_affine_invariance() {
        let mut rng = SplitMix::new(8);
        let mut energies = Vec::with_capacity(500);
        let mut e = 0.0f64;
        for _ in 0..500 {
            e += rng.next_f64() + 0.01;
            energies.push(e);
        }
        let r1 = r_statistic(&energies, 0.8).unwrap();
        let scaled: Vec<f64> = energies.iter().map(|&x| 3.7 * x - 11.0).collect();
        let r2 = r_statistic(&scaled, 0.8).unwrap();
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_levels_are_collapsed() {
        let energies = vec![0.0, 0.0, 1.0, 1.0 + 1e-15, 2.0, 3.0];
        let collapsed = collapse_degeneracies(&energies);
        assert_eq!(collapsed.len(), 4);
    }

    #[test]
    fn too_few_levels_is_an_error() {
        let energies: Vec<f64> = (0..30).map(|i| i as f64).collect();
        assert!(matches!(
            r_statistic(&energies, 0.8),
            Err(Error::TooFewLevels { .. })
        ));
    }

    #[test]
    fn goe_surmise_normalized() {
        // trapezoid quadrature over [0, 12]
        let n = 200_000;
        let h = 12.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * goe_surmise(i as f64 * h);
        }
        acc *= h;
        assert!((acc - 1.0).abs() < 1e-9, "surmise integral {acc}");
    }

    #[test]
    fn unfolded_spacings_have_unit_mean_and_histogram_normalizes() {
        let mut rng = SplitMix::new(5);
        let mut energies = Vec::with_capacity(2000);
        let mut e = 0.0f64;
        for i in 0..2000 {
            // slowly varying density plus jitter
            e += 0.5 + 0.3 * (i as f64 / 2000.0) + 0.2 * rng.next_f64();
            energies.push(e);
        }
        let (spacings, _) = unfolded_spacings(&energies, 7, 0.8).unwrap();
        let mean: f64 = spacings.iter().sum::<f64>() / spacings.len() as f64;
        assert!((mean - 1.0).abs() < 1e-6);
        let hist = spacing_histogram(&energies, 7, 40, 0.8).unwrap();
        let integral: f64 = hist
            .densities
            .iter()
            .enumerate()
            .map(|(i, &d)| d * (hist.bin_edges[i + 1] - hist.bin_edges[i]))
            .sum();
        assert!((integral - 1.0).abs() < 1e-6, "histogram integral {integral}");
    }

    #[test]
    fn ks_distance_discriminates_goe_from_poisson() {
        // GOE-sampled spacings via the inverse surmise CDF
        let mut rng = SplitMix::new(77);
        let goe: Vec<f64> = (0..100_000)
            .map(|_| {
                let u: f64 = rng.next_f64();
                (-4.0 * (1.0 - u).ln() / std::f64::consts::PI).sqrt()
            })
            .collect();
        assert!(ks_distance_to_goe(&goe) < 0.01);
        let poisson: Vec<f64> = (0..100_000).map(|_| -(1.0 - rng.next_f64()).ln()).collect();
        assert!(ks_distance_to_goe(&poisson) > 0.2);
    }

    #[test]
    fn scar_overlap_identity_and_haar_mean() {
        // an eigenstate equal to a scar state has overlap one
        let dim = 50;
        let k = 5;
        let mut rng = SplitMix::new(13);
        let mut scars: Vec<Array1<C64>> = Vec::new();
        for _ in 0..k {
            let mut v = Array1::from_shape_fn(dim, |_| rng.next_c64());
            for b in &scars {
                let ip: C64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                v.zip_mut_with(b, |vi, bi| *vi -= ip * bi);
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.mapv_inplace(|z| z / norm);
            scars.push(v);
        }
        let mut vectors = Array2::<C64>::zeros((dim, 2));
        for row in 0..dim {
            vectors[(row, 0)] = scars[0][row];
        }
        // second column: a random orthogonal direction
        let mut v = Array1::from_shape_fn(dim, |_| rng.next_c64());
        let ip: C64 = scars[0].iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        v.zip_mut_with(&scars[0], |vi, bi| *vi -= ip * bi);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for row in 0..dim {
            vectors[(row, 1)] = v[row] / norm;
        }
        let mut eigen = EigenSystem { energies: vec![0.0, 1.0], vectors };
        let result = scar_overlaps(&mut eigen, &scars).unwrap();
        assert!((result.overlaps[0] - 1.0).abs() < 1e-10);
        assert!(result.flags[0]);

        // Haar-random vectors overlap on average by k / dim
        let trials = 600;
        let mut mean = 0.0;
        for _ in 0..trials {
            let mut v = Array1::from_shape_fn(dim, |_| rng.next_c64());
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.mapv_inplace(|z| z / norm);
            let mut vectors = Array2::<C64>::zeros((dim, 1));
            for row in 0..dim {
                vectors[(row, 0)] = v[row];
            }
            let mut eigen = EigenSystem { energies: vec![0.0], vectors };
            let r = scar_overlaps(&mut eigen, &scars).unwrap();
            mean += r.overlaps[0];
        }
        mean /= trials as f64;
        let expect = k as f64 / dim as f64;
        assert!(
            (mean - expect).abs() < 0.02,
            "Haar mean overlap {mean}, want ~{expect}"
        );
    }

    #[test]
    fn degenerate_cluster_rotation_concentrates_overlap() {
        // two degenerate eigenvectors each with 50% scar weight rotate to
        // one scarred and one thermal direction
        let dim = 8;
        let mut scar = Array1::<C64>::zeros(dim);
        scar[0] = C64::new(1.0, 0.0);
        let mut thermal = Array1::<C64>::zeros(dim);
        thermal[1] = C64::new(1.0, 0.0);
        let r = 1.0 / 2.0f64.sqrt();
        let mut vectors = Array2::<C64>::zeros((dim, 2));
        for row in 0..dim {
            vectors[(row, 0)] = (scar[row] + thermal[row]) * C64::new(r, 0.0);
            vectors[(row, 1)] = (scar[row] - thermal[row]) * C64::new(r, 0.0);
        }
        let mut eigen = EigenSystem { energies: vec![1.0, 1.0], vectors };
        let result = scar_overlaps(&mut eigen, &[scar]).unwrap();
        let mut sorted = result.overlaps.clone();
        sorted.sort_by(f64::total_cmp);
        assert!(sorted[0] < 1e-10, "thermal direction must lose all weight");
        assert!((sorted[1] - 1.0).abs() < 1e-10, "scar direction must take all weight");
        assert_eq!(result.flags.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn diagonal_expectation_counts_labels() {
        let basis = BasisIndex::new(3, 2).unwrap();
        let indices: Vec<usize> = vec![
            basis.encode(&[2, 2]).unwrap(),
            basis.encode(&[2, 3]).unwrap(),
        ];
        let weights = [0.0, 1.0, -1.0];
        let amps = Array1::from_vec(vec![
            C64::new(1.0 / 2.0f64.sqrt(), 0.0),
            C64::new(0.0, 1.0 / 2.0f64.sqrt()),
        ]);
        let sz = diagonal_expectation(amps.view(), &indices, &basis, &weights).unwrap();
        // |22> has Sz = 2, |23> has Sz = 0; each with weight 1/2
        assert!((sz - 1.0).abs() < 1e-14);
    }
}

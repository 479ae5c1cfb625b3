//! Bipartite von Neumann entropy: the numerical Schmidt-decomposition
//! path for arbitrary states, the analytic reduced-density-matrix formula
//! for `N = 3` scar states, and logarithmic scaling fits.
//!
//! The analytic path works entirely in log-factorial arithmetic, so it
//! reaches chain lengths far beyond any state vector (the scaling fits go
//! to `L = 3072`).

use crate::hilbert::StateVector;
use crate::{linalg, Error, Result};
use ndarray::Array2;

/// Schmidt coefficients below this are dropped from the entropy sum.
const SCHMIDT_DROP_TOL: f64 = 1e-14;

/// Result of the numerical entropy path.
#[derive(Debug, Clone, Copy)]
pub struct EntropyValue {
    pub value: f64,
    /// Set when the input norm deviated from one by more than 1e-10 and
    /// the state was normalized internally.
    pub renormalized: bool,
}

/// Von Neumann entropy of the contiguous left block of `l_a` sites,
/// via singular values of the reshaped amplitude matrix.
pub fn bipartite_entropy(state: &StateVector, l_a: usize, local_dim: usize) -> Result<EntropyValue> {
    let dim = state.dim();
    let mut l = 0usize;
    let mut check = 1usize;
    while check < dim {
        check *= local_dim;
        l += 1;
    }
    if check != dim {
        return Err(Error::DimensionMismatch(format!(
            "state dim {dim} is not a power of local dim {local_dim}"
        )));
    }
    if l_a == 0 || l_a >= l {
        return Err(Error::InvalidArgument(format!(
            "cut {l_a} outside 1..{l}"
        )));
    }
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero state".into()));
    }
    let renormalized = (norm - 1.0).abs() > 1e-10;
    let rows = local_dim.pow(l_a as u32);
    let cols = dim / rows;
    let amps = state.amplitudes();
    let mat = Array2::from_shape_fn((rows, cols), |(r, c)| amps[r * cols + c] / norm);
    let sigma = linalg::singular_values(&mat)?;
    let mut entropy = 0.0f64;
    for &s in &sigma {
        if s > SCHMIDT_DROP_TOL {
            let p = s * s;
            entropy -= p * p.ln();
        }
    }
    Ok(EntropyValue { value: entropy, renormalized })
}

/* Log-factorial combinatorics *************************************************/

/// Table of `ln(k!)` with compensated summation.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn up_to(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in 1..=max {
            // Kahan step keeps the cumulative error at the ulp level even
            // for tables thousands of entries long
            let term = (k as f64).ln() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
            table.push(sum);
        }
        Self { table }
    }

    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// `ln C(n, k)`.
    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        self.get(n) - self.get(k) - self.get(n - k)
    }

    /// `ln N(m2, m3; L)` with `N = m2! m3! L! / (L - m2 - m3)!`, the squared
    /// norm of the raising-operator construction of a scar state.
    pub fn ln_scar_norm(&self, m2: usize, m3: usize, l: usize) -> f64 {
        self.get(m2) + self.get(m3) + self.get(l) - self.get(l - m2 - m3)
    }
}

/// Reduced-density-matrix eigenvalues of the scar state `|S_{m1,m2,m3}>`
/// for a left block of `l_a` sites:
/// `lambda_{k2,k3} = N(k2,k3;L_A) N(m2-k2,m3-k3;L-L_A) / N(m2,m3;L)
///                   * C(m2,k2)^2 C(m3,k3)^2`
/// over the admissible `(k2, k3)` window.
pub fn scar_rdm_eigenvalues(
    m2: usize,
    m3: usize,
    l: usize,
    l_a: usize,
) -> Result<Vec<f64>> {
    if m2 + m3 > l {
        return Err(Error::InvalidArgument(format!(
            "m2 + m3 = {} exceeds L = {l}",
            m2 + m3
        )));
    }
    if l_a == 0 || l_a >= l {
        return Err(Error::InvalidArgument(format!("cut {l_a} outside 1..{l}")));
    }
    let lf = LnFactorials::up_to(l);
    let l_b = l - l_a;
    let ln_norm = lf.ln_scar_norm(m2, m3, l);
    let mut lambdas = Vec::new();
    let k2_lo = m2.saturating_sub(l_b);
    let k2_hi = m2.min(l_a);
    for k2 in k2_lo..=k2_hi {
        let k3_lo = (m2 + m3).saturating_sub(l_b + k2);
        let k3_hi = m3.min(l_a - k2);
        if k3_lo > k3_hi {
            continue;
        }
        for k3 in k3_lo..=k3_hi {
            let ln_lambda = lf.ln_scar_norm(k2, k3, l_a)
                + lf.ln_scar_norm(m2 - k2, m3 - k3, l_b)
                - ln_norm
                + 2.0 * lf.ln_choose(m2, k2)
                + 2.0 * lf.ln_choose(m3, k3);
            lambdas.push(ln_lambda.exp());
        }
    }
    let total: f64 = lambdas.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::VerificationFailed(format!(
            "RDM eigenvalues sum to {total}, not 1"
        )));
    }
    Ok(lambdas)
}

/// Analytic entropy `-sum lambda ln lambda` of a scar state, in
/// log-factorial arithmetic. The eigenvalue sum is verified against one
/// to 1e-10.
pub fn scar_entropy_analytic(m2: usize, m3: usize, l: usize, l_a: usize) -> Result<f64> {
    let lambdas = scar_rdm_eigenvalues(m2, m3, l, l_a)?;
    let mut entropy = 0.0f64;
    for &lam in &lambdas {
        if lam > 1e-300 {
            entropy -= lam * lam.ln();
        }
    }
    Ok(entropy)
}

/* Scaling fits ****************************************************************/

/// Exact occupation fraction `num/den` per label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Fraction {
    pub num: usize,
    pub den: usize,
}

impl Fraction {
    pub fn of(&self, l: usize) -> Option<usize> {
        if self.den == 0 || (l * self.num) % self.den != 0 {
            None
        } else {
            Some(l * self.num / self.den)
        }
    }
}

/// Parse `"1/3,1/3,1/3"` into three fractions.
pub fn parse_fractions(text: &str) -> Result<[Fraction; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "need three comma-separated fractions, got '{text}'"
        )));
    }
    let mut out = [Fraction { num: 0, den: 1 }; 3];
    for (i, part) in parts.iter().enumerate() {
        let (num, den) = match part.split_once('/') {
            Some((n, d)) => (n.trim().parse(), d.trim().parse()),
            None => (part.trim().parse(), Ok(1)),
        };
        match (num, den) {
            (Ok(n), Ok(d)) if d > 0 => out[i] = Fraction { num: n, den: d },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "bad fraction '{part}'"
                )))
            }
        }
    }
    Ok(out)
}

/// Entropy-vs-system-size data with its logarithmic fit.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EntropyCurve {
    /// `(L, S_ent)` points (analytic path, half-chain cut).
    pub points: Vec<(usize, f64)>,
    /// Slope of `S` against `ln L`.
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

/// Analytic half-chain entropies of `|S_{m}>` with `m = fractions * L`
/// over the given lengths, fitted against `ln L`.
pub fn entropy_scaling(fractions: &[Fraction; 3], l_list: &[usize]) -> Result<EntropyCurve> {
    if l_list.len() < 2 {
        return Err(Error::InvalidArgument("need at least two lengths".into()));
    }
    if l_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("lengths must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(l_list.len());
    for &l in l_list {
        if l % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "half-chain cut needs even L, got {l}"
            )));
        }
        let m: Vec<usize> = fractions
            .iter()
            .map(|f| {
                f.of(l).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "L = {l} is not divisible by fraction {}/{}",
                        f.num, f.den
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if m.iter().sum::<usize>() != l {
            return Err(Error::InvalidArgument(format!(
                "fractions do not fill the chain at L = {l}"
            )));
        }
        let s = scar_entropy_analytic(m[1], m[2], l, l / 2)?;
        points.push((l, s));
    }
    let x: Vec<f64> = points.iter().map(|&(l, _)| (l as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|&(_, s)| s).collect();
    let (slope, intercept, rms_residual) = linalg::linear_fit(&x, &y)?;
    Ok(EntropyCurve { points, slope, intercept, rms_residual })
}

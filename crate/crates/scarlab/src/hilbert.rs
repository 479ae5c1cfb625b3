//! Basis-string indexing, local operators, sparse chain operators, and
//! state vectors.
//!
//! Basis convention: a chain of `L` sites with local dimension `N` has
//! computational basis strings `(c_1, ..., c_L)` with labels `c_j in 1..=N`.
//! Site 1 is the most significant digit in base `N`, so
//! `index = sum_j (c_j - 1) * N^(L - j)`. Site indices are 1-based
//! everywhere in the public interface; phase factors downstream use
//! `(j - 1)` exactly.

use crate::{C64, Error, Result};
use ndarray::{Array1, Array2};

/// Entries with modulus below this are dropped from sparse storage.
pub const SPARSE_DROP_TOL: f64 = 1e-14;

/// Tolerance for Hermiticity assertions on constructed operators.
pub const HERMITICITY_TOL: f64 = 1e-12;

/* Basis indexing *************************************************************/

/// Bijection between basis strings and indices `0..N^L - 1`, with an
/// optional mask selecting a subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisIndex {
    n: usize,
    l: usize,
    dim: usize,
    mask: Option<Vec<usize>>,
}

impl BasisIndex {
    /// Full product basis for local dimension `n >= 2` on `l >= 1` sites.
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("local dimension {n} < 2")));
        }
        if l < 1 {
            return Err(Error::InvalidArgument("chain length must be >= 1".into()));
        }
        let dim = n
            .checked_pow(l as u32)
            .ok_or_else(|| Error::InvalidArgument(format!("{n}^{l} overflows usize")))?;
        Ok(Self { n, l, dim, mask: None })
    }

    /// Restrict to a masked subspace. Indices must be strictly increasing,
    /// duplicate-free, and within range.
    pub fn with_mask(mut self, mask: Vec<usize>) -> Result<Self> {
        for w in mask.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidArgument(
                    "mask must be strictly increasing and duplicate-free".into(),
                ));
            }
        }
        if let Some(&last) = mask.last() {
            if last >= self.dim {
                return Err(Error::IndexOutOfRange(format!(
                    "mask entry {last} >= dimension {}",
                    self.dim
                )));
            }
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn local_dim(&self) -> usize {
        self.n
    }

    pub fn chain_length(&self) -> usize {
        self.l
    }

    /// Dimension of the full product space `N^L` (ignores the mask).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mask(&self) -> Option<&[usize]> {
        self.mask.as_deref()
    }

    /// Dimension of the masked subspace, or the full dimension without a mask.
    pub fn masked_dim(&self) -> usize {
        self.mask.as_ref().map_or(self.dim, Vec::len)
    }

    /// Index of a basis string; labels are 1-based.
    pub fn encode(&self, string: &[u8]) -> Result<usize> {
        if string.len() != self.l {
            return Err(Error::DimensionMismatch(format!(
                "string length {} != chain length {}",
                string.len(),
                self.l
            )));
        }
        let mut idx = 0usize;
        for &c in string {
            if c == 0 || c as usize > self.n {
                return Err(Error::IndexOutOfRange(format!(
                    "label {c} outside 1..={}",
                    self.n
                )));
            }
            idx = idx * self.n + (c as usize - 1);
        }
        Ok(idx)
    }

    /// Basis string for an index; inverse of [`encode`](Self::encode).
    pub fn decode(&self, index: usize) -> Result<Vec<u8>> {
        let mut string = vec![0u8; self.l];
        self.decode_into(index, &mut string)?;
        Ok(string)
    }

    /// Decode into a caller-provided buffer of length `L`.
    pub fn decode_into(&self, index: usize, out: &mut [u8]) -> Result<()> {
        if index >= self.dim {
            return Err(Error::IndexOutOfRange(format!(
                "index {index} >= dimension {}",
                self.dim
            )));
        }
        if out.len() != self.l {
            return Err(Error::DimensionMismatch("decode buffer length".into()));
        }
        let mut rem = index;
        for site in (0..self.l).rev() {
            out[site] = (rem % self.n) as u8 + 1;
            rem /= self.n;
        }
        Ok(())
    }

    /// Label at `site` (1-based) of the string with the given index,
    /// without decoding the whole string.
    pub fn label_at(&self, index: usize, site: usize) -> u8 {
        debug_assert!(site >= 1 && site <= self.l);
        let shift = self.n.pow((self.l - site) as u32);
        (index / shift % self.n) as u8 + 1
    }
}

/* Local operators ************************************************************/

/// Dense complex matrix acting on `k` adjacent sites of local dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    d: usize,
    k: usize,
    mat: Array2<C64>,
}

impl LocalOperator {
    /// Wrap a `d^k x d^k` matrix. Fails if the shape does not match.
    pub fn new(d: usize, k: usize, mat: Array2<C64>) -> Result<Self> {
        let dim = d.pow(k as u32);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix shape {:?} != ({dim}, {dim}) for d={d}, k={k}",
                mat.dim()
            )));
        }
        Ok(Self { d, k, mat })
    }

    pub fn zeros(d: usize, k: usize) -> Self {
        let dim = d.pow(k as u32);
        Self { d, k, mat: Array2::zeros((dim, dim)) }
    }

    pub fn identity(d: usize, k: usize) -> Self {
        let dim = d.pow(k as u32);
        Self { d, k, mat: Array2::eye(dim) }
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    /// Number of adjacent sites the operator acts on.
    pub fn support(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut Array2<C64> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.mat
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut mat = self.mat.t().to_owned();
        mat.mapv_inplace(|z| z.conj());
        Self { d: self.d, k: self.k, mat }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { d: self.d, k: self.k, mat: self.mat.mapv(|z| z * factor) }
    }

    /// Matrix product; both operators must share `d` and `k`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        Ok(Self { d: self.d, k: self.k, mat: self.mat.dot(&rhs.mat) })
    }

    /// Tensor product; `self` acts on the leading (leftmost) sites.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        if self.d != rhs.d {
            return Err(Error::DimensionMismatch(format!(
                "kron of local dims {} and {}",
                self.d, rhs.d
            )));
        }
        let (n1, n2) = (self.dim(), rhs.dim());
        let mut mat = Array2::zeros((n1 * n2, n1 * n2));
        for ((r1, c1), &v1) in self.mat.indexed_iter() {
            if v1.norm() == 0.0 {
                continue;
            }
            for ((r2, c2), &v2) in rhs.mat.indexed_iter() {
                mat[(r1 * n2 + r2, c1 * n2 + c2)] = v1 * v2;
            }
        }
        Ok(Self { d: self.d, k: self.k + rhs.k, mat })
    }

    pub fn max_hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for ((r, c), &v) in self.mat.indexed_iter() {
            dev = dev.max((v - self.mat[(c, r)].conj()).norm());
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_hermiticity_deviation() < tol
    }

    /// Error unless `max|M - M^dag| < 1e-12`.
    pub fn assert_hermitian(&self) -> Result<()> {
        let deviation = self.max_hermiticity_deviation();
        if deviation < HERMITICITY_TOL {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    /// Largest entry modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        let mut dev = 0.0f64;
        for (a, b) in self.mat.iter().zip(rhs.mat.iter()) {
            dev = dev.max((a - b).norm());
        }
        dev
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// For a two-site operator, the operator with its two sites exchanged
    /// (conjugation by SWAP).
    pub fn swapped_sites(&self) -> Result<Self> {
        if self.k != 2 {
            return Err(Error::InvalidArgument(
                "swapped_sites requires a two-site operator".into(),
            ));
        }
        let d = self.d;
        let mut mat = Array2::zeros((d * d, d * d));
        for ((r, c), &v) in self.mat.indexed_iter() {
            let (r1, r2) = (r / d, r % d);
            let (c1, c2) = (c / d, c % d);
            mat[(r2 * d + r1, c2 * d + c1)] = v;
        }
        Ok(Self { d, k: 2, mat })
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.d != rhs.d || self.k != rhs.k {
            return Err(Error::DimensionMismatch(format!(
                "(d={}, k={}) vs (d={}, k={})",
                self.d, self.k, rhs.d, rhs.k
            )));
        }
        Ok(())
    }

    /// JSON form `{d, k, entries: [[[re, im], ...], ...]}` (row-major).
    pub fn to_json(&self) -> serde_json::Value {
        let dim = self.dim();
        let rows: Vec<serde_json::Value> = (0..dim)
            .map(|r| {
                let row: Vec<serde_json::Value> = (0..dim)
                    .map(|c| {
                        let z = self.mat[(r, c)];
                        serde_json::json!([z.re, z.im])
                    })
                    .collect();
                serde_json::Value::Array(row)
            })
            .collect();
        serde_json::json!({ "d": self.d, "k": self.k, "entries": rows })
    }

    /// Parse the format produced by [`to_json`](Self::to_json).
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidArgument(format!("local operator JSON: {msg}"));
        let d = value["d"].as_u64().ok_or_else(|| bad("missing d"))? as usize;
        let k = value["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
        let dim = d
            .checked_pow(k as u32)
            .ok_or_else(|| bad("d^k overflows"))?;
        let rows = value["entries"].as_array().ok_or_else(|| bad("missing entries"))?;
        if rows.len() != dim {
            return Err(bad(&format!("expected {dim} rows, found {}", rows.len())));
        }
        let mut mat = Array2::zeros((dim, dim));
        for (r, row) in rows.iter().enumerate() {
            let cols = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            if cols.len() != dim {
                return Err(bad(&format!("row {r} has {} entries", cols.len())));
            }
            for (c, z) in cols.iter().enumerate() {
                let pair = z.as_array().ok_or_else(|| bad("entry is not [re, im]"))?;
                if pair.len() != 2 {
                    return Err(bad("entry is not [re, im]"));
                }
                let re = pair[0].as_f64().ok_or_else(|| bad("re not a number"))?;
                let im = pair[1].as_f64().ok_or_else(|| bad("im not a number"))?;
                mat[(r, c)] = C64::new(re, im);
            }
        }
        LocalOperator::new(d, k, mat)
    }
}

impl std::ops::Add for &LocalOperator {
    type Output = LocalOperator;
    fn add(self, rhs: &LocalOperator) -> LocalOperator {
        assert_eq!((self.d, self.k), (rhs.d, rhs.k), "local operator shape mismatch");
        LocalOperator { d: self.d, k: self.k, mat: &self.mat + &rhs.mat }
    }
}

impl std::ops::Sub for &LocalOperator {
    type Output = LocalOperator;
    fn sub(self, rhs: &LocalOperator) -> LocalOperator {
        assert_eq!((self.d, self.k), (rhs.d, rhs.k), "local operator shape mismatch");
        LocalOperator { d: self.d, k: self.k, mat: &self.mat - &rhs.mat }
    }
}

/// The standard basis element `|a><b|` as a one-site operator (1-based labels).
pub fn standard_basis_element(d: usize, a: usize, b: usize) -> Result<LocalOperator> {
    if a < 1 || a > d || b < 1 || b > d {
        return Err(Error::IndexOutOfRange(format!(
            "E_{a}{b} outside 1..={d}"
        )));
    }
    let mut op = LocalOperator::zeros(d, 1);
    op.mat[(a - 1, b - 1)] = C64::new(1.0, 0.0);
    Ok(op)
}

/* State vectors **************************************************************/

/// Dense complex amplitude vector over a basis-string index.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Array1<C64>,
    pub label: Option<String>,
}

impl StateVector {
    pub fn new(amps: Array1<C64>) -> Self {
        Self { amps, label: None }
    }

    pub fn from_vec(amps: Vec<C64>) -> Self {
        Self::new(Array1::from_vec(amps))
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(Array1::zeros(dim))
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange(format!("{index} >= {dim}")));
        }
        let mut v = Self::zero(dim);
        v.amps[index] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut Array1<C64> {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|rhs>`, conjugating `self`.
    pub fn dot(&self, rhs: &Self) -> C64 {
        self.amps
            .iter()
            .zip(rhs.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        Self {
            amps: self.amps.mapv(|z| z / n),
            label: self.label.clone(),
        }
    }

    /// `self + factor * rhs`.
    pub fn add_scaled(&self, factor: C64, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "state dimension mismatch");
        Self {
            amps: &self.amps + &rhs.amps.mapv(|z| z * factor),
            label: None,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { amps: self.amps.mapv(|z| z * factor), label: self.label.clone() }
    }
}

/* Many-body operators ********************************************************/

/// Sparse complex operator on the full chain Hilbert space.
///
/// Storage is a canonical coordinate list: entries sorted by `(row, col)`,
/// duplicates merged, moduli below [`SPARSE_DROP_TOL`] dropped. A claimed
/// `hermitian` flag is verified at construction.
#[derive(Debug, Clone)]
pub struct ManyBodyOperator {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
    hermitian: bool,
}

impl ManyBodyOperator {
    /// Build from raw triplets, canonicalizing storage. When
    /// `hermitian = true`, the conjugate-pair property of the canonical
    /// entries is verified.
    pub fn from_triplets(
        dim: usize,
        mut triplets: Vec<(usize, usize, C64)>,
        hermitian: bool,
    ) -> Result<Self> {
        for &(r, c, _) in &triplets {
            if r >= dim || c >= dim {
                return Err(Error::IndexOutOfRange(format!(
                    "entry ({r}, {c}) outside dimension {dim}"
                )));
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|&(_, _, v)| v.norm() >= SPARSE_DROP_TOL);
        let op = Self { dim, entries, hermitian };
        if hermitian {
            let dev = op.max_hermiticity_deviation();
            if dev >= HERMITICITY_TOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
        }
        Ok(op)
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, entries: Vec::new(), hermitian: true }
    }

    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect();
        Self { dim, entries, hermitian: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Largest `|H[r,c] - conj(H[c,r])|` over stored entries.
    pub fn max_hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for &(r, c, v) in &self.entries {
            let vt = self.get(c, r);
            dev = dev.max((v - vt.conj()).norm());
        }
        dev
    }

    /// Entry lookup via binary search over canonical storage.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        match self
            .entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
        {
            Ok(pos) => self.entries[pos].2,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, rhs.dim
            )));
        }
        let mut triplets = self.entries.clone();
        triplets.extend_from_slice(&rhs.entries);
        Self::from_triplets(self.dim, triplets, self.hermitian && rhs.hermitian)
    }

    pub fn scale(&self, factor: C64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (r, c, v * factor))
            .filter(|&(_, _, v)| v.norm() >= SPARSE_DROP_TOL)
            .collect();
        Self {
            dim: self.dim,
            entries,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    /// Sparse matrix–vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs state dim {}",
                self.dim,
                v.dim()
            )));
        }
        let amps = v.amplitudes();
        let mut out = Array1::<C64>::zeros(self.dim);
        for &(r, c, val) in &self.entries {
            out[r] += val * amps[c];
        }
        Ok(StateVector::new(out))
    }

    /// Dense conversion, guarded by a dimension cap.
    pub fn to_dense(&self, cap: usize) -> Result<Array2<C64>> {
        if self.dim > cap {
            return Err(Error::DenseCapExceeded { dim: self.dim, cap });
        }
        let mut mat = Array2::zeros((self.dim, self.dim));
        for &(r, c, v) in &self.entries {
            mat[(r, c)] = v;
        }
        Ok(mat)
    }

    /// Restriction to a masked index set (sorted, duplicate-free), reindexed
    /// to `0..mask.len()`. Returns the restricted operator together with the
    /// largest modulus among entries coupling the mask to its complement
    /// (zero exactly when the subspace is invariant).
    pub fn restrict(&self, mask: &[usize]) -> Result<(Self, f64)> {
        let pos = |idx: usize| mask.binary_search(&idx).ok();
        let mut triplets = Vec::new();
        let mut leakage = 0.0f64;
        for &(r, c, v) in &self.entries {
            match (pos(r), pos(c)) {
                (Some(pr), Some(pc)) => triplets.push((pr, pc, v)),
                (None, Some(_)) | (Some(_), None) => leakage = leakage.max(v.norm()),
                (None, None) => {}
            }
        }
        let op = Self::from_triplets(mask.len(), triplets, false)?;
        Ok((
            Self { hermitian: self.hermitian, ..op },
            leakage,
        ))
    }

    pub fn trace(&self) -> C64 {
        self.entries
            .iter()
            .filter(|&&(r, c, _)| r == c)
            .map(|&(_, _, v)| v)
            .sum()
    }
}

/// Sparse matrix–vector product; free-function form of
/// [`ManyBodyOperator::apply`].
pub fn apply(op: &ManyBodyOperator, v: &StateVector) -> Result<StateVector> {
    op.apply(v)
}

/* Embedding ******************************************************************/

/// Embed a `k`-site operator into an `L`-site periodic or open chain as a
/// sparse operator. The operator's first tensor factor acts on chain site
/// `first_site` (1-based), subsequent factors on increasing positions,
/// wrapping around the boundary when `periodic`.
pub fn embed(
    op: &LocalOperator,
    first_site: usize,
    l: usize,
    periodic: bool,
) -> Result<ManyBodyOperator> {
    let d = op.local_dim();
    let k = op.support();
    if k > l {
        return Err(Error::InvalidArgument(format!(
            "support {k} exceeds chain length {l}"
        )));
    }
    if first_site < 1 || first_site > l {
        return Err(Error::IndexOutOfRange(format!(
            "first_site {first_site} outside 1..={l}"
        )));
    }
    if first_site + k - 1 > l && !periodic {
        return Err(Error::InvalidArgument(format!(
            "support {first_site}..{} exceeds chain without periodic boundary",
            first_site + k - 1
        )));
    }
    let dim = d.pow(l as u32);
    // Chain sites covered by each tensor factor, and their base-d weights in
    // the string index (site 1 most significant).
    let sites: Vec<usize> = (0..k).map(|t| (first_site - 1 + t) % l).collect();
    let weights: Vec<usize> = sites.iter().map(|&s| d.pow((l - 1 - s) as u32)).collect();

    // Nonzero pattern of the local matrix, column-major.
    let ldim = op.dim();
    let mat = op.matrix();
    let mut cols: Vec<Vec<(usize, C64)>> = vec![Vec::new(); ldim];
    for ((r, c), &v) in mat.indexed_iter() {
        if v.norm() >= SPARSE_DROP_TOL {
            cols[c].push((r, v));
        }
    }

    // Enumerate rest-configurations via the complement weights.
    let rest_sites: Vec<usize> = (0..l).filter(|s| !sites.contains(s)).collect();
    let rest_weights: Vec<usize> = rest_sites
        .iter()
        .map(|&s| d.pow((l - 1 - s) as u32))
        .collect();
    let rest_count = d.pow(rest_sites.len() as u32);

    let local_offset = |conf: usize, weights: &[usize]| -> usize {
        // conf is a base-d number whose digits (most significant first)
        // address the tensor factors in order.
        let mut off = 0usize;
        let mut rem = conf;
        for t in (0..weights.len()).rev() {
            off += (rem % d) * weights[t];
            rem /= d;
        }
        off
    };

    let mut triplets = Vec::new();
    for rest in 0..rest_count {
        let rest_off = local_offset(rest, &rest_weights);
        for (c, col) in cols.iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let col_idx = rest_off + local_offset(c, &weights);
            for &(r, v) in col {
                let row_idx = rest_off + local_offset(r, &weights);
                triplets.push((row_idx, col_idx, v));
            }
        }
    }
    ManyBodyOperator::from_triplets(dim, triplets, false)
}

/// Sum of `embed(op, j)` over all `L` bonds of a periodic chain.
pub fn embed_sum(op: &LocalOperator, l: usize) -> Result<ManyBodyOperator> {
    let mut acc = ManyBodyOperator::zero(op.local_dim().pow(l as u32));
    for j in 1..=l {
        acc = acc.add(&embed(op, j, l, true)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn encode_decode_roundtrip_small_n_l() {
        for n in 2..=4usize {
            for l in 1..=6usize {
                if n.pow(l as u32) > 5000 {
                    continue;
                }
                let basis = BasisIndex::new(n, l).unwrap();
                for i in 0..basis.dim() {
                    let s = basis.decode(i).unwrap();
                    assert_eq!(basis.encode(&s).unwrap(), i);
                    for site in 1..=l {
                        assert_eq!(basis.label_at(i, site), s[site - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn site_one_is_most_significant() {
        let basis = BasisIndex::new(3, 2).unwrap();
        // (c1, c2) = (2, 1) -> (2-1)*3 + (1-1) = 3
        assert_eq!(basis.encode(&[2, 1]).unwrap(), 3);
        assert_eq!(basis.decode(3).unwrap(), vec![2, 1]);
    }

    #[test]
    fn mask_must_be_sorted() {
        let basis = BasisIndex::new(2, 2).unwrap();
        assert!(basis.clone().with_mask(vec![0, 2, 1]).is_err());
        assert!(basis.clone().with_mask(vec![1, 1]).is_err());
        assert!(basis.with_mask(vec![0, 3]).is_ok());
    }

    #[test]
    fn standard_basis_element_examples() {
        // (2, 1, 1) -> diag(1, 0)
        let e11 = standard_basis_element(2, 1, 1).unwrap();
        assert_eq!(e11.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(e11.matrix()[(1, 1)], c(0.0, 0.0));
        // (2, 1, 2) -> single 1 at row 1, col 2
        let e12 = standard_basis_element(2, 1, 2).unwrap();
        assert_eq!(e12.matrix()[(0, 1)], c(1.0, 0.0));
        assert_eq!(e12.matrix().iter().map(|z| z.norm()).sum::<f64>(), 1.0);
        // E_23 E_32 = E_22 for d = 3
        let e23 = standard_basis_element(3, 2, 3).unwrap();
        let e32 = standard_basis_element(3, 3, 2).unwrap();
        let e22 = standard_basis_element(3, 2, 2).unwrap();
        assert!(e23.matmul(&e32).unwrap().max_abs_diff(&e22) < 1e-15);
        // out of range
        assert!(standard_basis_element(2, 0, 1).is_err());
        assert!(standard_basis_element(2, 1, 3).is_err());
    }

    #[test]
    fn embed_identity_is_identity() {
        let id = LocalOperator::identity(2, 1);
        for site in 1..=3 {
            let op = embed(&id, site, 3, true).unwrap();
            let dense = op.to_dense(100).unwrap();
            for i in 0..8 {
                for j in 0..8 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dense[(i, j)] - c(want, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn embed_raising_operator_on_two_sites() {
        // |up><down| at site 1 of L=2 maps |down,down> to |up,down>.
        // labels: 1 = up, 2 = down.
        let raise = standard_basis_element(2, 1, 2).unwrap();
        let op = embed(&raise, 1, 2, false).unwrap();
        let basis = BasisIndex::new(2, 2).unwrap();
        let dd = basis.encode(&[2, 2]).unwrap();
        let ud = basis.encode(&[1, 2]).unwrap();
        let v = StateVector::basis_state(4, dd).unwrap();
        let out = op.apply(&v).unwrap();
        assert!((out.amplitudes()[ud] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out.norm() - 1.0 < 1e-15);
    }

    #[test]
    fn embed_swap_across_boundary() {
        // SWAP embedded at site 2 of L=2 (periodic, acting on (2,1)) equals
        // SWAP embedded at site 1 with its tensor factors exchanged.
        let d = 2;
        let mut swap = LocalOperator::zeros(d, 2);
        for a in 0..d {
            for b in 0..d {
                swap.matrix_mut()[(b * d + a, a * d + b)] = c(1.0, 0.0);
            }
        }
        let wrapped = embed(&swap, 2, 2, true).unwrap().to_dense(16).unwrap();
        let direct = embed(&swap.swapped_sites().unwrap(), 1, 2, false)
            .unwrap()
            .to_dense(16)
            .unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((wrapped[(i, j)] - direct[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn embed_without_periodic_flag_errors_at_boundary() {
        let op = LocalOperator::identity(2, 2);
        assert!(embed(&op, 3, 3, false).is_err());
        assert!(embed(&op, 3, 3, true).is_ok());
    }

    #[test]
    fn embed_distributes_over_addition_and_scaling() {
        let e12 = standard_basis_element(3, 1, 2).unwrap();
        let e31 = standard_basis_element(3, 3, 1).unwrap();
        let a = e12.kron(&e31).unwrap();
        let b = e31.kron(&e12).unwrap();
        let sum = &a + &b;
        let lhs = embed(&sum, 2, 3, true).unwrap().to_dense(27).unwrap();
        let rhs_a = embed(&a, 2, 3, true).unwrap().to_dense(27).unwrap();
        let rhs_b = embed(&b, 2, 3, true).unwrap().to_dense(27).unwrap();
        let rhs = rhs_a + rhs_b;
        let dev = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-14);

        let scaled = a.scale(c(0.3, -0.7));
        let lhs = embed(&scaled, 1, 3, true).unwrap().to_dense(27).unwrap();
        let rhs = embed(&a, 1, 3, true).unwrap().to_dense(27).unwrap() * c(0.3, -0.7);
        let dev = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-14);
    }

    #[test]
    fn disjoint_embeddings_commute() {
        // Random-ish fixed operators on disjoint supports commute.
        let mut rng = crate::linalg::tests_support::SplitMix::new(7);
        for _ in 0..5 {
            let a = crate::linalg::tests_support::random_local(&mut rng, 2, 1);
            let b = crate::linalg::tests_support::random_local(&mut rng, 2, 1);
            let l = 5;
            let ea = embed(&a, 2, l, true).unwrap().to_dense(64).unwrap();
            let eb = embed(&b, 4, l, true).unwrap().to_dense(64).unwrap();
            let comm = ea.dot(&eb) - eb.dot(&ea);
            let dev = comm.iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-13, "disjoint supports must commute, dev = {dev}");
        }
    }

    #[test]
    fn apply_matches_dense_oracle() {
        let mut rng = crate::linalg::tests_support::SplitMix::new(11);
        let dim = 64;
        // random sparse operator
        let mut triplets = Vec::new();
        for _ in 0..200 {
            let r = (rng.next_f64() * dim as f64) as usize % dim;
            let cix = (rng.next_f64() * dim as f64) as usize % dim;
            triplets.push((r, cix, c(rng.next_f64() - 0.5, rng.next_f64() - 0.5)));
        }
        let op = ManyBodyOperator::from_triplets(dim, triplets, false).unwrap();
        let dense = op.to_dense(dim).unwrap();
        let v = StateVector::from_vec(
            (0..dim)
                .map(|_| c(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect(),
        );
        let sparse_out = op.apply(&v).unwrap();
        // dense oracle product
        let mut dense_out = vec![c(0.0, 0.0); dim];
        for r in 0..dim {
            for k in 0..dim {
                dense_out[r] += dense[(r, k)] * v.amplitudes()[k];
            }
        }
        for r in 0..dim {
            assert!((sparse_out.amplitudes()[r] - dense_out[r]).norm() < 1e-13);
        }
    }

    #[test]
    fn apply_is_linear() {
        let dim = 16;
        let mut rng = crate::linalg::tests_support::SplitMix::new(3);
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        for _ in 0..40 {
            let r = (rng.next_f64() * dim as f64) as usize % dim;
            let cix = (rng.next_f64() * dim as f64) as usize % dim;
            t1.push((r, cix, c(rng.next_f64() - 0.5, 0.0)));
            let r = (rng.next_f64() * dim as f64) as usize % dim;
            let cix = (rng.next_f64() * dim as f64) as usize % dim;
            t2.push((r, cix, c(0.0, rng.next_f64() - 0.5)));
        }
        let a = ManyBodyOperator::from_triplets(dim, t1, false).unwrap();
        let b = ManyBodyOperator::from_triplets(dim, t2, false).unwrap();
        let v = StateVector::from_vec((0..dim).map(|_| c(rng.next_f64(), rng.next_f64())).collect());
        let lhs = a.add(&b).unwrap().apply(&v).unwrap();
        let rhs = a.apply(&v).unwrap().add_scaled(c(1.0, 0.0), &b.apply(&v).unwrap());
        for i in 0..dim {
            assert!((lhs.amplitudes()[i] - rhs.amplitudes()[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_apply_is_identity() {
        let v = StateVector::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.9)]);
        let id = ManyBodyOperator::identity(2);
        let out = id.apply(&v).unwrap();
        for i in 0..2 {
            assert_eq!(out.amplitudes()[i], v.amplitudes()[i]);
        }
    }

    #[test]
    fn hermitian_claim_is_checked() {
        let bad = ManyBodyOperator::from_triplets(2, vec![(0, 1, c(1.0, 0.0))], true);
        assert!(matches!(bad, Err(Error::NotHermitian { .. })));
        let good = ManyBodyOperator::from_triplets(
            2,
            vec![(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0))],
            true,
        );
        assert!(good.is_ok());
    }

    #[test]
    fn duplicate_triplets_merge_and_small_entries_drop() {
        let op = ManyBodyOperator::from_triplets(
            2,
            vec![
                (0, 0, c(0.5, 0.0)),
                (0, 0, c(0.5, 0.0)),
                (1, 1, c(1e-15, 0.0)),
            ],
            false,
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn dense_cap_enforced() {
        let op = ManyBodyOperator::identity(8);
        assert!(matches!(
            op.to_dense(4),
            Err(Error::DenseCapExceeded { dim: 8, cap: 4 })
        ));
    }

    #[test]
    fn restrict_reports_leakage() {
        let op = ManyBodyOperator::from_triplets(
            3,
            vec![(0, 1, c(1.0, 0.0)), (0, 2, c(0.25, 0.0))],
            false,
        )
        .unwrap();
        let (sub, leak) = op.restrict(&[0, 1]).unwrap();
        assert_eq!(sub.dim(), 2);
        assert_eq!(sub.get(0, 1), c(1.0, 0.0));
        assert!((leak - 0.25).abs() < 1e-15);
    }
}

//! Decomposition of the computational basis into integrable two-label
//! subspaces, frozen strings, and dynamically connected non-integrable
//! components, plus the spin-1/2 XXZ reduction check inside integrable
//! sectors.
//!
//! A string is integrable-type iff its labels use at most one element of
//! `A` and at most one element of `B`. Uniform strings `|c...c>` are
//! frozen: they sit in the intersection of several `H_{a,b}` and have no
//! off-diagonal matrix elements at all. Everything else belongs to the
//! non-integrable remainder, which [`krylov_components`] splits into
//! connected components of the Hamiltonian's nonzero off-diagonal
//! elements.

use crate::hilbert::{BasisIndex, ManyBodyOperator};
use crate::models::ModelSpec;
use crate::{C64, Error, Result};
use ndarray::Array2;

/// Classification of one invariant subspace.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectorKind {
    /// Strings over the two labels `{a, b}` (uniform strings excluded).
    Integrable { a: u8, b: u8 },
    /// Uniform strings `|c...c>`; diagonal under the full Hamiltonian.
    Frozen,
    /// Dynamically connected non-integrable component.
    NonIntegrableComponent { id: usize },
}

/// One sector: a kind plus the sorted full-space indices it contains.
#[derive(Debug, Clone)]
pub struct Sector {
    pub kind: SectorKind,
    pub indices: Vec<usize>,
}

impl Sector {
    pub fn size(&self) -> usize {
        self.indices.len()
    }
}

/// A partition of the computational basis into sectors.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub sectors: Vec<Sector>,
    /// Full Hilbert-space dimension the sectors partition.
    pub dim: usize,
    /// Content hash of the Hamiltonian the decomposition was derived from
    /// (zero for the static label classification).
    pub provenance: u64,
}

impl SectorDecomposition {
    /// Sum of sector sizes; equals `dim` for a valid partition.
    pub fn total_size(&self) -> usize {
        self.sectors.iter().map(Sector::size).sum()
    }

    /// The largest non-integrable component (the level-statistics target).
    pub fn largest_non_integrable(&self) -> Option<&Sector> {
        self.sectors
            .iter()
            .filter(|s| matches!(s.kind, SectorKind::NonIntegrableComponent { .. }))
            .max_by_key(|s| s.size())
    }

    pub fn integrable_sectors(&self) -> impl Iterator<Item = &Sector> {
        self.sectors
            .iter()
            .filter(|s| matches!(s.kind, SectorKind::Integrable { .. }))
    }

    /// JSON report: kind, size, and a few sample strings per sector.
    pub fn to_json(&self, basis: &BasisIndex) -> Result<serde_json::Value> {
        let mut rows = Vec::with_capacity(self.sectors.len());
        for sector in &self.sectors {
            let samples: Vec<String> = sector
                .indices
                .iter()
                .take(3)
                .map(|&i| {
                    basis
                        .decode(i)
                        .map(|s| s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(""))
                })
                .collect::<Result<_>>()?;
            rows.push(serde_json::json!({
                "kind": sector.kind,
                "size": sector.size(),
                "samples": samples,
            }));
        }
        Ok(serde_json::json!({
            "dim": self.dim,
            "provenance": format!("{:016x}", self.provenance),
            "sectors": rows,
        }))
    }
}

/// FNV-1a over the canonical sparse entries; identifies the Hamiltonian a
/// decomposition was computed from.
pub fn operator_hash(h: &ManyBodyOperator) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut mix = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    mix(&h.dim().to_le_bytes());
    for &(r, c, v) in h.entries() {
        mix(&r.to_le_bytes());
        mix(&c.to_le_bytes());
        mix(&v.re.to_le_bytes());
        mix(&v.im.to_le_bytes());
    }
    hash
}

/// Static classification of every basis string by its label content.
pub fn label_sets(
    basis: &BasisIndex,
    a_labels: &[u8],
    b_labels: &[u8],
) -> Result<SectorDecomposition> {
    let n = basis.local_dim();
    let l = basis.chain_length();
    let dim = basis.dim();
    let is_a = |c: u8| a_labels.contains(&c);
    let is_b = |c: u8| b_labels.contains(&c);

    let mut frozen = Vec::new();
    let mut integrable: std::collections::BTreeMap<(u8, u8), Vec<usize>> =
        std::collections::BTreeMap::new();
    let mut non_integrable = Vec::new();

    let mut string = vec![0u8; l];
    let mut used = vec![false; n + 1];
    for idx in 0..dim {
        basis.decode_into(idx, &mut string)?;
        used[1..].fill(false);
        for &c in &string {
            used[c as usize] = true;
        }
        let a_used: Vec<u8> = (1..=n as u8).filter(|&c| used[c as usize] && is_a(c)).collect();
        let b_used: Vec<u8> = (1..=n as u8).filter(|&c| used[c as usize] && is_b(c)).collect();
        match (a_used.len(), b_used.len()) {
            (1, 0) | (0, 1) => frozen.push(idx),
            (1, 1) => integrable.entry((a_used[0], b_used[0])).or_default().push(idx),
            _ => non_integrable.push(idx),
        }
    }

    let mut sectors = Vec::new();
    for ((a, b), indices) in integrable {
        sectors.push(Sector { kind: SectorKind::Integrable { a, b }, indices });
    }
    if !frozen.is_empty() {
        sectors.push(Sector { kind: SectorKind::Frozen, indices: frozen });
    }
    if !non_integrable.is_empty() {
        sectors.push(Sector {
            kind: SectorKind::NonIntegrableComponent { id: 0 },
            indices: non_integrable,
        });
    }
    Ok(SectorDecomposition { sectors, dim, provenance: 0 })
}

/// Connected component of the off-diagonal coupling graph containing `seed`.
pub fn connected_component(h: &ManyBodyOperator, seed: usize) -> Vec<usize> {
    let mut visited = std::collections::HashSet::new();
    let mut stack = vec![seed];
    visited.insert(seed);
    let entries = h.entries();
    let row_range = |row: usize| {
        let lo = entries.partition_point(|&(r, _, _)| r < row);
        let hi = entries.partition_point(|&(r, _, _)| r <= row);
        lo..hi
    };
    // column adjacency needs the transpose ordering; build it once
    let mut by_col: Vec<(usize, usize)> = entries.iter().map(|&(r, c, _)| (c, r)).collect();
    by_col.sort_unstable();
    let col_range = |col: usize| {
        let lo = by_col.partition_point(|&(c, _)| c < col);
        let hi = by_col.partition_point(|&(c, _)| c <= col);
        lo..hi
    };
    while let Some(i) = stack.pop() {
        for k in row_range(i) {
            let (_, c, _) = entries[k];
            if c != i && visited.insert(c) {
                stack.push(c);
            }
        }
        for k in col_range(i) {
            let (_, r) = by_col[k];
            if r != i && visited.insert(r) {
                stack.push(r);
            }
        }
    }
    let mut out: Vec<usize> = visited.into_iter().collect();
    out.sort_unstable();
    out
}

/// Dynamical refinement: connected components of the basis graph whose
/// edges are nonzero off-diagonal elements of `h`. Components are
/// classified against the static label sets; the largest non-integrable
/// component is the level-statistics target.
pub fn krylov_components(
    h: &ManyBodyOperator,
    basis: &BasisIndex,
    spec: &ModelSpec,
) -> Result<SectorDecomposition> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs basis dim {}",
            h.dim(),
            basis.dim()
        )));
    }
    let dim = h.dim();
    let mut parent: Vec<usize> = (0..dim).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &(r, c, _) in h.entries() {
        if r != c {
            let (pr, pc) = (find(&mut parent, r), find(&mut parent, c));
            if pr != pc {
                parent[pr] = pc;
            }
        }
    }
    let mut groups: std::collections::HashMap<usize, Vec<usize>> =
        std::collections::HashMap::new();
    for i in 0..dim {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let static_classes = label_sets(basis, &spec.a_labels, &spec.b_labels)?;
    let mut class_of = vec![usize::MAX; dim];
    for (si, sector) in static_classes.sectors.iter().enumerate() {
        for &i in &sector.indices {
            class_of[i] = si;
        }
    }

    let mut frozen = Vec::new();
    let mut integrable: std::collections::BTreeMap<(u8, u8), Vec<Sector>> =
        std::collections::BTreeMap::new();
    let mut non_integrable: Vec<Vec<usize>> = Vec::new();
    for (_, mut members) in groups {
        members.sort_unstable();
        let first_class = class_of[members[0]];
        let uniform = members.iter().all(|&i| class_of[i] == first_class);
        let kind = if uniform {
            static_classes.sectors[first_class].kind.clone()
        } else {
            SectorKind::NonIntegrableComponent { id: 0 }
        };
        match kind {
            SectorKind::Frozen => frozen.extend(members),
            SectorKind::Integrable { a, b } => integrable
                .entry((a, b))
                .or_default()
                .push(Sector { kind: SectorKind::Integrable { a, b }, indices: members }),
            SectorKind::NonIntegrableComponent { .. } => non_integrable.push(members),
        }
    }
    // deterministic order: integrable blocks by (a, b) then first index,
    // frozen, then non-integrable components by descending size
    let mut sectors = Vec::new();
    for (_, mut blocks) in integrable {
        blocks.sort_by_key(|s| s.indices[0]);
        sectors.extend(blocks);
    }
    if !frozen.is_empty() {
        frozen.sort_unstable();
        sectors.push(Sector { kind: SectorKind::Frozen, indices: frozen });
    }
    non_integrable.sort_by_key(|m| (std::cmp::Reverse(m.len()), m[0]));
    for (id, members) in non_integrable.into_iter().enumerate() {
        sectors.push(Sector {
            kind: SectorKind::NonIntegrableComponent { id },
            indices: members,
        });
    }
    Ok(SectorDecomposition { sectors, dim, provenance: operator_hash(h) })
}

/// Scan every off-diagonal element and report the largest modulus coupling
/// the `(integrable | frozen)` class to the non-integrable class. Zero
/// exactly when the fragmentation is clean.
pub fn max_cross_class_coupling(
    h: &ManyBodyOperator,
    basis: &BasisIndex,
    spec: &ModelSpec,
) -> Result<f64> {
    let classes = label_sets(basis, &spec.a_labels, &spec.b_labels)?;
    let mut is_non_integrable = vec![false; h.dim()];
    for sector in &classes.sectors {
        if matches!(sector.kind, SectorKind::NonIntegrableComponent { .. }) {
            for &i in &sector.indices {
                is_non_integrable[i] = true;
            }
        }
    }
    let mut worst = 0.0f64;
    for &(r, c, v) in h.entries() {
        if r != c && is_non_integrable[r] != is_non_integrable[c] {
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

/// Independent spin-1/2 XXZ reference chain, built from bit operations
/// (never from the XXC builders): per bond
/// `|ud><du| + |du><ud| - cos(gamma) (|ud><ud| + |du><du|)`.
pub fn spin_half_xxz_dense(l: usize, gamma: f64) -> Array2<C64> {
    let dim = 1usize << l;
    let mut h = Array2::<C64>::zeros((dim, dim));
    let cos_g = gamma.cos();
    // bit for site j (1-based): site 1 is the most significant; 0 = up
    let bit = |idx: usize, site: usize| (idx >> (l - 1 - site)) & 1;
    for idx in 0..dim {
        for site in 0..l {
            let next = (site + 1) % l;
            let (b1, b2) = (bit(idx, site), bit(idx, next));
            if b1 != b2 {
                let flipped = idx ^ (1 << (l - 1 - site)) ^ (1 << (l - 1 - next));
                h[(flipped, idx)] += C64::new(1.0, 0.0);
                h[(idx, idx)] += C64::new(-cos_g, 0.0);
            }
        }
    }
    h
}

/// Verification report for the XXZ reduction of one integrable sector.
#[derive(Debug, Clone, serde::Serialize)]
pub struct XxzReductionReport {
    pub a: u8,
    pub b: u8,
    pub eta: f64,
    /// Largest modulus of entries coupling the sector to its complement.
    pub leakage: f64,
    /// Largest entry deviation from the (gauged) XXZ reference.
    pub max_deviation: f64,
}

/// Restrict `h` to the full two-label space `H_{a,b}` (uniform strings
/// included) and compare against the independent XXZ reference after
/// relabeling `a -> up`, `b -> down`; for `eta = -1` the alternating gauge
/// `(x)_j (sigma^z)^j` on the `b` occupation is applied first (`L` even).
pub fn verify_xxz_reduction(
    h: &ManyBodyOperator,
    basis: &BasisIndex,
    spec: &ModelSpec,
    a: u8,
    b: u8,
) -> Result<XxzReductionReport> {
    if !spec.is_a(a) || !spec.is_b(b) {
        return Err(Error::InvalidArgument(format!(
            "({a}, {b}) is not an (A, B) label pair"
        )));
    }
    let eta = spec.eta(b);
    let l = basis.chain_length();
    if eta == -1.0 && l % 2 == 1 {
        return Err(Error::InvalidArgument("eta = -1 gauge needs even L".into()));
    }
    let sub_dim = 1usize << l;
    // spin index -> full index; spin bit 0 -> a, 1 -> b
    let mut full_of_spin = Vec::with_capacity(sub_dim);
    let mut string = vec![0u8; l];
    for s in 0..sub_dim {
        for site in 0..l {
            string[site] = if (s >> (l - 1 - site)) & 1 == 0 { a } else { b };
        }
        full_of_spin.push(basis.encode(&string)?);
    }
    let mut mask = full_of_spin.clone();
    mask.sort_unstable();
    let (restricted, leakage) = h.restrict(&mask)?;
    let pos_of_spin: Vec<usize> = full_of_spin
        .iter()
        .map(|&f| mask.binary_search(&f).expect("member"))
        .collect();

    // gauge phases on the b occupation: prod_{odd sites j carrying b} (-1)
    let gauge: Vec<f64> = (0..sub_dim)
        .map(|s| {
            if eta == 1.0 {
                return 1.0;
            }
            let mut sign = 1.0;
            for site in 0..l {
                if (s >> (l - 1 - site)) & 1 == 1 && (site + 1) % 2 == 1 {
                    sign = -sign;
                }
            }
            sign
        })
        .collect();

    let reference = spin_half_xxz_dense(l, spec.gamma);
    let dense = restricted.to_dense(sub_dim)?;
    let mut max_deviation = 0.0f64;
    for s1 in 0..sub_dim {
        for s2 in 0..sub_dim {
            let got =
                dense[(pos_of_spin[s1], pos_of_spin[s2])] * C64::new(gauge[s1] * gauge[s2], 0.0);
            max_deviation = max_deviation.max((got - reference[(s1, s2)]).norm());
        }
    }
    Ok(XxzReductionReport { a, b, eta, leakage, max_deviation })
}

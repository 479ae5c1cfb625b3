//! Scan the level-spacing ratio of the largest non-integrable component
//! against the Ph'P coefficient scale.
//!
//! Usage: cargo run --example rscan [scale ...]

use scarlab::fragmentation::krylov_components;
use scarlab::hilbert::BasisIndex;
use scarlab::models::{build_hamiltonian, ModelSpec, PerturbationSpec, SplittingSpec};
use scarlab::spectral::r_statistic;
use std::f64::consts::PI;

fn main() {
    let scales: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("scale"))
        .collect();
    let scales = if scales.is_empty() { vec![1.0, 1.5, 2.0, 3.0] } else { scales };
    let l = 8;
    let spec = ModelSpec::simple(3, 1, PI / 4.0, l).unwrap();
    let basis = BasisIndex::new(3, l).unwrap();
    let split = SplittingSpec { j1: 0.31, j2: 0.17 };
    for &scale in &scales {
        let mut pert = PerturbationSpec::random_sx_neighbor(42, l);
        for c in pert.coefficients.iter_mut() {
            *c *= scale;
        }
        let h = build_hamiltonian(&spec, Some(&pert), Some(&split)).unwrap();
        let dec = krylov_components(&h, &basis, &spec).unwrap();
        let sector = dec.largest_non_integrable().unwrap();
        let (restricted, _) = h.restrict(&sector.indices).unwrap();
        let dense = restricted.to_dense(20_000).unwrap();
        let energies = scarlab::linalg::hermitian_eigenvalues(&dense).unwrap();
        let r = r_statistic(&energies, 0.8).unwrap();
        println!("scale {scale:5.2}  sector {}  r = {r:.4}", sector.size());
    }
}

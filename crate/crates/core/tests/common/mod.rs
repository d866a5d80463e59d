#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_core::polylattice::PolyhedralSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rejection sampling in `[-radius, radius]^n`, keeping points whose
/// slacks all exceed `margin`.
pub fn interior_points(
    p: &PolyhedralSet,
    count: usize,
    radius: f64,
    margin: f64,
    rng: &mut impl Rng,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        assert!(tries < 1_000_000, "sampler starved");
        let x: Vec<f64> = (0..p.dim()).map(|_| rng.random_range(-radius..radius)).collect();
        if p.facets().iter().all(|f| f.slack_f64(&x) > margin) {
            out.push(x);
        }
    }
    out
}

/// Interior points of a cone on the unit sphere.
pub fn sphere_points(p: &PolyhedralSet, count: usize, margin: f64, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<f64> = (0..p.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let u: Vec<f64> = x.iter().map(|v| v / norm).collect();
        if p.facets().iter().all(|f| f.slack_f64(&u) > margin) {
            out.push(u);
        }
    }
    out
}

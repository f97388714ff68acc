//! Seeded random streams and random sector states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed derived from the root seed and a job's parameter tuple.
pub fn job_seed(root: u64, params: &[u64]) -> u64 {
    params.iter().fold(splitmix(root), |h, &p| splitmix(h ^ splitmix(p)))
}

pub fn job_rng(root: u64, params: &[u64]) -> (ChaCha8Rng, u64) {
    let seed = job_seed(root, params);
    (ChaCha8Rng::seed_from_u64(seed), seed)
}

/// Uniformly distributed unit vector (normalized Gaussian amplitudes).
pub fn haar_vector<R: rand::Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|a| *a /= norm);
            return v;
        }
    }
}

/// Index drawn with probability proportional to `exp(-beta * energies[i])`.
pub fn gibbs_index<R: rand::Rng>(energies: &[f64], beta: f64, rng: &mut R) -> usize {
    let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - emin)).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, wi) in w.iter().enumerate() {
        if u < *wi {
            return i;
        }
        u -= wi;
    }
    energies.len() - 1
}

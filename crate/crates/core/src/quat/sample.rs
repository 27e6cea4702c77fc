use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ImaginaryUnit;

/// Draws a uniformly distributed unit of `S` from a normalized 3D Gaussian.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> ImaginaryUnit {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n2 = v.iter().map(|c| c * c).sum::<f64>();
        if n2 > 1e-20 {
            if let Ok(u) = ImaginaryUnit::normalize(v) {
                return u;
            }
        }
    }
}

/// `n` uniform samples on the imaginary unit sphere, deterministic in `seed`.
pub fn sample_sphere_units(n: usize, seed: u64) -> Vec<ImaginaryUnit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_unit(&mut rng)).collect()
}

//! Halton points with Cranley-Patterson random shifts.
//!
//! Each shift is an independent uniform vector added modulo 1, so every
//! shifted sequence is an unbiased quadrature rule and the spread over
//! independent shifts gives an honest standard error.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Halton bases for the first four coordinates.
pub const BASES: [u64; 4] = [2, 3, 5, 7];

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let (mut f, mut x) = (1.0, 0.0);
    while i > 0 {
        f *= inv;
        x += f * (i % b) as f64;
        i /= b;
    }
    x
}

/// A uniform shift of the unit cube.
pub fn random_shift<const D: usize>(rng: &mut ChaCha8Rng) -> [f64; D] {
    std::array::from_fn(|_| rng.random())
}

/// Halton point `i`, shifted modulo 1.
pub fn shifted_halton<const D: usize>(i: u64, shift: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|k| {
        let x = radical_inverse(i, BASES[k]) + shift[k];
        if x >= 1.0 {
            x - 1.0
        } else {
            x
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn radical_inverse_values() {
        assert_eq!(radical_inverse(0, 2), 0.0);
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(6, 2), 0.375);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_points_stay_in_the_cube() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s: [f64; 3] = random_shift(&mut rng);
        for i in 0..10_000 {
            assert!(shifted_halton(i, &s).iter().all(|&x| (0.0..1.0).contains(&x)));
        }
    }

    #[test]
    fn integrates_a_smooth_function_closely() {
        // int_[0,1]^2 x y = 1/4.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s: [f64; 2] = random_shift(&mut rng);
        let n = 1 << 14;
        let mean = (0..n).map(|i| {
            let [x, y] = shifted_halton(i, &s);
            x * y
        });
        let mean = mean.sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 1e-3);
    }
}

//! Deterministic randomness: a SplitMix64 generator for seeded draws and a
//! Halton sequence for low-discrepancy sampling.

use alloc::vec::Vec;

use crate::math;

/// SplitMix64: tiny, fast, and identical on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn uniform_usize(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

const HALTON_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical-inverse of `index` in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut inv = inv_base;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv *= inv_base;
    }
    result
}

/// The `i`-th Halton point in `[0,1)^dim` (supports `dim <= 8`).
/// Indices start at 1 to avoid the all-zero point.
pub fn halton_point(index: usize, dim: usize, out: &mut [f64]) {
    debug_assert!(dim <= HALTON_PRIMES.len());
    for (d, slot) in out.iter_mut().enumerate().take(dim) {
        *slot = radical_inverse((index + 1) as u64, HALTON_PRIMES[d]);
    }
}

/// Deterministic low-discrepancy sample of `count` points in the ball
/// `B(center, radius)` in `R^n`. Samples are uniform with respect to
/// Lebesgue measure.
pub fn ball_sample(center: &[f64], radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = center.len();
    let mut rng = SplitMix64::new(seed ^ 0x5eed_ba11);
    let mut pts = Vec::with_capacity(count);
    let mut u = [0.0f64; 8];
    for i in 0..count {
        halton_point(i, (n + 1).min(8), &mut u);
        // radius ~ U^{1/n} for uniform volume density
        let r = radius * math::pow(u[n.min(7)], 1.0 / n as f64);
        let dir = sphere_direction(&u[..n], n, &mut rng);
        let mut p = Vec::with_capacity(n);
        for (d, c) in center.iter().enumerate() {
            p.push(c + r * dir[d]);
        }
        pts.push(p);
    }
    pts
}

/// Map a point of the unit cube to a direction on `S_{n-1}`.
/// For n = 1 the sign, for n = 2 the angle; higher dimensions use a
/// Box-Muller-style Gaussian map fed by the cube coordinates.
pub fn sphere_direction(u: &[f64], n: usize, rng: &mut SplitMix64) -> Vec<f64> {
    match n {
        1 => {
            if u[0] < 0.5 {
                alloc::vec![-1.0]
            } else {
                alloc::vec![1.0]
            }
        }
        2 => {
            let theta = 2.0 * math::PI * u[0];
            alloc::vec![libm::cos(theta), libm::sin(theta)]
        }
        _ => {
            let mut v = Vec::with_capacity(n);
            let mut i = 0;
            while v.len() < n {
                let (a, b) = if i + 1 < u.len() {
                    (u[i].max(1e-12), u[i + 1])
                } else {
                    (rng.next_f64().max(1e-12), rng.next_f64())
                };
                let rho = math::sqrt(-2.0 * math::log(a));
                v.push(rho * libm::cos(2.0 * math::PI * b));
                if v.len() < n {
                    v.push(rho * libm::sin(2.0 * math::PI * b));
                }
                i += 2;
            }
            let norm = math::euclid_norm(&v).max(1e-300);
            for x in v.iter_mut() {
                *x /= norm;
            }
            v
        }
    }
}

//! Deterministic xoshiro256** generator with splitmix64 seeding, plus exact
//! samplers for the noise distributions.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Above this mean the Poisson sampler switches from Knuth's product method
/// to a rounded normal approximation.
pub const POISSON_KNUTH_LIMIT: f64 = 30.0;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed for the sub-stream named `label` under `seed`. Pure in both inputs.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut s = seed ^ fnv1a(label.as_bytes()).rotate_left(17);
    splitmix64(&mut s)
}

/// Seed for the `index`-th numbered sub-stream under `seed` (rows, tiles).
pub fn derive_seed_indexed(seed: u64, index: u64) -> u64 {
    let mut s = seed.wrapping_add(index.wrapping_mul(0xd134_2543_de82_ef95));
    splitmix64(&mut s) ^ splitmix64(&mut s).rotate_left(29)
}

/// xoshiro256** state. Single owner; derive sub-streams before fanning out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = seed;
        Self {
            s: [
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
            ],
        }
    }

    /// Independent generator for `(seed, label)`.
    pub fn substream(seed: u64, label: &str) -> Self {
        Self::from_seed(derive_seed(seed, label))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform variate in `[0, 1)` with 53 significant bits.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Normal variate via Box–Muller (cosine branch only).
    pub fn sample_normal(&mut self, mu: f64, sigma: f64) -> Result<f64> {
        check_normal(mu, sigma)?;
        Ok(mu + sigma * self.standard_normal())
    }

    #[inline]
    pub(crate) fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform01();
        let u2 = self.uniform01();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }

    pub fn sample_poisson(&mut self, lambda: f64) -> Result<u64> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::param(format!(
                "poisson lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(self.poisson_unchecked(lambda))
    }

    #[inline]
    pub(crate) fn poisson_unchecked(&mut self, lambda: f64) -> u64 {
        if lambda == 0.0 {
            return 0;
        }
        if lambda <= POISSON_KNUTH_LIMIT {
            let limit = (-lambda).exp();
            let mut k = 0u64;
            let mut p = self.uniform01();
            while p > limit {
                k += 1;
                p *= self.uniform01();
            }
            k
        } else {
            let z = self.standard_normal();
            (lambda + lambda.sqrt() * z).round().max(0.0) as u64
        }
    }

    /// Erlang variate with rate `a` and integer shape `b`: a sum of `b`
    /// exponentials, mean `b/a`.
    pub fn sample_gamma(&mut self, a: f64, b: u32) -> Result<f64> {
        check_rate(a, "gamma a")?;
        if b < 1 {
            return Err(Error::param("gamma shape b must be a positive integer"));
        }
        Ok(self.erlang_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn erlang_unchecked(&mut self, a: f64, b: u32) -> f64 {
        (0..b).map(|_| self.exponential_unchecked(a)).sum()
    }

    pub fn sample_exponential(&mut self, a: f64) -> Result<f64> {
        check_rate(a, "exponential a")?;
        Ok(self.exponential_unchecked(a))
    }

    #[inline]
    pub(crate) fn exponential_unchecked(&mut self, a: f64) -> f64 {
        exponential_inverse_cdf(self.uniform01(), a)
    }

    /// Rayleigh variate with location `a` and scale `b`; mean `a + sqrt(pi*b/4)`.
    pub fn sample_rayleigh(&mut self, a: f64, b: f64) -> Result<f64> {
        if !a.is_finite() {
            return Err(Error::param("rayleigh a must be finite"));
        }
        check_rate(b, "rayleigh b")?;
        Ok(self.rayleigh_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn rayleigh_unchecked(&mut self, a: f64, b: f64) -> f64 {
        rayleigh_inverse_cdf(self.uniform01(), a, b)
    }
}

/// `-ln(1 - u) / a`; `u = 0` maps to 0.
#[inline]
pub fn exponential_inverse_cdf(u: f64, a: f64) -> f64 {
    -(1.0 - u).ln() / a
}

#[inline]
pub fn rayleigh_inverse_cdf(u: f64, a: f64, b: f64) -> f64 {
    a + (-b * (1.0 - u).ln()).sqrt()
}

fn check_normal(mu: f64, sigma: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::param(format!("normal mu must be finite, got {mu}")));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::param(format!(
            "normal sigma must be >= 0, got {sigma}"
        )));
    }
    Ok(())
}

fn check_rate(a: f64, what: &str) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{what} must be > 0, got {a}")))
    }
}

//! Seeded random generation of series in 𝕂, 𝒪, 𝔪 and the positive units.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::exponent::{Bound, Exponent};
use crate::series::{Context, Series};

/// Which part of the field a generator samples from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Arbitrary exponents.
    Field,
    /// The valuation ring: exponents ≥ 0.
    RingO,
    /// The maximal ideal: exponents > 0.
    IdealM,
    /// Positive units: a positive constant term plus exponents > 0.
    PosUnits,
}

impl Domain {
    /// Whether `s` satisfies the domain predicate.
    pub fn contains(self, s: &Series) -> bool {
        let Ok(v) = s.valuation() else { return false };
        match self {
            Domain::Field => true,
            Domain::RingO => match v {
                Bound::Infinity => true,
                Bound::Finite(g) => !g.is_negative(),
            },
            Domain::IdealM => match v {
                Bound::Infinity => true,
                Bound::Finite(g) => g.is_positive(),
            },
            Domain::PosUnits => match (v, s.leading()) {
                (Bound::Finite(g), Some(l)) => g.is_zero() && l.c.is_positive(),
                _ => false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub domain: Domain,
    pub dim: usize,
    pub max_terms: usize,
    /// Exponent coordinates are `n/d` with `|n| ≤ num_bound`, `1 ≤ d ≤ den_bound`.
    pub exponent_num_bound: i64,
    pub exponent_den_bound: i64,
    /// Coefficients are `n/d` with `|n/d| ≤ coeff_bound`, `1 ≤ d ≤ coeff_den_bound`.
    pub coeff_bound: i64,
    pub coeff_den_bound: i64,
    /// Cutoff of every generated series; `Infinity` gives exact series.
    pub cutoff: Bound,
}

impl GeneratorSpec {
    /// Default bounds: at most 5 terms, exponents `n/d` with `|n| ≤ 12`,
    /// `d ≤ 6`, coefficients in `[-10, 10]` with denominator ≤ 20, and
    /// cutoff `cutoff`.
    pub fn new(domain: Domain, dim: usize, cutoff: Bound) -> Self {
        GeneratorSpec {
            domain,
            dim,
            max_terms: 5,
            exponent_num_bound: 12,
            exponent_den_bound: 6,
            coeff_bound: 10,
            coeff_den_bound: 20,
            cutoff,
        }
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        GeneratorSpec { domain, ..self.clone() }
    }

    pub fn exact(&self) -> Self {
        GeneratorSpec {
            cutoff: Bound::Infinity,
            ..self.clone()
        }
    }
}

/// Deterministic per-case random stream derived from `(seed, index)`.
pub struct CaseRng(ChaCha8Rng);

impl CaseRng {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&index.to_le_bytes());
        key[16..24].copy_from_slice(b"hahn-gen");
        CaseRng(ChaCha8Rng::from_seed(key))
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    /// A rational `n/d` with `1 ≤ d ≤ den_bound` and `|n/d| ≤ bound`.
    pub fn rational(&mut self, bound: i64, den_bound: i64) -> BigRational {
        let d = self.range(1, den_bound);
        let n = self.range(-bound * d, bound * d);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn nonzero_rational(&mut self, bound: i64, den_bound: i64) -> BigRational {
        loop {
            let q = self.rational(bound, den_bound);
            if !q.is_zero() {
                return q;
            }
        }
    }

    /// A rational in the open interval `(-1, 1)`.
    pub fn unit_interval(&mut self, den_bound: i64) -> BigRational {
        let d = self.range(1, den_bound);
        let n = self.range(-(d - 1), d - 1);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn coordinate(&mut self, spec: &GeneratorSpec) -> BigRational {
        let d = self.range(1, spec.exponent_den_bound);
        let n = self.range(-spec.exponent_num_bound, spec.exponent_num_bound);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// A positive exponent. In dimension > 1 the leading coordinate is made
    /// positive, so that multiples of it eventually pass any cutoff.
    fn positive_exponent(&mut self, spec: &GeneratorSpec) -> Exponent {
        loop {
            let mut coords: Vec<BigRational> = (0..spec.dim).map(|_| self.coordinate(spec)).collect();
            coords[0] = coords[0].abs();
            if coords[0].is_zero() {
                continue;
            }
            let e = Exponent::new(coords).expect("dim ≥ 1");
            if spec.cutoff.admits(&e) {
                return e;
            }
        }
    }

    fn any_exponent(&mut self, spec: &GeneratorSpec) -> Exponent {
        loop {
            let coords: Vec<BigRational> = (0..spec.dim).map(|_| self.coordinate(spec)).collect();
            let e = Exponent::new(coords).expect("dim ≥ 1");
            if spec.cutoff.admits(&e) {
                return e;
            }
        }
    }
}

/// Draw a series from `spec`; deterministic in `(spec, seed, index)`.
pub fn gen_random(spec: &GeneratorSpec, seed: u64, index: u64, ctx: Context) -> Series {
    let mut rng = CaseRng::new(seed, index);
    gen_with(spec, &mut rng, ctx)
}

/// Draw a series from `spec` using an existing stream.
pub fn gen_with(spec: &GeneratorSpec, rng: &mut CaseRng, ctx: Context) -> Series {
    assert_eq!(spec.dim, ctx.dim, "generator dimension must match the context");
    loop {
        let n = rng.range(1, spec.max_terms as i64) as usize;
        let mut raw: Vec<(Exponent, Coeff)> = Vec::with_capacity(n + 1);
        let zero = Exponent::zero(spec.dim);
        if spec.domain == Domain::PosUnits {
            let c = rng.nonzero_rational(spec.coeff_bound, spec.coeff_den_bound).abs();
            raw.push((zero.clone(), ctx.coeff(&c)));
        }
        let extra = if spec.domain == Domain::PosUnits { n - 1 } else { n };
        for _ in 0..extra {
            let e = match spec.domain {
                Domain::Field => rng.any_exponent(spec),
                Domain::IdealM | Domain::PosUnits => rng.positive_exponent(spec),
                Domain::RingO => {
                    if rng.chance(0.3) {
                        zero.clone()
                    } else {
                        rng.positive_exponent(spec)
                    }
                }
            };
            let c = rng.nonzero_rational(spec.coeff_bound, spec.coeff_den_bound);
            raw.push((e, ctx.coeff(&c)));
        }
        let s = Series::normalize(ctx, raw, spec.cutoff.clone()).expect("generated data is well-formed");
        if !s.terms().is_empty() && spec.domain.contains(&s) {
            return s;
        }
    }
}

/// A positive integer power `c^n` of a random rational, for exact roots.
pub fn perfect_power(rng: &mut CaseRng, n: u32) -> BigRational {
    let base = rng.nonzero_rational(3, 4).abs();
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= &base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffMode;

    fn spec(domain: Domain, dim: usize) -> GeneratorSpec {
        let mut cut = vec![0i64; dim];
        cut[0] = 12;
        GeneratorSpec::new(domain, dim, Bound::Finite(Exponent::from_ints(&cut)))
    }

    #[test]
    fn deterministic() {
        let ctx = Context::rational(1);
        let s = spec(Domain::Field, 1);
        assert_eq!(gen_random(&s, 7, 3, ctx), gen_random(&s, 7, 3, ctx));
        assert_ne!(gen_random(&s, 7, 3, ctx), gen_random(&s, 7, 4, ctx));
    }

    #[test]
    fn domains_hold() {
        for dim in [1, 2] {
            let ctx = Context::rational(dim);
            for d in [Domain::Field, Domain::RingO, Domain::IdealM, Domain::PosUnits] {
                let sp = spec(d, dim);
                for i in 0..300 {
                    let s = gen_random(&sp, 1, i, ctx);
                    assert!(d.contains(&s), "{d:?} {s}");
                    assert!(s.terms().len() <= 5);
                }
            }
        }
        let ctx = Context::new(1, CoeffMode::Real(30));
        let s = gen_random(&spec(Domain::IdealM, 1), 2, 0, ctx);
        assert!(matches!(s.leading().unwrap().c, Coeff::Real(_)));
    }
}

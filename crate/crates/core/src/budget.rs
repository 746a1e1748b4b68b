//! Failure-probability budgets for Monte-Carlo solver calls.
//!
//! A budget pairs a target failure probability `p` (kept as an exact
//! rational so repeated splitting loses nothing) with a seed. Composite
//! procedures split their budget over the solver calls they make: each of
//! `n` calls receives `p/n` and a deterministically derived seed, so the
//! union bound over all calls stays at `p` and a run is reproducible from
//! the top-level seed alone. Deterministic solvers ignore `p`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    p: BigRational,
    seed: u64,
}

impl ErrorBudget {
    pub fn new(p: BigRational, seed: u64) -> Result<Self> {
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::Parameter(format!("failure probability {p} not in [0,1]")));
        }
        Ok(ErrorBudget { p, seed })
    }

    /// Budget `num/den` with the given seed.
    pub fn from_ratio(num: u64, den: u64, seed: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parameter("zero denominator".into()));
        }
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            seed,
        )
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    /// `p/n` with an unchanged seed, for handing a share to a sub-procedure.
    pub fn split(&self, n: u64) -> ErrorBudget {
        assert!(n > 0, "cannot split a budget zero ways");
        ErrorBudget {
            p: &self.p / BigInt::from(n),
            seed: self.seed,
        }
    }

    /// Same probability, seed re-derived for the `tag`-th sub-call.
    pub fn derive(&self, tag: u64) -> ErrorBudget {
        ErrorBudget {
            p: self.p.clone(),
            seed: splitmix(self.seed ^ tag.wrapping_mul(0x9e3779b97f4a7c15)),
        }
    }

    /// Ceil of `multiplier / (2p)` as used for weight ranges, capped at 2^62.
    pub fn gamma(&self, multiplier: u64) -> Result<u64> {
        if self.p.is_zero() {
            return Err(Error::Parameter(
                "zero failure probability requires an unbounded weight range".into(),
            ));
        }
        // ceil(m * den / (2 * num))
        let num = 2 * self.p.numer().clone();
        let den = BigInt::from(multiplier) * self.p.denom();
        let gamma: BigInt = (&den + &num - BigInt::one()) / &num;
        let cap = BigInt::from(1u64 << 62);
        if gamma > cap {
            return Err(Error::ResourceLimit(format!(
                "weight range {gamma} exceeds 2^62; failure probability too small"
            )));
        }
        let g: u64 = gamma.try_into().map_err(|_| Error::Internal("gamma conversion".into()))?;
        Ok(g.max(1))
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ErrorBudget::from_ratio(3, 2, 0).is_err());
        assert!(ErrorBudget::from_ratio(1, 1, 0).is_ok());
        assert!(ErrorBudget::from_ratio(0, 1, 0).is_ok());
    }

    #[test]
    fn split_is_exact() {
        let b = ErrorBudget::from_ratio(1, 4, 7).unwrap();
        let c = b.split(3);
        assert_eq!(c.p(), &BigRational::new(BigInt::from(1), BigInt::from(12)));
    }

    #[test]
    fn gamma_rounds_up() {
        // p = 1/4, multiplier 6: ceil(6 / (1/2)) = 12
        let b = ErrorBudget::from_ratio(1, 4, 0).unwrap();
        assert_eq!(b.gamma(6).unwrap(), 12);
        // p = 1/3, multiplier 4: ceil(4 * 3 / 2) = 6
        let b = ErrorBudget::from_ratio(1, 3, 0).unwrap();
        assert_eq!(b.gamma(4).unwrap(), 6);
    }

    #[test]
    fn derive_changes_seed_deterministically() {
        let b = ErrorBudget::from_ratio(1, 4, 42).unwrap();
        assert_eq!(b.derive(5).seed(), b.derive(5).seed());
        assert_ne!(b.derive(5).seed(), b.derive(6).seed());
    }

    #[test]
    fn zero_probability_has_no_gamma() {
        let b = ErrorBudget::from_ratio(0, 1, 0).unwrap();
        assert!(b.gamma(4).is_err());
    }
}

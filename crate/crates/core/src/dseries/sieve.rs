use std::sync::OnceLock;

use crate::{Error, Result};

/// Sieve bound used by [`Sieve::shared`].
pub const DEFAULT_SIEVE_BOUND: u64 = 10_000_000;

/// Prime decomposition as `(prime, exponent)` pairs with increasing primes.
/// The empty list is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    /// Builds from pairs, rejecting unsorted primes and zero exponents.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        let sorted = pairs.windows(2).all(|w| w[0].0 < w[1].0);
        if !sorted || pairs.iter().any(|&(p, e)| p < 2 || e == 0) {
            return Err(Error::InvalidParameter(format!("not a factorization: {pairs:?}")));
        }
        Ok(Factorization(pairs))
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Smallest-prime-factor table up to a fixed bound.
#[derive(Clone, Debug)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    /// Linear sieve over `0..=bound`.
    pub fn new(bound: u64) -> Self {
        let n = bound.max(1) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p > si || j > n {
                    break;
                }
                spf[j] = p;
            }
        }
        Sieve { spf, primes }
    }

    /// Process-wide sieve up to [`DEFAULT_SIEVE_BOUND`], built on first use.
    pub fn shared() -> &'static Sieve {
        static SHARED: OnceLock<Sieve> = OnceLock::new();
        SHARED.get_or_init(|| Sieve::new(DEFAULT_SIEVE_BOUND))
    }

    /// A sieve covering `bound`: the shared one when large enough.
    pub fn covering(bound: u64) -> std::borrow::Cow<'static, Sieve> {
        if bound <= DEFAULT_SIEVE_BOUND {
            std::borrow::Cow::Borrowed(Sieve::shared())
        } else {
            std::borrow::Cow::Owned(Sieve::new(bound))
        }
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// All primes up to the bound, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn primes_up_to(&self, limit: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| u64::from(p) <= limit);
        &self.primes[..end]
    }

    /// Position of prime `p` in [`Sieve::primes`].
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&(p as u32)).ok()
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("factorization of 0".into()));
        }
        if n > self.bound() {
            return Err(Error::OutOfRange { value: n, bound: self.bound() });
        }
        Ok(())
    }

    /// Calls `f(p, e)` for each prime power exactly dividing `n`, primes ascending.
    pub fn for_each_prime_power(&self, n: u64, mut f: impl FnMut(u64, u32)) -> Result<()> {
        self.check(n)?;
        let mut n = n as usize;
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            f(p as u64, e);
        }
        Ok(())
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        let mut pairs = Vec::new();
        self.for_each_prime_power(n, |p, e| pairs.push((p, e)))?;
        Ok(Factorization(pairs))
    }

    pub fn radical(&self, n: u64) -> Result<u64> {
        let mut r = 1;
        self.for_each_prime_power(n, |p, _| r *= p)?;
        Ok(r)
    }
}

/// Factorization through the shared sieve.
pub fn factorize(n: u64) -> Result<Factorization> {
    Sieve::shared().factorize(n)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> Result<u64> {
    Sieve::shared().radical(n)
}

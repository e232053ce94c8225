//! Sieved per-integer tables of the arithmetic functions the verification
//! suite sums over, built from smallest-prime-factor data.

use super::ArithError;

/// Steady-state bytes per table entry (`spf` u32 + `phi` u32 + `tau` u16 +
/// `omega` u8 + `mu` i8); the build transiently uses one more byte per entry.
pub const BYTES_PER_ENTRY: u64 = 13;

/// Tables of Ω(n), τ(n), μ(n), φ(n) and smallest prime factors for all
/// `n <= limit`. Immutable after construction and safe to share.
pub struct ArithTables {
    limit: u64,
    spf: Vec<u32>,
    omega: Vec<u8>,
    tau: Vec<u16>,
    mu: Vec<i8>,
    phi: Vec<u32>,
}

impl ArithTables {
    /// Sieves all tables up to `limit`, refusing to exceed `budget_bytes`.
    pub fn build(limit: u64, budget_bytes: u64) -> Result<Self, ArithError> {
        if limit < 2 {
            return Err(ArithError::LimitTooSmall { limit });
        }
        if limit >= u32::MAX as u64 {
            return Err(ArithError::LimitTooLarge { limit });
        }
        let need_bytes = (limit + 1) * BYTES_PER_ENTRY;
        if need_bytes > budget_bytes {
            return Err(ArithError::TableBudgetExceeded {
                limit,
                need_bytes,
                budget_bytes,
            });
        }
        let n = limit as usize;

        // linear sieve for smallest prime factors
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let ip = i as u64 * p as u64;
                if ip > limit {
                    break;
                }
                spf[ip as usize] = p;
            }
        }
        spf[1] = 1;

        let mut omega = vec![0u8; n + 1];
        let mut tau = vec![0u16; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut phi = vec![0u32; n + 1];
        // exponent of spf(i) in i, dropped after the build
        let mut spf_exp = vec![0u8; n + 1];
        tau[1] = 1;
        mu[1] = 1;
        phi[1] = 1;
        for i in 2..=n {
            let p = spf[i] as usize;
            let m = i / p;
            omega[i] = omega[m] + 1;
            if m % p == 0 {
                spf_exp[i] = spf_exp[m] + 1;
                mu[i] = 0;
                phi[i] = phi[m] * p as u32;
                // n = p^e q: tau(n) = (e+1) tau(q) = tau(n/p) (e+1)/e
                let e = spf_exp[i] as u16;
                tau[i] = tau[m] / e * (e + 1);
            } else {
                spf_exp[i] = 1;
                mu[i] = -mu[m];
                phi[i] = phi[m] * (p as u32 - 1);
                tau[i] = tau[m] * 2;
            }
        }

        Ok(ArithTables {
            limit,
            spf,
            omega,
            tau,
            mu,
            phi,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> usize {
        assert!(n >= 1 && n <= self.limit, "n = {} outside tables", n);
        n as usize
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega(&self, n: u64) -> u32 {
        self.omega[self.check(n)] as u32
    }

    /// Number of divisors.
    pub fn tau(&self, n: u64) -> u32 {
        self.tau[self.check(n)] as u32
    }

    pub fn mu(&self, n: u64) -> i32 {
        self.mu[self.check(n)] as i32
    }

    pub fn phi(&self, n: u64) -> u64 {
        self.phi[self.check(n)] as u64
    }

    pub fn spf(&self, n: u64) -> u64 {
        self.spf[self.check(n)] as u64
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.mu[self.check(n)] != 0
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[self.check(n)] as u64 == n
    }

    /// Prime factorization via the smallest-prime-factor chain.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut n = self.check(n) as u64;
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    pub fn distinct_primes(&self, n: u64) -> Vec<u64> {
        self.factorize(n).into_iter().map(|(p, _)| p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(limit: u64) -> ArithTables {
        ArithTables::build(limit, u64::MAX).unwrap()
    }

    #[test]
    fn hand_factored_values() {
        let t = tables(100);
        assert_eq!(t.omega(12), 3);
        assert_eq!(t.tau(12), 6);
        assert_eq!(t.mu(12), 0);
        assert_eq!(t.phi(12), 4);
        assert_eq!(t.mu(30), -1);
        assert!(t.is_squarefree(30));
        assert_eq!(t.tau(1), 1);
        assert_eq!(t.phi(1), 1);
        assert_eq!(t.omega(64), 6);
        assert_eq!(t.tau(64), 7);
        assert_eq!(t.phi(97), 96);
        assert!(t.is_prime(97));
        assert!(!t.is_prime(91));
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = tables(3000);
        for n in 1..=3000u64 {
            let mut m = n;
            let mut omega = 0u32;
            let mut tau = 1u32;
            let mut phi = 1u64;
            let mut mu = 1i32;
            let mut p = 2u64;
            while p * p <= m {
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    omega += e;
                    tau *= e + 1;
                    phi *= (p - 1) * p.pow(e - 1);
                    mu = if e > 1 { 0 } else { -mu };
                }
                p += 1;
            }
            if m > 1 {
                omega += 1;
                tau *= 2;
                phi *= m - 1;
                mu = -mu;
            }
            assert_eq!(t.omega(n), omega, "omega({})", n);
            assert_eq!(t.tau(n), tau, "tau({})", n);
            assert_eq!(t.phi(n), phi, "phi({})", n);
            assert_eq!(t.mu(n), mu, "mu({})", n);
        }
    }

    #[test]
    fn factorize_roundtrips() {
        let t = tables(5000);
        for n in 2..=5000u64 {
            let f = t.factorize(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n);
            // strictly increasing primes
            for w in f.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        match ArithTables::build(1_000_000, 1024) {
            Err(ArithError::TableBudgetExceeded { .. }) => {}
            Err(e) => panic!("wrong error: {}", e),
            Ok(_) => panic!("budget not enforced"),
        }
        assert!(ArithTables::build(1, u64::MAX).is_err());
    }

    #[test]
    fn squarefree_reciprocal_totient_sum_tracks_log() {
        // Σ_{n≤x} μ²(n)/φ(n) - log x stays bounded (brute force)
        let t = tables(1_000_000);
        let mut sum = 0.0f64;
        let mut diffs = Vec::new();
        let mut next_checkpoint = 10_000u64;
        for n in 1..=1_000_000u64 {
            if t.is_squarefree(n) {
                sum += 1.0 / t.phi(n) as f64;
            }
            if n == next_checkpoint {
                diffs.push(sum - (n as f64).ln());
                next_checkpoint *= 10;
            }
        }
        assert_eq!(diffs.len(), 3);
        for (i, d) in diffs.iter().enumerate() {
            assert!(*d > 0.0 && *d < 2.0, "diff[{}] = {}", i, d);
        }
        // the offset converges; successive checkpoints move by little
        assert!((diffs[2] - diffs[1]).abs() < 0.01);
    }
}

//! Multiplicative functions given by a value-at-prime rule, and partial sums
//! of those whose Dirichlet series is `ζ^k(1+s)` times a convergent factor.

use num_traits::{One, ToPrimitive};

use super::divsums::primes_up_to;
use super::{gcd_u64, ArithError, ArithTables, SumComparison};

/// Exact rational values at primes; `i128` comfortably holds every product
/// the sweeps form.
pub type PrimeRat = num_rational::Ratio<i128>;

/// A multiplicative function defined by its value on primes, restricted to
/// squarefree support.
#[derive(Clone)]
pub struct MultiplicativeFunctionSpec {
    pub name: &'static str,
    prime_rule: fn(u64) -> PrimeRat,
    pub squarefree_only: bool,
}

impl MultiplicativeFunctionSpec {
    pub fn new(name: &'static str, prime_rule: fn(u64) -> PrimeRat, squarefree_only: bool) -> Self {
        MultiplicativeFunctionSpec {
            name,
            prime_rule,
            squarefree_only,
        }
    }

    pub fn prime_value(&self, p: u64) -> PrimeRat {
        (self.prime_rule)(p)
    }

    /// Exact value at squarefree `n` as the product of the prime rule;
    /// `None` off the support.
    pub fn eval_exact(&self, n: u64, tables: &ArithTables) -> Option<PrimeRat> {
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some(PrimeRat::one());
        }
        if self.squarefree_only && !tables.is_squarefree(n) {
            return None;
        }
        let mut acc = PrimeRat::one();
        for (p, e) in tables.factorize(n) {
            debug_assert_eq!(e, 1, "squarefree support");
            acc *= (self.prime_rule)(p);
        }
        Some(acc)
    }

    /// `f(n)` as a double; zero off the support.
    pub fn eval_f64(&self, n: u64, tables: &ArithTables) -> f64 {
        match self.eval_exact(n, tables) {
            Some(v) => ratio_to_f64(&v),
            None => 0.0,
        }
    }

    /// `f̄(d) = (f * 1)(d) = Π_{p|d} (1 + f(p))` on squarefree `d`.
    pub fn convolved_with_one(&self, d: u64, tables: &ArithTables) -> Option<PrimeRat> {
        if d == 1 {
            return Some(PrimeRat::one());
        }
        if !tables.is_squarefree(d) {
            return None;
        }
        let mut acc = PrimeRat::one();
        for (p, _) in tables.factorize(d) {
            acc *= PrimeRat::one() + (self.prime_rule)(p);
        }
        Some(acc)
    }
}

fn ratio_to_f64(r: &PrimeRat) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

fn r(n: i128, d: i128) -> PrimeRat {
    PrimeRat::new(n, d)
}

/// `μ²(n)/φ(n)`: prime rule `1/(p-1)`.
pub fn mu2_over_phi() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new("mu2_over_phi", |p| r(1, p as i128 - 1), true)
}

/// `μ²(n)/n`: prime rule `1/p`.
pub fn mu2_over_id() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new("mu2_over_id", |p| r(1, p as i128), true)
}

/// The weight denominator rule `f(p) = p/2`, so `f(d) = d/τ(d)` on
/// squarefree `d`.
pub fn sieve_weight_f() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new("sieve_f", |p| r(p as i128, 2), true)
}

/// `g(p) = p(p-1)/(p-2)`, defined on odd primes only (its arguments are
/// always coprime to the even modulus W).
pub fn sieve_weight_g() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new(
        "sieve_g",
        |p| {
            let p = p as i128;
            r(p * (p - 1), p - 2)
        },
        true,
    )
}

/// `f_1` with `f = f_1 * 1`: `f_1(p) = f(p) - 1 = (p-2)/2`.
pub fn sieve_weight_f1() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new("sieve_f1", |p| r(p as i128 - 2, 2), true)
}

/// `g_1` with `g = g_1 * 1`: `g_1(p) = g(p) - 1 = (p² - 2p + 2)/(p-2)`,
/// on odd primes only.
pub fn sieve_weight_g1() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new(
        "sieve_g1",
        |p| {
            let p = p as i128;
            r(p * p - 2 * p + 2, p - 2)
        },
        true,
    )
}

/// `h(p) = 1 - 3/(p+2) = (p-1)/(p+2)`.
pub fn density_h() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new(
        "density_h",
        |p| {
            let p = p as i128;
            r(p - 1, p + 2)
        },
        true,
    )
}

/// `h_1(p) = 1 - 3/p + 2/p² = (p² - 3p + 2)/p²`.
pub fn density_h1() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new(
        "density_h1",
        |p| {
            let p = p as i128;
            r(p * p - 3 * p + 2, p * p)
        },
        true,
    )
}

/// `h_2(p) = 1 - 2/p + 2/p² = (p² - 2p + 2)/p²`.
pub fn density_h2() -> MultiplicativeFunctionSpec {
    MultiplicativeFunctionSpec::new(
        "density_h2",
        |p| {
            let p = p as i128;
            r(p * p - 2 * p + 2, p * p)
        },
        true,
    )
}

/// Exhaustive `Σ_{n ≤ x, n ≡ 0 (d), (n,m)=1} f(n)` against the main term
/// `f(d)/f̄(d) · (φ(m) log x / m)^k · c(m,f)/k! · (1 - log d/log x)^k`,
/// where `c(m,f) = Π_{p ∤ m} (1-1/p)^k f̄(p)` is truncated at `euler_cutoff`.
/// The gap is normalized by `(log x)^{k-1}`.
pub fn omega_k_partial_sum(
    f: &MultiplicativeFunctionSpec,
    k: u32,
    d: u64,
    m: u64,
    x: u64,
    tables: &ArithTables,
    euler_cutoff: u64,
) -> Result<SumComparison, ArithError> {
    if !f.squarefree_only {
        return Err(ArithError::UnsupportedFunction {
            name: f.name.to_string(),
        });
    }
    if m == 0 || d == 0 {
        return Err(ArithError::ZeroModulus { m: m.min(d) });
    }
    if gcd_u64(d % m.max(1), m) != 1 && m > 1 {
        return Err(ArithError::NotCoprime { a: d, m });
    }
    if x > tables.limit() {
        return Err(ArithError::BeyondTables {
            needed: x,
            limit: tables.limit(),
        });
    }

    // exhaustive sum over multiples of d
    let mut empirical = 0.0f64;
    let mut n = d;
    while n <= x {
        if (m == 1 || gcd_u64(n % m, m) == 1) && tables.is_squarefree(n) {
            empirical += f.eval_f64(n, tables);
        }
        n += d;
    }

    let xf = x as f64;
    let logx = xf.ln();
    let predicted = if d > x {
        0.0
    } else {
        let fd = f
            .eval_exact(d, tables)
            .map(|v| ratio_to_f64(&v))
            .unwrap_or(0.0);
        let fbar_d = f
            .convolved_with_one(d, tables)
            .map(|v| ratio_to_f64(&v))
            .unwrap_or(1.0);
        let phi_ratio = if m == 1 {
            1.0
        } else {
            tables.phi(m) as f64 / m as f64
        };
        let mut c_mf = 1.0f64;
        for p in primes_up_to(euler_cutoff) {
            if m % p == 0 {
                continue;
            }
            let pf = p as f64;
            let fp = ratio_to_f64(&f.prime_value(p));
            c_mf *= (1.0 - 1.0 / pf).powi(k as i32) * (1.0 + fp);
        }
        let mut k_fact = 1.0f64;
        for j in 1..=k {
            k_fact *= j as f64;
        }
        let tail = (1.0 - (d as f64).ln() / logx).max(0.0);
        (fd / fbar_d) * (phi_ratio * logx).powi(k as i32) * (c_mf / k_fact) * tail.powi(k as i32)
    };
    let abs_error = (empirical - predicted).abs();
    Ok(SumComparison {
        label: format!("omega_k:{}", f.name),
        m,
        a: 0,
        d,
        k,
        x,
        empirical,
        predicted,
        abs_error,
        normalized_error: abs_error / logx.powi(k as i32 - 1),
    })
}

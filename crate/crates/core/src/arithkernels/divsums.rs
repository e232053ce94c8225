//! Divisor sums in arithmetic progressions and allied exhaustive sums,
//! compared against their asymptotic main terms.
//!
//! The main-term constants: the progression and coprimality sums use
//! `c = 2γ - 1` (fixed by the classical full-range divisor formula), and the
//! dyadic 2^Ω sum uses `c' = c + 2 log 2` (the shift produced by differencing
//! the full-range main term at `2x` and `x`).

use serde::Serialize;

use super::{gcd_u64, ArithError, ArithTables, SumComparison};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `c = 2γ - 1`.
pub fn dirichlet_constant() -> f64 {
    2.0 * EULER_GAMMA - 1.0
}

/// `c' = 2γ - 1 + 2 log 2`.
pub fn dyadic_constant() -> f64 {
    dirichlet_constant() + 2.0 * std::f64::consts::LN_2
}

pub const DEFAULT_EULER_CUTOFF: u64 = 1_000_000;

/// Primes up to `n` by a plain sieve; independent of `ArithTables`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// The error envelope `x^{0.55} / m^{1/4}` shared by the progression sums.
fn progression_envelope(m: u64, x: u64) -> f64 {
    (x as f64).powf(0.55) / (m as f64).powf(0.25)
}

fn require_in_tables(x: u64, tables: &ArithTables) -> Result<(), ArithError> {
    if x > tables.limit() {
        return Err(ArithError::BeyondTables {
            needed: x,
            limit: tables.limit(),
        });
    }
    Ok(())
}

fn require_squarefree(m: u64, tables: &ArithTables) -> Result<(), ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    require_in_tables(m, tables)?;
    if m > 1 && !tables.is_squarefree(m) {
        return Err(ArithError::NotSquarefree { m });
    }
    Ok(())
}

/// `Σ_{p | m} 2 log p / (p - 1)` from the factorization of `m`.
fn log_factor_sum(m: u64, tables: &ArithTables) -> f64 {
    tables
        .factorize(m)
        .into_iter()
        .map(|(p, _)| 2.0 * (p as f64).ln() / (p as f64 - 1.0))
        .sum()
}

/// Exhaustive `D_{m,a}(x) = Σ_{n ≤ x, n ≡ a (m)} τ(n)`.
pub fn divisor_sum_ap_empirical(
    m: u64,
    a: u64,
    x: u64,
    tables: &ArithTables,
) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    require_in_tables(x, tables)?;
    let mut sum = 0u64;
    let mut n = a % m;
    if n == 0 {
        n = m;
    }
    while n <= x {
        sum += tables.tau(n) as u64;
        n += m;
    }
    Ok(sum)
}

/// `D_{m,a}(x)` against the main term
/// `x φ(m)/m² (log x + c + 2 Σ_{p|m} log p/(p-1))`, normalized by
/// `x^{0.55}/m^{1/4}`. Requires `m` squarefree and `(a, m) = 1`.
pub fn divisor_sum_ap(
    m: u64,
    a: u64,
    x: u64,
    tables: &ArithTables,
) -> Result<SumComparison, ArithError> {
    require_squarefree(m, tables)?;
    if m > 1 && gcd_u64(a % m, m) != 1 {
        return Err(ArithError::NotCoprime { a, m });
    }
    let empirical = divisor_sum_ap_empirical(m, a, x, tables)? as f64;
    let xf = x as f64;
    let predicted = xf * tables.phi(m) as f64 / (m as f64 * m as f64)
        * (xf.ln() + dirichlet_constant() + log_factor_sum(m, tables));
    let abs_error = (empirical - predicted).abs();
    Ok(SumComparison {
        label: "divisor_ap".to_string(),
        m,
        a,
        d: 0,
        k: 0,
        x,
        empirical,
        predicted,
        abs_error,
        normalized_error: abs_error / progression_envelope(m, x),
    })
}

/// Exhaustive `A_m(x) = Σ_{n ≤ x, (n,m)=1} τ(n)`.
pub fn coprime_divisor_sum_empirical(
    m: u64,
    x: u64,
    tables: &ArithTables,
) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    require_in_tables(x, tables)?;
    let mut sum = 0u64;
    for n in 1..=x {
        if gcd_u64(n % m.max(1), m) == 1 || m == 1 {
            sum += tables.tau(n) as u64;
        }
    }
    Ok(sum)
}

/// `A_m(x)` against `x φ²(m)/m² (log x + c + 2 Σ_{p|m} log p/(p-1))`,
/// normalized by `√x · σ_{-1/2}(m)²`.
pub fn coprime_divisor_sum(
    m: u64,
    x: u64,
    tables: &ArithTables,
) -> Result<SumComparison, ArithError> {
    require_squarefree(m, tables)?;
    let empirical = coprime_divisor_sum_empirical(m, x, tables)? as f64;
    let xf = x as f64;
    let phi = tables.phi(m) as f64;
    let predicted = xf * phi * phi / ((m as f64) * (m as f64))
        * (xf.ln() + dirichlet_constant() + log_factor_sum(m, tables));
    let abs_error = (empirical - predicted).abs();
    let env = xf.sqrt() * sigma_minus_half(m, tables).powi(2);
    Ok(SumComparison {
        label: "coprime_divisor".to_string(),
        m,
        a: 0,
        d: 0,
        k: 0,
        x,
        empirical,
        predicted,
        abs_error,
        normalized_error: abs_error / env,
    })
}

/// `σ_{-1/2}(m) = Σ_{d | m} d^{-1/2}`, multiplicative over squarefree `m`.
pub fn sigma_minus_half(m: u64, tables: &ArithTables) -> f64 {
    tables
        .factorize(m)
        .into_iter()
        .map(|(p, e)| {
            (0..=e)
                .map(|j| (p as f64).powf(-(j as f64) / 2.0))
                .sum::<f64>()
        })
        .product()
}

/// Truncated Euler product `c(W) = Π_{p ∤ W, p ≤ cutoff} (p-1)²/(p(p-2))`;
/// requires `W` even so the `p = 2` factor never appears.
pub fn euler_c_w(w: u64, cutoff: u64) -> Result<f64, ArithError> {
    if w % 2 != 0 {
        return Err(ArithError::NotEven { m: w });
    }
    let mut prod = 1.0f64;
    for p in primes_up_to(cutoff) {
        if w % p == 0 {
            continue;
        }
        let pf = p as f64;
        prod *= (pf - 1.0) * (pf - 1.0) / (pf * (pf - 2.0));
    }
    Ok(prod)
}

/// `g(m') = Π_{p | m'} p(p-1)/(p-2)` on odd squarefree `m'`.
fn g_value(m_odd: u64, tables: &ArithTables) -> f64 {
    tables
        .factorize(m_odd)
        .into_iter()
        .map(|(p, _)| {
            let pf = p as f64;
            pf * (pf - 1.0) / (pf - 2.0)
        })
        .product()
}

/// Exhaustive full-range `Σ_{n ≤ x, n ≡ a (m)} 2^Ω(n)`.
pub fn two_omega_full_range_empirical(
    m: u64,
    a: u64,
    x: u64,
    tables: &ArithTables,
) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    require_in_tables(x, tables)?;
    let mut sum = 0u64;
    let mut n = a % m;
    if n == 0 {
        n = m;
    }
    while n <= x {
        sum += 1u64 << tables.omega(n);
        n += m;
    }
    Ok(sum)
}

/// Dyadic `Σ_{x < n ≤ 2x, n ≡ a (m)} 2^Ω(n)` against the main term
/// `x (φ(W)/W²) (c(W)/g(m')) (log x + c' + 2 Σ_{p|m, p>2} log p/(p-2))`
/// with the canonical split `W = 2`, `m' = m/2`. Requires `m` even
/// squarefree and `(a, m) = 1`.
pub fn two_omega_sum_ap(
    m: u64,
    a: u64,
    x: u64,
    tables: &ArithTables,
    euler_cutoff: u64,
) -> Result<SumComparison, ArithError> {
    require_squarefree(m, tables)?;
    if m % 2 != 0 {
        return Err(ArithError::NotEven { m });
    }
    if gcd_u64(a % m, m) != 1 {
        return Err(ArithError::NotCoprime { a, m });
    }
    require_in_tables(2 * x, tables)?;
    let empirical = (two_omega_full_range_empirical(m, a, 2 * x, tables)?
        - two_omega_full_range_empirical(m, a, x, tables)?) as f64;
    let xf = x as f64;
    // main-term value is independent of how m is split into W · m'
    let c_w = euler_c_w(2, euler_cutoff)?;
    let g_mp = g_value(m / 2, tables);
    let odd_log_sum: f64 = tables
        .factorize(m)
        .into_iter()
        .filter(|(p, _)| *p > 2)
        .map(|(p, _)| 2.0 * (p as f64).ln() / (p as f64 - 2.0))
        .sum();
    let predicted = xf * (1.0 / 4.0) * (c_w / g_mp) * (xf.ln() + dyadic_constant() + odd_log_sum);
    let abs_error = (empirical - predicted).abs();
    Ok(SumComparison {
        label: "two_omega_ap".to_string(),
        m,
        a,
        d: 0,
        k: 0,
        x,
        empirical,
        predicted,
        abs_error,
        normalized_error: abs_error / progression_envelope(m, x),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MertensRow {
    pub x: u64,
    pub sum: f64,
    /// `Σ_{p ≤ x} log p / p - log x`
    pub diff: f64,
    /// whether `diff` lies in the asserted window `[-2, 0]`
    pub within_bounds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MertensReport {
    pub rows: Vec<MertensRow>,
    pub all_within_bounds: bool,
}

/// `Σ_{p ≤ x} log p / p - log x` along the decade grid up to `x_max`.
///
/// The difference tends to a constant near -1.33; rows between 10³ and 10⁷
/// are flagged if they leave `[-2, 0]`.
pub fn mertens_check(x_max: u64, tables: &ArithTables) -> Result<MertensReport, ArithError> {
    if x_max < 2 {
        return Err(ArithError::LimitTooSmall { limit: x_max });
    }
    require_in_tables(x_max, tables)?;
    let mut grid: Vec<u64> = Vec::new();
    let mut t = 10u64;
    while t < x_max {
        grid.push(t);
        t = t.saturating_mul(10);
    }
    grid.push(x_max);
    let mut rows = Vec::new();
    let mut sum = 0.0f64;
    let mut gi = 0usize;
    for n in 2..=x_max {
        if tables.is_prime(n) {
            sum += (n as f64).ln() / n as f64;
        }
        while gi < grid.len() && grid[gi] == n {
            let diff = sum - (n as f64).ln();
            rows.push(MertensRow {
                x: n,
                sum,
                diff,
                within_bounds: (-2.0..=0.0).contains(&diff),
            });
            gi += 1;
        }
    }
    let all_within_bounds = rows
        .iter()
        .filter(|r| r.x >= 1_000 && r.x <= 10_000_000)
        .all(|r| r.within_bounds);
    Ok(MertensReport {
        rows,
        all_within_bounds,
    })
}

//! Number-theoretic primitives and the empirical verification suite built on
//! them: sieved arithmetic-function tables, Kloosterman and Ramanujan sums
//! with the Weil bound, divisor sums in arithmetic progressions against
//! their asymptotic main terms, and partial sums of multiplicative functions
//! whose Dirichlet series is a power of zeta times a convergent factor.
//!
//! Every empirical quantity is an exhaustive sum over its stated range, so
//! reports are reproducible bit for bit.

mod comparison;
mod divsums;
mod expsums;
mod multfn;
mod tables;

pub use comparison::SumComparison;
pub use divsums::{
    coprime_divisor_sum, coprime_divisor_sum_empirical, dirichlet_constant, divisor_sum_ap,
    divisor_sum_ap_empirical, dyadic_constant, euler_c_w, mertens_check, primes_up_to,
    sigma_minus_half, two_omega_full_range_empirical, two_omega_sum_ap, MertensReport, MertensRow,
    DEFAULT_EULER_CUTOFF, EULER_GAMMA,
};
pub use expsums::{
    kloosterman, kloosterman_with_residue, ramanujan_closed_form, ramanujan_identity_check,
    weil_check, RamanujanReport, WeilReport,
};
pub use multfn::{
    density_h, density_h1, density_h2, mu2_over_id, mu2_over_phi, omega_k_partial_sum,
    sieve_weight_f, sieve_weight_f1, sieve_weight_g, sieve_weight_g1, MultiplicativeFunctionSpec,
    PrimeRat,
};
pub use tables::{ArithTables, BYTES_PER_ENTRY};

/// Errors across the arithmetic kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArithError {
    #[error("table limit {limit} below 2")]
    LimitTooSmall { limit: u64 },
    #[error("table limit {limit} exceeds the u32 value range")]
    LimitTooLarge { limit: u64 },
    #[error("tables to {limit} need {need_bytes} bytes, over the {budget_bytes}-byte budget")]
    TableBudgetExceeded {
        limit: u64,
        need_bytes: u64,
        budget_bytes: u64,
    },
    #[error("computation needs values up to {needed} but tables stop at {limit}")]
    BeyondTables { needed: u64, limit: u64 },
    #[error("modulus {m} is not squarefree")]
    NotSquarefree { m: u64 },
    #[error("modulus {m} is not even")]
    NotEven { m: u64 },
    #[error("residue {a} is not coprime to modulus {m}")]
    NotCoprime { a: u64, m: u64 },
    #[error("imaginary part {value:.3e} of an exponential sum exceeds the 1e-9 self-check")]
    ImaginaryResidue { value: f64 },
    #[error("Weil bound violated at S({a},{b},{m}): ratio {ratio}")]
    WeilViolation { a: u64, b: u64, m: u64, ratio: f64 },
    #[error("function `{name}` is not supported on squarefree integers")]
    UnsupportedFunction { name: String },
    #[error("modulus {m} must be at least 1")]
    ZeroModulus { m: u64 },
}

/// Exact membership test for the power-form support bound
/// `max{d1^{2/3} d2, d1 d2^{2/3}} <= z`, by cube-power integer comparison:
/// both `d1² d2³ <= z³` and `d1³ d2² <= z³`.
pub fn support_pair_within_bound(d1: u64, d2: u64, z: u64) -> bool {
    let d1 = d1 as u128;
    let d2 = d2 as u128;
    let z3 = (z as u128).pow(3);
    d1.pow(2) * d2.pow(3) <= z3 && d1.pow(3) * d2.pow(2) <= z3
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

//! Complete exponential sums over units: Kloosterman sums, their Ramanujan
//! degenerate case, and a sweep verifying the Weil bound.

use serde::Serialize;

use super::{gcd_u64, ArithError, ArithTables};

const IMAG_TOLERANCE: f64 = 1e-9;

fn mod_reduce(a: i64, m: u64) -> u64 {
    let m = m as i64;
    (((a % m) + m) % m) as u64
}

/// Modular inverses of the units mod m: `inv[h] = h̄` with `h h̄ ≡ 1`, and
/// `inv[h] = 0` for non-units.
fn unit_inverses(m: u64) -> Vec<u64> {
    let mut inv = vec![0u64; m as usize];
    for h in 1..m {
        if gcd_u64(h, m) != 1 {
            continue;
        }
        // extended Euclid
        let (mut r0, mut r1) = (m as i64, h as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        inv[h as usize] = mod_reduce(t0, m);
    }
    inv
}

/// `S(a,b,m) = Σ_{h h̄ ≡ 1 (m)} e((a h + b h̄)/m)` with its imaginary part,
/// which must cancel by the `h ↔ h̄` symmetry.
pub fn kloosterman_with_residue(a: i64, b: i64, m: u64) -> Result<(f64, f64), ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    if m == 1 {
        // the single residue class counts as a unit: e(0) = 1
        return Ok((1.0, 0.0));
    }
    let a = mod_reduce(a, m);
    let b = mod_reduce(b, m);
    let inv = unit_inverses(m);
    let step = std::f64::consts::TAU / m as f64;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for h in 1..m {
        if gcd_u64(h, m) != 1 {
            continue;
        }
        let idx = (a * h + b * inv[h as usize]) % m;
        let angle = step * idx as f64;
        re += angle.cos();
        im += angle.sin();
    }
    Ok((re, im))
}

/// Kloosterman sum as a real number; errors if the imaginary residue
/// exceeds the 1e-9 self-check.
pub fn kloosterman(a: i64, b: i64, m: u64) -> Result<f64, ArithError> {
    let (re, im) = kloosterman_with_residue(a, b, m)?;
    if im.abs() > IMAG_TOLERANCE {
        return Err(ArithError::ImaginaryResidue { value: im });
    }
    Ok(re)
}

/// Closed form `S(a,0,m) = μ(m) μ((a,m)) φ((a,m))` for squarefree `m`.
pub fn ramanujan_closed_form(a: i64, m: u64, tables: &ArithTables) -> Result<i64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus { m });
    }
    if m == 1 {
        return Ok(1);
    }
    if m > tables.limit() {
        return Err(ArithError::BeyondTables {
            needed: m,
            limit: tables.limit(),
        });
    }
    if !tables.is_squarefree(m) {
        return Err(ArithError::NotSquarefree { m });
    }
    let ar = mod_reduce(a, m);
    let g = if ar == 0 { m } else { gcd_u64(ar, m) };
    Ok(tables.mu(m) as i64 * tables.mu(g) as i64 * tables.phi(g) as i64)
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilReport {
    pub m_max: u64,
    pub moduli_checked: u64,
    pub sums_checked: u64,
    pub max_ratio: f64,
    pub worst_case: (u64, u64, u64),
    pub violations: u64,
}

/// Checks `|S(a,b,m)| ≤ √m · τ(m) · √((a,b,m))` for every squarefree
/// `m ≤ m_max` and all residue pairs. Any violation is a hard error: the
/// bound is unconditional, so a failure signals a sum bug.
pub fn weil_check(m_max: u64, tables: &ArithTables) -> Result<WeilReport, ArithError> {
    if m_max > tables.limit() {
        return Err(ArithError::BeyondTables {
            needed: m_max,
            limit: tables.limit(),
        });
    }
    let mut report = WeilReport {
        m_max,
        moduli_checked: 0,
        sums_checked: 0,
        max_ratio: 0.0,
        worst_case: (0, 0, 0),
        violations: 0,
    };
    for m in 1..=m_max {
        if m > 1 && !tables.is_squarefree(m) {
            continue;
        }
        report.moduli_checked += 1;
        let inv = unit_inverses(m);
        let step = std::f64::consts::TAU / m as f64;
        let cos_table: Vec<f64> = (0..m).map(|k| (step * k as f64).cos()).collect();
        let sin_table: Vec<f64> = (0..m).map(|k| (step * k as f64).sin()).collect();
        let units: Vec<u64> = (1..m).filter(|&h| gcd_u64(h, m) == 1).collect();
        let tau_m = if m == 1 { 1.0 } else { tables.tau(m) as f64 };
        for a in 0..m {
            for b in 0..m {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                if m == 1 {
                    re = 1.0;
                } else {
                    for &h in &units {
                        let idx = ((a * h + b * inv[h as usize]) % m) as usize;
                        re += cos_table[idx];
                        im += sin_table[idx];
                    }
                }
                if im.abs() > IMAG_TOLERANCE {
                    return Err(ArithError::ImaginaryResidue { value: im });
                }
                let g = if a == 0 && b == 0 {
                    m
                } else {
                    gcd_u64(gcd_u64(a, b), m)
                };
                let bound = (m as f64).sqrt() * tau_m * (g as f64).sqrt();
                let ratio = re.abs() / bound;
                report.sums_checked += 1;
                if ratio > report.max_ratio {
                    report.max_ratio = ratio;
                    report.worst_case = (a, b, m);
                }
                if ratio > 1.0 + 1e-9 {
                    return Err(ArithError::WeilViolation { a, b, m, ratio });
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct RamanujanReport {
    pub m_max: u64,
    pub sums_checked: u64,
    pub max_float_gap: f64,
    pub mismatches: u64,
}

/// Compares the direct sum `S(a,0,m)` against the Möbius–totient closed form
/// for all squarefree `m ≤ m_max` and all residues `a`. Values are integers,
/// so after rounding the match must be exact.
pub fn ramanujan_identity_check(
    m_max: u64,
    tables: &ArithTables,
) -> Result<RamanujanReport, ArithError> {
    let mut report = RamanujanReport {
        m_max,
        sums_checked: 0,
        max_float_gap: 0.0,
        mismatches: 0,
    };
    for m in 1..=m_max {
        if m > 1 && !tables.is_squarefree(m) {
            continue;
        }
        for a in 0..m.max(1) {
            let direct = kloosterman(a as i64, 0, m)?;
            let exact = ramanujan_closed_form(a as i64, m, tables)?;
            let gap = (direct - exact as f64).abs();
            report.sums_checked += 1;
            report.max_float_gap = report.max_float_gap.max(gap);
            if direct.round() as i64 != exact {
                report.mismatches += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> ArithTables {
        ArithTables::build(200, u64::MAX).unwrap()
    }

    #[test]
    fn degenerate_sum_counts_units() {
        // S(0,0,m) = φ(m)
        let t = tables();
        for m in 1..=60u64 {
            let s = kloosterman(0, 0, m).unwrap();
            let expected = if m == 1 { 1.0 } else { t.phi(m) as f64 };
            assert!(
                (s - expected).abs() < 1e-8,
                "S(0,0,{}) = {} != {}",
                m,
                s,
                expected
            );
        }
    }

    #[test]
    fn single_term_sum() {
        // m = 2 has the single unit h = 1: e((1+1)/2) = e(1) = 1
        let s = kloosterman(1, 1, 2).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetry_in_arguments() {
        // S(a,b,m) = S(b,a,m) by the substitution h <-> h̄
        for m in 1..=50u64 {
            for a in 0..m.min(12) {
                for b in 0..m.min(12) {
                    let s1 = kloosterman(a as i64, b as i64, m).unwrap();
                    let s2 = kloosterman(b as i64, a as i64, m).unwrap();
                    assert!((s1 - s2).abs() < 1e-8, "asymmetry at ({},{},{})", a, b, m);
                }
            }
        }
    }

    #[test]
    fn ramanujan_identity_exact_to_one_hundred() {
        let t = ArithTables::build(200, u64::MAX).unwrap();
        let report = ramanujan_identity_check(100, &t).unwrap();
        assert_eq!(report.mismatches, 0);
        assert!(report.max_float_gap < 1e-7, "gap {}", report.max_float_gap);
        assert!(report.sums_checked > 2000);
    }

    #[test]
    fn negative_arguments_reduce_mod_m() {
        let s1 = kloosterman(-3, 5, 14).unwrap();
        let s2 = kloosterman(11, 5, 14).unwrap();
        assert!((s1 - s2).abs() < 1e-10);
    }

    #[test]
    fn weil_sweep_small() {
        let t = tables();
        let report = weil_check(30, &t).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.max_ratio <= 1.0 + 1e-9);
        assert!(report.max_ratio > 0.2, "ratio suspiciously small");
    }

    #[test]
    fn prime_modulus_bound_specializes() {
        // for prime m and (ab, m) = 1 the bound reads 2√m
        let t = tables();
        for m in [7u64, 11, 13, 17, 19, 23] {
            assert_eq!(t.tau(m), 2);
            for a in 1..m.min(6) {
                for b in 1..m.min(6) {
                    let s = kloosterman(a as i64, b as i64, m).unwrap();
                    assert!(s.abs() <= 2.0 * (m as f64).sqrt() + 1e-9);
                }
            }
        }
    }
}

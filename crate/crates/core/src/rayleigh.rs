//! Assembly of the exact matrices behind the quadratic forms `2·R1` and
//! `2·R2`, and the symmetric-definite generalized eigenproblem
//! `B v = λ A v` whose smallest eigenvalue is half the achievable bound.
//!
//! Matrix entries are exact rationals; the eigensolve reduces the pencil by a
//! Cholesky factorization of `A` to a standard symmetric problem and runs
//! cyclic Jacobi on it, either in `f64` or in extended-precision floats. The
//! reported residual `‖Bv - λAv‖₂ / ‖Av‖₂` is always evaluated against the
//! exact entries in 256-bit arithmetic, so it measures the returned pair, not
//! the solver's internal rounding.

use rayon::prelude::*;
use serde::Serialize;

use crate::bigfloat::{rational_to_f64, BigFloat};
use crate::exactpoly::Rational;
use crate::functionals::{BasisSpec, FormAssembler, FunctionalsError};

/// Exact symmetric matrices `A = 2·B1` and `B = 2·B2` over a basis, so that
/// `aᵀAa = 2 R1(P_a)` and `aᵀBa = 2 R2(P_a)`.
#[derive(Clone)]
pub struct FormPair {
    degree: usize,
    a: Vec<Vec<Rational>>,
    b: Vec<Vec<Rational>>,
}

#[derive(Debug, thiserror::Error)]
pub enum RayleighError {
    #[error(transparent)]
    Functionals(#[from] FunctionalsError),
    #[error("matrix A is not numerically positive definite (pivot {pivot} at index {index}); this signals an assembly bug")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error(
        "Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal {offdiag:.3e})"
    )]
    NoConvergence { sweeps: usize, offdiag: f64 },
    #[error("eigen residual {residual:.3e} exceeds tolerance {tol:.3e} at precision {bits} bits")]
    ResidualTooLarge { residual: f64, tol: f64, bits: u32 },
    #[error("coefficient vector is zero")]
    ZeroVector,
    #[error("coefficient vector has length {got}, basis has {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// Builds both exact matrices for the given basis degree.
///
/// Entries for distinct index pairs are independent; they are computed in
/// parallel and mirrored across the diagonal, so symmetry holds by
/// construction and the result is deterministic.
pub fn assemble(spec: &BasisSpec) -> Result<FormPair, RayleighError> {
    let asm = FormAssembler::new(spec)?;
    let n = spec.size();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k..n).map(move |l| (k, l))).collect();
    let entries: Vec<(usize, usize, Rational, Rational)> = pairs
        .into_par_iter()
        .map(|(k, l)| {
            let a = asm.entry_r1(k, l) * Rational::from_integer(2.into());
            let b = asm.entry_r2(k, l) * Rational::from_integer(2.into());
            (k, l, a, b)
        })
        .collect();
    let zero = Rational::from_integer(0.into());
    let mut a = vec![vec![zero.clone(); n]; n];
    let mut b = vec![vec![zero; n]; n];
    for (k, l, va, vb) in entries {
        a[k][l] = va.clone();
        a[l][k] = va;
        b[k][l] = vb.clone();
        b[l][k] = vb;
    }
    Ok(FormPair {
        degree: spec.degree(),
        a,
        b,
    })
}

impl FormPair {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Vec<Rational>] {
        &self.b
    }

    pub fn a_f64(&self) -> Vec<Vec<f64>> {
        to_f64_matrix(&self.a)
    }

    pub fn b_f64(&self) -> Vec<Vec<f64>> {
        to_f64_matrix(&self.b)
    }

    /// Principal submatrices for a lower degree of the same nested basis.
    ///
    /// Every degree-`m` basis element `(x+y)^i (x²+y²)^j` with `i,j ≤ m` is
    /// also a degree-`n` element, so the bilinear entries transfer verbatim
    /// through the index maps.
    pub fn restrict_to_degree(&self, m: usize) -> Result<FormPair, RayleighError> {
        let big = BasisSpec::new(self.degree);
        let small = BasisSpec::new(m);
        if m > self.degree {
            return Err(RayleighError::DimensionMismatch {
                got: small.size(),
                expected: self.size(),
            });
        }
        let map: Vec<usize> = (0..small.size())
            .map(|k| {
                let (i, j) = small.exponents(k).expect("k < size");
                big.pos(i, j)
            })
            .collect();
        let pick = |m0: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            map.iter()
                .map(|&r| map.iter().map(|&c| m0[r][c].clone()).collect())
                .collect()
        };
        Ok(FormPair {
            degree: m,
            a: pick(&self.a),
            b: pick(&self.b),
        })
    }
}

fn to_f64_matrix(m: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| row.iter().map(rational_to_f64).collect())
        .collect()
}

/// Result of the generalized eigensolve.
#[derive(Debug, Clone, Serialize)]
pub struct Optimum {
    pub degree: usize,
    pub basis_size: usize,
    pub min_eigenvalue: f64,
    /// `2 · min_eigenvalue`: the threshold the optimized weights achieve.
    pub lambda_bound: f64,
    /// Eigenvector, unit Euclidean norm, first nonzero entry positive.
    pub coefficients: Vec<f64>,
    /// `‖Bv - λAv‖₂ / ‖Av‖₂` against the exact matrices.
    pub residual: f64,
    pub precision_bits: u32,
    pub sweeps: usize,
}

/// Working precision for the eigensolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Precision {
    /// Try `f64` first, escalate to 256-bit floats if the residual check fails.
    Auto,
    Double,
    Extended(u32),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    pub precision: Precision,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_sweeps: 10_000,
            precision: Precision::Auto,
        }
    }
}

/// Minimal abstraction the factorization and Jacobi iteration need; lets the
/// same code run in `f64` and in `BigFloat`.
trait Real: Clone {
    fn from_f64_like(&self, x: f64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive_value(&self) -> bool;
    fn lt(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
    /// Exact rational value of the represented number.
    fn to_rational(&self) -> Rational;
    /// Unit roundoff of the representation.
    fn eps(&self) -> f64;
}

impl Real for f64 {
    fn from_f64_like(&self, x: f64) -> Self {
        x
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_positive_value(&self) -> bool {
        *self > 0.0
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite value")
    }
    fn eps(&self) -> f64 {
        f64::EPSILON
    }
}

impl Real for BigFloat {
    fn from_f64_like(&self, x: f64) -> Self {
        BigFloat::from_f64(x, self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        BigFloat::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigFloat::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigFloat::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        BigFloat::div(self, o)
    }
    fn neg(&self) -> Self {
        BigFloat::neg(self)
    }
    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn is_zero(&self) -> bool {
        BigFloat::is_zero(self)
    }
    fn is_positive_value(&self) -> bool {
        !self.is_zero() && !self.is_negative()
    }
    fn lt(&self, o: &Self) -> bool {
        self.cmp_value(o) == std::cmp::Ordering::Less
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        BigFloat::to_rational(self)
    }
    fn eps(&self) -> f64 {
        2f64.powi(-(self.prec() as i32) + 1)
    }
}

enum SolverFailure {
    NotPositiveDefinite { index: usize, pivot: f64 },
    NoConvergence { sweeps: usize, offdiag: f64 },
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky<T: Real>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>, SolverFailure> {
    let n = a.len();
    let zero = a[0][0].from_f64_like(0.0);
    let mut l = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j].clone();
            for k in 0..j {
                s = s.sub(&l[i][k].mul(&l[j][k]));
            }
            if i == j {
                if !s.is_positive_value() {
                    return Err(SolverFailure::NotPositiveDefinite {
                        index: i,
                        pivot: s.to_f64(),
                    });
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s.div(&l[j][j]);
            }
        }
    }
    Ok(l)
}

/// `S = L⁻¹ B L⁻ᵀ` by two triangular solves.
fn reduce_pencil<T: Real>(l: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = l.len();
    // X = L⁻¹ B  (forward substitution down each column of B)
    let mut x: Vec<Vec<T>> = b.to_vec();
    for col in 0..n {
        for i in 0..n {
            let mut s = x[i][col].clone();
            for k in 0..i {
                s = s.sub(&l[i][k].mul(&x[k][col]));
            }
            x[i][col] = s.div(&l[i][i]);
        }
    }
    // S = X L⁻ᵀ: solve S Lᵀ = X row by row (forward substitution again)
    let mut s_mat = x;
    for row in 0..n {
        for j in 0..n {
            let mut s = s_mat[row][j].clone();
            for k in 0..j {
                s = s.sub(&l[j][k].mul(&s_mat[row][k]));
            }
            s_mat[row][j] = s.div(&l[j][j]);
        }
    }
    s_mat
}

/// Cyclic Jacobi on a symmetric matrix. Returns (diagonal, accumulated V,
/// sweeps used); `s` is destroyed.
type JacobiOutcome<T> = (Vec<T>, Vec<Vec<T>>, usize);

fn jacobi<T: Real>(s: &mut [Vec<T>], max_sweeps: usize) -> Result<JacobiOutcome<T>, SolverFailure> {
    let n = s.len();
    let zero = s[0][0].from_f64_like(0.0);
    let one = s[0][0].from_f64_like(1.0);
    let half = s[0][0].from_f64_like(0.5);
    let mut v = vec![vec![zero.clone(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = one.clone();
    }
    if n == 1 {
        return Ok((vec![s[0][0].clone()], v, 0));
    }
    // stop when every off-diagonal entry is below eps-scaled Frobenius norm
    let mut fro = zero.clone();
    for row in s.iter() {
        for e in row {
            fro = fro.add(&e.mul(e));
        }
    }
    let scale = fro.sqrt();
    let threshold = scale.mul(&one.from_f64_like(one.eps() * 4.0));

    for sweep in 1..=max_sweeps {
        let mut max_off = zero.clone();
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = s[p][q].clone();
                let a_abs = apq.abs();
                if max_off.lt(&a_abs) {
                    max_off = a_abs.clone();
                }
                if !threshold.lt(&a_abs) {
                    continue;
                }
                let app = s[p][p].clone();
                let aqq = s[q][q].clone();
                // rotation angle from tan(2θ) = 2 a_pq / (a_qq - a_pp)
                let theta = aqq.sub(&app).mul(&half).div(&apq);
                let t_abs_inv = theta.abs().add(&one.add(&theta.mul(&theta)).sqrt());
                let t = if theta.is_zero() || !theta.lt(&zero) {
                    one.div(&t_abs_inv)
                } else {
                    one.div(&t_abs_inv).neg()
                };
                let c = one.div(&one.add(&t.mul(&t)).sqrt());
                let sn = t.mul(&c);

                for k in 0..n {
                    let skp = s[k][p].clone();
                    let skq = s[k][q].clone();
                    s[k][p] = c.mul(&skp).sub(&sn.mul(&skq));
                    s[k][q] = sn.mul(&skp).add(&c.mul(&skq));
                }
                for k in 0..n {
                    let spk = s[p][k].clone();
                    let sqk = s[q][k].clone();
                    s[p][k] = c.mul(&spk).sub(&sn.mul(&sqk));
                    s[q][k] = sn.mul(&spk).add(&c.mul(&sqk));
                }
                for k in 0..n {
                    let vkp = v[k][p].clone();
                    let vkq = v[k][q].clone();
                    v[k][p] = c.mul(&vkp).sub(&sn.mul(&vkq));
                    v[k][q] = sn.mul(&vkp).add(&c.mul(&vkq));
                }
            }
        }
        if !threshold.lt(&max_off) {
            let diag = (0..n).map(|i| s[i][i].clone()).collect();
            return Ok((diag, v, sweep));
        }
    }
    // recompute the largest off-diagonal entry for the error report
    let mut worst = 0f64;
    for p in 0..n - 1 {
        for q in p + 1..n {
            worst = worst.max(s[p][q].to_f64().abs());
        }
    }
    Err(SolverFailure::NoConvergence {
        sweeps: max_sweeps,
        offdiag: worst,
    })
}

/// Back substitution for `Lᵀ v = u`.
fn solve_lt<T: Real>(l: &[Vec<T>], u: &[T]) -> Vec<T> {
    let n = l.len();
    let mut v: Vec<T> = u.to_vec();
    for i in (0..n).rev() {
        let mut s = v[i].clone();
        for k in i + 1..n {
            s = s.sub(&l[k][i].mul(&v[k]));
        }
        v[i] = s.div(&l[i][i]);
    }
    v
}

fn solve_at_precision<T: Real>(
    a: &[Vec<T>],
    b: &[Vec<T>],
    max_sweeps: usize,
) -> Result<(T, Vec<T>, usize), SolverFailure> {
    let l = cholesky(a)?;
    let mut s = reduce_pencil(&l, b);
    let (diag, v, sweeps) = jacobi(&mut s, max_sweeps)?;
    let mut min_idx = 0;
    for i in 1..diag.len() {
        if diag[i].lt(&diag[min_idx]) {
            min_idx = i;
        }
    }
    let u: Vec<T> = v.iter().map(|row| row[min_idx].clone()).collect();
    let mut vec = solve_lt(&l, &u);
    // normalize to unit length, first significant entry positive
    let zero = vec[0].from_f64_like(0.0);
    let mut norm2 = zero.clone();
    for e in &vec {
        norm2 = norm2.add(&e.mul(e));
    }
    let norm = norm2.sqrt();
    for e in vec.iter_mut() {
        *e = e.div(&norm);
    }
    let flip = vec
        .iter()
        .find(|e| e.to_f64().abs() > 1e-12)
        .map(|e| e.to_f64() < 0.0)
        .unwrap_or(false);
    if flip {
        for e in vec.iter_mut() {
            *e = e.neg();
        }
    }
    Ok((diag[min_idx].clone(), vec, sweeps))
}

/// `‖Bv - λAv‖₂ / ‖Av‖₂` computed fully in exact rational arithmetic; only
/// the final square root rounds. `λ` and `v` are the solver's
/// working-precision values, which convert to rationals without loss.
fn exact_residual(fp: &FormPair, lambda: &Rational, v: &[Rational]) -> f64 {
    use num_traits::Zero;
    let n = fp.size();
    let mut r_norm2 = Rational::zero();
    let mut av_norm2 = Rational::zero();
    for i in 0..n {
        let mut av = Rational::zero();
        let mut bv = Rational::zero();
        for j in 0..n {
            av += &fp.a[i][j] * &v[j];
            bv += &fp.b[i][j] * &v[j];
        }
        let r = bv - lambda * &av;
        r_norm2 += &r * &r;
        av_norm2 += &av * &av;
    }
    if av_norm2.is_zero() {
        return f64::INFINITY;
    }
    rational_to_f64(&(r_norm2 / av_norm2)).sqrt()
}

fn to_bigfloat_matrix(m: &[Vec<Rational>], prec: u32) -> Vec<Vec<BigFloat>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|q| BigFloat::from_rational(q, prec))
                .collect()
        })
        .collect()
}

impl From<SolverFailure> for RayleighError {
    fn from(f: SolverFailure) -> Self {
        match f {
            SolverFailure::NotPositiveDefinite { index, pivot } => {
                RayleighError::NotPositiveDefinite { index, pivot }
            }
            SolverFailure::NoConvergence { sweeps, offdiag } => {
                RayleighError::NoConvergence { sweeps, offdiag }
            }
        }
    }
}

/// Precision used when `Auto` escalates past `f64`.
pub const AUTO_EXTENDED_BITS: u32 = 256;

fn solve_generic<T: Real>(
    fp: &FormPair,
    a: &[Vec<T>],
    b: &[Vec<T>],
    opts: &SolveOptions,
    bits: u32,
) -> Result<Optimum, RayleighError> {
    let (lam, v, sweeps) = solve_at_precision(a, b, opts.max_sweeps)?;
    // the residual is measured for the working-precision pair, exactly
    let lam_exact = lam.to_rational();
    let v_exact: Vec<Rational> = v.iter().map(|e| e.to_rational()).collect();
    let residual = exact_residual(fp, &lam_exact, &v_exact);
    if residual > opts.tol {
        return Err(RayleighError::ResidualTooLarge {
            residual,
            tol: opts.tol,
            bits,
        });
    }
    Ok(Optimum {
        degree: fp.degree,
        basis_size: fp.size(),
        min_eigenvalue: lam.to_f64(),
        lambda_bound: 2.0 * lam.to_f64(),
        coefficients: v.iter().map(|e| e.to_f64()).collect(),
        residual,
        precision_bits: bits,
        sweeps,
    })
}

/// Smallest generalized eigenvalue of `B v = λ A v` and its eigenvector.
pub fn min_generalized_eigenpair(
    fp: &FormPair,
    opts: &SolveOptions,
) -> Result<Optimum, RayleighError> {
    let solve_double = |opts: &SolveOptions| solve_generic(fp, &fp.a_f64(), &fp.b_f64(), opts, 53);
    let solve_extended = |bits: u32, opts: &SolveOptions| {
        let a = to_bigfloat_matrix(&fp.a, bits);
        let b = to_bigfloat_matrix(&fp.b, bits);
        solve_generic(fp, &a, &b, opts, bits)
    };

    match opts.precision {
        Precision::Double => solve_double(opts),
        Precision::Extended(bits) => solve_extended(bits, opts),
        Precision::Auto => {
            // f64 first; escalate when rounding breaks the factorization,
            // the iteration, or the residual contract
            match solve_double(opts) {
                Ok(opt) => Ok(opt),
                Err(RayleighError::ResidualTooLarge { .. })
                | Err(RayleighError::NotPositiveDefinite { .. })
                | Err(RayleighError::NoConvergence { .. }) => {
                    solve_extended(AUTO_EXTENDED_BITS, opts)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// `(aᵀBa) / (aᵀAa) = R2(P_a) / R1(P_a)`: half the λ the polynomial with
/// coefficients `a` achieves.
pub fn rayleigh_quotient(fp: &FormPair, a: &[f64]) -> Result<f64, RayleighError> {
    if a.len() != fp.size() {
        return Err(RayleighError::DimensionMismatch {
            got: a.len(),
            expected: fp.size(),
        });
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(RayleighError::ZeroVector);
    }
    let am = fp.a_f64();
    let bm = fp.b_f64();
    let quad = |m: &[Vec<f64>]| -> f64 {
        let mut acc = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                acc += a[i] * e * a[j];
            }
        }
        acc
    };
    Ok(quad(&bm) / quad(&am))
}

//! Shared numeric oracles for the integration tests: Gauss–Legendre
//! quadrature in doubles, an exact interpolatory quadrature over rationals,
//! and region integrals computed directly from the eta boundary — all
//! independent of the symbolic antiderivative machinery they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use twinsieve_core::exactpoly::{rat, MultiPoly, Rational};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence; exact for polynomial
    /// degree ≤ 2n - 1.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `eta(s) = min{1 - 2s/3, 3(1-s)/2}` in doubles.
pub fn eta_f64(s: f64) -> f64 {
    (1.0 - 2.0 * s / 3.0).min(1.5 * (1.0 - s))
}

/// Numeric `∬_{T_{s1,s2}} P(t1,t2) dt2 dt1` straight from the eta boundary,
/// splitting the outer variable at the 3/5 kink.
pub fn numeric_q1<F: Fn(f64, f64) -> f64>(p: &F, s1: f64, s2: f64, gl: &GaussLegendre) -> f64 {
    let hi = eta_f64(s2);
    if s1 >= hi {
        return 0.0;
    }
    let inner = |t1: f64| gl.integrate(|t2| p(t1, t2), s2, eta_f64(t1));
    if s1 < 0.6 && hi > 0.6 {
        gl.integrate(inner, s1, 0.6) + gl.integrate(inner, 0.6, hi)
    } else {
        gl.integrate(inner, s1, hi)
    }
}

/// Numeric `∫_{s2}^{eta(s1)} P(s1, t2) dt2`.
pub fn numeric_q2<F: Fn(f64, f64) -> f64>(p: &F, s1: f64, s2: f64, gl: &GaussLegendre) -> f64 {
    gl.integrate(|t2| p(s1, t2), s2, eta_f64(s1))
}

/// Numeric `R1(P) = ∬_T Q1²` over the three outer regions.
pub fn numeric_r1<F: Fn(f64, f64) -> f64 + Copy>(p: &F, gl: &GaussLegendre) -> f64 {
    let q1sq = |s1: f64, s2: f64| {
        let q = numeric_q1(p, s1, s2, gl);
        q * q
    };
    integrate_outer_regions(&q1sq, gl)
}

/// Numeric `R2(P) = ∬_T (s1(3-s1) Q2² + 4 s1 Q1 Q2)`.
pub fn numeric_r2<F: Fn(f64, f64) -> f64 + Copy>(p: &F, gl: &GaussLegendre) -> f64 {
    let integrand = |s1: f64, s2: f64| {
        let q1 = numeric_q1(p, s1, s2, gl);
        let q2 = numeric_q2(p, s1, s2, gl);
        s1 * (3.0 - s1) * q2 * q2 + 4.0 * s1 * q1 * q2
    };
    integrate_outer_regions(&integrand, gl)
}

/// `∬_T f(s1,s2) ds2 ds1` over the low-low, low-high, high-low split.
pub fn integrate_outer_regions<F: Fn(f64, f64) -> f64>(f: &F, gl: &GaussLegendre) -> f64 {
    let low_low = gl.integrate(|s1| gl.integrate(|s2| f(s1, s2), 0.0, 0.6), 0.0, 0.6);
    let low_high = gl.integrate(
        |s1| gl.integrate(|s2| f(s1, s2), 0.6, 1.0 - 2.0 * s1 / 3.0),
        0.0,
        0.6,
    );
    let high_low = gl.integrate(
        |s1| gl.integrate(|s2| f(s1, s2), 0.0, 1.5 * (1.0 - s1)),
        0.6,
        1.0,
    );
    low_low + low_high + high_low
}

/// Exact interpolatory quadrature at equispaced rational nodes: integrates
/// any polynomial of degree ≤ `degree` over `[a, b]` exactly, without
/// antiderivatives (weights come from solving the moment system).
pub fn exact_interpolatory_integral<F: Fn(&Rational) -> Rational>(
    f: F,
    a: &Rational,
    b: &Rational,
    degree: usize,
) -> Rational {
    let n = degree + 1;
    if a == b {
        return Rational::from_integer(0.into());
    }
    // nodes a + i (b-a)/degree (or the midpoint when degree = 0)
    let nodes: Vec<Rational> = if degree == 0 {
        vec![(a + b) / rat(2, 1)]
    } else {
        (0..n)
            .map(|i| a + (b - a) * rat(i as i64, degree as i64))
            .collect()
    };
    // moment system: Σ_i w_i x_i^k = ∫_a^b x^k dx for k < n
    let mut matrix: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut rhs: Vec<Rational> = Vec::with_capacity(n);
    let mut a_pow = a.clone();
    let mut b_pow = b.clone();
    for k in 0..n {
        matrix.push(nodes.iter().map(|x| pow_r(x, k)).collect());
        rhs.push((&b_pow - &a_pow) / rat(k as i64 + 1, 1));
        a_pow *= a;
        b_pow *= b;
    }
    let weights = solve_rational(matrix, rhs);
    nodes.iter().zip(&weights).map(|(x, w)| w * f(x)).sum()
}

fn pow_r(x: &Rational, k: usize) -> Rational {
    let mut acc = rat(1, 1);
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Gaussian elimination with partial (first-nonzero) pivoting over rationals.
fn solve_rational(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    use num_traits::Zero;
    let n = rhs.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular moment system");
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let piv = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &piv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
            let sub = &factor * &rhs[col];
            rhs[r] -= sub;
        }
    }
    (0..n).map(|i| &rhs[i] / &m[i][i]).collect()
}

/// Evaluates a bivariate `MultiPoly` as an `f64` function of its two
/// variables, for feeding the numeric oracles.
pub fn poly_as_f64_fn(p: &MultiPoly) -> impl Fn(f64, f64) -> f64 + Copy + '_ {
    move |x: f64, y: f64| {
        let mut acc = 0.0;
        for (e, c) in p.terms() {
            let cf = twinsieve_core::bigfloat::rational_to_f64(c);
            acc += cf * x.powi(e[0] as i32) * y.powi(e[1] as i32);
        }
        acc
    }
}

/// Exact rational evaluation helper for bivariate polynomials.
pub fn eval_bivariate(p: &MultiPoly, x: &Rational, y: &Rational) -> Rational {
    let vars = p.vars();
    let mut point = BTreeMap::new();
    point.insert(vars[0].clone(), x.clone());
    point.insert(vars[1].clone(), y.clone());
    p.eval(&point).unwrap()
}

/// Deterministic pseudo-random rationals in (0, 1) with small denominators.
pub struct RationalStream {
    state: u64,
}

impl RationalStream {
    pub fn new(seed: u64) -> Self {
        RationalStream { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state ^= self.state << 13;
        self.state ^= self.state >> 7;
        self.state ^= self.state << 17;
        self.state
    }

    /// Uniform-ish rational in `(lo, hi)` with denominator below 1000.
    pub fn rational_in(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let den = 97 + (self.next_u64() % 900) as i64;
        let num = 1 + (self.next_u64() % (den as u64 - 1)) as i64;
        lo + (hi - lo) * rat(num, den)
    }
}

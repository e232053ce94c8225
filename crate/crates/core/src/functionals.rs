//! The support geometry in logarithmic coordinates and the exact integral
//! functionals built on it.
//!
//! The region `T` is the pentagon `{(x1,x2) ∈ [0,1]² : x1 + 2x2/3 ≤ 1,
//! 2x1/3 + x2 ≤ 1}`; its upper boundary in each variable is
//! `eta(s) = min{1 - 2s/3, 3(1-s)/2}`, with the two branches crossing at
//! `s = 3/5`. `T_{s1,s2}` truncates the lower-left corner at `(s1,s2)`.
//!
//! For a weight polynomial `P` the functionals are
//!   `Q1(s1,s2) = ∬_{T_{s1,s2}} P(t1,t2) dt2 dt1`
//!   `Q2(s1,s2) = ∫_{s2}^{eta(s1)} P(s1,t2) dt2`
//!   `R1(P) = ∬_T Q1²`,  `R2(P) = ∬_T (s1(3-s1) Q2² + 4 s1 Q1 Q2)`
//! all evaluated exactly, piecewise over the breakpoint at 3/5.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactpoly::{rat, MultiPoly, PolyError, Rational};

/// Working variable order for the iterated integrals.
pub const VARS4: [&str; 4] = ["t1", "t2", "s1", "s2"];
/// Variable order of the outer (truncation-point) coordinates.
pub const SVARS: [&str; 2] = ["s1", "s2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionalsError {
    #[error("eta argument {0} lies outside [0, 1]")]
    EtaOutOfDomain(String),
    #[error("basis index {index} out of range: degree {degree} has {size} elements")]
    IndexOutOfRange {
        index: usize,
        degree: usize,
        size: usize,
    },
    #[error("weight polynomial must be in exactly two variables, got {0}")]
    NotBivariate(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `eta(s) = min{1 - 2s/3, 3(1-s)/2}` for `s` in `[0,1]`.
///
/// Equals `1 - 2s/3` exactly when `s <= 3/5`.
pub fn eta(s: &Rational) -> Result<Rational, FunctionalsError> {
    if s < &rat(0, 1) || s > &rat(1, 1) {
        return Err(FunctionalsError::EtaOutOfDomain(s.to_string()));
    }
    let a = rat(1, 1) - rat(2, 3) * s;
    let b = rat(3, 2) * (rat(1, 1) - s);
    Ok(a.min(b))
}

/// The symmetric basis `e_{(i,j)}(x,y) = (x+y)^i (x²+y²)^j`, `0 ≤ i,j ≤ n`,
/// flattened by `pos(i,j) = (n+1)·i + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    degree: usize,
}

impl BasisSpec {
    pub fn new(degree: usize) -> Self {
        BasisSpec { degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension `N = (n+1)²`.
    pub fn size(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn pos(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.degree && j <= self.degree);
        (self.degree + 1) * i + j
    }

    /// Inverse of `pos`.
    pub fn exponents(&self, k: usize) -> Result<(usize, usize), FunctionalsError> {
        if k >= self.size() {
            return Err(FunctionalsError::IndexOutOfRange {
                index: k,
                degree: self.degree,
                size: self.size(),
            });
        }
        Ok((k / (self.degree + 1), k % (self.degree + 1)))
    }
}

/// Expanded basis element `(x+y)^i (x²+y²)^j` over variables `(x, y)`.
pub fn basis_element(spec: &BasisSpec, k: usize) -> Result<MultiPoly, FunctionalsError> {
    let (i, j) = spec.exponents(k)?;
    let vars = ["x", "y"];
    let x = MultiPoly::var(&vars, "x")?;
    let y = MultiPoly::var(&vars, "y")?;
    let lin = x.add(&y)?;
    let quad = x.mul(&x)?.add(&y.mul(&y)?)?;
    Ok(lin.pow(i as u32).mul(&quad.pow(j as u32))?)
}

/// Labels for the three pieces partitioning `T` at the 3/5 breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RegionLabel {
    /// `s1 ≤ 3/5`, `s2 ≤ 3/5`
    LowLow,
    /// `s1 ≤ 3/5`, `3/5 ≤ s2 ≤ 1 - (2/3)s1`
    LowHigh,
    /// `s1 ≥ 3/5`, `s2 ≤ (3/2)(1 - s1)`
    HighLow,
}

pub const REGION_LABELS: [RegionLabel; 3] = [
    RegionLabel::LowLow,
    RegionLabel::LowHigh,
    RegionLabel::HighLow,
];

/// One piece of the partition of `T`: constant outer `s1`-range and an inner
/// `s2`-range whose bounds are polynomials in `s1`.
#[derive(Debug, Clone)]
pub struct RegionPiece {
    pub label: RegionLabel,
    pub s1_range: (MultiPoly, MultiPoly),
    pub s2_range: (MultiPoly, MultiPoly),
}

fn sconst(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(&SVARS, rat(n, d))
}

fn s1_var() -> MultiPoly {
    MultiPoly::var(&SVARS, "s1").unwrap()
}

/// The three pieces of `T`, in a fixed order.
pub fn outer_regions() -> Vec<RegionPiece> {
    let one_minus_two_thirds_s1 = sconst(1, 1).sub(&s1_var().scale(&rat(2, 3))).unwrap();
    let three_halves_one_minus_s1 = sconst(1, 1).sub(&s1_var()).unwrap().scale(&rat(3, 2));
    vec![
        RegionPiece {
            label: RegionLabel::LowLow,
            s1_range: (sconst(0, 1), sconst(3, 5)),
            s2_range: (sconst(0, 1), sconst(3, 5)),
        },
        RegionPiece {
            label: RegionLabel::LowHigh,
            s1_range: (sconst(0, 1), sconst(3, 5)),
            s2_range: (sconst(3, 5), one_minus_two_thirds_s1),
        },
        RegionPiece {
            label: RegionLabel::HighLow,
            s1_range: (sconst(3, 5), sconst(1, 1)),
            s2_range: (sconst(0, 1), three_halves_one_minus_s1),
        },
    ]
}

/// Exact `∬_piece f(s1,s2) ds2 ds1` for `f` over `SVARS`.
pub fn region_integral(f: &MultiPoly, piece: &RegionPiece) -> Result<Rational, FunctionalsError> {
    let inner = f.integrate_definite("s2", &piece.s2_range.0, &piece.s2_range.1)?;
    let outer = inner.integrate_definite("s1", &piece.s1_range.0, &piece.s1_range.1)?;
    Ok(outer
        .constant_value()
        .expect("region integral must be constant"))
}

/// A functional of `(s1, s2)` stored as one exact polynomial per region.
#[derive(Debug, Clone)]
pub struct PiecewiseFunctional {
    pieces: BTreeMap<RegionLabel, MultiPoly>,
}

impl PiecewiseFunctional {
    pub fn piece(&self, label: RegionLabel) -> &MultiPoly {
        &self.pieces[&label]
    }

    pub fn eval(
        &self,
        label: RegionLabel,
        s1: &Rational,
        s2: &Rational,
    ) -> Result<Rational, FunctionalsError> {
        Ok(self.piece(label).eval2("s1", s1, "s2", s2)?)
    }
}

fn check_bivariate(p: &MultiPoly) -> Result<(String, String), FunctionalsError> {
    if p.vars().len() != 2 {
        return Err(FunctionalsError::NotBivariate(p.vars().len()));
    }
    Ok((p.vars()[0].clone(), p.vars()[1].clone()))
}

fn wconst(n: i64, d: i64) -> MultiPoly {
    MultiPoly::constant(&VARS4, rat(n, d))
}

fn wvar(name: &str) -> MultiPoly {
    MultiPoly::var(&VARS4, name).unwrap()
}

/// `Q1` applied to a bivariate weight polynomial, as three exact pieces.
///
/// On `LowLow` the outer integral splits at `t1 = 3/5`; on `LowHigh` the
/// outer upper limit is `(3/2)(1-s2)` and on `HighLow` it is `1 - (2/3)s2`,
/// with the inner limit on the matching branch of `eta`.
pub fn q1_of(p: &MultiPoly) -> Result<PiecewiseFunctional, FunctionalsError> {
    let (v0, v1) = check_bivariate(p)?;
    let p4 = p.rename_into(&[(&v0, "t1"), (&v1, "t2")], &VARS4)?;
    let t1 = wvar("t1");
    let s1 = wvar("s1");
    let s2 = wvar("s2");

    let inner_low_limit = wconst(1, 1).sub(&t1.scale(&rat(2, 3)))?;
    let inner_high_limit = wconst(1, 1).sub(&t1)?.scale(&rat(3, 2));
    let inner_low = p4.integrate_definite("t2", &s2, &inner_low_limit)?;
    let inner_high = p4.integrate_definite("t2", &s2, &inner_high_limit)?;

    let up_low_high = wconst(1, 1).sub(&s2.scale(&rat(2, 3)))?; // 1 - (2/3) s2
    let up_high_low = wconst(1, 1).sub(&s2)?.scale(&rat(3, 2)); // (3/2)(1 - s2)

    let q11 = inner_low
        .integrate_definite("t1", &s1, &wconst(3, 5))?
        .add(&inner_high.integrate_definite("t1", &wconst(3, 5), &up_low_high)?)?;
    let q12 = inner_low.integrate_definite("t1", &s1, &up_high_low)?;
    let q13 = inner_high.integrate_definite("t1", &s1, &up_low_high)?;

    let mut pieces = BTreeMap::new();
    pieces.insert(RegionLabel::LowLow, q11.embed_into(&SVARS)?);
    pieces.insert(RegionLabel::LowHigh, q12.embed_into(&SVARS)?);
    pieces.insert(RegionLabel::HighLow, q13.embed_into(&SVARS)?);
    Ok(PiecewiseFunctional { pieces })
}

/// `Q2` applied to a bivariate weight polynomial: the integral of
/// `P(s1, t2)` over `t2` from `s2` up to `eta(s1)`, split at `s1 = 3/5`.
/// The low branch is stored under both `LowLow` and `LowHigh`.
pub fn q2_of(p: &MultiPoly) -> Result<PiecewiseFunctional, FunctionalsError> {
    let (v0, v1) = check_bivariate(p)?;
    let ps = p.rename_into(&[(&v0, "s1"), (&v1, "t2")], &VARS4)?;
    let s1 = wvar("s1");
    let s2 = wvar("s2");

    let low_limit = wconst(1, 1).sub(&s1.scale(&rat(2, 3)))?;
    let high_limit = wconst(1, 1).sub(&s1)?.scale(&rat(3, 2));
    let q21 = ps
        .integrate_definite("t2", &s2, &low_limit)?
        .embed_into(&SVARS)?;
    let q22 = ps
        .integrate_definite("t2", &s2, &high_limit)?
        .embed_into(&SVARS)?;

    let mut pieces = BTreeMap::new();
    pieces.insert(RegionLabel::LowLow, q21.clone());
    pieces.insert(RegionLabel::LowHigh, q21);
    pieces.insert(RegionLabel::HighLow, q22);
    Ok(PiecewiseFunctional { pieces })
}

/// `R1(P) = ∬_T Q1(P)²`, exactly, by piecewise symbolic integration.
pub fn r1_value(p: &MultiPoly) -> Result<Rational, FunctionalsError> {
    let q1 = q1_of(p)?;
    let mut acc = Rational::zero();
    for piece in outer_regions() {
        let f = q1.piece(piece.label);
        acc += region_integral(&f.mul(f)?, &piece)?;
    }
    Ok(acc)
}

/// `R2(P) = ∬_T (s1(3-s1) Q2² + 4 s1 Q1 Q2)`, exactly.
pub fn r2_value(p: &MultiPoly) -> Result<Rational, FunctionalsError> {
    let q1 = q1_of(p)?;
    let q2 = q2_of(p)?;
    let s1 = s1_var();
    let w2 = s1.scale(&rat(3, 1)).sub(&s1.mul(&s1)?)?; // s1 (3 - s1)
    let mut acc = Rational::zero();
    for piece in outer_regions() {
        let a = q1.piece(piece.label);
        let b = q2.piece(piece.label);
        let integrand = w2
            .mul(&b.mul(b)?)?
            .add(&s1.scale(&rat(4, 1)).mul(&a.mul(b)?)?)?;
        acc += region_integral(&integrand, &piece)?;
    }
    Ok(acc)
}

/// Symmetric bilinear form `B1` with `R1(Σ a_k e_k) = Σ a_k a_l B1(e_k, e_l)`.
pub fn bilinear_r1(
    q1k: &PiecewiseFunctional,
    q1l: &PiecewiseFunctional,
) -> Result<Rational, FunctionalsError> {
    let mut acc = Rational::zero();
    for piece in outer_regions() {
        let prod = q1k.piece(piece.label).mul(q1l.piece(piece.label))?;
        acc += region_integral(&prod, &piece)?;
    }
    Ok(acc)
}

/// Symmetric bilinear form `B2` for `R2`: the `Q2·Q2` term carries weight
/// `s1(3-s1)` and the symmetrized cross term carries weight `4·s1` (i.e.
/// `2·s1` on each of `Q1_k Q2_l` and `Q1_l Q2_k`).
pub fn bilinear_r2(
    q1k: &PiecewiseFunctional,
    q2k: &PiecewiseFunctional,
    q1l: &PiecewiseFunctional,
    q2l: &PiecewiseFunctional,
) -> Result<Rational, FunctionalsError> {
    let s1 = s1_var();
    let w2 = s1.scale(&rat(3, 1)).sub(&s1.mul(&s1)?)?;
    let ws1 = s1.scale(&rat(2, 1));
    let mut acc = Rational::zero();
    for piece in outer_regions() {
        let l = piece.label;
        let quad = w2.mul(&q2k.piece(l).mul(q2l.piece(l))?)?;
        let cross = ws1.mul(
            &q1k.piece(l)
                .mul(q2l.piece(l))?
                .add(&q1l.piece(l).mul(q2k.piece(l))?)?,
        )?;
        acc += region_integral(&quad.add(&cross)?, &piece)?;
    }
    Ok(acc)
}

/// `B1(e_k, e_l)` for basis elements, by direct symbolic integration.
pub fn r1_bilinear(spec: &BasisSpec, k: usize, l: usize) -> Result<Rational, FunctionalsError> {
    let q1k = q1_of(&basis_element(spec, k)?)?;
    let q1l = q1_of(&basis_element(spec, l)?)?;
    bilinear_r1(&q1k, &q1l)
}

/// `B2(e_k, e_l)` for basis elements, by direct symbolic integration.
pub fn r2_bilinear(spec: &BasisSpec, k: usize, l: usize) -> Result<Rational, FunctionalsError> {
    let ek = basis_element(spec, k)?;
    let el = basis_element(spec, l)?;
    bilinear_r2(&q1_of(&ek)?, &q2_of(&ek)?, &q1_of(&el)?, &q2_of(&el)?)
}

// ---------------------------------------------------------------------------
// Fast exact assembly path: scaled-integer polynomials contracted against a
// precomputed table of exact region moments ∬ s1^a s2^b. Used to assemble
// whole quadratic forms, where the per-pair symbolic route would be slow.
// ---------------------------------------------------------------------------

/// Exact moments `∬_piece s1^a s2^b ds2 ds1` for all `a, b ≤ max`.
pub struct RegionMoments {
    max: usize,
    tables: [Vec<Rational>; 3],
}

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

impl RegionMoments {
    pub fn new(max: usize) -> Self {
        let idx = |a: usize, b: usize| a * (max + 1) + b;
        let len = (max + 1) * (max + 1);
        let mut pow35 = vec![Rational::one()];
        for _ in 0..(2 * max + 3) {
            pow35.push(pow35.last().unwrap() * rat(3, 5));
        }
        let inv = |n: usize| rat(1, n as i64);

        // LowLow: (3/5)^{a+1}/(a+1) · (3/5)^{b+1}/(b+1)
        let mut ll = vec![Rational::zero(); len];
        for a in 0..=max {
            for b in 0..=max {
                ll[idx(a, b)] = &pow35[a + b + 2] * inv(a + 1) * inv(b + 1);
            }
        }

        // LowHigh: ∫_0^{3/5} s1^a [ (1-(2/3)s1)^{b+1} - (3/5)^{b+1} ] / (b+1) ds1
        let mut lh = vec![Rational::zero(); len];
        for b in 0..=max {
            let bin = binomials(b + 1);
            for a in 0..=max {
                let mut acc = Rational::zero();
                let mut pow23 = Rational::one(); // (-2/3)^j
                for (j, c) in bin.iter().enumerate() {
                    acc += Rational::from(c.clone()) * &pow23 * &pow35[a + j + 1] * inv(a + j + 1);
                    pow23 *= rat(-2, 3);
                }
                acc -= &pow35[b + 1] * &pow35[a + 1] * inv(a + 1);
                lh[idx(a, b)] = acc * inv(b + 1);
            }
        }

        // HighLow: (3/2)^{b+1}/(b+1) ∫_{3/5}^1 s1^a (1-s1)^{b+1} ds1
        let mut hl = vec![Rational::zero(); len];
        for b in 0..=max {
            let bin = binomials(b + 1);
            let scale = crate::exactpoly::pow_rational(&rat(3, 2), (b + 1) as u32) * inv(b + 1);
            for a in 0..=max {
                let mut acc = Rational::zero();
                let mut sign = Rational::one(); // (-1)^j
                for (j, c) in bin.iter().enumerate() {
                    let tail = Rational::one() - &pow35[a + j + 1];
                    acc += Rational::from(c.clone()) * &sign * tail * inv(a + j + 1);
                    sign = -sign;
                }
                hl[idx(a, b)] = acc * &scale;
            }
        }

        RegionMoments {
            max,
            tables: [ll, lh, hl],
        }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn get(&self, label: RegionLabel, a: usize, b: usize) -> &Rational {
        let t = match label {
            RegionLabel::LowLow => &self.tables[0],
            RegionLabel::LowHigh => &self.tables[1],
            RegionLabel::HighLow => &self.tables[2],
        };
        &t[a * (self.max + 1) + b]
    }
}

/// Dense `(s1, s2)` polynomial with integer coefficients over one common
/// positive denominator.
#[derive(Clone)]
struct ScaledPoly {
    da: usize,
    db: usize,
    num: Vec<BigInt>, // (da+1)*(db+1), row-major [a][b]
    den: BigInt,
}

impl ScaledPoly {
    fn from_poly(p: &MultiPoly) -> Self {
        assert_eq!(p.vars(), &["s1".to_string(), "s2".to_string()]);
        let mut da = 0usize;
        let mut db = 0usize;
        let mut den = BigInt::one();
        for (e, c) in p.terms() {
            da = da.max(e[0] as usize);
            db = db.max(e[1] as usize);
            den = den.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); (da + 1) * (db + 1)];
        for (e, c) in p.terms() {
            let scaled = c.numer() * (&den / c.denom());
            num[e[0] as usize * (db + 1) + e[1] as usize] = scaled;
        }
        ScaledPoly { da, db, num, den }
    }

    fn mul(&self, other: &ScaledPoly) -> ScaledPoly {
        let da = self.da + other.da;
        let db = self.db + other.db;
        let mut num = vec![BigInt::zero(); (da + 1) * (db + 1)];
        for a1 in 0..=self.da {
            for b1 in 0..=self.db {
                let c1 = &self.num[a1 * (self.db + 1) + b1];
                if c1.is_zero() {
                    continue;
                }
                for a2 in 0..=other.da {
                    let row2 = a2 * (other.db + 1);
                    let out_row = (a1 + a2) * (db + 1) + b1;
                    for b2 in 0..=other.db {
                        let c2 = &other.num[row2 + b2];
                        if c2.is_zero() {
                            continue;
                        }
                        num[out_row + b2] += c1 * c2;
                    }
                }
            }
        }
        ScaledPoly {
            da,
            db,
            num,
            den: &self.den * &other.den,
        }
    }
}

#[derive(Clone, Copy)]
enum MomentWeight {
    Plain,
    S1,
    S1Times3MinusS1,
}

/// One region's moment table scaled to integers over a common denominator,
/// with the `s1`-weight index shifts baked in.
struct IntMoments {
    max: usize,
    num: Vec<BigInt>,
    den: BigInt,
}

impl IntMoments {
    fn build(moments: &RegionMoments, label: RegionLabel, weight: MomentWeight) -> Self {
        // weighted variants consume indices shifted by up to 2
        let max = moments.max() - 2;
        let value = |a: usize, b: usize| -> Rational {
            match weight {
                MomentWeight::Plain => moments.get(label, a, b).clone(),
                MomentWeight::S1 => moments.get(label, a + 1, b).clone(),
                MomentWeight::S1Times3MinusS1 => {
                    moments.get(label, a + 1, b) * rat(3, 1) - moments.get(label, a + 2, b)
                }
            }
        };
        let mut den = BigInt::one();
        for a in 0..=max {
            for b in 0..=max {
                den = den.lcm(value(a, b).denom());
            }
        }
        let mut num = vec![BigInt::zero(); (max + 1) * (max + 1)];
        for a in 0..=max {
            for b in 0..=max {
                let v = value(a, b);
                num[a * (max + 1) + b] = v.numer() * (&den / v.denom());
            }
        }
        IntMoments { max, num, den }
    }

    /// `Σ_{a,b} p[a][b] · M(a,b)` as an exact rational.
    fn contract(&self, p: &ScaledPoly) -> Rational {
        assert!(p.da <= self.max && p.db <= self.max);
        let mut acc = BigInt::zero();
        for a in 0..=p.da {
            let mrow = a * (self.max + 1);
            let prow = a * (p.db + 1);
            for b in 0..=p.db {
                let c = &p.num[prow + b];
                if !c.is_zero() {
                    acc += c * &self.num[mrow + b];
                }
            }
        }
        Rational::new(acc, &p.den * &self.den)
    }
}

/// Precomputed exact machinery for assembling the `R1`/`R2` bilinear forms
/// over a whole basis: scaled `Q1`/`Q2` pieces per element plus integer
/// moment tables per region and weight.
pub struct FormAssembler {
    spec: BasisSpec,
    q1: Vec<[ScaledPoly; 3]>,
    q2: Vec<[ScaledPoly; 3]>,
    plain: [IntMoments; 3],
    weight_s1: [IntMoments; 3],
    weight_s1_3ms1: [IntMoments; 3],
}

impl FormAssembler {
    pub fn new(spec: &BasisSpec) -> Result<Self, FunctionalsError> {
        let n = spec.degree();
        // Q pieces have total degree ≤ 3n + 2; products double that, and the
        // weighted moments shift indices by up to 2.
        let max_moment = 2 * (3 * n + 2) + 2;
        let moments = RegionMoments::new(max_moment);
        let scale = |pw: &PiecewiseFunctional| -> [ScaledPoly; 3] {
            [
                ScaledPoly::from_poly(pw.piece(RegionLabel::LowLow)),
                ScaledPoly::from_poly(pw.piece(RegionLabel::LowHigh)),
                ScaledPoly::from_poly(pw.piece(RegionLabel::HighLow)),
            ]
        };
        let mut q1 = Vec::with_capacity(spec.size());
        let mut q2 = Vec::with_capacity(spec.size());
        for k in 0..spec.size() {
            let e = basis_element(spec, k)?;
            q1.push(scale(&q1_of(&e)?));
            q2.push(scale(&q2_of(&e)?));
        }
        let build3 = |w: MomentWeight| -> [IntMoments; 3] {
            [
                IntMoments::build(&moments, RegionLabel::LowLow, w),
                IntMoments::build(&moments, RegionLabel::LowHigh, w),
                IntMoments::build(&moments, RegionLabel::HighLow, w),
            ]
        };
        Ok(FormAssembler {
            spec: *spec,
            q1,
            q2,
            plain: build3(MomentWeight::Plain),
            weight_s1: build3(MomentWeight::S1),
            weight_s1_3ms1: build3(MomentWeight::S1Times3MinusS1),
        })
    }

    pub fn spec(&self) -> &BasisSpec {
        &self.spec
    }

    /// `B1(e_k, e_l)`.
    pub fn entry_r1(&self, k: usize, l: usize) -> Rational {
        let mut acc = Rational::zero();
        for r in 0..3 {
            let prod = self.q1[k][r].mul(&self.q1[l][r]);
            acc += self.plain[r].contract(&prod);
        }
        acc
    }

    /// `B2(e_k, e_l)`.
    pub fn entry_r2(&self, k: usize, l: usize) -> Rational {
        let two = rat(2, 1);
        let mut acc = Rational::zero();
        for r in 0..3 {
            let quad = self.q2[k][r].mul(&self.q2[l][r]);
            acc += self.weight_s1_3ms1[r].contract(&quad);
            let cross_kl = self.q1[k][r].mul(&self.q2[l][r]);
            acc += self.weight_s1[r].contract(&cross_kl) * &two;
            if k == l {
                acc += self.weight_s1[r].contract(&cross_kl) * &two;
            } else {
                let cross_lk = self.q1[l][r].mul(&self.q2[k][r]);
                acc += self.weight_s1[r].contract(&cross_lk) * &two;
            }
        }
        acc
    }
}

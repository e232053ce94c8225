//! Exact rational arithmetic on sparse multivariate polynomials.
//!
//! `MultiPoly` stores a finite map from exponent vectors to nonzero
//! `BigRational` coefficients over a fixed, ordered list of variable names.
//! Definite integration is symbolic: the limits may themselves be
//! polynomials in the surviving variables, so iterated integrals over
//! polytope-like regions stay exact end to end.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational; always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
///
/// Panics on a zero denominator, like integer division would.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Errors from polynomial operations whose preconditions can fail.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operands are over different variable lists: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("replacement polynomial mentions the substituted variable `{0}`")]
    ReplacementMentionsVar(String),
    #[error("integration limit mentions the integration variable `{0}`")]
    LimitMentionsVar(String),
    #[error("evaluation point is missing coordinate `{0}`")]
    MissingCoordinate(String),
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariants: no stored zero coefficients; every exponent vector has one
/// entry per variable in `vars`; the zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The monomial `name` with exponent 1.
    pub fn var(vars: &[&str], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let idx = p.var_index(name)?;
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.terms.insert(exps, Rational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), p.vars.len(), "exponent arity mismatch");
            p.add_term(exps, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Largest exponent of `name` appearing in any term.
    pub fn degree_in(&self, name: &str) -> Result<u32, PolyError> {
        let idx = self.var_index(name)?;
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// True iff `name` appears with a nonzero exponent.
    pub fn mentions(&self, name: &str) -> bool {
        match self.var_index(name) {
            Ok(idx) => self.terms.keys().any(|e| e[idx] > 0),
            Err(_) => false,
        }
    }

    fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VarMismatch(
                self.vars.clone(),
                other.vars.clone(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same_vars(other)?;
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        for _ in 0..k {
            out = out.mul(self).expect("same vars by construction");
        }
        out
    }

    /// Re-expresses the polynomial over `target` variables. Every variable
    /// actually mentioned must appear in `target`; unmentioned ones may be
    /// dropped, new ones gain zero exponents.
    pub fn embed_into(&self, target: &[&str]) -> Result<Self, PolyError> {
        let tvars: Vec<String> = target.iter().map(|s| s.to_string()).collect();
        // position of each of self's vars inside target (None = droppable)
        let mut map: Vec<Option<usize>> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            map.push(tvars.iter().position(|t| t == v));
        }
        let mut out = MultiPoly {
            vars: tvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut exps = vec![0u32; out.vars.len()];
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = ei,
                    None => return Err(PolyError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.add_term(exps, c.clone());
        }
        Ok(out)
    }

    /// Renames variables by `(from, to)` pairs, producing a polynomial over
    /// `target`. Variables not listed keep their names.
    pub fn rename_into(
        &self,
        renames: &[(&str, &str)],
        target: &[&str],
    ) -> Result<Self, PolyError> {
        let renamed_vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                renames
                    .iter()
                    .find(|(from, _)| from == v)
                    .map(|(_, to)| to.to_string())
                    .unwrap_or_else(|| v.clone())
            })
            .collect();
        let tmp = MultiPoly {
            vars: renamed_vars,
            terms: self.terms.clone(),
        };
        tmp.embed_into(target)
    }

    /// Exact composition: every occurrence of `name` is replaced by
    /// `replacement`, which must not mention `name` itself.
    pub fn substitute(&self, name: &str, replacement: &Self) -> Result<Self, PolyError> {
        let idx = self.var_index(name)?;
        let repl = if replacement.vars == self.vars {
            replacement.clone()
        } else {
            replacement.embed_into(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>())?
        };
        if repl.mentions(name) {
            return Err(PolyError::ReplacementMentionsVar(name.to_string()));
        }
        let max_exp = self.terms.keys().map(|e| e[idx]).max().unwrap_or(0);
        // replacement powers 0..=max_exp
        let mut powers: Vec<MultiPoly> = Vec::with_capacity(max_exp as usize + 1);
        powers.push(Self::one(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        ));
        for k in 1..=max_exp {
            let next = powers[(k - 1) as usize].mul(&repl)?;
            powers.push(next);
        }
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[idx];
            rest[idx] = 0;
            for (pe, pc) in &powers[k as usize].terms {
                let exps: Vec<u32> = rest.iter().zip(pe).map(|(a, b)| a + b).collect();
                out.add_term(exps, c * pc);
            }
        }
        Ok(out)
    }

    /// Term-wise antiderivative in `name` (constant of integration zero).
    pub fn antiderivative(&self, name: &str) -> Result<Self, PolyError> {
        let idx = self.var_index(name)?;
        let mut out = MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[idx] += 1;
            let k = Rational::from(BigInt::from(exps[idx]));
            out.add_term(exps, c / k);
        }
        Ok(out)
    }

    /// Definite integral `∫ p d(name)` from `lower` to `upper`, where the
    /// limits are polynomials not mentioning `name`. Result is exact and no
    /// longer mentions `name`.
    pub fn integrate_definite(
        &self,
        name: &str,
        lower: &Self,
        upper: &Self,
    ) -> Result<Self, PolyError> {
        for limit in [lower, upper] {
            if limit.mentions(name) {
                return Err(PolyError::LimitMentionsVar(name.to_string()));
            }
        }
        let f = self.antiderivative(name)?;
        let hi = f.substitute(name, upper)?;
        let lo = f.substitute(name, lower)?;
        hi.sub(&lo)
    }

    /// Exact value at a point covering every mentioned variable.
    pub fn eval(&self, point: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        // coordinate lookup per variable position, demanded lazily so the
        // zero polynomial evaluates under any point
        let mut coords: Vec<Option<&Rational>> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            coords.push(point.get(v));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let x =
                    coords[i].ok_or_else(|| PolyError::MissingCoordinate(self.vars[i].clone()))?;
                term *= pow_rational(x, ei);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Convenience for two-variable evaluation.
    pub fn eval2(
        &self,
        v1: &str,
        x1: &Rational,
        v2: &str,
        x2: &Rational,
    ) -> Result<Rational, PolyError> {
        let mut point = BTreeMap::new();
        point.insert(v1.to_string(), x1.clone());
        point.insert(v2.to_string(), x2.clone());
        self.eval(&point)
    }

    /// The value of a polynomial that mentions no variable; `None` otherwise.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }
}

pub fn pow_rational(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut base = x.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

impl fmt::Display for MultiPoly {
    /// Canonical sorted text form: terms in exponent-vector order, each as
    /// `coef` or `coef * x^a * y^b`, rationals as `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                if ei == 1 {
                    write!(f, " * {}", self.vars[i])?;
                } else {
                    write!(f, " * {}^{}", self.vars[i], ei)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}| {}]", self.vars.join(","), self)
    }
}

//! Exact optimization of two-dimensional Selberg sieve weights, together with
//! the number-theoretic kernels needed to check the surrounding machinery:
//! exact rational polynomial integration, assembly of the R1/R2 quadratic
//! forms and the generalized eigenproblem they define, Kloosterman and divisor
//! sums with their asymptotic main terms, and a desk-scale evaluator of the
//! sieve sums S1 and S2.

pub mod arithkernels;
pub mod bigfloat;
pub mod exactpoly;
pub mod functionals;
pub mod rayleigh;
pub mod sievesim;

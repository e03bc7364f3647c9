//! Zeta functions of curves over finite fields, prime-divisor zeta
//! functions with their Moebius-inversion continuation, and spectral-zeta
//! regularized determinants.
//!
//! The library is organized along the pipeline
//!
//! - [`ffield`]: exact arithmetic in F_{p^a} with a deterministic modulus
//!   choice, plus irreducible-polynomial utilities;
//! - [`curves`]: curve models (P^1, Weierstrass, hyperelliptic), brute-force
//!   point counts N_n, and prime-divisor counts pi_C(n) by Moebius
//!   inversion;
//! - [`lfunc`]: the integer L-polynomial built from N_1..N_g with exact
//!   rational series arithmetic, its functional-equation symmetry and the
//!   Weil bound on its roots;
//! - [`zetacurve`]: zeta(s, C) through the closed form
//!   L(q^{-s}) / ((1 - q^{-s})(1 - q^{1-s})), validated against its
//!   Dirichlet series and Euler product;
//! - [`primezeta`]: the prime zeta function P(s, C), continued to
//!   0 < Re(s) <= 1 by sum mu(k)/k log zeta(ks, C), its derivative, and the
//!   singularities with real parts 1/k, 1/(2k) that accumulate on
//!   Re(s) = 0 — plus the classical and arithmetic-progression analogues;
//! - [`dirichlet`]: Euler-Maclaurin evaluation of the Riemann and Hurwitz
//!   zeta functions, real Dirichlet L-functions, sieves, and critical-line
//!   zero location;
//! - [`specreg`]: spectral zeta functions and regularized determinants,
//!   succeeding on analytic spectra and returning structured
//!   natural-boundary failures on prime-type spectra.
//!
//! Exact integer data (point counts, L-coefficients, divisor counts) is
//! kept in arbitrary-precision integers end to end; floating point enters
//! only at complex evaluation time.

pub mod curves;
pub mod dirichlet;
pub mod error;
pub mod ffield;
pub mod lfunc;
pub mod primezeta;
pub mod specreg;
pub mod zetacurve;

pub use curves::{parse_curve, Curve, CurveModel, PrimeCountTable};
pub use error::{Error, Result};
pub use ffield::{FieldElement, FieldSpec, DEFAULT_ENUMERATION_BUDGET};
pub use lfunc::{
    check_functional_equation, check_weil_rh, counts_from_lpoly, lpoly_from_counts, LPolynomial,
    WeilRhReport,
};
pub use primezeta::{
    progression_prime_zeta, rational_prime_zeta, BoundaryRow, PrimeZeta, SingularityEntry,
    SingularityKind, SingularityList,
};
pub use specreg::{RegResult, ScalingReport, Spectrum, SpectrumKind, WZeroResult};
pub use zetacurve::CurveZeta;

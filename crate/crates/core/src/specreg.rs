//! Spectral zeta functions and zeta-regularized determinants.
//!
//! For a spectrum with spectral zeta function holomorphic at s = 0 the
//! determinant is exp(-zeta_D'(0)). The analytic families here (explicit
//! finite spectra, power families lambda_n = n^alpha, the circle Laplacian)
//! have closed forms built on zeta(0) = -1/2 and zeta'(0) = -ln(2 pi)/2.
//!
//! Prime-type spectra (norms of prime divisors of a curve, the rational
//! primes, primes in a progression) are different: their spectral zeta
//! functions have singularities with real parts 1/k and 1/(2k) accumulating
//! against Re(s) = 0, so no neighborhood of s = 0 is ever reached.
//! [`Spectrum::regularized_det`] then returns a structured
//! [`RegResult::Failure`] carrying the nearest enumerated singularities —
//! the failure is the result, not an error.
//!
//! The circle Laplacian counts each eigenvalue n^2 with multiplicity 2
//! (n and -n), giving zeta_D(s) = 2 zeta(2s) and det = 4 pi^2.
//!
//! Scaling: zeta_{mu^2 D}(s) = (mu^2)^{-s} zeta_D(s) exactly, hence
//! zeta_{mu^2 D}'(0) = -ln(mu^2) zeta_D(0) + zeta_D'(0).

use num_complex::Complex64;
use serde::Serialize;

use crate::dirichlet::{cpow, riemann_zeta, zeta_derivative, zeta_zero_scan};
use crate::error::{Error, Result};
use crate::primezeta::{
    progression_prime_zeta, rational_prime_zeta, rational_singularities, PrimeZeta,
    SingularityEntry, SingularityList,
};

/// Sigma schedule used to assemble natural-boundary failure diagnostics.
const FAILURE_SIGMAS: [f64; 5] = [0.3, 0.2, 0.1, 0.05, 0.02];

/// Square-free cutoff for failure diagnostics.
const FAILURE_K_MAX: u64 = 60;

/// How many nearest singularities a failure report carries.
const FAILURE_NEAREST: usize = 12;

/// The eigenvalue model fed to spectral regularization.
#[derive(Clone, Debug)]
pub enum SpectrumKind {
    /// Finite list of (eigenvalue, multiplicity); entire spectral zeta.
    Explicit(Vec<(f64, u64)>),
    /// lambda_n = n^alpha for n >= 1; spectral zeta is zeta(alpha s).
    PowerFamily { alpha: f64 },
    /// Laplacian on the circle: lambda_n = n^2 over n != 0, each |n| twice.
    CircleLaplacian,
    /// Norms q^n of the prime divisors of a curve, multiplicity pi_C(n).
    CurvePrimes(Box<PrimeZeta>),
    /// The rational primes.
    RationalPrimes,
    /// Primes p = 1 (mod m), m in {3, 4, 6}.
    ProgressionPrimes { modulus: u64 },
}

/// A spectrum together with the mass-scale multiplier mu^2 applied to every
/// eigenvalue (default 1).
#[derive(Clone, Debug)]
pub struct Spectrum {
    kind: SpectrumKind,
    scale: f64,
}

impl Spectrum {
    pub fn new(kind: SpectrumKind) -> Result<Spectrum> {
        Spectrum::with_scale(kind, 1.0)
    }

    /// `scale` is mu^2; it must be positive.
    pub fn with_scale(kind: SpectrumKind, scale: f64) -> Result<Spectrum> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidSpectrum(format!(
                "scale mu^2 must be positive and finite, got {scale}"
            )));
        }
        match &kind {
            SpectrumKind::Explicit(eigs) => {
                if eigs.is_empty() {
                    return Err(Error::InvalidSpectrum("empty explicit spectrum".into()));
                }
                for &(lambda, mult) in eigs {
                    if !(lambda > 0.0 && lambda.is_finite()) {
                        return Err(Error::InvalidSpectrum(format!(
                            "eigenvalues must be strictly positive, got {lambda}"
                        )));
                    }
                    if mult == 0 {
                        return Err(Error::InvalidSpectrum(
                            "multiplicities must be positive".into(),
                        ));
                    }
                }
            }
            SpectrumKind::PowerFamily { alpha } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidSpectrum(format!(
                        "power-family exponent must be positive, got {alpha}"
                    )));
                }
            }
            SpectrumKind::ProgressionPrimes { modulus } => {
                if ![3, 4, 6].contains(modulus) {
                    return Err(Error::UnsupportedModulus(*modulus));
                }
            }
            _ => {}
        }
        Ok(Spectrum { kind, scale })
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The same spectrum with every eigenvalue multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Spectrum> {
        Spectrum::with_scale(self.kind.clone(), self.scale * factor)
    }

    /// zeta_D(s), including the exact (mu^2)^{-s} factor from the scale.
    pub fn spectral_zeta(&self, s: Complex64) -> Result<Complex64> {
        let base = match &self.kind {
            SpectrumKind::Explicit(eigs) => eigs
                .iter()
                .map(|&(lambda, mult)| mult as f64 * cpow(lambda, -s))
                .sum(),
            SpectrumKind::PowerFamily { alpha } => riemann_zeta(s * *alpha)?,
            SpectrumKind::CircleLaplacian => 2.0 * riemann_zeta(s * 2.0)?,
            SpectrumKind::CurvePrimes(pz) => {
                if s.re > 1.0 {
                    pz.direct(s, pz.table().n_max())
                } else {
                    pz.mobius(s, None)?
                }
            }
            SpectrumKind::RationalPrimes => rational_prime_zeta(s, None)?,
            SpectrumKind::ProgressionPrimes { modulus } => {
                progression_prime_zeta(s, *modulus, None)?
            }
        };
        Ok(cpow(self.scale, -s) * base)
    }

    /// Zeta-regularized determinant, or the structured natural-boundary
    /// failure for the prime-type spectra. Never an error: both outcomes
    /// are results.
    pub fn regularized_det(&self) -> RegResult {
        let ln_scale = self.scale.ln();
        match &self.kind {
            SpectrumKind::Explicit(eigs) => {
                let zeta0: f64 = eigs.iter().map(|&(_, m)| m as f64).sum();
                let zeta_prime0: f64 = eigs
                    .iter()
                    .map(|&(lambda, m)| -(m as f64) * (self.scale * lambda).ln())
                    .sum();
                RegResult::success(zeta0, zeta_prime0)
            }
            SpectrumKind::PowerFamily { alpha } => {
                // zeta_D(s) = (mu^2)^{-s} zeta(alpha s)
                let zeta0 = -0.5;
                let zeta_prime0 = -ln_scale * zeta0 + alpha * zeta_prime_at_zero();
                RegResult::success(zeta0, zeta_prime0)
            }
            SpectrumKind::CircleLaplacian => {
                // zeta_D(s) = (mu^2)^{-s} 2 zeta(2s)
                let zeta0 = -1.0;
                let zeta_prime0 = -ln_scale * zeta0 + 4.0 * zeta_prime_at_zero();
                RegResult::success(zeta0, zeta_prime0)
            }
            SpectrumKind::CurvePrimes(pz) => {
                let tau = pz.zeta().period();
                let sigma_min = *FAILURE_SIGMAS.last().unwrap();
                let list = pz.singularities(sigma_min, (0.0, tau), FAILURE_K_MAX);
                RegResult::failure(list)
            }
            SpectrumKind::RationalPrimes | SpectrumKind::ProgressionPrimes { .. } => {
                let zeros =
                    zeta_zero_scan(5.0, 30.0).expect("zeta has no pole on the critical line");
                let sigma_min = *FAILURE_SIGMAS.last().unwrap();
                let list = rational_singularities(sigma_min, (0.0, 30.0), FAILURE_K_MAX, &zeros);
                RegResult::failure(list)
            }
        }
    }

    /// Checks the scaling law: lhs = zeta_{mu^2 D}'(0) against
    /// rhs = -ln(mu^2) zeta_D(0) + zeta_D'(0).
    pub fn scaling_check(&self, mu: f64) -> Result<ScalingReport> {
        assert!(mu > 0.0 && mu.is_finite());
        let unscaled = self.regularized_det();
        let scaled = self.rescaled(mu * mu)?.regularized_det();
        match (unscaled, scaled) {
            (RegResult::Success(base), RegResult::Success(scaled)) => {
                let lhs = scaled.zeta_prime0;
                let rhs = -(mu * mu).ln() * base.zeta0 + base.zeta_prime0;
                Ok(ScalingReport {
                    lhs,
                    rhs,
                    abs_err: (lhs - rhs).abs(),
                })
            }
            _ => Err(Error::NotRegularizable(
                "scaling law applies to spectra with a finite regularized determinant".into(),
            )),
        }
    }

    /// W[0] = -(1/2) ln det(mu^2 D) for regularizable spectra; for the
    /// prime-type spectra both ingredients (the value and the derivative of
    /// the spectral zeta function at s = 0) are obstructed by the natural
    /// boundary and the failure diagnostics are returned instead.
    pub fn w_zero(&self, mu: f64) -> Result<WZeroResult> {
        assert!(mu > 0.0 && mu.is_finite());
        match self.rescaled(mu * mu)?.regularized_det() {
            RegResult::Success(s) => Ok(WZeroResult::Value {
                w0: -0.5 * s.det.ln(),
            }),
            RegResult::Failure(f) => Ok(WZeroResult::Failure {
                reason: FailureReason::NaturalBoundary,
                obstructed_terms: vec!["zeta_at_zero".into(), "zeta_prime_at_zero".into()],
                nearest: f.nearest,
                diverging_term_index: f.diverging_term_index,
            }),
        }
    }
}

fn zeta_prime_at_zero() -> f64 {
    zeta_derivative(Complex64::new(0.0, 0.0))
        .expect("s = 0 is a regular point")
        .re
}

/// Successful regularization: zeta_D(0), zeta_D'(0) and
/// det = exp(-zeta_D'(0)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegSuccess {
    pub zeta0: f64,
    pub zeta_prime0: f64,
    pub det: f64,
}

/// Natural-boundary obstruction diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegFailure {
    pub reason: FailureReason,
    /// The enumerated singularities closest to Re(s) = 0.
    pub nearest: Vec<SingularityEntry>,
    /// The square-free k whose singularity sits nearest the boundary: the
    /// Moebius term that diverges first on the way to s = 0.
    pub diverging_term_index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NaturalBoundary,
}

/// Outcome of [`Spectrum::regularized_det`]: a determinant or a structured
/// obstruction. Serializes to the documented JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RegResult {
    Success(RegSuccess),
    Failure(RegFailure),
}

impl RegResult {
    fn success(zeta0: f64, zeta_prime0: f64) -> RegResult {
        RegResult::Success(RegSuccess {
            zeta0,
            zeta_prime0,
            det: (-zeta_prime0).exp(),
        })
    }

    fn failure(list: SingularityList) -> RegResult {
        let mut entries = list.entries;
        // closest to the boundary first
        entries.sort_by(|a, b| {
            a.s.re
                .total_cmp(&b.s.re)
                .then(a.s.im.abs().total_cmp(&b.s.im.abs()))
                .then(a.k.cmp(&b.k))
        });
        let diverging_term_index = entries.first().map(|e| e.k).unwrap_or(0);
        entries.truncate(FAILURE_NEAREST);
        RegResult::Failure(RegFailure {
            reason: FailureReason::NaturalBoundary,
            nearest: entries,
            diverging_term_index,
        })
    }

    pub fn det(&self) -> Option<f64> {
        match self {
            RegResult::Success(s) => Some(s.det),
            RegResult::Failure(_) => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, RegResult::Failure(_))
    }
}

/// Both sides of the scaling law and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
}

/// Outcome of [`Spectrum::w_zero`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WZeroResult {
    Value {
        w0: f64,
    },
    Failure {
        reason: FailureReason,
        obstructed_terms: Vec<String>,
        nearest: Vec<SingularityEntry>,
        diverging_term_index: u64,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::parse_curve;
    use crate::ffield::DEFAULT_ENUMERATION_BUDGET as BUDGET;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power(alpha: f64) -> Spectrum {
        Spectrum::new(SpectrumKind::PowerFamily { alpha }).unwrap()
    }

    fn curve_primes() -> Spectrum {
        let curve = parse_curve("p1 q=2", BUDGET).unwrap();
        let pz = PrimeZeta::from_curve(&curve, 64).unwrap();
        Spectrum::new(SpectrumKind::CurvePrimes(Box::new(pz))).unwrap()
    }

    #[test]
    fn spectral_zeta_of_the_power_family() {
        let v = power(2.0).spectral_zeta(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, PI * PI / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_zeta_of_the_circle() {
        let spec = Spectrum::new(SpectrumKind::CircleLaplacian).unwrap();
        let v = spec.spectral_zeta(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, PI * PI / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_zeta_of_an_explicit_list() {
        let spec = Spectrum::new(SpectrumKind::Explicit(vec![(2.0, 1), (3.0, 1)])).unwrap();
        let v = spec.spectral_zeta(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.5 + 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn determinants_of_the_positive_controls() {
        // lambda_n = n: det = sqrt(2 pi)
        let d1 = power(1.0).regularized_det().det().unwrap();
        assert_abs_diff_eq!(d1, (2.0 * PI).sqrt(), epsilon = 1e-10);
        // lambda_n = n^2: det = 2 pi
        let d2 = power(2.0).regularized_det().det().unwrap();
        assert_abs_diff_eq!(d2, 2.0 * PI, epsilon = 1e-10);
        // circle Laplacian, multiplicity honest: det = 4 pi^2
        let circle = Spectrum::new(SpectrumKind::CircleLaplacian).unwrap();
        let dc = circle.regularized_det().det().unwrap();
        assert_abs_diff_eq!(dc, 4.0 * PI * PI, epsilon = 1e-9);
    }

    #[test]
    fn closed_form_matches_richardson_differences() {
        // zeta_D'(0) by central differences with h = 1e-3, 1e-4 and
        // Richardson extrapolation, against the closed form.
        for spec in [
            power(1.0),
            power(2.0),
            Spectrum::new(SpectrumKind::CircleLaplacian).unwrap(),
        ] {
            let d = |h: f64| {
                let plus = spec.spectral_zeta(c(h, 0.0)).unwrap().re;
                let minus = spec.spectral_zeta(c(-h, 0.0)).unwrap().re;
                (plus - minus) / (2.0 * h)
            };
            let (h1, h2) = (1e-3, 1e-4);
            let (d1, d2) = (d(h1), d(h2));
            let extrapolated = (h1 * h1 * d2 - h2 * h2 * d1) / (h1 * h1 - h2 * h2);
            let closed = match spec.regularized_det() {
                RegResult::Success(s) => s.zeta_prime0,
                _ => unreachable!(),
            };
            assert_abs_diff_eq!(closed, extrapolated, epsilon = 1e-8);
        }
    }

    #[test]
    fn explicit_determinant_is_the_honest_product() {
        let spec = Spectrum::new(SpectrumKind::Explicit(vec![(2.0, 2), (5.0, 1)])).unwrap();
        let det = spec.regularized_det().det().unwrap();
        assert_abs_diff_eq!(det, 2.0 * 2.0 * 5.0, epsilon = 1e-12);
    }

    #[test]
    fn determinant_multiplicativity_on_explicit_spectra() {
        let a = vec![(1.5, 1), (4.0, 2)];
        let b = vec![(2.5, 1), (7.0, 1)];
        let mut joined = a.clone();
        joined.extend_from_slice(&b);
        let da = Spectrum::new(SpectrumKind::Explicit(a)).unwrap().regularized_det();
        let db = Spectrum::new(SpectrumKind::Explicit(b)).unwrap().regularized_det();
        let dj = Spectrum::new(SpectrumKind::Explicit(joined)).unwrap().regularized_det();
        let (da, db, dj) = (da.det().unwrap(), db.det().unwrap(), dj.det().unwrap());
        assert!((dj - da * db).abs() <= 1e-12 * (da * db));
    }

    #[test]
    fn exact_scale_relation_for_spectral_zeta() {
        let spec = power(2.0);
        let mu2 = 4.0;
        let scaled = spec.rescaled(mu2).unwrap();
        for s in [c(1.0, 0.0), c(2.0, 1.0), c(0.7, -0.3)] {
            let lhs = scaled.spectral_zeta(s).unwrap();
            let rhs = cpow(mu2, -s) * spec.spectral_zeta(s).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn scaling_law_reports() {
        // mu = 1: both sides are zeta_D'(0)
        let r = power(2.0).scaling_check(1.0).unwrap();
        assert_abs_diff_eq!(r.abs_err, 0.0, epsilon = 1e-14);
        // mu = e on lambda_n = n^2: rhs = 1 - ln(2 pi)
        let r = power(2.0).scaling_check(std::f64::consts::E).unwrap();
        assert_abs_diff_eq!(r.rhs, 1.0 - (2.0 * PI).ln(), epsilon = 1e-10);
        assert!(r.abs_err <= 1e-8);
        // circle at mu = 2
        let circle = Spectrum::new(SpectrumKind::CircleLaplacian).unwrap();
        assert!(circle.scaling_check(2.0).unwrap().abs_err <= 1e-8);
    }

    #[test]
    fn scaling_check_refuses_prime_spectra() {
        assert!(matches!(
            curve_primes().scaling_check(2.0),
            Err(Error::NotRegularizable(_))
        ));
    }

    #[test]
    fn curve_primes_fail_with_natural_boundary() {
        let result = curve_primes().regularized_det();
        match &result {
            RegResult::Failure(f) => {
                assert_eq!(f.reason, FailureReason::NaturalBoundary);
                assert!(!f.nearest.is_empty());
                assert!(f.diverging_term_index > 0);
                // the nearest entry really is the smallest enumerated Re(s)
                let min_re = f.nearest[0].s.re;
                assert!(min_re < 0.05);
            }
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn rational_and_progression_primes_fail() {
        for kind in [
            SpectrumKind::RationalPrimes,
            SpectrumKind::ProgressionPrimes { modulus: 4 },
        ] {
            let spec = Spectrum::new(kind).unwrap();
            let r = spec.regularized_det();
            assert!(r.is_failure());
            if let RegResult::Failure(f) = &r {
                assert!(!f.nearest.is_empty());
            }
        }
    }

    #[test]
    fn w_zero_values() {
        // PowerFamily(2), mu = 1: W[0] = -ln(2 pi)/2
        let w = power(2.0).w_zero(1.0).unwrap();
        match w {
            WZeroResult::Value { w0 } => {
                assert_abs_diff_eq!(w0, -0.5 * (2.0 * PI).ln(), epsilon = 1e-10)
            }
            _ => panic!("expected value"),
        }
        // single unit eigenvalue: det = 1, W[0] = 0
        let unit = Spectrum::new(SpectrumKind::Explicit(vec![(1.0, 1)])).unwrap();
        match unit.w_zero(1.0).unwrap() {
            WZeroResult::Value { w0 } => assert_abs_diff_eq!(w0, 0.0, epsilon = 1e-14),
            _ => panic!("expected value"),
        }
    }

    #[test]
    fn w_zero_failure_names_both_obstructed_terms() {
        match curve_primes().w_zero(1.0).unwrap() {
            WZeroResult::Failure {
                obstructed_terms, ..
            } => {
                assert_eq!(
                    obstructed_terms,
                    vec!["zeta_at_zero".to_string(), "zeta_prime_at_zero".to_string()]
                );
            }
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn invalid_spectra_are_rejected() {
        assert!(Spectrum::new(SpectrumKind::Explicit(vec![])).is_err());
        assert!(Spectrum::new(SpectrumKind::Explicit(vec![(0.0, 1)])).is_err());
        assert!(Spectrum::new(SpectrumKind::Explicit(vec![(-1.0, 1)])).is_err());
        assert!(Spectrum::new(SpectrumKind::Explicit(vec![(1.0, 0)])).is_err());
        assert!(Spectrum::new(SpectrumKind::PowerFamily { alpha: -2.0 }).is_err());
        assert!(Spectrum::new(SpectrumKind::ProgressionPrimes { modulus: 7 }).is_err());
        assert!(Spectrum::with_scale(SpectrumKind::CircleLaplacian, 0.0).is_err());
    }

    #[test]
    fn success_serializes_to_the_documented_schema() {
        let r = power(2.0).regularized_det();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["outcome"], "success");
        assert!(json["zeta0"].is_number());
        assert!(json["zeta_prime0"].is_number());
        assert!(json["det"].is_number());
    }

    #[test]
    fn failure_serializes_to_the_documented_schema() {
        let r = curve_primes().regularized_det();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["outcome"], "failure");
        assert_eq!(json["reason"], "natural_boundary");
        let nearest = json["nearest"].as_array().unwrap();
        assert!(!nearest.is_empty());
        assert!(nearest[0]["re_s"].is_number());
        assert!(nearest[0]["kind"].is_string());
        assert!(json["diverging_term_index"].as_u64().unwrap() > 0);
    }
}

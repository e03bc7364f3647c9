//! The zeta function of a curve, evaluated through its closed form
//! L(u) / ((1 - u)(1 - qu)) with u = q^{-s}, together with the two series
//! that define it in the half-plane of convergence: the Dirichlet series
//! over effective divisors and the Euler product over prime divisors.
//!
//! All evaluation happens in the u-coordinate; s enters only through
//! u = exp(-s ln q). That makes the imaginary period 2 pi / ln q exact by
//! construction and avoids cancellation near the period boundary.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::curves::{Curve, PrimeCountTable};
use crate::error::{Error, Result};
use crate::lfunc::{lpoly_from_counts, LPolynomial};

/// Guard radius around the poles, measured in the u-coordinate.
const POLE_GUARD: f64 = 1e-12;

/// A curve zeta function, held as its L-polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveZeta {
    l: LPolynomial,
}

impl CurveZeta {
    pub fn new(l: LPolynomial) -> CurveZeta {
        CurveZeta { l }
    }

    /// Builds the zeta function of a curve by brute-forcing N_1..N_g.
    pub fn for_curve(curve: &Curve) -> Result<CurveZeta> {
        let g = curve.genus();
        let mut counts = Vec::new();
        for n in 1..=g {
            counts.push(curve.count_points(n)?);
        }
        Ok(CurveZeta {
            l: lpoly_from_counts(curve.base().q(), g, &counts)?,
        })
    }

    pub fn lpoly(&self) -> &LPolynomial {
        &self.l
    }

    pub fn q(&self) -> u64 {
        self.l.q()
    }

    pub fn genus(&self) -> u32 {
        self.l.genus()
    }

    pub fn log_q(&self) -> f64 {
        (self.q() as f64).ln()
    }

    /// The imaginary period 2 pi / ln q.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.log_q()
    }

    /// u = q^{-s}.
    pub fn u_from_s(&self, s: Complex64) -> Complex64 {
        (-s * self.log_q()).exp()
    }

    /// zeta(s, C); refuses within 1e-12 (u-distance) of a pole.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let u = self.u_from_s(s);
        self.guard_poles(s, u)?;
        Ok(self.eval_u(u))
    }

    /// The closed form in the u-coordinate, no pole guard.
    pub fn eval_u(&self, u: Complex64) -> Complex64 {
        let q = self.q() as f64;
        self.l.eval(u) / ((1.0 - u) * (1.0 - q * u))
    }

    /// d/du log zeta = L'(u)/L(u) + 1/(1-u) + q/(1-qu).
    pub fn log_derivative_u(&self, u: Complex64) -> Complex64 {
        let q = self.q() as f64;
        self.l.eval_derivative(u) / self.l.eval(u)
            + (1.0 - u).inv()
            + q * (1.0 - q * u).inv()
    }

    fn guard_poles(&self, s: Complex64, u: Complex64) -> Result<()> {
        let tau = self.period();
        if (u - 1.0).norm() < POLE_GUARD {
            let m = (s.im / tau).round();
            return Err(Error::NearPole {
                s,
                pole: Complex64::new(0.0, m * tau),
            });
        }
        let q_inv = 1.0 / self.q() as f64;
        if (u - q_inv).norm() < POLE_GUARD {
            let m = (s.im / tau).round();
            return Err(Error::NearPole {
                s,
                pole: Complex64::new(1.0, m * tau),
            });
        }
        Ok(())
    }

    /// Effective-divisor counts b_0..b_cutoff: the power-series coefficients
    /// of L(u)/((1-u)(1-qu)), exact integers.
    pub fn divisor_counts(&self, cutoff: u32) -> Vec<BigInt> {
        let coeffs = self.l.coeffs();
        let q = BigInt::from(self.q());
        // c_n = sum_{k=0}^{n} q^k, the series of 1/((1-u)(1-qu))
        let mut c = Vec::with_capacity(cutoff as usize + 1);
        let mut q_pow = BigInt::one();
        let mut acc = BigInt::zero();
        for _ in 0..=cutoff {
            acc += &q_pow;
            c.push(acc.clone());
            q_pow *= &q;
        }
        (0..=cutoff as usize)
            .map(|n| {
                let mut b = BigInt::zero();
                for (i, a) in coeffs.iter().enumerate().take(n + 1) {
                    b += a * &c[n - i];
                }
                b
            })
            .collect()
    }

    /// Partial Dirichlet series sum_{n=0}^{D} b_n q^{-ns}; converges to
    /// zeta(s, C) for Re(s) > 1 with a geometric tail.
    pub fn dirichlet_partial(&self, s: Complex64, cutoff: u32) -> Complex64 {
        let u = self.u_from_s(s);
        let mut total = Complex64::new(0.0, 0.0);
        let mut u_pow = Complex64::new(1.0, 0.0);
        for b in self.divisor_counts(cutoff) {
            total += b.to_f64().expect("finite") * u_pow;
            u_pow *= u;
        }
        total
    }

    /// Partial Euler product over prime divisors of degree <= D:
    /// product (1 - q^{-ns})^{-pi_C(n)}.
    pub fn euler_product_partial(
        &self,
        table: &PrimeCountTable,
        s: Complex64,
        cutoff: u32,
    ) -> Complex64 {
        assert!(
            table.n_max() >= cutoff,
            "prime-count table covers degrees up to {}, need {}",
            table.n_max(),
            cutoff
        );
        let u = self.u_from_s(s);
        let mut log_total = Complex64::new(0.0, 0.0);
        let mut u_pow = Complex64::new(1.0, 0.0);
        for n in 1..=cutoff {
            u_pow *= u;
            let pi_n = table.prime_count(n).to_f64().expect("finite");
            log_total -= pi_n * (1.0 - u_pow).ln();
        }
        log_total.exp()
    }

    /// All zeros s with Im(s) in [t_lo, t_hi]: the images of the roots of L
    /// under s = -Log(u)/ln q plus their 2 pi / ln q translates. On the Weil
    /// bound they all have Re(s) = 1/2.
    pub fn zeros(&self, t_lo: f64, t_hi: f64) -> Result<Vec<Complex64>> {
        let tau = self.period();
        let ln_q = self.log_q();
        let mut out = Vec::new();
        for u in self.l.roots()? {
            let base = -u.ln() / ln_q;
            let m_lo = ((t_lo - base.im) / tau).ceil() as i64;
            let m_hi = ((t_hi - base.im) / tau).floor() as i64;
            for m in m_lo..=m_hi {
                out.push(Complex64::new(base.re, base.im + m as f64 * tau));
            }
        }
        out.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        out.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
        Ok(out)
    }

    /// Relative residual of q^{(g-1)s} zeta(s) = q^{(g-1)(1-s)} zeta(1-s).
    pub fn functional_equation_residual(&self, s: Complex64) -> Result<f64> {
        let g = self.genus() as f64;
        let ln_q = self.log_q();
        let lhs = ((g - 1.0) * s * ln_q).exp() * self.eval(s)?;
        let rhs = ((g - 1.0) * (1.0 - s) * ln_q).exp() * self.eval(1.0 - s)?;
        Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE))
    }
}

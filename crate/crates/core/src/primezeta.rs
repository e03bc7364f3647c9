//! Prime zeta functions: the sum of (norm p)^{-s} over the prime divisors
//! of a curve, its Moebius-inversion continuation into the strip
//! 0 < Re(s) <= 1, its closed-form derivative, and the enumeration of the
//! singularities that accumulate on Re(s) = 0.
//!
//! The continuation is
//!
//!   P(s, C) = sum over k >= 1 of mu(k)/k * Log zeta(ks, C),
//!
//! principal logarithm per term. Each square-free k drags the poles and
//! zeros of zeta(., C) to s = rho/k, so the real parts 1/k and 1/(2k)
//! pile up against Re(s) = 0; the enumeration and the boundary report
//! tabulate exactly that. The same machinery is provided for the classical
//! prime zeta function and for primes in the progressions 1 mod 3, 4, 6.
//!
//! Branch convention: every logarithm is principal. For k >= 2 and
//! Re(s) >= sigma_0 > 0 the arguments stay near 1 and no ambiguity arises;
//! values of the k = 1 term off the real axis inside the strip depend on
//! this documented choice.

use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::curves::{Curve, PrimeCountTable};
use crate::dirichlet::{dirichlet_l, mobius, prime_sieve, riemann_zeta, Character};
use crate::error::{Error, Result};
use crate::zetacurve::CurveZeta;

/// Guard radius (u-coordinate for curves, s-coordinate for the rational
/// case) around poles and zeros of the underlying zeta function.
const SINGULARITY_GUARD: f64 = 1e-8;

/// Truncation cap for Moebius sums.
const K_CAP: usize = 500;

/// Absolute tail target for the automatic truncation rule.
const TAIL_TARGET_LOG10: f64 = 12.0;

/// What kind of singularity of the underlying zeta function a lattice
/// point s = rho/k descends from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SingularityKind {
    PoleOfZeta,
    ZeroOfZeta,
}

impl SingularityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingularityKind::PoleOfZeta => "pole-of-zeta",
            SingularityKind::ZeroOfZeta => "zero-of-zeta",
        }
    }
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SingularityKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// One singularity s = rho/k of the continued prime zeta function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularityEntry {
    pub s: Complex64,
    pub k: u64,
    pub kind: SingularityKind,
}

impl Serialize for SingularityEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SingularityEntry", 4)?;
        st.serialize_field("re_s", &self.s.re)?;
        st.serialize_field("im_s", &self.s.im)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("kind", &self.kind)?;
        st.end()
    }
}

/// Singularities above a real-part cutoff, sorted by Re(s) descending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityList {
    pub entries: Vec<SingularityEntry>,
    pub sigma_min: f64,
}

/// One row of the natural-boundary evidence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub sigma: f64,
    pub count: usize,
    pub min_re: Option<f64>,
    pub argmin_k: Option<u64>,
}

/// True when the singularity counts strictly increase row to row (the
/// rows are expected to come from a strictly decreasing sigma schedule).
pub fn counts_strictly_increasing(rows: &[BoundaryRow]) -> bool {
    rows.windows(2).all(|w| w[0].count < w[1].count)
}

fn dedup_and_sort(entries: &mut Vec<SingularityEntry>) {
    let key = |e: &SingularityEntry| {
        (
            (e.s.re * 1e12).round() as i64,
            (e.s.im * 1e12).round() as i64,
            e.kind,
            e.k,
        )
    };
    entries.sort_by(|a, b| key(a).cmp(&key(b)));
    entries.dedup_by(|a, b| key(a) == key(b));
    entries.sort_by(|a, b| {
        b.s.re
            .total_cmp(&a.s.re)
            .then(a.s.im.total_cmp(&b.s.im))
            .then(a.kind.cmp(&b.kind))
            .then(a.k.cmp(&b.k))
    });
}

fn boundary_rows_from(
    sigmas: &[f64],
    mut enumerate: impl FnMut(f64) -> SingularityList,
) -> Vec<BoundaryRow> {
    sigmas
        .iter()
        .map(|&sigma| {
            let list = enumerate(sigma);
            let min = list
                .entries
                .iter()
                .min_by(|a, b| a.s.re.total_cmp(&b.s.re));
            BoundaryRow {
                sigma,
                count: list.entries.len(),
                min_re: min.map(|e| e.s.re),
                argmin_k: min.map(|e| e.k),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Curve case
// ---------------------------------------------------------------------------

/// The prime zeta function of a curve: direct series over prime divisors
/// plus the Moebius-log continuation.
#[derive(Clone, Debug)]
pub struct PrimeZeta {
    zeta: CurveZeta,
    table: PrimeCountTable,
}

impl PrimeZeta {
    /// Default direct-series depth; enough for a 1e-13 tail at Re(s) >= 1.3.
    pub const DEFAULT_TABLE_DEPTH: u32 = 64;

    pub fn new(zeta: CurveZeta, table_depth: u32) -> Result<PrimeZeta> {
        let table = PrimeCountTable::from_lpoly(zeta.lpoly(), table_depth)?;
        Ok(PrimeZeta { zeta, table })
    }

    pub fn from_curve(curve: &Curve, table_depth: u32) -> Result<PrimeZeta> {
        PrimeZeta::new(CurveZeta::for_curve(curve)?, table_depth)
    }

    pub fn zeta(&self) -> &CurveZeta {
        &self.zeta
    }

    pub fn table(&self) -> &PrimeCountTable {
        &self.table
    }

    /// Direct series sum_{n=1}^{D} pi_C(n) q^{-ns}; converges for Re(s) > 1.
    pub fn direct(&self, s: Complex64, cutoff: u32) -> Complex64 {
        assert!(
            cutoff <= self.table.n_max(),
            "table depth {} cannot serve cutoff {}",
            self.table.n_max(),
            cutoff
        );
        let u = self.zeta.u_from_s(s);
        let mut total = Complex64::new(0.0, 0.0);
        let mut u_pow = Complex64::new(1.0, 0.0);
        for n in 1..=cutoff {
            u_pow *= u;
            total += self.table.prime_count(n).to_f64().expect("finite") * u_pow;
        }
        total
    }

    /// Truncation order for the Moebius sum: the smallest K with
    /// max(1, sum |a_i|) (1 + q) q^{-K Re(s)} < 1e-12, capped at 500.
    pub fn auto_truncation(&self, s: Complex64) -> usize {
        let coeff_sum: f64 = self
            .zeta
            .lpoly()
            .coeffs()
            .iter()
            .map(|c| c.to_f64().expect("finite").abs())
            .sum();
        let front = coeff_sum.max(1.0) * (1.0 + self.zeta.q() as f64);
        let k = (TAIL_TARGET_LOG10 + front.log10())
            / (s.re * (self.zeta.q() as f64).log10());
        (k.ceil().max(1.0) as usize).min(K_CAP)
    }

    /// Moebius continuation sum_{k<=K} mu(k)/k Log zeta(ks, C), valid for
    /// Re(s) > 0 away from the singularity lattice.
    pub fn mobius(&self, s: Complex64, truncation: Option<usize>) -> Result<Complex64> {
        self.mobius_impl(s, truncation, true)
    }

    /// Same sum with the near-singularity guard disabled, for callers that
    /// probe divergence on purpose. Values within the guard radius are
    /// dominated by rounding and only their magnitude is meaningful.
    pub fn mobius_unguarded(&self, s: Complex64, truncation: Option<usize>) -> Complex64 {
        self.mobius_impl(s, truncation, false)
            .expect("unguarded evaluation is total")
    }

    fn mobius_impl(
        &self,
        s: Complex64,
        truncation: Option<usize>,
        guard: bool,
    ) -> Result<Complex64> {
        if s.re <= 0.0 {
            return Err(Error::NonConvergent {
                s,
                detail: "the Moebius-log continuation requires Re(s) > 0".into(),
            });
        }
        let k_max = truncation.unwrap_or_else(|| self.auto_truncation(s));
        let mut total = Complex64::new(0.0, 0.0);
        for k in 1..=k_max {
            let mu = mobius(k as u64);
            if mu == 0 {
                continue;
            }
            let u = self.zeta.u_from_s(s * k as f64);
            if guard {
                self.guard_term(s, k as u64, u)?;
            }
            total += (mu as f64 / k as f64) * self.zeta.eval_u(u).ln();
        }
        Ok(total)
    }

    fn guard_term(&self, s: Complex64, k: u64, u: Complex64) -> Result<()> {
        let q_inv = 1.0 / self.zeta.q() as f64;
        if (u - 1.0).norm() < SINGULARITY_GUARD || (u - q_inv).norm() < SINGULARITY_GUARD {
            return Err(Error::NearSingularity {
                s,
                k,
                kind: SingularityKind::PoleOfZeta,
            });
        }
        for root in self.zeta.lpoly().roots()? {
            if (u - root).norm() < SINGULARITY_GUARD {
                return Err(Error::NearSingularity {
                    s,
                    k,
                    kind: SingularityKind::ZeroOfZeta,
                });
            }
        }
        Ok(())
    }

    /// Closed-form derivative dP/ds: each term is
    /// mu(k) (-ln q) u (L'(u)/L(u) + 1/(1-u) + q/(1-qu)) at u = q^{-ks}
    /// (the 1/k of the sum cancels against the inner k from the chain rule).
    pub fn derivative(&self, s: Complex64, truncation: Option<usize>) -> Result<Complex64> {
        if s.re <= 0.0 {
            return Err(Error::NonConvergent {
                s,
                detail: "the Moebius-log continuation requires Re(s) > 0".into(),
            });
        }
        let k_max = truncation.unwrap_or_else(|| self.auto_truncation(s));
        let ln_q = self.zeta.log_q();
        let mut total = Complex64::new(0.0, 0.0);
        for k in 1..=k_max {
            let mu = mobius(k as u64);
            if mu == 0 {
                continue;
            }
            let u = self.zeta.u_from_s(s * k as f64);
            self.guard_term(s, k as u64, u)?;
            total += (mu as f64) * (-ln_q) * u * self.zeta.log_derivative_u(u);
        }
        Ok(total)
    }

    /// Enumerates the singularities s = rho/k with Re(s) > sigma_min and
    /// Im(s) in [t_lo, t_hi], where rho runs over the poles
    /// 1 + i m (2 pi / ln q) and the zeros of zeta(., C), and k over the
    /// square-free integers up to k_max. Sorted by Re(s) descending.
    pub fn singularities(
        &self,
        sigma_min: f64,
        t_range: (f64, f64),
        k_max: u64,
    ) -> SingularityList {
        assert!(
            sigma_min > 0.0 && sigma_min <= 1.0,
            "sigma_min must lie in (0, 1]"
        );
        let (t_lo, t_hi) = t_range;
        let tau = self.zeta.period();
        let ln_q = self.zeta.log_q();
        let mut entries = Vec::new();
        // zero ordinates within one period, snapped onto Re = 1/2
        let zero_bases: Vec<f64> = self
            .zeta
            .lpoly()
            .roots()
            .map(|roots| roots.iter().map(|u| (-u.ln() / ln_q).im).collect())
            .unwrap_or_default();
        for k in 1..=k_max {
            if mobius(k) == 0 {
                continue;
            }
            let kf = k as f64;
            // poles rho = 1 + i tau m
            if 1.0 / kf > sigma_min {
                let m_lo = (t_lo * kf / tau).ceil() as i64;
                let m_hi = (t_hi * kf / tau).floor() as i64;
                for m in m_lo..=m_hi {
                    entries.push(SingularityEntry {
                        s: Complex64::new(1.0 / kf, m as f64 * tau / kf),
                        k,
                        kind: SingularityKind::PoleOfZeta,
                    });
                }
            }
            // zeros rho = 1/2 + i (t_j + tau m)
            if 0.5 / kf > sigma_min {
                for &t_j in &zero_bases {
                    let m_lo = ((t_lo * kf - t_j) / tau).ceil() as i64;
                    let m_hi = ((t_hi * kf - t_j) / tau).floor() as i64;
                    for m in m_lo..=m_hi {
                        entries.push(SingularityEntry {
                            s: Complex64::new(0.5 / kf, (t_j + m as f64 * tau) / kf),
                            k,
                            kind: SingularityKind::ZeroOfZeta,
                        });
                    }
                }
            }
        }
        dedup_and_sort(&mut entries);
        SingularityList { entries, sigma_min }
    }

    /// Natural-boundary evidence: one row per sigma with the singularity
    /// count above it. This tabulates accumulation; it is not a proof.
    pub fn boundary_report(
        &self,
        sigmas: &[f64],
        t_range: (f64, f64),
        k_max: u64,
    ) -> Vec<BoundaryRow> {
        boundary_rows_from(sigmas, |sigma| self.singularities(sigma, t_range, k_max))
    }
}

// ---------------------------------------------------------------------------
// Rational case
// ---------------------------------------------------------------------------

/// Truncation rule for the classical Moebius sum (tail ~ 2^{-K Re(s)}).
pub fn rational_auto_truncation(s: Complex64) -> usize {
    let k = (TAIL_TARGET_LOG10 + 1.0) / (s.re * std::f64::consts::LOG10_2);
    (k.ceil().max(1.0) as usize).min(K_CAP)
}

/// The classical prime zeta function P(s) = sum over primes of p^{-s},
/// continued to Re(s) > 0 by P(s) = sum_k mu(k)/k Log zeta(ks).
pub fn rational_prime_zeta(s: Complex64, truncation: Option<usize>) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::NonConvergent {
            s,
            detail: "the Moebius-log continuation requires Re(s) > 0".into(),
        });
    }
    let k_max = truncation.unwrap_or_else(|| rational_auto_truncation(s));
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=k_max {
        let mu = mobius(k as u64);
        if mu == 0 {
            continue;
        }
        let z = guarded_zeta(s, k as u64)?;
        total += (mu as f64 / k as f64) * z.ln();
    }
    Ok(total)
}

fn guarded_zeta(s: Complex64, k: u64) -> Result<Complex64> {
    let w = s * k as f64;
    if (w - 1.0).norm() < SINGULARITY_GUARD {
        return Err(Error::NearSingularity {
            s,
            k,
            kind: SingularityKind::PoleOfZeta,
        });
    }
    let z = riemann_zeta(w).map_err(|_| Error::NearSingularity {
        s,
        k,
        kind: SingularityKind::PoleOfZeta,
    })?;
    if z.norm() < SINGULARITY_GUARD {
        return Err(Error::NearSingularity {
            s,
            k,
            kind: SingularityKind::ZeroOfZeta,
        });
    }
    Ok(z)
}

/// Singularity lattice of the classical P(s): poles at s = 1/k and, for
/// each supplied critical-line ordinate t, zeros at (1/2 +- i t)/k.
pub fn rational_singularities(
    sigma_min: f64,
    t_range: (f64, f64),
    k_max: u64,
    zero_ordinates: &[f64],
) -> SingularityList {
    assert!(sigma_min > 0.0 && sigma_min <= 1.0);
    let (t_lo, t_hi) = t_range;
    let mut entries = Vec::new();
    for k in 1..=k_max {
        if mobius(k) == 0 {
            continue;
        }
        let kf = k as f64;
        if 1.0 / kf > sigma_min && t_lo <= 0.0 && 0.0 <= t_hi {
            entries.push(SingularityEntry {
                s: Complex64::new(1.0 / kf, 0.0),
                k,
                kind: SingularityKind::PoleOfZeta,
            });
        }
        if 0.5 / kf > sigma_min {
            for &t in zero_ordinates {
                for signed in [t, -t] {
                    let im = signed / kf;
                    if t_lo <= im && im <= t_hi {
                        entries.push(SingularityEntry {
                            s: Complex64::new(0.5 / kf, im),
                            k,
                            kind: SingularityKind::ZeroOfZeta,
                        });
                    }
                }
            }
        }
    }
    dedup_and_sort(&mut entries);
    SingularityList { entries, sigma_min }
}

/// Boundary evidence rows for the classical P(s).
pub fn rational_boundary_report(
    sigmas: &[f64],
    t_range: (f64, f64),
    k_max: u64,
    zero_ordinates: &[f64],
) -> Vec<BoundaryRow> {
    boundary_rows_from(sigmas, |sigma| {
        rational_singularities(sigma, t_range, k_max, zero_ordinates)
    })
}

// ---------------------------------------------------------------------------
// Primes in progressions 1 mod m, m in {3, 4, 6}
// ---------------------------------------------------------------------------

fn progression_excluded_primes(modulus: u64) -> Result<&'static [u64]> {
    match modulus {
        3 => Ok(&[3]),
        4 => Ok(&[2]),
        6 => Ok(&[2, 3]),
        m => Err(Error::UnsupportedModulus(m)),
    }
}

/// P_{chi_0}(s): sum of p^{-s} over primes not dividing the modulus,
/// via mu(k)/k Log[zeta(ks) prod_{p | m} (1 - p^{-ks})].
fn chi0_prime_zeta(s: Complex64, modulus: u64, truncation: Option<usize>) -> Result<Complex64> {
    let excluded = progression_excluded_primes(modulus)?;
    let k_max = truncation.unwrap_or_else(|| rational_auto_truncation(s));
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1..=k_max {
        let mu = mobius(k as u64);
        if mu == 0 {
            continue;
        }
        let w = s * k as f64;
        let mut z = guarded_zeta(s, k as u64)?;
        for &p in excluded {
            z *= 1.0 - crate::dirichlet::cpow(p as f64, -w);
        }
        total += (mu as f64 / k as f64) * z.ln();
    }
    Ok(total)
}

/// The even part sum_{n even} (1/n) P_{chi_0}(n w) subtracted from
/// log L(w, chi) before the odd-support inversion.
fn even_part(w: Complex64, modulus: u64) -> Result<Complex64> {
    // smallest prime coprime to the modulus governs the decay:
    // terms fall off like p0^{-n Re(w)}
    let p0: f64 = match modulus {
        3 => 2.0,
        _ => 3.0,
    };
    let n_stop = ((TAIL_TARGET_LOG10 + 1.0) * std::f64::consts::LN_10 / (w.re * p0.ln()))
        .ceil()
        .max(2.0) as usize;
    let n_stop = n_stop.min(200);
    let mut total = Complex64::new(0.0, 0.0);
    let mut n = 2usize;
    while n <= n_stop {
        total += chi0_prime_zeta(w * n as f64, modulus, None)? / n as f64;
        n += 2;
    }
    Ok(total)
}

/// Prime zeta function over the progression p = 1 (mod m) for m in
/// {3, 4, 6}: the character average
/// (P_{chi_0}(s) + P_chi(s))/2, with P_chi recovered from log L(s, chi) by
/// Moebius inversion over odd square-free k after subtracting the even
/// part. Validated for Re(s) > 1; the same formulas extend to
/// 0 < Re(s) <= 1 away from the singularity lattice (experimental regime).
pub fn progression_prime_zeta(
    s: Complex64,
    modulus: u64,
    truncation: Option<usize>,
) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::NonConvergent {
            s,
            detail: "the Moebius-log continuation requires Re(s) > 0".into(),
        });
    }
    progression_excluded_primes(modulus)?;
    if modulus == 6 {
        // p = 1 (mod 6) and p = 1 (mod 3) name the same set of primes: every
        // prime above 3 that is 1 mod 3 is odd, hence 1 mod 6.
        return progression_prime_zeta(s, 3, truncation);
    }
    let chi = Character::quadratic(modulus)?;
    let p0 = chi0_prime_zeta(s, modulus, truncation)?;
    let k_max = truncation.unwrap_or_else(|| {
        // chi-part tail decays like p0^{-K Re(s)} with p0 the smallest
        // coprime prime; reuse the base-2 rule (it is the more conservative).
        rational_auto_truncation(s)
    });
    let mut p_chi = Complex64::new(0.0, 0.0);
    let mut k = 1usize;
    while k <= k_max {
        let mu = mobius(k as u64);
        if mu != 0 {
            let w = s * k as f64;
            let l = dirichlet_l(w, &chi)?;
            if l.norm() < SINGULARITY_GUARD {
                return Err(Error::NearSingularity {
                    s,
                    k: k as u64,
                    kind: SingularityKind::ZeroOfZeta,
                });
            }
            p_chi += (mu as f64 / k as f64) * (l.ln() - even_part(w, modulus)?);
        }
        k += 2; // odd support only
    }
    Ok((p0 + p_chi) / 2.0)
}

/// Sieve-backed direct sum over primes p <= limit of p^{-s}, optionally
/// restricted to p = r (mod m). Summed over descending p so the small
/// terms accumulate first. This is the validation oracle for the Moebius
/// paths; it is exact up to the truncation tail.
pub fn sieve_prime_sum(
    s: Complex64,
    limit: u64,
    residue: Option<(u64, u64)>,
) -> Result<Complex64> {
    let primes = prime_sieve(limit)?;
    let mut total = Complex64::new(0.0, 0.0);
    for &p in primes.iter().rev() {
        if let Some((m, r)) = residue {
            if p % m != r {
                continue;
            }
        }
        total += crate::dirichlet::cpow(p as f64, -s);
    }
    Ok(total)
}

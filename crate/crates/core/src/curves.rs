//! Curve models over F_q and exact point counting.
//!
//! Three families are supported: the projective line, general Weierstrass
//! models, and hyperelliptic models y^2 + h(x) y = f(x). Together they
//! realize every genus needed at desk scale. Point counts N_n = #C(F_{q^n})
//! are obtained by brute force over the extension field, counting the
//! solutions in y of a quadratic for each x, plus the points at infinity
//! of the smooth model under a fixed convention (below).
//!
//! Conventions:
//! - Weierstrass curves and odd-degree hyperelliptic curves have exactly
//!   one point at infinity.
//! - For even-degree hyperelliptic f, the points at infinity are the
//!   solutions z of z^2 + h_top z = f_top over F_{q^n}, where h_top and
//!   f_top are the coefficients of x^(g+1) in h and x^(2g+2) in f. For
//!   h = 0 in odd characteristic this is the classical rule: two points
//!   when the leading coefficient of f is a square, none otherwise.
//! - y^2 = f(x) with h = 0 is rejected in characteristic 2 (it is always
//!   singular there).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dirichlet::mobius;
use crate::error::{Error, Result};
use crate::ffield::{parse_poly, FieldElement, FieldSpec};
use crate::lfunc::{counts_from_lpoly, lpoly_from_counts, LPolynomial};

/// A curve model over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveModel {
    /// The projective line P^1 (genus 0).
    ProjectiveLine,
    /// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 (genus 1).
    WeierstrassElliptic {
        a1: FieldElement,
        a2: FieldElement,
        a3: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    },
    /// y^2 + h(x) y = f(x) with f monic of degree 2g+1 or 2g+2 and
    /// deg h <= g + 1. Coefficients are stored low-to-high.
    Hyperelliptic {
        f: Vec<FieldElement>,
        h: Vec<FieldElement>,
    },
}

/// A nonsingular curve over a finite field, with its genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    base: FieldSpec,
    model: CurveModel,
    genus: u32,
}

impl Curve {
    /// Validates the model (coefficient fields, degree constraints,
    /// nonsingularity) and fixes the genus.
    pub fn new(base: FieldSpec, model: CurveModel) -> Result<Curve> {
        let genus = match &model {
            CurveModel::ProjectiveLine => 0,
            CurveModel::WeierstrassElliptic { a1, a2, a3, a4, a6 } => {
                for c in [a1, a2, a3, a4, a6] {
                    if *c.spec() != base {
                        return Err(Error::MixedFields {
                            left: base.q(),
                            right: c.spec().q(),
                        });
                    }
                }
                1
            }
            CurveModel::Hyperelliptic { f, h } => {
                for c in f.iter().chain(h.iter()) {
                    if *c.spec() != base {
                        return Err(Error::MixedFields {
                            left: base.q(),
                            right: c.spec().q(),
                        });
                    }
                }
                let deg_f = poly_degree(f).ok_or_else(|| {
                    Error::UnsupportedModel("hyperelliptic f must be nonzero".into())
                })?;
                if deg_f < 1 {
                    return Err(Error::UnsupportedModel(
                        "hyperelliptic f must have degree at least 1".into(),
                    ));
                }
                if f[deg_f] != base.one() {
                    return Err(Error::UnsupportedModel(
                        "hyperelliptic f must be monic".into(),
                    ));
                }
                let genus = (deg_f as u32).div_ceil(2) - 1;
                if let Some(deg_h) = poly_degree(h) {
                    if deg_h as u32 > genus + 1 {
                        return Err(Error::UnsupportedModel(format!(
                            "deg h = {deg_h} exceeds g + 1 = {}",
                            genus + 1
                        )));
                    }
                }
                genus
            }
        };
        match nonsingularity(&base, &model)? {
            NonsingularityCheck::Nonsingular => Ok(Curve { base, model, genus }),
            NonsingularityCheck::Singular(witness) => Err(Error::SingularCurve { witness }),
        }
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// #C(F_{q^n}) as an exact integer, by brute force over the extension.
    pub fn count_points(&self, n: u32) -> Result<BigInt> {
        count_points(self, n)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.model {
            CurveModel::ProjectiveLine => write!(f, "P^1 over {}", self.base),
            CurveModel::WeierstrassElliptic { .. } => {
                write!(f, "Weierstrass elliptic curve over {}", self.base)
            }
            CurveModel::Hyperelliptic { .. } => {
                write!(f, "genus-{} hyperelliptic curve over {}", self.genus, self.base)
            }
        }
    }
}

fn poly_degree(p: &[FieldElement]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_eval(p: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = x.spec().zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).expect("same field");
        acc = acc.add(c).expect("same field");
    }
    acc
}

fn poly_derivative(p: &[FieldElement], spec: &FieldSpec) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c.mul(&spec.from_int(i as u64)).expect("same field"));
    }
    out
}

fn poly_gcd_degree(a: &[FieldElement], b: &[FieldElement]) -> usize {
    // Degree of gcd(a, b) in F_q[x]; only the degree is needed.
    let mut r0: Vec<FieldElement> = a.to_vec();
    let mut r1: Vec<FieldElement> = b.to_vec();
    loop {
        let d1 = match poly_degree(&r1) {
            None => return poly_degree(&r0).unwrap_or(0),
            Some(d) => d,
        };
        r1.truncate(d1 + 1);
        // r0 mod r1
        let lead_inv = r1[d1].inv().expect("leading coefficient is nonzero");
        while let Some(d0) = poly_degree(&r0) {
            if d0 < d1 {
                break;
            }
            let c = r0[d0].mul(&lead_inv).expect("same field");
            for (j, r1j) in r1.iter().enumerate() {
                let sub = c.mul(r1j).expect("same field");
                r0[d0 - d1 + j] = r0[d0 - d1 + j].sub(&sub).expect("same field");
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
}

// ---------------------------------------------------------------------------
// Nonsingularity
// ---------------------------------------------------------------------------

enum NonsingularityCheck {
    Nonsingular,
    Singular(String),
}

/// Nonsingularity test for a model over its base field.
///
/// P^1 is always nonsingular; Weierstrass models are tested through the
/// discriminant of the general form; hyperelliptic models with h = 0 in odd
/// characteristic through gcd(f, f') = 1; everything else (h != 0 or
/// characteristic 2) by brute-force search for a simultaneous solution of
/// the curve equation and both partial derivatives over F_{q^m},
/// m <= 2 * genus.
pub fn is_nonsingular(base: &FieldSpec, model: &CurveModel) -> Result<bool> {
    match nonsingularity(base, model)? {
        NonsingularityCheck::Nonsingular => Ok(true),
        NonsingularityCheck::Singular(_) => Ok(false),
    }
}

fn nonsingularity(base: &FieldSpec, model: &CurveModel) -> Result<NonsingularityCheck> {
    match model {
        CurveModel::ProjectiveLine => Ok(NonsingularityCheck::Nonsingular),
        CurveModel::WeierstrassElliptic { a1, a2, a3, a4, a6 } => {
            let disc = weierstrass_discriminant(base, a1, a2, a3, a4, a6);
            if disc.is_zero() {
                Ok(NonsingularityCheck::Singular(
                    "Weierstrass discriminant vanishes".into(),
                ))
            } else {
                Ok(NonsingularityCheck::Nonsingular)
            }
        }
        CurveModel::Hyperelliptic { f, h } => hyperelliptic_nonsingularity(base, f, h),
    }
}

fn weierstrass_discriminant(
    base: &FieldSpec,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
    a4: &FieldElement,
    a6: &FieldElement,
) -> FieldElement {
    let int = |n: u64| base.from_int(n);
    let mul = |x: &FieldElement, y: &FieldElement| x.mul(y).expect("same field");
    let add = |x: &FieldElement, y: &FieldElement| x.add(y).expect("same field");
    let sub = |x: &FieldElement, y: &FieldElement| x.sub(y).expect("same field");

    let a1sq = mul(a1, a1);
    let b2 = add(&a1sq, &mul(&int(4), a2));
    let b4 = add(&mul(&int(2), a4), &mul(a1, a3));
    let b6 = add(&mul(a3, a3), &mul(&int(4), a6));
    // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
    let b8 = {
        let t1 = mul(&a1sq, a6);
        let t2 = mul(&mul(&int(4), a2), a6);
        let t3 = mul(&mul(a1, a3), a4);
        let t4 = mul(a2, &mul(a3, a3));
        let t5 = mul(a4, a4);
        sub(&add(&add(&t1, &t2), &t4), &add(&t3, &t5))
    };
    // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let t1 = mul(&mul(&b2, &b2), &b8);
    let t2 = mul(&int(8), &mul(&b4, &mul(&b4, &b4)));
    let t3 = mul(&int(27), &mul(&b6, &b6));
    let t4 = mul(&int(9), &mul(&b2, &mul(&b4, &b6)));
    sub(&t4, &add(&add(&t1, &t2), &t3))
}

fn hyperelliptic_nonsingularity(
    base: &FieldSpec,
    f: &[FieldElement],
    h: &[FieldElement],
) -> Result<NonsingularityCheck> {
    let h_is_zero = poly_degree(h).is_none();
    if h_is_zero && base.p() == 2 {
        return Ok(NonsingularityCheck::Singular(
            "y^2 = f(x) is inseparable in characteristic 2 (h = 0)".into(),
        ));
    }
    if h_is_zero {
        let fd = poly_derivative(f, base);
        let gcd_deg = poly_gcd_degree(f, &fd);
        return if gcd_deg == 0 {
            Ok(NonsingularityCheck::Nonsingular)
        } else {
            Ok(NonsingularityCheck::Singular(format!(
                "gcd(f, f') has degree {gcd_deg}"
            )))
        };
    }
    // Brute-force search over F_{q^m}. A singular affine point satisfies
    // 2y + h(x) = 0, which pins y down once x is fixed, so only x is
    // enumerated.
    let deg_f = poly_degree(f).expect("validated nonzero");
    let genus = (deg_f as u32).div_ceil(2) - 1;
    let m_max = (2 * genus).max(1);
    for m in 1..=m_max {
        let ext = extension_field(base, m)?;
        let embed = Embedding::find(base, &ext);
        let fe: Vec<_> = f.iter().map(|c| embed.map(c)).collect();
        let he: Vec<_> = h.iter().map(|c| embed.map(c)).collect();
        let fde = poly_derivative(&fe, &ext);
        let hde = poly_derivative(&he, &ext);
        let half_neg = if base.p() == 2 {
            None
        } else {
            Some(ext.from_int(2).inv().expect("2 is invertible").neg())
        };
        for x in ext.enumerate() {
            let hx = poly_eval(&he, &x);
            let y = match &half_neg {
                Some(hn) => hx.mul(hn).expect("same field"),
                None => {
                    if !hx.is_zero() {
                        continue; // dF/dy = h(x) != 0 in characteristic 2
                    }
                    // y^2 = f(x); the square root is y = f(x)^(q^m / 2).
                    poly_eval(&fe, &x).pow(ext.q() / 2)
                }
            };
            let fx = poly_eval(&fe, &x);
            let curve_eq = y
                .mul(&y)
                .expect("same field")
                .add(&hx.mul(&y).expect("same field"))
                .expect("same field")
                .sub(&fx)
                .expect("same field");
            if !curve_eq.is_zero() {
                continue;
            }
            let dx = poly_eval(&hde, &x)
                .mul(&y)
                .expect("same field")
                .sub(&poly_eval(&fde, &x))
                .expect("same field");
            if dx.is_zero() {
                return Ok(NonsingularityCheck::Singular(format!(
                    "singular point (x, y) = ({x}, {y}) over F_{}",
                    ext.q()
                )));
            }
        }
    }
    Ok(NonsingularityCheck::Nonsingular)
}

// ---------------------------------------------------------------------------
// Point counting
// ---------------------------------------------------------------------------

/// F_{q^n} as an extension of the base's prime field, inheriting the budget.
fn extension_field(base: &FieldSpec, n: u32) -> Result<FieldSpec> {
    if n == 0 {
        return Err(Error::BudgetExceeded {
            q: base.q(),
            n,
            budget: base.budget(),
        });
    }
    if n == 1 {
        return Ok(base.clone());
    }
    FieldSpec::with_budget(base.p(), base.a() * n, base.budget()).map_err(|e| match e {
        Error::DegreeOutOfRange { budget, .. } => Error::BudgetExceeded {
            q: base.q(),
            n,
            budget,
        },
        other => other,
    })
}

/// Maps F_q into F_{q^n} by sending the generator of F_q to a fixed root of
/// its minimal polynomial (the first root in enumeration order).
struct Embedding {
    gen_powers: Vec<FieldElement>,
}

impl Embedding {
    fn find(small: &FieldSpec, big: &FieldSpec) -> Embedding {
        let a = small.a() as usize;
        if small == big {
            let mut gen_powers = vec![big.one()];
            let w = big.generator();
            for i in 1..a {
                gen_powers.push(gen_powers[i - 1].mul(&w).expect("same field"));
            }
            return Embedding { gen_powers };
        }
        debug_assert_eq!(big.a() % small.a(), 0);
        let modulus: Vec<FieldElement> =
            small.modulus().iter().map(|&c| big.from_int(c)).collect();
        let root = big
            .enumerate()
            .find(|e| poly_eval(&modulus, e).is_zero())
            .expect("the minimal polynomial splits in the extension");
        let mut gen_powers = vec![big.one()];
        for i in 1..a {
            gen_powers.push(gen_powers[i - 1].mul(&root).expect("same field"));
        }
        Embedding { gen_powers }
    }

    fn map(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.gen_powers[0].spec().zero();
        for (c, pw) in x.coeffs().iter().zip(&self.gen_powers) {
            if *c == 0 {
                continue;
            }
            let term = pw.mul(&pw.spec().from_int(*c)).expect("same field");
            acc = acc.add(&term).expect("same field");
        }
        acc
    }
}

/// Number of y in F_q solving y^2 + c y = d, resolved without looping over
/// y: by the absolute trace in characteristic 2, by the quadratic character
/// (via a precomputed square table) otherwise.
struct QuadraticCounter {
    spec: FieldSpec,
    squares: Option<Vec<bool>>, // odd characteristic only
    quarter: Option<FieldElement>, // 1/4, odd characteristic only
}

impl QuadraticCounter {
    fn new(spec: &FieldSpec) -> QuadraticCounter {
        if spec.p() == 2 {
            return QuadraticCounter {
                spec: spec.clone(),
                squares: None,
                quarter: None,
            };
        }
        let mut squares = vec![false; spec.q() as usize];
        for z in spec.enumerate() {
            squares[z.mul(&z).expect("same field").index() as usize] = true;
        }
        let quarter = spec.from_int(4).inv().expect("4 is invertible");
        QuadraticCounter {
            spec: spec.clone(),
            squares: Some(squares),
            quarter: Some(quarter),
        }
    }

    fn count(&self, c: &FieldElement, d: &FieldElement) -> u64 {
        if self.spec.p() == 2 {
            if c.is_zero() {
                return 1; // squaring is a bijection
            }
            // substitute y = c z: z^2 + z = d / c^2
            let c_inv = c.inv().expect("nonzero");
            let e = d
                .mul(&c_inv)
                .expect("same field")
                .mul(&c_inv)
                .expect("same field");
            if e.absolute_trace() == 0 {
                2
            } else {
                0
            }
        } else {
            // complete the square: (y + c/2)^2 = d + c^2/4
            let shift = c
                .mul(c)
                .expect("same field")
                .mul(self.quarter.as_ref().unwrap())
                .expect("same field");
            let e = d.add(&shift).expect("same field");
            if e.is_zero() {
                1
            } else if self.squares.as_ref().unwrap()[e.index() as usize] {
                2
            } else {
                0
            }
        }
    }
}

fn count_points(curve: &Curve, n: u32) -> Result<BigInt> {
    let ext = extension_field(curve.base(), n)?;
    match curve.model() {
        CurveModel::ProjectiveLine => Ok(BigInt::from(ext.q()) + 1),
        CurveModel::WeierstrassElliptic { a1, a2, a3, a4, a6 } => {
            let embed = Embedding::find(curve.base(), &ext);
            let (a1, a2, a3, a4, a6) = (
                embed.map(a1),
                embed.map(a2),
                embed.map(a3),
                embed.map(a4),
                embed.map(a6),
            );
            let counter = QuadraticCounter::new(&ext);
            let mut total: u64 = 1; // the point at infinity
            for x in ext.enumerate() {
                let x2 = x.mul(&x).expect("same field");
                let x3 = x2.mul(&x).expect("same field");
                // c = a1 x + a3, d = x^3 + a2 x^2 + a4 x + a6
                let c = a1.mul(&x).expect("same field").add(&a3).expect("same field");
                let d = x3
                    .add(&a2.mul(&x2).expect("same field"))
                    .expect("same field")
                    .add(&a4.mul(&x).expect("same field"))
                    .expect("same field")
                    .add(&a6)
                    .expect("same field");
                total += counter.count(&c, &d);
            }
            Ok(BigInt::from(total))
        }
        CurveModel::Hyperelliptic { f, h } => {
            let embed = Embedding::find(curve.base(), &ext);
            let fe: Vec<_> = f.iter().map(|c| embed.map(c)).collect();
            let he: Vec<_> = h.iter().map(|c| embed.map(c)).collect();
            let counter = QuadraticCounter::new(&ext);
            let mut total: u64 = 0;
            for x in ext.enumerate() {
                let c = poly_eval(&he, &x);
                let d = poly_eval(&fe, &x);
                total += counter.count(&c, &d);
            }
            let deg_f = poly_degree(f).expect("validated nonzero");
            if deg_f % 2 == 1 {
                total += 1;
            } else {
                // z^2 + h_top z = f_top decides the smooth points at infinity
                let g = (deg_f as u32).div_ceil(2) - 1;
                let h_top = he
                    .get((g + 1) as usize)
                    .cloned()
                    .unwrap_or_else(|| ext.zero());
                let f_top = fe[deg_f].clone();
                total += counter.count(&h_top, &f_top);
            }
            Ok(BigInt::from(total))
        }
    }
}

// ---------------------------------------------------------------------------
// Prime-divisor counts
// ---------------------------------------------------------------------------

/// Point counts N_n and prime-divisor counts pi_C(n) for n = 1..=n_max,
/// all exact integers.
///
/// Construction brute-forces only N_1..N_g, builds the L-polynomial, and
/// extends the counts from it; pi_C is recovered by Moebius inversion of
/// N_n = sum over d | n of d * pi_C(d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCountTable {
    q: u64,
    genus: u32,
    point_counts: Vec<BigInt>,
    prime_counts: Vec<BigInt>,
}

impl PrimeCountTable {
    pub fn from_curve(curve: &Curve, n_max: u32) -> Result<PrimeCountTable> {
        let g = curve.genus();
        let mut head = Vec::new();
        for n in 1..=g {
            head.push(curve.count_points(n)?);
        }
        let l = lpoly_from_counts(curve.base().q(), g, &head)?;
        Self::from_lpoly(&l, n_max)
    }

    pub fn from_lpoly(l: &LPolynomial, n_max: u32) -> Result<PrimeCountTable> {
        let point_counts = counts_from_lpoly(l, n_max);
        let prime_counts = invert_point_counts(&point_counts)?;
        Ok(PrimeCountTable {
            q: l.q(),
            genus: l.genus(),
            point_counts,
            prime_counts,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn n_max(&self) -> u32 {
        self.point_counts.len() as u32
    }

    /// N_n for 1 <= n <= n_max.
    pub fn point_count(&self, n: u32) -> &BigInt {
        &self.point_counts[(n - 1) as usize]
    }

    /// pi_C(n) for 1 <= n <= n_max.
    pub fn prime_count(&self, n: u32) -> &BigInt {
        &self.prime_counts[(n - 1) as usize]
    }
}

/// pi_C(n) = (1/n) sum over d | n of mu(n/d) N_d, with integrality and
/// nonnegativity enforced (a violation means the N input was inconsistent,
/// e.g. produced by a singular model).
pub fn invert_point_counts(point_counts: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut prime_counts = Vec::with_capacity(point_counts.len());
    for n in 1..=point_counts.len() {
        let mut acc = BigInt::zero();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            acc += BigInt::from(mobius((n / d) as u64)) * &point_counts[d - 1];
        }
        let (quot, rem) = num_integer::div_rem(acc, BigInt::from(n));
        if !rem.is_zero() || quot.is_negative() {
            return Err(Error::NonIntegralPrimeCount {
                n: n as u32,
                detail: format!("Moebius inversion gave {quot} remainder {rem}"),
            });
        }
        prime_counts.push(quot);
    }
    Ok(prime_counts)
}

// ---------------------------------------------------------------------------
// Curve description grammar
// ---------------------------------------------------------------------------

/// Parses the CLI curve grammar:
///
/// - `p1 q=<prime power>`
/// - `ell p=<p> a=<a> a1=<c> a2=<c> a3=<c> a4=<c> a6=<c>`
/// - `hyp p=<p> a=<a> f=<poly> [h=<poly>]`
///
/// Polynomials are in `x`; coefficients of extension fields are written as
/// polynomials in the generator `w`, parenthesized when they have more than
/// one term (e.g. `f=x^3 + (w+1)*x + w`). Omitted `a` defaults to 1 and
/// omitted Weierstrass coefficients default to 0.
pub fn parse_curve(desc: &str, budget: u64) -> Result<Curve> {
    let mut tokens = desc.split_whitespace();
    let kind = tokens
        .next()
        .ok_or_else(|| Error::Parse("empty curve description".into()))?;
    let mut kv = std::collections::BTreeMap::new();
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{tok}'")))?;
        if kv.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate key '{key}'")));
        }
    }
    let get_u64 = |kv: &std::collections::BTreeMap<String, String>, key: &str| -> Result<u64> {
        kv.get(key)
            .ok_or_else(|| Error::Parse(format!("missing '{key}='")))?
            .parse()
            .map_err(|_| Error::Parse(format!("'{key}' must be a nonnegative integer")))
    };
    match kind {
        "p1" => {
            let q = get_u64(&kv, "q")?;
            let (p, a) = factor_prime_power(q)?;
            let base = FieldSpec::with_budget(p, a, budget)?;
            Curve::new(base, CurveModel::ProjectiveLine)
        }
        "ell" => {
            let p = get_u64(&kv, "p")?;
            let a = kv.get("a").map_or(Ok(1), |v| {
                v.parse::<u32>()
                    .map_err(|_| Error::Parse("'a' must be a positive integer".into()))
            })?;
            let base = FieldSpec::with_budget(p, a, budget)?;
            let coeff = |key: &str| -> Result<FieldElement> {
                match kv.get(key) {
                    None => Ok(base.zero()),
                    Some(v) => parse_element(v, &base),
                }
            };
            Curve::new(
                base.clone(),
                CurveModel::WeierstrassElliptic {
                    a1: coeff("a1")?,
                    a2: coeff("a2")?,
                    a3: coeff("a3")?,
                    a4: coeff("a4")?,
                    a6: coeff("a6")?,
                },
            )
        }
        "hyp" => {
            let p = get_u64(&kv, "p")?;
            let a = kv.get("a").map_or(Ok(1), |v| {
                v.parse::<u32>()
                    .map_err(|_| Error::Parse("'a' must be a positive integer".into()))
            })?;
            let base = FieldSpec::with_budget(p, a, budget)?;
            let f_str = kv
                .get("f")
                .ok_or_else(|| Error::Parse("missing 'f='".into()))?;
            let f = parse_fq_poly(f_str, &base)?;
            let h = match kv.get("h") {
                None => vec![],
                Some(h_str) => parse_fq_poly(h_str, &base)?,
            };
            Curve::new(base, CurveModel::Hyperelliptic { f, h })
        }
        other => Err(Error::Parse(format!(
            "unknown curve kind '{other}' (expected p1, ell or hyp)"
        ))),
    }
}

fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|&d| q % d == 0).expect("q >= 2 has a factor");
    let mut m = q;
    let mut a = 0;
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    if m != 1 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    Ok((p, a))
}

/// A single field element in the curve grammar: an integer or a polynomial
/// in the generator `w` (optionally parenthesized).
pub fn parse_element(input: &str, spec: &FieldSpec) -> Result<FieldElement> {
    let trimmed = input.trim();
    let inner = match (trimmed.strip_prefix('('), trimmed.strip_suffix(')')) {
        (Some(rest), Some(_)) => &rest[..rest.len() - 1],
        _ => trimmed,
    };
    let coeffs = parse_poly(inner, 'w')?;
    spec.from_coeffs(&coeffs)
}

/// A polynomial in `x` with coefficients in F_q, in the curve grammar.
pub fn parse_fq_poly(input: &str, spec: &FieldSpec) -> Result<Vec<FieldElement>> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<FieldElement> = Vec::new();
    for term in split_top_level(&cleaned)? {
        let (coeff, power) = parse_fq_term(term, spec)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, spec.zero());
        }
        coeffs[power] = coeffs[power].add(&coeff)?;
    }
    Ok(coeffs)
}

/// Splits on '+' at parenthesis depth zero.
fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced ')' in '{s}'")))?;
            }
            '+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced '(' in '{s}'")));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_fq_term(term: &str, spec: &FieldSpec) -> Result<(FieldElement, usize)> {
    if term.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    // Find 'x' outside parentheses.
    let mut depth = 0usize;
    let mut x_pos = None;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            'x' if depth == 0 => {
                x_pos = Some(i);
                break;
            }
            _ => {}
        }
    }
    match x_pos {
        None => Ok((parse_element(term, spec)?, 0)),
        Some(pos) => {
            let head = &term[..pos];
            let tail = &term[pos + 1..];
            let coeff = if head.is_empty() {
                spec.one()
            } else {
                let head = head.strip_suffix('*').unwrap_or(head);
                if head.is_empty() {
                    spec.one()
                } else {
                    parse_element(head, spec)?
                }
            };
            let power = if tail.is_empty() {
                1
            } else {
                let exp = tail
                    .strip_prefix('^')
                    .ok_or_else(|| Error::Parse(format!("malformed term '{term}'")))?;
                exp.parse()
                    .map_err(|_| Error::Parse(format!("malformed exponent in '{term}'")))?
            };
            Ok((coeff, power))
        }
    }
}

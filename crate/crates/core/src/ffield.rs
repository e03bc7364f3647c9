//! Exact arithmetic in finite fields F_q with q = p^a.
//!
//! Elements are residue classes in F_p[x]/(m(x)) for a fixed monic
//! irreducible modulus m of degree a. The modulus is chosen
//! deterministically (see [`find_irreducible`]), so every run of the
//! library works in the same model of F_q and point counts are
//! reproducible bit for bit.
//!
//! Everything here is desk scale: p is checked prime by trial division
//! and enumeration-backed operations refuse to touch fields larger than
//! the construction-time budget (default 10^7 elements).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dirichlet::mobius;
use crate::error::{Error, Result};

/// Largest field order the library will enumerate by default. Override
/// with [`FieldSpec::with_budget`] (the CLI wires `ZETAREG_BUDGET` to it).
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug)]
struct SpecInner {
    p: u64,
    a: u32,
    q: u64,
    /// Monic irreducible modulus, coefficients low-to-high, length a + 1.
    modulus: Vec<u64>,
    budget: u64,
}

/// A concrete model of the finite field F_{p^a}.
///
/// Cheap to clone (shared interior). Two specs compare equal iff they
/// describe the same (p, a, modulus) triple; since the modulus choice is
/// deterministic, independently constructed specs for the same field are
/// interchangeable.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    inner: Arc<SpecInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.a == other.inner.a
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds F_{p^a} with the default enumeration budget.
    pub fn new(p: u64, a: u32) -> Result<Self> {
        Self::with_budget(p, a, DEFAULT_ENUMERATION_BUDGET)
    }

    /// Builds F_{p^a}, refusing when p is not prime or p^a exceeds `budget`.
    pub fn with_budget(p: u64, a: u32, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if a < 1 {
            return Err(Error::DegreeOutOfRange { p, a, budget });
        }
        let q = checked_pow_u64(p, a).filter(|&q| q <= budget).ok_or(
            Error::DegreeOutOfRange { p, a, budget },
        )?;
        let modulus = find_irreducible(p, a);
        Ok(FieldSpec {
            inner: Arc::new(SpecInner {
                p,
                a,
                q,
                modulus,
                budget,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn a(&self) -> u32 {
        self.inner.a
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn budget(&self) -> u64 {
        self.inner.budget
    }

    /// Modulus coefficients, low-to-high (length a + 1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            coeffs: vec![0; self.inner.a as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The residue class of x, i.e. the generator the extension is
    /// written in. For prime fields (a = 1, modulus x) this is 0.
    pub fn generator(&self) -> FieldElement {
        let mut coeffs = vec![0; self.inner.a as usize];
        if self.inner.a >= 2 {
            coeffs[1] = 1;
        }
        FieldElement {
            spec: self.clone(),
            coeffs,
        }
    }

    /// Embeds an integer via reduction mod p.
    pub fn from_int(&self, n: u64) -> FieldElement {
        let mut coeffs = vec![0; self.inner.a as usize];
        coeffs[0] = n % self.inner.p;
        FieldElement {
            spec: self.clone(),
            coeffs,
        }
    }

    /// Element from explicit coefficients (low-to-high in the generator);
    /// shorter vectors are zero-padded, entries are reduced mod p.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.inner.a as usize {
            return Err(Error::Parse(format!(
                "element of degree {} does not fit F_{} (extension degree {})",
                coeffs.len() - 1,
                self.inner.q,
                self.inner.a
            )));
        }
        let mut c = vec![0; self.inner.a as usize];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v % self.inner.p;
        }
        Ok(FieldElement {
            spec: self.clone(),
            coeffs: c,
        })
    }

    /// Element with index `k` in enumeration order (base-p digits of k,
    /// least significant digit = constant coefficient).
    pub fn element_at(&self, k: u64) -> FieldElement {
        debug_assert!(k < self.inner.q);
        let mut coeffs = vec![0; self.inner.a as usize];
        let mut k = k;
        for c in coeffs.iter_mut() {
            *c = k % self.inner.p;
            k /= self.inner.p;
        }
        FieldElement {
            spec: self.clone(),
            coeffs,
        }
    }

    /// All q elements in deterministic order: coefficient vectors ordered
    /// by their base-p value, constant coefficient least significant.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(move |k| self.element_at(k))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.a == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(
                f,
                "F_{} = F_{}[w]/({})",
                self.inner.q,
                self.inner.p,
                format_poly(&self.inner.modulus, "w")
            )
        }
    }
}

/// An element of a [`FieldSpec`], stored as its coefficient vector in the
/// generator (degree < a, entries in [0, p)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Position of this element in the enumeration order.
    pub fn index(&self) -> u64 {
        let p = self.spec.p();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn check_same_field(&self, rhs: &Self) -> Result<()> {
        if self.spec == rhs.spec {
            Ok(())
        } else {
            Err(Error::MixedFields {
                left: self.spec.q(),
                right: rhs.spec.q(),
            })
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_field(rhs)?;
        let p = self.spec.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&x, &y)| (x + y) % p)
            .collect();
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.p();
        FieldElement {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_field(rhs)?;
        let p = self.spec.p();
        let a = self.spec.a() as usize;
        // Schoolbook product, then reduction by the monic modulus.
        let mut prod = vec![0u64; 2 * a - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let modulus = self.spec.modulus();
        for d in (a..prod.len()).rev() {
            let lead = prod[d];
            if lead == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in modulus.iter().take(a).enumerate() {
                let idx = d - a + j;
                prod[idx] = (prod[idx] + lead * (p - m)) % p;
            }
        }
        prod.truncate(a);
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs: prod,
        })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in F_p[x].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { q: self.spec.q() });
        }
        let p = self.spec.p();
        // Invariants: old_r = old_s * elem (mod modulus), r = s * elem.
        let mut old_r = trim(self.coeffs.clone());
        let mut r = self.spec.modulus().to_vec();
        let mut old_s = vec![1u64];
        let mut s = vec![];
        while !r.is_empty() {
            let (quot, rem) = poly_divrem(p, &old_r, &r);
            let qs = poly_mul(p, &quot, &s);
            let new_s = poly_sub(p, &old_s, &qs);
            old_r = r;
            r = rem;
            old_s = s;
            s = new_s;
        }
        // old_r is now a nonzero constant gcd; normalize it to 1.
        debug_assert_eq!(old_r.len(), 1);
        let scale = inv_mod(old_r[0], p);
        let mut coeffs: Vec<u64> = old_s.iter().map(|&c| c * scale % p).collect();
        coeffs.resize(self.spec.a() as usize, 0);
        Ok(FieldElement {
            spec: self.spec.clone(),
            coeffs,
        })
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Absolute trace down to the prime field, returned as a residue mod p:
    /// Tr(x) = x + x^p + ... + x^{p^{a-1}}.
    pub fn absolute_trace(&self) -> u64 {
        let mut term = self.clone();
        let mut total = self.clone();
        for _ in 1..self.spec.a() {
            term = term.pow(self.spec.p());
            total = total.add(&term).expect("same field");
        }
        debug_assert!(total.coeffs[1..].iter().all(|&c| c == 0));
        total.coeffs[0]
    }

    /// Whether the element is a square in F_q. Zero counts as a square.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.spec.p() == 2 {
            return true; // Frobenius is surjective in characteristic 2
        }
        self.pow((self.spec.q() - 1) / 2) == self.spec.one()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs, "w"))
    }
}

/// Deterministic trial-division primality test (desk scale, p < 2^20 in
/// ordinary use).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_pow_u64(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Dense polynomials over F_p (coefficients low-to-high, no trailing zeros).
// ---------------------------------------------------------------------------

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mul(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &x) in f.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_sub(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out = vec![0u64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = f.get(i).copied().unwrap_or(0);
        let y = g.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

/// Division with remainder; `g` must be nonzero.
fn poly_divrem(p: u64, f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let g = trim(g.to_vec());
    assert!(!g.is_empty(), "division by the zero polynomial");
    let mut rem = trim(f.to_vec());
    if rem.len() < g.len() {
        return (vec![], rem);
    }
    let lead_inv = inv_mod(*g.last().unwrap(), p);
    let mut quot = vec![0u64; rem.len() - g.len() + 1];
    while rem.len() >= g.len() && !rem.is_empty() {
        let shift = rem.len() - g.len();
        let c = rem.last().unwrap() * lead_inv % p;
        quot[shift] = c;
        for (j, &gj) in g.iter().enumerate() {
            rem[shift + j] = (rem[shift + j] + (p - c * gj % p)) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn inv_mod(x: u64, p: u64) -> u64 {
    // Fermat; p is prime and x != 0 mod p.
    debug_assert!(x % p != 0);
    let mut acc: u64 = 1;
    let mut base = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility of a monic polynomial over F_p by trial division against
/// every monic polynomial of degree at most deg(f)/2. Desk scale on purpose.
pub fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let f = trim(f.to_vec());
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    for d in 1..=(n / 2) {
        let count = checked_pow_u64(p, d as u32).expect("desk-scale degree");
        for k in 0..count {
            let mut g = digits_base_p(p, k, d);
            g.push(1); // monic of degree d
            let (_, rem) = poly_divrem(p, &f, &g);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits_base_p(p: u64, mut k: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for o in out.iter_mut() {
        *o = k % p;
        k /= p;
    }
    out
}

/// The lowest monic irreducible of degree n over F_p, where "lowest" orders
/// candidates x^n + c_{n-1} x^{n-1} + ... + c_0 by the base-p value of
/// (c_0, ..., c_{n-1}). Existence is guaranteed, so this always returns.
pub fn find_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    if n == 1 {
        return vec![0, 1]; // x
    }
    let count = checked_pow_u64(p, n as u32).expect("desk-scale degree");
    for k in 0..count {
        let mut f = digits_base_p(p, k, n);
        f.push(1);
        if poly_is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Number of monic irreducible polynomials of degree n over F_q:
/// (1/n) * sum over d | n of mu(n/d) q^d, as an exact integer.
pub fn irreducible_count(q: u64, n: u32) -> Result<BigInt> {
    // q must be a prime power.
    let p = (2..=q).find(|&d| q % d == 0).ok_or(Error::NonPrime(q))?;
    if !is_prime(p) || {
        let mut m = q;
        while m % p == 0 {
            m /= p;
        }
        m != 1
    } {
        return Err(Error::NonPrime(q));
    }
    assert!(n >= 1, "degree must be at least 1");
    let q = BigInt::from(q);
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        total += BigInt::from(mobius((n / d) as u64)) * q.pow(d);
    }
    let (quot, rem) = num_integer::div_rem(total, BigInt::from(n));
    debug_assert!(rem.is_zero(), "Moebius divisor sum must be divisible by n");
    debug_assert!(quot >= BigInt::zero());
    Ok(quot)
}

// ---------------------------------------------------------------------------
// ASCII polynomial grammar: `c0 + c1*x + c2*x^2 + ...`, `*` optional.
// ---------------------------------------------------------------------------

/// Formats a coefficient vector in the serialization grammar, using `var`
/// as the indeterminate. The zero polynomial prints as "0".
pub fn format_poly(coeffs: &[u64], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, _) => c.to_string(),
            (1, 1) => var.to_string(),
            (1, _) => format!("{c}*{var}"),
            (_, 1) => format!("{var}^{i}"),
            (_, _) => format!("{c}*{var}^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Parses the polynomial grammar over the integers: a `+`-separated list of
/// terms `c`, `c*x^k`, `x^k`, `cx`, ... with nonnegative integer
/// coefficients. Repeated powers accumulate.
pub fn parse_poly(input: &str, var: char) -> Result<Vec<u64>> {
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    for term in cleaned.split('+') {
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in '{input}'")));
        }
        let (coeff, power) = parse_term(term, var)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] += coeff;
    }
    Ok(coeffs)
}

fn parse_term(term: &str, var: char) -> Result<(u64, usize)> {
    let bad = || Error::Parse(format!("malformed term '{term}'"));
    match term.find(var) {
        None => {
            let c: u64 = term.parse().map_err(|_| bad())?;
            Ok((c, 0))
        }
        Some(pos) => {
            let head = &term[..pos];
            let tail = &term[pos + var.len_utf8()..];
            let coeff = if head.is_empty() {
                1
            } else {
                let head = head.strip_suffix('*').unwrap_or(head);
                if head.is_empty() {
                    1
                } else {
                    head.parse().map_err(|_| bad())?
                }
            };
            let power = if tail.is_empty() {
                1
            } else {
                let exp = tail.strip_prefix('^').ok_or_else(bad)?;
                exp.parse().map_err(|_| bad())?
            };
            Ok((coeff, power))
        }
    }
}

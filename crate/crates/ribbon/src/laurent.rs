//! Laurent polynomials over Z, Q and F_p.
//!
//! Every coefficient is stored as a [`BigRational`]; the ring tag decides how
//! coefficients are reduced and divided. Arithmetic between polynomials of
//! different rings panics, while the fallible API ([`LaurentPoly::divides`],
//! [`resultant`]) reports a [`LaurentError`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Int,
    Rat,
    PrimeField(u64),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("coefficient rings differ: {0:?} vs {1:?}")]
    RingMismatch(Ring, Ring),
    #[error("zero polynomial not allowed here")]
    ZeroInput,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Clustering tolerance on unit-circle arguments, in units of pi.
pub const CIRCLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ring: Ring,
    low: i64,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mod_inverse(a: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let e = a.extended_gcd(&p);
    assert!(e.gcd.is_one(), "{a} is not invertible mod {p}");
    e.x.mod_floor(&p)
}

impl Ring {
    fn reduce(self, c: BigRational) -> BigRational {
        match self {
            Ring::Int => {
                debug_assert!(c.is_integer(), "non-integral coefficient {c} over Z");
                c
            }
            Ring::Rat => c,
            Ring::PrimeField(p) => {
                let pb = BigInt::from(p);
                let num = c.numer().mod_floor(&pb);
                let v = if c.denom().is_one() {
                    num
                } else {
                    (num * mod_inverse(c.denom(), p)).mod_floor(&pb)
                };
                BigRational::from_integer(v)
            }
        }
    }

    /// a / b inside the ring, if it exists.
    fn divide(self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            return None;
        }
        match self {
            Ring::Int => {
                let q = a / b;
                q.is_integer().then_some(q)
            }
            Ring::Rat => Some(a / b),
            Ring::PrimeField(p) => {
                let inv = mod_inverse(&b.to_integer(), p);
                Some(self.reduce(a * BigRational::from_integer(inv)))
            }
        }
    }

    fn is_field(self) -> bool {
        !matches!(self, Ring::Int)
    }

    fn check(self, other: Ring) -> Result<(), LaurentError> {
        if self == other {
            Ok(())
        } else {
            Err(LaurentError::RingMismatch(self, other))
        }
    }
}

impl LaurentPoly {
    /// Builds `sum coeffs[i] t^(low+i)`, reducing coefficients into `ring`.
    pub fn new(ring: Ring, low: i64, coeffs: Vec<BigRational>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| ring.reduce(c)).collect();
        let mut p = LaurentPoly { ring, low, coeffs };
        p.trim();
        p
    }

    pub fn from_ints(ring: Ring, low: i64, coeffs: &[i64]) -> Self {
        Self::new(ring, low, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_bigints(ring: Ring, low: i64, coeffs: Vec<BigInt>) -> Self {
        Self::new(ring, low, coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// Integer polynomial from ascending coefficients starting at t^0.
    pub fn int(coeffs: &[i64]) -> Self {
        Self::from_ints(Ring::Int, 0, coeffs)
    }

    pub fn zero(ring: Ring) -> Self {
        LaurentPoly { ring, low: 0, coeffs: Vec::new() }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: Ring, c: BigRational) -> Self {
        Self::new(ring, 0, vec![c])
    }

    pub fn monomial(ring: Ring, c: BigRational, k: i64) -> Self {
        Self::new(ring, k, vec![c])
    }

    pub fn t(ring: Ring) -> Self {
        Self::monomial(ring, BigRational::one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    /// Top exponent; equals `low` for constants and zero.
    pub fn high(&self) -> i64 {
        self.low + (self.coeffs.len() as i64 - 1).max(0)
    }

    /// Width `high - low`, the degree of the ordinary representative.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        if k < self.low || k > self.high() || self.coeffs.is_empty() {
            BigRational::zero()
        } else {
            self.coeffs[(k - self.low) as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn trailing(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Integer coefficients ascending from `low`; `None` unless every coefficient is integral.
    pub fn int_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Reinterprets the coefficients in another ring.
    pub fn to_ring(&self, ring: Ring) -> Result<Self, LaurentError> {
        if ring == Ring::Int && self.coeffs.iter().any(|c| !c.is_integer()) {
            return Err(LaurentError::InvalidArgument("coefficients are not integral".into()));
        }
        if let Ring::PrimeField(p) = ring {
            if self.coeffs.iter().any(|c| (c.denom() % BigInt::from(p)).is_zero()) {
                return Err(LaurentError::InvalidArgument(format!("denominator divisible by {p}")));
            }
        }
        Ok(Self::new(ring, self.low, self.coeffs.clone()))
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { ring: self.ring, low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.ring, self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Ordinary representative `t^(-low) p`.
    pub fn to_ordinary(&self) -> Self {
        self.shift(-self.low)
    }

    /// Canonical representative of the class up to units.
    pub fn normalize_units(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.to_ordinary();
        let lead = p.leading();
        match self.ring {
            Ring::PrimeField(_) => {
                let inv = self.ring.divide(&BigRational::one(), &lead).expect("nonzero lead");
                p.scale(&inv)
            }
            _ if lead.is_negative() => -p,
            _ => p,
        }
    }

    /// `p(t^{-1})`.
    pub fn involution(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly { ring: self.ring, low: -self.high(), coeffs: c }
    }

    /// True when `p` and `q` agree up to a unit of the Laurent ring.
    pub fn associated(&self, other: &Self) -> bool {
        self.ring == other.ring && self.normalize_units() == other.normalize_units()
    }

    /// Is `self` a divisor of `g` in the Laurent ring?
    pub fn divides(&self, g: &Self) -> Result<bool, LaurentError> {
        self.ring.check(g.ring)?;
        if self.is_zero() {
            return Ok(g.is_zero());
        }
        if g.is_zero() {
            return Ok(true);
        }
        Ok(g.div_exact(self)?.is_some())
    }

    /// `h` with `self = divisor * h`, if it exists.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>, LaurentError> {
        self.ring.check(divisor.ring)?;
        if divisor.is_zero() {
            return Err(LaurentError::ZeroInput);
        }
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let field = if self.ring.is_field() { self.ring } else { Ring::Rat };
        let g = self.to_ordinary().to_ring(field)?;
        let f = divisor.to_ordinary().to_ring(field)?;
        let (q, r) = g.div_rem(&f)?;
        if !r.is_zero() {
            return Ok(None);
        }
        let q = q.shift(self.low - divisor.low);
        if self.ring == Ring::Int {
            Ok(q.to_ring(Ring::Int).ok())
        } else {
            Ok(Some(q))
        }
    }

    /// Division with remainder of ordinary polynomials over a field.
    /// Both operands are read through their ordinary representatives.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), LaurentError> {
        self.ring.check(d.ring)?;
        if !self.ring.is_field() {
            return Err(LaurentError::InvalidArgument("div_rem needs a field".into()));
        }
        if d.is_zero() {
            return Err(LaurentError::ZeroInput);
        }
        let ring = self.ring;
        let mut r = self.to_ordinary().coeffs;
        let d = d.to_ordinary().coeffs;
        let dl = d.len();
        if r.len() < dl {
            return Ok((Self::zero(ring), Self::new(ring, 0, r)));
        }
        let lead = d[dl - 1].clone();
        let mut q = vec![BigRational::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + dl - 1];
            if c.is_zero() {
                continue;
            }
            let f = ring.divide(c, &lead).expect("field division");
            for (j, dj) in d.iter().enumerate() {
                r[i + j] = ring.reduce(&r[i + j] - &f * dj);
            }
            q[i] = f;
        }
        r.truncate(dl - 1);
        Ok((Self::new(ring, 0, q), Self::new(ring, 0, r)))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rat(self.low + i as i64))
            .collect();
        Self::new(self.ring, self.low - 1, c)
    }

    /// Gcd of integer coefficients (nonnegative), over `Int` only.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.to_integer()))
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        match self.ring {
            Ring::Int => {
                let c = BigRational::from_integer(self.content());
                self.scale(&(BigRational::one() / c))
            }
            Ring::Rat => {
                let den = self
                    .coeffs
                    .iter()
                    .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                let cleared = self.scale(&BigRational::from_integer(den));
                let ints = LaurentPoly::new(Ring::Int, cleared.low, cleared.coeffs);
                ints.primitive_part().to_ring(Ring::Rat).unwrap()
            }
            Ring::PrimeField(_) => self.normalize_units(),
        }
    }

    /// Gcd up to units, normalized. Over `Int` the content is included.
    pub fn gcd(&self, other: &Self) -> Result<Self, LaurentError> {
        self.ring.check(other.ring)?;
        if self.ring == Ring::Int {
            let c = BigRational::from_integer(self.content().gcd(&other.content()));
            let g = self
                .to_ring(Ring::Rat)?
                .gcd(&other.to_ring(Ring::Rat)?)?
                .primitive_part()
                .to_ring(Ring::Int)?;
            return Ok(g.scale(&c).normalize_units());
        }
        let mut a = self.to_ordinary();
        let mut b = other.to_ordinary();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Field case: low 0 and leading coefficient 1.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.to_ordinary();
        let inv = self.ring.divide(&BigRational::one(), &p.leading()).expect("invertible lead");
        p.scale(&inv)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
        }
        acc * z.powi(self.low as i32)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        let pw = num_traits::pow::Pow::pow(x, self.low.unsigned_abs() as u32);
        let v = if self.low >= 0 { acc * pw } else { acc / pw };
        self.ring.reduce(v)
    }

    /// Parses `c_k*t^k + ...` into the given ring.
    pub fn parse_in(ring: Ring, s: &str) -> Result<Self, LaurentError> {
        let p: LaurentPoly = s.parse()?;
        p.to_ring(ring)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        let c = (low..=high).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        LaurentPoly::new(self.ring, low, c)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::new(self.ring, self.low, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(self.ring);
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LaurentPoly::new(self.ring, self.low + rhs.low, c)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly { (&self).$m(&rhs) }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Ascending integer coefficient vectors of ordinary polynomials.
fn ordinary_ints(p: &LaurentPoly) -> Vec<BigInt> {
    p.to_ordinary().int_coeffs().expect("integral coefficients")
}

fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = a.len() as i64 - b.len() as i64 + 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
        e -= 1;
    }
    let f = num_traits::pow(lb.clone(), e.max(0) as usize);
    r.iter().map(|x| x * &f).collect()
}

fn int_content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Resultant of integer polynomials by the subresultant chain.
fn subresultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (da, db) = (a.len() - 1, b.len() - 1);
    if da == 0 {
        return num_traits::pow(a[0].clone(), db);
    }
    if db == 0 {
        return num_traits::pow(b[0].clone(), da);
    }
    let ca = int_content(a);
    let cb = int_content(b);
    let mut t = num_traits::pow(ca.clone(), db) * num_traits::pow(cb.clone(), da);
    let mut a: Vec<BigInt> = a.iter().map(|x| x / &ca).collect();
    let mut b: Vec<BigInt> = b.iter().map(|x| x / &cb).collect();
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * num_traits::pow(h.clone(), delta);
        b = r.iter().map(|x| x / &div).collect();
        g = a.last().unwrap().clone();
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1);
        }
        if b.len() == 1 {
            break;
        }
    }
    let da = a.len() - 1;
    let lb = b[0].clone();
    let hh = num_traits::pow(lb, da) / num_traits::pow(h, da - 1);
    t *= s * hh;
    t
}

/// Resultant over a field by the Euclidean recursion.
fn field_resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigRational, LaurentError> {
    let ring = f.ring;
    let (mut a, mut b) = (f.to_ordinary(), g.to_ordinary());
    let mut acc = BigRational::one();
    loop {
        let (da, db) = (a.span(), b.span());
        if db == 0 {
            let v = num_traits::pow(b.leading(), da);
            return Ok(ring.reduce(acc * v));
        }
        let (_, r) = a.div_rem(&b)?;
        if r.is_zero() {
            return Ok(BigRational::zero());
        }
        let dr = r.span();
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc = ring.reduce(acc * num_traits::pow(b.leading(), da - dr));
        a = b;
        b = r;
    }
}

/// Resultant of the ordinary representatives of `f` and `g`.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigRational, LaurentError> {
    f.ring.check(g.ring)?;
    if f.is_zero() || g.is_zero() {
        return Err(LaurentError::ZeroInput);
    }
    match f.ring {
        Ring::Int => Ok(BigRational::from_integer(subresultant(
            &ordinary_ints(f),
            &ordinary_ints(g),
        ))),
        Ring::Rat => {
            let clear = |p: &LaurentPoly| {
                let den = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
                let ints: Vec<BigInt> = p
                    .to_ordinary()
                    .coeffs
                    .iter()
                    .map(|c| (c * &den).to_integer())
                    .collect();
                (den, ints)
            };
            let (a, fi) = clear(f);
            let (b, gi) = clear(g);
            let r = subresultant(&fi, &gi);
            let scale = num_traits::pow(a, g.span()) * num_traits::pow(b, f.span());
            Ok(BigRational::new(r, scale))
        }
        Ring::PrimeField(_) => field_resultant(f, g),
    }
}

/// Integer resultant; both inputs must be over `Int`.
pub fn resultant_int(f: &LaurentPoly, g: &LaurentPoly) -> Result<BigInt, LaurentError> {
    Ring::Int.check(f.ring)?;
    Ok(resultant(f, g)?.to_integer())
}

fn mobius(mut n: u64) -> i32 {
    let mut m = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            m = -m;
        }
        d += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

pub fn euler_phi(n: u64) -> u64 {
    let (mut n, mut r, mut d) = (n, n, 2);
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            r -= r / d;
        }
        d += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// `t^n - 1` over Z.
pub fn t_pow_minus_one(n: u64) -> LaurentPoly {
    let mut c = vec![0i64; n as usize + 1];
    c[0] = -1;
    c[n as usize] = 1;
    LaurentPoly::int(&c)
}

/// The n-th cyclotomic polynomial over Z.
pub fn cyclotomic(n: u64) -> Result<LaurentPoly, LaurentError> {
    if n == 0 {
        return Err(LaurentError::InvalidArgument("cyclotomic index 0".into()));
    }
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = LaurentPoly::one(Ring::Int);
    for &d in &divisors {
        if mobius(n / d) == 1 {
            num = &num * &t_pow_minus_one(d);
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = num.div_exact(&t_pow_minus_one(d))?.expect("exact cyclotomic division");
        }
    }
    Ok(num)
}

/// Yun's squarefree decomposition over Q: pairs `(s_k, k)` with `p ≐ c * prod s_k^k`.
pub fn squarefree_decomposition(p: &LaurentPoly) -> Result<Vec<(LaurentPoly, usize)>, LaurentError> {
    if p.is_zero() {
        return Err(LaurentError::ZeroInput);
    }
    let f = p.to_ring(Ring::Rat)?.monic();
    let mut out = Vec::new();
    if f.span() == 0 {
        return Ok(out);
    }
    let df = f.derivative();
    let a0 = f.gcd(&df)?;
    let mut b = f.div_exact(&a0)?.expect("gcd divides");
    let c = df.div_exact(&a0)?.expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while b.span() > 0 {
        let a = b.gcd(&d)?;
        let nb = b.div_exact(&a)?.expect("gcd divides");
        let nc = d.div_exact(&a)?.expect("gcd divides");
        if a.span() > 0 {
            out.push((a, k));
        }
        d = &nc - &nb.derivative();
        b = nb;
        k += 1;
    }
    Ok(out)
}

/// All complex roots of an ordinary polynomial with f64 coefficients (ascending),
/// by Aberth iteration followed by Newton polishing.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let a: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let horner = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let r0 = radius.min(2.0).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(*zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleRoot {
    /// Argument of the root divided by pi, in [0, 2).
    pub x: f64,
    pub multiplicity: usize,
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0);
    d.min(2.0 - d)
}

/// Roots of `p` on the unit circle with their exact multiplicities.
pub fn circle_roots(p: &LaurentPoly) -> Result<Vec<CircleRoot>, LaurentError> {
    let mut out: Vec<CircleRoot> = Vec::new();
    for (s, k) in squarefree_decomposition(p)? {
        let c: Vec<f64> = s.coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
        for z in complex_roots(&c) {
            if (z.norm() - 1.0).abs() > 1e-6 {
                continue;
            }
            let x = (z.arg() / std::f64::consts::PI).rem_euclid(2.0);
            let x = if 2.0 - x < CIRCLE_TOL { 0.0 } else { x };
            match out.iter_mut().find(|r| circular_gap(r.x, x) < CIRCLE_TOL) {
                Some(r) => r.multiplicity = r.multiplicity.max(k),
                None => out.push(CircleRoot { x, multiplicity: k }),
            }
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(out)
}

/// Multiplicity of `e^{i pi x}` as a root of `p`.
pub fn circle_root_multiplicity(p: &LaurentPoly, x: f64) -> Result<usize, LaurentError> {
    Ok(circle_roots(p)?
        .into_iter()
        .find(|r| circular_gap(r.x, x) < CIRCLE_TOL)
        .map_or(0, |r| r.multiplicity))
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let k = self.low + i as i64;
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if var.is_empty() {
                write!(f, "{}", fmt_coeff(&a))?;
            } else if a.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_coeff(&a))?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts sums of terms `c`, `c*t`, `c*t^k`, `t^k`, `-t^(k)` with integer
    /// or `a/b` coefficients. The ring is `Int` unless a fraction appears.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| LaurentError::Parse(format!("{m} in {s:?}"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms: Vec<(i64, BigRational)> = Vec::new();
        let mut i = 0;
        let number = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().unwrap())
        };
        while i < chars.len() {
            let mut sign = BigRational::one();
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
            } else if !terms.is_empty() {
                return Err(err("expected + or -"));
            }
            let mut coef = match number(&mut i) {
                Some(n) => {
                    let mut c = BigRational::from_integer(n);
                    if i < chars.len() && chars[i] == '/' {
                        i += 1;
                        let d = number(&mut i).ok_or_else(|| err("missing denominator"))?;
                        if d.is_zero() {
                            return Err(err("zero denominator"));
                        }
                        c /= BigRational::from_integer(d);
                    }
                    Some(c)
                }
                None => None,
            };
            if coef.is_some() && i < chars.len() && chars[i] == '*' {
                i += 1;
                if i >= chars.len() || chars[i] != 't' {
                    return Err(err("expected t after *"));
                }
            }
            let mut exp = 0i64;
            if i < chars.len() && chars[i] == 't' {
                i += 1;
                exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let paren = i < chars.len() && chars[i] == '(';
                    if paren {
                        i += 1;
                    }
                    let neg = i < chars.len() && chars[i] == '-';
                    if neg {
                        i += 1;
                    }
                    let e = number(&mut i).ok_or_else(|| err("missing exponent"))?;
                    exp = e.to_i64().ok_or_else(|| err("exponent too large"))?;
                    if neg {
                        exp = -exp;
                    }
                    if paren {
                        if i >= chars.len() || chars[i] != ')' {
                            return Err(err("missing )"));
                        }
                        i += 1;
                    }
                }
                coef.get_or_insert_with(BigRational::one);
            }
            let c = coef.ok_or_else(|| err("empty term"))?;
            terms.push((exp, sign * c));
        }
        let integral = terms.iter().all(|(_, c)| c.is_integer());
        let ring = if integral { Ring::Int } else { Ring::Rat };
        Ok(terms.into_iter().fold(LaurentPoly::zero(ring), |acc, (k, c)| {
            &acc + &LaurentPoly::monomial(ring, c, k)
        }))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

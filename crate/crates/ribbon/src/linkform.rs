//! Hermitian linking forms on torsion modules over a discrete valuation ring.
//!
//! All arithmetic happens in the chain ring `R/τ^K` where `K` is the largest
//! generator order. A value of `Q(R)/R` killed by `τ^K` is stored as its
//! numerator over `τ^K`, so the Gram matrix entry `(i, j)` is the numerator of
//! `λ(e_i, e_j)`. The involution is trivial in both concrete rings.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid form: {0}")]
    Invalid(String),
    #[error("the form is singular")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("module too large: {0}")]
    TooLarge(String),
}

/// A DVR with trivial involution, seen through its truncation `R/τ^K`.
pub trait Dvr: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord;

    /// Residue characteristic.
    fn p(&self) -> u64;
    /// The truncation exponent `K`.
    fn precision(&self) -> u32;
    /// The same ring truncated at `τ^k`.
    fn with_precision(&self, k: u32) -> Self;
    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `τ`-adic valuation, `K` for zero.
    fn val(&self, a: &Self::Elem) -> u32;
    fn tau_pow(&self, k: u32) -> Self::Elem;
    /// Inverse of a unit.
    fn unit_inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// `a / τ^k` for `val(a) >= k`, lifted with zero top digits.
    fn div_tau_pow(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    /// Reduction mod `τ^k`.
    fn reduce(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    /// Image in the residue field `F_p`.
    fn residue(&self, a: &Self::Elem) -> u64;
    /// Position of `a mod τ^k` in `0..p^k`.
    fn to_index(&self, a: &Self::Elem, k: u32) -> u64;
    fn from_index(&self, i: u64, k: u32) -> Self::Elem;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.val(a) >= self.precision()
    }
    /// The unit `s` with `s + s̄ = 1`.
    fn half(&self) -> Self::Elem {
        self.unit_inverse(&self.from_i64(2))
    }
    fn random<G: Rng>(&self, rng: &mut G) -> Self::Elem {
        let k = self.precision();
        self.from_index(rng.gen_range(0..self.p().pow(k)), k)
    }
}

fn check_odd_prime(p: u64) -> Result<(), FormError> {
    if p == 2 {
        return Err(FormError::InvalidRing("p = 2 has no unit s with s + s̄ = 1".into()));
    }
    if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(FormError::InvalidRing(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// The p-local integers `Z_(p)`, `τ = p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalIntegers {
    p: u64,
    k: u32,
    modulus: u128,
}

impl LocalIntegers {
    pub fn new(p: u64) -> Result<Self, FormError> {
        check_odd_prime(p)?;
        Ok(LocalIntegers { p, k: 1, modulus: p as u128 })
    }
}

impl Dvr for LocalIntegers {
    type Elem = u128;

    fn p(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.k
    }
    fn with_precision(&self, k: u32) -> Self {
        let modulus = (self.p as u128).checked_pow(k).filter(|m| *m < 1 << 62);
        LocalIntegers { p: self.p, k, modulus: modulus.expect("precision too large") }
    }
    fn zero(&self) -> u128 {
        0
    }
    fn from_i64(&self, n: i64) -> u128 {
        (n as i128).rem_euclid(self.modulus as i128) as u128
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        (a + b) % self.modulus
    }
    fn neg(&self, a: &u128) -> u128 {
        (self.modulus - a % self.modulus) % self.modulus
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        a * b % self.modulus
    }
    fn val(&self, a: &u128) -> u32 {
        let mut a = *a % self.modulus;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a % self.p as u128 == 0 {
            a /= self.p as u128;
            v += 1;
        }
        v
    }
    fn tau_pow(&self, k: u32) -> u128 {
        if k >= self.k {
            0
        } else {
            (self.p as u128).pow(k)
        }
    }
    fn unit_inverse(&self, a: &u128) -> u128 {
        let (mut r0, mut r1) = (self.modulus as i128, (*a % self.modulus) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1, "{a} is not a unit");
        s0.rem_euclid(self.modulus as i128) as u128
    }
    fn div_tau_pow(&self, a: &u128, k: u32) -> u128 {
        debug_assert!(self.val(a) >= k);
        (a % self.modulus) / (self.p as u128).pow(k)
    }
    fn reduce(&self, a: &u128, k: u32) -> u128 {
        a % (self.p as u128).pow(k.min(self.k))
    }
    fn residue(&self, a: &u128) -> u64 {
        (a % self.p as u128) as u64
    }
    fn to_index(&self, a: &u128, k: u32) -> u64 {
        self.reduce(a, k) as u64
    }
    fn from_index(&self, i: u64, _k: u32) -> u128 {
        i as u128 % self.modulus
    }
}

/// `F_p[u]` localized at `(u)`, `τ = u`. Elements are truncated power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPolynomials {
    p: u64,
    k: u32,
}

impl LocalPolynomials {
    pub fn new(p: u64) -> Result<Self, FormError> {
        check_odd_prime(p)?;
        Ok(LocalPolynomials { p, k: 1 })
    }
}

impl Dvr for LocalPolynomials {
    type Elem = Vec<u64>;

    fn p(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.k
    }
    fn with_precision(&self, k: u32) -> Self {
        LocalPolynomials { p: self.p, k }
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k as usize]
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        let mut v = self.zero();
        if let Some(c) = v.first_mut() {
            *c = n.rem_euclid(self.p as i64) as u64;
        }
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let k = self.k as usize;
        let mut out = vec![0u64; k];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in b.iter().enumerate().take(k - i) {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        out
    }
    fn val(&self, a: &Vec<u64>) -> u32 {
        a.iter().position(|&c| c != 0).map_or(self.k, |v| v as u32)
    }
    fn tau_pow(&self, k: u32) -> Vec<u64> {
        let mut v = self.zero();
        if let Some(c) = v.get_mut(k as usize) {
            *c = 1;
        }
        v
    }
    fn unit_inverse(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(a[0] != 0, "{a:?} is not a unit");
        let p = self.p;
        let inv0 = crate::zmodules::fp_inv(a[0], p);
        let k = self.k as usize;
        let mut b = vec![0u64; k];
        b[0] = inv0;
        for n in 1..k {
            let s = (1..=n).fold(0u64, |acc, i| (acc + a.get(i).copied().unwrap_or(0) * b[n - i]) % p);
            b[n] = (p - s) % p * inv0 % p;
        }
        b
    }
    fn div_tau_pow(&self, a: &Vec<u64>, k: u32) -> Vec<u64> {
        debug_assert!(self.val(a) >= k);
        let mut v = self.zero();
        for (i, &c) in a.iter().enumerate().skip(k as usize) {
            v[i - k as usize] = c;
        }
        v
    }
    fn reduce(&self, a: &Vec<u64>, k: u32) -> Vec<u64> {
        a.iter().enumerate().map(|(i, &c)| if i < k as usize { c } else { 0 }).collect()
    }
    fn residue(&self, a: &Vec<u64>) -> u64 {
        a[0]
    }
    fn to_index(&self, a: &Vec<u64>, k: u32) -> u64 {
        a.iter().take(k as usize).rev().fold(0, |acc, &c| acc * self.p + c)
    }
    fn from_index(&self, mut i: u64, k: u32) -> Vec<u64> {
        let mut v = self.zero();
        for c in v.iter_mut().take(k as usize) {
            *c = i % self.p;
            i /= self.p;
        }
        v
    }
}

/// Legendre symbol test for `a ≠ 0` in `F_p`.
fn is_square_mod(a: u64, p: u64) -> bool {
    let mut r = 1u128;
    let (mut b, mut e, m) = (a as u128 % p as u128, (p - 1) / 2, p as u128);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r == 1
}

/// Nonsingular Hermitian linking form on `⊕ R/τ^{k_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionLinkingForm<D: Dvr> {
    ring: D,
    orders: Vec<u32>,
    gram: Vec<Vec<D::Elem>>,
}

/// Element of `A`, as coordinates reduced mod `τ^{k_i}`.
pub type Vector<D> = Vec<<D as Dvr>::Elem>;

impl<D: Dvr> TorsionLinkingForm<D> {
    /// `numerators[i][j]` is `a_ij` in `λ(e_i, e_j) = a_ij / τ^{min(k_i, k_j)}`.
    pub fn new(ring: &D, orders: Vec<u32>, numerators: Vec<Vec<D::Elem>>) -> Result<Self, FormError> {
        let n = orders.len();
        if numerators.len() != n || numerators.iter().any(|r| r.len() != n) {
            return Err(FormError::Invalid("Gram matrix shape does not match the orders".into()));
        }
        if orders.contains(&0) {
            return Err(FormError::Invalid("generator orders must be positive".into()));
        }
        let big_k = orders.iter().copied().max().unwrap_or(1);
        let ring = ring.with_precision(big_k);
        let mut gram = vec![vec![ring.zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let m = orders[i].min(orders[j]);
                let a = ring.reduce(&numerators[i][j], m);
                gram[i][j] = ring.mul(&a, &ring.tau_pow(big_k - m));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(FormError::Invalid(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let form = TorsionLinkingForm { ring, orders, gram };
        form.diagonalize()?;
        Ok(form)
    }

    pub fn from_i64(ring: &D, orders: Vec<u32>, numerators: &[Vec<i64>]) -> Result<Self, FormError> {
        let r = ring.with_precision(orders.iter().copied().max().unwrap_or(1));
        let nums = numerators
            .iter()
            .map(|row| row.iter().map(|&a| r.from_i64(a)).collect())
            .collect();
        Self::new(&r, orders, nums)
    }

    /// `⊕ <u_i / τ^{k_i}>`.
    pub fn diagonal(ring: &D, entries: &[(u32, D::Elem)]) -> Result<Self, FormError> {
        let n = entries.len();
        let big_k = entries.iter().map(|e| e.0).max().unwrap_or(1);
        let r = ring.with_precision(big_k);
        let mut nums = vec![vec![r.zero(); n]; n];
        for (i, (_, u)) in entries.iter().enumerate() {
            nums[i][i] = u.clone();
        }
        Self::new(&r, entries.iter().map(|e| e.0).collect(), nums)
    }

    /// The hyperbolic form `[[0, τ^{-k}], [τ^{-k}, 0]]`.
    pub fn hyperbolic(ring: &D, k: u32) -> Self {
        let r = ring.with_precision(k);
        let nums = vec![vec![r.zero(), r.one()], vec![r.one(), r.zero()]];
        Self::new(&r, vec![k, k], nums).expect("hyperbolic forms are nonsingular")
    }

    pub fn trivial(ring: &D) -> Self {
        TorsionLinkingForm { ring: ring.with_precision(1), orders: Vec::new(), gram: Vec::new() }
    }

    pub fn ring(&self) -> &D {
        &self.ring
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Length of `A`: `ord A ≐ τ^length`.
    pub fn length(&self) -> u32 {
        self.orders.iter().sum()
    }

    /// `log_p |A|`.
    pub fn log_order(&self) -> u32 {
        self.length()
    }

    /// Numerator of `λ(e_i, e_j)` over `τ^K`.
    pub fn gram_numerator(&self, i: usize, j: usize) -> &D::Elem {
        &self.gram[i][j]
    }

    fn big_k(&self) -> u32 {
        self.ring.precision()
    }

    pub fn basis_vector(&self, i: usize) -> Vector<D> {
        (0..self.rank())
            .map(|j| if i == j { self.ring.one() } else { self.ring.zero() })
            .collect()
    }

    pub fn zero_vector(&self) -> Vector<D> {
        vec![self.ring.zero(); self.rank()]
    }

    pub fn normalize(&self, x: &[D::Elem]) -> Vector<D> {
        x.iter().zip(&self.orders).map(|(c, &k)| self.ring.reduce(c, k)).collect()
    }

    pub fn add(&self, x: &[D::Elem], y: &[D::Elem]) -> Vector<D> {
        self.normalize(&x.iter().zip(y).map(|(a, b)| self.ring.add(a, b)).collect::<Vec<_>>())
    }

    pub fn scale(&self, c: &D::Elem, x: &[D::Elem]) -> Vector<D> {
        self.normalize(&x.iter().map(|a| self.ring.mul(c, a)).collect::<Vec<_>>())
    }

    pub fn is_zero_vector(&self, x: &[D::Elem]) -> bool {
        x.iter().zip(&self.orders).all(|(c, &k)| self.ring.val(c) >= k)
    }

    /// Smallest `k` with `τ^k x = 0`.
    pub fn nu(&self, x: &[D::Elem]) -> u32 {
        x.iter()
            .zip(&self.orders)
            .map(|(c, &k)| k.saturating_sub(self.ring.val(c)))
            .max()
            .unwrap_or(0)
    }

    /// Numerator of `λ(x, y)` over `τ^K`.
    pub fn pairing(&self, x: &[D::Elem], y: &[D::Elem]) -> D::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        for (i, xi) in x.iter().enumerate() {
            if r.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc = r.add(&acc, &r.mul(&r.mul(xi, &self.gram[i][j]), yj));
            }
        }
        acc
    }

    /// `λ(x, y)` as `(a, k)` meaning `a / τ^k` with `a` a unit or zero.
    pub fn pairing_value(&self, x: &[D::Elem], y: &[D::Elem]) -> (D::Elem, u32) {
        let num = self.pairing(x, y);
        let v = self.ring.val(&num);
        let k = self.big_k() - v;
        (self.ring.reduce(&self.ring.div_tau_pow(&num, v.min(self.big_k())), k), k)
    }

    /// `ν` of a value given by its numerator over `τ^K`.
    fn value_order(&self, num: &D::Elem) -> u32 {
        self.big_k() - self.ring.val(num)
    }

    /// Order of `x` in the quotient of `span(gens)` by its radical.
    fn nu_pairing(&self, x: &[D::Elem], gens: &[Vector<D>]) -> u32 {
        gens.iter().map(|g| self.value_order(&self.pairing(x, g))).max().unwrap_or(0)
    }

    /// Orthogonal splitting of the nondegenerate quotient of `span(gens)`.
    fn split_generators(&self, gens: Vec<Vector<D>>) -> Result<Vec<(Vector<D>, u32, D::Elem)>, FormError> {
        let r = &self.ring;
        let big_k = self.big_k();
        let mut gens: Vec<Vector<D>> = gens.into_iter().filter(|g| !self.is_zero_vector(g)).collect();
        let mut out = Vec::new();
        loop {
            let nus: Vec<u32> = gens.iter().map(|g| self.nu_pairing(g, &gens)).collect();
            let Some(k) = nus.iter().copied().max().filter(|&k| k > 0) else { break };
            let bi = nus.iter().position(|&v| v == k).unwrap();
            let b = gens[bi].clone();
            let a = if self.value_order(&self.pairing(&b, &b)) == k {
                b
            } else {
                let ci = gens
                    .iter()
                    .position(|c| self.value_order(&self.pairing(&b, c)) == k)
                    .expect("some generator pairs maximally with b");
                let c = gens[ci].clone();
                if self.value_order(&self.pairing(&c, &c)) == k {
                    c
                } else {
                    let w = r.div_tau_pow(&self.pairing(&b, &c), big_k - k);
                    let coef = r.mul(&r.half(), &r.unit_inverse(&w));
                    self.add(&b, &self.scale(&coef, &c))
                }
            };
            let aa = self.pairing(&a, &a);
            debug_assert_eq!(self.value_order(&aa), k);
            let u = r.div_tau_pow(&aa, big_k - k);
            let u_inv = r.unit_inverse(&u);
            gens = gens
                .iter()
                .map(|g| {
                    let m = self.pairing(g, &a);
                    let x = r.mul(&r.div_tau_pow(&m, big_k - k), &u_inv);
                    self.add(g, &self.scale(&r.neg(&x), &a))
                })
                .filter(|g| self.nu_pairing(g, std::slice::from_ref(g)) > 0 || !self.is_zero_vector(g))
                .collect();
            out.push((a, k, r.reduce(&u, k)));
            if gens.iter().all(|g| self.nu_pairing(g, &gens) == 0) {
                break;
            }
        }
        Ok(out)
    }

    /// Orthogonal basis of cyclic summands with `ν λ(e_i, e_i) = ν e_i`.
    pub fn diagonalize(&self) -> Result<Diagonalization<D>, FormError> {
        let gens: Vec<Vector<D>> = (0..self.rank()).map(|i| self.basis_vector(i)).collect();
        let parts = self.split_generators(gens)?;
        let d = Diagonalization {
            orders: parts.iter().map(|p| p.1).collect(),
            units: parts.iter().map(|p| p.2.clone()).collect(),
            basis: parts.into_iter().map(|p| p.0).collect(),
        };
        if d.orders.iter().sum::<u32>() != self.length() || d.basis.iter().zip(&d.orders).any(|(b, &k)| self.nu(b) != k) {
            return Err(FormError::Singular);
        }
        Ok(d)
    }

    /// Graded residue forms `Φ_k` as `F_p` form classes.
    pub fn phi_graded(&self) -> Result<PhiData<FpFormClass>, FormError> {
        let d = self.diagonalize()?;
        Ok(phi_from_diagonal(self.ring.p(), &self.ring, &d.orders, &d.units))
    }

    /// `{x : λ(x, m) = 0 for all m in gens}`.
    pub fn orthogonal_complement(&self, gens: &[Vector<D>]) -> Vec<Vector<D>> {
        let n = self.rank();
        let r = &self.ring;
        if gens.is_empty() {
            return (0..n).map(|i| self.basis_vector(i)).collect();
        }
        // Column g of C is G·m_g; x is orthogonal iff x^T C = 0 in R/τ^K.
        let c: Vec<Vec<D::Elem>> = (0..n)
            .map(|i| gens.iter().map(|m| self.pairing(&self.basis_vector(i), m)).collect())
            .collect();
        let (u, diag) = chain_smith_rows(r, c);
        let big_k = self.big_k();
        let mut out = Vec::new();
        for (i, row) in u.into_iter().enumerate() {
            let d = diag.get(i).map_or(big_k, |&d| d);
            let v = self.scale(&r.tau_pow(big_k - d), &row);
            if !self.is_zero_vector(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Length of the submodule spanned by `gens`.
    pub fn submodule_length(&self, gens: &[Vector<D>]) -> u32 {
        let r = &self.ring;
        let n = self.rank();
        let mut rows: Vec<Vec<D::Elem>> = (0..n)
            .map(|i| {
                let mut v = vec![r.zero(); n];
                v[i] = r.tau_pow(self.orders[i]);
                v
            })
            .collect();
        rows.extend(gens.iter().cloned());
        let (_, diag) = chain_smith_rows(r, rows);
        let quotient: u32 = (0..n).map(|i| diag.get(i).copied().unwrap_or(self.big_k())).sum();
        self.length() - quotient
    }

    pub fn contains(&self, gens: &[Vector<D>], x: &[D::Elem]) -> bool {
        let mut with = gens.to_vec();
        with.push(x.to_vec());
        self.submodule_length(&with) == self.submodule_length(gens)
    }

    pub fn same_submodule(&self, a: &[Vector<D>], b: &[Vector<D>]) -> bool {
        a.iter().all(|x| self.contains(b, x)) && b.iter().all(|x| self.contains(a, x))
    }

    pub fn is_isotropic(&self, gens: &[Vector<D>]) -> bool {
        gens.iter().all(|x| gens.iter().all(|y| self.ring.is_zero(&self.pairing(x, y))))
    }

    /// The induced form on `G^⊥/G`, in diagonal form.
    pub fn quotient_form(&self, g: &[Vector<D>]) -> Result<TorsionLinkingForm<D>, FormError> {
        if !self.is_isotropic(g) {
            return Err(FormError::Precondition("G is not contained in its orthogonal complement".into()));
        }
        let perp = self.orthogonal_complement(g);
        let parts = self.split_generators(perp)?;
        if parts.is_empty() {
            return Ok(TorsionLinkingForm::trivial(&self.ring));
        }
        let entries: Vec<(u32, D::Elem)> = parts.into_iter().map(|(_, k, u)| (k, u)).collect();
        let mut entries = entries;
        entries.sort_by(|a, b| b.0.cmp(&a.0));
        TorsionLinkingForm::diagonal(&self.ring, &entries)
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let big_k = self.big_k().max(other.big_k());
        let r = self.ring.with_precision(big_k);
        let n = self.rank() + other.rank();
        let mut orders = self.orders.clone();
        orders.extend(&other.orders);
        let mut gram = vec![vec![r.zero(); n]; n];
        let lift = |form: &Self, a: &D::Elem| r.mul(&r.from_index(form.ring.to_index(a, form.big_k()), form.big_k()), &r.tau_pow(big_k - form.big_k()));
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                gram[i][j] = lift(self, &self.gram[i][j]);
            }
        }
        let o = self.rank();
        for i in 0..other.rank() {
            for j in 0..other.rank() {
                gram[o + i][o + j] = lift(other, &other.gram[i][j]);
            }
        }
        TorsionLinkingForm { ring: r, orders, gram }
    }

    /// `-λ`.
    pub fn negate(&self) -> Self {
        let gram = self.gram.iter().map(|row| row.iter().map(|a| self.ring.neg(a)).collect()).collect();
        TorsionLinkingForm { ring: self.ring.clone(), orders: self.orders.clone(), gram }
    }

    /// Gram matrix in the basis `f_j = e_j + c e_i`; `c` must be divisible by `τ^{k_i - k_j}`.
    pub fn elementary_change(&self, i: usize, j: usize, c: &D::Elem) -> Result<Self, FormError> {
        if i == j || self.ring.val(c) < self.orders[i].saturating_sub(self.orders[j]) {
            return Err(FormError::Precondition("basis change would not preserve generator orders".into()));
        }
        let mut basis: Vec<Vector<D>> = (0..self.rank()).map(|l| self.basis_vector(l)).collect();
        basis[j] = self.add(&basis[j], &self.scale(c, &basis[i]));
        let gram = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.pairing(x, y)).collect())
            .collect();
        Ok(TorsionLinkingForm { ring: self.ring.clone(), orders: self.orders.clone(), gram })
    }

    /// Every element of `A`; the order must be at most `p^8`.
    pub fn elements(&self) -> Result<Vec<Vector<D>>, FormError> {
        if self.length() > 8 {
            return Err(FormError::TooLarge(format!("|A| = {}^{} exceeds p^8", self.ring.p(), self.length())));
        }
        let sizes: Vec<u64> = self.orders.iter().map(|&k| self.ring.p().pow(k)).collect();
        let total: u64 = sizes.iter().product();
        Ok((0..total)
            .map(|mut idx| {
                sizes
                    .iter()
                    .zip(&self.orders)
                    .map(|(&s, &k)| {
                        let c = self.ring.from_index(idx % s, k);
                        idx /= s;
                        c
                    })
                    .collect()
            })
            .collect())
    }

    fn closure(&self, gens: &[Vector<D>]) -> BTreeSet<Vector<D>> {
        let mut set: BTreeSet<Vector<D>> = BTreeSet::from([self.zero_vector()]);
        let tau = self.ring.tau_pow(1);
        for g in gens {
            let mut frontier = vec![g.clone()];
            let mut cyclic: Vec<Vector<D>> = Vec::new();
            while let Some(x) = frontier.pop() {
                if self.is_zero_vector(&x) {
                    continue;
                }
                for c in 1..self.ring.p() {
                    cyclic.push(self.scale(&self.ring.from_i64(c as i64), &x));
                }
                frontier.push(self.scale(&tau, &x));
            }
            let before: Vec<Vector<D>> = set.iter().cloned().collect();
            let mut grown = set.clone();
            let mut queue = before;
            while let Some(s) = queue.pop() {
                for c in &cyclic {
                    let y = self.add(&s, c);
                    if grown.insert(y.clone()) {
                        queue.push(y);
                    }
                }
            }
            set = grown;
        }
        set
    }

    /// Exhaustive search for `P = P^⊥`; `|A|` at most `p^8`.
    pub fn find_metabolizer_brute(&self) -> Result<Option<Vec<Vector<D>>>, FormError> {
        let elements = self.elements()?;
        if self.length() % 2 == 1 {
            return Ok(None);
        }
        let target = self.length() / 2;
        let isotropic: Vec<Vector<D>> = elements
            .into_iter()
            .filter(|x| !self.is_zero_vector(x) && self.ring.is_zero(&self.pairing(x, x)))
            .collect();
        let mut seen: HashSet<Vec<Vector<D>>> = HashSet::new();
        let mut stack: Vec<Vec<Vector<D>>> = vec![Vec::new()];
        while let Some(gens) = stack.pop() {
            let len = self.submodule_length(&gens);
            if len == target {
                return Ok(Some(gens));
            }
            let span = self.closure(&gens);
            let key: Vec<Vector<D>> = span.iter().cloned().collect();
            if !seen.insert(key) {
                continue;
            }
            for x in &isotropic {
                if span.contains(x) {
                    continue;
                }
                if gens.iter().all(|g| self.ring.is_zero(&self.pairing(x, g))) {
                    let mut next = gens.clone();
                    next.push(x.clone());
                    stack.push(next);
                }
            }
        }
        Ok(None)
    }
}

/// Rows of `U` and the diagonal exponents with `U·M·V = diag(τ^{d_i})` over `R/τ^K`.
fn chain_smith_rows<D: Dvr>(r: &D, mut m: Vec<Vec<D::Elem>>) -> (Vec<Vec<D::Elem>>, Vec<u32>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |x| x.len());
    let mut u: Vec<Vec<D::Elem>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { r.one() } else { r.zero() }).collect())
        .collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let best = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .min_by_key(|&(i, j)| r.val(&m[i][j]));
        let Some((pi, pj)) = best else { break };
        let v = r.val(&m[pi][pj]);
        if v >= r.precision() {
            break;
        }
        m.swap(t, pi);
        u.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let unit = r.div_tau_pow(&m[t][t], v);
        let inv = r.unit_inverse(&unit);
        for x in m[t].iter_mut() {
            *x = r.mul(&inv, x);
        }
        for x in u[t].iter_mut() {
            *x = r.mul(&inv, x);
        }
        for i in 0..rows {
            if i == t || r.is_zero(&m[i][t]) {
                continue;
            }
            let f = r.div_tau_pow(&m[i][t], v);
            for j in 0..cols {
                let d = r.mul(&f, &m[t][j]);
                m[i][j] = r.sub(&m[i][j], &d);
            }
            for j in 0..rows {
                let d = r.mul(&f, &u[t][j]);
                u[i][j] = r.sub(&u[i][j], &d);
            }
        }
        for j in t + 1..cols {
            m[t][j] = r.zero();
        }
        diag.push(v);
    }
    (u, diag)
}

fn phi_from_diagonal<D: Dvr>(p: u64, r: &D, orders: &[u32], units: &[D::Elem]) -> PhiData<FpFormClass> {
    let mut out: PhiData<FpFormClass> = BTreeMap::new();
    for (k, u) in orders.iter().zip(units) {
        let c = FpFormClass { dim: 1, nonsquare_disc: !is_square_mod(r.residue(u), p) };
        let e = out.entry(*k).or_insert_with(FpFormClass::trivial);
        *e = e.combine(&c);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization<D: Dvr> {
    pub orders: Vec<u32>,
    /// `λ(e_i, e_i) = u_i / τ^{k_i}`, `u_i` reduced mod `τ^{k_i}`.
    pub units: Vec<D::Elem>,
    /// New generators as vectors in the original coordinates.
    pub basis: Vec<Vector<D>>,
}

impl<D: Dvr> Diagonalization<D> {
    /// Checks orthogonality, the diagonal values and generator orders.
    pub fn verify(&self, form: &TorsionLinkingForm<D>) -> bool {
        let r = form.ring();
        let big_k = r.precision();
        let n = self.basis.len();
        if self.orders.iter().sum::<u32>() != form.length() {
            return false;
        }
        for i in 0..n {
            if form.nu(&self.basis[i]) != self.orders[i] {
                return false;
            }
            for j in 0..n {
                let v = form.pairing(&self.basis[i], &self.basis[j]);
                let expected = if i == j {
                    r.mul(&self.units[i], &r.tau_pow(big_k - self.orders[i]))
                } else {
                    r.zero()
                };
                if v != expected {
                    return false;
                }
            }
            if r.val(&self.units[i]) != 0 {
                return false;
            }
        }
        true
    }

    /// Residue classes of the units.
    pub fn unit_residues(&self, r: &impl Dvr<Elem = D::Elem>) -> Vec<u64> {
        self.units.iter().map(|u| r.residue(u)).collect()
    }
}

/// Isometry class of a nonsingular form over a residue field, as a
/// cancellative monoid element.
pub trait FormClass: Clone + PartialEq + Debug {
    fn trivial() -> Self;
    fn combine(&self, other: &Self) -> Self;
    /// `T` with `other ⊕ T = self`, if it exists.
    fn difference(&self, other: &Self) -> Option<Self>;
    fn dim(&self) -> usize;

    fn times(&self, n: u64) -> Self {
        (0..n).fold(Self::trivial(), |acc, _| acc.combine(self))
    }
    fn is_trivial(&self) -> bool {
        *self == Self::trivial()
    }
}

/// Forms over `F_p`, `p` odd: classified by dimension and discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpFormClass {
    pub dim: usize,
    pub nonsquare_disc: bool,
}

impl FpFormClass {
    pub fn hyperbolic(p: u64) -> Self {
        FpFormClass { dim: 2, nonsquare_disc: p % 4 == 3 }
    }
}

impl FormClass for FpFormClass {
    fn trivial() -> Self {
        FpFormClass { dim: 0, nonsquare_disc: false }
    }
    fn combine(&self, o: &Self) -> Self {
        FpFormClass { dim: self.dim + o.dim, nonsquare_disc: self.nonsquare_disc ^ o.nonsquare_disc }
    }
    fn difference(&self, o: &Self) -> Option<Self> {
        let dim = self.dim.checked_sub(o.dim)?;
        let nonsquare_disc = self.nonsquare_disc ^ o.nonsquare_disc;
        (dim > 0 || !nonsquare_disc).then_some(FpFormClass { dim, nonsquare_disc })
    }
    fn dim(&self) -> usize {
        self.dim
    }
}

/// Hermitian forms over `C`, classified by `(dim⁺, dim⁻)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SignatureClass {
    pub pos: usize,
    pub neg: usize,
}

impl SignatureClass {
    pub const HYPERBOLIC: SignatureClass = SignatureClass { pos: 1, neg: 1 };
}

impl FormClass for SignatureClass {
    fn trivial() -> Self {
        SignatureClass::default()
    }
    fn combine(&self, o: &Self) -> Self {
        SignatureClass { pos: self.pos + o.pos, neg: self.neg + o.neg }
    }
    fn difference(&self, o: &Self) -> Option<Self> {
        Some(SignatureClass { pos: self.pos.checked_sub(o.pos)?, neg: self.neg.checked_sub(o.neg)? })
    }
    fn dim(&self) -> usize {
        self.pos + self.neg
    }
}

/// `k -> Φ_k`, omitting trivial pieces.
pub type PhiData<M> = BTreeMap<u32, M>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DevissageWitness<M> {
    /// `T_1, T_2, ...`; `T_n` is trivial beyond the list.
    pub t: Vec<M>,
    /// `h_1, h_2, ...`; `h_n = 0` beyond the list.
    pub h: Vec<u64>,
}

fn tail_sum<M: FormClass>(phi: &PhiData<M>, n: u32) -> M {
    phi.iter()
        .filter(|(&k, _)| k >= n && (k - n) % 2 == 0)
        .fold(M::trivial(), |acc, (_, c)| acc.combine(c))
}

/// Searches `T_n`, `h_n` with `T_1 = 0`, `h_n >= h_{n+2}` and
/// `T_n ⊕ h_n H ⊕ ⊕_i Φ_{n+2i}(rhs) = h_{n+1} H ⊕ ⊕_i Φ_{n+2i}(lhs)` for all `n`.
///
/// Since `h_n >= h_{n+2}` and the monoid is cancellative, a constant tail of
/// `h` can be subtracted, so `h_n = 0` for `n` past the largest order.
pub fn geq_m_feasible<M: FormClass>(lhs: &PhiData<M>, rhs: &PhiData<M>, hyperbolic: &M) -> Option<DevissageWitness<M>> {
    let top = lhs.keys().chain(rhs.keys()).copied().max().unwrap_or(0);
    if top == 0 {
        return Some(DevissageWitness { t: Vec::new(), h: Vec::new() });
    }
    let top = top as usize;
    let sl: Vec<M> = (0..=top).map(|n| tail_sum(lhs, n as u32)).collect();
    let sr: Vec<M> = (0..=top).map(|n| tail_sum(rhs, n as u32)).collect();
    // h[n] for n in 1..=top+2, h[top+1] = h[top+2] = 0.
    let mut h = vec![0u64; top + 3];
    let mut t = vec![M::trivial(); top + 1];
    fn search<M: FormClass>(
        n: usize,
        h: &mut Vec<u64>,
        t: &mut Vec<M>,
        sl: &[M],
        sr: &[M],
        hyp: &M,
    ) -> bool {
        if n == 0 {
            return true;
        }
        let rhs_side = hyp.times(h[n + 1]).combine(&sl[n]);
        let slack = rhs_side.dim().saturating_sub(sr[n].dim()) as u64 / 2;
        let lo = h[n + 2];
        for hn in lo..=lo.max(slack) {
            let lhs_side = hyp.times(hn).combine(&sr[n]);
            let Some(tn) = rhs_side.difference(&lhs_side) else { continue };
            if n == 1 && !tn.is_trivial() {
                continue;
            }
            h[n] = hn;
            t[n] = tn;
            if search(n - 1, h, t, sl, sr, hyp) {
                return true;
            }
        }
        false
    }
    search(top, &mut h, &mut t, &sl, &sr, hyperbolic).then(|| DevissageWitness {
        t: t[1..].to_vec(),
        h: h[1..=top].to_vec(),
    })
}

/// Re-checks a witness against the defining equations.
pub fn verify_devissage<M: FormClass>(
    lhs: &PhiData<M>,
    rhs: &PhiData<M>,
    hyperbolic: &M,
    w: &DevissageWitness<M>,
) -> bool {
    let top = lhs.keys().chain(rhs.keys()).copied().max().unwrap_or(0) as usize;
    let h = |n: usize| w.h.get(n - 1).copied().unwrap_or(0);
    let t = |n: usize| w.t.get(n - 1).cloned().unwrap_or_else(M::trivial);
    if !t(1).is_trivial() {
        return false;
    }
    (1..=top + 2).all(|n| {
        let l = t(n).combine(&hyperbolic.times(h(n))).combine(&tail_sum(rhs, n as u32));
        let r = hyperbolic.times(h(n + 1)).combine(&tail_sum(lhs, n as u32));
        h(n) >= h(n + 2) && l == r
    })
}

/// Random nonsingular form: a diagonal or hyperbolic core of total length
/// at most `max_length`, scrambled by elementary basis changes.
pub fn random_form<D: Dvr, G: Rng>(ring: &D, max_length: u32, rng: &mut G) -> TorsionLinkingForm<D> {
    let mut pieces: Vec<TorsionLinkingForm<D>> = Vec::new();
    let mut left = rng.gen_range(1..=max_length);
    while left > 0 {
        let k = rng.gen_range(1..=left.min(3));
        if 2 * k <= left && rng.gen_bool(0.3) {
            pieces.push(TorsionLinkingForm::hyperbolic(ring, k));
            left -= 2 * k;
        } else {
            let r = ring.with_precision(k);
            let u = loop {
                let u = r.random(rng);
                if r.val(&u) == 0 {
                    break u;
                }
            };
            pieces.push(TorsionLinkingForm::diagonal(ring, &[(k, u)]).unwrap());
            left -= k;
        }
    }
    let mut form = pieces
        .iter()
        .fold(TorsionLinkingForm::trivial(ring), |acc, f| acc.orthogonal_sum(f));
    let n = form.rank();
    if n >= 2 {
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let need = form.orders[i].saturating_sub(form.orders[j]);
            let c = form.ring.mul(&form.ring.random(rng), &form.ring.tau_pow(need));
            form = form.elementary_change(i, j, &c).unwrap();
        }
    }
    form
}

/// Random submodule with `G ⊆ G^⊥`: elements `τ^{⌈ν x / 2⌉} x`.
pub fn random_isotropic<D: Dvr, G: Rng>(form: &TorsionLinkingForm<D>, count: usize, rng: &mut G) -> Vec<Vector<D>> {
    (0..count)
        .map(|_| {
            let x: Vector<D> = form.normalize(&(0..form.rank()).map(|_| form.ring.random(rng)).collect::<Vec<_>>());
            let c = form.nu(&x).div_ceil(2);
            form.scale(&form.ring.tau_pow(c), &x)
        })
        .collect()
}

/// Random submodule generated by `count` random elements.
pub fn random_submodule<D: Dvr, G: Rng>(form: &TorsionLinkingForm<D>, count: usize, rng: &mut G) -> Vec<Vector<D>> {
    (0..count)
        .map(|_| form.normalize(&(0..form.rank()).map(|_| form.ring.random(rng)).collect::<Vec<_>>()))
        .collect()
}

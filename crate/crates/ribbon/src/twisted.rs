//! Twisted Alexander polynomials and the metabelian representations `α^{r,p}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{self, euler_phi, LaurentPoly, Ring};
use crate::wirtinger::{self, FreeWord, Presentation};
use crate::zmodules::{self, factor_u64, smith_over_rational_polynomials, FpMatrix, IntMatrix};

/// Default bound on `|Γ|`, the dimension of the regular representation.
pub const DEFAULT_GROUP_CAP: usize = 2000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TwistedError {
    #[error("group order {required} exceeds the cap {cap}")]
    CapExceeded { required: u128, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Integral representation of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    dim: usize,
    images: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
}

impl Representation {
    pub fn new(images: Vec<IntMatrix>) -> Result<Self, TwistedError> {
        let dim = images.first().map_or(1, |m| m.rows());
        let mut inverses = Vec::with_capacity(images.len());
        for (g, m) in images.iter().enumerate() {
            if !m.is_square() || m.rows() != dim {
                return Err(TwistedError::InvalidArgument(format!("image of x{} is not {dim}x{dim}", g + 1)));
            }
            inverses.push(m.inverse_unimodular().ok_or_else(|| {
                TwistedError::InvalidArgument(format!("image of x{} is not invertible over Z", g + 1))
            })?);
        }
        Ok(Representation { dim, images, inverses })
    }

    pub fn trivial(generators: usize) -> Self {
        Representation::new(vec![IntMatrix::identity(1); generators]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[IntMatrix] {
        &self.images
    }

    pub fn eval(&self, w: &FreeWord) -> IntMatrix {
        w.letters().iter().fold(IntMatrix::identity(self.dim), |acc, &(g, e)| {
            &acc * if e > 0 { &self.images[g] } else { &self.inverses[g] }
        })
    }

    /// `x -> C ρ(x) C^{-1}` for a unimodular `C`.
    pub fn conjugate(&self, c: &IntMatrix) -> Result<Self, TwistedError> {
        let ci = c
            .inverse_unimodular()
            .ok_or_else(|| TwistedError::InvalidArgument("conjugator is not unimodular".into()))?;
        Representation::new(self.images.iter().map(|m| &(c * m) * &ci).collect())
    }
}

/// True iff every relator maps to the identity.
pub fn validate_representation(pres: &Presentation, rho: &Representation) -> bool {
    rho.images.len() == pres.generators
        && pres
            .relators
            .iter()
            .all(|r| rho.eval(r) == IntMatrix::identity(rho.dim))
}

/// Sparse Laurent-polynomial block accumulator: exponent -> integer matrix.
type Block = BTreeMap<i64, IntMatrix>;

fn block_add(b: &mut Block, deg: i64, m: &IntMatrix, sign: i64) {
    let entry = b.entry(deg).or_insert_with(|| IntMatrix::zeros(m.rows(), m.cols()));
    *entry = if sign > 0 { entry.add(m) } else { entry.sub(m) };
}

fn block_entries(b: &Block, n: usize) -> Vec<Vec<LaurentPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = LaurentPoly::zero(Ring::Int);
                    for (&d, m) in b {
                        if !m[(i, j)].is_zero() {
                            p = &p + &LaurentPoly::from_bigints(Ring::Int, d, vec![m[(i, j)].clone()]);
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Fox Jacobian evaluated at `α ⊗ φ`, as a block matrix
/// (`dim * relators` rows, `dim * generators` columns).
pub fn fox_block_matrix(pres: &Presentation, rho: &Representation) -> Vec<Vec<LaurentPoly>> {
    let n = rho.dim;
    let mut out = vec![vec![LaurentPoly::zero(Ring::Int); n * pres.generators]; n * pres.relators.len()];
    for (ri, r) in pres.relators.iter().enumerate() {
        let mut blocks: Vec<Block> = vec![Block::new(); pres.generators];
        let mut prefix = IntMatrix::identity(n);
        let mut deg = 0i64;
        for &(g, e) in r.letters() {
            if e > 0 {
                block_add(&mut blocks[g], deg, &prefix, 1);
                prefix = &prefix * &rho.images[g];
                deg += pres.phi[g];
            } else {
                prefix = &prefix * &rho.inverses[g];
                deg -= pres.phi[g];
                block_add(&mut blocks[g], deg, &prefix, -1);
            }
        }
        for (g, b) in blocks.iter().enumerate() {
            for (i, row) in block_entries(b, n).into_iter().enumerate() {
                for (j, e) in row.into_iter().enumerate() {
                    out[ri * n + i][g * n + j] = e;
                }
            }
        }
    }
    out
}

/// `t^{φ(x_g)} ρ(x_g) - I`.
fn generator_block(pres: &Presentation, rho: &Representation, g: usize) -> Vec<Vec<LaurentPoly>> {
    let n = rho.dim;
    let mut b = Block::new();
    block_add(&mut b, pres.phi[g], &rho.images[g], 1);
    block_add(&mut b, 0, &IntMatrix::identity(n), -1);
    block_entries(&b, n)
}

/// Order of the zeroth twisted homology: gcd of the maximal minors of
/// the block row `[t^{φ(x_i)} ρ(x_i) - I]_i`.
pub fn zeroth_order(pres: &Presentation, rho: &Representation) -> LaurentPoly {
    let n = rho.dim;
    let mut row = vec![Vec::with_capacity(n * pres.generators); n];
    for g in 0..pres.generators {
        for (i, r) in generator_block(pres, rho, g).into_iter().enumerate() {
            row[i].extend(r);
        }
    }
    let factors = smith_over_rational_polynomials(&row);
    let prod = factors
        .iter()
        .fold(LaurentPoly::one(Ring::Rat), |acc, f| &acc * f);
    prod.primitive_part().to_ring(Ring::Int).expect("primitive part is integral")
}

/// `Δ^ρ` computed with generator `j` (0-based) removed from the Fox Jacobian.
pub fn twisted_alexander(
    pres: &Presentation,
    rho: &Representation,
    j: usize,
) -> Result<LaurentPoly, TwistedError> {
    if pres.deficiency() != 1 {
        return Err(TwistedError::InvalidArgument(format!("deficiency {} != 1", pres.deficiency())));
    }
    if j >= pres.generators {
        return Err(TwistedError::InvalidArgument(format!("column {j} out of range")));
    }
    if rho.images.len() != pres.generators {
        return Err(TwistedError::InvalidArgument("representation/presentation size mismatch".into()));
    }
    let n = rho.dim;
    let full = fox_block_matrix(pres, rho);
    let minor: Vec<Vec<LaurentPoly>> = full
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(c, _)| c / n != j)
                .map(|(_, e)| e)
                .collect()
        })
        .collect();
    let top = zmodules::poly_det(&minor, Ring::Int);
    let bottom = zmodules::poly_det(&generator_block(pres, rho, j), Ring::Int);
    if bottom.is_zero() {
        return Err(TwistedError::InvalidArgument(format!("det(ρ(x{}) t - I) vanishes", j + 1)));
    }
    let d0 = zeroth_order(pres, rho);
    (&top * &d0)
        .div_exact(&bottom)
        .expect("same ring")
        .map(|p| p.normalize_units())
        .ok_or_else(|| TwistedError::Internal("Wada quotient times Δ_0 is not a polynomial".into()))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factor_u64(p).len() == 1 && factor_u64(p)[0].1 == 1
}

/// `Γ = (H_K ⊗ F_p[t^{±1}]/(t^r - 1)) ⋊ Z/r` with the images of the Wirtinger generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetabelianRep {
    pub r: u64,
    pub p: u64,
    pub dim: usize,
    /// Action of the meridian on the module, `T^r = I`.
    pub t_action: FpMatrix,
    /// Module part of each generator's image; the first is zero.
    pub vectors: Vec<Vec<u64>>,
    t_powers: Vec<FpMatrix>,
    module_size: usize,
}

/// Element `(a, k)` of Γ: module vector and exponent class.
pub type GammaElement = (Vec<u64>, u64);

impl MetabelianRep {
    pub fn order(&self) -> usize {
        self.r as usize * self.module_size
    }

    /// Lexicographic position of `(a, k)`: exponent class first, then the vector.
    pub fn index(&self, (a, k): &GammaElement) -> usize {
        let v = a.iter().fold(0usize, |acc, &x| acc * self.p as usize + x as usize);
        *k as usize * self.module_size + v
    }

    pub fn element(&self, idx: usize) -> GammaElement {
        let (k, mut v) = (idx / self.module_size, idx % self.module_size);
        let mut a = vec![0u64; self.dim];
        for x in a.iter_mut().rev() {
            *x = (v % self.p as usize) as u64;
            v /= self.p as usize;
        }
        (a, k as u64)
    }

    /// `(a, k)(b, l) = (a + T^k b, k + l)`.
    pub fn mul(&self, (a, k): &GammaElement, (b, l): &GammaElement) -> GammaElement {
        let tb = self.t_powers[*k as usize].apply(b);
        let s = a.iter().zip(&tb).map(|(x, y)| (x + y) % self.p).collect();
        (s, (k + l) % self.r)
    }

    pub fn inverse(&self, (a, k): &GammaElement) -> GammaElement {
        let kinv = (self.r - k % self.r) % self.r;
        let ta = self.t_powers[kinv as usize].apply(a);
        (ta.into_iter().map(|x| (self.p - x) % self.p).collect(), kinv)
    }

    pub fn identity(&self) -> GammaElement {
        (vec![0; self.dim], 0)
    }

    pub fn generator_image(&self, g: usize) -> GammaElement {
        (self.vectors[g].clone(), 1 % self.r)
    }

    pub fn eval(&self, w: &FreeWord) -> GammaElement {
        w.letters().iter().fold(self.identity(), |acc, &(g, e)| {
            let x = self.generator_image(g);
            let x = if e > 0 { x } else { self.inverse(&x) };
            self.mul(&acc, &x)
        })
    }

    /// Left multiplication by `g` as a permutation of element indices.
    pub fn left_permutation(&self, g: &GammaElement) -> Vec<usize> {
        (0..self.order()).map(|h| self.index(&self.mul(g, &self.element(h)))).collect()
    }

    fn permutation_matrix(perm: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(perm.len(), perm.len());
        for (h, &gh) in perm.iter().enumerate() {
            m[(gh, h)] = BigInt::one();
        }
        m
    }

    /// The left-regular representation pulled back to the knot group.
    pub fn representation(&self) -> Representation {
        let images = (0..self.vectors.len())
            .map(|g| Self::permutation_matrix(&self.left_permutation(&self.generator_image(g))))
            .collect();
        Representation::new(images).expect("permutation matrices are unimodular")
    }
}

/// Metabelian quotient of a Wirtinger presentation.
pub fn metabelian_rep(pres: &Presentation, r: u64, p: u64, cap: usize) -> Result<MetabelianRep, TwistedError> {
    if r == 0 {
        return Err(TwistedError::InvalidArgument("r must be positive".into()));
    }
    if !is_prime(p) {
        return Err(TwistedError::InvalidArgument(format!("{p} is not prime")));
    }
    if pres.phi.iter().any(|&d| d != 1) {
        return Err(TwistedError::InvalidArgument("expected a Wirtinger presentation".into()));
    }
    let m = wirtinger::alexander_module_presentation(pres, 0)
        .map_err(|e| TwistedError::InvalidArgument(e.to_string()))?;
    let q = zmodules::cyclic_quotient_fp(&m, pres.generators - 1, r, p)
        .map_err(|e| TwistedError::InvalidArgument(e.to_string()))?;
    let required = r as u128 * (p as u128).pow(q.dim as u32);
    if q.dim > 64 || required > cap as u128 {
        return Err(TwistedError::CapExceeded { required, cap });
    }
    let mut vectors = vec![vec![0u64; q.dim]];
    vectors.extend(q.generators.iter().cloned());
    let t_powers = (0..r).map(|k| q.t_action.pow(k)).collect();
    let rep = MetabelianRep {
        r,
        p,
        dim: q.dim,
        t_action: q.t_action,
        vectors,
        t_powers,
        module_size: (p as usize).pow(q.dim as u32),
    };
    for (i, rel) in pres.relators.iter().enumerate() {
        if rep.eval(rel) != rep.identity() {
            return Err(TwistedError::Internal(format!("relator {} is not trivial in Γ", i + 1)));
        }
    }
    Ok(rep)
}

/// `Δ^{r,p}`; never zero.
pub fn delta_rp(pres: &Presentation, r: u64, p: u64, cap: usize) -> Result<LaurentPoly, TwistedError> {
    let rep = metabelian_rep(pres, r, p, cap)?;
    let d = twisted_alexander(pres, &rep.representation(), 0)?;
    if d.is_zero() {
        return Err(TwistedError::Internal(format!("Δ^({r},{p}) vanished")));
    }
    Ok(d)
}

/// `|res(Φ_m, Φ_n)|` for `m < n`.
pub fn cyclotomic_resultant(m: u64, n: u64) -> Result<BigInt, TwistedError> {
    if m == 0 || m >= n {
        return Err(TwistedError::InvalidArgument(format!("need 0 < m < n, got ({m}, {n})")));
    }
    if n % m != 0 {
        return Ok(BigInt::one());
    }
    match factor_u64(n / m).as_slice() {
        [(q, _)] => Ok(BigInt::from(*q).pow(euler_phi(m) as u32)),
        _ => Ok(BigInt::one()),
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `|res(t^L - 1, Φ_n)|`.
fn res_t_pow_minus_one_cyclotomic(l: u64, n: u64) -> BigInt {
    divisors(l).into_iter().fold(BigInt::one(), |acc, d| {
        acc * match d.cmp(&n) {
            std::cmp::Ordering::Less => cyclotomic_resultant(d, n).unwrap(),
            std::cmp::Ordering::Greater => cyclotomic_resultant(n, d).unwrap(),
            std::cmp::Ordering::Equal => BigInt::zero(),
        }
    })
}

/// Cycle lengths of a permutation, sorted.
pub fn cycle_type(perm: &[usize]) -> Vec<u64> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

/// `det(tI - P) = ∏ (t^L - 1)` over the cycles of `P`.
pub fn permutation_charpoly(perm: &[usize]) -> LaurentPoly {
    cycle_type(perm)
        .into_iter()
        .fold(LaurentPoly::one(Ring::Int), |acc, l| &acc * &laurent::t_pow_minus_one(l))
}

/// `res(Δ_J, f_A) · Δ_K^α` for a satellite with pattern axis class `A`.
pub fn satellite_twisted_alexander(
    dk_alpha: &LaurentPoly,
    dj: &LaurentPoly,
    charpoly: &LaurentPoly,
    n: usize,
) -> Result<LaurentPoly, TwistedError> {
    if dj.is_zero() {
        return Err(TwistedError::InvalidArgument("Δ_J = 0".into()));
    }
    let f = charpoly.to_ordinary();
    if f.high() != n as i64 || !f.leading().is_one() || f.low() != 0 {
        return Err(TwistedError::InvalidArgument(format!("{charpoly} is not monic of degree {n}")));
    }
    let res = laurent::resultant_int(dj, &f).map_err(|e| TwistedError::InvalidArgument(e.to_string()))?;
    let c = LaurentPoly::from_bigints(Ring::Int, 0, vec![res]);
    Ok((&c * dk_alpha).normalize_units())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatelliteMember {
    pub q: u64,
    /// Exponent with `res(f_A, Φ_pq)^2 = q^{m_q}`.
    pub m_q: u32,
    pub delta: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatelliteFamily {
    pub r: u64,
    pub p: u64,
    pub a_class: Vec<u64>,
    /// Cycle lengths of `α^{r,p}(A)`.
    pub cycle_type: Vec<u64>,
    pub base: LaurentPoly,
    pub members: Vec<SatelliteMember>,
}

/// `Δ^{r,p}` of the satellites `K_q` for each prime `q ≠ p`.
pub fn satellite_family(
    pres: &Presentation,
    r: u64,
    p: u64,
    a_class: &[u64],
    qs: &[u64],
    cap: usize,
) -> Result<SatelliteFamily, TwistedError> {
    let rep = metabelian_rep(pres, r, p, cap)?;
    if a_class.len() != rep.dim || a_class.iter().any(|&x| x >= p) {
        return Err(TwistedError::InvalidArgument(format!("A must be a vector in F_{p}^{}", rep.dim)));
    }
    if a_class.iter().all(|&x| x == 0) {
        return Err(TwistedError::InvalidArgument("A must be nonzero".into()));
    }
    for &q in qs {
        if !is_prime(q) || q == p {
            return Err(TwistedError::InvalidArgument(format!("q = {q} must be a prime different from p")));
        }
    }
    let base = twisted_alexander(pres, &rep.representation(), 0)?;
    let cycles = cycle_type(&rep.left_permutation(&(a_class.to_vec(), 0)));
    let members = qs
        .iter()
        .map(|&q| {
            let res = cycles
                .iter()
                .fold(BigInt::one(), |acc, &l| acc * res_t_pow_minus_one_cyclotomic(l, p * q));
            let sq = &res * &res;
            let m_q = pure_power(&sq, q).filter(|&m| m > 0).ok_or_else(|| {
                TwistedError::Internal(format!("res(f_A, Φ_{})^2 = {sq} is not a positive power of {q}", p * q))
            })?;
            let c = LaurentPoly::from_bigints(Ring::Int, 0, vec![sq]);
            Ok(SatelliteMember { q, m_q, delta: (&c * &base).normalize_units() })
        })
        .collect::<Result<_, TwistedError>>()?;
    Ok(SatelliteFamily { r, p, a_class: a_class.to_vec(), cycle_type: cycles, base, members })
}

/// `(q^{m_q} Δ^{r,p}, m_q)` for one prime `q`.
pub fn satellite_family_delta(
    pres: &Presentation,
    r: u64,
    p: u64,
    a_class: &[u64],
    q: u64,
    cap: usize,
) -> Result<(LaurentPoly, u32), TwistedError> {
    let fam = satellite_family(pres, r, p, a_class, &[q], cap)?;
    let m = fam.members.into_iter().next().unwrap();
    Ok((m.delta, m.m_q))
}

/// `m` with `n = q^m`, if any.
fn pure_power(n: &BigInt, q: u64) -> Option<u32> {
    let q = BigInt::from(q);
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut m = 0;
    while n.is_multiple_of(&q) {
        n /= &q;
        m += 1;
    }
    n.is_one().then_some(m)
}

/// The last standard basis vector of the module, a default choice of `A`.
pub fn first_nonzero_class(rep: &MetabelianRep) -> Option<Vec<u64>> {
    (rep.dim > 0).then(|| {
        let mut v = vec![0; rep.dim];
        v[rep.dim - 1] = 1;
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::cyclotomic;
    use crate::wirtinger::{wirtinger_from_pd, PDCode};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TREFOIL: &str = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]";
    const FIGURE8: &str = "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]";
    const SIX_ONE: &str = "[[1,7,2,6],[3,10,4,11],[5,3,6,2],[7,1,8,12],[9,4,10,5],[11,9,12,8]]";

    fn pres(s: &str) -> Presentation {
        wirtinger_from_pd(&s.parse::<PDCode>().unwrap())
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    /// Independent order computation: product of the nonzero invariant
    /// factors of the full Fox block matrix over Q[t].
    fn order_oracle(pres: &Presentation, rho: &Representation) -> LaurentPoly {
        let m = fox_block_matrix(pres, rho);
        smith_over_rational_polynomials(&m)
            .into_iter()
            .filter(|f| !f.is_zero())
            .fold(LaurentPoly::one(Ring::Rat), |a, f| &a * &f)
            .primitive_part()
            .to_ring(Ring::Int)
            .unwrap()
    }

    fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for _ in 0..3 * n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i == j {
                continue;
            }
            let c: i64 = rng.gen_range(-2..=2);
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = BigInt::from(c);
            m = &m * &e;
        }
        m
    }

    #[test]
    fn trivial_rep_gives_classical_polynomial() {
        let pr = pres(TREFOIL);
        let rho = Representation::trivial(pr.generators);
        assert!(validate_representation(&pr, &rho));
        assert_eq!(twisted_alexander(&pr, &rho, 0).unwrap(), p("t^2 - t + 1"));
        let pr = pres(FIGURE8);
        assert_eq!(
            twisted_alexander(&pr, &Representation::trivial(pr.generators), 2).unwrap(),
            p("t^2 - 3*t + 1")
        );
        let u = pres("PD[]");
        assert_eq!(twisted_alexander(&u, &Representation::trivial(1), 0).unwrap(), p("1"));
    }

    #[test]
    fn perturbed_rep_fails_validation() {
        let pr = pres(TREFOIL);
        let rep = metabelian_rep(&pr, 2, 3, DEFAULT_GROUP_CAP).unwrap();
        let rho = rep.representation();
        assert!(validate_representation(&pr, &rho));
        let mut images = rho.images().to_vec();
        images[1] = images[0].clone();
        images[2] = IntMatrix::identity(6);
        assert!(!validate_representation(&pr, &Representation::new(images).unwrap()));
    }

    #[test]
    fn metabelian_examples() {
        let rep = metabelian_rep(&pres(TREFOIL), 2, 3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((rep.dim, rep.order()), (1, 6));
        let (a, b) = (rep.generator_image(0), rep.generator_image(1));
        assert_ne!(rep.mul(&a, &b), rep.mul(&b, &a), "Γ is nonabelian, hence S_3");
        let rep = metabelian_rep(&pres(FIGURE8), 2, 5, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((rep.dim, rep.order()), (1, 10));
        let rep = metabelian_rep(&pres(SIX_ONE), 1, 3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((rep.dim, rep.order()), (0, 1));
        assert!(matches!(
            metabelian_rep(&pres(TREFOIL), 2, 3, 5),
            Err(TwistedError::CapExceeded { required: 6, cap: 5 })
        ));
        assert!(metabelian_rep(&pres(TREFOIL), 2, 4, DEFAULT_GROUP_CAP).is_err());
    }

    #[test]
    fn group_law_is_associative() {
        let rep = metabelian_rep(&pres(SIX_ONE), 2, 3, DEFAULT_GROUP_CAP).unwrap();
        let n = rep.order();
        for x in 0..n {
            let ex = rep.element(x);
            assert_eq!(rep.index(&ex), x);
            assert_eq!(rep.mul(&ex, &rep.inverse(&ex)), rep.identity());
            for y in 0..n {
                for z in 0..n {
                    let (ey, ez) = (rep.element(y), rep.element(z));
                    assert_eq!(rep.mul(&rep.mul(&ex, &ey), &ez), rep.mul(&ex, &rep.mul(&ey, &ez)));
                }
            }
        }
    }

    #[test]
    fn trefoil_delta_23_matches_oracle() {
        let pr = pres(TREFOIL);
        let d = delta_rp(&pr, 2, 3, DEFAULT_GROUP_CAP).unwrap();
        let rho = metabelian_rep(&pr, 2, 3, DEFAULT_GROUP_CAP).unwrap().representation();
        assert!(!d.is_zero());
        assert!(d.primitive_part().associated(&order_oracle(&pr, &rho)), "{d}");
        assert!(p("t^2 - t + 1").divides(&d).unwrap());
    }

    #[test]
    fn column_independence_and_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (s, r, q) in [(TREFOIL, 2, 3), (FIGURE8, 2, 5)] {
            let pr = pres(s);
            let rho = metabelian_rep(&pr, r, q, DEFAULT_GROUP_CAP).unwrap().representation();
            let d0 = twisted_alexander(&pr, &rho, 0).unwrap();
            for j in 1..pr.generators {
                assert!(twisted_alexander(&pr, &rho, j).unwrap().associated(&d0));
            }
            let c = random_unimodular(rho.dim(), &mut rng);
            let conj = rho.conjugate(&c).unwrap();
            assert!(validate_representation(&pr, &conj));
            assert!(twisted_alexander(&pr, &conj, 0).unwrap().associated(&d0));
        }
    }

    #[test]
    fn multiplicative_under_connected_sum() {
        let a: PDCode = TREFOIL.parse().unwrap();
        let b: PDCode = FIGURE8.parse().unwrap();
        let s = wirtinger_from_pd(&a.connected_sum(&b));
        let d = twisted_alexander(&s, &Representation::trivial(s.generators), 0).unwrap();
        assert_eq!(d, p("t^2 - t + 1") * p("t^2 - 3*t + 1"));
    }

    #[test]
    fn cyclotomic_resultant_examples() {
        assert_eq!(cyclotomic_resultant(2, 6).unwrap(), BigInt::from(3));
        assert_eq!(cyclotomic_resultant(2, 3).unwrap(), BigInt::from(1));
        assert_eq!(cyclotomic_resultant(1, 2).unwrap(), BigInt::from(2));
        assert_eq!(cyclotomic_resultant(3, 15).unwrap(), BigInt::from(25));
        assert!(cyclotomic_resultant(6, 6).is_err());
    }

    #[test]
    fn cyclotomic_resultant_agrees_with_generic() {
        let phis: Vec<_> = (1..=20).map(|n| cyclotomic(n).unwrap()).collect();
        for n in 2..=20u64 {
            for m in 1..n {
                let g = laurent::resultant_int(&phis[m as usize - 1], &phis[n as usize - 1]).unwrap();
                assert_eq!(g.abs(), cyclotomic_resultant(m, n).unwrap(), "({m}, {n})");
            }
        }
    }

    #[test]
    fn satellite_formula_examples() {
        let dk = p("t^2 - t + 1");
        let f = p("t^2 - 1");
        assert_eq!(satellite_twisted_alexander(&dk, &p("1"), &f, 2).unwrap(), dk);
        let triv = p("t - 1").pow(2);
        let dj = p("2*t^2 - 5*t + 2");
        assert_eq!(satellite_twisted_alexander(&dk, &dj, &triv, 2).unwrap(), dk);
        let phi6sq = p("t^2 - t + 1").pow(2);
        assert_eq!(satellite_twisted_alexander(&dk, &phi6sq, &f, 2).unwrap(), p("9*t^2 - 9*t + 9"));
        assert!(satellite_twisted_alexander(&dk, &p("0"), &f, 2).is_err());
        assert!(satellite_twisted_alexander(&dk, &dj, &p("2*t^2 - 1"), 2).is_err());
    }

    #[test]
    fn satellite_formula_is_product_of_evaluations() {
        // Δ_J = 6_1 at the roots ±1 of t^2 - 1: Δ_J(1) Δ_J(-1) = 1 * 9.
        let dj = p("2*t^2 - 5*t + 2");
        let out = satellite_twisted_alexander(&p("1"), &dj, &p("t^2 - 1"), 2).unwrap();
        assert_eq!(out, p("9"));
    }

    #[test]
    fn satellite_family_trefoil() {
        let pr = pres(TREFOIL);
        let fam = satellite_family(&pr, 2, 3, &[1], &[5, 7, 11], DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(fam.cycle_type, vec![3, 3]);
        let f = permutation_charpoly(&[1, 2, 0, 4, 5, 3]);
        let generic = laurent::resultant_int(&f, &cyclotomic(15).unwrap()).unwrap();
        assert_eq!(generic.abs(), BigInt::from(5).pow(4));
        for m in &fam.members {
            assert_eq!(m.m_q, 8);
            let scale = LaurentPoly::from_bigints(Ring::Int, 0, vec![BigInt::from(m.q).pow(8)]);
            assert_eq!(m.delta, (&scale * &fam.base).normalize_units());
        }
        for a in &fam.members {
            for b in &fam.members {
                if a.q != b.q {
                    assert!(!a.delta.divides(&b.delta).unwrap());
                }
            }
        }
        assert!(satellite_family_delta(&pr, 2, 3, &[0], 5, DEFAULT_GROUP_CAP).is_err());
        assert!(satellite_family_delta(&pr, 2, 3, &[1], 3, DEFAULT_GROUP_CAP).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn conjugation_invariance_random(seed in any::<u64>()) {
            let pr = pres(TREFOIL);
            let rho = metabelian_rep(&pr, 2, 3, DEFAULT_GROUP_CAP).unwrap().representation();
            let d0 = twisted_alexander(&pr, &rho, 0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_unimodular(rho.dim(), &mut rng);
            prop_assert!(twisted_alexander(&pr, &rho.conjugate(&c).unwrap(), 1).unwrap().associated(&d0));
        }
    }
}

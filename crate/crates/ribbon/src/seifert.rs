//! Classical invariants from a Seifert matrix.
//!
//! Sign convention: the Levine–Tristram form is `(1-ω)V + (1-ω̄)V^T` at
//! `ω = e^{iπx}`, so the right-handed trefoil `[[-1,1],[0,-1]]` has `σ_1 = -2`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{self, circle_root_multiplicity, circle_roots, LaurentPoly, Ring};
use crate::zmodules::{self, cokernel, AbelianGroup, CyclicQuotient, IntMatrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SeifertError {
    #[error("not a Seifert matrix: {0}")]
    Invalid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SeifertMatrix(IntMatrix);

impl SeifertMatrix {
    /// Checks squareness, even size and `det(V - V^T) = 1`.
    pub fn new(v: IntMatrix) -> Result<Self, SeifertError> {
        if !v.is_square() {
            return Err(SeifertError::Invalid(format!("{}x{} is not square", v.rows(), v.cols())));
        }
        if v.rows() % 2 == 1 {
            return Err(SeifertError::Invalid(format!("odd size {}", v.rows())));
        }
        let d = v.sub(&v.transpose()).determinant();
        if !d.is_one() {
            return Err(SeifertError::Invalid(format!("det(V - V^T) = {d}, expected 1")));
        }
        Ok(SeifertMatrix(v))
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, SeifertError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(SeifertError::Invalid("rows of unequal length".into()));
        }
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn unknot() -> Self {
        SeifertMatrix(IntMatrix::zeros(0, 0))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    /// Seifert matrix of the concordance inverse `-K` (reversed mirror).
    pub fn concordance_inverse(&self) -> Self {
        SeifertMatrix(self.0.transpose().neg())
    }

    pub fn connected_sum(&self, other: &Self) -> Self {
        SeifertMatrix(self.0.block_diag(&other.0))
    }

    /// Rows of `tV - V^T` as Laurent polynomials over `ring`.
    pub fn presentation(&self, ring: Ring) -> Vec<Vec<LaurentPoly>> {
        let v = &self.0;
        (0..self.size())
            .map(|i| {
                (0..self.size())
                    .map(|j| {
                        LaurentPoly::from_bigints(ring, 0, vec![-&v[(j, i)], v[(i, j)].clone()])
                    })
                    .collect()
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for SeifertMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SeifertMatrix::new(IntMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

pub fn alexander_poly(v: &SeifertMatrix) -> LaurentPoly {
    zmodules::poly_det(&v.presentation(Ring::Int), Ring::Int).normalize_units()
}

/// `|det(V + V^T)|`.
pub fn determinant(v: &SeifertMatrix) -> BigInt {
    v.0.add(&v.0.transpose()).determinant().abs()
}

/// `H_1` of the double branched cover, presented by `-V - V^T`.
pub fn double_cover_homology(v: &SeifertMatrix) -> AbelianGroup {
    cokernel(&v.0.neg().sub(&v.0.transpose()))
}

/// Order of `H_1` of the r-fold branched cover; 0 when it is infinite.
pub fn branched_cover_order(v: &SeifertMatrix, r: u64) -> Result<BigInt, SeifertError> {
    if r < 2 {
        return Err(SeifertError::InvalidArgument(format!("r = {r}, expected r >= 2")));
    }
    let delta = alexander_poly(v);
    let g = LaurentPoly::int(&vec![1; r as usize]);
    Ok(laurent::resultant_int(&delta, &g).expect("nonzero inputs").abs())
}

/// `H_1(Σ_r; F_p)` as an F_p-space with the deck transformation.
pub fn branched_cover_fp(v: &SeifertMatrix, r: u64, p: u64) -> Result<CyclicQuotient, SeifertError> {
    zmodules::cyclic_quotient_fp(&v.presentation(Ring::Int), v.size(), r, p)
        .map_err(|e| SeifertError::InvalidArgument(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureNullity {
    pub sigma: i64,
    pub eta: usize,
    /// Computed by exact Hermitian elimination.
    pub exact: bool,
    /// False when some eigenvalue fell within ten times the zero threshold.
    pub reliable: bool,
}

/// Points of the circle where `2cos(πx)` is rational, as `(num, den)` in lowest terms.
pub fn special_point(x: f64) -> Option<(i64, i64)> {
    const SPECIAL: [(i64, i64); 7] = [(1, 3), (1, 2), (2, 3), (1, 1), (4, 3), (3, 2), (5, 3)];
    SPECIAL
        .into_iter()
        .find(|&(n, d)| (x - n as f64 / d as f64).abs() < 1e-12)
}

/// Element `a + b√(-D)` of an imaginary quadratic field.
#[derive(Clone, Debug, PartialEq)]
struct Quad {
    a: BigRational,
    b: BigRational,
}

impl Quad {
    fn real(a: BigRational) -> Self {
        Quad { a, b: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Quad { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    fn sub(&self, o: &Self) -> Self {
        Quad { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    fn mul(&self, o: &Self, d: &BigRational) -> Self {
        Quad {
            a: &self.a * &o.a - d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: -&self.b }
    }
    fn div_real(&self, r: &BigRational) -> Self {
        Quad { a: &self.a / r, b: &self.b / r }
    }
}

/// Exact signature and nullity at a point with rational `2cos(πx)`.
pub fn signature_nullity_exact(v: &SeifertMatrix, num: i64, den: i64) -> Option<SignatureNullity> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let one = BigRational::one();
    let zero = BigRational::zero();
    let (d, omega) = match (num, den) {
        (1, 2) => (one.clone(), Quad { a: zero.clone(), b: one.clone() }),
        (3, 2) => (one.clone(), Quad { a: zero.clone(), b: -one.clone() }),
        (1, 1) => (one.clone(), Quad::real(-one.clone())),
        (1, 3) => (BigRational::from_integer(3.into()), Quad { a: half.clone(), b: half.clone() }),
        (5, 3) => (BigRational::from_integer(3.into()), Quad { a: half.clone(), b: -half.clone() }),
        (2, 3) => (BigRational::from_integer(3.into()), Quad { a: -half.clone(), b: half.clone() }),
        (4, 3) => (BigRational::from_integer(3.into()), Quad { a: -half.clone(), b: -half.clone() }),
        _ => return None,
    };
    let n = v.size();
    let m = &v.0;
    let c = Quad::real(one.clone()).sub(&omega);
    let cbar = c.conj();
    let entry = |x: &BigInt| Quad::real(BigRational::from_integer(x.clone()));
    let mut h: Vec<Vec<Quad>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| c.mul(&entry(&m[(i, j)]), &d).add(&cbar.mul(&entry(&m[(j, i)]), &d)))
                .collect()
        })
        .collect();
    let (mut pos, mut neg) = (0usize, 0usize);
    let size = n;
    let mut k = 0;
    while k < size {
        if h[k][k].is_zero() {
            if let Some(i) = (k + 1..size).find(|&i| !h[i][i].is_zero()) {
                h.swap(k, i);
                for row in h.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some((i, j)) = (k..size)
                .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
                .find(|&(i, j)| !h[i][j].is_zero())
            {
                // row_i += h_ij row_j, col_i += conj(h_ij) col_j gives h_ii = 2|h_ij|^2.
                let f = h[i][j].clone();
                for col in 0..size {
                    let v = f.mul(&h[j][col], &d);
                    h[i][col] = h[i][col].add(&v);
                }
                let fc = f.conj();
                for row in h.iter_mut().take(size) {
                    let v = fc.mul(&row[j], &d);
                    row[i] = row[i].add(&v);
                }
                h.swap(k, i);
                for row in h.iter_mut() {
                    row.swap(k, i);
                }
            } else {
                break;
            }
        }
        let p = h[k][k].a.clone();
        debug_assert!(h[k][k].b.is_zero());
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..size {
            if h[i][k].is_zero() {
                continue;
            }
            let f = h[i][k].div_real(&p);
            let fc = f.conj();
            for col in k..size {
                let v = f.mul(&h[k][col], &d);
                h[i][col] = h[i][col].sub(&v);
            }
            for row in h.iter_mut().take(size) {
                let v = fc.mul(&row[k], &d);
                row[i] = row[i].sub(&v);
            }
        }
        k += 1;
    }
    let eta = n - pos - neg;
    Some(SignatureNullity { sigma: pos as i64 - neg as i64, eta, exact: true, reliable: true })
}

/// Levine–Tristram signature and nullity by Hermitian eigenvalues.
pub fn signature_nullity_numeric(v: &SeifertMatrix, x: f64) -> SignatureNullity {
    let n = v.size();
    if n == 0 {
        return SignatureNullity { sigma: 0, eta: 0, exact: true, reliable: true };
    }
    let w = Complex64::from_polar(1.0, std::f64::consts::PI * x);
    let one = Complex64::new(1.0, 0.0);
    let m = &v.0;
    let f = |i: usize, j: usize| -> f64 { num_traits::ToPrimitive::to_f64(&m[(i, j)]).unwrap() };
    let h = DMatrix::from_fn(n, n, |i, j| (one - w) * f(i, j) + (one - w.conj()) * f(j, i));
    let scale = h.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let thr = 1e-8 * scale.max(1e-300);
    let eig = h.symmetric_eigenvalues();
    let mut sn = SignatureNullity { sigma: 0, eta: 0, exact: false, reliable: true };
    for &l in eig.iter() {
        if l.abs() <= thr {
            sn.eta += 1;
        } else {
            if l.abs() <= 10.0 * thr {
                sn.reliable = false;
            }
            sn.sigma += if l > 0.0 { 1 } else { -1 };
        }
    }
    sn
}

/// Exact where `2cos(πx)` is rational, numeric elsewhere.
pub fn signature_nullity(v: &SeifertMatrix, x: f64) -> Result<SignatureNullity, SeifertError> {
    if !(x > 0.0 && x < 2.0) {
        return Err(SeifertError::InvalidArgument(format!("x = {x} outside (0, 2)")));
    }
    if let Some((n, d)) = special_point(x) {
        return Ok(signature_nullity_exact(v, n, d).expect("special point"));
    }
    Ok(signature_nullity_numeric(v, x))
}

/// Invariant factors of `tV - V^T` over Q[t^{±1}].
pub fn rational_invariant_factors(v: &SeifertMatrix) -> Vec<LaurentPoly> {
    zmodules::smith_over_rational_polynomials(&v.presentation(Ring::Rat))
}

/// Exact nullity at `e^{iπx}`: the number of invariant factors vanishing there.
pub fn exact_nullity(factors: &[LaurentPoly], x: f64) -> usize {
    factors
        .iter()
        .filter(|e| !e.is_zero() && circle_root_multiplicity(e, x).unwrap_or(0) > 0)
        .count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpPoint {
    pub x: f64,
    /// `x` as a fraction when `2cos(πx)` is rational.
    pub exact_x: Option<(i64, i64)>,
    pub deg: usize,
    pub eta: usize,
    pub sigma: i64,
    /// `σ_x` minus the average of the neighbouring arc signatures.
    pub d: i64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub sigma: i64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureProfile {
    pub jumps: Vec<JumpPoint>,
    /// One more arc than jumps; they partition (0, 2).
    pub arcs: Vec<Arc>,
    /// False when a numeric evaluation was too close to the zero threshold
    /// or disagreed with the exact nullity.
    pub reliable: bool,
}

impl SignatureProfile {
    pub fn jump_at(&self, x: f64) -> Option<&JumpPoint> {
        self.jumps.iter().find(|j| (j.x - x).abs() < laurent::CIRCLE_TOL)
    }

    pub fn arc_containing(&self, x: f64) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.start < x && x < a.end)
    }

    /// `(deg, η, σ)` at any point of (0, 2).
    pub fn at(&self, x: f64) -> (usize, usize, i64) {
        match self.jump_at(x) {
            Some(j) => (j.deg, j.eta, j.sigma),
            None => (0, 0, self.arc_containing(x).map_or(0, |a| a.sigma)),
        }
    }
}

pub fn signature_profile(v: &SeifertMatrix) -> SignatureProfile {
    let delta = alexander_poly(v);
    let factors = rational_invariant_factors(v);
    let roots: Vec<_> = circle_roots(&delta)
        .expect("Alexander polynomial is nonzero")
        .into_iter()
        .filter(|r| r.x > 0.0 && r.x < 2.0)
        .collect();
    let mut reliable = true;
    let mut bounds = vec![0.0];
    bounds.extend(roots.iter().map(|r| r.x));
    bounds.push(2.0);
    let arcs: Vec<Arc> = bounds
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let sn = signature_nullity(v, mid).expect("midpoint inside (0, 2)");
            reliable &= sn.reliable && sn.eta == 0;
            Arc { start: w[0], end: w[1], sigma: sn.sigma, exact: sn.exact }
        })
        .collect();
    let jumps = roots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let eta = exact_nullity(&factors, r.x);
            let sn = signature_nullity(v, r.x).expect("root inside (0, 2)");
            reliable &= sn.reliable && sn.eta == eta;
            let avg2 = arcs[i].sigma + arcs[i + 1].sigma;
            JumpPoint {
                x: special_point(r.x).map_or(r.x, |(n, d)| n as f64 / d as f64),
                exact_x: special_point(r.x),
                deg: r.multiplicity,
                eta,
                sigma: sn.sigma,
                d: sn.sigma - avg2 / 2,
                exact: sn.exact,
            }
        })
        .collect();
    SignatureProfile { jumps, arcs, reliable }
}

/// Squarefree with no rational root; a complete irreducibility test up to degree 3.
fn passes_irreducibility_screen(z: &LaurentPoly) -> bool {
    let z = z.to_ordinary();
    match z.span() {
        0 => return false,
        1 => return true,
        _ => {}
    }
    if z.gcd(&z.derivative()).map_or(true, |g| g.span() > 0) {
        return false;
    }
    let ints = z.primitive_part().to_ring(Ring::Int).unwrap().int_coeffs().unwrap();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs();
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                out.push(d.clone());
                out.push(&n / &d);
            }
            d += 1;
        }
        out
    };
    let zr = z.to_ring(Ring::Rat).unwrap();
    for p in divisors(&ints[0]) {
        for q in divisors(ints.last().unwrap()) {
            for s in [1, -1] {
                let r = BigRational::new(&p * s, q.clone());
                if zr.eval(&r).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Multiplicities `n_i` of `ζ^i` among the elementary divisors of `tV - V^T` over Q.
pub fn zeta_elementary_divisors(
    v: &SeifertMatrix,
    zeta: &LaurentPoly,
) -> Result<BTreeMap<usize, usize>, SeifertError> {
    let z = zeta
        .to_ring(Ring::Rat)
        .map_err(|e| SeifertError::InvalidArgument(e.to_string()))?;
    if !passes_irreducibility_screen(&z) {
        return Err(SeifertError::InvalidArgument(format!("{zeta} is reducible")));
    }
    if !z.associated(&z.involution()) {
        return Err(SeifertError::InvalidArgument(format!("{zeta} is not symmetric")));
    }
    let mut out = BTreeMap::new();
    for e in rational_invariant_factors(v) {
        let mut e = e;
        let mut i = 0;
        while let Some(q) = e.div_exact(&z).unwrap() {
            e = q;
            i += 1;
        }
        if i > 0 {
            *out.entry(i).or_insert(0) += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::cyclotomic;

    fn trefoil() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]).unwrap()
    }

    fn figure8() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[vec![1, 1], vec![0, -1]]).unwrap()
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_non_seifert() {
        assert!(SeifertMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).is_err());
        assert!(SeifertMatrix::from_rows(&[vec![1]]).is_err());
        assert!(SeifertMatrix::from_rows(&[vec![1, 0]]).is_err());
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_poly(&trefoil()), p("t^2 - t + 1"));
        assert_eq!(alexander_poly(&figure8()), p("t^2 - 3*t + 1"));
        assert_eq!(alexander_poly(&SeifertMatrix::unknot()), p("1"));
        let sum = trefoil().connected_sum(&figure8());
        assert_eq!(alexander_poly(&sum), p("t^2 - t + 1") * p("t^2 - 3*t + 1"));
        assert_eq!(alexander_poly(&trefoil().concordance_inverse()), p("t^2 - t + 1"));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&trefoil()), BigInt::from(3));
        assert_eq!(determinant(&figure8()), BigInt::from(5));
        assert_eq!(determinant(&SeifertMatrix::unknot()), BigInt::from(1));
    }

    #[test]
    fn double_cover_examples() {
        assert_eq!(double_cover_homology(&trefoil()), AbelianGroup::from_cyclic_orders(&[3]));
        let sum = trefoil().connected_sum(&trefoil());
        assert_eq!(double_cover_homology(&sum), AbelianGroup::from_cyclic_orders(&[3, 3]));
    }

    #[test]
    fn branched_cover_order_examples() {
        assert_eq!(branched_cover_order(&trefoil(), 2).unwrap(), BigInt::from(3));
        assert_eq!(branched_cover_order(&trefoil(), 3).unwrap(), BigInt::from(4));
        assert_eq!(branched_cover_order(&trefoil(), 6).unwrap(), BigInt::from(0));
        for r in 2..6 {
            assert_eq!(branched_cover_order(&SeifertMatrix::unknot(), r).unwrap(), BigInt::from(1));
        }
        assert!(branched_cover_order(&trefoil(), 1).is_err());
    }

    #[test]
    fn branched_cover_fp_examples() {
        let q = branched_cover_fp(&trefoil(), 2, 3).unwrap();
        assert_eq!(q.dim, 1);
        assert!(q.t_action.pow(2).is_identity());
        assert_eq!(q.t_action[(0, 0)], 2);
        assert_eq!(branched_cover_fp(&trefoil(), 2, 5).unwrap().dim, 0);
        assert_eq!(branched_cover_fp(&figure8(), 1, 5).unwrap().dim, 0);
        let q = branched_cover_fp(&trefoil(), 3, 2).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.t_action.pow(3).is_identity());
    }

    #[test]
    fn signature_examples() {
        let s = signature_nullity(&trefoil(), 1.0).unwrap();
        assert_eq!((s.sigma, s.eta), (-2, 0));
        let s = signature_nullity_numeric(&trefoil(), 1.0);
        assert_eq!((s.sigma, s.eta), (-2, 0));
        let s = signature_nullity(&trefoil(), 1.0 / 3.0).unwrap();
        assert_eq!((s.sigma, s.eta), (-1, 1));
        let s = signature_nullity_numeric(&trefoil(), 1.0 / 3.0);
        assert_eq!((s.sigma, s.eta), (-1, 1));
        let s = signature_nullity(&figure8(), 0.77).unwrap();
        assert_eq!((s.sigma, s.eta), (0, 0));
        assert!(signature_nullity(&trefoil(), 2.0).is_err());
    }

    #[test]
    fn exact_and_numeric_agree() {
        let knots = [trefoil(), figure8(), trefoil().connected_sum(&trefoil())];
        for v in &knots {
            for (n, d) in [(1, 3), (1, 2), (2, 3), (1, 1), (4, 3), (3, 2), (5, 3)] {
                let e = signature_nullity_exact(v, n, d).unwrap();
                let x = signature_nullity_numeric(v, n as f64 / d as f64);
                assert_eq!((e.sigma, e.eta), (x.sigma, x.eta), "{v:?} at {n}/{d}");
            }
        }
    }

    #[test]
    fn exact_elimination_with_zero_diagonal() {
        // Hyperbolic-looking form: V - V^T unimodular but V + V^T has zero diagonal.
        let v = SeifertMatrix::from_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let e = signature_nullity_exact(&v, 1, 1).unwrap();
        assert_eq!((e.sigma, e.eta), (0, 0));
        let x = signature_nullity_numeric(&v, 1.0);
        assert_eq!((x.sigma, x.eta), (0, 0));
    }

    #[test]
    fn profile_examples() {
        let prof = signature_profile(&trefoil());
        assert!(prof.reliable);
        assert_eq!(prof.jumps.len(), 2);
        let j = &prof.jumps[0];
        assert_eq!((j.exact_x, j.deg, j.eta, j.sigma, j.d), (Some((1, 3)), 1, 1, -1, 0));
        assert_eq!(prof.arcs.iter().map(|a| a.sigma).collect::<Vec<_>>(), vec![0, -2, 0]);
        let u = signature_profile(&SeifertMatrix::unknot());
        assert!(u.jumps.is_empty());
        assert_eq!(u.arcs.len(), 1);
        assert_eq!(u.arcs[0].sigma, 0);
        assert_eq!(prof.at(1.0), (0, 0, -2));
    }

    #[test]
    fn zeta_examples() {
        let z = cyclotomic(6).unwrap();
        assert_eq!(zeta_elementary_divisors(&trefoil(), &z).unwrap(), BTreeMap::from([(1, 1)]));
        assert!(zeta_elementary_divisors(&figure8(), &z).unwrap().is_empty());
        let sum = trefoil().connected_sum(&trefoil());
        assert_eq!(zeta_elementary_divisors(&sum, &z).unwrap(), BTreeMap::from([(1, 2)]));
        assert!(zeta_elementary_divisors(&trefoil(), &p("t^2 - 1")).is_err());
        assert!(zeta_elementary_divisors(&trefoil(), &p("t^2 + t + 3")).is_err());
    }
}

//! Linear algebra over Z, F_p and Q[t]: Smith normal forms, finite abelian
//! groups, Littlewood–Richardson positivity and cyclic-cover quotients.
//!
//! Presentation matrices follow one convention throughout: rows are relations,
//! columns are generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Ring};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("group is infinite")]
    Infinite,
    #[error("size bound exceeded: {0}")]
    TooLarge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = BigInt::from(x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.map(|x| -x))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn block_diag(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m[(self.rows + i, self.cols + j)] = o[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            self[(i, dst)] += v;
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * prev
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self[(i, j)].clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let piv = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(piv, k);
            let inv = BigRational::one() / &a[k][k];
            for x in a[k].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != k && !a[i][k].is_zero() {
                    let f = a[i][k].clone();
                    for j in 0..2 * n {
                        let v = &f * &a[k][j];
                        a[i][j] -= v;
                    }
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &a[i][n + j];
                if !v.is_integer() {
                    return None;
                }
                out[(i, j)] = v.to_integer();
            }
        }
        Some(out)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m[(i, j)] += a * &o[(k, j)];
                }
            }
        }
        m
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64().expect("entry fits i64")).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        Ok(IntMatrix::from_rows(&rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    /// Diagonal of length min(rows, cols), nonnegative, each dividing the next
    /// (zeros last).
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

/// `left * m * right = diag`, with `left`, `right` unimodular.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(a, u, v);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut dirty = false;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = -(&a[(i, t)] / &a[(t, t)]);
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    dirty |= !a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = -(&a[(t, j)] / &a[(t, t)]);
                    a.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    dirty |= !a[(t, j)].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..c {
                a[(t, j)] = -&a[(t, j)];
            }
            for j in 0..r {
                u[(t, j)] = -&u[(t, j)];
            }
        }
    }
    finish_smith(a, u, v)
}

fn finish_smith(a: IntMatrix, u: IntMatrix, v: IntMatrix) -> Smith {
    let n = a.rows.min(a.cols);
    Smith { diagonal: (0..n).map(|i| a[(i, i)].clone()).collect(), left: u, right: v }
}

/// Finitely generated abelian group `Z^free_rank + sum Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Group from arbitrary cyclic orders; orders 1 are dropped, 0 counts as Z.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        cokernel(&IntMatrix::diagonal(orders))
    }

    fn with_extra_free(mut self, k: usize) -> Self {
        self.free_rank += k;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().fold(BigInt::one(), |a, b| a * b))
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut orders: Vec<BigInt> = self.invariant_factors.clone();
        orders.extend(o.invariant_factors.iter().cloned());
        let mut m = IntMatrix::zeros(orders.len(), orders.len());
        for (i, d) in orders.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        cokernel(&m).with_extra_free(self.free_rank + o.free_rank)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            k => parts.push(format!("Z^{k}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Cokernel of `m`, read as relations (rows) on generators (columns).
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let s = smith_normal_form(m);
    let zeros = s.diagonal.iter().filter(|d| d.is_zero()).count();
    AbelianGroup {
        invariant_factors: s.diagonal.into_iter().filter(|d| d > &BigInt::one()).collect(),
        free_rank: zeros + m.cols.saturating_sub(m.rows),
    }
}

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Young diagram containment `self ⊆ other`.
    pub fn fits_in(&self, other: &Partition) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| x <= other.part(i))
    }

    /// All partitions of `n` with parts bounded row by row by `bound`.
    pub fn all_inside(n: u32, bound: &Partition) -> Vec<Partition> {
        fn go(n: u32, i: usize, max: u32, bound: &Partition, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            let cap = max.min(bound.part(i)).min(n);
            for x in (1..=cap).rev() {
                cur.push(x);
                go(n - x, i + 1, x, bound, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, 0, n, bound, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<&[u32]> for Partition {
    fn from(v: &[u32]) -> Self {
        Partition::new(v.to_vec())
    }
}

/// Prime → partition of exponents; `{3: (1,1)}` means `(Z/3)^2`.
pub type PrimaryPartition = BTreeMap<u64, Partition>;

pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primary_decomposition(g: &AbelianGroup) -> Result<PrimaryPartition, ModuleError> {
    if !g.is_finite() {
        return Err(ModuleError::Infinite);
    }
    let mut map: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for d in &g.invariant_factors {
        let d = d
            .to_u64()
            .ok_or_else(|| ModuleError::TooLarge(format!("invariant factor {d}")))?;
        for (p, e) in factor_u64(d) {
            map.entry(p).or_default().push(e);
        }
    }
    Ok(map.into_iter().map(|(p, v)| (p, Partition::new(v))).collect())
}

/// Is the Littlewood–Richardson coefficient `c^λ_{μν}` positive?
pub fn lr_positive(lambda: &Partition, mu: &Partition, nu: &Partition) -> bool {
    if lambda.size() != mu.size() + nu.size() || !mu.fits_in(lambda) || !nu.fits_in(lambda) {
        return false;
    }
    // Cells of λ/μ in reading order: rows top to bottom, each row right to left.
    let mut cells = Vec::new();
    for r in 0..lambda.len() {
        for c in (mu.part(r)..lambda.part(r)).rev() {
            cells.push((r, c as usize));
        }
    }
    let mut fill: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut counts = vec![0u32; nu.len() + 1];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        mu: &Partition,
        nu: &Partition,
        fill: &mut BTreeMap<(usize, usize), usize>,
        counts: &mut [u32],
    ) -> bool {
        let Some(&(r, c)) = cells.get(k) else {
            return true;
        };
        let hi = fill.get(&(r, c + 1)).copied().unwrap_or(nu.len());
        let lo = if r > 0 && c as u32 >= mu.part(r - 1) {
            fill[&(r - 1, c)] + 1
        } else {
            1
        };
        for v in lo..=hi {
            if counts[v] + 1 > nu.part(v - 1) || (v > 1 && counts[v] + 1 > counts[v - 1]) {
                continue;
            }
            counts[v] += 1;
            fill.insert((r, c), v);
            if go(k + 1, cells, mu, nu, fill, counts) {
                return true;
            }
            fill.remove(&(r, c));
            counts[v] -= 1;
        }
        false
    }
    go(0, &cells, mu, nu, &mut fill, &mut counts)
}

/// Types of `A/B` over all embeddings `B → A` of abelian p-groups of the given types.
pub fn embedding_cokernel_types(lambda_a: &Partition, lambda_b: &Partition) -> BTreeSet<Partition> {
    if lambda_b.size() > lambda_a.size() || !lambda_b.fits_in(lambda_a) {
        return BTreeSet::new();
    }
    Partition::all_inside(lambda_a.size() - lambda_b.size(), lambda_a)
        .into_iter()
        .filter(|nu| lr_positive(lambda_a, lambda_b, nu))
        .collect()
}

/// Does a p-group of type ν contain some G with `ν/G ≅ G`?
pub fn square_extension_exists(nu: &Partition) -> bool {
    square_extension_witness(nu).is_some()
}

/// A type μ of G in `0 → G → W → G → 0` with W of type ν.
pub fn square_extension_witness(nu: &Partition) -> Option<Partition> {
    if nu.size() % 2 == 1 {
        return None;
    }
    Partition::all_inside(nu.size() / 2, nu)
        .into_iter()
        .find(|mu| lr_positive(nu, mu, mu))
}

/// Cokernel types of all injective homomorphisms `B → A`, by enumeration.
pub fn brute_cokernel_types(
    a: &AbelianGroup,
    b: &AbelianGroup,
) -> Result<BTreeSet<PrimaryPartition>, ModuleError> {
    let order_a = a.order().ok_or(ModuleError::Infinite)?;
    let order_b = b.order().ok_or(ModuleError::Infinite)?;
    if order_a > BigInt::from(10_000) {
        return Err(ModuleError::TooLarge(format!("|A| = {order_a} exceeds 10^4")));
    }
    let mods: Vec<u64> = a.invariant_factors.iter().map(|d| d.to_u64().unwrap()).collect();
    let elements: Vec<Vec<u64>> = mods.iter().fold(vec![vec![]], |acc, &m| {
        acc.into_iter()
            .flat_map(|v| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect()
    });
    let candidates: Vec<Vec<&Vec<u64>>> = b
        .invariant_factors
        .iter()
        .map(|ord| {
            let ord = ord.to_u64().unwrap();
            elements
                .iter()
                .filter(|e| e.iter().zip(&mods).all(|(x, m)| (x * ord) % m == 0))
                .collect()
        })
        .collect();
    let total: f64 = candidates.iter().map(|c| c.len() as f64).product();
    if total > 2e6 {
        return Err(ModuleError::TooLarge(format!("{total} generator images")));
    }
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; candidates.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(out);
    }
    let k = mods.len();
    let order_b = order_b.to_i128().unwrap();
    let order_a = order_a.to_i128().unwrap();
    loop {
        let mut m = vec![vec![0i128; k]; k + idx.len()];
        for (i, &d) in mods.iter().enumerate() {
            m[i][i] = d as i128;
        }
        for (g, &ix) in idx.iter().enumerate() {
            for (j, &x) in candidates[g][ix].iter().enumerate() {
                m[k + g][j] = x as i128;
            }
        }
        let diag = smith_diagonal_i128(m, k);
        let coker: i128 = diag.iter().product();
        if order_a / coker == order_b {
            let w = AbelianGroup {
                invariant_factors: diag.into_iter().filter(|&d| d > 1).map(BigInt::from).collect(),
                free_rank: 0,
            };
            out.insert(primary_decomposition(&w)?);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Smith diagonal of a small full-column-rank matrix, without transforms.
fn smith_diagonal_i128(mut a: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
    let rows = a.len();
    for t in 0..cols {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.expect("full column rank");
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let piv = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / piv;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            match (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0)) {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
    }
    (0..cols).map(|i| a[i][i].abs()).collect()
}

/// Dense matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

pub fn fp_inv(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    assert_eq!(e.gcd, 1, "{a} not invertible mod {p}");
    e.x.rem_euclid(p as i128) as u64
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        FpMatrix {
            p,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| x.rem_euclid(p as i64) as u64).collect(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| (acc + self[(i, j)] * v[j]) % self.p))
            .collect()
    }

    pub fn pow(&self, e: u64) -> Self {
        (0..e).fold(Self::identity(self.p, self.rows), |acc, _| &acc * self)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.rows)
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| self[(i, col)] != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(piv * self.cols + j, row * self.cols + j);
            }
            let inv = fp_inv(self[(row, col)], p);
            for j in 0..self.cols {
                self[(row, j)] = self[(row, j)] * inv % p;
            }
            for i in 0..self.rows {
                let f = self[(i, col)];
                if i != row && f != 0 {
                    for j in 0..self.cols {
                        self[(i, j)] = (self[(i, j)] + (p - f) * self[(row, j)]) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

impl Index<(usize, usize)> for FpMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for FpMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &FpMatrix {
    type Output = FpMatrix;
    fn mul(self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = FpMatrix::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a != 0 {
                    for j in 0..o.cols {
                        m[(i, j)] = (m[(i, j)] + a * o[(k, j)]) % self.p;
                    }
                }
            }
        }
        m
    }
}

/// The F_p[t]/(t^r − 1)-module presented by a Laurent-polynomial matrix,
/// written as an F_p-vector space with its t-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicQuotient {
    pub p: u64,
    pub r: u64,
    pub dim: usize,
    /// Column i is t applied to the i-th basis vector.
    pub t_action: FpMatrix,
    /// Images of the presentation generators.
    pub generators: Vec<Vec<u64>>,
}

/// Quotient of `(F_p[t]/(t^r−1))^cols` by the submodule spanned by the rows of `presentation`.
pub fn cyclic_quotient_fp(
    presentation: &[Vec<LaurentPoly>],
    cols: usize,
    r: u64,
    p: u64,
) -> Result<CyclicQuotient, ModuleError> {
    if r == 0 {
        return Err(ModuleError::InvalidArgument("r must be positive".into()));
    }
    let ru = r as usize;
    let n = cols * ru;
    let idx = |j: usize, e: i64| j * ru + e.rem_euclid(r as i64) as usize;
    let pb = BigInt::from(p);
    let mut rel = FpMatrix::zeros(p, presentation.len() * ru, n);
    for (i, row) in presentation.iter().enumerate() {
        if row.len() != cols {
            return Err(ModuleError::InvalidArgument("ragged presentation".into()));
        }
        for s in 0..ru {
            for (j, entry) in row.iter().enumerate() {
                for (k, c) in entry.coeffs().iter().enumerate() {
                    let c = c.to_integer().mod_floor(&pb).to_u64().unwrap();
                    let e = entry.low() + k as i64 + s as i64;
                    let at = (i * ru + s, idx(j, e));
                    rel[at] = (rel[at] + c) % p;
                }
            }
        }
    }
    let pivots = rel.rref();
    let is_pivot: Vec<bool> = (0..n).map(|c| pivots.contains(&c)).collect();
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let project = |mut v: Vec<u64>| -> Vec<u64> {
        for (row, &pc) in pivots.iter().enumerate() {
            let f = v[pc];
            if f != 0 {
                for j in 0..n {
                    v[j] = (v[j] + (p - f) * rel[(row, j)]) % p;
                }
            }
        }
        free.iter().map(|&c| v[c]).collect()
    };
    let unit = |pos: usize| {
        let mut v = vec![0u64; n];
        v[pos] = 1 % p;
        v
    };
    let dim = free.len();
    let mut t_action = FpMatrix::zeros(p, dim, dim);
    for (col, &f) in free.iter().enumerate() {
        let (j, e) = (f / ru, (f % ru) as i64);
        let image = project(unit(idx(j, e + 1)));
        for (row, x) in image.into_iter().enumerate() {
            t_action[(row, col)] = x;
        }
    }
    let generators = (0..cols).map(|j| project(unit(idx(j, 0)))).collect();
    Ok(CyclicQuotient { p, r, dim, t_action, generators })
}

/// Shifts each row by a power of t so that all entries are ordinary polynomials.
fn clear_negative_powers(m: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    m.iter()
        .map(|row| {
            let low = row.iter().filter(|e| !e.is_zero()).map(|e| e.low()).min().unwrap_or(0);
            row.iter().map(|e| e.shift(-low)).collect()
        })
        .collect()
}

/// Determinant over Z[t^{±1}] (or any coefficient ring) by fraction-free elimination.
pub fn poly_det(m: &[Vec<LaurentPoly>], ring: Ring) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one(ring);
    }
    assert!(m.iter().all(|r| r.len() == n), "square matrix expected");
    let mut a = clear_negative_powers(m);
    let shift: i64 = m
        .iter()
        .zip(&a)
        .map(|(orig, cleared)| {
            orig.iter()
                .zip(cleared)
                .find(|(o, _)| !o.is_zero())
                .map_or(0, |(o, c)| o.low() - c.low())
        })
        .sum();
    let mut sign = false;
    let mut prev = LaurentPoly::one(ring);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return LaurentPoly::zero(ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("same ring")
                    .expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero(ring);
        }
        prev = a[k][k].clone();
    }
    let d = prev.shift(shift);
    if sign {
        -d
    } else {
        d
    }
}

/// Invariant factors over the principal ideal domain Q[t^{±1}]: monic, low 0,
/// each dividing the next, zeros last; length min(rows, cols).
pub fn smith_over_rational_polynomials(m: &[Vec<LaurentPoly>]) -> Vec<LaurentPoly> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<LaurentPoly>> = clear_negative_powers(m)
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.to_ring(Ring::Rat).expect("rational")).collect())
        .collect();
    let zero = LaurentPoly::zero(Ring::Rat);
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].span() < a[bi][bj].span()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.resize(n, zero.clone());
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let (q, _) = a[i][t].div_rem(&a[t][t]).unwrap();
                    let q = q.shift(a[i][t].low() - a[t][t].low());
                    for j in t..cols {
                        let v = &a[i][j] - &(&q * &a[t][j]);
                        a[i][j] = v;
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let (q, _) = a[t][j].div_rem(&a[t][t]).unwrap();
                    let q = q.shift(a[t][j].low() - a[t][t].low());
                    for i in t..rows {
                        let v = &a[i][j] - &(&q * &a[i][t]);
                        a[i][j] = v;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[t][t].divides(&a[i][j]).unwrap())
            });
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].monic());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn group(orders: &[i64]) -> AbelianGroup {
        AbelianGroup::from_cyclic_orders(orders)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]));
        assert_eq!(s.diagonal, big(&[1, 3]));
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).diagonal, big(&[1, 1, 1]));
        assert_eq!(smith_normal_form(&IntMatrix::from_rows(&[vec![0]])).diagonal, big(&[0]));
    }

    #[test]
    fn cokernel_examples() {
        let v = IntMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]);
        let m = v.neg().sub(&v.transpose());
        assert_eq!(cokernel(&m), group(&[3]));
        let z2 = cokernel(&IntMatrix::zeros(2, 2));
        assert_eq!((z2.free_rank, z2.invariant_factors.len()), (2, 0));
        assert_eq!(cokernel(&IntMatrix::diagonal(&[9, 9])).invariant_factors, big(&[9, 9]));
        assert_eq!(cokernel(&IntMatrix::from_rows(&[vec![2, 0, 0]])).free_rank, 2);
        assert_eq!(group(&[6, 4]).invariant_factors, big(&[2, 12]));
        assert_eq!(group(&[6, 4]).to_string(), "Z/2 + Z/12");
    }

    #[test]
    fn primary_examples() {
        let g = group(&[3, 3, 3, 3, 5, 5]);
        let d = primary_decomposition(&g).unwrap();
        assert_eq!(d[&3], part(&[1, 1, 1, 1]));
        assert_eq!(d[&5], part(&[1, 1]));
        assert!(primary_decomposition(&AbelianGroup::trivial()).unwrap().is_empty());
        let d = primary_decomposition(&group(&[3, 243])).unwrap();
        assert_eq!(d[&3], part(&[5, 1]));
        assert!(primary_decomposition(&cokernel(&IntMatrix::zeros(1, 1))).is_err());
    }

    #[test]
    fn lr_examples() {
        assert!(lr_positive(&part(&[2]), &part(&[1]), &part(&[1])));
        assert!(lr_positive(&part(&[5, 1]), &part(&[2]), &part(&[3, 1])));
        // Z/p + Z/p^5 has the subgroup <(1, p^3)> of order p^2 with cyclic quotient.
        assert!(lr_positive(&part(&[5, 1]), &part(&[2]), &part(&[4])));
        assert!(lr_positive(&part(&[2, 1]), &part(&[1]), &part(&[1, 1])));
        assert!(!lr_positive(&part(&[1, 1]), &part(&[2]), &part(&[])));
        assert!(lr_positive(&part(&[3, 2, 1]), &part(&[2, 1]), &part(&[2, 1])));
    }

    #[test]
    fn embedding_examples() {
        let types = embedding_cokernel_types(&part(&[5, 1]), &part(&[2]));
        assert_eq!(types, [part(&[4]), part(&[3, 1])].into_iter().collect());
        let same = embedding_cokernel_types(&part(&[3, 1]), &part(&[3, 1]));
        assert_eq!(same, [part(&[])].into_iter().collect());
        assert!(embedding_cokernel_types(&part(&[1, 1]), &part(&[2])).is_empty());
    }

    #[test]
    fn square_extension_examples() {
        // Z/p + Z/p^3 contains <(p, 1)> ≅ Z/p^2 with quotient Z/p^2.
        assert!(square_extension_exists(&part(&[3, 1])));
        assert!(square_extension_exists(&part(&[1, 1])));
        assert!(square_extension_exists(&part(&[2, 2])));
        assert!(!square_extension_exists(&part(&[2, 1])));
        assert!(!square_extension_exists(&part(&[3])));
        assert!(square_extension_exists(&part(&[])));
    }

    fn one_prime(set: &BTreeSet<PrimaryPartition>, p: u64) -> BTreeSet<Partition> {
        set.iter().map(|m| m.get(&p).cloned().unwrap_or_default()).collect()
    }

    #[test]
    fn brute_examples() {
        let t = brute_cokernel_types(&group(&[9]), &group(&[3])).unwrap();
        assert_eq!(one_prime(&t, 3), [part(&[1])].into_iter().collect());
        assert!(brute_cokernel_types(&group(&[3, 3]), &group(&[9])).unwrap().is_empty());
        let t = brute_cokernel_types(&group(&[3, 243]), &group(&[9])).unwrap();
        assert_eq!(one_prime(&t, 3), [part(&[4]), part(&[3, 1])].into_iter().collect());
        assert!(brute_cokernel_types(&group(&[101, 101]), &group(&[1])).is_err());
    }

    #[test]
    fn brute_agrees_with_lr_on_small_groups() {
        let shapes: Vec<Vec<u32>> = vec![
            vec![1], vec![2], vec![1, 1], vec![3], vec![2, 1], vec![1, 1, 1],
            vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![3, 2], vec![5, 1],
            vec![3, 3], vec![4, 2], vec![3, 2, 1], vec![2, 2, 1],
        ];
        let order = |s: &[u32]| 3u64.pow(s.iter().sum());
        for a in &shapes {
            for b in &shapes {
                let images = order(a).pow(b.len() as u32);
                if order(a) > 2187 || images > 300_000 || b.iter().sum::<u32>() > a.iter().sum::<u32>() {
                    continue;
                }
                let ga = group(&a.iter().map(|&e| 3i64.pow(e)).collect::<Vec<_>>());
                let gb = group(&b.iter().map(|&e| 3i64.pow(e)).collect::<Vec<_>>());
                let brute = brute_cokernel_types(&ga, &gb).unwrap();
                assert_eq!(
                    one_prime(&brute, 3),
                    embedding_cokernel_types(&part(a), &part(b)),
                    "A = {a:?}, B = {b:?}"
                );
            }
        }
    }

    fn ratpoly(s: &str) -> LaurentPoly {
        LaurentPoly::parse_in(Ring::Rat, s).unwrap()
    }

    #[test]
    fn rational_smith_examples() {
        let tv = |v: [[i64; 2]; 2]| -> Vec<Vec<LaurentPoly>> {
            (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| LaurentPoly::from_ints(Ring::Rat, 0, &[-v[j][i], v[i][j]]))
                        .collect()
                })
                .collect()
        };
        let d = smith_over_rational_polynomials(&tv([[-1, 1], [0, -1]]));
        assert_eq!(d, vec![ratpoly("1"), ratpoly("t^2 - t + 1")]);
        let z = ratpoly("t^2 - t + 1");
        let zero = LaurentPoly::zero(Ring::Rat);
        let d = smith_over_rational_polynomials(&[vec![z.clone(), zero.clone()], vec![zero.clone(), z.clone()]]);
        assert_eq!(d, vec![z.clone(), z.clone()]);
        let d = smith_over_rational_polynomials(&[
            vec![z.pow(2), zero.clone()],
            vec![zero.clone(), ratpoly("1")],
        ]);
        assert_eq!(d, vec![ratpoly("1"), z.pow(2)]);
        let d = smith_over_rational_polynomials(&[vec![ratpoly("t^-1 - 1"), ratpoly("t^2 - 1")]]);
        assert_eq!(d, vec![ratpoly("t - 1")]);
    }

    #[test]
    fn poly_det_small() {
        let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
        let m = vec![vec![p("t^-1 - 1"), p("1")], vec![p("t"), p("2 + t")]];
        let expect = &(&p("t^-1 - 1") * &p("2 + t")) - &p("t");
        assert_eq!(poly_det(&m, Ring::Int), expect);
        let m = vec![vec![p("0"), p("t")], vec![p("1"), p("0")]];
        assert_eq!(poly_det(&m, Ring::Int), p("-t"));
    }

    #[test]
    fn cyclic_quotient_of_trefoil_cover() {
        let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
        let q = cyclic_quotient_fp(&[vec![p("t^2 - t + 1")]], 1, 2, 3).unwrap();
        assert_eq!(q.dim, 1);
        assert!(q.t_action.pow(2).is_identity());
        let q = cyclic_quotient_fp(&[vec![p("t^2 - t + 1")]], 1, 2, 5).unwrap();
        assert_eq!(q.dim, 0);
        let q = cyclic_quotient_fp(&[vec![p("t^2 - t + 1")]], 1, 6, 7).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.t_action.pow(6).is_identity());
    }

    fn int_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-99i64..100, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec((0..n, 0..n, -3i64..4), 0..12).prop_map(move |ops| {
            let mut m = IntMatrix::identity(n);
            for (i, j, f) in ops {
                if i != j {
                    m.add_row(i, j, &BigInt::from(f));
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn smith_transforms_verify(m in int_matrix(12)) {
            let s = smith_normal_form(&m);
            let d = &(&s.left * &m) * &s.right;
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                    prop_assert_eq!(&d[(i, j)], &want);
                }
            }
            prop_assert!(s.left.determinant().abs().is_one());
            prop_assert!(s.right.determinant().abs().is_one());
            for w in s.diagonal.windows(2) {
                prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
            }
        }

        #[test]
        fn cokernel_invariant_under_unimodular_moves(
            m in prop::collection::vec(prop::collection::vec(-20i64..21, 4), 4),
            u in unimodular(4),
            v in unimodular(4),
        ) {
            let m = IntMatrix::from_rows(&m);
            prop_assert_eq!(cokernel(&(&(&u * &m) * &v)), cokernel(&m));
        }

        #[test]
        fn lr_commutes(
            mu in prop::collection::vec(0u32..4, 0..3),
            nu in prop::collection::vec(0u32..4, 0..3),
            extra in prop::collection::vec(0u32..3, 0..4),
        ) {
            let mu = Partition::new(mu);
            let nu = Partition::new(nu);
            let lam = Partition::new(
                (0..4).map(|i| mu.part(i) + nu.part(i) + extra.get(i).copied().unwrap_or(0)).collect(),
            );
            prop_assert_eq!(lr_positive(&lam, &mu, &nu), lr_positive(&lam, &nu, &mu));
        }

        #[test]
        fn odd_size_has_no_square_extension(v in prop::collection::vec(1u32..5, 1..5)) {
            let nu = Partition::new(v);
            if nu.size() % 2 == 1 {
                prop_assert!(!square_extension_exists(&nu));
            }
        }

        #[test]
        fn unimodular_inverse(u in unimodular(5)) {
            let inv = u.inverse_unimodular().unwrap();
            prop_assert_eq!(&u * &inv, IntMatrix::identity(5));
        }
    }
}

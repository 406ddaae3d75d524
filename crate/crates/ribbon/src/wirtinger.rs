//! Planar diagram codes, Wirtinger presentations and Fox calculus.
//!
//! A crossing `[i, j, k, l]` lists edge labels counterclockwise starting at the
//! incoming under-edge, so the under-strand runs `i -> k`. Edges are labelled
//! `1..=2n` along the orientation. The crossing is positive when the
//! over-strand runs `l -> j`.
//!
//! For the trefoil `PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]` every over-strand
//! runs `l -> j` (e.g. 4 -> 5 at the first crossing), so all three crossings
//! are positive, and the arcs are `{1,6}`, `{2,3}`, `{4,5}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Ring};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    Malformed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
}

impl PDCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        let pd = PDCode { crossings };
        pd.validate()?;
        Ok(pd)
    }

    pub fn unknot() -> Self {
        PDCode::default()
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn edges(&self) -> u32 {
        2 * self.crossings.len() as u32
    }

    fn next(&self, a: u32) -> u32 {
        if a == self.edges() {
            1
        } else {
            a + 1
        }
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let n = self.edges();
        let mut seen = vec![0u8; n as usize + 1];
        for c in &self.crossings {
            for &a in c {
                if a == 0 || a > n {
                    return Err(DiagramError::Malformed(format!("label {a} outside 1..={n}")));
                }
                seen[a as usize] += 1;
            }
        }
        if let Some(a) = (1..=n as usize).find(|&a| seen[a] != 2) {
            return Err(DiagramError::Malformed(format!("label {a} occurs {} times", seen[a])));
        }
        for c in &self.crossings {
            if c[2] != self.next(c[0]) {
                return Err(DiagramError::Malformed(format!("{c:?}: under-strand is not {} -> {}", c[0], c[2])));
            }
            if c[3] != self.next(c[1]) && c[1] != self.next(c[3]) {
                return Err(DiagramError::Malformed(format!("{c:?}: over-strand labels are not consecutive")));
            }
        }
        Ok(())
    }

    /// +1 or -1.
    pub fn crossing_sign(&self, c: usize) -> i32 {
        let c = self.crossings[c];
        if c[1] == self.next(c[3]) {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i32 {
        (0..self.crossings.len()).map(|c| self.crossing_sign(c)).sum()
    }

    /// Same diagram with every crossing switched.
    pub fn mirror(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .map(|&[i, j, k, l]| if l == self.next(j) { [j, k, l, i] } else { [l, i, j, k] })
            .collect();
        PDCode { crossings }
    }

    /// Same diagram with the orientation reversed.
    pub fn reverse(&self) -> Self {
        let n = self.edges();
        let f = |a: u32| if a == 1 { 1 } else { n + 2 - a };
        let crossings = self
            .crossings
            .iter()
            .map(|&[i, j, k, l]| [f(k), f(l), f(i), f(j)])
            .collect();
        PDCode { crossings }
    }

    /// Diagram of the concordance inverse `-K`.
    pub fn concordance_inverse(&self) -> Self {
        self.mirror().reverse()
    }

    /// Position of the occurrence of `a` where the edge enters a crossing.
    fn head(&self, a: u32) -> (usize, usize) {
        for (ci, c) in self.crossings.iter().enumerate() {
            if c[0] == a {
                return (ci, 0);
            }
            if c[1] == a && c[3] == self.next(a) {
                return (ci, 1);
            }
            if c[3] == a && c[1] == self.next(a) {
                return (ci, 3);
            }
        }
        unreachable!("validated code has a head for every edge")
    }

    pub fn connected_sum(&self, other: &Self) -> Self {
        if self.crossings.is_empty() {
            return other.clone();
        }
        if other.crossings.is_empty() {
            return self.clone();
        }
        let (n1, n2) = (self.edges(), other.edges());
        let mut a = self.clone();
        let mut b = PDCode {
            crossings: other.crossings.iter().map(|c| c.map(|x| x + n1)).collect(),
        };
        let (ca, pa) = self.head(n1);
        let (cb, pb) = other.head(n2);
        a.crossings[ca][pa] = n1 + n2;
        b.crossings[cb][pb] = n1;
        a.crossings.extend(b.crossings);
        debug_assert!(a.validate().is_ok());
        a
    }

    /// Arc index of every edge label; arcs are numbered by their smallest label.
    pub fn arcs(&self) -> Vec<usize> {
        let n = self.edges() as usize;
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in &self.crossings {
            let (x, y) = (find(&mut parent, c[1] as usize), find(&mut parent, c[3] as usize));
            parent[x.max(y)] = x.min(y);
        }
        let mut index = BTreeMap::new();
        let mut out = vec![usize::MAX; n + 1];
        for a in 1..=n {
            let root = find(&mut parent, a);
            let next = index.len();
            out[a] = *index.entry(root).or_insert(next);
        }
        out
    }
}

impl FromStr for PDCode {
    type Err = DiagramError;

    /// Accepts `PD[X[1,5,2,4],...]` and JSON `[[1,5,2,4],...]`.
    fn from_str(s: &str) -> Result<Self, DiagramError> {
        let s = s.trim();
        if s.starts_with('[') {
            let crossings: Vec<[u32; 4]> =
                serde_json::from_str(s).map_err(|e| DiagramError::Malformed(e.to_string()))?;
            return PDCode::new(crossings);
        }
        let body = s
            .strip_prefix("PD[")
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| DiagramError::Malformed(format!("expected PD[...], got {s:?}")))?;
        let mut crossings = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix("X[")
                .ok_or_else(|| DiagramError::Malformed(format!("expected X[...] at {rest:?}")))?;
            let close = inner
                .find(']')
                .ok_or_else(|| DiagramError::Malformed("unclosed X[".into()))?;
            let labels: Vec<u32> = inner[..close]
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|e| DiagramError::Malformed(e.to_string()))?;
            let c: [u32; 4] = labels
                .try_into()
                .map_err(|l: Vec<u32>| DiagramError::Malformed(format!("crossing with {} labels", l.len())))?;
            crossings.push(c);
            rest = inner[close + 1..].trim_start();
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
        }
        PDCode::new(crossings)
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        for (n, c) in self.crossings.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "X[{},{},{},{}]", c[0], c[1], c[2], c[3])?;
        }
        write!(f, "]")
    }
}

impl<'de> Deserialize<'de> for PDCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<[u32; 4]>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::List(c) => PDCode::new(c).map_err(serde::de::Error::custom),
        }
    }
}

/// A reduced word in free generators; letters are `(generator, ±1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<(usize, i8)>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        FreeWord(vec![(g, 1)])
    }

    pub fn from_letters(letters: &[(usize, i8)]) -> Self {
        let mut w = FreeWord::identity();
        for &(g, e) in letters {
            assert!(e == 1 || e == -1, "exponent must be ±1");
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: usize, e: i8) {
        if self.0.last() == Some(&(g, -e)) {
            self.0.pop();
        } else {
            self.0.push((g, e));
        }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for &(g, e) in &other.0 {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Exponent sum weighted by `phi`.
    pub fn degree(&self, phi: &[i64]) -> i64 {
        self.0.iter().map(|&(g, e)| phi[g] * e as i64).sum()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, &(g, e)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}", g + 1)?;
            if e < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Integer combination of words: an element of the integral group ring of a free group.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupRingElem(BTreeMap<FreeWord, i64>);

impl GroupRingElem {
    pub fn zero() -> Self {
        GroupRingElem::default()
    }

    pub fn word(w: FreeWord) -> Self {
        GroupRingElem(BTreeMap::from([(w, 1)]))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn add_term(&mut self, w: FreeWord, c: i64) {
        let e = self.0.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.retain(|_, c| *c != 0);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupRingElem::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// Image under `x_g -> t^{phi(g)}`.
    pub fn abelianize(&self, phi: &[i64]) -> LaurentPoly {
        let mut p = LaurentPoly::zero(Ring::Int);
        for (w, c) in self.terms() {
            p = &p + &LaurentPoly::from_ints(Ring::Int, w.degree(phi), &[c]);
        }
        p
    }
}

/// `∂w/∂x_j`.
pub fn fox_derivative(w: &FreeWord, j: usize) -> GroupRingElem {
    let mut out = GroupRingElem::zero();
    let mut prefix = FreeWord::identity();
    for &(g, e) in w.letters() {
        if g == j {
            if e > 0 {
                out.add_term(prefix.clone(), 1);
            } else {
                out.add_term(prefix.concat(&FreeWord(vec![(g, -1)])), -1);
            }
        }
        prefix.push(g, e);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<FreeWord>,
    /// Abelianization degree of each generator.
    pub phi: Vec<i64>,
}

impl Presentation {
    pub fn deficiency(&self) -> i64 {
        self.generators as i64 - self.relators.len() as i64
    }
}

/// One generator per arc and one conjugation relator per crossing, the last dropped.
pub fn wirtinger_from_pd(pd: &PDCode) -> Presentation {
    if pd.crossings.is_empty() {
        return Presentation { generators: 1, relators: Vec::new(), phi: vec![1] };
    }
    let arc = pd.arcs();
    let generators = arc[1..].iter().max().unwrap() + 1;
    let mut relators: Vec<FreeWord> = (0..pd.crossings.len())
        .map(|ci| {
            let c = pd.crossings[ci];
            let (i, o, k) = (arc[c[0] as usize], arc[c[1] as usize], arc[c[2] as usize]);
            let s = pd.crossing_sign(ci) as i8;
            FreeWord::from_letters(&[(o, s), (i, 1), (o, -s), (k, -1)])
        })
        .collect();
    relators.pop();
    Presentation { generators, relators, phi: vec![1; generators] }
}

/// Jacobian `(∂r_i/∂x_j)` abelianized by `phi`.
pub fn alexander_matrix(pres: &Presentation) -> Vec<Vec<LaurentPoly>> {
    pres.relators
        .iter()
        .map(|r| {
            (0..pres.generators)
                .map(|j| fox_derivative(r, j).abelianize(&pres.phi))
                .collect()
        })
        .collect()
}

/// The Alexander matrix with column `j` (0-based) deleted.
pub fn alexander_module_presentation(
    pres: &Presentation,
    j: usize,
) -> Result<Vec<Vec<LaurentPoly>>, DiagramError> {
    if j >= pres.generators {
        return Err(DiagramError::InvalidArgument(format!(
            "column {j} out of range for {} generators",
            pres.generators
        )));
    }
    if pres.deficiency() != 1 {
        return Err(DiagramError::InvalidArgument(format!("deficiency {} != 1", pres.deficiency())));
    }
    Ok(alexander_matrix(pres)
        .into_iter()
        .map(|mut row| {
            row.remove(j);
            row
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodules::poly_det;
    use proptest::prelude::*;

    const TREFOIL: &str = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]";
    const FIGURE8: &str = "[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]";
    const SIX_ONE: &str = "[[1,7,2,6],[3,10,4,11],[5,3,6,2],[7,1,8,12],[9,4,10,5],[11,9,12,8]]";

    fn pd(s: &str) -> PDCode {
        s.parse().unwrap()
    }

    fn delta(pd: &PDCode) -> LaurentPoly {
        let pres = wirtinger_from_pd(pd);
        poly_det(&alexander_module_presentation(&pres, 0).unwrap(), Ring::Int).normalize_units()
    }

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parses_both_syntaxes() {
        let a = pd(TREFOIL);
        let b = pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]");
        assert_eq!(a, b);
        assert_eq!(a.to_string().parse::<PDCode>().unwrap(), a);
        assert_eq!(pd("PD[]"), PDCode::unknot());
        assert!("PD[X[1,5,2,4]]".parse::<PDCode>().is_err());
        assert!("PD[X[1,2,3]]".parse::<PDCode>().is_err());
        assert!("[[1,3,4,2],[3,1,2,4]]".parse::<PDCode>().is_err());
        assert!("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,7]]".parse::<PDCode>().is_err());
    }

    #[test]
    fn trefoil_arcs_and_signs() {
        let t = pd(TREFOIL);
        let arcs = t.arcs();
        assert_eq!(arcs[1], arcs[6]);
        assert_eq!(arcs[2], arcs[3]);
        assert_eq!(arcs[4], arcs[5]);
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.mirror().writhe(), -3);
        assert_eq!(pd(FIGURE8).writhe(), 0);
        assert_eq!(t.reverse().writhe(), 3);
    }

    #[test]
    fn wirtinger_counts() {
        let w = wirtinger_from_pd(&pd(TREFOIL));
        assert_eq!((w.generators, w.relators.len()), (3, 2));
        let u = wirtinger_from_pd(&PDCode::unknot());
        assert_eq!((u.generators, u.relators.len()), (1, 0));
        let s = pd(TREFOIL).connected_sum(&pd(TREFOIL));
        let w = wirtinger_from_pd(&s);
        assert_eq!((w.generators, w.relators.len()), (6, 5));
        for r in &w.relators {
            assert_eq!(r.degree(&w.phi), 0);
        }
    }

    #[test]
    fn fox_examples() {
        let (x, y) = (0, 1);
        let w = FreeWord::from_letters(&[(x, 1), (y, 1), (x, -1)]);
        let mut expected = GroupRingElem::word(FreeWord::identity());
        expected.add_term(w.clone(), -1);
        assert_eq!(fox_derivative(&w, x), expected);
        let xy = FreeWord::from_letters(&[(x, 1), (y, 1)]);
        assert_eq!(fox_derivative(&xy, y), GroupRingElem::word(FreeWord::generator(x)));
        let r = FreeWord::from_letters(&[(x, 1), (y, 1), (x, 1), (y, -1), (x, -1), (y, -1)]);
        assert_eq!(fox_derivative(&r, x).abelianize(&[1, 1]), p("1 - t + t^2"));
    }

    #[test]
    fn alexander_from_diagrams() {
        assert_eq!(delta(&pd(TREFOIL)), p("t^2 - t + 1"));
        assert_eq!(delta(&pd(FIGURE8)), p("t^2 - 3*t + 1"));
        assert_eq!(delta(&pd(SIX_ONE)), p("2*t^2 - 5*t + 2"));
        assert_eq!(delta(&PDCode::unknot()), p("1"));
        let t = pd(TREFOIL);
        assert_eq!(delta(&t.connected_sum(&pd(FIGURE8))), p("t^2 - t + 1") * p("t^2 - 3*t + 1"));
        assert_eq!(delta(&t.concordance_inverse()), p("t^2 - t + 1"));
        let m = alexander_module_presentation(&wirtinger_from_pd(&t), 0).unwrap();
        assert_eq!(m.len(), 2);
        assert!(alexander_module_presentation(&wirtinger_from_pd(&PDCode::unknot()), 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn maximal_minors_agree() {
        for s in [TREFOIL, FIGURE8, SIX_ONE] {
            let pres = wirtinger_from_pd(&pd(s));
            let d0 = poly_det(&alexander_module_presentation(&pres, 0).unwrap(), Ring::Int);
            for j in 1..pres.generators {
                let dj = poly_det(&alexander_module_presentation(&pres, j).unwrap(), Ring::Int);
                assert!(dj.associated(&d0), "{s} column {j}");
            }
        }
    }

    #[test]
    fn fundamental_identity() {
        for s in [TREFOIL, FIGURE8, SIX_ONE] {
            let pres = wirtinger_from_pd(&pd(s));
            for r in &pres.relators {
                let mut lhs = GroupRingElem::zero();
                for j in 0..pres.generators {
                    let mut xm1 = GroupRingElem::word(FreeWord::generator(j));
                    xm1.add_term(FreeWord::identity(), -1);
                    lhs = lhs.add(&fox_derivative(r, j).mul(&xm1));
                }
                let mut rhs = GroupRingElem::word(r.clone());
                rhs.add_term(FreeWord::identity(), -1);
                assert_eq!(lhs, rhs);
            }
        }
    }

    fn word_strategy() -> impl Strategy<Value = FreeWord> {
        prop::collection::vec((0usize..3, prop::bool::ANY), 0..12)
            .prop_map(|v| FreeWord::from_letters(&v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn fox_product_rule(u in word_strategy(), v in word_strategy(), j in 0usize..3) {
            let lhs = fox_derivative(&u.concat(&v), j);
            let rhs = fox_derivative(&u, j).add(&GroupRingElem::word(u.clone()).mul(&fox_derivative(&v, j)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fundamental_identity_random(w in word_strategy()) {
            let mut lhs = GroupRingElem::zero();
            for j in 0..3 {
                let mut xm1 = GroupRingElem::word(FreeWord::generator(j));
                xm1.add_term(FreeWord::identity(), -1);
                lhs = lhs.add(&fox_derivative(&w, j).mul(&xm1));
            }
            let mut rhs = GroupRingElem::word(w.clone());
            rhs.add_term(FreeWord::identity(), -1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

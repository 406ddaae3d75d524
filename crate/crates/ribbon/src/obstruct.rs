//! Obstructions to `J ≥ K` for an ordered pair of knots.
//!
//! Every test answers `Obstructed`, `NotObstructed` or `Inconclusive`. The
//! criteria are necessary conditions only, so `NotObstructed` means the test
//! is silent, never that a concordance exists.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Ring};
use crate::seifert::{self, SeifertMatrix, SignatureProfile};
use crate::twisted::{self, DEFAULT_GROUP_CAP};
use crate::wirtinger::{self, PDCode, Presentation};
use crate::zmodules::{self, AbelianGroup, Partition};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("{name}: {message}")]
    Inconsistent { name: String, message: String },
}

/// A knot given by a Seifert matrix and optionally a PD code.
#[derive(Debug, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub seifert: SeifertMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pd: Option<PDCode>,
    #[serde(skip)]
    cache: Cache,
}

#[derive(Debug, Default)]
struct Cache {
    alexander: OnceLock<LaurentPoly>,
    double_cover: OnceLock<AbelianGroup>,
    profile: OnceLock<SignatureProfile>,
}

impl Clone for KnotRecord {
    fn clone(&self) -> Self {
        KnotRecord { name: self.name.clone(), seifert: self.seifert.clone(), pd: self.pd.clone(), cache: Cache::default() }
    }
}

impl PartialEq for KnotRecord {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name && self.seifert == o.seifert && self.pd == o.pd
    }
}

impl KnotRecord {
    /// Checks that the PD code, when present, has the same Alexander polynomial.
    pub fn new(name: impl Into<String>, seifert: SeifertMatrix, pd: Option<PDCode>) -> Result<Self, RecordError> {
        let r = KnotRecord { name: name.into(), seifert, pd, cache: Cache::default() };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), RecordError> {
        if let Some(pd) = &self.pd {
            let from_pd = pd_alexander(pd);
            if !from_pd.associated(self.alexander()) {
                return Err(RecordError::Inconsistent {
                    name: self.name.clone(),
                    message: format!("PD code gives Δ = {from_pd}, Seifert matrix gives {}", self.alexander()),
                });
            }
        }
        Ok(())
    }

    pub fn alexander(&self) -> &LaurentPoly {
        self.cache.alexander.get_or_init(|| seifert::alexander_poly(&self.seifert))
    }

    pub fn double_cover(&self) -> &AbelianGroup {
        self.cache.double_cover.get_or_init(|| seifert::double_cover_homology(&self.seifert))
    }

    pub fn determinant(&self) -> BigInt {
        seifert::determinant(&self.seifert)
    }

    pub fn profile(&self) -> &SignatureProfile {
        self.cache.profile.get_or_init(|| seifert::signature_profile(&self.seifert))
    }

    pub fn presentation(&self) -> Option<Presentation> {
        self.pd.as_ref().map(wirtinger::wirtinger_from_pd)
    }

    /// `-K` with both representations transformed.
    pub fn concordance_inverse(&self, name: impl Into<String>) -> Self {
        KnotRecord {
            name: name.into(),
            seifert: self.seifert.concordance_inverse(),
            pd: self.pd.as_ref().map(|p| p.concordance_inverse()),
            cache: Cache::default(),
        }
    }

    pub fn connected_sum(&self, other: &Self, name: impl Into<String>) -> Self {
        let pd = match (&self.pd, &other.pd) {
            (Some(a), Some(b)) => Some(a.connected_sum(b)),
            _ => None,
        };
        KnotRecord { name: name.into(), seifert: self.seifert.connected_sum(&other.seifert), pd, cache: Cache::default() }
    }
}

/// Δ as the determinant of the Fox Jacobian with the first column deleted.
pub fn pd_alexander(pd: &PDCode) -> LaurentPoly {
    let pres = wirtinger::wirtinger_from_pd(pd);
    let m = wirtinger::alexander_module_presentation(&pres, 0).expect("Wirtinger presentations have deficiency one");
    zmodules::poly_det(&m, Ring::Int).normalize_units()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "Obstructed",
            Verdict::NotObstructed => "NotObstructed",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Alexander,
    Double,
    Signature,
    Metabelian,
}

impl TestKind {
    pub const ALL: [TestKind; 4] = [TestKind::Alexander, TestKind::Double, TestKind::Signature, TestKind::Metabelian];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Alexander => "alexander",
            TestKind::Double => "double",
            TestKind::Signature => "signature",
            TestKind::Metabelian => "metabelian",
        }
    }
}

impl std::str::FromStr for TestKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TestKind::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown test '{s}' (expected alexander, double, signature or metabelian)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterminantFailure {
    NotDivisible,
    QuotientNotSquare,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `Δ_K ∤ Δ_J`.
    AlexanderDivisibility { delta_j: LaurentPoly, delta_k: LaurentPoly },
    Determinant { det_j: String, det_k: String, failure: DeterminantFailure },
    /// No cokernel type of `λ_p(K) → λ_p(J)` is a square extension.
    PrimaryParts { prime: u64, j_part: Partition, k_part: Partition, cokernel_types: Vec<Partition> },
    /// `inequality` is 1 for `Δdeg ≥ Δη`, 2 for `Δη ≥ |Δσ|`.
    Signature {
        x: f64,
        exact_x: Option<(i64, i64)>,
        deg_j: usize,
        deg_k: usize,
        eta_j: usize,
        eta_k: usize,
        sigma_j: i64,
        sigma_k: i64,
        inequality: u8,
    },
    TwistedDivisibility { r: u64, p: u64, delta_j: LaurentPoly, delta_k: LaurentPoly },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestEntry {
    pub test: TestKind,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl TestEntry {
    fn new(test: TestKind, verdict: Verdict) -> Self {
        TestEntry { test, verdict, witness: None, notes: Vec::new() }
    }
    fn obstructed(test: TestKind, w: Witness) -> Self {
        TestEntry { test, verdict: Verdict::Obstructed, witness: Some(w), notes: Vec::new() }
    }
    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub schema: u32,
    pub j: String,
    pub k: String,
    pub entries: Vec<TestEntry>,
    pub aggregate: Verdict,
}

impl ObstructionReport {
    pub fn entry(&self, t: TestKind) -> Option<&TestEntry> {
        self.entries.iter().find(|e| e.test == t)
    }
}

pub fn aggregate(entries: &[TestEntry]) -> Verdict {
    if entries.iter().any(|e| e.verdict == Verdict::Obstructed) {
        Verdict::Obstructed
    } else if entries.iter().any(|e| e.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::NotObstructed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetabelianOptions {
    pub r: u64,
    pub p: u64,
    /// Caller asserts the hypothesis that makes non-divisibility an obstruction.
    pub applicable: bool,
    pub cap: usize,
}

impl MetabelianOptions {
    pub fn new(r: u64, p: u64) -> Self {
        MetabelianOptions { r, p, applicable: false, cap: DEFAULT_GROUP_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructOptions {
    pub tests: Vec<TestKind>,
    pub metabelian: Option<MetabelianOptions>,
}

impl Default for ObstructOptions {
    fn default() -> Self {
        ObstructOptions { tests: vec![TestKind::Alexander, TestKind::Double, TestKind::Signature], metabelian: None }
    }
}

pub fn alexander_obstruction(j: &KnotRecord, k: &KnotRecord) -> TestEntry {
    let (dj, dk) = (j.alexander(), k.alexander());
    if dk.divides(dj).expect("both polynomials are integral") {
        TestEntry::new(TestKind::Alexander, Verdict::NotObstructed)
    } else {
        TestEntry::obstructed(
            TestKind::Alexander,
            Witness::AlexanderDivisibility { delta_j: dj.normalize_units(), delta_k: dk.normalize_units() },
        )
    }
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

pub fn double_cover_obstruction(j: &KnotRecord, k: &KnotRecord) -> TestEntry {
    double_cover_groups(j.double_cover(), k.double_cover())
}

/// The double-cover test on `H_1(Σ_{J,2})` and `H_1(Σ_{K,2})`.
pub fn double_cover_groups(hj: &AbelianGroup, hk: &AbelianGroup) -> TestEntry {
    let (Some(dj), Some(dk)) = (hj.order(), hk.order()) else {
        return TestEntry::new(TestKind::Double, Verdict::Inconclusive).note("infinite first homology");
    };
    let det_witness = |failure| Witness::Determinant { det_j: dj.to_string(), det_k: dk.to_string(), failure };
    if !(&dj % &dk).is_zero() {
        return TestEntry::obstructed(TestKind::Double, det_witness(DeterminantFailure::NotDivisible));
    }
    if !is_square(&(&dj / &dk)) {
        return TestEntry::obstructed(TestKind::Double, det_witness(DeterminantFailure::QuotientNotSquare));
    }
    let (pj, pk) = match (zmodules::primary_decomposition(hj), zmodules::primary_decomposition(hk)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return TestEntry::new(TestKind::Double, Verdict::Inconclusive).note(e.to_string());
        }
    };
    let mut primes: Vec<u64> = pj.keys().chain(pk.keys()).copied().collect();
    primes.sort();
    primes.dedup();
    for prime in primes {
        let jp = pj.get(&prime).cloned().unwrap_or_default();
        let kp = pk.get(&prime).cloned().unwrap_or_default();
        let types = zmodules::embedding_cokernel_types(&jp, &kp);
        if !types.iter().any(zmodules::square_extension_exists) {
            return TestEntry::obstructed(
                TestKind::Double,
                Witness::PrimaryParts { prime, j_part: jp, k_part: kp, cokernel_types: types.into_iter().collect() },
            );
        }
    }
    TestEntry::new(TestKind::Double, Verdict::NotObstructed)
}

/// Minimal polynomial of `e^{iπ n/d}` at the points with rational `2cos(πx)`.
fn special_zeta(n: i64, d: i64) -> Option<LaurentPoly> {
    Some(match (n, d) {
        (1, 3) | (5, 3) => LaurentPoly::int(&[1, -1, 1]),
        (2, 3) | (4, 3) => LaurentPoly::int(&[1, 1, 1]),
        (1, 2) | (3, 2) => LaurentPoly::int(&[1, 0, 1]),
        (1, 1) => LaurentPoly::int(&[1, 1]),
        _ => return None,
    })
}

/// `(deg, η, σ)` at a special point, from the `ζ`-primary elementary divisors.
pub fn exact_triple(v: &SeifertMatrix, n: i64, d: i64) -> Option<(usize, usize, i64)> {
    let zeta = special_zeta(n, d)?;
    let divisors = seifert::zeta_elementary_divisors(v, &zeta).ok()?;
    let deg = divisors.iter().map(|(i, c)| i * c).sum();
    let eta = divisors.values().sum();
    let sn = seifert::signature_nullity_exact(v, n, d)?;
    debug_assert_eq!(sn.eta, eta);
    Some((deg, eta, sn.sigma))
}

struct PointValues {
    x: f64,
    exact_x: Option<(i64, i64)>,
    j: (usize, usize, i64),
    k: (usize, usize, i64),
}

impl PointValues {
    fn violation(&self) -> Option<u8> {
        let (dj, ej, sj) = self.j;
        let (dk, ek, sk) = self.k;
        let ddeg = dj as i64 - dk as i64;
        let deta = ej as i64 - ek as i64;
        if ddeg < deta {
            Some(1)
        } else if deta < (sj - sk).abs() {
            Some(2)
        } else {
            None
        }
    }
}

fn values_at(j: &KnotRecord, k: &KnotRecord, x: f64) -> PointValues {
    let exact_x = seifert::special_point(x);
    let pair = exact_x.and_then(|(n, d)| Some((exact_triple(&j.seifert, n, d)?, exact_triple(&k.seifert, n, d)?)));
    match pair {
        Some((tj, tk)) => PointValues { x, exact_x, j: tj, k: tk },
        None => PointValues { x, exact_x, j: j.profile().at(x), k: k.profile().at(x) },
    }
}

pub fn signature_obstruction(j: &KnotRecord, k: &KnotRecord) -> TestEntry {
    let (pj, pk) = (j.profile(), k.profile());
    let mut xs: Vec<f64> = pj.jumps.iter().chain(&pk.jumps).map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < crate::laurent::CIRCLE_TOL);
    let mut bounds = vec![0.0];
    bounds.extend(&xs);
    bounds.push(2.0);
    let mut samples = Vec::new();
    for w in bounds.windows(2) {
        samples.push(0.5 * (w[0] + w[1]));
        if w[1] < 2.0 {
            samples.push(w[1]);
        }
    }
    let reliable = pj.reliable && pk.reliable;
    for x in samples {
        let v = values_at(j, k, x);
        if let Some(inequality) = v.violation() {
            let entry = TestEntry::obstructed(
                TestKind::Signature,
                Witness::Signature {
                    x: v.x,
                    exact_x: v.exact_x,
                    deg_j: v.j.0,
                    deg_k: v.k.0,
                    eta_j: v.j.1,
                    eta_k: v.k.1,
                    sigma_j: v.j.2,
                    sigma_k: v.k.2,
                    inequality,
                },
            );
            if v.exact_x.is_some() || reliable {
                return entry;
            }
            return TestEntry::new(TestKind::Signature, Verdict::Inconclusive)
                .note(format!("numeric violation at x = {x} near the eigenvalue threshold"));
        }
    }
    if reliable {
        TestEntry::new(TestKind::Signature, Verdict::NotObstructed)
    } else {
        TestEntry::new(TestKind::Signature, Verdict::Inconclusive).note("numeric signatures near the zero threshold")
    }
}

/// Verdict from two twisted polynomials: `Δ_K ∤ Δ_J` obstructs only when applicable.
pub fn metabelian_verdict(
    r: u64,
    p: u64,
    delta_j: &LaurentPoly,
    delta_k: &LaurentPoly,
    applicable: bool,
) -> TestEntry {
    let divides = delta_k.divides(delta_j).unwrap_or(false);
    let w = Witness::TwistedDivisibility { r, p, delta_j: delta_j.normalize_units(), delta_k: delta_k.normalize_units() };
    match (divides, applicable) {
        (true, _) => TestEntry::new(TestKind::Metabelian, Verdict::NotObstructed),
        (false, true) => TestEntry::obstructed(TestKind::Metabelian, w),
        (false, false) => TestEntry {
            test: TestKind::Metabelian,
            verdict: Verdict::Inconclusive,
            witness: Some(w),
            notes: vec!["Δ_K^{r,p} does not divide Δ_J^{r,p}, but applicability was not asserted".into()],
        },
    }
}

pub fn metabelian_comparison(j: &KnotRecord, k: &KnotRecord, opts: &MetabelianOptions) -> TestEntry {
    let inconclusive = |s: String| TestEntry::new(TestKind::Metabelian, Verdict::Inconclusive).note(s);
    let (Some(pj), Some(pk)) = (j.presentation(), k.presentation()) else {
        return inconclusive("PD codes are required for both knots".into());
    };
    let dj = match twisted::delta_rp(&pj, opts.r, opts.p, opts.cap) {
        Ok(d) => d,
        Err(e) => return inconclusive(format!("{}: {e}", j.name)),
    };
    let dk = match twisted::delta_rp(&pk, opts.r, opts.p, opts.cap) {
        Ok(d) => d,
        Err(e) => return inconclusive(format!("{}: {e}", k.name)),
    };
    let mut e = metabelian_verdict(opts.r, opts.p, &dj, &dk, opts.applicable);
    if opts.applicable {
        e.notes.push("applicability hypothesis asserted by the caller".into());
    }
    e
}

pub fn full_report(j: &KnotRecord, k: &KnotRecord, opts: &ObstructOptions) -> ObstructionReport {
    let mut entries = Vec::new();
    for t in TestKind::ALL {
        if !opts.tests.contains(&t) {
            continue;
        }
        entries.push(match t {
            TestKind::Alexander => alexander_obstruction(j, k),
            TestKind::Double => double_cover_obstruction(j, k),
            TestKind::Signature => signature_obstruction(j, k),
            TestKind::Metabelian => match &opts.metabelian {
                Some(m) => metabelian_comparison(j, k, m),
                None => TestEntry::new(TestKind::Metabelian, Verdict::Inconclusive).note("r and p were not given"),
            },
        });
    }
    ObstructionReport { schema: SCHEMA, j: j.name.clone(), k: k.name.clone(), aggregate: aggregate(&entries), entries }
}

/// Recomputes the invariants behind a witness and checks that it still obstructs.
pub fn verify_witness(j: &KnotRecord, k: &KnotRecord, w: &Witness) -> bool {
    match w {
        Witness::AlexanderDivisibility { delta_j, delta_k } => {
            delta_j.associated(j.alexander())
                && delta_k.associated(k.alexander())
                && !delta_k.divides(delta_j).unwrap_or(true)
        }
        Witness::Determinant { det_j, det_k, failure } => {
            let (dj, dk) = (seifert::determinant(&j.seifert), seifert::determinant(&k.seifert));
            if dj.to_string() != *det_j || dk.to_string() != *det_k {
                return false;
            }
            match failure {
                DeterminantFailure::NotDivisible => dk.is_zero() || !(&dj % &dk).is_zero(),
                DeterminantFailure::QuotientNotSquare => {
                    !dk.is_zero() && (&dj % &dk).is_zero() && !is_square(&(&dj / &dk))
                }
            }
        }
        Witness::PrimaryParts { prime, j_part, k_part, cokernel_types } => {
            let part = |g: &AbelianGroup| {
                zmodules::primary_decomposition(g).ok().map(|m| m.get(prime).cloned().unwrap_or_default())
            };
            let hj = seifert::double_cover_homology(&j.seifert);
            let hk = seifert::double_cover_homology(&k.seifert);
            part(&hj).as_ref() == Some(j_part)
                && part(&hk).as_ref() == Some(k_part)
                && zmodules::embedding_cokernel_types(j_part, k_part).into_iter().collect::<Vec<_>>() == *cokernel_types
                && !cokernel_types.iter().any(zmodules::square_extension_exists)
        }
        Witness::Signature { x, exact_x, deg_j, deg_k, eta_j, eta_k, sigma_j, sigma_k, inequality } => {
            let (tj, tk) = match exact_x {
                Some((n, d)) => match (exact_triple(&j.seifert, *n, *d), exact_triple(&k.seifert, *n, *d)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return false,
                },
                None => (
                    seifert::signature_profile(&j.seifert).at(*x),
                    seifert::signature_profile(&k.seifert).at(*x),
                ),
            };
            let v = PointValues { x: *x, exact_x: *exact_x, j: tj, k: tk };
            tj == (*deg_j, *eta_j, *sigma_j) && tk == (*deg_k, *eta_k, *sigma_k) && v.violation() == Some(*inequality)
        }
        Witness::TwistedDivisibility { r, p, delta_j, delta_k } => {
            let (Some(pj), Some(pk)) = (j.presentation(), k.presentation()) else { return false };
            match (
                twisted::delta_rp(&pj, *r, *p, usize::MAX),
                twisted::delta_rp(&pk, *r, *p, usize::MAX),
            ) {
                (Ok(a), Ok(b)) => {
                    a.associated(delta_j) && b.associated(delta_k) && !delta_k.divides(delta_j).unwrap_or(true)
                }
                _ => false,
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub pairs: usize,
    /// Ordered pairs obstructed by each test.
    pub obstructed_by: BTreeMap<TestKind, usize>,
    pub aggregate: BTreeMap<Verdict, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub knots: Vec<String>,
    pub options: ObstructOptions,
    pub reports: Vec<ObstructionReport>,
    pub summary: ScanSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// `full_report` over all ordered pairs of distinct records, sorted by name.
pub fn scan_table(records: &[KnotRecord], opts: &ObstructOptions, jobs: usize) -> ScanReport {
    let mut order: Vec<&KnotRecord> = records.iter().collect();
    order.sort_by(|a, b| a.name.cmp(&b.name));
    let pairs: Vec<(&KnotRecord, &KnotRecord)> = order
        .iter()
        .flat_map(|a| order.iter().filter(move |b| a.name != b.name).map(move |b| (*a, *b)))
        .collect();
    let run = || pairs.par_iter().map(|(a, b)| full_report(a, b, opts)).collect::<Vec<_>>();
    let mut reports = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => pairs.iter().map(|(a, b)| full_report(a, b, opts)).collect(),
    };
    reports.sort_by(|a, b| (&a.j, &a.k).cmp(&(&b.j, &b.k)));
    let mut summary = ScanSummary { pairs: reports.len(), ..Default::default() };
    for r in &reports {
        *summary.aggregate.entry(r.aggregate).or_default() += 1;
        for e in r.entries.iter().filter(|e| e.verdict == Verdict::Obstructed) {
            *summary.obstructed_by.entry(e.test).or_default() += 1;
        }
    }
    let mut warnings = Vec::new();
    if order.len() < 2 {
        warnings.push(format!("{} knot(s) in the table, no pairs to compare", order.len()));
    }
    ScanReport {
        schema: SCHEMA,
        knots: order.iter().map(|r| r.name.clone()).collect(),
        options: opts.clone(),
        reports,
        summary,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(name: &str, rows: &[Vec<i64>], pd: Option<&str>) -> KnotRecord {
        KnotRecord::new(name, SeifertMatrix::from_rows(rows).unwrap(), pd.map(|s| s.parse().unwrap())).unwrap()
    }

    fn trefoil() -> KnotRecord {
        rec("3_1", &[vec![-1, 0], vec![-1, -1]], Some("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]"))
    }

    fn unknot() -> KnotRecord {
        KnotRecord::new("0_1", SeifertMatrix::unknot(), None).unwrap()
    }

    fn figure_eight() -> KnotRecord {
        rec("4_1", &[vec![1, 0], vec![-1, -1]], Some("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]"))
    }

    #[test]
    fn record_rejects_mismatched_pd() {
        let bad = KnotRecord::new(
            "bad",
            SeifertMatrix::from_rows(&[vec![-1, 0], vec![-1, -1]]).unwrap(),
            Some("[[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]".parse().unwrap()),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn alexander_examples() {
        let (u, t) = (unknot(), trefoil());
        let e = alexander_obstruction(&u, &t);
        assert_eq!(e.verdict, Verdict::Obstructed);
        assert!(verify_witness(&u, &t, e.witness.as_ref().unwrap()));
        assert_eq!(alexander_obstruction(&t, &t).verdict, Verdict::NotObstructed);
        assert_eq!(alexander_obstruction(&t, &u).verdict, Verdict::NotObstructed);
    }

    #[test]
    fn double_cover_examples() {
        let (t, f) = (trefoil(), figure_eight());
        assert_eq!(double_cover_obstruction(&t, &t).verdict, Verdict::NotObstructed);
        let e = double_cover_obstruction(&t, &f);
        assert_eq!(e.verdict, Verdict::Obstructed);
        assert!(matches!(e.witness, Some(Witness::Determinant { failure: DeterminantFailure::NotDivisible, .. })));
        assert!(verify_witness(&t, &f, e.witness.as_ref().unwrap()));
        let tt = t.connected_sum(&t, "3_1#3_1");
        let e = double_cover_obstruction(&tt, &unknot());
        assert!(matches!(e.witness, Some(Witness::Determinant { failure: DeterminantFailure::NotDivisible, .. })) || e.verdict != Verdict::Obstructed);
    }

    #[test]
    fn signature_examples() {
        let (t, u) = (trefoil(), unknot());
        assert_eq!(signature_obstruction(&t, &t).verdict, Verdict::NotObstructed);
        let e = signature_obstruction(&u, &t);
        assert_eq!(e.verdict, Verdict::Obstructed);
        assert!(verify_witness(&u, &t, e.witness.as_ref().unwrap()));
        let mirror = t.concordance_inverse("-3_1");
        let e = signature_obstruction(&mirror, &t);
        assert_eq!(e.verdict, Verdict::Obstructed);
        match e.witness.as_ref().unwrap() {
            Witness::Signature { inequality, .. } => assert_eq!(*inequality, 2),
            w => panic!("{w:?}"),
        }
        assert!(verify_witness(&mirror, &t, e.witness.as_ref().unwrap()));
    }

    #[test]
    fn exact_triple_trefoil() {
        assert_eq!(exact_triple(&trefoil().seifert, 1, 3), Some((1, 1, -1)));
        assert_eq!(exact_triple(&trefoil().seifert, 1, 1), Some((0, 0, -2)));
    }

    #[test]
    fn metabelian_policy() {
        let a = LaurentPoly::int(&[5]);
        let b = LaurentPoly::int(&[7]);
        assert_eq!(metabelian_verdict(2, 3, &a, &b, true).verdict, Verdict::Obstructed);
        assert_eq!(metabelian_verdict(2, 3, &a, &b, false).verdict, Verdict::Inconclusive);
        assert_eq!(metabelian_verdict(2, 3, &a, &a, false).verdict, Verdict::NotObstructed);
        let no_pd = KnotRecord::new("x", trefoil().seifert.clone(), None).unwrap();
        let e = metabelian_comparison(&no_pd, &trefoil(), &MetabelianOptions::new(2, 3));
        assert_eq!(e.verdict, Verdict::Inconclusive);
        let e = metabelian_comparison(&trefoil(), &trefoil(), &MetabelianOptions::new(2, 3));
        assert_eq!(e.verdict, Verdict::NotObstructed);
    }

    #[test]
    fn aggregate_rules() {
        let e = |v| TestEntry::new(TestKind::Alexander, v);
        assert_eq!(aggregate(&[]), Verdict::NotObstructed);
        assert_eq!(aggregate(&[e(Verdict::NotObstructed), e(Verdict::Inconclusive)]), Verdict::Inconclusive);
        assert_eq!(aggregate(&[e(Verdict::Inconclusive), e(Verdict::Obstructed)]), Verdict::Obstructed);
    }

    #[test]
    fn report_round_trips() {
        let (t, u) = (trefoil(), unknot());
        let r = full_report(&u, &t, &ObstructOptions::default());
        assert_eq!(r.schema, 1);
        assert_eq!(r.aggregate, Verdict::Obstructed);
        let s = serde_json::to_string(&r).unwrap();
        let back: ObstructionReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        for e in &back.entries {
            if let Some(w) = e.witness.as_ref().filter(|_| e.verdict == Verdict::Obstructed) {
                assert!(verify_witness(&u, &t, w));
            }
        }
    }

    fn odd_group() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(prop::sample::select(vec![3i64, 5, 7, 9, 15, 25, 27, 45]), 0..3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn square_extensions_are_not_obstructed(k in odd_group(), g in odd_group()) {
            let hk = AbelianGroup::from_cyclic_orders(&k);
            let gg = AbelianGroup::from_cyclic_orders(&g);
            let hj = hk.direct_sum(&gg).direct_sum(&gg);
            prop_assert_eq!(double_cover_groups(&hj, &hk).verdict, Verdict::NotObstructed);
        }

        #[test]
        fn double_cover_is_reflexive(k in odd_group()) {
            let h = AbelianGroup::from_cyclic_orders(&k);
            prop_assert_eq!(double_cover_groups(&h, &h).verdict, Verdict::NotObstructed);
        }
    }

    #[test]
    fn toy_primary_parts() {
        // Z/p^2 -> Z/p + Z/p^5 has cokernel Z/p + Z/p^3, which is an extension of Z/p^2 by itself.
        let hj = AbelianGroup::from_cyclic_orders(&[3, 243]);
        let hk = AbelianGroup::from_cyclic_orders(&[9]);
        assert_eq!(double_cover_groups(&hj, &hk).verdict, Verdict::NotObstructed);
        let e = double_cover_groups(&AbelianGroup::from_cyclic_orders(&[3, 3, 25]), &AbelianGroup::from_cyclic_orders(&[9]));
        assert!(matches!(e.witness, Some(Witness::PrimaryParts { prime: 3, .. })));
    }

    #[test]
    fn scan_counts_and_empty() {
        let recs = vec![trefoil(), figure_eight(), unknot()];
        let s = scan_table(&recs, &ObstructOptions::default(), 2);
        assert_eq!(s.reports.len(), 6);
        assert_eq!(s.knots, vec!["0_1", "3_1", "4_1"]);
        let empty = scan_table(&[], &ObstructOptions::default(), 1);
        assert!(empty.reports.is_empty());
        let one = scan_table(&recs[..1], &ObstructOptions::default(), 1);
        assert!(one.reports.is_empty() && !one.warnings.is_empty());
    }
}

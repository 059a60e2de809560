//! Code descriptors, the flattening operator, distance bounds, the
//! superregularity-based MDS constructions and their certificates.
//!
//! The flattening of a generator matrix stacks, for each row in turn, the
//! coefficient vectors of every monomial `z^a` with `|a|` at most the row
//! degree, in canonical monomial order (see [`crate::multipoly`]). Monomials
//! missing from a row contribute zero rows, so the flattened shape only
//! depends on the row degrees. For a single row of degree `d` in `m`
//! variables that gives `C(d + m, m)` rows, and recursing on the last
//! variable reproduces the block structure
//! `[flatten(G_0); flatten(G_1); ...]` where `G = sum_i G_i z_m^i`.
//!
//! Certificates record which theorem's row-degree profile the generator
//! matches and evaluates each hypothesis. `NotCertified` makes no claim
//! about the code either way.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FiniteField};
use crate::multipoly::{monomials_up_to, Degree, Exponents, PolyMatrix, Polynomial, RawPolynomial};
use crate::subsets::binomial;
use crate::superreg::{
    canonical_cauchy, is_superregular_par, random_superregular, ConstMatrix, SuperregularityReport,
};

/// Number of exponent vectors in `m` variables with total degree at most
/// `nu`, i.e. `C(nu + m, m)`.
pub fn support_count(nu: u32, m: u32) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameter("number of variables must be at least 1".into()));
    }
    binomial(nu as u64 + m as u64, m as u64).ok_or(Error::Overflow("support count"))
}

/// Checks `C(nu + m, m) = sum_{i=0}^{nu} C(nu - i + m - 1, m - 1)`, the
/// decomposition of the support by the exponent of the last variable.
pub fn support_count_identity_check(nu: u32, m: u32) -> Result<bool> {
    if m < 2 {
        return Err(Error::InvalidParameter("identity needs m >= 2".into()));
    }
    let whole = support_count(nu, m)?;
    let mut slices = 0u64;
    for i in 0..=nu {
        slices = slices
            .checked_add(support_count(nu - i, m - 1)?)
            .ok_or(Error::Overflow("support count"))?;
    }
    Ok(whole == slices)
}

/// Upper bound on the free distance of a rate `k/n` code of degree `delta`
/// in `m` variables:
/// `n C(floor(delta/k) + m, m) - k (floor(delta/k) + 1) + delta + 1`.
pub fn singleton_bound(m: u32, k: u32, n: u32, delta: u32) -> Result<u64> {
    if m == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("m, k and n must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let nu = delta / k;
    let slab = support_count(nu, m)?;
    let overflow = Error::Overflow("singleton bound");
    let positive = (n as u64)
        .checked_mul(slab)
        .and_then(|v| v.checked_add(delta as u64 + 1))
        .ok_or(overflow)?;
    // n * C(nu + m, m) >= k * (nu + 1) since n >= k and C(nu + m, m) >= nu + 1
    Ok(positive - k as u64 * (nu as u64 + 1))
}

/// `n C(nu + m, m)`: the weight of a full-support row of degree `nu`, and the
/// free distance guaranteed by the staircase theorem when its minimal row has
/// degree `nu`.
pub fn staircase_distance_bound(m: u32, n: u32, nu: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    (n as u64)
        .checked_mul(support_count(nu, m)?)
        .ok_or(Error::Overflow("staircase bound"))
}

/// A flattened generator: the constant matrix plus, for each of its rows, the
/// source row and monomial it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenedMatrix {
    pub matrix: ConstMatrix,
    pub row_index: Vec<(usize, Exponents)>,
}

#[derive(Serialize)]
struct FlattenedJson<'a> {
    field: &'a FiniteField,
    entries: Vec<Vec<u32>>,
    row_index: &'a [(usize, Exponents)],
}

impl Serialize for FlattenedMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FlattenedJson {
            field: self.matrix.field(),
            entries: self.matrix.to_codes(),
            row_index: &self.row_index,
        }
        .serialize(s)
    }
}

/// Flattens a polynomial matrix row by row. A zero row in an otherwise
/// nonzero matrix contributes a single all-zero row (monomial `1`), which
/// keeps it visible to the superregularity check.
pub fn phi_flatten(g: &PolyMatrix) -> Result<FlattenedMatrix> {
    if g.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let m = g.num_vars();
    let mut entries = Vec::new();
    let mut row_index = Vec::new();
    for (r, degree) in g.row_degrees().into_iter().enumerate() {
        let monomials = match degree {
            Degree::Finite(d) => monomials_up_to(d, m),
            Degree::NegInf => vec![Exponents::zero(m)],
        };
        for alpha in monomials {
            entries.extend(g.row(r).iter().map(|p| p.coeff(&alpha)));
            row_index.push((r, alpha));
        }
    }
    let matrix = ConstMatrix::new(g.field(), row_index.len(), g.cols(), entries)?;
    Ok(FlattenedMatrix { matrix, row_index })
}

/// Inverse of [`phi_flatten`] for a row plan of `(rows in block, degree)`
/// pairs: each polynomial row of degree `d` consumes the next `C(d + m, m)`
/// rows of `s` as the coefficients of its canonical monomials.
pub fn phi_lift(s: &ConstMatrix, m: u32, row_plan: &[(usize, u32)]) -> Result<PolyMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("number of variables must be at least 1".into()));
    }
    let mut expected = 0u64;
    for &(rows, degree) in row_plan {
        expected += rows as u64 * support_count(degree, m)?;
    }
    if expected != s.rows() as u64 {
        return Err(Error::DimensionMismatch(format!(
            "row plan needs {expected} rows, matrix has {}",
            s.rows()
        )));
    }
    let field = s.field();
    let m = m as usize;
    let mut next = 0;
    let mut out_rows = Vec::new();
    for &(rows, degree) in row_plan {
        let monomials = monomials_up_to(degree, m);
        for _ in 0..rows {
            let mut row = vec![Polynomial::zero(field, m); s.cols()];
            for alpha in &monomials {
                for (j, entry) in row.iter_mut().enumerate() {
                    entry.add_term(alpha.clone(), s.get(next, j));
                }
                next += 1;
            }
            out_rows.push(row);
        }
    }
    PolyMatrix::from_rows(field, m, out_rows)
}

/// A code given by a generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeDescriptor {
    pub field: FiniteField,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub generator: PolyMatrix,
    pub declared_row_degrees: Vec<Degree>,
}

/// Wire form of a code. `row_degrees` is optional on input and checked
/// against the generator when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FiniteField,
    pub m: u32,
    pub k: u32,
    pub n: u32,
    pub generator: Vec<Vec<RawPolynomial>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_degrees: Option<Vec<Degree>>,
}

impl CodeDescriptor {
    pub fn new(generator: PolyMatrix) -> Result<Self> {
        let m = generator.num_vars();
        if m == 0 {
            return Err(Error::InvalidParameter("number of variables must be at least 1".into()));
        }
        Ok(CodeDescriptor {
            field: generator.field().clone(),
            m: m as u32,
            k: generator.rows() as u32,
            n: generator.cols() as u32,
            declared_row_degrees: generator.row_degrees(),
            generator,
        })
    }

    /// External degree of the stored generator.
    pub fn degree(&self) -> u32 {
        self.generator.external_degree()
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            field: self.field.clone(),
            m: self.m,
            k: self.k,
            n: self.n,
            generator: self.generator.to_raw(),
            row_degrees: Some(self.declared_row_degrees.clone()),
        }
    }
}

impl TryFrom<CodeJson> for CodeDescriptor {
    type Error = Error;

    fn try_from(json: CodeJson) -> Result<Self> {
        let generator = PolyMatrix::from_raw(&json.field, json.m as usize, json.generator)?;
        let code = CodeDescriptor::new(generator)?;
        if (code.k, code.n) != (json.k, json.n) {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but generator is {}x{}",
                json.k, json.n, code.k, code.n
            )));
        }
        if let Some(declared) = json.row_degrees {
            if declared != code.declared_row_degrees {
                return Err(Error::InvalidParameter(format!(
                    "declared row degrees {declared:?} do not match generator {:?}",
                    code.declared_row_degrees
                )));
            }
        }
        Ok(code)
    }
}

impl Serialize for CodeDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CodeDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        CodeJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// Theorem whose row-degree profile a generator matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremTag {
    /// One row of degree `delta`, `n >= delta + 1`.
    #[serde(rename = "RATE_1N")]
    Rate1N,
    /// `k - 1` rows of degree `nu + 1` and one of degree `nu`,
    /// `n >= k (nu + 2) - 1`.
    StaircaseKn,
    /// Rows of degree `nu_0 >= ... >= nu_{l-1} > nu_l` with a unique
    /// minimal row.
    MdStaircaseBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CertifiedMds,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Hypothesis {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Hypothesis {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsCertificate {
    pub theorem: Option<TheoremTag>,
    pub hypotheses: Vec<Hypothesis>,
    pub verdict: Verdict,
    /// Free distance established by the matched theorem, present whenever
    /// its hypotheses all hold.
    pub certified_distance: Option<u64>,
}

impl MdsCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedMds
    }
}

impl fmt::Display for MdsCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem: {:?}", self.theorem)?;
        for h in &self.hypotheses {
            writeln!(f, "  [{}] {}: {}", if h.pass { "pass" } else { "FAIL" }, h.name, h.detail)?;
        }
        write!(f, "verdict: {:?}", self.verdict)?;
        if let Some(d) = self.certified_distance {
            write!(f, " (distance {d})")?;
        }
        Ok(())
    }
}

fn superregularity_hypothesis(report: &SuperregularityReport) -> Hypothesis {
    let detail = match &report.failing_minor {
        None => format!("all {} minors of the flattened matrix are nonzero", report.minors_checked),
        Some(minor) => format!(
            "minor rows {:?} cols {:?} vanishes (after {} minors)",
            minor.rows, minor.cols, report.minors_checked
        ),
    };
    Hypothesis::new("phi_superregular", report.verdict, detail)
}

/// Re-derives the MDS certificate of a code from its generator.
pub fn certify(code: &CodeDescriptor) -> MdsCertificate {
    certify_with(code, 1)
}

/// [`certify`] with the superregularity scan spread over `workers` threads.
pub fn certify_with(code: &CodeDescriptor, workers: usize) -> MdsCertificate {
    let g = &code.generator;
    let (m, k, n) = (code.m, code.k, code.n);
    let degrees = g.row_degrees();
    let not_certified = |hypotheses| MdsCertificate {
        theorem: None,
        hypotheses,
        verdict: Verdict::NotCertified,
        certified_distance: None,
    };

    let finite: Option<Vec<u32>> = degrees.iter().map(|d| d.finite()).collect();
    let Some(finite) = finite else {
        return not_certified(vec![Hypothesis::new(
            "row_degree_profile",
            false,
            format!("generator has zero rows {:?}", g.zero_rows()),
        )]);
    };
    let mut sorted = finite.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let nu_min = *sorted.last().expect("k >= 1");

    let (theorem, profile) = if k == 1 {
        (TheoremTag::Rate1N, format!("single row of degree {nu_min}"))
    } else if sorted[sorted.len() - 2] > nu_min {
        if sorted[..sorted.len() - 1].iter().all(|&d| d == nu_min + 1) {
            (
                TheoremTag::StaircaseKn,
                format!("{} rows of degree {} and one of degree {nu_min}", k - 1, nu_min + 1),
            )
        } else {
            (
                TheoremTag::MdStaircaseBound,
                format!("row degrees {sorted:?} with a unique minimal row"),
            )
        }
    } else {
        return not_certified(vec![Hypothesis::new(
            "row_degree_profile",
            false,
            format!("row degrees {finite:?}: minimal degree is not attained by a single row"),
        )]);
    };

    let mut hypotheses = vec![Hypothesis::new("row_degree_profile", true, profile)];
    let length_needed: u64 = match theorem {
        TheoremTag::Rate1N => nu_min as u64 + 1,
        TheoremTag::StaircaseKn => k as u64 * (nu_min as u64 + 2) - 1,
        TheoremTag::MdStaircaseBound => {
            sorted[..sorted.len() - 1].iter().map(|&d| d as u64 + 1).sum::<u64>() + nu_min as u64 + 1
        }
    };
    let length_name = match theorem {
        TheoremTag::Rate1N => "n >= delta + 1",
        TheoremTag::StaircaseKn => "n >= k(nu + 2) - 1",
        TheoremTag::MdStaircaseBound => "n >= sum(nu_i + 1) + nu_min + 1",
    };
    hypotheses.push(Hypothesis::new(
        length_name,
        n as u64 >= length_needed,
        format!("n = {n}, required {length_needed}"),
    ));

    let report = match phi_flatten(g) {
        Ok(flat) => is_superregular_par(&flat.matrix, workers),
        Err(e) => {
            hypotheses.push(Hypothesis::new("phi_superregular", false, e.to_string()));
            return MdsCertificate {
                theorem: Some(theorem),
                hypotheses,
                verdict: Verdict::NotCertified,
                certified_distance: None,
            };
        }
    };
    hypotheses.push(superregularity_hypothesis(&report));
    let theorem_holds = hypotheses.iter().all(|h| h.pass);

    let distance = staircase_distance_bound(m, n, nu_min).ok();
    if theorem == TheoremTag::MdStaircaseBound {
        // The theorem fixes the distance; it is MDS only when that distance
        // meets the bound for the external degree (the bound is monotone in
        // the degree and the code's degree is at most the external one).
        let bound = singleton_bound(m, k, n, g.external_degree()).ok();
        let attains = distance.is_some() && distance == bound;
        hypotheses.push(Hypothesis::new(
            "attains_singleton_bound",
            attains,
            format!("distance {distance:?} vs bound {bound:?} for the external degree"),
        ));
    }
    let all_pass = hypotheses.iter().all(|h| h.pass);
    MdsCertificate {
        theorem: Some(theorem),
        hypotheses,
        verdict: if all_pass { Verdict::CertifiedMds } else { Verdict::NotCertified },
        certified_distance: if theorem_holds { distance } else { None },
    }
}

/// Where the superregular flattened matrix of a construction comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuperregularSource {
    /// Cauchy matrix with parameters `xs = [0, r)`, `ys = [r, r + s)`.
    Cauchy,
    /// Seeded random search, see [`random_superregular`].
    Random { seed: u64, max_tries: u64 },
    /// A caller-supplied matrix; it is checked, never trusted.
    Explicit(ConstMatrix),
}

fn superregular_from(
    field: &FiniteField,
    rows: usize,
    cols: usize,
    source: &SuperregularSource,
    workers: usize,
) -> Result<ConstMatrix> {
    match source {
        SuperregularSource::Cauchy => canonical_cauchy(field, rows, cols),
        SuperregularSource::Random { seed, max_tries } => {
            random_superregular(field, rows, cols, *seed, *max_tries)
        }
        SuperregularSource::Explicit(a) => {
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
            if (a.rows(), a.cols()) != (rows, cols) {
                return Err(Error::DimensionMismatch(format!(
                    "explicit matrix is {}x{}, construction needs {rows}x{cols}",
                    a.rows(),
                    a.cols()
                )));
            }
            let report = is_superregular_par(a, workers);
            match report.failing_minor {
                None => Ok(a.clone()),
                Some(minor) => Err(Error::NotSuperregular {
                    rows: minor.rows,
                    cols: minor.cols,
                }),
            }
        }
    }
}

/// Rate `1/n`, degree `delta` MDS code in `m` variables: lifts a superregular
/// `C(delta + m, m) x n` matrix to a single generator row.
pub fn construct_mds_rate_1n(
    field: &FiniteField,
    m: u32,
    n: u32,
    delta: u32,
    source: &SuperregularSource,
) -> Result<(CodeDescriptor, MdsCertificate)> {
    construct(field, m, n, &[(1, delta)], source, 1)
}

/// Rate `k/n` MDS code of degree `k nu + k - 1`: `k - 1` rows of degree
/// `nu + 1` followed by one row of degree `nu`.
pub fn construct_mds_staircase(
    field: &FiniteField,
    m: u32,
    k: u32,
    n: u32,
    nu: u32,
    source: &SuperregularSource,
) -> Result<(CodeDescriptor, MdsCertificate)> {
    construct_mds_staircase_with(field, m, k, n, nu, source, 1)
}

pub fn construct_mds_staircase_with(
    field: &FiniteField,
    m: u32,
    k: u32,
    n: u32,
    nu: u32,
    source: &SuperregularSource,
    workers: usize,
) -> Result<(CodeDescriptor, MdsCertificate)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let plan = staircase_plan(k, nu);
    construct(field, m, n, &plan, source, workers)
}

/// Row plan `[(k - 1, nu + 1), (1, nu)]` of the staircase family.
pub fn staircase_plan(k: u32, nu: u32) -> Vec<(usize, u32)> {
    let mut plan = Vec::new();
    if k > 1 {
        plan.push((k as usize - 1, nu + 1));
    }
    plan.push((1, nu));
    plan
}

/// Number of rows of the flattened staircase generator.
pub fn staircase_flatten_rows(m: u32, k: u32, nu: u32) -> Result<u64> {
    Ok((k as u64 - 1) * support_count(nu + 1, m)? + support_count(nu, m)?)
}

fn construct(
    field: &FiniteField,
    m: u32,
    n: u32,
    plan: &[(usize, u32)],
    source: &SuperregularSource,
    workers: usize,
) -> Result<(CodeDescriptor, MdsCertificate)> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be at least 1".into()));
    }
    let k: u64 = plan.iter().map(|&(r, _)| r as u64).sum();
    let delta: u64 = plan.iter().map(|&(r, d)| r as u64 * d as u64).sum();
    if (n as u64) < delta + k {
        return Err(Error::InvalidParameter(format!(
            "n = {n} is below delta + k = {}",
            delta + k
        )));
    }
    let mut rows = 0u64;
    for &(r, d) in plan {
        rows += r as u64 * support_count(d, m)?;
    }
    let flat = superregular_from(field, rows as usize, n as usize, source, workers)?;
    let generator = phi_lift(&flat, m, plan)?;
    let code = CodeDescriptor::new(generator)?;
    let certificate = certify_with(&code, workers);
    Ok((code, certificate))
}

/// Low-weight codeword from the proof of the Singleton-type bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonWitness {
    pub message: PolyMatrix,
    pub codeword: PolyMatrix,
    pub weight: usize,
}

#[derive(Serialize)]
struct WitnessJson {
    message: Vec<RawPolynomial>,
    codeword: Vec<RawPolynomial>,
    weight: usize,
}

impl Serialize for SingletonWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessJson {
            message: self.message.to_raw().remove(0),
            codeword: self.codeword.to_raw().remove(0),
            weight: self.weight,
        }
        .serialize(s)
    }
}

/// Builds the codeword used to prove the bound: take the rows of minimal
/// degree (there are `k - t + 1` of them), and find a nonzero constant
/// combination of them whose constant-term vector vanishes on the first
/// `k - t` coordinates. All other rows get coefficient zero.
pub fn singleton_witness(code: &CodeDescriptor) -> Result<SingletonWitness> {
    let g = &code.generator;
    let full_rank = g.rows() <= g.cols()
        && g.full_size_minors()?.iter().any(|(_, minor)| !minor.is_zero());
    if !full_rank {
        return Err(Error::RankDeficient);
    }
    let degrees = g.row_degrees();
    let nu_min = *degrees.iter().min().expect("k >= 1");
    let minimal: Vec<usize> = (0..g.rows()).filter(|&i| degrees[i] == nu_min).collect();
    let field = g.field();
    let m = g.num_vars();

    let zero_constraints = minimal.len() - 1;
    let combination: Vec<FieldElement> = if zero_constraints == 0 {
        vec![FieldElement::ONE]
    } else {
        // u~ * B = 0 with B the constant terms of the minimal rows on the
        // first k - t columns; B^T has more columns than rows.
        let constants: Vec<FieldElement> = (0..zero_constraints)
            .flat_map(|j| minimal.iter().map(move |&i| g.get(i, j).constant_term()))
            .collect();
        let bt = ConstMatrix::new(field, zero_constraints, minimal.len(), constants)?;
        bt.nullspace()
            .into_iter()
            .next()
            .expect("more unknowns than equations")
    };

    let mut message = vec![Polynomial::zero(field, m); g.rows()];
    for (&row, &c) in minimal.iter().zip(&combination) {
        message[row] = Polynomial::constant(field, m, c);
    }
    let message = PolyMatrix::from_rows(field, m, vec![message])?;
    let codeword = message.mul(g)?;
    let weight = codeword.weight();
    Ok(SingletonWitness {
        message,
        codeword,
        weight,
    })
}

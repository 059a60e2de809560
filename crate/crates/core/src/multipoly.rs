//! Sparse multivariate polynomials over GF(q) and matrices of them.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponents`], whose ordering is
//! lexicographic on the *reversed* exponent tuple `(a_m, ..., a_1)`. That is
//! the same order in which the flattening operator in [`crate::codes`] emits
//! coefficient rows, so iteration order and serialization order coincide
//! with the flattened row order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FiniteField};
use crate::subsets::Combinations;

/// Exponent vector `(a_1, ..., a_m)` of a monomial `z_1^a_1 ... z_m^a_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponents(exps)
    }

    pub fn zero(m: usize) -> Self {
        Exponents(vec![0; m])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise sum, i.e. the exponent of the product monomial.
    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponents) -> Option<Exponents> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponents)
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in `m` variables with total degree at most `degree`,
/// in canonical order. Recursing on the last variable gives exactly the
/// ascending order of `(a_m, ..., a_1)`.
pub fn monomials_up_to(degree: u32, m: usize) -> Vec<Exponents> {
    fn rec(vars: usize, budget: u32) -> Vec<Vec<u32>> {
        if vars == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for last in 0..=budget {
            for mut head in rec(vars - 1, budget - last) {
                head.push(last);
                out.push(head);
            }
        }
        out
    }
    rec(m, degree).into_iter().map(Exponents).collect()
}

/// Total degree of a polynomial; the zero polynomial has degree `NegInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

// `null` on the wire for the zero polynomial's degree.
impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<u32>::deserialize(d)?.map_or(Degree::NegInf, Degree::Finite))
    }
}

/// A polynomial in `m` variables over a finite field, stored sparsely with
/// no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FiniteField,
    m: usize,
    terms: BTreeMap<Exponents, FieldElement>,
}

/// Wire form of a polynomial: `[[[a_1, ..., a_m], coeff_code], ...]`.
pub type RawPolynomial = Vec<(Vec<u32>, u64)>;

impl Polynomial {
    pub fn zero(field: &FiniteField, m: usize) -> Self {
        Polynomial {
            field: field.clone(),
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FiniteField, m: usize, c: FieldElement) -> Self {
        Self::monomial(field, Exponents::zero(m), c)
    }

    pub fn one(field: &FiniteField, m: usize) -> Self {
        Self::constant(field, m, FieldElement::ONE)
    }

    pub fn monomial(field: &FiniteField, exps: Exponents, c: FieldElement) -> Self {
        let m = exps.num_vars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Polynomial {
            field: field.clone(),
            m,
            terms,
        }
    }

    /// The variable `z_{index+1}`.
    pub fn variable(field: &FiniteField, m: usize, index: usize) -> Self {
        let mut exps = vec![0; m];
        exps[index] = 1;
        Self::monomial(field, Exponents(exps), FieldElement::ONE)
    }

    /// Builds a polynomial from `(exponents, coefficient code)` pairs,
    /// validating exponent length and coefficient range. Repeated
    /// exponents are summed.
    pub fn from_terms<I>(field: &FiniteField, m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        let mut out = Polynomial::zero(field, m);
        for (exps, code) in terms {
            if exps.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector {exps:?} has {} entries, expected {m}",
                    exps.len()
                )));
            }
            let c = field.element(code)?;
            out.add_term(Exponents(exps), c);
        }
        Ok(out)
    }

    pub fn to_raw(&self) -> RawPolynomial {
        self.terms
            .iter()
            .map(|(e, c)| (e.0.clone(), c.code() as u64))
            .collect()
    }

    /// Adds `c * z^exps` in place.
    pub fn add_term(&mut self, exps: Exponents, c: FieldElement) {
        debug_assert_eq!(exps.num_vars(), self.m);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let s = self.field.add(*existing, c);
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, FieldElement)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coeff(&self, exps: &Exponents) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Exponents::total_degree)
            .max()
            .map_or(Degree::NegInf, Degree::Finite)
    }

    /// Constant term.
    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Exponents::zero(self.m))
    }

    /// The nonzero constant if the polynomial is one.
    pub fn as_nonzero_constant(&self) -> Option<FieldElement> {
        match self.terms.iter().next() {
            Some((e, c)) if self.terms.len() == 1 && e.total_degree() == 0 => Some(*c),
            _ => None,
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field || self.m != other.m {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), self.field.neg(*c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            m: self.m,
            terms,
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.field, self.m);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), self.field.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn scale(&self, c: FieldElement) -> Result<Polynomial> {
        if !self.field.contains(c) {
            return Err(Error::ElementOutOfRange {
                code: c.code() as u64,
                q: self.field.order() as u64,
            });
        }
        Ok(self.scale_unchecked(c))
    }

    pub(crate) fn scale_unchecked(&self, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.field, self.m);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), self.field.mul(*a, c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            m: self.m,
            terms,
        }
    }

    /// Multiplies by the monomial `z^shift`.
    pub fn shift(&self, shift: &Exponents) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.add(shift), *c)).collect();
        Polynomial {
            field: self.field.clone(),
            m: self.m,
            terms,
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(v, &a)| {
                    if a == 1 {
                        format!("z{}", v + 1)
                    } else {
                        format!("z{}^{a}", v + 1)
                    }
                })
                .collect();
            match (c.code(), vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                _ => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter())
    }
}

/// A `rows x cols` matrix of polynomials sharing one field and variable count.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    field: FiniteField,
    m: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(field: &FiniteField, m: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            field: field.clone(),
            m,
            rows,
            cols,
            entries: vec![Polynomial::zero(field, m); rows * cols],
        }
    }

    pub fn identity(field: &FiniteField, m: usize, size: usize) -> Self {
        let mut out = Self::zeros(field, m, size, size);
        for i in 0..size {
            out.entries[i * size + i] = Polynomial::one(field, m);
        }
        out
    }

    /// Builds a matrix from nested rows; every row must have the same
    /// length and every entry must live over `field` in `m` variables.
    pub fn from_rows(field: &FiniteField, m: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch("matrix must be non-empty".into()));
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for p in row {
                if p.field != *field || p.m != m {
                    return Err(Error::FieldMismatch);
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            field: field.clone(),
            m,
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn from_raw(field: &FiniteField, m: usize, raw: Vec<Vec<RawPolynomial>>) -> Result<Self> {
        let rows = raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|p| Polynomial::from_terms(field, m, p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, m, rows)
    }

    pub fn to_raw(&self) -> Vec<Vec<RawPolynomial>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Polynomial::to_raw).collect())
            .collect()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) -> Result<()> {
        if p.field != self.field || p.m != self.m {
            return Err(Error::FieldMismatch);
        }
        self.entries[i * self.cols + j] = p;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// The submatrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        PolyMatrix {
            field: self.field.clone(),
            m: self.m,
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// The submatrix made of the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &c in cols {
                entries.push(self.get(i, c).clone());
            }
        }
        PolyMatrix {
            field: self.field.clone(),
            m: self.m,
            rows: self.rows,
            cols: cols.len(),
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field || self.m != other.m {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(&self.field, self.m, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(&self.field, self.m);
                for l in 0..self.cols {
                    let (a, b) = (self.get(i, l), other.get(l, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add_unchecked(&a.mul_unchecked(b));
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != other.field || self.m != other.m {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add_unchecked(b))
            .collect();
        Ok(PolyMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, c: FieldElement) -> Result<PolyMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.scale(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { entries, ..self.clone() })
    }

    pub fn shift(&self, shift: &Exponents) -> PolyMatrix {
        let entries = self.entries.iter().map(|p| p.shift(shift)).collect();
        PolyMatrix { entries, ..self.clone() }
    }

    /// Total number of nonzero coefficients across all entries.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(Polynomial::weight).sum()
    }

    /// Maximum entry degree of each row.
    pub fn row_degrees(&self) -> Vec<Degree> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(Polynomial::total_degree)
                    .max()
                    .unwrap_or(Degree::NegInf)
            })
            .collect()
    }

    /// Indices of rows whose entries are all zero.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().all(Polynomial::is_zero))
            .collect()
    }

    /// Sum of the row degrees. Zero rows have no degree; they are left out
    /// of the sum and reported through a warning.
    pub fn external_degree(&self) -> u32 {
        let zero = self.zero_rows();
        if !zero.is_empty() {
            log::warn!("external degree: rows {zero:?} are zero and were skipped");
        }
        self.row_degrees().into_iter().filter_map(Degree::finite).sum()
    }

    /// All `C(n, k)` full-size minors paired with their column subsets in
    /// lexicographic order.
    pub fn full_size_minors(&self) -> Result<Vec<(Vec<usize>, Polynomial)>> {
        let (k, n) = (self.rows, self.cols);
        if k > n {
            return Err(Error::DimensionMismatch(format!(
                "full-size minors need rows <= cols, got {k}x{n}"
            )));
        }
        if n > 64 {
            return Err(Error::InvalidParameter("at most 64 columns supported".into()));
        }
        let mut memo = HashMap::new();
        Ok(Combinations::new(n, k)
            .map(|cols| {
                let mask = cols.iter().fold(0u64, |m, &c| m | 1 << c);
                let det = self.laplace(0, mask, &mut memo);
                (cols, det)
            })
            .collect())
    }

    /// Maximal total degree among full-size minors.
    pub fn internal_degree(&self) -> Result<Degree> {
        Ok(self
            .full_size_minors()?
            .iter()
            .map(|(_, p)| p.total_degree())
            .max()
            .unwrap_or(Degree::NegInf))
    }

    pub fn determinant(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.full_size_minors()?.pop().expect("one minor").1)
    }

    /// Unimodular iff the determinant is a nonzero constant.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.determinant()?.as_nonzero_constant().is_some())
    }

    /// Cofactor expansion of rows `start..` against the columns in `mask`,
    /// memoized on the column mask (the starting row is implied by its size).
    fn laplace(&self, start: usize, mask: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(&self.field, self.m);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let mut acc = Polynomial::zero(&self.field, self.m);
        let mut position = 0;
        let mut rest = mask;
        while rest != 0 {
            let col = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let entry = self.get(start, col);
            if !entry.is_zero() {
                let minor = self.laplace(start + 1, mask & !(1 << col), memo);
                if !minor.is_zero() {
                    let term = entry.mul_unchecked(&minor);
                    acc = if position % 2 == 0 {
                        acc.add_unchecked(&term)
                    } else {
                        acc.add_unchecked(&term.neg())
                    };
                }
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

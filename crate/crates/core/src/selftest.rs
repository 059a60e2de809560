//! Property suites over exhaustive or seeded random instances, shared by the
//! `selftest` command and the acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{singleton_bound, singleton_witness, support_count_identity_check, CodeDescriptor};
use crate::error::{Error, Result};
use crate::galois::{make_field, FieldElement, FiniteField};
use crate::multipoly::{monomials_up_to, PolyMatrix, Polynomial};
use crate::subsets::Combinations;
use crate::superreg::{is_superregular, random_superregular, ConstMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            cases: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

/// Field orders up to `max_q`, each with its canonical modulus.
fn fields_up_to(max_q: u32) -> Vec<FiniteField> {
    let mut out = Vec::new();
    for q in 2..=max_q as u64 {
        let (mut p, mut e) = (2u64, 0u32);
        while q % p != 0 {
            p += 1;
        }
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest == 1 {
            out.push(make_field(p, e).expect("prime power"));
        }
    }
    out
}

/// Visits every vector of `len` codes in `0..base`, first coordinate slowest.
fn for_each_vector(len: usize, base: u32, mut visit: impl FnMut(&[u32])) {
    let mut v = vec![0u32; len];
    loop {
        visit(&v);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i] + 1 < base {
                v[i] += 1;
                break;
            }
            v[i] = 0;
        }
    }
}

/// `wt(uA) >= s - wt(u) + 1` for every superregular `r x s` matrix `A` and
/// nonzero `u`. Scaling rows and columns by nonzero constants preserves both
/// superregularity and the inequality, so only matrices whose first row and
/// first column are all ones are enumerated.
pub fn weight_lemma_suite(max_q: u32, max_r: usize, max_s: usize) -> SuiteReport {
    let mut report = SuiteReport::new("weight_lemma");
    for f in fields_up_to(max_q) {
        let q = f.order();
        for r in 1..=max_r {
            for s in 1..=max_s {
                let free = (r - 1) * (s - 1);
                for_each_vector(free, q - 1, |codes| {
                    let mut it = codes.iter();
                    let mut entries = Vec::with_capacity(r * s);
                    for i in 0..r {
                        for j in 0..s {
                            let e = if i == 0 || j == 0 { 1 } else { it.next().expect("free entry") + 1 };
                            entries.push(FieldElement(e));
                        }
                    }
                    let a = ConstMatrix::new(&f, r, s, entries).expect("shape");
                    if !is_superregular(&a).verdict {
                        return;
                    }
                    for_each_vector(r, q, |u| {
                        let wt_u = u.iter().filter(|&&c| c != 0).count();
                        if wt_u == 0 {
                            return;
                        }
                        let u: Vec<FieldElement> = u.iter().map(|&c| FieldElement(c)).collect();
                        let image = a.left_mul(&u).expect("length");
                        let wt = image.iter().filter(|c| !c.is_zero()).count();
                        report.check(wt + wt_u > s, || {
                            format!("GF({q}) A = {:?}, u = {:?}: weight {wt}", a.to_codes(), u)
                        });
                    });
                });
            }
        }
    }
    report
}

/// Support-count slice identity for `nu <= max_nu`, `2 <= m <= max_m`.
pub fn support_identity_suite(max_nu: u32, max_m: u32) -> SuiteReport {
    let mut report = SuiteReport::new("support_count_identity");
    for nu in 0..=max_nu {
        for m in 2..=max_m {
            let ok = support_count_identity_check(nu, m).unwrap_or(false);
            report.check(ok, || format!("nu = {nu}, m = {m}"));
        }
    }
    report
}

/// Superregularity of every submatrix and of a random row permutation, for
/// `count` seeded random superregular matrices.
pub fn closure_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("superregular_closure");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = [(7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4), (17, 1)];
    for _ in 0..count {
        let (p, e) = orders[rng.random_range(0..orders.len())];
        let f = make_field(p, e)?;
        let r = rng.random_range(1..=3);
        let s = rng.random_range(1..=4);
        let a = random_superregular(&f, r, s, rng.random(), 1_000_000)?;
        for rows in (1..=r).flat_map(|k| Combinations::new(r, k)) {
            for cols in (1..=s).flat_map(|k| Combinations::new(s, k)) {
                let sub = a.submatrix(&rows, &cols);
                report.check(is_superregular(&sub).verdict, || {
                    format!("{:?} rows {rows:?} cols {cols:?}", a.to_codes())
                });
            }
        }
        let mut perm: Vec<usize> = (0..r).collect();
        perm.shuffle(&mut rng);
        let permuted = a.submatrix(&perm, &(0..s).collect::<Vec<_>>());
        report.check(is_superregular(&permuted).verdict, || {
            format!("{:?} row order {perm:?}", a.to_codes())
        });
    }
    Ok(report)
}

fn random_generator(rng: &mut ChaCha8Rng) -> Result<PolyMatrix> {
    let fields = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)];
    let (p, e) = fields[rng.random_range(0..fields.len())];
    let f = make_field(p, e)?;
    let q = f.order();
    let m = rng.random_range(1..=2usize);
    let k = rng.random_range(1..=3usize);
    let n = rng.random_range(k..=5);
    let rows = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let cap = rng.random_range(0..=2);
                    let mut poly = Polynomial::zero(&f, m);
                    for alpha in monomials_up_to(cap, m) {
                        poly.add_term(alpha, FieldElement(rng.random_range(0..q)));
                    }
                    poly
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(&f, m, rows)
}

/// Singleton-bound witness weight against the bound on `count` seeded random
/// full-rank generators (rank-deficient draws are redrawn).
pub fn witness_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("singleton_witness");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while report.cases < count as u64 {
        let g = random_generator(&mut rng)?;
        let code = CodeDescriptor::new(g)?;
        let witness = match singleton_witness(&code) {
            Ok(w) => w,
            Err(Error::RankDeficient) => continue,
            Err(e) => return Err(e),
        };
        let bound = singleton_bound(code.m, code.k, code.n, code.degree())?;
        report.check(witness.weight > 0 && witness.weight as u64 <= bound, || {
            format!(
                "weight {} vs bound {bound} for {}",
                witness.weight,
                serde_json::to_string(&code).unwrap_or_default()
            )
        });
    }
    Ok(report)
}

/// Every suite at its full size.
pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        weight_lemma_suite(7, 3, 4),
        support_identity_suite(8, 5),
        closure_suite(200, seed)?,
        witness_suite(500, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_list() {
        let orders: Vec<u32> = fields_up_to(9).iter().map(|f| f.order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn vector_enumeration() {
        let mut seen = Vec::new();
        for_each_vector(2, 3, |v| seen.push(v.to_vec()));
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[1], vec![0, 1]);
        let mut empty = 0;
        for_each_vector(0, 5, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn small_suites_pass() {
        let lemma = weight_lemma_suite(5, 2, 3);
        assert!(lemma.passed(), "{lemma:?}");
        assert!(support_identity_suite(4, 3).passed());
        assert!(closure_suite(10, 1).unwrap().passed());
        let witness = witness_suite(25, 1).unwrap();
        assert_eq!(witness.cases, 25);
        assert!(witness.passed(), "{witness:?}");
    }

    #[test]
    fn lemma_detects_non_superregular_use() {
        // the inequality genuinely needs superregularity: [[1,1],[1,1]] with
        // u = (1,-1) gives wt(uA) = 0 < 2 - 2 + 1
        let f = make_field(3, 1).unwrap();
        let a = ConstMatrix::from_codes(&f, &[[1u64, 1], [1, 1]]).unwrap();
        let image = a.left_mul(&[FieldElement(1), FieldElement(2)]).unwrap();
        assert!(image.iter().all(|c| c.is_zero()));
        assert!(!is_superregular(&a).verdict);
    }

    #[test]
    fn suites_are_seed_deterministic() {
        assert_eq!(witness_suite(20, 9).unwrap(), witness_suite(20, 9).unwrap());
    }
}

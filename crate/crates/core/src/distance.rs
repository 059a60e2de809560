//! Encoding and a bounded brute-force estimate of the free distance.
//!
//! [`free_distance_estimate`] enumerates every nonzero message whose entries
//! have total degree at most a cap `D`. Two symmetries that preserve codeword
//! weight are factored out: nonzero scalars (the first nonzero message
//! coefficient is fixed to 1) and monomial shifts (every variable must have
//! exponent 0 somewhere in the message support). The result is an upper bound
//! on the free distance, exact whenever some minimum-weight codeword has a
//! message within the cap.
//!
//! Message coordinates are `(monomial, component)` pairs ordered by monomial
//! first. The search space is split into work units, first by the position
//! of the leading coordinate and then by the values of the next few, and
//! the split does not depend on the worker count. Units are reduced in order,
//! so reports are identical for any number of workers.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{FieldElement, FiniteField};
use crate::multipoly::{monomials_up_to, Exponents, PolyMatrix, Polynomial, RawPolynomial};

/// Codeword `u G` of a `1 x k` message.
pub fn encode(u: &PolyMatrix, g: &PolyMatrix) -> Result<PolyMatrix> {
    if u.rows() != 1 {
        return Err(Error::DimensionMismatch(format!("message must have one row, got {}", u.rows())));
    }
    u.mul(g)
}

/// Weight of each generator row viewed as a codeword, with 0-based row indices.
pub fn codeword_weight_profile(g: &PolyMatrix) -> Vec<(usize, usize)> {
    (0..g.rows())
        .map(|i| (i, g.row(i).iter().map(Polynomial::weight).sum()))
        .collect()
}

/// Cap used when none is given: `delta + 1` for a single row, 1 otherwise.
pub fn default_cap(g: &PolyMatrix) -> u32 {
    if g.rows() == 1 {
        g.external_degree() + 1
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub min_weight_found: usize,
    pub cap: u32,
    /// Normalized messages whose codeword weight was compared.
    pub messages_tried: u64,
    pub witness_message: PolyMatrix,
    pub below_bound: bool,
}

#[derive(Serialize)]
struct ReportJson {
    min_weight: usize,
    cap: u32,
    messages_tried: u64,
    witness: Vec<RawPolynomial>,
    below_bound: bool,
}

impl Serialize for DistanceReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportJson {
            min_weight: self.min_weight_found,
            cap: self.cap,
            messages_tried: self.messages_tried,
            witness: self.witness_message.to_raw().remove(0),
            below_bound: self.below_bound,
        }
        .serialize(s)
    }
}

/// Single-threaded [`free_distance_estimate_par`].
pub fn free_distance_estimate(g: &PolyMatrix, cap: u32, stop_below: Option<u64>) -> Result<DistanceReport> {
    free_distance_estimate_par(g, cap, stop_below, 1)
}

/// Minimum codeword weight over normalized messages of total degree at most
/// `cap`. With `stop_below`, the search ends at the first codeword (in
/// enumeration order) lighter than it and `below_bound` is set.
pub fn free_distance_estimate_par(
    g: &PolyMatrix,
    cap: u32,
    stop_below: Option<u64>,
    workers: usize,
) -> Result<DistanceReport> {
    let layout = Layout::new(g, cap)?;
    let units = layout.units();
    let results: Vec<Mutex<Option<UnitResult>>> = units.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let first_hit = AtomicUsize::new(usize::MAX);

    let work = || loop {
        let idx = next.fetch_add(1, Ordering::Relaxed);
        if idx >= units.len() || idx > first_hit.load(Ordering::Relaxed) {
            break;
        }
        let cancelled = || first_hit.load(Ordering::Relaxed) < idx;
        if let Some(res) = layout.run_unit(&units[idx], stop_below, cancelled) {
            if res.hit {
                first_hit.fetch_min(idx, Ordering::Relaxed);
            }
            *results[idx].lock().expect("unit result lock") = Some(res);
        }
    };
    let workers = workers.clamp(1, units.len());
    if workers == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    }

    let mut tried = 0u64;
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut below_bound = false;
    for slot in results {
        let res = slot
            .into_inner()
            .expect("unit result lock")
            .expect("units before the first hit always complete");
        tried += res.tried;
        if let Some((w, msg)) = res.best {
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, msg));
            }
        }
        if res.hit {
            below_bound = true;
            break;
        }
    }
    let (min_weight_found, values) = best.expect("the first unit evaluates the message 1");
    log::debug!("distance estimate: {tried} messages, minimum {min_weight_found}");
    Ok(DistanceReport {
        min_weight_found,
        cap,
        messages_tried: tried,
        witness_message: layout.message(&values)?,
        below_bound,
    })
}

struct Unit {
    leading: usize,
    prefix: Vec<u32>,
}

struct UnitResult {
    tried: u64,
    best: Option<(usize, Vec<u32>)>,
    hit: bool,
}

struct Layout {
    field: FiniteField,
    m: usize,
    k: usize,
    coords: Vec<(Exponents, usize)>,
    /// Nonzero entries of `z^beta G_i`, flattened over (monomial, column).
    contributions: Vec<Vec<(usize, FieldElement)>>,
    /// Variables in which the coordinate's monomial has exponent 0.
    unshifted: Vec<Vec<usize>>,
    positions: usize,
}

// Work units per stratum are capped so small fields still split finely and
// large fields do not explode the unit list.
const MAX_UNITS_PER_STRATUM: u64 = 4096;
const CANCEL_POLL: u64 = 1 << 12;

impl Layout {
    fn new(g: &PolyMatrix, cap: u32) -> Result<Self> {
        let (m, k, n) = (g.num_vars(), g.rows(), g.cols());
        if k == 0 {
            return Err(Error::InvalidParameter("generator has no rows".into()));
        }
        let field = g.field().clone();
        let q = field.order() as u64;
        let monomials = monomials_up_to(cap, m);
        let coords: Vec<(Exponents, usize)> = monomials
            .iter()
            .flat_map(|b| (0..k).map(move |i| (b.clone(), i)))
            .collect();
        let len = u32::try_from(coords.len()).map_err(|_| Error::Overflow("message space"))?;
        q.checked_pow(len).ok_or(Error::Overflow("message space"))?;

        let mut index: HashMap<Exponents, usize> = HashMap::new();
        let mut contributions = Vec::with_capacity(coords.len());
        for (beta, i) in &coords {
            let mut list = Vec::new();
            for (j, p) in g.row(*i).iter().enumerate() {
                for (alpha, c) in p.terms() {
                    let next = index.len();
                    let mono = *index.entry(alpha.add(beta)).or_insert(next);
                    list.push((mono * n + j, c));
                }
            }
            contributions.push(list);
        }
        let unshifted = coords
            .iter()
            .map(|(beta, _)| (0..m).filter(|&v| beta.as_slice()[v] == 0).collect())
            .collect();
        Ok(Layout {
            field,
            m,
            k,
            coords,
            contributions,
            unshifted,
            positions: index.len() * n,
        })
    }

    fn units(&self) -> Vec<Unit> {
        let q = self.field.order() as u64;
        let n = self.coords.len();
        let mut fixed = 0usize;
        while fixed < 2 && q.pow(fixed as u32 + 1) <= MAX_UNITS_PER_STRATUM {
            fixed += 1;
        }
        let mut units = Vec::new();
        for leading in 0..n {
            let width = fixed.min(n - 1 - leading);
            let count = q.pow(width as u32);
            for mut code in 0..count {
                let mut prefix = vec![0u32; width];
                for slot in prefix.iter_mut().rev() {
                    *slot = (code % q) as u32;
                    code /= q;
                }
                units.push(Unit { leading, prefix });
            }
        }
        units
    }

    fn message(&self, values: &[u32]) -> Result<PolyMatrix> {
        let mut row = vec![Polynomial::zero(&self.field, self.m); self.k];
        for ((beta, i), &c) in self.coords.iter().zip(values) {
            row[*i].add_term(beta.clone(), FieldElement(c));
        }
        PolyMatrix::from_rows(&self.field, self.m, vec![row])
    }

    /// Enumerates one unit with an odometer (last coordinate fastest),
    /// updating the codeword and its weight incrementally. Returns `None`
    /// when cancelled.
    fn run_unit(&self, unit: &Unit, stop_below: Option<u64>, cancelled: impl Fn() -> bool) -> Option<UnitResult> {
        let mut state = State {
            layout: self,
            values: vec![0; self.coords.len()],
            codeword: vec![FieldElement::ZERO; self.positions],
            weight: 0,
            unshifted_count: vec![0; self.m],
        };
        state.set(unit.leading, 1);
        for (offset, &c) in unit.prefix.iter().enumerate() {
            state.set(unit.leading + 1 + offset, c);
        }
        let free_start = unit.leading + 1 + unit.prefix.len();
        let top = self.field.order() - 1;

        let mut result = UnitResult {
            tried: 0,
            best: None,
            hit: false,
        };
        let mut steps = 0u64;
        loop {
            if state.unshifted_count.iter().all(|&c| c > 0) {
                result.tried += 1;
                if result.best.as_ref().is_none_or(|(b, _)| state.weight < *b) {
                    result.best = Some((state.weight, state.values.clone()));
                }
                if stop_below.is_some_and(|s| (state.weight as u64) < s) {
                    result.best = Some((state.weight, state.values.clone()));
                    result.hit = true;
                    return Some(result);
                }
            }
            steps += 1;
            if steps.is_multiple_of(CANCEL_POLL) && cancelled() {
                return None;
            }
            let mut t = self.coords.len();
            loop {
                if t == free_start {
                    return Some(result);
                }
                t -= 1;
                let v = state.values[t];
                if v < top {
                    state.set(t, v + 1);
                    break;
                }
                state.set(t, 0);
            }
        }
    }
}

struct State<'a> {
    layout: &'a Layout,
    values: Vec<u32>,
    codeword: Vec<FieldElement>,
    weight: usize,
    unshifted_count: Vec<usize>,
}

impl State<'_> {
    fn set(&mut self, t: usize, code: u32) {
        let f = &self.layout.field;
        let old = self.values[t];
        if old == code {
            return;
        }
        let delta = f.sub(FieldElement(code), FieldElement(old));
        for &(pos, c) in &self.layout.contributions[t] {
            let before = self.codeword[pos];
            let after = f.add(before, f.mul(delta, c));
            self.codeword[pos] = after;
            match (before.is_zero(), after.is_zero()) {
                (true, false) => self.weight += 1,
                (false, true) => self.weight -= 1,
                _ => {}
            }
        }
        if (old == 0) != (code == 0) {
            for &v in &self.layout.unshifted[t] {
                if code == 0 {
                    self.unshifted_count[v] -= 1;
                } else {
                    self.unshifted_count[v] += 1;
                }
            }
        }
        self.values[t] = code;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use proptest::prelude::*;

    fn gf(p: u64) -> FiniteField {
        make_field(p, 1).unwrap()
    }

    fn poly(field: &FiniteField, m: usize, terms: &[(&[u32], u64)]) -> Polynomial {
        Polynomial::from_terms(field, m, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    fn row(field: &FiniteField, m: usize, entries: Vec<Polynomial>) -> PolyMatrix {
        PolyMatrix::from_rows(field, m, vec![entries]).unwrap()
    }

    fn gf5_code() -> PolyMatrix {
        let f = gf(5);
        row(&f, 1, vec![poly(&f, 1, &[(&[0], 1), (&[1], 1)]), poly(&f, 1, &[(&[0], 1), (&[1], 2)])])
    }

    fn gf7_code() -> PolyMatrix {
        let f = gf(7);
        let entries = [[2, 3, 6], [5, 2, 3], [4, 5, 2]]
            .iter()
            .map(|c| poly(&f, 2, &[(&[0, 0], c[0]), (&[1, 0], c[1]), (&[0, 1], c[2])]))
            .collect();
        row(&f, 2, entries)
    }

    // Every nonzero message, no normalization, product via PolyMatrix::mul.
    fn naive_min_weight(g: &PolyMatrix, cap: u32) -> usize {
        let f = g.field();
        let (m, k) = (g.num_vars(), g.rows());
        let mut monomials = Vec::new();
        if m == 1 {
            monomials.extend((0..=cap).map(|a| vec![a]));
        } else {
            for a in 0..=cap {
                for b in 0..=cap - a {
                    monomials.push(vec![a, b]);
                }
            }
        }
        let slots = monomials.len() * k;
        let q = f.order() as u64;
        let mut best = usize::MAX;
        for mut code in 1..q.pow(slots as u32) {
            let mut entries = vec![Polynomial::zero(f, m); k];
            for s in 0..slots {
                let c = code % q;
                code /= q;
                entries[s % k].add_term(Exponents::new(monomials[s / k].clone()), FieldElement(c as u32));
            }
            let u = PolyMatrix::from_rows(f, m, vec![entries]).unwrap();
            best = best.min(u.mul(g).unwrap().weight());
        }
        best
    }

    #[test]
    fn encode_examples() {
        let f2 = gf(2);
        let g = row(&f2, 2, vec![Polynomial::one(&f2, 2), Polynomial::variable(&f2, 2, 0)]);
        let u = row(&f2, 2, vec![Polynomial::variable(&f2, 2, 1)]);
        let v = encode(&u, &g).unwrap();
        assert_eq!(v.row(0), &[poly(&f2, 2, &[(&[0, 1], 1)]), poly(&f2, 2, &[(&[1, 1], 1)])][..]);
        assert_eq!(v.weight(), 2);
        assert!(encode(&PolyMatrix::zeros(&f2, 2, 1, 1), &g).unwrap().is_zero());

        let f5 = gf(5);
        let u = row(&f5, 1, vec![poly(&f5, 1, &[(&[0], 1), (&[1], 1)])]);
        let v = encode(&u, &gf5_code()).unwrap();
        assert_eq!(v.get(0, 0), &poly(&f5, 1, &[(&[0], 1), (&[1], 2), (&[2], 1)]));
        assert_eq!(v.get(0, 1), &poly(&f5, 1, &[(&[0], 1), (&[1], 3), (&[2], 2)]));
        assert_eq!(v.weight(), 6);

        assert!(encode(&g, &gf5_code()).is_err());
        assert!(encode(&PolyMatrix::zeros(&f2, 2, 2, 1), &g).is_err());
    }

    #[test]
    fn weight_profiles() {
        assert_eq!(codeword_weight_profile(&gf7_code()), vec![(0, 9)]);
        let f = gf(2);
        let g = PolyMatrix::from_rows(
            &f,
            2,
            vec![
                vec![Polynomial::one(&f, 2), Polynomial::variable(&f, 2, 0), Polynomial::zero(&f, 2)],
                vec![Polynomial::one(&f, 2), Polynomial::variable(&f, 2, 1), Polynomial::one(&f, 2)],
            ],
        )
        .unwrap();
        assert_eq!(codeword_weight_profile(&g), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn gf5_distance() {
        let r = free_distance_estimate(&gf5_code(), 3, None).unwrap();
        assert_eq!(r.min_weight_found, 4);
        assert!(!r.below_bound);
        assert_eq!(r.witness_message.get(0, 0), &Polynomial::one(&gf(5), 1));
        assert_eq!(naive_min_weight(&gf5_code(), 3), 4);
        let r = free_distance_estimate(&gf5_code(), 3, Some(4)).unwrap();
        assert!(!r.below_bound);
    }

    #[test]
    fn gf7_distance() {
        let r = free_distance_estimate(&gf7_code(), 2, Some(9)).unwrap();
        assert_eq!(r.min_weight_found, 9);
        assert!(!r.below_bound);
        assert_eq!(encode(&r.witness_message, &gf7_code()).unwrap().weight(), 9);
        let full = free_distance_estimate(&gf7_code(), 2, None).unwrap();
        assert_eq!(full.min_weight_found, 9);
        // 7^6 coefficient vectors in total; normalization keeps far fewer
        assert!(full.messages_tried < 7u64.pow(6) / 6);
    }

    #[test]
    fn cap_zero_is_scalar() {
        let r = free_distance_estimate(&gf7_code(), 0, None).unwrap();
        assert_eq!(r.min_weight_found, 9);
        assert_eq!(r.messages_tried, 1);
    }

    #[test]
    fn stop_below_one_never_triggers() {
        for (g, cap) in [(gf5_code(), 3), (gf7_code(), 1)] {
            assert!(!free_distance_estimate(&g, cap, Some(1)).unwrap().below_bound);
        }
    }

    #[test]
    fn early_stop_reports_witness() {
        let r = free_distance_estimate(&gf5_code(), 2, Some(6)).unwrap();
        assert!(r.below_bound);
        assert!(r.min_weight_found < 6);
        assert_eq!(encode(&r.witness_message, &gf5_code()).unwrap().weight(), r.min_weight_found);
    }

    #[test]
    fn rank_deficient_generator_reaches_zero() {
        let f = gf(3);
        let one = Polynomial::one(&f, 1);
        let g = PolyMatrix::from_rows(&f, 1, vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]).unwrap();
        let r = free_distance_estimate(&g, 1, Some(1)).unwrap();
        assert!(r.below_bound);
        assert_eq!(r.min_weight_found, 0);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let f = gf(3);
        let g = PolyMatrix::from_rows(
            &f,
            1,
            vec![
                vec![poly(&f, 1, &[(&[0], 1), (&[1], 1)]), poly(&f, 1, &[(&[0], 2)]), poly(&f, 1, &[(&[1], 1)])],
                vec![poly(&f, 1, &[(&[0], 1)]), poly(&f, 1, &[(&[0], 1), (&[1], 2)]), poly(&f, 1, &[(&[0], 1)])],
            ],
        )
        .unwrap();
        for (g, cap) in [(gf5_code(), 3), (gf7_code(), 2), (g, 2)] {
            for stop in [None, Some(5), Some(100)] {
                let one = free_distance_estimate_par(&g, cap, stop, 1).unwrap();
                for workers in [2, 4, 7] {
                    assert_eq!(free_distance_estimate_par(&g, cap, stop, workers).unwrap(), one);
                }
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let r = free_distance_estimate(&gf5_code(), 0, None).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"min_weight":4,"cap":0,"messages_tried":1,"witness":[[[[0],1]]],"below_bound":false}"#
        );
    }

    #[test]
    fn default_caps() {
        assert_eq!(default_cap(&gf7_code()), 2);
        let f = gf(3);
        assert_eq!(default_cap(&PolyMatrix::identity(&f, 1, 2)), 1);
    }

    #[test]
    fn two_row_oracle_agreement() {
        let f = gf(2);
        let g = PolyMatrix::from_rows(
            &f,
            1,
            vec![
                vec![poly(&f, 1, &[(&[0], 1), (&[1], 1)]), poly(&f, 1, &[(&[1], 1)]), poly(&f, 1, &[(&[0], 1)])],
                vec![poly(&f, 1, &[(&[0], 1)]), poly(&f, 1, &[(&[0], 1), (&[1], 1)]), poly(&f, 1, &[(&[1], 1)])],
            ],
        )
        .unwrap();
        for cap in 0..=2 {
            assert_eq!(free_distance_estimate(&g, cap, None).unwrap().min_weight_found, naive_min_weight(&g, cap));
        }
    }

    fn arb_row() -> impl Strategy<Value = PolyMatrix> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..=2, 1usize..=3)
            .prop_flat_map(|(q, m, n)| {
                let monos = monomials_up_to(1, m).len();
                (Just((q, m, n)), proptest::collection::vec(0..q, monos * n))
            })
            .prop_map(|((q, m, _), coeffs)| {
                let f = make_field(q, 1).unwrap();
                let monos = monomials_up_to(1, m);
                let entries = coeffs
                    .chunks(monos.len())
                    .map(|cs| {
                        let mut p = Polynomial::zero(&f, m);
                        for (e, &c) in monos.iter().zip(cs) {
                            p.add_term(e.clone(), FieldElement(c as u32));
                        }
                        p
                    })
                    .collect();
                row(&f, m, entries)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn normalization_is_sound(g in arb_row(), cap in 0u32..=2) {
            prop_assume!(!g.is_zero());
            prop_assume!(g.field().order() < 5 || g.num_vars() == 1 || cap < 2);
            let r = free_distance_estimate(&g, cap, None).unwrap();
            prop_assert_eq!(r.min_weight_found, naive_min_weight(&g, cap));
            prop_assert_eq!(encode(&r.witness_message, &g).unwrap().weight(), r.min_weight_found);
        }

        #[test]
        fn estimate_is_monotone_in_cap(g in arb_row()) {
            prop_assume!(!g.is_zero());
            let mut last = usize::MAX;
            for cap in 0..=2 {
                let w = free_distance_estimate(&g, cap, None).unwrap().min_weight_found;
                prop_assert!(w <= last);
                last = w;
            }
        }

        #[test]
        fn encode_is_linear(g in arb_row(), a in any::<u64>(), b in any::<u64>(), c in 1u32..5) {
            let f = g.field().clone();
            let c = FieldElement(c % f.order());
            let q = f.order() as u64;
            let (lo, hi) = (vec![0; g.num_vars()], vec![1; g.num_vars()]);
            let msg = |seed: u64| {
                let p = poly(&f, g.num_vars(), &[(lo.as_slice(), seed % q), (hi.as_slice(), (seed / q) % q)]);
                row(&f, g.num_vars(), vec![p])
            };
            let (u1, u2) = (msg(a), msg(b));
            let sum = encode(&u1.add(&u2).unwrap(), &g).unwrap();
            prop_assert_eq!(sum, encode(&u1, &g).unwrap().add(&encode(&u2, &g).unwrap()).unwrap());
            let scaled = encode(&u1.scale(c).unwrap(), &g).unwrap();
            prop_assert_eq!(scaled, encode(&u1, &g).unwrap().scale(c).unwrap());
        }
    }
}

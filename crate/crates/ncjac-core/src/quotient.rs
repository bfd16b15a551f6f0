//! Truncated quotient linear algebra: dimensions of `Jac(f)/J^n`.
//!
//! The central identification is
//! `Jac(f)/J^i  ≅  C<x> / (m^i, delta_1 f_{<=i}, ..., delta_d f_{<=i})`,
//! which reduces every dimension count to exact sparse elimination over the
//! word basis of degrees `< i`. The row space of the truncated ideal is the
//! span of all truncations `(w1 * g * w2)_{<n}`; it is computed here as the
//! closure of the generator truncations under left and right multiplication
//! by variables (multiplication commutes with truncation because dropped
//! terms only move up in degree).
//!
//! Pivots follow the deterministic graded-lex order (lowest degree, then
//! lex word), so ranks and reports are reproducible byte for byte.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::calculus::{abelianize, cyclic_derivative, CPoly};
use crate::error::Error;
use crate::poly::{NCPoly, Order};
use crate::rational::Q;
use crate::word::Word;

// ---------------------------------------------------------------------------
// Dimension reports
// ---------------------------------------------------------------------------

/// Verdict on the J-dimension (polynomial growth degree of `dim Jac/J^n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JdimVerdict {
    /// Finite dimensional (Jdim 0) with a Nakayama stabilization
    /// certificate: some `a_{i+1} = a_i` forces `J^i = 0`.
    Zero(usize),
    /// Coranks are eventually constant and positive up to the truncation;
    /// an observation at truncation level, not a proof.
    ConsistentWithOne,
    /// Jdim >= 3 by the order bound: d = 2 with ord(f) >= 4, or d >= 3 with
    /// ord(f) >= 3.
    GE3ByTheorem,
    Unknown,
}

/// The dimension filtration of a (truncated model of a) Jacobi algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimReport {
    /// `dims[i-1] = a_i = dim Jac(f)/J^i` for `i = 1..=N`; always `a_1 = 1`.
    pub dims: Vec<usize>,
    /// `coranks[m] = dim J^m/J^{m+1} = a_{m+1} - a_m` for `m = 0..N-1`,
    /// with `a_0 = 0` so the leading entry is always 1.
    pub coranks: Vec<usize>,
    /// Smallest `i` with `a_{i+1} = a_i`, if observed below the truncation.
    pub stabilized_at: Option<usize>,
    /// Certified total dimension (set iff `stabilized_at` is set).
    pub certified_dim: Option<usize>,
    pub jdim_verdict: JdimVerdict,
    /// Everything above is certified only up to this truncation degree.
    pub certified_to_degree: usize,
}

impl DimReport {
    fn from_dims(dims: Vec<usize>, verdict_order: Option<Order>, d: usize) -> DimReport {
        let n = dims.len();
        let mut coranks = Vec::with_capacity(n);
        let mut prev = 0usize;
        for &a in &dims {
            coranks.push(a - prev);
            prev = a;
        }
        let stabilized_at = (0..n.saturating_sub(1)).find(|&i| dims[i + 1] == dims[i]).map(|i| i + 1);
        let certified_dim = stabilized_at.map(|i| dims[i - 1]);
        let jdim_verdict = if let Some(dim) = certified_dim {
            JdimVerdict::Zero(dim)
        } else {
            match verdict_order {
                Some(Order::Finite(k)) if (d == 2 && k >= 4) || (d >= 3 && k >= 3) => {
                    JdimVerdict::GE3ByTheorem
                }
                _ => {
                    // eventually-constant positive coranks suggest linear growth
                    if n >= 4 && coranks[n - 1] > 0 && coranks[n - 1] == coranks[n - 2] && coranks[n - 2] == coranks[n - 3]
                    {
                        JdimVerdict::ConsistentWithOne
                    } else {
                        JdimVerdict::Unknown
                    }
                }
            }
        };
        DimReport {
            certified_to_degree: n,
            dims,
            coranks,
            stabilized_at,
            certified_dim,
            jdim_verdict,
        }
    }

    /// Corank sequence `c_1, c_2, ...` (dropping the degree-0 layer).
    pub fn higher_coranks(&self) -> &[usize] {
        &self.coranks[1..]
    }

    /// `Crk(f) = c_1`.
    pub fn corank(&self) -> usize {
        self.coranks.get(1).copied().unwrap_or(0)
    }
}

/// Number of words of degree `< n` in `d` letters.
pub fn words_below(d: usize, n: usize) -> usize {
    let mut total = 0usize;
    let mut pw = 1usize;
    for _ in 0..n {
        total += pw;
        pw *= d;
    }
    total
}

/// Soft memory cap from `NCJAC_MAX_MEM` (bytes), as a bound on stored terms.
fn term_limit_from_env() -> Option<usize> {
    std::env::var("NCJAC_MAX_MEM").ok().and_then(|s| s.trim().parse::<usize>().ok()).map(|bytes| {
        // rough estimate: ~96 bytes per stored sparse term
        (bytes / 96).max(1)
    })
}

// ---------------------------------------------------------------------------
// Noncommutative truncated ideal
// ---------------------------------------------------------------------------

/// Echelonized row space of a two-sided ideal, truncated below a degree
/// bound. Rows are monic with pairwise distinct leading words.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    d: usize,
    bound: usize,
    rows: BTreeMap<Word, NCPoly>,
}

impl TruncatedIdeal {
    /// Close the generator truncations under variable multiplication and
    /// echelonize. Generators must have order >= 1.
    pub fn build(d: usize, generators: &[NCPoly], bound: usize) -> Result<TruncatedIdeal, Error> {
        let limit = term_limit_from_env();
        let mut ideal = TruncatedIdeal { d, bound, rows: BTreeMap::new() };
        let mut stored_terms = 0usize;
        let mut queue: VecDeque<NCPoly> = VecDeque::new();
        for g in generators {
            assert_eq!(g.d(), d, "context mismatch");
            if let Order::Finite(0) = g.ord() {
                return Err(Error::BadInput(
                    "ideal generator with a constant term (potential with linear terms?)".into(),
                ));
            }
            queue.push_back(g.truncate_below(bound));
        }
        while let Some(row) = queue.pop_front() {
            let row = ideal.reduce(row);
            if row.is_zero() {
                continue;
            }
            // normalize monic
            let lead_coeff = row.leading().map(|(_, c)| c.clone()).unwrap();
            let row = row.scale(&(Q::one() / lead_coeff));
            stored_terms += row.num_terms();
            if let Some(cap) = limit {
                if stored_terms > cap {
                    return Err(Error::Refused(format!(
                        "elimination workspace exceeded NCJAC_MAX_MEM (~{stored_terms} stored terms)"
                    )));
                }
            }
            // enqueue the 2d variable products before inserting (deterministic order)
            for i in 0..d {
                let left = left_mul_var(&row, i, bound);
                if !left.is_zero() {
                    queue.push_back(left);
                }
                let right = right_mul_var(&row, i, bound);
                if !right.is_zero() {
                    queue.push_back(right);
                }
            }
            let lead = row.leading().unwrap().0.clone();
            ideal.rows.insert(lead, row);
        }
        Ok(ideal)
    }

    /// Reduce a polynomial against the echelon (leading terms only).
    fn reduce(&self, mut row: NCPoly) -> NCPoly {
        loop {
            let Some((lead, c)) = row.leading().map(|(w, c)| (w.clone(), c.clone())) else {
                return row;
            };
            match self.rows.get(&lead) {
                Some(pivot_row) => {
                    row = row.sub(&pivot_row.scale(&c));
                }
                None => return row,
            }
        }
    }

    /// Full normal form: eliminate every reducible word, not just the lead.
    fn normal_form(&self, row: NCPoly) -> NCPoly {
        let mut rest = row;
        let mut done = NCPoly::zero(self.d);
        loop {
            let Some((lead, c)) = rest.leading().map(|(w, c)| (w.clone(), c.clone())) else {
                return done;
            };
            match self.rows.get(&lead) {
                Some(pivot_row) => {
                    rest = rest.sub(&pivot_row.scale(&c));
                }
                None => {
                    rest = rest.sub(&NCPoly::monomial(self.d, lead.clone(), c.clone()));
                    done.add_term(lead, c);
                }
            }
        }
    }

    /// Rank of the truncated row space.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of pivots whose leading word has degree `t`. For homogeneous
    /// generators this is the rank of the degree-`t` graded slice.
    pub fn rank_in_degree(&self, t: usize) -> usize {
        self.rows.keys().filter(|w| w.degree() == t).count()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Whether `h_{<bound}` lies in the row space.
    pub fn contains(&self, h: &NCPoly) -> bool {
        self.normal_form(h.truncate_below(self.bound)).is_zero()
    }

    /// Dimension of the quotient `C<x> / (m^bound + ideal)`.
    pub fn quotient_dim(&self) -> usize {
        words_below(self.d, self.bound) - self.rank()
    }
}

fn left_mul_var(row: &NCPoly, i: usize, bound: usize) -> NCPoly {
    let mut out = NCPoly::zero(row.d());
    for (w, c) in row.terms() {
        if w.degree() + 1 >= bound {
            break;
        }
        out.add_term(Word::var(i).concat(w), c.clone());
    }
    out
}

fn right_mul_var(row: &NCPoly, i: usize, bound: usize) -> NCPoly {
    let mut out = NCPoly::zero(row.d());
    for (w, c) in row.terms() {
        if w.degree() + 1 >= bound {
            break;
        }
        out.add_term(w.concat(&Word::var(i)), c.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// Dimension computations
// ---------------------------------------------------------------------------

fn validate_potential(f: &NCPoly) -> Result<(), Error> {
    match f.ord() {
        Order::Finite(k) if k < 2 => Err(Error::BadInput(
            "potentials must have no constant or linear terms (elements with linear terms differentiate to units)"
                .into(),
        )),
        _ => Ok(()),
    }
}

/// Cyclic-derivative generators of the Jacobi ideal of `f`.
pub fn jacobi_generators(f: &NCPoly) -> Vec<NCPoly> {
    (0..f.d()).map(|i| cyclic_derivative(f, i)).collect()
}

/// Dimension filtration for arbitrary generators (order >= 1 each).
pub fn dims_with_generators(
    d: usize,
    generators: &[NCPoly],
    n_max: usize,
    verdict_order: Option<Order>,
) -> Result<DimReport, Error> {
    if n_max < 2 {
        return Err(Error::BadInput("truncation degree must be at least 2".into()));
    }
    use rayon::prelude::*;
    let results: Result<Vec<usize>, Error> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 1 {
                Ok(1)
            } else {
                Ok(TruncatedIdeal::build(d, generators, n)?.quotient_dim())
            }
        })
        .collect();
    Ok(DimReport::from_dims(results?, verdict_order, d))
}

/// `a_i = dim Jac(f)/J^i` for `i = 1..=N`, with stabilization certificate
/// and J-dimension verdict.
pub fn dims(f: &NCPoly, n_max: usize) -> Result<DimReport, Error> {
    validate_potential(f)?;
    dims_with_generators(f.d(), &jacobi_generators(f), n_max, Some(f.ord()))
}

/// Corank sequence `c_0, c_1, ..., c_{N-1}` of `f` (with `c_0 = 1`).
pub fn coranks(f: &NCPoly, n_max: usize) -> Result<Vec<usize>, Error> {
    Ok(dims(f, n_max)?.coranks)
}

/// Dimensions of the truncated model of `Jac(f)/(extra)`.
pub fn quotient_dims(f: &NCPoly, extra: &[NCPoly], n_max: usize) -> Result<DimReport, Error> {
    validate_potential(f)?;
    let mut gens = jacobi_generators(f);
    gens.extend_from_slice(extra);
    dims_with_generators(f.d(), &gens, n_max, None)
}

/// Truncated ideal membership: `h_{<n}` lies in the Jacobi row space of `f`.
pub fn contains_in_ideal(h: &NCPoly, f: &NCPoly, n: usize) -> Result<bool, Error> {
    validate_potential(f)?;
    if h.ord() == Order::Finite(0) {
        return Err(Error::BadInput("membership requires ord(h) >= 1".into()));
    }
    let ideal = TruncatedIdeal::build(f.d(), &jacobi_generators(f), n)?;
    Ok(ideal.contains(h))
}

/// Centrality certificate up to degree `N`: all commutators `[s, x_k]` lie
/// in the truncated Jacobi ideal.
pub fn is_central(s: &NCPoly, f: &NCPoly, n_max: usize) -> Result<bool, Error> {
    validate_potential(f)?;
    if s.ord() == Order::Finite(0) {
        return Err(Error::BadInput("centrality requires ord(s) >= 1".into()));
    }
    let d = f.d();
    let ideal = TruncatedIdeal::build(d, &jacobi_generators(f), n_max)?;
    for k in 0..d {
        let xk = NCPoly::var(d, k);
        let comm = s.mul(&xk).sub(&xk.mul(s));
        if !ideal.contains(&comm) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Commutativity certificate: all variable commutators lie in the ideal.
pub fn is_commutative(f: &NCPoly, n_max: usize) -> Result<bool, Error> {
    validate_potential(f)?;
    let d = f.d();
    let ideal = TruncatedIdeal::build(d, &jacobi_generators(f), n_max)?;
    for i in 0..d {
        for j in (i + 1)..d {
            let xi = NCPoly::var(d, i);
            let xj = NCPoly::var(d, j);
            let comm = xi.mul(&xj).sub(&xj.mul(&xi));
            if !ideal.contains(&comm) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verify an explicit homomorphism witness: every source relation, after
/// substituting `x_i -> images[i]` and truncating, lies in the target
/// truncated ideal.
pub fn relation_image_check(
    images: &[NCPoly],
    source_relations: &[NCPoly],
    target_generators: &[NCPoly],
    n_max: usize,
) -> Result<bool, Error> {
    let d = target_generators
        .first()
        .map(|g| g.d())
        .or_else(|| images.first().map(|g| g.d()))
        .ok_or_else(|| Error::BadInput("empty relation-image check".into()))?;
    let ideal = TruncatedIdeal::build(d, target_generators, n_max)?;
    for rel in source_relations {
        let image = rel.substitute(images, Some(n_max));
        if !ideal.contains(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Commutative (abelianized) quotient
// ---------------------------------------------------------------------------

/// Graded order on exponent vectors: total degree, then lex.
#[derive(Clone, Debug, PartialEq, Eq)]
struct CKey(Vec<u32>);

impl PartialOrd for CKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let da: u32 = self.0.iter().sum();
        let db: u32 = other.0.iter().sum();
        da.cmp(&db).then_with(|| self.0.cmp(&other.0))
    }
}

type CRow = BTreeMap<CKey, Q>;

fn crow_from(p: &CPoly) -> CRow {
    let mut row = CRow::new();
    for (e, c) in p.terms() {
        row.insert(CKey(e.clone()), c.clone());
    }
    row
}

fn crow_sub_scaled(a: &mut CRow, b: &CRow, s: &Q) {
    for (k, c) in b {
        let delta = c * s;
        match a.entry(k.clone()) {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !delta.is_zero() {
                    v.insert(-delta);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let val = o.get() - &delta;
                if val.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = val;
                }
            }
        }
    }
}

/// Number of commutative monomials of total degree `< n` in `d` variables.
pub fn cmonomials_below(d: usize, n: usize) -> usize {
    // sum_{j<n} C(j+d-1, d-1)
    let mut total = 0usize;
    for j in 0..n {
        let mut c = 1usize;
        for i in 0..(d - 1) {
            c = c * (j + i + 1) / (i + 1);
        }
        total += c;
    }
    total
}

/// Commutative analogue of the truncated ideal closure/echelon.
fn commutative_rank(d: usize, generators: &[CPoly], bound: usize) -> usize {
    let mut rows: BTreeMap<CKey, CRow> = BTreeMap::new();
    let mut queue: VecDeque<CRow> = VecDeque::new();
    for g in generators {
        let mut row = crow_from(g);
        row.retain(|k, _| (k.0.iter().sum::<u32>() as usize) < bound);
        queue.push_back(row);
    }
    while let Some(mut row) = queue.pop_front() {
        // reduce against existing pivots
        loop {
            let Some((lead, c)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
                break;
            };
            match rows.get(&lead) {
                Some(pivot) => crow_sub_scaled(&mut row, pivot, &c),
                None => break,
            }
        }
        if row.is_empty() {
            continue;
        }
        let lead_c = row.iter().next().unwrap().1.clone();
        let inv = Q::one() / lead_c;
        for v in row.values_mut() {
            *v = v.clone() * &inv;
        }
        // children: multiply by each variable, truncated
        for i in 0..d {
            let mut child = CRow::new();
            for (k, c) in &row {
                let deg = k.0.iter().sum::<u32>() as usize;
                if deg + 1 < bound {
                    let mut e = k.0.clone();
                    e[i] += 1;
                    child.insert(CKey(e), c.clone());
                }
            }
            if !child.is_empty() {
                queue.push_back(child);
            }
        }
        let lead = row.iter().next().unwrap().0.clone();
        rows.insert(lead, row);
    }
    rows.len()
}

/// Dimension filtration of the abelianized Jacobi algebra `Jac(f)^ab`.
pub fn abelian_dims(f: &NCPoly, n_max: usize) -> Result<DimReport, Error> {
    validate_potential(f)?;
    if n_max < 2 {
        return Err(Error::BadInput("truncation degree must be at least 2".into()));
    }
    let d = f.d();
    let fab = abelianize(f);
    let generators: Vec<CPoly> = (0..d).map(|i| fab.partial(i)).collect();
    use rayon::prelude::*;
    let dims: Vec<usize> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            if n == 1 {
                1
            } else {
                cmonomials_below(d, n) - commutative_rank(d, &generators, n)
            }
        })
        .collect();
    Ok(DimReport::from_dims(dims, None, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse;
    use crate::word::Context;

    fn p(src: &str) -> NCPoly {
        parse(src, &Context::xy()).unwrap()
    }

    #[test]
    fn free_algebra_dims() {
        // f = 0, d = 2: dims are 2^i - 1
        let r = dims(&NCPoly::zero(2), 4).unwrap();
        assert_eq!(r.dims, vec![1, 3, 7, 15]);
        assert_eq!(r.coranks, vec![1, 2, 4, 8]);
        assert_eq!(r.stabilized_at, None);
    }

    #[test]
    fn pagoda_small() {
        // x^2 + y^4 has certified dimension 3 with dims 1,2,3,3
        let r = dims(&p("x^2 + y^4"), 6).unwrap();
        assert_eq!(&r.dims[..4], &[1, 2, 3, 3]);
        assert_eq!(r.certified_dim, Some(3));
        assert_eq!(r.jdim_verdict, JdimVerdict::Zero(3));
        assert_eq!(r.corank(), 1);
    }

    #[test]
    fn words_counting() {
        assert_eq!(words_below(2, 4), 15);
        assert_eq!(words_below(3, 3), 13);
        assert_eq!(cmonomials_below(2, 4), 10); // 1+2+3+4
        assert_eq!(cmonomials_below(3, 3), 10); // 1+3+6
    }

    #[test]
    fn rejects_linear_terms() {
        assert!(dims(&p("x + y^2"), 4).is_err());
        assert!(dims(&p("1 + x^2"), 4).is_err());
    }

    #[test]
    fn membership_basics() {
        // delta_x(x^2 + y^4) = 2x, so x lies in the ideal at every bound;
        // y survives in the quotient (basis 1, y, y^2) at every bound.
        let f = p("x^2 + y^4");
        assert!(contains_in_ideal(&p("x"), &f, 2).unwrap());
        assert!(contains_in_ideal(&p("x"), &f, 8).unwrap());
        assert!(!contains_in_ideal(&p("y"), &f, 8).unwrap());
        assert!(!contains_in_ideal(&p("y^2"), &f, 8).unwrap());
        assert!(contains_in_ideal(&p("y^3"), &f, 8).unwrap());
    }

    #[test]
    fn commutativity_small() {
        assert!(is_commutative(&p("x^2 + y^4"), 8).unwrap());
        assert!(!is_commutative(&p("x*y^2"), 8).unwrap());
        assert!(!is_commutative(&p("x^3 + y^3"), 8).unwrap());
    }

    #[test]
    fn abelian_free() {
        // f = x^2: Jac^ab = C[[y]], dims grow by one each degree
        let r = abelian_dims(&p("x^2"), 5).unwrap();
        assert_eq!(r.dims, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn central_y_not_in_xyy() {
        // y is not central in Jac(xy^2)
        assert!(!is_central(&p("y"), &p("x*y^2"), 3).unwrap());
    }
}

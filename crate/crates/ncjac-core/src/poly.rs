//! Noncommutative polynomials and truncated power-series germs.
//!
//! `NCPoly` is a sparse exact-rational linear combination of words, keyed in
//! graded-lex order so that graded slices are contiguous. `TruncatedSeries`
//! pairs a polynomial with a truncation degree `N`: terms of degree >= N are
//! unknown, and arithmetic never claims information at or above the
//! truncation (binary operations propagate `min` of the truncations).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::Q;
use crate::word::Word;

/// Order of a (possibly zero) series: `ord(0)` is the infinity sentinel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    /// The finite value, if any.
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

/// Sparse noncommutative polynomial over exact rationals.
///
/// Invariant: no stored zero coefficients. The number of variables `d` is
/// carried along so mixed-context arithmetic can be rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    d: usize,
    terms: BTreeMap<Word, Q>,
}

impl NCPoly {
    /// The zero polynomial in `d` variables.
    pub fn zero(d: usize) -> NCPoly {
        NCPoly { d, terms: BTreeMap::new() }
    }

    /// The constant 1.
    pub fn one(d: usize) -> NCPoly {
        NCPoly::monomial(d, Word::one(), Q::from_integer(1.into()))
    }

    /// The variable `x_i`.
    pub fn var(d: usize, i: usize) -> NCPoly {
        assert!(i < d, "variable index {i} out of range for d={d}");
        NCPoly::monomial(d, Word::var(i), Q::from_integer(1.into()))
    }

    /// A single term `c * w` (zero coefficient yields the zero polynomial).
    pub fn monomial(d: usize, w: Word, c: Q) -> NCPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            if let Some(m) = w.max_letter() {
                assert!((m as usize) < d, "letter {m} out of range for d={d}");
            }
            terms.insert(w, c);
        }
        NCPoly { d, terms }
    }

    /// Number of variables of the ambient free algebra.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Iterate terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a word (zero if absent).
    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading term in graded-lex order (lowest degree, then lex).
    pub fn leading(&self) -> Option<(&Word, &Q)> {
        self.terms.iter().next()
    }

    /// Order: minimum degree of a stored term; `Infinite` for zero.
    pub fn ord(&self) -> Order {
        match self.terms.keys().next() {
            Some(w) => Order::Finite(w.degree()),
            None => Order::Infinite,
        }
    }

    /// Maximum degree of a stored term, or None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.degree())
    }

    /// Add a single term in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        if let Some(m) = w.max_letter() {
            assert!((m as usize) < self.d, "letter out of range");
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &NCPoly) {
        assert_eq!(self.d, other.d, "context mismatch: d={} vs d={}", self.d, other.d);
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        self.check_same(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.check_same(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, s: &Q) -> NCPoly {
        if s.is_zero() {
            return NCPoly::zero(self.d);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * s;
        }
        out
    }

    /// Noncommutative product. With `trunc = Some(n)`, terms of degree >= n
    /// are dropped during the computation (never materialized).
    pub fn mul_trunc(&self, other: &NCPoly, trunc: Option<usize>) -> NCPoly {
        self.check_same(other);
        let mut out = NCPoly::zero(self.d);
        for (wa, ca) in &self.terms {
            if let Some(n) = trunc {
                if wa.degree() >= n {
                    break; // graded order: all remaining terms are longer
                }
            }
            for (wb, cb) in &other.terms {
                if let Some(n) = trunc {
                    if wa.degree() + wb.degree() >= n {
                        break;
                    }
                }
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        self.mul_trunc(other, None)
    }

    /// Integer power (noncommutative, but powers of a single element commute
    /// with themselves so this is unambiguous).
    pub fn pow(&self, e: u32) -> NCPoly {
        let mut out = NCPoly::one(self.d);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Homogeneous part of degree `k`.
    pub fn homogeneous_part(&self, k: usize) -> NCPoly {
        let mut out = NCPoly::zero(self.d);
        for (w, c) in self.terms.range(degree_range(k)) {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Truncation: keep only terms of degree < n.
    pub fn truncate_below(&self, n: usize) -> NCPoly {
        let mut out = NCPoly::zero(self.d);
        for (w, c) in &self.terms {
            if w.degree() >= n {
                break;
            }
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Keep only terms of degree <= n.
    pub fn truncate_at(&self, n: usize) -> NCPoly {
        self.truncate_below(n + 1)
    }

    /// Substitute `x_i -> images[i]` with optional truncation. Images live in
    /// a possibly different context; all must share one `d`.
    pub fn substitute(&self, images: &[NCPoly], trunc: Option<usize>) -> NCPoly {
        assert_eq!(images.len(), self.d, "need one image per variable");
        let d_out = if images.is_empty() { self.d } else { images[0].d };
        for im in images {
            assert_eq!(im.d, d_out, "images must share a context");
        }
        let mut out = NCPoly::zero(d_out);
        for (w, c) in &self.terms {
            let mut prod = NCPoly::monomial(d_out, Word::one(), c.clone());
            for &l in &w.0 {
                prod = prod.mul_trunc(&images[l as usize], trunc);
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod);
        }
        if let Some(n) = trunc {
            out.truncate_below(n)
        } else {
            out
        }
    }
}

/// Range of all words of exactly degree `k` in graded-lex key order.
fn degree_range(k: usize) -> std::ops::Range<Word> {
    let lo = Word(vec![0u8; k]);
    let hi = Word(vec![0u8; k + 1]);
    lo..hi
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if first {
                write!(f, "{c}*{w}")?;
                first = false;
            } else {
                write!(f, " + {c}*{w}")?;
            }
        }
        Ok(())
    }
}

/// A power-series germ known only below a truncation degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    body: NCPoly,
    trunc: usize,
}

impl TruncatedSeries {
    /// Wrap a polynomial, discarding terms of degree >= trunc.
    pub fn new(body: NCPoly, trunc: usize) -> TruncatedSeries {
        assert!(trunc >= 1, "truncation degree must be positive");
        TruncatedSeries { body: body.truncate_below(trunc), trunc }
    }

    pub fn zero(d: usize, trunc: usize) -> TruncatedSeries {
        TruncatedSeries::new(NCPoly::zero(d), trunc)
    }

    pub fn body(&self) -> &NCPoly {
        &self.body
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn d(&self) -> usize {
        self.body.d()
    }

    pub fn ord(&self) -> Order {
        self.body.ord()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Addition; the result is only known below the smaller truncation.
    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.trunc.min(other.trunc);
        TruncatedSeries::new(self.body.add(&other.body), n)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.trunc.min(other.trunc);
        TruncatedSeries::new(self.body.sub(&other.body), n)
    }

    pub fn scale(&self, s: &Q) -> TruncatedSeries {
        TruncatedSeries::new(self.body.scale(s), self.trunc)
    }

    /// Product, truncated at the smaller of the two truncation degrees.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.trunc.min(other.trunc);
        TruncatedSeries::new(self.body.mul_trunc(&other.body, Some(n)), n)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.body, self.trunc)
    }
}

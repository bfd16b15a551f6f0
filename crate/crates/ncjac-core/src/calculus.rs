//! The differentiation and symmetrization calculus on the free algebra.
//!
//! * `sym` — cyclic symmetrization: each monomial is replaced by the sum of
//!   its rotations.
//! * `strike_derivative` — strikes off a leading `x_i`, killing monomials
//!   that start with a different letter.
//! * `cyclic_derivative` — the composite: strike off after symmetrizing.
//! * `cyclic_canonical` — necklace representative of the cyclic-equivalence
//!   class: every word is replaced by its lexicographically minimal rotation
//!   and coefficients are merged. `f ~ g` iff `cyclic_canonical(f - g) = 0`.
//! * `abelianize` — image in the commutative polynomial ring.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::{NCPoly, TruncatedSeries};
use crate::rational::Q;
use crate::word::Word;

/// Cyclic symmetrization: sum of all rotations of each monomial, extended
/// linearly. A monomial of degree t contributes t (not necessarily distinct)
/// rotations, so e.g. `sym(x^2) = 2x^2`.
pub fn sym(f: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero(f.d());
    for (w, c) in f.terms() {
        let t = w.degree();
        if t == 0 {
            out.add_term(w.clone(), c.clone());
            continue;
        }
        for k in 0..t {
            out.add_term(w.rotate(k), c.clone());
        }
    }
    out
}

/// Whether `f` is cyclically symmetric degree by degree: `sym(f_t) = t*f_t`.
pub fn is_cyclically_symmetric(f: &NCPoly) -> bool {
    let Some(max) = f.degree() else { return true };
    for t in 1..=max {
        let ft = f.homogeneous_part(t);
        if sym(&ft) != ft.scale(&Q::from_integer((t as i64).into())) {
            return false;
        }
    }
    f.homogeneous_part(0).is_zero() || true
}

/// Left strike-off derivative: kills monomials not starting with `x_i` and
/// strikes the leading letter off the rest.
pub fn strike_derivative(f: &NCPoly, i: usize) -> NCPoly {
    let mut out = NCPoly::zero(f.d());
    for (w, c) in f.terms() {
        if let Some(&first) = w.0.first() {
            if first as usize == i {
                out.add_term(Word::from_letters(&w.0[1..]), c.clone());
            }
        }
    }
    out
}

/// Cyclic derivative: strike-off derivative of the cyclic symmetrization.
pub fn cyclic_derivative(f: &NCPoly, i: usize) -> NCPoly {
    strike_derivative(&sym(f), i)
}

/// Cyclic derivative of a truncated series: the output is only known below
/// degree `N - 1` (differentiating loses one degree of information).
pub fn cyclic_derivative_series(f: &TruncatedSeries, i: usize) -> TruncatedSeries {
    let n = f.trunc().saturating_sub(1).max(1);
    TruncatedSeries::new(cyclic_derivative(f.body(), i), n)
}

/// Necklace-canonical representative of the cyclic-equivalence class.
pub fn cyclic_canonical(f: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero(f.d());
    for (w, c) in f.terms() {
        out.add_term(w.min_rotation(), c.clone());
    }
    out
}

/// Whether `f ~ g` (cyclic equivalence).
pub fn cyclically_equivalent(f: &NCPoly, g: &NCPoly) -> bool {
    cyclic_canonical(&f.sub(g)).is_zero()
}

/// Commutative polynomial: exponent vector -> coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPoly {
    d: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl CPoly {
    pub fn zero(d: usize) -> CPoly {
        CPoly { d, terms: BTreeMap::new() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        assert_eq!(e.len(), self.d);
        match self.terms.entry(e) {
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

    pub fn add(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.d, other.d);
        let mut out = CPoly::zero(self.d);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Commutative partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> CPoly {
        let mut out = CPoly::zero(self.d);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Q::from_integer((e[i] as i64).into()));
        }
        out
    }

    /// Total degree of the lowest term, or None for zero.
    pub fn ord(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .min()
    }
}

/// Abelianization: the image of `f` under the quotient to commuting
/// variables. This is a ring homomorphism.
pub fn abelianize(f: &NCPoly) -> CPoly {
    let mut out = CPoly::zero(f.d());
    for (w, c) in f.terms() {
        out.add_term(w.exponents(f.d()), c.clone());
    }
    out
}

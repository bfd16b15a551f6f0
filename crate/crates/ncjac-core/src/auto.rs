//! Coordinate changes of the free power-series algebra and the
//! degree-by-degree chasing engines built on them.
//!
//! Two kinds of steps occur: invertible linear changes of variables, and
//! unitriangular substitutions `x_k -> x_k + f_k` with `ord(f_k) >= 2`. A
//! unitriangular step of depth `e` leaves degrees `<= e` of any input
//! untouched, so a chain whose step depths increase strictly stabilizes
//! below any fixed truncation degree: every "limit" here is a finite loop.
//!
//! Chains are recorded, never inverted. Correctness of a chase is witnessed
//! by replaying the chain on the input and checking cyclic equivalence with
//! the claimed output, not by computing inverse automorphisms.

use num_traits::{One, Zero};
use serde_json::json;

use crate::calculus::cyclic_canonical;
use crate::error::Error;
use crate::io;
use crate::poly::{NCPoly, Order, TruncatedSeries};
use crate::rational::{cbrt_exact, sqrt_exact, Q};
use crate::word::{Context, Word};

/// An invertible linear change of variables: the image of `x_i` is
/// `sum_j matrix[i][j] x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearAuto {
    d: usize,
    matrix: Vec<Vec<Q>>,
}

impl LinearAuto {
    pub fn new(matrix: Vec<Vec<Q>>) -> Result<LinearAuto, Error> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::BadInput("linear change must be a square matrix".into()));
        }
        let a = LinearAuto { d, matrix };
        if !a.is_invertible() {
            return Err(Error::BadInput("linear change must be invertible".into()));
        }
        Ok(a)
    }

    pub fn identity(d: usize) -> LinearAuto {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        LinearAuto { d, matrix }
    }

    /// The transposition `x_i <-> x_j`.
    pub fn swap(d: usize, i: usize, j: usize) -> LinearAuto {
        let mut a = LinearAuto::identity(d);
        a.matrix.swap(i, j);
        a
    }

    /// The scaling `x_i -> c * x_i` (c nonzero).
    pub fn scale_var(d: usize, i: usize, c: Q) -> Result<LinearAuto, Error> {
        if c.is_zero() {
            return Err(Error::BadInput("scale factor must be nonzero".into()));
        }
        let mut a = LinearAuto::identity(d);
        a.matrix[i][i] = c;
        Ok(a)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    fn is_invertible(&self) -> bool {
        // Gaussian elimination over Q.
        let mut m = self.matrix.clone();
        let d = self.d;
        for col in 0..d {
            let Some(p) = (col..d).find(|&r| !m[r][col].is_zero()) else {
                return false;
            };
            m.swap(col, p);
            let inv = m[col][col].recip();
            for r in col + 1..d {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..d {
                    let delta = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        true
    }

    /// Images of the variables as polynomials.
    pub fn images(&self) -> Vec<NCPoly> {
        (0..self.d)
            .map(|i| {
                let mut p = NCPoly::zero(self.d);
                for (j, c) in self.matrix[i].iter().enumerate() {
                    p.add_term(Word::var(j), c.clone());
                }
                p
            })
            .collect()
    }

    pub fn apply(&self, f: &NCPoly, trunc: Option<usize>) -> NCPoly {
        f.substitute(&self.images(), trunc)
    }
}

/// A unitriangular substitution: the image of `x_k` is `x_k + tails[k]`
/// with `ord(tails[k]) >= 2`. Its depth is `min_k ord(tails[k]) - 1`
/// (infinite for the identity); applying it to any `f` leaves the part of
/// `f` in degrees `<= depth` unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitriangularAuto {
    d: usize,
    tails: Vec<NCPoly>,
}

impl UnitriangularAuto {
    pub fn new(tails: Vec<NCPoly>) -> Result<UnitriangularAuto, Error> {
        let d = tails.len();
        if d == 0 {
            return Err(Error::BadInput("unitriangular change needs at least one variable".into()));
        }
        for t in &tails {
            if t.d() != d {
                return Err(Error::ContextMismatch("mixed variable contexts".into()));
            }
            if let Order::Finite(o) = t.ord() {
                if o < 2 {
                    return Err(Error::BadInput("unitriangular tails must have order >= 2".into()));
                }
            }
        }
        Ok(UnitriangularAuto { d, tails })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tails(&self) -> &[NCPoly] {
        &self.tails
    }

    pub fn depth(&self) -> Order {
        let mut best = Order::Infinite;
        for t in &self.tails {
            if let Order::Finite(o) = t.ord() {
                best = match best {
                    Order::Finite(b) => Order::Finite(b.min(o - 1)),
                    Order::Infinite => Order::Finite(o - 1),
                };
            }
        }
        best
    }

    pub fn images(&self) -> Vec<NCPoly> {
        self.tails
            .iter()
            .enumerate()
            .map(|(i, t)| NCPoly::var(self.d, i).add(t))
            .collect()
    }

    pub fn apply(&self, f: &NCPoly, trunc: Option<usize>) -> NCPoly {
        f.substitute(&self.images(), trunc)
    }
}

/// One recorded step of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum AutoStep {
    Linear(LinearAuto),
    Unitriangular(UnitriangularAuto),
}

impl AutoStep {
    pub fn d(&self) -> usize {
        match self {
            AutoStep::Linear(a) => a.d(),
            AutoStep::Unitriangular(a) => a.d(),
        }
    }

    pub fn apply(&self, f: &NCPoly, trunc: Option<usize>) -> NCPoly {
        match self {
            AutoStep::Linear(a) => a.apply(f, trunc),
            AutoStep::Unitriangular(a) => a.apply(f, trunc),
        }
    }

    pub fn images(&self) -> Vec<NCPoly> {
        match self {
            AutoStep::Linear(a) => a.images(),
            AutoStep::Unitriangular(a) => a.images(),
        }
    }
}

/// An ordered chain of coordinate changes, applied left to right, plus an
/// exactness flag: `exact = false` means some step needed an irrational
/// scaling that was skipped, so the recorded chain realizes the claimed
/// normal form only up to such scalings (all dimension invariants are
/// unaffected).
#[derive(Clone, Debug, PartialEq)]
pub struct AutoChain {
    d: usize,
    steps: Vec<AutoStep>,
    pub exact: bool,
    pub warnings: Vec<String>,
}

impl AutoChain {
    pub fn identity(d: usize) -> AutoChain {
        AutoChain { d, steps: Vec::new(), exact: true, warnings: Vec::new() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> &[AutoStep] {
        &self.steps
    }

    pub fn push(&mut self, step: AutoStep) {
        assert_eq!(step.d(), self.d);
        self.steps.push(step);
    }

    pub fn push_linear(&mut self, a: LinearAuto) {
        self.push(AutoStep::Linear(a));
    }

    pub fn push_unitriangular(&mut self, a: UnitriangularAuto) {
        self.push(AutoStep::Unitriangular(a));
    }

    /// Append all steps of `other` (same variable count) after this chain.
    pub fn extend(&mut self, other: &AutoChain) {
        assert_eq!(self.d, other.d);
        self.steps.extend(other.steps.iter().cloned());
        self.exact &= other.exact;
        self.warnings.extend(other.warnings.iter().cloned());
    }

    pub fn apply_poly(&self, f: &NCPoly, trunc: Option<usize>) -> NCPoly {
        let mut cur = match trunc {
            Some(n) => f.truncate_below(n),
            None => f.clone(),
        };
        for step in &self.steps {
            cur = step.apply(&cur, trunc);
        }
        cur
    }

    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries, Error> {
        if f.d() != self.d {
            return Err(Error::ContextMismatch("mixed variable contexts".into()));
        }
        Ok(TruncatedSeries::new(self.apply_poly(f.body(), Some(f.trunc())), f.trunc()))
    }

    /// Human/JSON description of the chain: variable images per step.
    pub fn describe(&self, ctx: &Context) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .map(|s| {
                let kind = match s {
                    AutoStep::Linear(_) => "linear",
                    AutoStep::Unitriangular(_) => "unitriangular",
                };
                let images: Vec<String> = s
                    .images()
                    .iter()
                    .enumerate()
                    .map(|(i, p)| format!("{} -> {}", ctx.name(i), io::print(p, ctx)))
                    .collect();
                json!({ "kind": kind, "images": images })
            })
            .collect();
        json!({ "exact": self.exact, "steps": steps, "warnings": self.warnings })
    }
}

// ---------------------------------------------------------------------------
// Quadratic splitting
// ---------------------------------------------------------------------------

/// The symmetric matrix of the quadratic part of `f` (the degree-2 classes
/// of `f` up to cyclic equivalence are exactly a symmetric bilinear form).
fn quadratic_matrix(f: &NCPoly) -> Vec<Vec<Q>> {
    let d = f.d();
    let mut s = vec![vec![Q::zero(); d]; d];
    for (w, c) in f.homogeneous_part(2).terms() {
        let (i, j) = (w.0[0] as usize, w.0[1] as usize);
        if i == j {
            s[i][i] = &s[i][i] + c;
        } else {
            let half = c / Q::from_integer(2.into());
            s[i][j] = &s[i][j] + &half;
            s[j][i] = &s[j][i] + &half;
        }
    }
    s
}

/// Congruence-diagonalize the symmetric matrix `s`, returning `(a, lambda)`
/// with `a^T s a = diag(lambda)` and the nonzero entries of `lambda` first.
fn diagonalize_symmetric(mut s: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<Q>) {
    let d = s.len();
    let mut a = LinearAuto::identity(d).matrix().to_vec();

    // Column operation col_i += c * col_j on `a`, with the matching
    // congruence update of `s`.
    fn col_add(a: &mut [Vec<Q>], s: &mut [Vec<Q>], i: usize, j: usize, c: &Q) {
        let d = a.len();
        for r in 0..d {
            let delta = c * &a[r][j];
            a[r][i] = &a[r][i] + &delta;
        }
        for r in 0..d {
            let delta = c * &s[r][j];
            s[r][i] = &s[r][i] + &delta;
        }
        for cc in 0..d {
            let delta = c * &s[j][cc];
            s[i][cc] = &s[i][cc] + &delta;
        }
    }
    fn col_swap(a: &mut [Vec<Q>], s: &mut [Vec<Q>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in s.iter_mut() {
            row.swap(i, j);
        }
        s.swap(i, j);
    }

    for k in 0..d {
        if s[k][k].is_zero() {
            if let Some(l) = (k + 1..d).find(|&l| !s[l][l].is_zero()) {
                col_swap(&mut a, &mut s, k, l);
            } else {
                // All remaining diagonal entries vanish; look for an
                // off-diagonal entry to fold onto the diagonal.
                let mut found = None;
                'search: for i in k..d {
                    for j in i + 1..d {
                        if !s[i][j].is_zero() {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = found else { break };
                col_add(&mut a, &mut s, i, j, &Q::one());
                if i != k {
                    col_swap(&mut a, &mut s, k, i);
                }
            }
        }
        let pivot = s[k][k].clone();
        for l in k + 1..d {
            if s[k][l].is_zero() {
                continue;
            }
            let c = -(&s[k][l] / &pivot);
            col_add(&mut a, &mut s, l, k, &c);
        }
    }

    // Move nonzero diagonal entries to the front, preserving order.
    let mut pos = 0;
    for k in 0..d {
        if !s[k][k].is_zero() {
            if k != pos {
                col_swap(&mut a, &mut s, pos, k);
            }
            pos += 1;
        }
    }
    let lambda: Vec<Q> = (0..d).map(|k| s[k][k].clone()).collect();
    (a, lambda)
}

/// Split off the nondegenerate quadratic part: find a chain carrying `f` to
/// `lambda_1 x_1^2 + ... + lambda_r x_r^2 + g` mod the truncation degree,
/// with `g` of order >= 3 supported only on the last `d - r` variables and
/// each `lambda_i = 1` whenever it is a rational square (otherwise the
/// chain is flagged inexact). `d - r` is the corank of `f`.
pub fn split_quadratic(f: &TruncatedSeries) -> Result<(usize, TruncatedSeries, AutoChain), Error> {
    let d = f.d();
    let n = f.trunc();
    match f.body().ord() {
        Order::Finite(o) if o < 2 => {
            return Err(Error::BadInput("potential must have no constant or linear terms".into()))
        }
        _ => {}
    }
    let mut chain = AutoChain::identity(d);
    let mut cur = f.body().truncate_below(n);

    let (a, mut lambda) = diagonalize_symmetric(quadratic_matrix(&cur));
    let r = lambda.iter().filter(|l| !l.is_zero()).count();
    let lin = LinearAuto::new(a)?;
    cur = lin.apply(&cur, Some(n));
    chain.push_linear(lin);

    // Rescale each split variable to coefficient 1 when possible.
    let mut scale = LinearAuto::identity(d);
    let mut scaled = false;
    for (i, l) in lambda.iter_mut().enumerate().take(r) {
        if l.is_one() {
            continue;
        }
        if let Some(s) = sqrt_exact(&l.recip()) {
            scale.matrix[i][i] = s;
            *l = Q::one();
            scaled = true;
        } else {
            chain.exact = false;
            chain.warnings.push(format!(
                "quadratic coefficient {} for variable {} is not a rational square; left unscaled",
                crate::rational::render(l),
                i
            ));
        }
    }
    if scaled {
        cur = scale.apply(&cur, Some(n));
        chain.push_linear(scale);
    }

    // Degree-by-degree completion: kill every cyclic class of degree >= 3
    // that involves a split variable. A class c*m with m starting (after
    // rotation) with split letter x_i dies under x_i -> x_i - c/(2 lambda_i) w,
    // at the cost of terms in strictly higher degree only.
    for t in 3..n {
        let canon = cyclic_canonical(&cur.homogeneous_part(t));
        let mut tails = vec![NCPoly::zero(d); d];
        let mut any = false;
        for (m, c) in canon.terms() {
            let Some(&i) = m.0.iter().filter(|&&l| (l as usize) < r).min() else {
                continue; // pure tail-variable class: part of g
            };
            let i = i as usize;
            // minimal rotation of m starting with letter i
            let rot = (0..m.degree())
                .map(|k| m.rotate(k))
                .filter(|w| w.0[0] as usize == i)
                .min()
                .expect("letter i occurs in m");
            let w = Word::from_letters(&rot.0[1..]);
            let coef = c / (&lambda[i] * Q::from_integer(2.into()));
            tails[i].add_term(w, -coef);
            any = true;
        }
        if any {
            let step = UnitriangularAuto::new(tails)?;
            cur = step.apply(&cur, Some(n));
            chain.push_unitriangular(step);
        }
    }

    // Read the residual off the cyclic canonical form: the literal image can
    // carry cyclically trivial terms (commutator-like debris of the linear
    // change) that do not belong to the potential's class.
    let mut g = cyclic_canonical(&cur);
    for (i, l) in lambda.iter().enumerate().take(r) {
        g.add_term(Word::from_letters(&[i as u8, i as u8]), -l.clone());
    }
    debug_assert!(
        g.terms().all(|(w, _)| w.0.iter().all(|&l| (l as usize) >= r)),
        "residual part must live in the tail variables"
    );
    Ok((r, TruncatedSeries::new(g, n), chain))
}

// ---------------------------------------------------------------------------
// Cubic normalization (two variables)
// ---------------------------------------------------------------------------

/// Factorization shape of the (abelianized) binary cubic leading form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CubicCase {
    ThreeFactors,
    TwoFactors,
    OneFactor,
    ZeroCubic,
}

// Small exact univariate helpers (coefficients low-to-high).
fn uni_trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn uni_deriv(p: &[Q]) -> Vec<Q> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer((i as i64).into()))
        .collect()
}

/// Remainder of p mod q (q nonzero).
fn uni_rem(p: &[Q], q: &[Q]) -> Vec<Q> {
    let mut r = p.to_vec();
    uni_trim(&mut r);
    let dq = q.len() - 1;
    let lead = q[dq].clone();
    while r.len() > dq {
        let k = r.len() - 1;
        let factor = &r[k] / &lead;
        for j in 0..=dq {
            let delta = &factor * &q[j];
            r[k - dq + j] = &r[k - dq + j] - &delta;
        }
        uni_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Monic gcd over Q.
fn uni_gcd(p: &[Q], q: &[Q]) -> Vec<Q> {
    let mut a = p.to_vec();
    let mut b = q.to_vec();
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

/// Quotient p / q assuming exact division.
fn uni_div_exact(p: &[Q], q: &[Q]) -> Vec<Q> {
    let mut r = p.to_vec();
    uni_trim(&mut r);
    let dq = q.len() - 1;
    let lead = q[dq].clone();
    let mut out = vec![Q::zero(); r.len().saturating_sub(dq)];
    while r.len() > dq {
        let k = r.len() - 1;
        let factor = &r[k] / &lead;
        out[k - dq] = factor.clone();
        for j in 0..=dq {
            let delta = &factor * &q[j];
            r[k - dq + j] = &r[k - dq + j] - &delta;
        }
        uni_trim(&mut r);
    }
    debug_assert!(r.is_empty() || r.iter().all(|c| c.is_zero()));
    out
}

/// The linear change sending the independent rational forms `l1 -> target1`
/// and `l2 -> target2`, where forms are coefficient pairs (on x, y) and the
/// targets are the variables scaled: images satisfy `l1(imgs) = t1 * x`,
/// `l2(imgs) = t2 * y`.
fn change_sending(l1: (Q, Q), l2: (Q, Q), t1: Q, t2: Q) -> Result<LinearAuto, Error> {
    // Solve L * M = T with rows of L the forms and T = diag(t1, t2);
    // M = L^{-1} T.
    let det = &l1.0 * &l2.1 - &l1.1 * &l2.0;
    if det.is_zero() {
        return Err(Error::BadInput("linear forms are dependent".into()));
    }
    let inv = [
        [&l2.1 / &det, -(&l1.1 / &det)],
        [-(&l2.0 / &det), &l1.0 / &det],
    ];
    let matrix = vec![
        vec![&inv[0][0] * &t1, &inv[0][1] * &t2],
        vec![&inv[1][0] * &t1, &inv[1][1] * &t2],
    ];
    LinearAuto::new(matrix)
}

/// Decide the factorization shape of the cubic leading form of `f` (two
/// variables, vanishing quadratic part) and, when a rational linear change
/// exists, carry `f` to leading form `x^3 + y^3` (three factors), `xy^2`
/// (two factors), or `x^3` (one factor). When no rational change exists the
/// input is returned unchanged with `exact = false`; the case tag is exact
/// regardless.
pub fn normalize_cubic(
    f: &TruncatedSeries,
) -> Result<(CubicCase, TruncatedSeries, AutoChain), Error> {
    if f.d() != 2 {
        return Err(Error::BadInput("cubic normalization works in two variables".into()));
    }
    let n = f.trunc();
    if !f.body().homogeneous_part(2).is_zero() {
        return Err(Error::BadInput("quadratic part must vanish (split it off first)".into()));
    }
    let mut chain = AutoChain::identity(2);
    let cubic = crate::calculus::abelianize(&f.body().homogeneous_part(3));
    if cubic.is_zero() {
        return Ok((CubicCase::ZeroCubic, f.clone(), chain));
    }
    // f3^ab = a x^3 + b x^2 y + c x y^2 + e y^3
    let a = cubic.coeff(&[3, 0]);
    let b = cubic.coeff(&[2, 1]);
    let c = cubic.coeff(&[1, 2]);
    let e = cubic.coeff(&[0, 3]);

    let three = Q::from_integer(3.into());
    let disc = -Q::from_integer(27.into()) * &a * &a * &e * &e
        + Q::from_integer(18.into()) * &a * &b * &c * &e
        - Q::from_integer(4.into()) * &a * &c * &c * &c
        - Q::from_integer(4.into()) * &b * &b * &b * &e
        + &b * &b * &c * &c;

    if !disc.is_zero() {
        // Three distinct factors. A rational change to x^3 + y^3 is
        // constructed only in the already-diagonal case with cube
        // coefficients; otherwise the tag stands alone.
        if b.is_zero() && c.is_zero() {
            match (cbrt_exact(&a.recip()), cbrt_exact(&e.recip())) {
                (Some(sa), Some(se)) => {
                    let mut m = LinearAuto::identity(2);
                    m.matrix[0][0] = sa;
                    m.matrix[1][1] = se;
                    let out = m.apply(f.body(), Some(n));
                    chain.push_linear(m);
                    return Ok((CubicCase::ThreeFactors, TruncatedSeries::new(out, n), chain));
                }
                _ => {
                    chain.exact = false;
                    chain.warnings.push(
                        "cubic coefficients are not rational cubes; leading form left unscaled"
                            .into(),
                    );
                    return Ok((CubicCase::ThreeFactors, f.clone(), chain));
                }
            }
        }
        chain.exact = false;
        chain
            .warnings
            .push("no rational change to x^3 + y^3 was constructed; case tag only".into());
        return Ok((CubicCase::ThreeFactors, f.clone(), chain));
    }

    // Discriminant zero: two factors iff a(b^2 - 3ac) != 0 or (c^2 - 3be)e != 0
    // or a = e = 0 (and the cubic is nonzero).
    let two_factors = !(&a * (&b * &b - &three * &a * &c)).is_zero()
        || !((&c * &c - &three * &b * &e) * &e).is_zero()
        || (a.is_zero() && e.is_zero());

    if two_factors {
        // Write f3^ab = c0 * l1^2 * l2 with rational forms (double l1).
        let (c0, l1, l2);
        if a.is_zero() && e.is_zero() {
            // x y (b x + c y) with exactly one of b, c nonzero here.
            if c.is_zero() {
                // b x^2 y: double factor x, single factor y
                c0 = b.clone();
                l1 = (Q::one(), Q::zero());
                l2 = (Q::zero(), Q::one());
            } else {
                // c x y^2: double factor y, single factor x
                c0 = c.clone();
                l1 = (Q::zero(), Q::one());
                l2 = (Q::one(), Q::zero());
            }
        } else {
            // Reduce to leading coefficient nonzero in some variable; work
            // with p(t) = f3^ab(t, 1) or its swap.
            let swapped = a.is_zero();
            let (pa, pb, pc, pe) = if swapped {
                (e.clone(), c.clone(), b.clone(), a.clone())
            } else {
                (a.clone(), b.clone(), c.clone(), e.clone())
            };
            let p = vec![pe, pc, pb, pa.clone()];
            let g = uni_gcd(&p, &uni_deriv(&p));
            debug_assert_eq!(g.len(), 2, "double root must give a linear gcd");
            let t0 = -(&g[0] / &g[1]);
            let lin = vec![-t0.clone(), Q::one()];
            let quad = uni_div_exact(&p, &lin);
            let rest = uni_div_exact(&quad, &lin);
            debug_assert_eq!(rest.len(), 2);
            let t1 = -(&rest[0] / &rest[1]);
            // p = pa (t - t0)^2 (t - t1), with x = t, y = 1 (or swapped)
            c0 = pa;
            if swapped {
                l1 = (-t0, Q::one()); // y - t0 x in original variables
                l2 = (-t1, Q::one());
            } else {
                l1 = (Q::one(), -t0); // x - t0 y
                l2 = (Q::one(), -t1);
            }
        }
        // Send l2 -> x / c0 and l1 -> y, so the cubic becomes x y^2.
        let m = change_sending(l2, l1, c0.recip(), Q::one())?;
        let out = m.apply(f.body(), Some(n));
        chain.push_linear(m);
        return Ok((CubicCase::TwoFactors, TruncatedSeries::new(out, n), chain));
    }

    // One (triple) factor: f3^ab = c0 * l^3.
    let (c0, l) = if a.is_zero() {
        // a = 0 with a triple factor forces f3 = e y^3
        debug_assert!(b.is_zero() && c.is_zero());
        (e.clone(), (Q::zero(), Q::one()))
    } else {
        let t0 = -(&b / (&three * &a));
        (a.clone(), (Q::one(), -t0))
    };
    // Complement l to an invertible pair and send l -> s x with s^3 = 1/c0
    // when that cube root is rational.
    let complement = if l.0.is_zero() { (Q::one(), Q::zero()) } else { (Q::zero(), Q::one()) };
    let (s, exact) = match cbrt_exact(&c0.recip()) {
        Some(s) => (s, true),
        None => (Q::one(), false),
    };
    let m = change_sending(l, complement, s, Q::one())?;
    let out = m.apply(f.body(), Some(n));
    chain.push_linear(m);
    if !exact {
        chain.exact = false;
        chain
            .warnings
            .push("cubic coefficient is not a rational cube; leading form left unscaled".into());
    }
    Ok((CubicCase::OneFactor, TruncatedSeries::new(out, n), chain))
}

// ---------------------------------------------------------------------------
// Chasing engines
// ---------------------------------------------------------------------------

/// A univariate truncated polynomial `sum_t coeffs[t] * z^t`, read off a
/// chase: the surviving pure-power classes.
#[derive(Clone, Debug, PartialEq)]
pub struct ChasePoly {
    pub coeffs: Vec<(usize, Q)>,
    pub trunc: usize,
}

impl ChasePoly {
    /// Order of the polynomial: least degree with nonzero coefficient.
    pub fn ord(&self) -> Order {
        self.coeffs
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|&(t, _)| Order::Finite(t))
            .unwrap_or(Order::Infinite)
    }

    /// Least degree with nonzero coefficient satisfying `pred`.
    pub fn least_degree_where(&self, pred: impl Fn(usize) -> bool) -> Option<usize> {
        self.coeffs.iter().find(|(t, c)| !c.is_zero() && pred(*t)).map(|&(t, _)| t)
    }
}

fn canonical_class_of(letters: &[u8]) -> Word {
    Word::from_letters(letters).min_rotation()
}

/// Whether the canonical word is a power of x (letter 0) only.
fn is_pure_x(w: &Word) -> bool {
    w.0.iter().all(|&l| l == 0)
}

/// Whether the canonical word alternates x, y cyclically (even degree,
/// equal to (xy)^s up to rotation).
fn is_alternating(w: &Word) -> bool {
    let t = w.degree();
    t % 2 == 0 && (0..t).all(|i| w.0[i] != w.0[(i + 1) % t])
}

/// Gap tuple of a word with r >= 1 letters y: the canonical form is
/// x^{a1} y x^{a2} y ... x^{ar} y after rotating so the word ends with y;
/// returns (r, [a1..ar]) for the minimal such rotation.
fn gap_tuple(w: &Word) -> (usize, Vec<usize>) {
    let t = w.degree();
    let r = w.0.iter().filter(|&&l| l == 1).count();
    let mut best: Option<Vec<usize>> = None;
    for k in 0..t {
        let rot = w.rotate(k);
        if *rot.0.last().unwrap() != 1 {
            continue;
        }
        let mut gaps = Vec::with_capacity(r);
        let mut run = 0;
        for &l in &rot.0 {
            if l == 0 {
                run += 1;
            } else {
                gaps.push(run);
                run = 0;
            }
        }
        if best.as_ref().map_or(true, |b| gaps < *b) {
            best = Some(gaps);
        }
    }
    (r, best.expect("word contains a y"))
}

const CHASE_STEP_LIMIT: usize = 100_000;

/// Chase a potential with leading form `x y^2` (up to cyclic equivalence)
/// into `x y^2 + q(x)` mod the truncation degree. Returns `q` and the chain
/// realizing the equivalence. Each step has strictly positive depth at the
/// degree being cleaned, so the loop stabilizes below the truncation.
pub fn chase_two_factor(f: &TruncatedSeries) -> Result<(ChasePoly, AutoChain), Error> {
    if f.d() != 2 {
        return Err(Error::BadInput("the chase works in two variables".into()));
    }
    let n = f.trunc();
    let lead = cyclic_canonical(&f.body().truncate_at(3));
    let xyy = NCPoly::monomial(2, canonical_class_of(&[0, 1, 1]), Q::one());
    if lead != xyy {
        return Err(Error::BadInput("leading form must be x y^2".into()));
    }
    let mut chain = AutoChain::identity(2);
    let mut cur = f.body().truncate_below(n);
    let mut steps = 0usize;

    for t in 4..n {
        loop {
            let canon = cyclic_canonical(&cur.homogeneous_part(t));
            // Pick the next class containing y: decreasing y-count, then
            // lexicographic on the gap tuple.
            let mut picked: Option<(Word, Q, usize, Vec<usize>)> = None;
            for (m, c) in canon.terms() {
                if is_pure_x(m) {
                    continue;
                }
                let (r, gaps) = gap_tuple(m);
                let better = match &picked {
                    None => true,
                    Some((_, _, pr, pg)) => r > *pr || (r == *pr && gaps < *pg),
                };
                if better {
                    picked = Some((m.clone(), c.clone(), r, gaps));
                }
            }
            let Some((m, c, r, _)) = picked else { break };
            steps += 1;
            if steps > CHASE_STEP_LIMIT {
                return Err(Error::BadInput("chase failed to stabilize".into()));
            }

            let deg = m.degree();
            let mut tails = vec![NCPoly::zero(2); 2];
            // Find a rotation exposing adjacent y y, if any.
            let yy_rot = (0..deg)
                .map(|k| m.rotate(k))
                .filter(|w| w.0[deg - 2] == 1 && w.0[deg - 1] == 1)
                .min();
            if let Some(rot) = yy_rot {
                // m ~ h y y: kill via x -> x - c h (from x y^2 -> -c h y^2).
                let h = NCPoly::monomial(2, Word::from_letters(&rot.0[..deg - 2]), c.clone());
                tails[0] = h.neg();
            } else if r == 1 {
                // m ~ x^{t-1} y: kill via y -> y - (c/2) x^{t-2}
                // (x y^2 contributes -c/2 (x^{t-1} y + x y x^{t-2}), both in
                // the class of m).
                let h = NCPoly::monomial(
                    2,
                    Word::from_letters(&vec![0u8; deg - 2]),
                    &c / Q::from_integer(2.into()),
                );
                tails[1] = h.neg();
            } else {
                // Isolated y's: rotate to w x y and kill via y -> y - c w
                // (x y^2 contributes -c x y w ~ -c m, plus the companion
                // -c x w y at the same degree with one x displaced).
                let rot = (0..deg)
                    .map(|k| m.rotate(k))
                    .filter(|w| w.0[deg - 2] == 0 && w.0[deg - 1] == 1)
                    .min()
                    .expect("word with a y but no yy has an xy");
                let h = NCPoly::monomial(2, Word::from_letters(&rot.0[..deg - 2]), c.clone());
                tails[1] = h.neg();
            }
            let step = UnitriangularAuto::new(tails)?;
            cur = step.apply(&cur, Some(n));
            chain.push_unitriangular(step);
        }
    }

    let mut coeffs = Vec::new();
    for t in 4..n {
        let canon = cyclic_canonical(&cur.homogeneous_part(t));
        for (m, c) in canon.terms() {
            debug_assert!(is_pure_x(m), "only pure x-powers survive the chase");
            if is_pure_x(m) {
                coeffs.push((t, c.clone()));
            }
        }
    }
    Ok((ChasePoly { coeffs, trunc: n }, chain))
}

/// Chase a potential with leading form `x^3 + y^3` (up to cyclic
/// equivalence) into `x^3 + y^3 + p(xy)` mod the truncation degree, with
/// `p` supported in even total degrees `2s` (the class of `(xy)^s`).
pub fn chase_three_factor(f: &TruncatedSeries) -> Result<(ChasePoly, AutoChain), Error> {
    if f.d() != 2 {
        return Err(Error::BadInput("the chase works in two variables".into()));
    }
    let n = f.trunc();
    let lead = cyclic_canonical(&f.body().truncate_at(3));
    let mut x3y3 = NCPoly::monomial(2, canonical_class_of(&[0, 0, 0]), Q::one());
    x3y3.add_term(canonical_class_of(&[1, 1, 1]), Q::one());
    if lead != x3y3 {
        return Err(Error::BadInput("leading form must be x^3 + y^3".into()));
    }
    let mut chain = AutoChain::identity(2);
    let mut cur = f.body().truncate_below(n);
    let third = Q::from_integer(3.into()).recip();

    for t in 4..n {
        // Batch all non-alternating class kills of this degree into one
        // unitriangular step: each class c*m rotates to w a a (a in {x, y})
        // and dies under a -> a - (c/3) w via the cube a^3; interactions
        // land in strictly higher degrees.
        let canon = cyclic_canonical(&cur.homogeneous_part(t));
        let mut tails = vec![NCPoly::zero(2); 2];
        let mut any = false;
        for (m, c) in canon.terms() {
            if is_alternating(m) {
                continue; // survives into p
            }
            let deg = m.degree();
            let rot = (0..deg)
                .map(|k| m.rotate(k))
                .filter(|w| w.0[deg - 2] == w.0[deg - 1])
                .min()
                .expect("non-alternating word has adjacent equal letters");
            let a = rot.0[deg - 1] as usize;
            tails[a].add_term(Word::from_letters(&rot.0[..deg - 2]), -(c * &third));
            any = true;
        }
        if any {
            let step = UnitriangularAuto::new(tails)?;
            cur = step.apply(&cur, Some(n));
            chain.push_unitriangular(step);
        }
    }

    let mut coeffs = Vec::new();
    for t in (4..n).step_by(2) {
        let canon = cyclic_canonical(&cur.homogeneous_part(t));
        for (m, c) in canon.terms() {
            debug_assert!(is_alternating(m), "only alternating classes survive");
            if is_alternating(m) {
                coeffs.push((t / 2, c.clone()));
            }
        }
    }
    Ok((ChasePoly { coeffs, trunc: n }, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::cyclically_equivalent;
    use crate::quotient::dims;
    use crate::rational::{q, qr};

    fn x() -> NCPoly {
        NCPoly::var(2, 0)
    }
    fn y() -> NCPoly {
        NCPoly::var(2, 1)
    }
    fn mono(ls: &[u8], c: i64) -> NCPoly {
        NCPoly::monomial(2, Word::from_letters(ls), q(c))
    }

    #[test]
    fn linear_auto_rejects_singular() {
        assert!(LinearAuto::new(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).is_err());
        assert!(LinearAuto::new(vec![vec![q(1), q(1)], vec![q(0), q(1)]]).is_ok());
    }

    #[test]
    fn unitriangular_depth_and_fixed_part() {
        let tails = vec![y().pow(3), NCPoly::zero(2)];
        let a = UnitriangularAuto::new(tails).unwrap();
        assert_eq!(a.depth(), Order::Finite(2));
        // depth 2: degrees <= 2 unchanged
        let f = x().pow(2).add(&mono(&[0, 1], 5)).add(&x().pow(3));
        let img = a.apply(&f, Some(6));
        assert_eq!(img.homogeneous_part(2), f.homogeneous_part(2));
        assert_ne!(img, f);

        // order-1 tails are rejected
        assert!(UnitriangularAuto::new(vec![y(), NCPoly::zero(2)]).is_err());
    }

    #[test]
    fn identity_chain_is_identity() {
        let f = TruncatedSeries::new(x().pow(2).add(&y().pow(4)), 8);
        let chain = AutoChain::identity(2);
        assert_eq!(chain.apply(&f).unwrap(), f);
    }

    #[test]
    fn lemma_move_subtracts_h_y_squared() {
        // (x -> x - h, y -> y) applied to x y^2 gives x y^2 - h y^2
        let h = x().pow(2);
        let a = UnitriangularAuto::new(vec![h.neg(), NCPoly::zero(2)]).unwrap();
        let img = a.apply(&mono(&[0, 1, 1], 1), Some(10));
        let expect = mono(&[0, 1, 1], 1).sub(&mono(&[0, 0, 1, 1], 1));
        assert_eq!(img, expect);
    }

    #[test]
    fn split_already_split() {
        let f = TruncatedSeries::new(x().pow(2).add(&y().pow(4)), 8);
        let (r, g, chain) = split_quadratic(&f).unwrap();
        assert_eq!(r, 1);
        assert!(chain.exact);
        assert_eq!(g.body(), &y().pow(4));
    }

    #[test]
    fn split_degenerate_quadratic() {
        // x^2 + xy + yx + y^2 has symmetric rank 1
        let f2 = x().pow(2).add(&mono(&[0, 1], 1)).add(&mono(&[1, 0], 1)).add(&y().pow(2));
        let f = TruncatedSeries::new(f2, 8);
        let (r, g, chain) = split_quadratic(&f).unwrap();
        assert_eq!(r, 1);
        assert!(chain.exact);
        assert!(g.is_zero());
        // replay: image really is x^2
        let img = chain.apply(&f).unwrap();
        assert!(cyclically_equivalent(img.body(), &x().pow(2)));
    }

    #[test]
    fn split_completion_example() {
        // x^2 + (2/3)(x y^2 + y x y + y^2 x): completion pushes everything
        // into the square, leaving g = 0 mod 8... the invariant content is
        // r = 1 and the dims of the image agree with the input.
        let cross = mono(&[0, 1, 1], 1).add(&mono(&[1, 0, 1], 1)).add(&mono(&[1, 1, 0], 1));
        let f = x().pow(2).add(&cross.scale(&qr(2, 3)));
        let series = TruncatedSeries::new(f.clone(), 10);
        let (r, g, chain) = split_quadratic(&series).unwrap();
        assert_eq!(r, 1);
        assert!(chain.exact);
        // the residual is supported on y only
        assert!(g.body().terms().all(|(w, _)| w.0.iter().all(|&l| l == 1)));
        // chain soundness: dims are preserved
        let img = chain.apply(&series).unwrap();
        let d1 = dims(&f, 6).unwrap();
        let d2 = dims(img.body(), 6).unwrap();
        assert_eq!(d1.dims, d2.dims);
    }

    #[test]
    fn split_nonsquare_coefficient_flags_inexact() {
        // 2x^2 + y^3: lambda = 2 is not a rational square
        let f = TruncatedSeries::new(x().pow(2).scale(&q(2)).add(&y().pow(3)), 8);
        let (r, _, chain) = split_quadratic(&f).unwrap();
        assert_eq!(r, 1);
        assert!(!chain.exact);
    }

    #[test]
    fn split_rejects_linear_terms() {
        let f = TruncatedSeries::new(x().add(&y().pow(2)), 8);
        assert!(split_quadratic(&f).is_err());
    }

    #[test]
    fn cubic_cases_from_discriminant() {
        // x^3 + y^3: three factors, already normal
        let f = TruncatedSeries::new(x().pow(3).add(&y().pow(3)), 8);
        let (case, out, chain) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::ThreeFactors);
        assert!(chain.exact);
        assert_eq!(out.body(), f.body());

        // x y^2: two factors (a = e = 0 branch)
        let f = TruncatedSeries::new(mono(&[0, 1, 1], 1), 8);
        let (case, out, chain) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::TwoFactors);
        assert!(chain.exact);
        assert!(cyclically_equivalent(&out.body().homogeneous_part(3), &mono(&[0, 1, 1], 1)));

        // x^3 + x^2 y: two factors via the a(b^2 - 3ac) != 0 condition
        let f = TruncatedSeries::new(x().pow(3).add(&mono(&[0, 0, 1], 1)), 8);
        let (case, out, chain) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::TwoFactors);
        assert!(chain.exact);
        let canon = cyclic_canonical(&out.body().homogeneous_part(3));
        assert_eq!(canon, NCPoly::monomial(2, Word::from_letters(&[0, 1, 1]), q(1)));

        // x^3: one factor
        let f = TruncatedSeries::new(x().pow(3).add(&y().pow(5)), 8);
        let (case, _, chain) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::OneFactor);
        assert!(chain.exact);

        // (x + y)^3 abelianized: one factor, off-axis
        let s = x().add(&y());
        let f = TruncatedSeries::new(s.pow(3), 8);
        let (case, out, chain) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::OneFactor);
        assert!(chain.exact);
        let canon = cyclic_canonical(&out.body().homogeneous_part(3));
        assert_eq!(canon, NCPoly::monomial(2, Word::from_letters(&[0, 0, 0]), q(1)));

        // no cubic at all
        let f = TruncatedSeries::new(y().pow(4), 8);
        let (case, _, _) = normalize_cubic(&f).unwrap();
        assert_eq!(case, CubicCase::ZeroCubic);
    }

    #[test]
    fn cubic_rejects_quadratic_part() {
        let f = TruncatedSeries::new(x().pow(2).add(&y().pow(3)), 8);
        assert!(normalize_cubic(&f).is_err());
    }

    #[test]
    fn two_factor_chase_trivial() {
        let f = TruncatedSeries::new(mono(&[0, 1, 1], 1).add(&x().pow(4)), 10);
        let (qq, chain) = chase_two_factor(&f).unwrap();
        assert_eq!(qq.coeffs, vec![(4, q(1))]);
        assert!(chain.steps().is_empty());
    }

    #[test]
    fn two_factor_chase_preserves_dims() {
        // x y^2 + x^3 y needs real moves; dims must be preserved and the
        // output must really be x y^2 + q(x) cyclically.
        let f0 = mono(&[0, 1, 1], 1).add(&mono(&[0, 0, 0, 1], 1));
        let n = 9;
        let f = TruncatedSeries::new(f0.clone(), n);
        let (qq, chain) = chase_two_factor(&f).unwrap();
        let img = chain.apply(&f).unwrap();
        // rebuild x y^2 + q(x) and compare cyclically degree by degree
        let mut target = mono(&[0, 1, 1], 1);
        for (t, c) in &qq.coeffs {
            target.add_term(Word::from_letters(&vec![0u8; *t]), c.clone());
        }
        for t in 0..n {
            assert!(
                cyclically_equivalent(&img.body().homogeneous_part(t), &target.homogeneous_part(t)),
                "degree {t} mismatch"
            );
        }
        // chain soundness at a bound the truncation certifies
        let d1 = dims(&f0, 6).unwrap();
        let d2 = dims(img.body(), 6).unwrap();
        assert_eq!(d1.dims, d2.dims);
    }

    #[test]
    fn two_factor_chase_degree_eight_example() {
        // x y^2 + l51 x^5 y x y + l42 x^4 y x^2 y + l33 x^3 y x^3 y: the
        // isolated-y moves funnel everything into the single class
        // -(l51 - l42 + l33) x^6 y^2, which then dies for free; the final q
        // has no degree-8 term at all.
        let build = |l51: i64, l42: i64, l33: i64| {
            mono(&[0, 1, 1], 1)
                .add(&mono(&[0, 0, 0, 0, 0, 1, 0, 1], l51))
                .add(&mono(&[0, 0, 0, 0, 1, 0, 0, 1], l42))
                .add(&mono(&[0, 0, 0, 1, 0, 0, 0, 1], l33))
        };
        let f = TruncatedSeries::new(build(1, 1, 1), 9);
        let (qq, chain) = chase_two_factor(&f).unwrap();
        assert!(qq.coeffs.is_empty());
        // replay really is x y^2 cyclically below 9
        let img = chain.apply(&f).unwrap();
        let target = mono(&[0, 1, 1], 1);
        for t in 0..9 {
            assert!(cyclically_equivalent(
                &img.body().homogeneous_part(t),
                &target.homogeneous_part(t)
            ));
        }
        // The moves funnel a net coefficient of -(l51 - l42 + l33) = -4
        // through the x^6 y^2 class; every free kill of that class shows up
        // as an x^6 term in an x-tail.
        let f = TruncatedSeries::new(build(2, 3, 5), 9);
        let (_, chain) = chase_two_factor(&f).unwrap();
        let x6 = Word::from_letters(&[0u8; 6]);
        let mut funneled = q(0);
        for s in chain.steps() {
            if let AutoStep::Unitriangular(u) = s {
                funneled = &funneled + &u.tails()[0].coeff(&x6);
            }
        }
        // each free kill contributes -c for the class coefficient c it
        // removes, so the total is the negated net flow into x^6 y^2
        assert_eq!(funneled, q(2 - 3 + 5));
    }

    #[test]
    fn three_factor_chase_trivial() {
        let f0 = x().pow(3).add(&y().pow(3));
        let f = TruncatedSeries::new(f0.add(&x().mul(&y()).pow(2)), 10);
        let (p, chain) = chase_three_factor(&f).unwrap();
        assert_eq!(p.coeffs, vec![(2, q(1))]);
        assert!(chain.steps().is_empty());
        assert_eq!(p.ord(), Order::Finite(2));

        let f = TruncatedSeries::new(x().pow(3).add(&y().pow(3)), 10);
        let (p, _) = chase_three_factor(&f).unwrap();
        assert_eq!(p.ord(), Order::Infinite);
    }

    #[test]
    fn three_factor_chase_kills_non_alternating() {
        // x^3 + y^3 + x^2 y^2: the x^2 y^2 class is not alternating and
        // dies; the chase output p records only alternating classes.
        let f0 = x().pow(3).add(&y().pow(3)).add(&mono(&[0, 0, 1, 1], 1));
        let f = TruncatedSeries::new(f0.clone(), 10);
        let (p, chain) = chase_three_factor(&f).unwrap();
        // replay really is x^3 + y^3 + p(xy) cyclically below 10
        let img = chain.apply(&f).unwrap();
        let mut target = x().pow(3).add(&y().pow(3));
        for (s, c) in &p.coeffs {
            // class (xy)^s: canonical representative with weight split over
            // the two rotations merged already by cyclic_canonical; rebuild
            // as c * canonical word
            let mut ls = Vec::new();
            for _ in 0..*s {
                ls.push(0u8);
                ls.push(1u8);
            }
            target.add_term(canonical_class_of(&ls), c.clone());
        }
        for t in 0..10 {
            let a = cyclic_canonical(&img.body().homogeneous_part(t));
            let b = cyclic_canonical(&target.homogeneous_part(t));
            assert_eq!(a, b, "degree {t}");
        }
        // dims agree between input and replayed output
        let d1 = dims(&f0, 7).unwrap();
        let d2 = dims(img.body(), 7).unwrap();
        assert_eq!(d1.dims, d2.dims);
    }

    #[test]
    fn chase_rejects_wrong_leading_form() {
        let f = TruncatedSeries::new(x().pow(3).add(&y().pow(4)), 8);
        assert!(chase_two_factor(&f).is_err());
        assert!(chase_three_factor(&f).is_err());
    }
}

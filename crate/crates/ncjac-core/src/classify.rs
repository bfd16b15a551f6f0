//! End-to-end normal-form classification of potentials.
//!
//! The pipeline splits off the nondegenerate quadratic part, normalizes the
//! leading cubic of the two-variable residual, runs the appropriate chase,
//! and reads the normal-form parameters off the surviving coefficients.
//! Every claim is stamped with the truncation degree it was certified at:
//! an "infinity" parameter always means "no such term found up to degree N".

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::auto::{
    chase_three_factor, chase_two_factor, normalize_cubic, split_quadratic, AutoChain, ChasePoly,
    CubicCase,
};
use crate::calculus::cyclic_canonical;
use crate::error::Error;
use crate::io::{print, Report};
use crate::poly::{NCPoly, Order, TruncatedSeries};
use crate::quotient::{abelian_dims, dims, dims_with_generators, quotient_dims, relation_image_check, DimReport};
use crate::rational::{q, render, Q};
use crate::word::{Context, Word};

// ---------------------------------------------------------------------------
// Tags
// ---------------------------------------------------------------------------

/// A normal-form parameter. `InfinityAt(N)` is a truncation-limited claim:
/// no term witnessing a finite value exists up to degree `N`. `Undetermined`
/// means the exact normalizing change of coordinates does not exist over the
/// rationals, so the parameter is not named rather than approximated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Param {
    Finite(usize),
    InfinityAt(usize),
    Undetermined,
}

impl Param {
    pub fn render(&self) -> String {
        match self {
            Param::Finite(n) => n.to_string(),
            Param::InfinityAt(n) => format!("inf@{n}"),
            Param::Undetermined => "undetermined".into(),
        }
    }
}

/// The classification verdict.
///
/// `A(n)` represents `x^2 + y^n` (certified dimension `n - 1`).
/// `D(n, m)` represents `x y^2 + x^{2n} + x^{2m+1}` with `n >= 2`,
/// `m >= 1` and `m <= 2n - 2` (an odd term with `m >= 2n - 1` is removable,
/// so the tag records infinity in the `m` slot instead). The table-style
/// label shifts the second index up by one, writing the odd exponent as
/// `2m' - 1`; both renderings are reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NormalForm {
    CorankZero,
    A(Param),
    D { n: Param, m: Param },
    EPartial,
    JdimGE3,
}

impl NormalForm {
    /// Internal label, `m` slot in the `x^{2m+1}` convention.
    pub fn label(&self) -> String {
        match self {
            NormalForm::CorankZero => "CorankZero".into(),
            NormalForm::A(n) => format!("A({})", n.render()),
            NormalForm::D { n, m } => format!("D({}, {})", n.render(), m.render()),
            NormalForm::EPartial => "EPartial".into(),
            NormalForm::JdimGE3 => "JdimGE3".into(),
        }
    }

    /// Table-style label: the second D index is shifted so the odd exponent
    /// reads `2m - 1`.
    pub fn table_label(&self) -> String {
        match self {
            NormalForm::CorankZero => "A_2-like (corank 0)".into(),
            NormalForm::A(n) => format!("A_{{{}}}", n.render()),
            NormalForm::D { n, m } => {
                let m_shifted = match m {
                    Param::Finite(v) => Param::Finite(v + 1),
                    other => other.clone(),
                };
                format!("D_{{{},{}}}", n.render(), m_shifted.render())
            }
            NormalForm::EPartial => "E (partial: x^3 + higher order)".into(),
            NormalForm::JdimGE3 => "wild (growth degree >= 3)".into(),
        }
    }

    pub fn is_d(&self) -> bool {
        matches!(self, NormalForm::D { .. })
    }
}

/// The pair of curve-counting invariants attached to a finite-dimensional
/// Type D potential: `n1` is the certified abelianized dimension and `n2`
/// the quarter of the noncommutative excess.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GVPair {
    pub n1: usize,
    pub n2: usize,
}

/// Whether a pair lies in the admissible lattice: `(2m+3, m)` with
/// `m >= 1`, or `(2n, b)` with `b >= n - 1 >= 1`.
pub fn gv_admissible(p: &GVPair) -> bool {
    if p.n1 % 2 == 1 {
        p.n1 >= 5 && 2 * p.n2 + 3 == p.n1
    } else {
        p.n1 >= 4 && p.n2 + 1 >= p.n1 / 2
    }
}

/// Verdict of the central-slice comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ElephantTag {
    A1,
    D4,
    E6Witnessed,
    Unknown,
}

// ---------------------------------------------------------------------------
// Small builders
// ---------------------------------------------------------------------------

fn poly2(terms: &[(&[u8], i64)]) -> NCPoly {
    let mut p = NCPoly::zero(2);
    for (letters, c) in terms {
        p.add_term(Word::from_letters(letters), q(*c));
    }
    p
}

fn xpow(k: usize) -> Vec<u8> {
    vec![0u8; k]
}

fn ypow(k: usize) -> Vec<u8> {
    vec![1u8; k]
}

/// Map a polynomial supported on letters `offset..offset+e` down to `e`
/// letters.
fn compress_letters(g: &NCPoly, offset: usize, e: usize) -> Result<NCPoly, Error> {
    let mut out = NCPoly::zero(e);
    for (w, c) in g.terms() {
        let letters: Result<Vec<u8>, Error> = w
            .0
            .iter()
            .map(|&l| {
                let l = l as usize;
                if l < offset || l >= offset + e {
                    Err(Error::BadInput("residual touches a split variable".into()))
                } else {
                    Ok((l - offset) as u8)
                }
            })
            .collect();
        out.add_term(Word::from_letters(&letters?), c.clone());
    }
    Ok(out)
}

/// The canonical representative potential of a determined tag, in two
/// variables (split-off square variables are omitted; they only shift the
/// variable count).
pub fn make_normal_form(tag: &NormalForm) -> Result<NCPoly, Error> {
    match tag {
        NormalForm::CorankZero => Ok(poly2(&[(&xpow(2), 1), (&ypow(2), 1)])),
        NormalForm::A(Param::Finite(n)) => {
            if *n < 2 {
                return Err(Error::BadInput("A(n) requires n >= 2".into()));
            }
            Ok(poly2(&[(&xpow(2), 1), (&ypow(*n), 1)]))
        }
        NormalForm::A(Param::InfinityAt(_)) => Ok(poly2(&[(&xpow(2), 1)])),
        NormalForm::D { n, m } => {
            let mut f = poly2(&[(&[0, 1, 1], 1)]);
            let n_val = match n {
                Param::Finite(v) => {
                    if *v < 2 {
                        return Err(Error::BadInput("D(n, m) requires n >= 2".into()));
                    }
                    f.add_term(Word::from_letters(&xpow(2 * v)), q(1));
                    Some(*v)
                }
                Param::InfinityAt(_) => None,
                Param::Undetermined => {
                    return Err(Error::BadInput("undetermined parameter has no representative".into()))
                }
            };
            match m {
                Param::Finite(v) => {
                    if *v < 1 {
                        return Err(Error::BadInput("D(n, m) requires m >= 1".into()));
                    }
                    if let Some(nv) = n_val {
                        if *v >= 2 * nv - 1 {
                            return Err(Error::BadInput(
                                "D(n, m) with m >= 2n - 1 is not a normal form (the odd term is removable)"
                                    .into(),
                            ));
                        }
                    }
                    f.add_term(Word::from_letters(&xpow(2 * v + 1)), q(1));
                }
                Param::InfinityAt(_) => {}
                Param::Undetermined => {
                    return Err(Error::BadInput("undetermined parameter has no representative".into()))
                }
            }
            Ok(f)
        }
        NormalForm::A(Param::Undetermined) => {
            Err(Error::BadInput("undetermined parameter has no representative".into()))
        }
        NormalForm::EPartial | NormalForm::JdimGE3 => {
            Err(Error::BadInput("this tag has no canonical representative".into()))
        }
    }
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct Pipeline {
    n_max: usize,
    tag: NormalForm,
    dim_report: DimReport,
    ab_report: DimReport,
    /// Chain-applied image of `f` in the original variables (quadratic part
    /// diagonalized, split-variable classes of the tail removed).
    split_image: NCPoly,
    /// Compressed two-variable residual, when the corank is 2.
    residual2: Option<NCPoly>,
    /// Two-variable cubic stage, when the corank is 2.
    cubic: Option<(CubicCase, TruncatedSeries, AutoChain)>,
    report: Report,
}

fn chase_json(p: &ChasePoly) -> serde_json::Value {
    json!(p
        .coeffs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, c)| json!([t, render(c)]))
        .collect::<Vec<_>>())
}

fn run_pipeline(f: &NCPoly, n_max: usize) -> Result<Pipeline, Error> {
    let d = f.d();
    if d == 0 || d > 4 {
        return Err(Error::BadInput(format!(
            "classification supports 1 to 4 variables, got {d}"
        )));
    }
    if n_max < 4 {
        return Err(Error::BadInput("classification needs truncation degree >= 4".into()));
    }
    let ctx = Context::standard(d)?;
    let dim_report = dims(f, n_max)?;
    let ab_report = abelian_dims(f, n_max)?;

    let mut notes: Vec<String> = Vec::new();
    let series = TruncatedSeries::new(f.clone(), n_max + 1);
    let (rank, residual, split_chain) = split_quadratic(&series)?;
    let corank = d - rank;
    if dim_report.corank() != corank {
        notes.push(format!(
            "corank cross-check mismatch: splitting found {corank}, dimension filtration reports {}",
            dim_report.corank()
        ));
    }
    let split_image = split_chain.apply_poly(f, Some(n_max + 1));
    let mut exact = split_chain.exact;
    let mut chain_desc = vec![json!({ "stage": "split", "chain": split_chain.describe(&ctx) })];

    let mut residual2: Option<NCPoly> = None;
    let mut cubic: Option<(CubicCase, TruncatedSeries, AutoChain)> = None;
    let mut chase: Option<ChasePoly> = None;

    let tag = match corank {
        0 => NormalForm::CorankZero,
        1 => match residual.ord() {
            Order::Finite(n) => NormalForm::A(Param::Finite(n)),
            Order::Infinite => NormalForm::A(Param::InfinityAt(n_max)),
        },
        2 => {
            let g2 = compress_letters(residual.body(), rank, 2)?;
            residual2 = Some(g2.clone());
            if g2.is_zero() {
                notes.push("residual vanishes up to the truncation: two free variables remain".into());
                NormalForm::JdimGE3
            } else {
                let ctx2 = Context::xy();
                let (case, image, cchain) = normalize_cubic(&TruncatedSeries::new(g2, n_max + 1))?;
                exact = exact && cchain.exact;
                chain_desc.push(json!({ "stage": "cubic", "case": case, "chain": cchain.describe(&ctx2) }));
                let tag = match case {
                    CubicCase::ZeroCubic => NormalForm::JdimGE3,
                    CubicCase::OneFactor => NormalForm::EPartial,
                    CubicCase::TwoFactors => {
                        if cchain.exact {
                            let (qp, qchain) = chase_two_factor(&image)?;
                            exact = exact && qchain.exact;
                            chain_desc.push(json!({ "stage": "chase", "chain": qchain.describe(&ctx2) }));
                            let even = qp.least_degree_where(|t| t % 2 == 0);
                            let odd = qp.least_degree_where(|t| t % 2 == 1);
                            chase = Some(qp);
                            match (even, odd) {
                                (Some(te), Some(to)) => {
                                    let n = te / 2;
                                    let m = (to - 1) / 2;
                                    if m >= 2 * n - 1 {
                                        notes.push(format!(
                                            "odd term x^{} is removable against x^{}, dropped from the tag",
                                            2 * m + 1,
                                            2 * n
                                        ));
                                        NormalForm::D {
                                            n: Param::Finite(n),
                                            m: Param::InfinityAt(n_max),
                                        }
                                    } else {
                                        NormalForm::D { n: Param::Finite(n), m: Param::Finite(m) }
                                    }
                                }
                                (Some(te), None) => NormalForm::D {
                                    n: Param::Finite(te / 2),
                                    m: Param::InfinityAt(n_max),
                                },
                                (None, Some(to)) => NormalForm::D {
                                    n: Param::InfinityAt(n_max),
                                    m: Param::Finite((to - 1) / 2),
                                },
                                (None, None) => NormalForm::D {
                                    n: Param::InfinityAt(n_max),
                                    m: Param::InfinityAt(n_max),
                                },
                            }
                        } else {
                            notes.push(
                                "two-factor leading form not normalizable over Q; parameters left unnamed"
                                    .into(),
                            );
                            NormalForm::D { n: Param::Undetermined, m: Param::Undetermined }
                        }
                    }
                    CubicCase::ThreeFactors => {
                        if cchain.exact {
                            let (pp, pchain) = chase_three_factor(&image)?;
                            exact = exact && pchain.exact;
                            chain_desc.push(json!({ "stage": "chase", "chain": pchain.describe(&ctx2) }));
                            let tag = match pp.ord() {
                                // the surviving alternating classes are
                                // indexed by s, with degree 2s
                                Order::Finite(s) => {
                                    NormalForm::D { n: Param::Finite(s), m: Param::Finite(1) }
                                }
                                Order::Infinite => NormalForm::D {
                                    n: Param::InfinityAt(n_max),
                                    m: Param::Finite(1),
                                },
                            };
                            notes.push(
                                "three-factor cubic: unified D form with odd exponent 3 (m = 1)".into(),
                            );
                            chase = Some(pp);
                            tag
                        } else {
                            notes.push(
                                "three-factor leading form not normalizable over Q; parameters left unnamed"
                                    .into(),
                            );
                            NormalForm::D { n: Param::Undetermined, m: Param::Undetermined }
                        }
                    }
                };
                cubic = Some((case, image, cchain));
                tag
            }
        }
        _ => NormalForm::JdimGE3,
    };

    // Assemble the report.
    let mut report = Report::new();
    report.push("potential", json!(print(f, &ctx)));
    report.push("variables", json!((0..d).map(|i| ctx.name(i).to_string()).collect::<Vec<_>>()));
    report.push("truncation_degree", json!(n_max));
    report.push("dims", json!(dim_report.dims));
    report.push("coranks", json!(dim_report.coranks));
    report.push("abelian_dims", json!(ab_report.dims));
    report.push("jdim_verdict", json!(dim_report.jdim_verdict));
    report.push("certified_dim", json!(dim_report.certified_dim));
    report.push("certified_abelian_dim", json!(ab_report.certified_dim));
    report.push("corank", json!(corank));
    report.push("tag", json!(tag.label()));
    report.push("table_label", json!(tag.table_label()));
    if let Some((case, _, _)) = &cubic {
        report.push("cubic_case", json!(case));
    }
    if let Some(p) = &chase {
        report.push("surviving_tail", chase_json(p));
    }
    report.push("exact_over_Q", json!(exact));
    report.push("chain", json!(chain_desc));

    // Cross-check: the representative of a determined tag must reproduce the
    // dimension filtration and its abelianization.
    if let Ok(rep) = make_normal_form(&tag) {
        let ctx2 = Context::xy();
        let rep_dims = dims(&rep, n_max)?;
        let rep_ab = abelian_dims(&rep, n_max)?;
        let ok = rep_dims.dims == dim_report.dims && rep_ab.dims == ab_report.dims;
        report.push("representative", json!(print(&rep, &ctx2)));
        report.push("representative_dims_match", json!(ok));
        if !ok {
            notes.push("representative cross-check FAILED: dimension filtrations disagree".into());
        }
    }

    // Curve-counting pair, when the tag is a certified finite D form.
    if tag.is_d() {
        if let (Some(total), Some(n1)) = (dim_report.certified_dim, ab_report.certified_dim) {
            if total >= n1 && (total - n1) % 4 == 0 {
                let pair = GVPair { n1, n2: (total - n1) / 4 };
                report.push("gv_admissible", json!(gv_admissible(&pair)));
                report.push("gv", json!(pair));
            }
        }
    }

    report.push("notes", json!(notes));

    Ok(Pipeline { n_max, tag, dim_report, ab_report, split_image, residual2, cubic, report })
}

/// Classify a potential in up to four variables at truncation degree
/// `n_max`, returning the normal-form tag and a full report.
pub fn classify(f: &NCPoly, n_max: usize) -> Result<(NormalForm, Report), Error> {
    let p = run_pipeline(f, n_max)?;
    Ok((p.tag, p.report))
}

// ---------------------------------------------------------------------------
// Curve-counting invariants
// ---------------------------------------------------------------------------

/// The invariant pair of a certified finite-dimensional Type D potential:
/// `n1` the abelianized dimension, `n2 = (dim - n1) / 4`.
pub fn gv_invariants(f: &NCPoly, n_max: usize) -> Result<(GVPair, Report), Error> {
    let p = run_pipeline(f, n_max)?;
    if !p.tag.is_d() {
        return Err(Error::Refused(format!(
            "invariant pair is defined only for Type D potentials (got {})",
            p.tag.label()
        )));
    }
    let total = p.dim_report.certified_dim.ok_or_else(|| {
        Error::Refused("potential is not certified finite-dimensional at this truncation".into())
    })?;
    let n1 = p.ab_report.certified_dim.ok_or_else(|| {
        Error::Refused("abelianized dimension did not stabilize at this truncation".into())
    })?;
    if total < n1 || (total - n1) % 4 != 0 {
        return Err(Error::Refused(format!(
            "dimension excess {total} - {n1} is not divisible by 4"
        )));
    }
    let pair = GVPair { n1, n2: (total - n1) / 4 };
    let mut report = p.report;
    if report.get("gv").is_none() {
        report.push("gv_admissible", json!(gv_admissible(&pair)));
        report.push("gv", json!(pair));
    }
    Ok((pair, report))
}

// ---------------------------------------------------------------------------
// Central slices and model algebras
// ---------------------------------------------------------------------------

/// Relations of the four-dimensional model algebra (the central-vertex
/// corner of the D4 preprojective algebra): `x^2, xy + yx, y^2`.
pub fn d4_model_relations() -> Vec<NCPoly> {
    vec![
        poly2(&[(&xpow(2), 1)]),
        poly2(&[(&[0, 1], 1), (&[1, 0], 1)]),
        poly2(&[(&ypow(2), 1)]),
    ]
}

/// Relations of the twelve-dimensional model algebra (the central-vertex
/// corner of the E6 preprojective algebra): `x^2, y^3, (x+y)^3`.
pub fn e6_model_relations() -> Vec<NCPoly> {
    let xy = poly2(&[(&[0], 1), (&[1], 1)]);
    vec![poly2(&[(&xpow(2), 1)]), poly2(&[(&ypow(3), 1)]), xy.pow(3)]
}

/// The generic presentation of the central slice in the E case:
/// `-x^2 + y^3`, `xy^2 + yxy + y^2x`, `lambda x^2 + mu (xyx + yx^2)`.
pub fn central_slice_relations(lambda: &Q, mu: &Q) -> Vec<NCPoly> {
    let mut third = NCPoly::zero(2);
    third.add_term(Word::from_letters(&xpow(2)), lambda.clone());
    third.add_term(Word::from_letters(&[0, 1, 0]), mu.clone());
    third.add_term(Word::from_letters(&[1, 0, 0]), mu.clone());
    vec![
        poly2(&[(&xpow(2), -1), (&ypow(3), 1)]),
        poly2(&[(&[0, 1, 1], 1), (&[1, 0, 1], 1), (&[1, 1, 0], 1)]),
        third,
    ]
}

/// The explicit substitution witnessing that the central slice surjects
/// onto the E6 model: `x -> x - xy - yx + yxy`, `y -> x + 2y - y^2 - yx`.
pub fn e6_witness_images() -> Vec<NCPoly> {
    vec![
        poly2(&[(&[0], 1), (&[0, 1], -1), (&[1, 0], -1), (&[1, 0, 1], 1)]),
        poly2(&[(&[0], 1), (&[1], 2), (&[1, 1], -1), (&[1, 0], -1)]),
    ]
}

/// The designated central element for the `x^3 + xy^3 + y^n` family,
/// `n >= 4`. The base `x^2 + xyx + yx^2` acquires a correction term whose
/// shape depends on `n mod 3`.
pub fn g6(n: usize) -> Result<NCPoly, Error> {
    if n < 4 {
        return Err(Error::BadInput("the designated central element needs n >= 4".into()));
    }
    let t = n / 3;
    let mut g = poly2(&[(&xpow(2), 1), (&[0, 1, 0], 1), (&[1, 0, 0], 1)]);
    let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
    let three_t = Q::from_integer(BigInt::from(3).pow(t as u32));
    match n % 3 {
        1 => {}
        2 => {
            // (-1)^t 3^t (3t + 2) x^{2t+1}
            let c = three_t * q(sign(t) * (3 * t as i64 + 2));
            g.add_term(Word::from_letters(&xpow(2 * t + 1)), c);
        }
        _ => {
            // (-1)^{t+1} 3^t t (x y x^{2t-2} + y x^{2t-1})
            let c = three_t * q(sign(t + 1) * t as i64);
            let mut w1 = vec![0u8, 1u8];
            w1.extend(xpow(2 * t - 2));
            let mut w2 = vec![1u8];
            w2.extend(xpow(2 * t - 1));
            g.add_term(Word::from_letters(&w1), c.clone());
            g.add_term(Word::from_letters(&w2), c);
        }
    }
    Ok(g)
}

fn fingerprint_matches(a: &DimReport, b: &DimReport) -> bool {
    a.dims == b.dims && a.certified_dim.is_some() && a.certified_dim == b.certified_dim
}

/// Quotient the algebra of `f` by its designated central slice and compare
/// the resulting dimension filtration against the stored model algebras.
pub fn elephant(f: &NCPoly, n_max: usize) -> Result<(ElephantTag, Report), Error> {
    let p = run_pipeline(f, n_max)?;
    let mut report = Report::new();
    report.push("tag", json!(p.tag.label()));

    match &p.tag {
        NormalForm::CorankZero | NormalForm::A(_) => {
            // Slice by the surviving variable; the quotient must collapse
            // to the ground field.
            let d = p.split_image.d();
            let s = NCPoly::var(d, d - 1);
            let qd = quotient_dims(&p.split_image, &[s], p.n_max)?;
            report.push("slice", json!(format!("{}", Context::standard(d)?.name(d - 1))));
            report.push("quotient_dims", json!(qd.dims));
            report.push("quotient_certified_dim", json!(qd.certified_dim));
            let tag = if qd.certified_dim == Some(1) { ElephantTag::A1 } else { ElephantTag::Unknown };
            Ok((tag, report))
        }
        NormalForm::D { .. } => {
            let (case, image, _) = p
                .cubic
                .as_ref()
                .ok_or_else(|| Error::Refused("no two-variable cubic stage available".into()))?;
            // The slice x^2 is designated in the x y^2 frame: either the
            // normalized two-factor image, or an input already given in
            // the unified shape x y^2 + powers of x.
            let base = if *case == CubicCase::TwoFactors {
                image.body().clone()
            } else {
                let r2 = p
                    .residual2
                    .clone()
                    .ok_or_else(|| Error::Refused("no two-variable residual available".into()))?;
                let canon = cyclic_canonical(&r2);
                let xyy = Word::from_letters(&[0, 1, 1]);
                let unified = !canon.coeff(&xyy).is_zero()
                    && canon.terms().all(|(w, _)| *w == xyy || w.0.iter().all(|&l| l == 0));
                if !unified {
                    return Err(Error::Refused(
                        "designated central slice x^2 is known only in the x y^2 frame".into(),
                    ));
                }
                r2
            };
            let s = poly2(&[(&xpow(2), 1)]);
            let qd = quotient_dims(&base, &[s], p.n_max)?;
            let model = dims_with_generators(2, &d4_model_relations(), p.n_max, None)?;
            report.push("slice", json!("x^2"));
            report.push("quotient_dims", json!(qd.dims));
            report.push("quotient_certified_dim", json!(qd.certified_dim));
            report.push("model_dims", json!(model.dims));
            let tag = if fingerprint_matches(&qd, &model) { ElephantTag::D4 } else { ElephantTag::Unknown };
            Ok((tag, report))
        }
        NormalForm::EPartial => {
            let (_, image, _) = p
                .cubic
                .as_ref()
                .ok_or_else(|| Error::Refused("no two-variable cubic stage available".into()))?;
            // Recognize the shape x^3 + x y^3 + y^n (unit coefficients).
            let canon = cyclic_canonical(image.body());
            let x3 = Word::from_letters(&xpow(3));
            let xy3 = Word::from_letters(&[0, 1, 1, 1]);
            let mut n_param: Option<usize> = None;
            let mut shape_ok = canon.coeff(&x3) == q(1) && canon.coeff(&xy3) == q(1);
            if shape_ok {
                for (w, c) in canon.terms() {
                    if *w == x3 || *w == xy3 {
                        continue;
                    }
                    let deg = w.degree();
                    if w.0.iter().all(|&l| l == 1) && *c == q(1) && deg >= 4 && n_param.is_none() {
                        n_param = Some(deg);
                    } else {
                        shape_ok = false;
                        break;
                    }
                }
            }
            let n = match (shape_ok, n_param) {
                (true, Some(n)) => n,
                _ => {
                    return Err(Error::Refused(
                        "no designated central element for this potential shape".into(),
                    ))
                }
            };
            let s = g6(n)?;
            let ctx2 = Context::xy();
            report.push("slice", json!(print(&s, &ctx2)));
            let qd = quotient_dims(image.body(), &[s], p.n_max)?;
            let model = dims_with_generators(2, &e6_model_relations(), p.n_max, None)?;
            report.push("quotient_dims", json!(qd.dims));
            report.push("quotient_certified_dim", json!(qd.certified_dim));
            report.push("model_dims", json!(model.dims));
            // The presentation-level witness: the explicit substitution
            // carries the generic slice relations into the model's ideal.
            let witness = relation_image_check(
                &e6_witness_images(),
                &central_slice_relations(&q(1), &q(1)),
                &e6_model_relations(),
                p.n_max.min(12),
            )?;
            report.push("witness_check", json!(witness));
            let tag = if fingerprint_matches(&qd, &model) && witness {
                ElephantTag::E6Witnessed
            } else {
                ElephantTag::Unknown
            };
            Ok((tag, report))
        }
        NormalForm::JdimGE3 => {
            Err(Error::Refused("no designated central element for this potential shape".into()))
        }
    }
}

// ---------------------------------------------------------------------------

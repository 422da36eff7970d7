//! Metric experiments on models: consistency of tuples, realisation, the
//! distance formula, passing-up and the standard product regions.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{diameter, CPoint, Dom, Model, ModelError, Point};
use crate::structure::Relation;
use crate::word::Word;

/// A bounded subset of 𝒞U for each listed domain. Domains not listed are
/// bounded ones whose spaces are single points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConsistentTuple {
    pub entries: BTreeMap<Dom, Vec<CPoint>>,
}

impl ConsistentTuple {
    /// The tuple `(π_U(x))_U` over the unbounded domains of `doms`.
    pub fn of_point(model: &Model, doms: &[Dom], x: &Point) -> Self {
        let entries = doms
            .iter()
            .filter(|u| !model.is_bounded(u))
            .map(|u| (u.clone(), vec![model.project(x, u)]))
            .collect();
        ConsistentTuple { entries }
    }
}

fn set_dist(model: &Model, u: &Dom, a: &[CPoint], b: &CPoint) -> f64 {
    a.iter().map(|p| model.cdist(u, p, b)).fold(f64::INFINITY, f64::min)
}

/// Largest distance from `p` to a point of `set`.
fn reach(model: &Model, u: &Dom, p: &CPoint, set: &[CPoint]) -> f64 {
    set.iter().map(|q| model.cdist(u, p, q)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConsistencyReport {
    pub kappa: f64,
    pub pairs_checked: usize,
    /// Largest left-hand side seen in each of the three conditions.
    pub max_diameter: f64,
    pub max_transverse: f64,
    pub max_nested: f64,
    /// `(U, V, value)` for each failing condition; `U = V` for diameters.
    pub violations: Vec<(String, String, f64)>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_consistency(model: &Model, tuple: &ConsistentTuple, kappa: f64) -> ConsistencyReport {
    let mut r = ConsistencyReport { kappa, ..Default::default() };
    let entries: Vec<(&Dom, &Vec<CPoint>)> = tuple.entries.iter().collect();
    for (u, b) in &entries {
        let d = diameter(model, u, b);
        r.max_diameter = r.max_diameter.max(d);
        if d > kappa {
            r.violations.push((model.dom_id(u), model.dom_id(u), d));
        }
    }
    for (i, (u, bu)) in entries.iter().enumerate() {
        for (v, bv) in &entries[i + 1..] {
            let value = match model.relation(u, v) {
                Relation::Transverse => {
                    let (Some(rvu), Some(ruv)) = (model.rho(v, u), model.rho(u, v)) else { continue };
                    let val = set_dist(model, u, bu, &rvu).min(set_dist(model, v, bv, &ruv));
                    r.max_transverse = r.max_transverse.max(val);
                    val
                }
                Relation::NestedIn => nested_term(model, u, bu, v, bv, &mut r),
                Relation::Contains => nested_term(model, v, bv, u, bu, &mut r),
                _ => continue,
            };
            r.pairs_checked += 1;
            if value > kappa {
                r.violations.push((model.dom_id(u), model.dom_id(v), value));
            }
        }
    }
    r
}

/// `min{d_V(b_V, ρ^U_V), diam(b_U ∪ ρ^V_U(b_V))}` for `U ⊊ V`.
fn nested_term(model: &Model, u: &Dom, bu: &[CPoint], v: &Dom, bv: &[CPoint], r: &mut ConsistencyReport) -> f64 {
    let first = model.rho(u, v).map_or(f64::INFINITY, |p| set_dist(model, v, bv, &p));
    let mut pts = bu.to_vec();
    let mut second = 0.0;
    for p in bv {
        match model.rho_down(v, u, p) {
            Some(q) => pts.push(q),
            None => second = f64::INFINITY,
        }
    }
    let val = first.min(second.max(diameter(model, u, &pts)));
    r.max_nested = r.max_nested.max(val);
    val
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realisation {
    pub x: Point,
    /// `max_U max_{p ∈ b_U} d_U(x, p)` for the returned point.
    pub theta_e: f64,
    /// Diameter of the set of points within `theta_e` of every entry, over
    /// the searched region.
    pub theta_u: f64,
    pub candidates_checked: usize,
}

/// `max_U max_{p ∈ b_U} d_U(x, p)`.
pub fn realisation_error(model: &Model, tuple: &ConsistentTuple, x: &Point) -> f64 {
    tuple.entries.iter().map(|(u, b)| reach(model, u, &model.project(x, u), b)).fold(0.0, f64::max)
}

/// Finds a point realising a consistent tuple. ℤⁿ is solved coordinatewise,
/// the free model by assembling syllables from the large coset entries and
/// then scanning the window ball, and products factorwise.
pub fn realise(model: &Model, tuple: &ConsistentTuple, kappa: f64) -> Result<Realisation, ModelError> {
    let report = check_consistency(model, tuple, kappa);
    if let Some((u, v, val)) = report.violations.first() {
        return Err(ModelError::Precondition(format!(
            "tuple is not {kappa}-consistent: {u}, {v} give {val}"
        )));
    }
    realise_unchecked(model, tuple)
}

fn realise_unchecked(model: &Model, tuple: &ConsistentTuple) -> Result<Realisation, ModelError> {
    match model {
        Model::Zn(m) => {
            let mut x = vec![0i64; m.n];
            let mut spans = vec![(0i64, 0i64); m.n];
            for (u, b) in &tuple.entries {
                if let Dom::Subset(mask) = u {
                    if mask.count_ones() == 1 {
                        let ints: Vec<i64> = b.iter().filter_map(|p| if let CPoint::Int(i) = p { Some(*i) } else { None }).collect();
                        let (lo, hi) = (*ints.iter().min().unwrap_or(&0), *ints.iter().max().unwrap_or(&0));
                        let i = mask.trailing_zeros() as usize;
                        x[i] = lo + (hi - lo) / 2;
                        spans[i] = (lo, hi);
                    }
                }
            }
            let x = Point::Zn(x);
            let theta_e = realisation_error(model, tuple, &x);
            // {t : t ≥ hi − θ and t ≤ lo + θ} in each coordinate
            let theta_u = spans.iter().map(|(lo, hi)| ((lo + theta_e as i64) - (hi - theta_e as i64)).max(0)).sum::<i64>() as f64;
            Ok(Realisation { x, theta_e, theta_u, candidates_checked: 1 })
        }
        Model::Free(m) => {
            let assembled = assemble_syllables(model, tuple);
            let mut best = (realisation_error(model, tuple, &assembled), assembled);
            // a vertex entry on the maximal domain is itself a candidate
            let vertices = tuple.entries.get(&Dom::FreeTop).into_iter().flatten().filter_map(|p| match p {
                CPoint::Vertex(w) => Some(Point::Free(w.clone())),
                _ => None,
            });
            let ball = ball(model, m.radius);
            for p in vertices.chain(ball.iter().cloned()).collect::<Vec<_>>().iter() {
                let err = realisation_error(model, tuple, p);
                if err < best.0 {
                    best = (err, p.clone());
                }
            }
            let theta_e = best.0;
            let close: Vec<&Point> = ball.iter().filter(|p| realisation_error(model, tuple, p) <= theta_e).collect();
            let mut theta_u = 0.0f64;
            for (i, p) in close.iter().enumerate() {
                for q in &close[i + 1..] {
                    theta_u = theta_u.max(model.dist(p, q));
                }
            }
            Ok(Realisation { x: best.1, theta_e, theta_u, candidates_checked: ball.len() + 1 })
        }
        Model::Product(p) => {
            let mut parts = Vec::new();
            let (mut theta_e, mut theta_u, mut checked) = (0.0f64, 0.0, 0);
            for (i, f) in p.factors.iter().enumerate() {
                let sub = ConsistentTuple {
                    entries: tuple
                        .entries
                        .iter()
                        .filter_map(|(u, b)| match u {
                            Dom::Factor(j, a) if *j == i => Some(((**a).clone(), b.clone())),
                            _ => None,
                        })
                        .collect(),
                };
                let r = realise_unchecked(f, &sub)?;
                theta_e = theta_e.max(r.theta_e);
                theta_u += r.theta_u;
                checked += r.candidates_checked;
                parts.push(r.x);
            }
            Ok(Realisation { x: Point::Tuple(parts), theta_e, theta_u, candidates_checked: checked })
        }
    }
}

/// Walks from the identity through the cosets whose entries differ from
/// the identity's projection, nearest cone first, moving along each coset
/// to its entry.
fn assemble_syllables(model: &Model, tuple: &ConsistentTuple) -> Point {
    let Model::Free(m) = model else { unreachable!("syllable assembly is for the free model") };
    let one = model.identity();
    let top = Dom::FreeTop;
    let mut large: Vec<(f64, &Dom, i64)> = Vec::new();
    for (u, b) in &tuple.entries {
        if let (Dom::Coset { .. }, Some(CPoint::Int(target))) = (u, b.first()) {
            if model.project(&one, u) != CPoint::Int(*target) {
                let cone = model.rho(u, &top).expect("cosets have cone points");
                large.push((model.cdist(&top, &model.project(&one, &top), &cone), u, *target));
            }
        }
    }
    large.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let mut p = Word::identity();
    for (_, u, target) in large {
        let Dom::Coset { gen, .. } = u else { continue };
        if m.coset(&p, *gen) != *u {
            continue;
        }
        let CPoint::Int(here) = model.project(&Point::Free(p.clone()), u) else { continue };
        let step = Word::letter(crate::word::Letter::new(*gen as usize, false)).pow(target - here);
        p = p.mul(&step);
    }
    Point::Free(p)
}

/// Group elements of word length ≤ r, without repeats.
pub fn ball(model: &Model, r: usize) -> Vec<Point> {
    let k = model.generator_names().len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for len in 0..=r {
        for w in Word::all_of_length(k, len) {
            let p = model.element(&w);
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairResidual {
    pub x: Point,
    pub y: Point,
    pub distance: f64,
    /// `Σ_U {{d_U(x, y)}}_s`.
    pub sum: f64,
    /// `A·sum + B − d`, non-negative on a feasible fit.
    pub upper_slack: f64,
    /// `d − (sum/A − B)`, non-negative on a feasible fit.
    pub lower_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceFit {
    pub threshold: f64,
    pub a: f64,
    pub b: f64,
    pub residuals: Vec<PairResidual>,
}

impl DistanceFit {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| r.upper_slack >= -1e-9 && r.lower_slack >= -1e-9)
    }
}

/// `Σ_U {{d_U(x, y)}}_s`, where `{{t}}_s` is `t` if `t ≥ s` and 0 otherwise.
pub fn thresholded_sum(model: &Model, x: &Point, y: &Point, s: f64) -> f64 {
    model.separating(x, y).into_iter().map(|(_, d)| if d >= s { d } else { 0.0 }).sum()
}

pub const FIT_CAP: f64 = 100.0;

/// Fits `A ≥ 1, B ≥ 0` minimising `A + B` subject to
/// `sum/A − B ≤ d ≤ A·sum + B` on every pair.
pub fn distance_formula_harness(model: &Model, s: f64, pairs: &[(Point, Point)]) -> Result<DistanceFit, ModelError> {
    if s <= model.e() && !matches!(model, Model::Zn(_)) {
        return Err(ModelError::Precondition(format!("threshold {s} must exceed E = {}", model.e())));
    }
    let data: Vec<(f64, f64)> = pairs.iter().map(|(x, y)| (model.dist(x, y), thresholded_sum(model, x, y, s))).collect();
    let needed_b = |a: f64| data.iter().map(|&(d, t)| (d - a * t).max(t / a - d)).fold(0.0, f64::max);
    let objective = |a: f64| a + needed_b(a);
    let (mut lo, mut hi) = (1.0f64, FIT_CAP);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if objective(m1) <= objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mut a = (lo + hi) / 2.0;
    if objective(1.0) <= objective(a) + 1e-9 {
        a = 1.0;
    }
    let b = needed_b(a);
    let residuals: Vec<PairResidual> = pairs
        .iter()
        .zip(&data)
        .map(|((x, y), &(d, t))| PairResidual {
            x: x.clone(),
            y: y.clone(),
            distance: d,
            sum: t,
            upper_slack: a * t + b - d,
            lower_slack: d - (t / a - b),
        })
        .collect();
    if b > FIT_CAP {
        let worst = residuals
            .iter()
            .min_by(|p, q| p.upper_slack.min(p.lower_slack).total_cmp(&q.upper_slack.min(q.lower_slack)))
            .expect("an infeasible fit has pairs");
        return Err(ModelError::Assertion(format!(
            "no fit with A, B ≤ {FIT_CAP}: pair {} / {} has d = {}, sum = {}",
            model.render_point(&worst.x),
            model.render_point(&worst.y),
            worst.distance,
            worst.sum
        )));
    }
    Ok(DistanceFit { threshold: s, a, b, residuals })
}

/// Seeded random pairs of points of word length ≤ `radius`.
pub fn sample_pairs(model: &Model, count: usize, radius: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (model.sample_point(&mut rng, radius), model.sample_point(&mut rng, radius))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassingUp {
    pub w: Dom,
    pub d_w: f64,
    /// A separating domain properly nested in `w`.
    pub below: Dom,
    /// Domains nested in V separating x from y by more than E.
    pub separating_count: usize,
    pub required: usize,
}

/// Finds `W ⊑ V` properly containing a domain that separates x from y by
/// more than E, with `d_W(x, y) > C`. Only domains with `d_W(x, y) > 0` can
/// qualify, so the scan runs over those.
pub fn passing_up(model: &Model, x: &Point, y: &Point, v: &Dom, c: f64) -> Result<PassingUp, ModelError> {
    let sep = model.separating(x, y);
    let below_v = |u: &Dom| matches!(model.relation(u, v), Relation::Equal | Relation::NestedIn);
    let big: Vec<&Dom> = sep.iter().filter(|(u, d)| *d > model.e() && below_v(u)).map(|(u, _)| u).collect();
    let required = model.passing_up_count(c);
    if big.len() < required {
        return Err(ModelError::Precondition(format!(
            "{} domains below {} separate the points by more than E, P({c}) = {required}",
            big.len(),
            model.dom_id(v)
        )));
    }
    let qualifying: Vec<(&Dom, f64, &Dom)> = sep
        .iter()
        .filter(|(w, d)| *d > c && below_v(w))
        .filter_map(|(w, d)| big.iter().find(|u| model.relation(u, w) == Relation::NestedIn).map(|u| (w, *d, *u)))
        .collect();
    let minimal = qualifying
        .iter()
        .find(|(w, _, _)| !qualifying.iter().any(|(w2, _, _)| model.relation(w2, w) == Relation::NestedIn))
        .ok_or_else(|| {
            ModelError::Assertion(format!("passing-up found no witness below {} for C = {c}", model.dom_id(v)))
        })?;
    Ok(PassingUp {
        w: minimal.0.clone(),
        d_w: minimal.1,
        below: minimal.2.clone(),
        separating_count: big.len(),
        required,
    })
}

/// Membership in the standard product region `P_U`, checked against the
/// domains in `doms`.
pub fn in_product_region(model: &Model, x: &Point, u: &Dom, doms: &[Dom]) -> bool {
    doms.iter().all(|v| match model.relation(u, v) {
        Relation::Transverse | Relation::NestedIn => {
            let r = model.rho(u, v).expect("ρ is defined for ⋔ and ⊊");
            model.cdist(v, &model.project(x, v), &r) <= model.e()
        }
        _ => true,
    })
}

/// Membership in the dominion `F_U` with basepoint `x0`.
pub fn in_dominion(model: &Model, x: &Point, u: &Dom, x0: &Point, doms: &[Dom]) -> bool {
    if !in_product_region(model, x, u, doms) {
        return false;
    }
    let near = |v: &Dom| model.d(v, x, x0) <= model.e();
    let orth_ok = doms.iter().filter(|v| model.relation(u, v) == Relation::Orthogonal).all(near);
    orth_ok && model.container(u).is_none_or(|c| near(&c))
}

/// `d(1, P_U)` over the ball of radius `r`, or `None` if the ball misses P_U.
pub fn distance_to_product_region(model: &Model, u: &Dom, doms: &[Dom], r: usize) -> Option<f64> {
    let one = model.identity();
    ball(model, r)
        .into_iter()
        .filter(|p| in_product_region(model, p, u, doms))
        .map(|p| model.dist(&one, &p))
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub checks: usize,
    pub worst: f64,
    pub violations: Vec<String>,
}

/// `min(d_U(x, ρ^V_U), d_V(x, ρ^U_V)) ≤ E` for transverse pairs of `doms`.
pub fn projection_consistency(model: &Model, doms: &[Dom], points: &[Point]) -> AxiomReport {
    let mut r = AxiomReport::default();
    let unbounded: Vec<&Dom> = doms.iter().filter(|u| !model.is_bounded(u)).collect();
    let mut rhos = Vec::new();
    for (i, u) in unbounded.iter().enumerate() {
        for v in &unbounded[i + 1..] {
            if model.relation(u, v) == Relation::Transverse {
                rhos.push((*u, *v, model.rho(v, u).expect("transverse"), model.rho(u, v).expect("transverse")));
            }
        }
    }
    for x in points {
        let proj: BTreeMap<&Dom, CPoint> = unbounded.iter().map(|u| (*u, model.project(x, u))).collect();
        for (u, v, rvu, ruv) in &rhos {
            let val = model.cdist(u, &proj[u], rvu).min(model.cdist(v, &proj[v], ruv));
            r.checks += 1;
            r.worst = r.worst.max(val);
            if val > model.e() {
                r.violations.push(format!("{} ⋔ {} at {}: {val}", model.dom_id(u), model.dom_id(v), model.render_point(x)));
            }
        }
    }
    r
}

/// `d_W(ρ^U_W, ρ^V_W) ≤ 2E` whenever `U ⊊ V` and both are defined.
pub fn rho_consistency(model: &Model, doms: &[Dom]) -> AxiomReport {
    let mut r = AxiomReport::default();
    for u in doms {
        for v in doms {
            if model.relation(u, v) != Relation::NestedIn {
                continue;
            }
            for w in doms {
                let (Some(vw), Some(uw)) = (model.rho(v, w), model.rho(u, w)) else { continue };
                let val = model.cdist(w, &uw, &vw);
                r.checks += 1;
                r.worst = r.worst.max(val);
                if val > 2.0 * model.e() {
                    r.violations.push(format!("{} ⊊ {}, W = {}: {val}", model.dom_id(u), model.dom_id(v), model.dom_id(w)));
                }
            }
        }
    }
    r
}

/// `d_U(x, y) ≤ E·d(x, y) + E` on the given pairs for every domain that
/// separates them.
pub fn lipschitz_check(model: &Model, pairs: &[(Point, Point)]) -> AxiomReport {
    let mut r = AxiomReport::default();
    for (x, y) in pairs {
        let bound = model.e() * model.dist(x, y) + model.e();
        for (u, d) in model.separating(x, y) {
            r.checks += 1;
            r.worst = r.worst.max(d - bound);
            if d > bound {
                r.violations.push(format!("{} at {} / {}", model.dom_id(&u), model.render_point(x), model.render_point(y)));
            }
        }
    }
    r
}

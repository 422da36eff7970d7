//! Executable versions of the constructive arguments: producing transverse
//! translates, the spread of ρ-points below a domain, and the search for a
//! domain above a transverse pair with growing subgroup projection.
//!
//! Every inequality an executor relies on is logged as an expression over
//! the model, so a finished trace can be re-evaluated from scratch.

use std::fmt::Write as _;
use std::sync::Arc;

use super::experiments::distance_to_product_region;
use super::{BigSetConfig, CPoint, Dom, Model, Point};
use crate::structure::Relation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq)]
pub enum Loc {
    /// `π_W(x)`.
    Point(Arc<Point>),
    /// `ρ^U_W`.
    Rho(Arc<Dom>),
    At(CPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Const(f64),
    Dist { dom: Arc<Dom>, a: Loc, b: Loc },
    Diam { dom: Arc<Dom>, locs: Vec<Loc> },
    /// `(d(a, p) + d(p, b) − d(a, b)) / 2`, standing in for the distance
    /// from `p` to a geodesic from `a` to `b`.
    Gromov { dom: Arc<Dom>, a: Loc, b: Loc, p: Loc },
    Min(Vec<Quantity>),
    /// `Σ cᵢ·qᵢ`.
    Lin(Vec<(f64, Quantity)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Gt,
    Ge,
    Lt,
    Le,
}

impl Cmp {
    fn holds(self, l: f64, r: f64) -> bool {
        match self {
            Cmp::Gt => l > r,
            Cmp::Ge => l >= r,
            Cmp::Lt => l < r,
            Cmp::Le => l <= r,
        }
    }

    fn margin(self, l: f64, r: f64) -> f64 {
        match self {
            Cmp::Gt | Cmp::Ge => l - r,
            Cmp::Lt | Cmp::Le => r - l,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Note(String),
    Inequality { label: String, lhs: Quantity, cmp: Cmp, rhs: Quantity, lhs_value: f64, rhs_value: f64 },
    Relation { label: String, u: Arc<Dom>, v: Arc<Dom>, rel: Relation },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Completed,
    /// An iteration cap ran out; inconclusive.
    CapReached(String),
    /// A step the argument guarantees did not hold: a model bug.
    AssertionFailed { step: usize, detail: String },
    /// A hypothesis failed; nothing was attempted.
    Refused(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofTrace {
    pub title: String,
    pub entries: Vec<Entry>,
    pub verdict: Verdict,
    /// The element produced, for the translate searches.
    pub h: Option<Point>,
    /// The domain produced, for the subgroup search.
    pub found: Option<Dom>,
    /// Whether constants were scaled down from the ones the argument uses.
    pub scaled: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("step {step}: {detail}")]
pub struct ReplayError {
    pub step: usize,
    pub detail: String,
}

fn eval_loc(model: &Model, dom: &Dom, loc: &Loc) -> Result<CPoint, String> {
    match loc {
        Loc::Point(x) => Ok(model.project(x, dom)),
        Loc::Rho(u) => model.rho(u, dom).ok_or_else(|| format!("ρ^{}_{} is undefined", model.dom_id(u), model.dom_id(dom))),
        Loc::At(p) => Ok(p.clone()),
    }
}

pub fn eval(model: &Model, q: &Quantity) -> Result<f64, String> {
    Ok(match q {
        Quantity::Const(c) => *c,
        Quantity::Dist { dom, a, b } => model.cdist(dom, &eval_loc(model, dom, a)?, &eval_loc(model, dom, b)?),
        Quantity::Diam { dom, locs } => {
            let pts = locs.iter().map(|l| eval_loc(model, dom, l)).collect::<Result<Vec<_>, _>>()?;
            super::diameter(model, dom, &pts)
        }
        Quantity::Gromov { dom, a, b, p } => {
            let (a, b, p) = (eval_loc(model, dom, a)?, eval_loc(model, dom, b)?, eval_loc(model, dom, p)?);
            (model.cdist(dom, &a, &p) + model.cdist(dom, &p, &b) - model.cdist(dom, &a, &b)) / 2.0
        }
        Quantity::Min(qs) => qs.iter().map(|q| eval(model, q)).collect::<Result<Vec<_>, _>>()?.into_iter().fold(f64::INFINITY, f64::min),
        Quantity::Lin(terms) => {
            let mut s = 0.0;
            for (c, q) in terms {
                s += c * eval(model, q)?;
            }
            s
        }
    })
}

impl ProofTrace {
    fn new(title: &str) -> Self {
        ProofTrace { title: title.into(), entries: Vec::new(), verdict: Verdict::Completed, h: None, found: None, scaled: false }
    }

    pub fn is_completed(&self) -> bool {
        self.verdict == Verdict::Completed
    }

    pub fn inequality_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, Entry::Inequality { .. })).count()
    }

    /// Smallest margin among logged inequalities.
    pub fn min_margin(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Inequality { cmp, lhs_value, rhs_value, .. } => Some(cmp.margin(*lhs_value, *rhs_value)),
                _ => None,
            })
            .reduce(f64::min)
    }

    /// Margin of the last logged inequality, which is the conclusion for
    /// completed translate searches.
    pub fn final_margin(&self) -> Option<f64> {
        self.entries.iter().rev().find_map(|e| match e {
            Entry::Inequality { cmp, lhs_value, rhs_value, .. } => Some(cmp.margin(*lhs_value, *rhs_value)),
            _ => None,
        })
    }

    /// Re-evaluates every inequality and relation. Returns how many were
    /// checked.
    pub fn replay(&self, model: &Model) -> Result<usize, ReplayError> {
        let mut n = 0;
        for (step, e) in self.entries.iter().enumerate() {
            match e {
                Entry::Note(_) => {}
                Entry::Inequality { label, lhs, cmp, rhs, lhs_value, rhs_value } => {
                    let err = |detail: String| ReplayError { step, detail };
                    let l = eval(model, lhs).map_err(err)?;
                    let r = eval(model, rhs).map_err(err)?;
                    if !cmp.holds(l, r) {
                        return Err(err(format!("{label}: {l} {} {r} is false", cmp.symbol())));
                    }
                    if (l - lhs_value).abs() > 1e-9 || (r - rhs_value).abs() > 1e-9 {
                        return Err(err(format!("{label}: recorded {lhs_value}, {rhs_value}, now {l}, {r}")));
                    }
                    n += 1;
                }
                Entry::Relation { label, u, v, rel } => {
                    let now = model.relation(u, v);
                    if now != *rel {
                        return Err(ReplayError { step, detail: format!("{label}: recorded {rel}, now {now}") });
                    }
                    n += 1;
                }
            }
        }
        Ok(n)
    }

    pub fn render(&self, model: &Model) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trace: {}", self.title);
        for (i, e) in self.entries.iter().enumerate() {
            let _ = match e {
                Entry::Note(t) => writeln!(s, "  [{i}] {t}"),
                Entry::Inequality { label, lhs, cmp, rhs, lhs_value, rhs_value } => writeln!(
                    s,
                    "  [{i}] {label}: {} {} {} (margin {})",
                    side(model, lhs, *lhs_value),
                    cmp.symbol(),
                    side(model, rhs, *rhs_value),
                    fmt_num(cmp.margin(*lhs_value, *rhs_value))
                ),
                Entry::Relation { label, u, v, rel } => {
                    writeln!(s, "  [{i}] {label}: {} {rel} {}", short(model.dom_id(u)), short(model.dom_id(v)))
                }
            };
        }
        if let Some(h) = &self.h {
            let _ = writeln!(s, "h = {}", short(model.render_point(h)));
        }
        if let Some(t) = &self.found {
            let _ = writeln!(s, "T = {}", short(model.dom_id(t)));
        }
        if self.scaled {
            let _ = writeln!(s, "constants scaled down: replay with the full constants is infeasible");
        }
        let _ = writeln!(s, "verdict: {}", render_verdict(&self.verdict));
        s
    }
}

pub fn render_verdict(v: &Verdict) -> String {
    match v {
        Verdict::Completed => "completed".into(),
        Verdict::CapReached(m) => format!("cap-reached ({m})"),
        Verdict::AssertionFailed { step, detail } => format!("assertion-failed at step {step} ({detail})"),
        Verdict::Refused(m) => format!("refused ({m})"),
    }
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        format!("{x:.3}")
    }
}

fn short(s: String) -> String {
    let n = s.chars().count();
    if n <= 40 {
        return s;
    }
    let head: String = s.chars().take(24).collect();
    format!("{head}…[{n} chars]")
}

fn side(model: &Model, q: &Quantity, value: f64) -> String {
    match q {
        Quantity::Const(_) => fmt_num(value),
        _ => format!("{} = {}", render_q(model, q), fmt_num(value)),
    }
}

fn render_loc(model: &Model, loc: &Loc) -> String {
    match loc {
        Loc::Point(x) => short(model.render_point(x)),
        Loc::Rho(u) => format!("ρ({})", short(model.dom_id(u))),
        Loc::At(p) => format!("{p:?}"),
    }
}

fn render_q(model: &Model, q: &Quantity) -> String {
    match q {
        Quantity::Const(c) => fmt_num(*c),
        Quantity::Dist { dom, a, b } => format!("d_{}({}, {})", short(model.dom_id(dom)), render_loc(model, a), render_loc(model, b)),
        Quantity::Diam { dom, locs } => format!("diam_{}({} sets)", short(model.dom_id(dom)), locs.len()),
        Quantity::Gromov { dom, a, b, p } => format!(
            "gp_{}({}; {}, {})",
            short(model.dom_id(dom)),
            render_loc(model, p),
            render_loc(model, a),
            render_loc(model, b)
        ),
        Quantity::Min(qs) => format!("min({})", qs.iter().map(|q| render_q(model, q)).collect::<Vec<_>>().join(", ")),
        Quantity::Lin(ts) => ts.iter().map(|(c, q)| format!("{}·{}", fmt_num(*c), render_q(model, q))).collect::<Vec<_>>().join(" + "),
    }
}

/// `Err(())` means the tracer's verdict has been set and the run stops.
type Flow<T> = Result<T, ()>;

struct Tracer<'m> {
    model: &'m Model,
    t: ProofTrace,
}

fn dist(w: &Arc<Dom>, a: Loc, b: Loc) -> Quantity {
    Quantity::Dist { dom: w.clone(), a, b }
}

fn pt(x: &Point) -> Loc {
    Loc::Point(Arc::new(x.clone()))
}

fn rho(u: &Dom) -> Loc {
    Loc::Rho(Arc::new(u.clone()))
}

impl<'m> Tracer<'m> {
    fn new(model: &'m Model, title: &str) -> Self {
        Tracer { model, t: ProofTrace::new(title) }
    }

    fn e(&self) -> f64 {
        self.model.e()
    }

    fn note(&mut self, s: impl Into<String>) {
        self.t.entries.push(Entry::Note(s.into()));
    }

    fn stop<T>(&mut self, v: Verdict) -> Flow<T> {
        self.t.verdict = v;
        Err(())
    }

    fn refuse<T>(&mut self, msg: impl Into<String>) -> Flow<T> {
        self.stop(Verdict::Refused(msg.into()))
    }

    fn cap<T>(&mut self, msg: impl Into<String>) -> Flow<T> {
        self.stop(Verdict::CapReached(msg.into()))
    }

    fn fail<T>(&mut self, msg: impl Into<String>) -> Flow<T> {
        let step = self.t.entries.len();
        self.stop(Verdict::AssertionFailed { step, detail: msg.into() })
    }

    fn evaluate(&self, lhs: &Quantity, rhs: &Quantity) -> Result<(f64, f64), String> {
        Ok((eval(self.model, lhs)?, eval(self.model, rhs)?))
    }

    fn log(&mut self, label: &str, lhs: Quantity, cmp: Cmp, rhs: Quantity, l: f64, r: f64) {
        self.t.entries.push(Entry::Inequality { label: label.into(), lhs, cmp, rhs, lhs_value: l, rhs_value: r });
    }

    /// Logs an inequality the argument guarantees; failure is a model bug.
    fn assert(&mut self, label: &str, lhs: Quantity, cmp: Cmp, rhs: Quantity) -> Flow<f64> {
        match self.evaluate(&lhs, &rhs) {
            Ok((l, r)) if cmp.holds(l, r) => {
                self.log(label, lhs, cmp, rhs, l, r);
                Ok(cmp.margin(l, r))
            }
            Ok((l, r)) => self.fail(format!("{label}: {} {} {} fails", fmt_num(l), cmp.symbol(), fmt_num(r))),
            Err(e) => self.fail(format!("{label}: {e}")),
        }
    }

    /// Logs a hypothesis; failure refuses the run.
    fn hyp(&mut self, label: &str, lhs: Quantity, cmp: Cmp, rhs: Quantity) -> Flow<f64> {
        match self.evaluate(&lhs, &rhs) {
            Ok((l, r)) if cmp.holds(l, r) => {
                self.log(label, lhs, cmp, rhs, l, r);
                Ok(cmp.margin(l, r))
            }
            Ok((l, r)) => self.refuse(format!("{label}: {} {} {} fails", fmt_num(l), cmp.symbol(), fmt_num(r))),
            Err(e) => self.refuse(format!("{label}: {e}")),
        }
    }

    fn relation(&mut self, label: &str, u: &Dom, v: &Dom, allowed: &[Relation], hypothesis: bool) -> Flow<Relation> {
        let rel = self.model.relation(u, v);
        if allowed.contains(&rel) {
            self.t.entries.push(Entry::Relation { label: label.into(), u: Arc::new(u.clone()), v: Arc::new(v.clone()), rel });
            return Ok(rel);
        }
        let msg = format!("{label}: {} {rel} {}", short(self.model.dom_id(u)), short(self.model.dom_id(v)));
        if hypothesis {
            self.refuse(msg)
        } else {
            self.fail(msg)
        }
    }

    fn finish(self) -> ProofTrace {
        self.t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TransverseMode {
    /// The subgroup is the whole group.
    Hhg,
    /// `π_W(H)` is C-connected and large compared with its distance to ρ^V_W.
    ConditionA { subgroup: Vec<Point> },
    /// At least 3c points of H near a geodesic in 𝒞W, far apart.
    ConditionB { points: Vec<Point>, c_prime: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    /// Multiplier applied to the constants of the subgroup argument.
    pub proof_scale: f64,
    /// How many doublings of an exponent a search may try.
    pub max_doublings: u32,
    /// Longest word over subgroup generators tried when estimating growth.
    pub search_len: usize,
    pub outer_cap: usize,
    pub inner_cap: usize,
    /// Upper limit for the number of translates in one chain.
    pub n_cap: usize,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { proof_scale: 0.001, max_doublings: 24, search_len: 4, outer_cap: 4, inner_cap: 4, n_cap: 400 }
    }
}

/// Which alternative of the conclusion `g` achieves: `(relation of gW to
/// W, domain whose ρ was moved, distance)`.
fn conclusion(model: &Model, v: &Dom, w: &Dom, g: &Point) -> Option<(Relation, Dom, f64)> {
    let gw = model.act_dom(g, w);
    let target = match model.relation(&gw, w) {
        Relation::Equal => model.act_dom(g, v),
        Relation::Transverse => gw,
        _ => return None,
    };
    let d = model.cdist(w, &model.rho(v, w)?, &model.rho(&target, w)?);
    (d > 10.0 * model.e()).then(|| (model.relation(&model.act_dom(g, w), w), target, d))
}

/// Logs the conclusion for `g` with the relation of `gW` to `W`.
fn log_conclusion(tr: &mut Tracer, v: &Dom, w: &Arc<Dom>, g: &Point, rel: Relation, target: &Dom) -> Flow<()> {
    let gw = tr.model.act_dom(g, w);
    tr.relation("hW against W", &gw, w, &[rel], false)?;
    let e = tr.e();
    tr.assert("conclusion", dist(w, rho(v), rho(target)), Cmp::Gt, Quantity::Const(10.0 * e))?;
    tr.t.h = Some(g.clone());
    Ok(())
}

fn h_word(model: &Model, gens: &[Point], w: &Word) -> Point {
    w.letters().iter().fold(model.identity(), |acc, l| {
        let g = &gens[l.index()];
        model.mul(&acc, &if l.inv { model.inv(g) } else { g.clone() })
    })
}

/// An element of ⟨gens⟩ of word length ≤ `len` whose big-set contains `u`.
pub fn driver_in(model: &Model, gens: &[Point], u: &Dom, len: usize) -> Option<Point> {
    for n in 1..=len {
        for w in Word::all_of_length(gens.len(), n) {
            let h = h_word(model, gens, &w);
            if model.big_set_of(&h, BigSetConfig::default()).contains(u) {
                return Some(h);
            }
        }
    }
    None
}

/// `t^k` for the first `k = 1, 2, 4, …` with `pred`.
fn doubling(model: &Model, t: &Point, max: u32, mut pred: impl FnMut(&Point) -> bool) -> Option<Point> {
    let mut k = 1i64;
    for _ in 0..=max {
        let x = model.pow(t, k);
        if pred(&x) {
            return Some(x);
        }
        k *= 2;
    }
    None
}

pub fn trace_producing_transverse(model: &Model, v: &Dom, w: &Dom, mode: &TransverseMode, cfg: &TraceConfig) -> ProofTrace {
    let title = match mode {
        TransverseMode::Hhg => "producing transverse translates (group)",
        TransverseMode::ConditionA { .. } => "producing transverse translates (connected projection)",
        TransverseMode::ConditionB { .. } => "producing transverse translates (points near a geodesic)",
    };
    let mut tr = Tracer::new(model, title);
    let _ = producing_transverse(&mut tr, v, w, mode, cfg);
    tr.finish()
}

fn producing_transverse(tr: &mut Tracer, v: &Dom, w: &Dom, mode: &TransverseMode, cfg: &TraceConfig) -> Flow<()> {
    let model = tr.model;
    let w = Arc::new(w.clone());
    tr.relation("V against W", v, &w, &[Relation::Transverse, Relation::NestedIn], true)?;
    if model.is_bounded(&w) {
        return tr.refuse(format!("{} is bounded", model.dom_id(&w)));
    }
    let e = tr.e();
    let c = model.complexity();
    match mode {
        TransverseMode::Hhg => {
            let Some(t) = model.loxodromic(&w) else { return tr.refuse("no loxodromic element for W") };
            tr.note(format!("driver t = {}", short(model.render_point(&t))));
            sequence_search(tr, v, &w, &t, c, cfg)
        }
        TransverseMode::ConditionA { subgroup } => {
            let Some(t) = driver_in(model, subgroup, &w, cfg.search_len) else {
                return tr.refuse(format!("no element of H of length ≤ {} grows on {}", cfg.search_len, model.dom_id(&w)));
            };
            let cc = 10.0 * e + 1.0;
            tr.note(format!("C = {cc}; driver t = {} in H", short(model.render_point(&t))));
            // π_W is E-Lipschitz, so one step in H moves π_W by at most 2E < C
            let one = model.identity();
            for s in subgroup {
                tr.hyp("generator step", dist(&w, pt(&one), pt(s)), Cmp::Le, Quantity::Const(cc))?;
            }
            let bound = 10f64.powi(c as i32 + 1);
            let rho_to_one = dist(&w, rho(v), pt(&one));
            let target = bound * (cc + eval(model, &rho_to_one).unwrap_or(f64::INFINITY));
            let Some(far) = doubling(model, &t, cfg.max_doublings, |x| model.d(&w, &one, x) > target) else {
                return tr.cap("no power of the driver spans the required diameter");
            };
            let rhs = Quantity::Lin(vec![(bound * cc, Quantity::Const(1.0)), (bound, rho_to_one)]);
            tr.hyp("diam π_W(H) against 10^(c+1)(C + d_W(ρ, H))", dist(&w, pt(&one), pt(&far)), Cmp::Gt, rhs)?;
            sequence_search(tr, v, &w, &t, c, cfg)
        }
        TransverseMode::ConditionB { points, c_prime } => condition_b(tr, v, &w, points, *c_prime),
    }
}

/// Chooses `x_0, …, x_c` along the driver with `d_W(ρ^V_W, x_0) > 20E` and
/// each distance ten times the previous, stopping at the first pair whose
/// quotient satisfies the conclusion.
fn sequence_search(tr: &mut Tracer, v: &Dom, w: &Arc<Dom>, t: &Point, c: usize, cfg: &TraceConfig) -> Flow<()> {
    let model = tr.model;
    let e = tr.e();
    let mut xs: Vec<Point> = Vec::new();
    for i in 0..=c {
        let need = match xs.last() {
            None => 20.0 * e,
            Some(prev) => 10.0 * eval(model, &dist(w, rho(v), pt(prev))).unwrap_or(f64::INFINITY),
        };
        let Some(x) = doubling(model, t, cfg.max_doublings, |x| {
            eval(model, &dist(w, rho(v), pt(x))).is_ok_and(|d| d > need)
        }) else {
            return tr.cap(format!("no power of the driver reaches distance {need}"));
        };
        let rhs = match xs.last() {
            None => Quantity::Const(20.0 * e),
            Some(prev) => Quantity::Lin(vec![(10.0, dist(w, rho(v), pt(prev)))]),
        };
        tr.assert(&format!("x_{i} far from ρ^V_W"), dist(w, rho(v), pt(&x)), Cmp::Gt, rhs)?;
        xs.push(x);
        for j in 0..i {
            for (a, b) in [(j, i), (i, j)] {
                let g = model.mul(&xs[a], &model.inv(&xs[b]));
                let Some((rel, target, _)) = conclusion(model, v, w, &g) else { continue };
                tr.note(format!("pair (x_{a}, x_{b}): g = x_{a}·x_{b}⁻¹"));
                if rel == Relation::Equal {
                    // g·x_b = x_a and gW = W, so d(ρ, gρ) ≥ d(x_b, x_a) − 2d(x_a, ρ)
                    let lower = Quantity::Lin(vec![(1.0, dist(w, pt(&xs[a]), pt(&xs[b]))), (-2.0, dist(w, pt(&xs[a]), rho(v)))]);
                    tr.assert("translate chain", dist(w, rho(v), rho(&target)), Cmp::Ge, lower)?;
                } else {
                    let gw = Arc::new(model.act_dom(&g, w));
                    let consistency = Quantity::Min(vec![
                        dist(w, pt(&xs[a]), rho(&gw)),
                        Quantity::Dist { dom: gw.clone(), a: pt(&xs[a]), b: Loc::Rho(w.clone()) },
                    ]);
                    tr.assert("consistency at x_a", consistency, Cmp::Le, Quantity::Const(e))?;
                }
                return log_conclusion(tr, v, w, &g, rel, &target);
            }
        }
    }
    tr.fail(format!("no pair among x_0..x_{c} yields a translate"))
}

fn condition_b(tr: &mut Tracer, v: &Dom, w: &Arc<Dom>, zs: &[Point], c_prime: f64) -> Flow<()> {
    let model = tr.model;
    let e = tr.e();
    let c = model.complexity();
    if zs.len() < 3 * c {
        return tr.refuse(format!("{} points supplied, 3c = {}", zs.len(), 3 * c));
    }
    if c_prime <= 10.0 * e {
        return tr.refuse(format!("C' = {c_prime} must exceed 10E = {}", 10.0 * e));
    }
    let mut ends = (0, 1, -1.0f64);
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            tr.hyp("separation", dist(w, pt(&zs[i]), pt(&zs[j])), Cmp::Gt, Quantity::Const(10.0 * c_prime))?;
            let d = model.d(w, &zs[i], &zs[j]);
            if d > ends.2 {
                ends = (i, j, d);
            }
        }
    }
    let (a, b) = (pt(&zs[ends.0]), pt(&zs[ends.1]));
    for z in zs {
        let q = Quantity::Gromov { dom: w.clone(), a: a.clone(), b: b.clone(), p: pt(z) };
        tr.hyp("near the geodesic", q, Cmp::Le, Quantity::Const(c_prime))?;
    }
    let translates: Vec<Dom> = zs.iter().map(|z| model.act_dom(z, w)).collect();
    for i in 0..zs.len() {
        let same: Vec<usize> = (0..zs.len()).filter(|&j| j != i && translates[j] == translates[i]).collect();
        if same.len() >= 2 {
            tr.note(format!("z_{i}W = z_{}W = z_{}W", same[0], same[1]));
            for &j in &same[..2] {
                let g = model.mul(&zs[j], &model.inv(&zs[i]));
                if let Some((rel, target, _)) = conclusion(model, v, w, &g) {
                    return log_conclusion(tr, v, w, &g, rel, &target);
                }
            }
            return tr.fail("neither isometry of the triple moves ρ^V_W by more than 10E");
        }
    }
    for i in 0..zs.len() {
        for j in 0..zs.len() {
            if i == j {
                continue;
            }
            let g = model.mul(&zs[i], &model.inv(&zs[j]));
            if model.relation(&model.act_dom(&g, w), w) != Relation::Transverse {
                continue;
            }
            tr.note(format!("z_{i}·z_{j}⁻¹·W is transverse to W"));
            for g in [g.clone(), model.inv(&g)] {
                if let Some((rel, target, _)) = conclusion(model, v, w, &g) {
                    return log_conclusion(tr, v, w, &g, rel, &target);
                }
            }
        }
    }
    tr.fail("no triple of equal translates and no transverse quotient")
}

pub fn verify_rho_distribution(model: &Model, w: &Dom, y: &Point, z: &Point, us: &[Dom], d: f64) -> ProofTrace {
    let mut tr = Tracer::new(model, "distribution of ρ-points");
    let _ = rho_distribution(&mut tr, &Arc::new(w.clone()), &Arc::new(y.clone()), &Arc::new(z.clone()), us, d);
    tr.finish()
}

fn rho_distribution(tr: &mut Tracer, w: &Arc<Dom>, y: &Arc<Point>, z: &Arc<Point>, us: &[Dom], d: f64) -> Flow<()> {
    let model = tr.model;
    let e = tr.e();
    let (yl, zl) = (Loc::Point(y.clone()), Loc::Point(z.clone()));
    tr.hyp("D > 50E", Quantity::Const(d), Cmp::Gt, Quantity::Const(50.0 * e))?;
    tr.hyp("d_W(y, z) > D", dist(w, yl.clone(), zl.clone()), Cmp::Gt, Quantity::Const(d))?;
    let need = model.passing_up_count(d + 2.0 * e);
    tr.hyp("n ≥ P(D + 2E)", Quantity::Const(us.len() as f64), Cmp::Ge, Quantity::Const(need as f64))?;
    for u in us {
        tr.relation("U_i below W", u, w, &[Relation::NestedIn], true)?;
        let u = Arc::new(u.clone());
        tr.hyp("d_U(y, z) > 3E", dist(&u, yl.clone(), zl.clone()), Cmp::Gt, Quantity::Const(3.0 * e))?;
    }
    for (v, dv) in model.separating_above(y, z, d) {
        if model.relation(&v, w) == Relation::NestedIn && us.iter().any(|u| model.relation(u, &v) == Relation::NestedIn) {
            return tr.refuse(format!("intermediate domain {} has d = {dv} > D", short(model.dom_id(&v))));
        }
    }
    tr.note("no domain strictly between some U_i and W separates y, z by more than D");
    // a far pair certifies the diameter; try a double sweep before the full scan
    let rhos: Vec<CPoint> = us.iter().map(|u| model.rho(u, w).expect("U_i is nested in W")).collect();
    let farthest = |i: usize| (0..rhos.len()).max_by(|&a, &b| model.cdist(w, &rhos[i], &rhos[a]).total_cmp(&model.cdist(w, &rhos[i], &rhos[b])));
    let bound = d - 30.0 * e;
    let mut pair = None;
    if let Some(a) = farthest(0) {
        let b = farthest(a).expect("nonempty");
        pair = Some((a, b));
        if model.cdist(w, &rhos[a], &rhos[b]) <= bound {
            for i in 0..rhos.len() {
                for j in i + 1..rhos.len() {
                    if model.cdist(w, &rhos[i], &rhos[j]) > bound {
                        pair = Some((i, j));
                    }
                }
            }
        }
    }
    let Some((a, b)) = pair else { return tr.fail("no domains given") };
    tr.note(format!("diam of the ρ-points is at least d(ρ^{}, ρ^{})", short(model.dom_id(&us[a])), short(model.dom_id(&us[b]))));
    tr.assert("diam ⋃ρ^{U_i}_W > D − 30E", dist(w, rho(&us[a]), rho(&us[b])), Cmp::Gt, Quantity::Const(bound))?;
    Ok(())
}

/// A translate `h·base` in the first inner induction.
#[derive(Debug, Clone)]
struct Translate {
    dom: Arc<Dom>,
    h: Point,
    base: usize,
}

/// What the argument knows about one of the two starting domains: elements
/// to try as translations, and points of H projecting far out.
struct Base {
    dom: Arc<Dom>,
    movers: Vec<Point>,
    far: Vec<Point>,
}

pub fn trace_subgroup_eyrie_search(model: &Model, subgroup: &[Point], u: &Dom, v: &Dom, cfg: &TraceConfig) -> ProofTrace {
    let mut tr = Tracer::new(model, "domain above a transverse pair with growing subgroup projection");
    let _ = subgroup_search(&mut tr, subgroup, u, v, cfg);
    tr.finish()
}

fn powers(model: &Model, t: &Point, max: u32) -> Vec<Point> {
    (0..=max.min(20)).map(|i| model.pow(t, 1i64 << i)).collect()
}

fn subgroup_search(tr: &mut Tracer, h: &[Point], u: &Dom, v: &Dom, cfg: &TraceConfig) -> Flow<()> {
    let model = tr.model;
    let e = tr.e();
    let c = model.complexity();
    if cfg.outer_cap == 0 || cfg.inner_cap == 0 {
        return tr.cap("iteration caps are zero");
    }
    tr.relation("U against V", u, v, &[Relation::Transverse], true)?;
    let Some(tu) = driver_in(model, h, u, cfg.search_len) else {
        return tr.refuse(format!("no element of H of length ≤ {} grows on {}", cfg.search_len, model.dom_id(u)));
    };
    let Some(tv) = driver_in(model, h, v, cfg.search_len) else {
        return tr.refuse(format!("no element of H of length ≤ {} grows on {}", cfg.search_len, model.dom_id(v)));
    };
    tr.note(format!("estimated growth: {} on U, {} on V", short(model.render_point(&tu)), short(model.render_point(&tv))));

    let window = model.window();
    let (Some(ru), Some(rv)) = (distance_to_product_region(model, u, &window, 3), distance_to_product_region(model, v, &window, 3))
    else {
        return tr.cap("a product region is farther than 3 from the identity");
    };
    let r = ru.max(rv);
    let p = |x: f64| model.passing_up_count(x) as f64;
    let k_full = |d: f64| 6.0 * c as f64 * p(2.0 * d);
    let n_full = |d: f64| (k_full(d) * p(d)).powi(c as i32 + 1);
    let d_full = 1000.0 * (r * e + 10.0 * e);
    let mut d = (cfg.proof_scale * d_full).floor().max(50.0 * e + 1.0);
    tr.t.scaled = true;
    tr.note(format!(
        "R = {r}; full constants D = {d_full}, K = {}, N = {:.3e}; scale {}",
        k_full(d_full),
        n_full(d_full),
        cfg.proof_scale
    ));

    let mut bases = [
        Base { dom: Arc::new(u.clone()), movers: powers(model, &tu, cfg.max_doublings), far: powers(model, &tu, cfg.max_doublings) },
        Base { dom: Arc::new(v.clone()), movers: powers(model, &tv, cfg.max_doublings), far: powers(model, &tv, cfg.max_doublings) },
    ];
    for i in 0..cfg.outer_cap {
        tr.note(format!(
            "outer step {i}: U_0 = {}, U_1 = {}",
            short(model.dom_id(&bases[0].dom)),
            short(model.dom_id(&bases[1].dom))
        ));
        let mut chain = vec![
            Translate { dom: bases[0].dom.clone(), h: model.identity(), base: 0 },
            Translate { dom: bases[1].dom.clone(), h: model.identity(), base: 1 },
        ];
        let Some(y) = bases[0].far.iter().find(|x| model.cdist(&bases[0].dom, &model.project(x, &bases[0].dom), &model.rho(&bases[1].dom, &bases[0].dom).expect("transverse")) > 2.0 * e).cloned() else {
            return tr.cap("no point of H far enough out in U_0");
        };
        let y = Arc::new(y);
        tr.assert("y far from ρ^1_0", dist(&bases[0].dom, Loc::Point(y.clone()), Loc::Rho(bases[1].dom.clone())), Cmp::Gt, Quantity::Const(2.0 * e))?;

        let mut produced: Vec<(Arc<Dom>, Vec<Point>)> = Vec::new();
        let mut next = None;
        for l in 0..cfg.inner_cap {
            let k = (cfg.proof_scale * k_full(d)).ceil().max(3.0 * c as f64) as usize;
            let lower = p(d).max(p(d + 2.0 * e)) as usize;
            if lower > cfg.n_cap {
                return tr.cap(format!("N would need {lower} translates, cap is {}", cfg.n_cap));
            }
            let n = ((cfg.proof_scale * n_full(d)).ceil() as usize).clamp(lower, cfg.n_cap);
            tr.note(format!("inner step {l}: D = {d}, K = {k}, N = {n}"));
            extend_chain(tr, &bases, &mut chain, n)?;

            let last = &chain[n];
            let prev = chain[n - 1].dom.clone();
            let target = model.rho(&prev, &last.dom).expect("consecutive translates are transverse");
            let Some(z) = bases[last.base]
                .far
                .iter()
                .map(|f| model.mul(&last.h, f))
                .find(|x| model.cdist(&last.dom, &model.project(x, &last.dom), &target) > 2.0 * e)
            else {
                return tr.cap("no point of H far enough out in U_N");
            };
            let z = Arc::new(z);
            let (yl, zl) = (Loc::Point(y.clone()), Loc::Point(z.clone()));
            tr.assert("z far from ρ^{N-1}_N", dist(&last.dom, zl.clone(), Loc::Rho(prev)), Cmp::Gt, Quantity::Const(2.0 * e))?;
            for t in &chain[..=n] {
                tr.assert("d_j(y, z) > E", dist(&t.dom, yl.clone(), zl.clone()), Cmp::Gt, Quantity::Const(e))?;
            }

            let (w, members) = passing_up_stage(tr, &chain[..=n], &y, &z, d, k)?;
            let w = Arc::new(w);
            let sep = (d - 40.0 * e).max(d / 2.0 + 2.0 * (e * r + 3.0 * e));
            let rhos: Vec<(usize, CPoint)> =
                members.iter().map(|&j| (j, model.rho(&chain[j].dom, &w).expect("nested"))).collect();
            let mut chosen: Vec<usize> = Vec::new();
            for (j, q) in &rhos {
                if chosen.len() == 3 * c {
                    break;
                }
                if chosen.iter().all(|&b| model.cdist(&w, &model.rho(&chain[b].dom, &w).expect("nested"), q) > sep) {
                    chosen.push(*j);
                }
            }
            if chosen.len() < 3 * c {
                return tr.cap(format!("only {} ρ-points are {sep}-separated at these constants", chosen.len()));
            }
            for (x, &a) in chosen.iter().enumerate() {
                for &b in &chosen[x + 1..] {
                    tr.assert("ρ-points separated", dist(&w, Loc::Rho(chain[a].dom.clone()), Loc::Rho(chain[b].dom.clone())), Cmp::Gt, Quantity::Const(d - 40.0 * e))?;
                }
                let q = Quantity::Gromov { dom: w.clone(), a: yl.clone(), b: zl.clone(), p: Loc::Rho(chain[a].dom.clone()) };
                tr.assert("ρ-point near [y, z]", q, Cmp::Le, Quantity::Const(e))?;
            }

            let h0inv = model.inv(&chain[chosen[0]].h);
            let wl = Arc::new(model.act_dom(&h0inv, &w));
            let pts: Vec<Point> = chosen.iter().map(|&b| model.mul(&h0inv, &chain[b].h)).collect();
            let below_u = model.relation(u, &wl);
            let contains = if matches!(below_u, Relation::NestedIn | Relation::Equal) { u } else { v };
            tr.relation("U or V below W_l", contains, &wl, &[Relation::NestedIn, Relation::Equal], false)?;
            let (first, far_end) = farthest_pair(model, &wl, &pts);
            for (x, a) in pts.iter().enumerate() {
                let q = Quantity::Gromov { dom: wl.clone(), a: pt(&pts[first]), b: pt(&pts[far_end]), p: pt(a) };
                tr.assert("translated point near a geodesic", q, Cmp::Le, Quantity::Const(e * r + 5.0 * e))?;
                for b in &pts[x + 1..] {
                    tr.assert("translated points apart", dist(&wl, pt(a), pt(b)), Cmp::Gt, Quantity::Const(d / 2.0))?;
                }
            }
            tr.assert("diam π_{W_l}(H) > D", dist(&wl, pt(&pts[first]), pt(&pts[far_end])), Cmp::Gt, Quantity::Const(d))?;

            if driver_in(model, h, &wl, cfg.search_len).is_some() {
                tr.note(format!("π_{}(H) grows (big-set estimate)", short(model.dom_id(&wl))));
                tr.relation("U or V properly below T", contains, &wl, &[Relation::NestedIn], false)?;
                tr.t.found = Some((*wl).clone());
                return Ok(());
            }
            let sample = ball_in(model, h, cfg.search_len);
            let one = model.identity();
            let diam = sample.iter().map(|x| model.d(&wl, &one, x)).fold(0.0, f64::max) * 2.0;
            tr.note(format!("π_{}(H) looks bounded, diameter about {diam}", short(model.dom_id(&wl))));
            if let Some(q) = produced.iter().position(|(other, _)| model.relation(other, &wl) == Relation::Transverse) {
                next = Some((produced[q].clone(), ((*wl).clone(), pts)));
                break;
            }
            produced.push((wl, pts));
            d = (10.0 * diam).max(d + 1.0);
        }
        let Some(((wp, pp), (wq, pq))) = next else { return tr.cap("inner iteration cap reached") };
        tr.relation("new transverse pair", &wp, &wq, &[Relation::Transverse], false)?;
        let movers = |pts: &[Point]| {
            let mut out = Vec::new();
            for a in pts {
                for b in pts {
                    if a != b {
                        out.push(model.mul(a, &model.inv(b)));
                    }
                }
            }
            out
        };
        bases = [
            Base { movers: movers(&pp), far: pp, dom: wp },
            Base { movers: movers(&pq), far: pq, dom: Arc::new(wq) },
        ];
    }
    tr.cap("outer iteration cap reached")
}

fn ball_in(model: &Model, gens: &[Point], len: usize) -> Vec<Point> {
    (0..=len).flat_map(|n| Word::all_of_length(gens.len(), n)).map(|w| h_word(model, gens, &w)).collect()
}

fn farthest_pair(model: &Model, w: &Dom, pts: &[Point]) -> (usize, usize) {
    let mut best = (0, 0, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = model.d(w, &pts[i], &pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}

/// Grows the chain `U_0, U_1, …` to length `n + 1`, each new translate
/// transverse to the last with ρ-points more than 10E apart.
fn extend_chain(tr: &mut Tracer, bases: &[Base; 2], chain: &mut Vec<Translate>, n: usize) -> Flow<()> {
    let model = tr.model;
    let e = tr.e();
    while chain.len() <= n {
        let j = chain.len() - 1;
        let (w, vprev) = (chain[j].dom.clone(), chain[j - 1].dom.clone());
        let hj = chain[j].h.clone();
        let hinv = model.inv(&hj);
        let found = bases[chain[j].base].movers.iter().find_map(|m| {
            let g = model.mul(&model.mul(&hj, m), &hinv);
            conclusion(model, &vprev, &w, &g).map(|c| (g, c))
        });
        let Some((g, (rel, target, _))) = found else {
            return tr.cap(format!("no translate found for U_{}", j + 1));
        };
        let next = if rel == Relation::Equal {
            Translate { dom: Arc::new(target), h: model.mul(&g, &chain[j - 1].h), base: chain[j - 1].base }
        } else {
            Translate { dom: Arc::new(target), h: model.mul(&g, &hj), base: chain[j].base }
        };
        tr.relation("U_{j+1} against U_j", &next.dom, &w, &[Relation::Transverse], false)?;
        tr.assert(
            "d_j(ρ^{j-1}_j, ρ^{j+1}_j) > 10E",
            Quantity::Dist { dom: w, a: Loc::Rho(vprev), b: Loc::Rho(next.dom.clone()) },
            Cmp::Gt,
            Quantity::Const(10.0 * e),
        )?;
        chain.push(next);
    }
    Ok(())
}

/// Passing-up over consecutive windows of the chain, then, if no output
/// holds K of the translates, over the outputs themselves, at most c times.
/// Returns the domain reached and the chain indices nested in it.
fn passing_up_stage(tr: &mut Tracer, chain: &[Translate], y: &Arc<Point>, z: &Arc<Point>, d: f64, k: usize) -> Flow<(Dom, Vec<usize>)> {
    let model = tr.model;
    let c = model.complexity();
    let size = model.passing_up_count(d);
    let above: Vec<(Dom, f64)> = model.separating_above(y, z, d);
    // current level: (domain, chain index of a translate nested in it)
    let mut level: Vec<(Dom, usize)> = chain.iter().enumerate().map(|(j, t)| ((*t.dom).clone(), j)).collect();
    for stage in 0..=c {
        if level.len() < size {
            return tr.cap(format!("{} domains at stage {stage}, passing-up needs {size}", level.len()));
        }
        let mut outputs: Vec<(Dom, usize)> = Vec::new();
        for s in 0..=level.len() - size {
            let window = &level[s..s + size];
            let qualifying: Vec<(&Dom, usize)> = above
                .iter()
                .filter_map(|(w, _)| window.iter().find(|(a, _)| model.relation(a, w) == Relation::NestedIn).map(|(_, j)| (w, *j)))
                .collect();
            let Some(&(w, j)) = qualifying.iter().find(|(w, _)| !qualifying.iter().any(|(w2, _)| model.relation(w2, w) == Relation::NestedIn))
            else {
                return tr.fail(format!("passing-up found nothing above window {s} at stage {stage}"));
            };
            if !outputs.iter().any(|(o, _)| o == w) {
                outputs.push((w.clone(), j));
            }
        }
        for (w, j) in &outputs {
            let wa = Arc::new(w.clone());
            tr.relation("translate below W_A", &chain[*j].dom, &wa, &[Relation::NestedIn], false)?;
            tr.assert("d_{W_A}(y, z) > D", dist(&wa, Loc::Point(y.clone()), Loc::Point(z.clone())), Cmp::Gt, Quantity::Const(d))?;
        }
        for (w, _) in &outputs {
            let members: Vec<usize> = level.iter().filter(|(a, _)| model.relation(a, w) == Relation::NestedIn).map(|(_, j)| *j).collect();
            if members.len() >= k {
                tr.note(format!("{} holds {} of the current domains (K = {k})", short(model.dom_id(w)), members.len()));
                return Ok((w.clone(), members));
            }
        }
        tr.note(format!("stage {stage}: {} outputs, none holds K = {k}", outputs.len()));
        level = outputs;
    }
    tr.cap("passing-up repeated more than c times")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> Model {
        Model::free(2, 4).unwrap()
    }

    fn word(m: &Model, s: &str) -> Point {
        m.parse_point(s).unwrap()
    }

    #[test]
    fn transverse_on_the_coned_graph() {
        let m = free();
        let v = m.parse_dom("<a>").unwrap();
        let t = trace_producing_transverse(&m, &v, &Dom::FreeTop, &TransverseMode::Hhg, &TraceConfig::default());
        assert!(t.is_completed(), "{}", t.render(&m));
        assert!(t.final_margin().unwrap() > 0.0);
        assert!(t.replay(&m).unwrap() > 3);
    }

    #[test]
    fn transverse_on_a_quasiline() {
        let m = free();
        let (v, w) = (m.parse_dom("<b>").unwrap(), m.parse_dom("<a>").unwrap());
        let t = trace_producing_transverse(&m, &v, &w, &TransverseMode::Hhg, &TraceConfig::default());
        assert!(t.is_completed(), "{}", t.render(&m));
        t.replay(&m).unwrap();
    }

    #[test]
    fn zn_is_refused() {
        let m = Model::zn(2).unwrap();
        let t = trace_producing_transverse(&m, &Dom::Subset(1), &Dom::Subset(2), &TransverseMode::Hhg, &TraceConfig::default());
        assert!(matches!(t.verdict, Verdict::Refused(_)));
    }

    #[test]
    fn condition_b_needs_enough_points() {
        let m = free();
        let v = m.parse_dom("<a>").unwrap();
        let mode = TransverseMode::ConditionB { points: vec![word(&m, "ab")], c_prime: 41.0 };
        let t = trace_producing_transverse(&m, &v, &Dom::FreeTop, &mode, &TraceConfig::default());
        assert!(matches!(t.verdict, Verdict::Refused(_)));
        let ab = word(&m, "ab");
        let points = (0..6).map(|i| m.pow(&ab, 250 * i)).collect();
        let mode = TransverseMode::ConditionB { points, c_prime: 41.0 };
        let t = trace_producing_transverse(&m, &v, &Dom::FreeTop, &mode, &TraceConfig::default());
        assert!(t.is_completed(), "{}", t.render(&m));
        t.replay(&m).unwrap();
    }

    #[test]
    fn condition_a_with_the_whole_group() {
        let m = free();
        let v = m.parse_dom("<a>").unwrap();
        let mode = TransverseMode::ConditionA { subgroup: vec![word(&m, "a"), word(&m, "b")] };
        let t = trace_producing_transverse(&m, &v, &Dom::FreeTop, &mode, &TraceConfig::default());
        assert!(t.is_completed(), "{}", t.render(&m));
        t.replay(&m).unwrap();
    }

    #[test]
    fn rho_points_spread() {
        let m = free();
        let z = m.pow(&word(&m, "aaaaaaaaaaaaabbbbbbbbbbbbb"), 110);
        let one = m.identity();
        let us: Vec<Dom> = m.separating(&one, &z).into_iter().map(|(u, _)| u).filter(|u| *u != Dom::FreeTop).collect();
        let t = verify_rho_distribution(&m, &Dom::FreeTop, &one, &z, &us, 201.0);
        assert!(t.is_completed(), "{}", t.render(&m));
        t.replay(&m).unwrap();
        let t = verify_rho_distribution(&m, &Dom::FreeTop, &one, &z, &us[..100], 201.0);
        assert!(matches!(t.verdict, Verdict::Refused(_)));
        let t = verify_rho_distribution(&m, &Dom::FreeTop, &one, &z, &us, 200.0);
        assert!(matches!(t.verdict, Verdict::Refused(_)));
    }

    #[test]
    fn subgroup_search_contract_cases() {
        let m = free();
        let (u, v) = (m.parse_dom("<a>").unwrap(), m.parse_dom("b<a>").unwrap());
        let gens = vec![word(&m, "a"), word(&m, "b")];
        let cfg = TraceConfig { outer_cap: 0, ..TraceConfig::default() };
        assert!(matches!(trace_subgroup_eyrie_search(&m, &gens, &u, &v, &cfg).verdict, Verdict::CapReached(_)));
        let t = trace_subgroup_eyrie_search(&m, &[word(&m, "a")], &u, &v, &TraceConfig::default());
        assert!(matches!(t.verdict, Verdict::Refused(_)), "{}", t.render(&m));
    }

    #[test]
    fn subgroup_search_reaches_the_maximal_domain() {
        let m = free();
        let (u, v) = (m.parse_dom("<a>").unwrap(), m.parse_dom("b<a>").unwrap());
        let gens = vec![word(&m, "a"), word(&m, "b")];
        let t = trace_subgroup_eyrie_search(&m, &gens, &u, &v, &TraceConfig::default());
        assert!(t.is_completed(), "{}", t.render(&m));
        assert_eq!(t.found, Some(Dom::FreeTop));
        assert!(t.replay(&m).unwrap() > 400);
    }
}

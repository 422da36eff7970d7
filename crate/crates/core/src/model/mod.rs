//! Concrete hierarchically hyperbolic models with genuine projections.
//!
//! Every model is a group acting on itself, so points double as group
//! elements. Three kinds are available: ℤⁿ ([`zn`]), the free group with
//! coned-off cyclic cosets ([`free`]) and products ([`product`]).

pub mod experiments;
pub mod free;
pub mod product;
pub mod trace;
pub mod zn;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{ActionError, ActionTable, EquivarianceHook};
use crate::eyries::{BigSet, BigSetOracle};
use crate::structure::{
    ActionSpec, Axiom, Domain, IndexStructure, Relation, StructureError, StructureFile, Violation,
};
use crate::word::{Letter, Word};

pub use free::FreeModel;
pub use product::ProductModel;
pub use zn::ZnModel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("bad model parameter: {0}")]
    Parameter(String),
    #[error("cannot parse model `{0}`")]
    Spec(String),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("cannot parse point `{0}`")]
    Point(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("model bug: {0}")]
    Assertion(String),
}

/// A point of X, which is also a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Zn(Vec<i64>),
    Free(Word),
    Tuple(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dom {
    /// A nonempty set of coordinates of ℤⁿ, as a bit mask.
    Subset(u32),
    /// The coned-off Cayley graph of the free group.
    FreeTop,
    /// The coset `rep·⟨gen⟩`; `rep` does not end in `gen^±1`.
    Coset { rep: Word, gen: u16 },
    /// A set of at least two factors of a product.
    Top(u32),
    Factor(usize, Box<Dom>),
}

/// A point of some 𝒞U.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CPoint {
    /// A point of a line, in the coordinate of the domain.
    Int(i64),
    /// A group element as a vertex of the coned graph.
    Vertex(Word),
    /// The cone point over `rep·⟨gen⟩`.
    Cone { rep: Word, gen: u16 },
    /// The only point of a one-point space.
    Star,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Zn(ZnModel),
    Free(FreeModel),
    Product(ProductModel),
}

macro_rules! each {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            Model::Zn($m) => $body,
            Model::Free($m) => $body,
            Model::Product($m) => $body,
        }
    };
}

impl Model {
    pub fn zn(n: usize) -> Result<Model, ModelError> {
        Ok(Model::Zn(ZnModel::new(n)?))
    }

    pub fn free(rank: usize, radius: usize) -> Result<Model, ModelError> {
        Ok(Model::Free(FreeModel::new(rank, radius)?))
    }

    pub fn product(factors: Vec<Model>) -> Result<Model, ModelError> {
        Ok(Model::Product(ProductModel::new(factors)?))
    }

    /// Parses `zn(2)`, `free(2,5)` or `product(free(2,5),zn(1))`.
    pub fn parse(spec: &str) -> Result<Model, ModelError> {
        let bad = || ModelError::Spec(spec.to_string());
        let t: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let open = t.find('(').ok_or_else(bad)?;
        let inner = t[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args = split_top_level(inner, ',');
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match (&t[..open], args.as_slice()) {
            ("zn", [n]) => Model::zn(num(n)?),
            ("free", [k, r]) => Model::free(num(k)?, num(r)?),
            ("product", fs) => Model::product(fs.iter().map(|f| Model::parse(f)).collect::<Result<_, _>>()?),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        each!(self, m => m.name())
    }

    /// The uniform constant E of the model.
    pub fn e(&self) -> f64 {
        match self {
            Model::Zn(_) => 1.0,
            Model::Free(_) => 4.0,
            Model::Product(p) => p.factors.iter().map(Model::e).fold(0.0, f64::max),
        }
    }

    pub fn complexity(&self) -> usize {
        match self {
            Model::Zn(m) => m.n,
            Model::Free(_) => 2,
            Model::Product(p) => p.factors.iter().map(Model::complexity).max().unwrap_or(0) + p.factors.len() - 1,
        }
    }

    /// The passing-up function: any `P(C)` domains nested in a common V that
    /// each separate x from y by more than E force some W ⊑ V properly
    /// containing one of them with `d_W(x, y) > C`.
    pub fn passing_up_count(&self, c: f64) -> usize {
        match self {
            // no unbounded domain properly contains a line, so the
            // hypothesis must be unsatisfiable: n+1 distinct lines don't exist
            Model::Zn(m) => m.n + 1,
            // every syllable domain adds one to the coned distance
            Model::Free(_) => c.max(0.0).floor() as usize + 2,
            Model::Product(p) => p.factors.iter().map(|f| f.passing_up_count(c) - 1).sum::<usize>() + 1,
        }
    }

    pub fn orbit_count(&self) -> usize {
        match self {
            Model::Zn(m) => m.window().len(),
            Model::Free(m) => 1 + m.rank,
            Model::Product(p) => {
                let k = p.factors.len();
                p.factors.iter().map(Model::orbit_count).sum::<usize>() + (1usize << k) - 1 - k
            }
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        each!(self, m => m.generator_names())
    }

    pub fn identity(&self) -> Point {
        match self {
            Model::Zn(m) => Point::Zn(vec![0; m.n]),
            Model::Free(_) => Point::Free(Word::identity()),
            Model::Product(p) => Point::Tuple(p.factors.iter().map(Model::identity).collect()),
        }
    }

    /// The group element spelled by `w`.
    pub fn element(&self, w: &Word) -> Point {
        match self {
            Model::Zn(m) => {
                let mut v = vec![0; m.n];
                for l in w.letters() {
                    v[l.index()] += if l.inv { -1 } else { 1 };
                }
                Point::Zn(v)
            }
            Model::Free(_) => Point::Free(w.clone()),
            Model::Product(p) => p.element(w),
        }
    }

    pub fn mul(&self, g: &Point, h: &Point) -> Point {
        match (self, g, h) {
            (Model::Zn(_), Point::Zn(a), Point::Zn(b)) => Point::Zn(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Model::Free(_), Point::Free(a), Point::Free(b)) => Point::Free(a.mul(b)),
            (Model::Product(p), Point::Tuple(a), Point::Tuple(b)) => {
                Point::Tuple(p.factors.iter().zip(a.iter().zip(b)).map(|(f, (x, y))| f.mul(x, y)).collect())
            }
            _ => panic!("points {g:?}, {h:?} do not belong to {}", self.name()),
        }
    }

    pub fn inv(&self, g: &Point) -> Point {
        match (self, g) {
            (Model::Zn(_), Point::Zn(a)) => Point::Zn(a.iter().map(|x| -x).collect()),
            (Model::Free(_), Point::Free(a)) => Point::Free(a.inverse()),
            (Model::Product(p), Point::Tuple(a)) => {
                Point::Tuple(p.factors.iter().zip(a).map(|(f, x)| f.inv(x)).collect())
            }
            _ => panic!("point {g:?} does not belong to {}", self.name()),
        }
    }

    pub fn pow(&self, g: &Point, k: i64) -> Point {
        match (self, g) {
            (Model::Zn(_), Point::Zn(a)) => Point::Zn(a.iter().map(|x| x * k).collect()),
            (Model::Free(_), Point::Free(a)) => Point::Free(a.pow(k)),
            (Model::Product(p), Point::Tuple(a)) => {
                Point::Tuple(p.factors.iter().zip(a).map(|(f, x)| f.pow(x, k)).collect())
            }
            _ => panic!("point {g:?} does not belong to {}", self.name()),
        }
    }

    /// Distance in X: ℓ¹ on ℤⁿ, word length on F_k, sums on products.
    pub fn dist(&self, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (Model::Zn(_), Point::Zn(a), Point::Zn(b)) => a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum::<i64>() as f64,
            (Model::Free(_), Point::Free(a), Point::Free(b)) => a.inverse().mul(b).len() as f64,
            (Model::Product(p), Point::Tuple(a), Point::Tuple(b)) => {
                p.factors.iter().zip(a.iter().zip(b)).map(|(f, (u, v))| f.dist(u, v)).sum()
            }
            _ => panic!("points {x:?}, {y:?} do not belong to {}", self.name()),
        }
    }

    pub fn top(&self) -> Dom {
        match self {
            Model::Zn(m) => Dom::Subset(m.full()),
            Model::Free(_) => Dom::FreeTop,
            Model::Product(p) => p.top(),
        }
    }

    /// The domains of the truncation, frontier excluded.
    pub fn window(&self) -> Vec<Dom> {
        each!(self, m => m.window())
    }

    pub fn in_window(&self, u: &Dom) -> bool {
        match self {
            Model::Zn(_) => true,
            Model::Free(m) => m.in_window(u),
            Model::Product(p) => p.in_window(u),
        }
    }

    pub fn dom_id(&self, u: &Dom) -> String {
        each!(self, m => m.dom_id(u))
    }

    pub fn parse_dom(&self, id: &str) -> Result<Dom, ModelError> {
        each!(self, m => m.parse_dom(id))
    }

    pub fn relation(&self, u: &Dom, v: &Dom) -> Relation {
        each!(self, m => m.relation(u, v))
    }

    pub fn is_bounded(&self, u: &Dom) -> bool {
        match self {
            Model::Zn(m) => !m.is_line(u),
            Model::Free(_) => false,
            Model::Product(p) => p.is_bounded(u),
        }
    }

    pub fn is_quasiline(&self, u: &Dom) -> bool {
        match self {
            Model::Zn(m) => m.is_line(u),
            Model::Free(m) => m.is_quasiline(u),
            Model::Product(p) => p.is_quasiline(u),
        }
    }

    /// The orthogonal container of `u`, when something is orthogonal to it.
    pub fn container(&self, u: &Dom) -> Option<Dom> {
        match self {
            Model::Zn(m) => m.container(u),
            Model::Free(_) => None,
            Model::Product(p) => p.container(u),
        }
    }

    /// `π_U(x)`.
    pub fn project(&self, x: &Point, u: &Dom) -> CPoint {
        each!(self, m => m.project(x, u))
    }

    /// Distance in 𝒞U.
    pub fn cdist(&self, u: &Dom, a: &CPoint, b: &CPoint) -> f64 {
        each!(self, m => m.cdist(u, a, b))
    }

    /// `d_U(x, y)`.
    pub fn d(&self, u: &Dom, x: &Point, y: &Point) -> f64 {
        self.cdist(u, &self.project(x, u), &self.project(y, u))
    }

    /// `ρ^U_V`, defined when `U ⋔ V` or `U ⊊ V`.
    pub fn rho(&self, u: &Dom, v: &Dom) -> Option<CPoint> {
        each!(self, m => m.rho(u, v))
    }

    /// `ρ^V_U(b)` for `U ⊊ V` and `b ∈ 𝒞V`; `None` when it is all of 𝒞U.
    pub fn rho_down(&self, v: &Dom, u: &Dom, b: &CPoint) -> Option<CPoint> {
        match self {
            Model::Zn(m) => m.rho_down(u),
            Model::Free(m) => {
                debug_assert_eq!(*v, Dom::FreeTop);
                m.rho_down(u, b)
            }
            Model::Product(p) => p.rho_down(v, u, b),
        }
    }

    pub fn act_dom(&self, g: &Point, u: &Dom) -> Dom {
        match self {
            Model::Zn(_) => u.clone(),
            Model::Free(m) => m.act_dom(g, u),
            Model::Product(p) => p.act_dom(g, u),
        }
    }

    /// The isometry `g: 𝒞U → 𝒞gU`.
    pub fn act_cpoint(&self, g: &Point, u: &Dom, b: &CPoint) -> CPoint {
        match (self, g, b) {
            (Model::Zn(_), Point::Zn(v), CPoint::Int(i)) => {
                let Dom::Subset(mask) = u else { panic!("not a ℤⁿ domain: {u:?}") };
                CPoint::Int(i + v[mask.trailing_zeros() as usize])
            }
            (Model::Zn(_), _, _) => b.clone(),
            (Model::Free(m), _, _) => m.act_cpoint(g, u, b),
            (Model::Product(p), _, _) => p.act_cpoint(g, u, b),
        }
    }

    /// Every domain U with `d_U(x, y) > 0`, with that distance.
    pub fn separating(&self, x: &Point, y: &Point) -> Vec<(Dom, f64)> {
        self.separating_above(x, y, 0.0)
    }

    /// The domains of `separating` with `d_U(x, y) > t`.
    pub fn separating_above(&self, x: &Point, y: &Point, t: f64) -> Vec<(Dom, f64)> {
        match self {
            Model::Zn(m) => m.separating(x, y).into_iter().filter(|(_, d)| *d > t).collect(),
            Model::Free(m) => m.separating_above(x, y, t),
            Model::Product(p) => p.separating_above(x, y, t),
        }
    }

    /// A group element stabilising `u` and acting loxodromically on 𝒞u.
    pub fn loxodromic(&self, u: &Dom) -> Option<Point> {
        match self {
            Model::Zn(m) => m.loxodromic(u),
            Model::Free(m) => Some(m.loxodromic(u)),
            Model::Product(p) => p.loxodromic(u),
        }
    }

    pub fn sample_point<R: Rng>(&self, rng: &mut R, radius: usize) -> Point {
        each!(self, m => m.sample_point(rng, radius))
    }

    /// Points are written `(1,-2)` in ℤⁿ, as words in the free group, and
    /// as `[p0; p1]` in products.
    pub fn parse_point(&self, text: &str) -> Result<Point, ModelError> {
        let bad = || ModelError::Point(text.to_string());
        let t = text.trim();
        match self {
            Model::Zn(m) => {
                let body = t.trim_start_matches('(').trim_end_matches(')');
                let v: Vec<i64> = body.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
                if v.len() != m.n {
                    return Err(bad());
                }
                Ok(Point::Zn(v))
            }
            Model::Free(m) => Word::parse(t, &m.generator_names()).map(Point::Free).map_err(|_| bad()),
            Model::Product(p) => {
                let body = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
                let items = split_top_level(body, ';');
                if items.len() != p.factors.len() {
                    return Err(bad());
                }
                Ok(Point::Tuple(p.factors.iter().zip(items).map(|(f, s)| f.parse_point(&s)).collect::<Result<_, _>>()?))
            }
        }
    }

    pub fn render_point(&self, x: &Point) -> String {
        match (self, x) {
            (Model::Zn(_), Point::Zn(v)) => {
                format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            }
            (Model::Free(m), Point::Free(w)) => w.render(&m.generator_names()),
            (Model::Product(p), Point::Tuple(v)) => {
                let parts: Vec<String> = p.factors.iter().zip(v).map(|(f, y)| f.render_point(y)).collect();
                format!("[{}]", parts.join("; "))
            }
            _ => format!("{x:?}"),
        }
    }

    pub fn render_cpoint(&self, u: &Dom, b: &CPoint) -> String {
        match (self, u, b) {
            (_, _, CPoint::Int(i)) => i.to_string(),
            (_, _, CPoint::Star) => "*".into(),
            (Model::Product(p), Dom::Factor(i, a), _) => p.factors[*i].render_cpoint(a, b),
            (Model::Free(m), _, CPoint::Vertex(w)) => w.render(&m.generator_names()),
            (Model::Free(m), _, CPoint::Cone { rep, gen }) => {
                format!("cone({})", m.dom_id(&Dom::Coset { rep: rep.clone(), gen: *gen }))
            }
            _ => format!("{b:?}"),
        }
    }

    /// The window as an index structure with the group action, frontier
    /// domains included.
    pub fn export(&self) -> Result<Export, ModelError> {
        let mut doms = self.window();
        let mut index: HashMap<Dom, usize> = doms.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let k = self.generator_names().len();
        let letters: Vec<Point> = Letter::alphabet(k).into_iter().map(|l| self.element(&Word::letter(l))).collect();
        let window_len = doms.len();
        for i in 0..window_len {
            for g in &letters {
                let img = self.act_dom(g, &doms[i]);
                if !index.contains_key(&img) {
                    index.insert(img.clone(), doms.len());
                    doms.push(img);
                }
            }
        }

        let ids: Vec<String> = doms.iter().map(|u| self.dom_id(u)).collect();
        let domains: Vec<Domain> = doms
            .iter()
            .enumerate()
            .map(|(i, u)| {
                Domain::new(ids[i].clone(), self.is_bounded(u))
                    .with_quasiline(self.is_quasiline(u))
                    .with_frontier(i >= window_len)
            })
            .collect();
        let mut nesting = Vec::new();
        let mut ortho = Vec::new();
        for i in 0..doms.len() {
            for j in 0..doms.len() {
                match self.relation(&doms[i], &doms[j]) {
                    Relation::NestedIn => nesting.push((ids[i].clone(), ids[j].clone())),
                    Relation::Orthogonal if i < j => ortho.push((ids[i].clone(), ids[j].clone())),
                    _ => {}
                }
            }
        }
        let containers: Vec<(String, String)> = doms
            .iter()
            .enumerate()
            .filter_map(|(i, u)| {
                let c = self.container(u)?;
                index.get(&c).map(|&j| (ids[i].clone(), ids[j].clone()))
            })
            .collect();
        let structure = IndexStructure::new(domains, &nesting, &ortho, &containers)?;

        let mut spec = ActionSpec { generators: Vec::new(), orbit_bound: Some(self.orbit_count()) };
        for (g, name) in self.generator_names().into_iter().enumerate() {
            let elem = &letters[2 * g];
            let mut map = Vec::new();
            for (i, u) in doms.iter().enumerate() {
                if let Some(&j) = index.get(&self.act_dom(elem, u)) {
                    map.push((ids[i].clone(), ids[j].clone()));
                }
            }
            spec.generators.push((name, map));
        }
        let action = ActionTable::from_spec(&structure, &spec)?;
        Ok(Export { structure, spec, action, doms, index })
    }

    /// Spot checks `g·π_U(x) = π_{gU}(g·x)` for generators and their
    /// inverses on seeded sample points.
    pub fn equivariance_violations(&self, doms: &[Dom], samples: usize, seed: u64) -> Vec<Violation> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.generator_names().len();
        let points: Vec<Point> = (0..samples).map(|_| self.sample_point(&mut rng, 6)).collect();
        let mut out = Vec::new();
        for l in Letter::alphabet(k) {
            let g = self.element(&Word::letter(l));
            for u in doms {
                let gu = self.act_dom(&g, u);
                for x in &points {
                    let moved = self.act_cpoint(&g, u, &self.project(x, u));
                    let direct = self.project(&self.mul(&g, x), &gu);
                    let gap = self.cdist(&gu, &moved, &direct);
                    if gap > 0.0 {
                        out.push(Violation::new(
                            Axiom::ModelEquivariance,
                            vec![self.dom_id(u), self.render_point(x)],
                            format!("generator moves the projection by {gap}"),
                        ));
                    }
                }
            }
        }
        out
    }

    /// Domains on which `⟨g⟩·1` has projection diameter at least
    /// `slope · cap` over the prefix `g^0, …, g^cap`.
    pub fn big_set_of(&self, g: &Point, cfg: BigSetConfig) -> Vec<Dom> {
        let mut orbit = vec![self.identity()];
        for _ in 0..cfg.prefix_cap {
            let next = self.mul(g, orbit.last().expect("orbit is nonempty"));
            orbit.push(next);
        }
        let mut seen = HashSet::new();
        let mut candidates = Vec::new();
        for p in &orbit[1..] {
            for (u, _) in self.separating(&orbit[0], p) {
                if seen.insert(u.clone()) {
                    candidates.push(u);
                }
            }
        }
        let threshold = cfg.slope * cfg.prefix_cap as f64;
        let mut out: Vec<Dom> = candidates
            .into_iter()
            .filter(|u| {
                let pts: Vec<CPoint> = orbit.iter().map(|p| self.project(p, u)).collect();
                diameter(self, u, &pts) >= threshold
            })
            .collect();
        out.sort();
        out
    }

    /// Domains with unbounded projection of the subgroup generated by
    /// `gens`, estimated as the union of big-sets of its elements of word
    /// length ≤ `len` and restricted to `keep`.
    pub fn estimate_unbounded_for(&self, gens: &[Point], len: usize, keep: &HashMap<Dom, usize>) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for n in 1..=len {
            for w in Word::all_of_length(gens.len(), n) {
                let h = w.letters().iter().fold(self.identity(), |acc, l| {
                    let g = &gens[l.index()];
                    self.mul(&acc, &if l.inv { self.inv(g) } else { g.clone() })
                });
                for u in self.big_set_of(&h, BigSetConfig::default()) {
                    if keep.contains_key(&u) {
                        out.insert(self.dom_id(&u));
                    }
                }
            }
        }
        out
    }
}

/// Diameter of a finite set in 𝒞U.
pub fn diameter(model: &Model, u: &Dom, pts: &[CPoint]) -> f64 {
    if let Some(ints) = pts.iter().map(|p| if let CPoint::Int(i) = p { Some(*i) } else { None }).collect::<Option<Vec<i64>>>() {
        return match (ints.iter().min(), ints.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo) as f64,
            _ => 0.0,
        };
    }
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(model.cdist(u, &pts[i], &pts[j]));
        }
    }
    best
}

fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() || !out.is_empty() {
        out.push(cur);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigSetConfig {
    pub prefix_cap: usize,
    pub slope: f64,
}

impl Default for BigSetConfig {
    fn default() -> Self {
        BigSetConfig { prefix_cap: 64, slope: 0.25 }
    }
}

/// A model's window as a structure file, plus the domain behind each index.
#[derive(Debug, Clone)]
pub struct Export {
    pub structure: IndexStructure,
    pub spec: ActionSpec,
    pub action: ActionTable,
    pub doms: Vec<Dom>,
    pub index: HashMap<Dom, usize>,
}

impl Export {
    pub fn file(&self) -> StructureFile {
        StructureFile { structure: self.structure.clone(), action: Some(self.spec.clone()) }
    }

    pub fn render(&self) -> String {
        crate::structure::render_structure_file(&self.structure, Some(&self.spec))
    }

    pub fn window_doms(&self) -> impl Iterator<Item = &Dom> {
        self.doms.iter().enumerate().filter(|(i, _)| !self.structure.domain(*i).frontier).map(|(_, u)| u)
    }
}

/// Checks the exported action against the model's own projections.
pub struct ModelEquivariance<'a> {
    pub model: &'a Model,
    pub doms: Vec<Dom>,
    pub samples: usize,
    pub seed: u64,
}

impl EquivarianceHook for ModelEquivariance<'_> {
    fn check(&self, s: &IndexStructure, action: &ActionTable) -> Vec<Violation> {
        let mut out = self.model.equivariance_violations(&self.doms, self.samples, self.seed);
        // the table must agree with the model's own action
        let index: HashMap<String, usize> = (0..s.len()).map(|i| (s.id(i).to_string(), i)).collect();
        for (g, _) in action.names().iter().enumerate() {
            let elem = self.model.element(&Word::generator(g));
            for u in &self.doms {
                let Some(&i) = index.get(&self.model.dom_id(u)) else { continue };
                let expect = index.get(&self.model.dom_id(&self.model.act_dom(&elem, u))).copied();
                if let (Some(img), Some(e)) = (action.apply(Letter::new(g, false), i), expect) {
                    if img != e {
                        out.push(Violation::new(
                            Axiom::ModelEquivariance,
                            vec![s.id(i).to_string(), s.id(img).to_string(), s.id(e).to_string()],
                            "action table disagrees with the model",
                        ));
                    }
                }
            }
        }
        out
    }
}

/// Big-set estimates for [`crate::eyries::omnibus_check`].
pub struct ModelOracle<'a> {
    pub model: &'a Model,
    pub config: BigSetConfig,
}

impl BigSetOracle for ModelOracle<'_> {
    fn generator_names(&self) -> Vec<String> {
        self.model.generator_names()
    }

    fn big_set(&self, h: &Word) -> BigSet {
        let doms = self.model.big_set_of(&self.model.element(h), self.config);
        let pairwise_orthogonal = doms
            .iter()
            .enumerate()
            .all(|(i, u)| doms[i + 1..].iter().all(|v| self.model.relation(u, v) == Relation::Orthogonal));
        BigSet { domains: doms.iter().map(|u| self.model.dom_id(u)).collect(), pairwise_orthogonal }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

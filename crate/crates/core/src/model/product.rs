//! Products of models. Besides the factor domains there is one bounded
//! domain for every set of at least two factors, nesting the domains of
//! those factors; the one for all factors is maximal.

use rand::Rng;

use super::{CPoint, Dom, Model, ModelError, Point};
use crate::structure::Relation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductModel {
    pub factors: Vec<Model>,
    names: Vec<String>,
    /// Global generator index → (factor, local generator).
    gen_map: Vec<(usize, usize)>,
}

fn parts(p: &Point) -> &[Point] {
    match p {
        Point::Tuple(v) => v,
        other => panic!("not a product point: {other:?}"),
    }
}

impl ProductModel {
    pub fn new(factors: Vec<Model>) -> Result<Self, ModelError> {
        if !(2..=6).contains(&factors.len()) {
            return Err(ModelError::Parameter(format!("a product needs 2..=6 factors, got {}", factors.len())));
        }
        let mut names = Vec::new();
        let mut gen_map = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for (j, n) in f.generator_names().into_iter().enumerate() {
                names.push(n);
                gen_map.push((i, j));
            }
        }
        let distinct: std::collections::BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            names = names.iter().zip(&gen_map).map(|(n, (i, _))| format!("{n}.{i}")).collect();
        }
        Ok(ProductModel { factors, names, gen_map })
    }

    pub fn name(&self) -> String {
        let inner: Vec<String> = self.factors.iter().map(Model::name).collect();
        format!("product({})", inner.join(","))
    }

    fn full(&self) -> u32 {
        (1u32 << self.factors.len()) - 1
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.names.clone()
    }

    pub fn top(&self) -> Dom {
        Dom::Top(self.full())
    }

    pub fn split_letter(&self, l: Letter) -> (usize, Letter) {
        let (i, j) = self.gen_map[l.index()];
        (i, Letter::new(j, l.inv))
    }

    pub fn element(&self, w: &Word) -> Point {
        let mut local = vec![Word::identity(); self.factors.len()];
        for &l in w.letters() {
            let (i, l) = self.split_letter(l);
            local[i].push(l);
        }
        Point::Tuple(self.factors.iter().zip(&local).map(|(f, w)| f.element(w)).collect())
    }

    pub fn window(&self) -> Vec<Dom> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            out.extend(f.window().into_iter().map(|u| Dom::Factor(i, Box::new(u))));
        }
        out.extend((1..=self.full()).filter(|m| m.count_ones() >= 2).map(Dom::Top));
        out
    }

    pub fn in_window(&self, u: &Dom) -> bool {
        match u {
            Dom::Factor(i, a) => self.factors[*i].in_window(a),
            Dom::Top(_) => true,
            _ => false,
        }
    }

    pub fn dom_id(&self, u: &Dom) -> String {
        match u {
            Dom::Factor(i, a) => format!("f{i}.{}", self.factors[*i].dom_id(a)),
            Dom::Top(m) if *m == self.full() => "S".into(),
            Dom::Top(m) => {
                let idx: Vec<String> = (0..self.factors.len()).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
                format!("T{}", idx.join("_"))
            }
            other => panic!("not a product domain: {other:?}"),
        }
    }

    pub fn parse_dom(&self, id: &str) -> Result<Dom, ModelError> {
        let bad = || ModelError::UnknownDomain(id.to_string());
        if id == "S" {
            return Ok(self.top());
        }
        if let Some(rest) = id.strip_prefix('f') {
            let (i, inner) = rest.split_once('.').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let f = self.factors.get(i).ok_or_else(bad)?;
            return Ok(Dom::Factor(i, Box::new(f.parse_dom(inner)?)));
        }
        let body = id.strip_prefix('T').ok_or_else(bad)?;
        let mut m = 0u32;
        for part in body.split('_') {
            let i: usize = part.parse().map_err(|_| bad())?;
            if i >= self.factors.len() {
                return Err(bad());
            }
            m |= 1 << i;
        }
        if m.count_ones() < 2 {
            return Err(bad());
        }
        Ok(Dom::Top(m))
    }

    pub fn relation(&self, u: &Dom, v: &Dom) -> Relation {
        match (u, v) {
            (Dom::Factor(i, a), Dom::Factor(j, b)) => {
                if i == j {
                    self.factors[*i].relation(a, b)
                } else {
                    Relation::Orthogonal
                }
            }
            (Dom::Factor(i, _), Dom::Top(m)) => {
                if m >> i & 1 == 1 {
                    Relation::NestedIn
                } else {
                    Relation::Orthogonal
                }
            }
            (Dom::Top(_), Dom::Factor(..)) => self.relation(v, u).flip(),
            (Dom::Top(a), Dom::Top(b)) => {
                let (a, b) = (*a, *b);
                if a == b {
                    Relation::Equal
                } else if a & b == 0 {
                    Relation::Orthogonal
                } else if a & b == a {
                    Relation::NestedIn
                } else if a & b == b {
                    Relation::Contains
                } else {
                    Relation::Transverse
                }
            }
            _ => panic!("not product domains: {u:?}, {v:?}"),
        }
    }

    pub fn is_bounded(&self, u: &Dom) -> bool {
        match u {
            Dom::Factor(i, a) => self.factors[*i].is_bounded(a),
            _ => true,
        }
    }

    pub fn is_quasiline(&self, u: &Dom) -> bool {
        match u {
            Dom::Factor(i, a) => self.factors[*i].is_quasiline(a),
            _ => false,
        }
    }

    pub fn container(&self, u: &Dom) -> Option<Dom> {
        (*u != self.top()).then(|| self.top())
    }

    pub fn project(&self, x: &Point, u: &Dom) -> CPoint {
        match u {
            Dom::Factor(i, a) => self.factors[*i].project(&parts(x)[*i], a),
            _ => CPoint::Star,
        }
    }

    pub fn cdist(&self, u: &Dom, a: &CPoint, b: &CPoint) -> f64 {
        match u {
            Dom::Factor(i, d) => self.factors[*i].cdist(d, a, b),
            _ => 0.0,
        }
    }

    pub fn rho(&self, u: &Dom, v: &Dom) -> Option<CPoint> {
        match (u, v) {
            (Dom::Factor(i, a), Dom::Factor(j, b)) if i == j => self.factors[*i].rho(a, b),
            _ => matches!(self.relation(u, v), Relation::Transverse | Relation::NestedIn).then_some(CPoint::Star),
        }
    }

    pub fn rho_down(&self, v: &Dom, u: &Dom, b: &CPoint) -> Option<CPoint> {
        match (v, u) {
            (Dom::Factor(i, a), Dom::Factor(j, c)) if i == j => self.factors[*i].rho_down(a, c, b),
            _ => None,
        }
    }

    pub fn act_dom(&self, g: &Point, u: &Dom) -> Dom {
        match u {
            Dom::Factor(i, a) => Dom::Factor(*i, Box::new(self.factors[*i].act_dom(&parts(g)[*i], a))),
            _ => u.clone(),
        }
    }

    pub fn act_cpoint(&self, g: &Point, u: &Dom, b: &CPoint) -> CPoint {
        match u {
            Dom::Factor(i, a) => self.factors[*i].act_cpoint(&parts(g)[*i], a, b),
            _ => b.clone(),
        }
    }

    pub fn separating_above(&self, x: &Point, y: &Point, t: f64) -> Vec<(Dom, f64)> {
        let (x, y) = (parts(x), parts(y));
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            out.extend(f.separating_above(&x[i], &y[i], t).into_iter().map(|(u, d)| (Dom::Factor(i, Box::new(u)), d)));
        }
        out
    }

    pub fn loxodromic(&self, u: &Dom) -> Option<Point> {
        let Dom::Factor(i, a) = u else { return None };
        let t = self.factors[*i].loxodromic(a)?;
        let mut v: Vec<Point> = self.factors.iter().map(Model::identity).collect();
        v[*i] = t;
        Some(Point::Tuple(v))
    }

    pub fn sample_point<R: Rng>(&self, rng: &mut R, radius: usize) -> Point {
        Point::Tuple(self.factors.iter().map(|f| f.sample_point(rng, radius)).collect())
    }
}

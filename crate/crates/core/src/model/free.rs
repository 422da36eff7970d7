//! The free group F_k acting on its Cayley tree, with the maximal domain the
//! Cayley graph coned off along every coset of every ⟨x⟩ and one quasiline
//! domain per such coset.

use rand::Rng;

use super::{CPoint, Dom, ModelError, Point};
use crate::structure::Relation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModel {
    pub rank: usize,
    /// Coset domains whose canonical representative has length ≤ radius
    /// form the window.
    pub radius: usize,
}

/// Exponent of the maximal leading power of `gen` in `w`.
pub fn leading_power(w: &Word, gen: u16) -> i64 {
    let mut m = 0i64;
    for l in w.letters() {
        if l.gen != gen {
            break;
        }
        m += if l.inv { -1 } else { 1 };
    }
    m
}

/// Splits a reduced word into maximal powers of single generators.
pub fn syllables(w: &Word) -> Vec<(u16, i64)> {
    let mut out: Vec<(u16, i64)> = Vec::new();
    for l in w.letters() {
        let e = if l.inv { -1 } else { 1 };
        match out.last_mut() {
            Some((g, m)) if *g == l.gen => *m += e,
            _ => out.push((l.gen, e)),
        }
    }
    out
}

pub fn syllable_count(w: &Word) -> usize {
    let ls = w.letters();
    if ls.is_empty() {
        0
    } else {
        1 + ls.windows(2).filter(|p| p[0].gen != p[1].gen).count()
    }
}

fn power(gen: u16, m: i64) -> Word {
    Word::letter(Letter::new(gen as usize, false)).pow(m)
}

/// `g = rep · gen^t` with `rep` not ending in `gen^±1`.
pub fn canonical_coset(g: &Word, gen: u16) -> (Word, i64) {
    let ls = g.letters();
    let mut k = ls.len();
    let mut t = 0i64;
    while k > 0 && ls[k - 1].gen == gen {
        t += if ls[k - 1].inv { -1 } else { 1 };
        k -= 1;
    }
    (Word::from_letters(ls[..k].iter().copied()), t)
}

fn word(p: &Point) -> &Word {
    match p {
        Point::Free(w) => w,
        other => panic!("not a free-group point: {other:?}"),
    }
}

impl FreeModel {
    pub fn new(rank: usize, radius: usize) -> Result<Self, ModelError> {
        if !(2..=26).contains(&rank) {
            return Err(ModelError::Parameter(format!("free rank must be in 2..=26, got {rank}")));
        }
        Ok(FreeModel { rank, radius })
    }

    pub fn name(&self) -> String {
        format!("free({},{})", self.rank, self.radius)
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    pub fn coset(&self, g: &Word, gen: u16) -> Dom {
        Dom::Coset { rep: canonical_coset(g, gen).0, gen }
    }

    pub fn window(&self) -> Vec<Dom> {
        let mut out = vec![Dom::FreeTop];
        for len in 0..=self.radius {
            for w in Word::all_of_length(self.rank, len) {
                for gen in 0..self.rank as u16 {
                    if w.last().is_none_or(|l| l.gen != gen) {
                        out.push(Dom::Coset { rep: w.clone(), gen });
                    }
                }
            }
        }
        out
    }

    pub fn in_window(&self, u: &Dom) -> bool {
        match u {
            Dom::FreeTop => true,
            Dom::Coset { rep, .. } => rep.len() <= self.radius,
            _ => false,
        }
    }

    pub fn dom_id(&self, u: &Dom) -> String {
        match u {
            Dom::FreeTop => "S".into(),
            Dom::Coset { rep, gen } => {
                let r = if rep.is_empty() { String::new() } else { rep.render(&self.generator_names()) };
                format!("{r}<{}>", self.generator_names()[*gen as usize])
            }
            other => panic!("not a free-model domain: {other:?}"),
        }
    }

    pub fn parse_dom(&self, id: &str) -> Result<Dom, ModelError> {
        if id == "S" {
            return Ok(Dom::FreeTop);
        }
        let bad = || ModelError::UnknownDomain(id.to_string());
        let (rep, rest) = id.split_once('<').ok_or_else(bad)?;
        let name = rest.strip_suffix('>').ok_or_else(bad)?;
        let names = self.generator_names();
        let gen = names.iter().position(|n| n == name).ok_or_else(bad)? as u16;
        let rep = Word::parse(rep, &names).map_err(|_| bad())?;
        Ok(self.coset(&rep, gen))
    }

    pub fn relation(&self, u: &Dom, v: &Dom) -> Relation {
        match (u, v) {
            (Dom::FreeTop, Dom::FreeTop) => Relation::Equal,
            (Dom::FreeTop, _) => Relation::Contains,
            (_, Dom::FreeTop) => Relation::NestedIn,
            _ if u == v => Relation::Equal,
            _ => Relation::Transverse,
        }
    }

    pub fn is_quasiline(&self, u: &Dom) -> bool {
        matches!(u, Dom::Coset { .. })
    }

    pub fn project(&self, x: &Point, u: &Dom) -> CPoint {
        let x = word(x);
        match u {
            Dom::FreeTop => CPoint::Vertex(x.clone()),
            Dom::Coset { rep, gen } => CPoint::Int(leading_power(&rep.inverse().mul(x), *gen)),
            other => panic!("not a free-model domain: {other:?}"),
        }
    }

    /// Closest point of the coset to `p`.
    fn gate(rep: &Word, gen: u16, p: &Word) -> Word {
        rep.mul(&power(gen, leading_power(&rep.inverse().mul(p), gen)))
    }

    pub fn cdist(&self, u: &Dom, a: &CPoint, b: &CPoint) -> f64 {
        match (u, a, b) {
            (Dom::Coset { .. }, CPoint::Int(i), CPoint::Int(j)) => (i - j).abs() as f64,
            (Dom::FreeTop, CPoint::Vertex(p), CPoint::Vertex(q)) => syllable_count(&p.inverse().mul(q)) as f64,
            (Dom::FreeTop, CPoint::Vertex(p), CPoint::Cone { rep, gen })
            | (Dom::FreeTop, CPoint::Cone { rep, gen }, CPoint::Vertex(p)) => {
                let g = Self::gate(rep, *gen, p);
                syllable_count(&g.inverse().mul(p)) as f64 + 0.5
            }
            (Dom::FreeTop, CPoint::Cone { rep: r1, gen: g1 }, CPoint::Cone { rep: r2, gen: g2 }) => {
                if r1 == r2 && g1 == g2 {
                    return 0.0;
                }
                let c2 = Self::gate(r2, *g2, r1);
                let c1 = Self::gate(r1, *g1, &c2);
                syllable_count(&c1.inverse().mul(&c2)) as f64 + 1.0
            }
            _ => panic!("points {a:?}, {b:?} do not lie in {u:?}"),
        }
    }

    pub fn rho(&self, u: &Dom, v: &Dom) -> Option<CPoint> {
        match (u, v) {
            (Dom::Coset { rep, gen }, Dom::FreeTop) => Some(CPoint::Cone { rep: rep.clone(), gen: *gen }),
            (Dom::Coset { rep, .. }, Dom::Coset { .. }) if u != v => Some(self.project(&Point::Free(rep.clone()), v)),
            _ => None,
        }
    }

    /// ρ^S_U(b) for a point `b` of the coned graph; `None` at U's own cone.
    pub fn rho_down(&self, u: &Dom, b: &CPoint) -> Option<CPoint> {
        match b {
            CPoint::Vertex(p) => Some(self.project(&Point::Free(p.clone()), u)),
            CPoint::Cone { rep, gen } => {
                let c = Dom::Coset { rep: rep.clone(), gen: *gen };
                self.rho(&c, u)
            }
            _ => None,
        }
    }

    pub fn act_dom(&self, g: &Point, u: &Dom) -> Dom {
        match u {
            Dom::FreeTop => Dom::FreeTop,
            Dom::Coset { rep, gen } => self.coset(&word(g).mul(rep), *gen),
            other => panic!("not a free-model domain: {other:?}"),
        }
    }

    pub fn act_cpoint(&self, g: &Point, u: &Dom, b: &CPoint) -> CPoint {
        let g = word(g);
        match (u, b) {
            (Dom::Coset { rep, gen }, CPoint::Int(m)) => CPoint::Int(m + canonical_coset(&g.mul(rep), *gen).1),
            (Dom::FreeTop, CPoint::Vertex(p)) => CPoint::Vertex(g.mul(p)),
            (Dom::FreeTop, CPoint::Cone { rep, gen }) => {
                CPoint::Cone { rep: canonical_coset(&g.mul(rep), *gen).0, gen: *gen }
            }
            _ => panic!("point {b:?} does not lie in {u:?}"),
        }
    }

    /// Domains with `d_U(x, y) > 0`: the cosets carrying the syllables of
    /// `x⁻¹y` and the maximal domain.
    pub fn separating(&self, x: &Point, y: &Point) -> Vec<(Dom, f64)> {
        self.separating_above(x, y, 0.0)
    }

    /// The domains of `separating` with `d_U(x, y) > t`. Cosets below the
    /// threshold are never built, so long paths stay cheap.
    pub fn separating_above(&self, x: &Point, y: &Point, t: f64) -> Vec<(Dom, f64)> {
        let (x, y) = (word(x), word(y));
        let path = x.inverse().mul(y);
        let syl = syllables(&path);
        let mut out = Vec::new();
        if !syl.is_empty() && syl.len() as f64 > t {
            out.push((Dom::FreeTop, syl.len() as f64));
        }
        let mut p = x.clone();
        for (gen, m) in syl {
            let d = m.unsigned_abs() as f64;
            if d > t {
                out.push((self.coset(&p, gen), d));
            }
            let l = Letter::new(gen as usize, m < 0);
            for _ in 0..m.unsigned_abs() {
                p.push(l);
            }
        }
        out
    }

    /// An element stabilising `u` and acting loxodromically on 𝒞u.
    pub fn loxodromic(&self, u: &Dom) -> Point {
        match u {
            Dom::FreeTop => Point::Free(Word::from_letters([Letter::new(0, false), Letter::new(1, false)])),
            Dom::Coset { rep, gen } => Point::Free(power(*gen, 1).conjugate_by(rep)),
            other => panic!("not a free-model domain: {other:?}"),
        }
    }

    pub fn sample_point<R: Rng>(&self, rng: &mut R, radius: usize) -> Point {
        let len = rng.gen_range(0..=radius);
        let alphabet = Letter::alphabet(self.rank);
        let mut w = Word::identity();
        while w.len() < len {
            let l = alphabet[rng.gen_range(0..alphabet.len())];
            if w.last() != Some(l.inverse()) {
                w.push(l);
            }
        }
        Point::Free(w)
    }
}

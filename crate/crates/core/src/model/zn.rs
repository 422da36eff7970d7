//! ℤⁿ with the ℓ¹ metric. Domains are the nonempty subsets of the
//! coordinates; singletons are lines, every other subset has a one-point
//! associated space.

use rand::Rng;

use super::{CPoint, Dom, ModelError, Point};
use crate::structure::Relation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZnModel {
    pub n: usize,
}

fn coords(p: &Point) -> &[i64] {
    match p {
        Point::Zn(v) => v,
        other => panic!("not a point of ℤⁿ: {other:?}"),
    }
}

fn mask(u: &Dom) -> u32 {
    match u {
        Dom::Subset(m) => *m,
        other => panic!("not a ℤⁿ domain: {other:?}"),
    }
}

impl ZnModel {
    pub fn new(n: usize) -> Result<Self, ModelError> {
        if !(1..=8).contains(&n) {
            return Err(ModelError::Parameter(format!("zn dimension must be in 1..=8, got {n}")));
        }
        Ok(ZnModel { n })
    }

    pub fn name(&self) -> String {
        format!("zn({})", self.n)
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("e{i}")).collect()
    }

    pub fn window(&self) -> Vec<Dom> {
        (1..=self.full()).map(Dom::Subset).collect()
    }

    pub fn dom_id(&self, u: &Dom) -> String {
        let m = mask(u);
        if m == self.full() {
            return "S".into();
        }
        let parts: Vec<String> = (0..self.n).filter(|i| m >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
        format!("U{}", parts.join("_"))
    }

    pub fn parse_dom(&self, id: &str) -> Result<Dom, ModelError> {
        if id == "S" {
            return Ok(Dom::Subset(self.full()));
        }
        let bad = || ModelError::UnknownDomain(id.to_string());
        let body = id.strip_prefix('U').ok_or_else(bad)?;
        let mut m = 0u32;
        for part in body.split('_') {
            let i: usize = part.parse().map_err(|_| bad())?;
            if i == 0 || i > self.n || m >> (i - 1) & 1 == 1 {
                return Err(bad());
            }
            m |= 1 << (i - 1);
        }
        Ok(Dom::Subset(m))
    }

    pub fn relation(&self, u: &Dom, v: &Dom) -> Relation {
        let (a, b) = (mask(u), mask(v));
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

    pub fn is_line(&self, u: &Dom) -> bool {
        mask(u).count_ones() == 1
    }

    pub fn container(&self, u: &Dom) -> Option<Dom> {
        let c = self.full() & !mask(u);
        (c != 0).then_some(Dom::Subset(c))
    }

    pub fn project(&self, x: &Point, u: &Dom) -> CPoint {
        let m = mask(u);
        if m.count_ones() == 1 {
            CPoint::Int(coords(x)[m.trailing_zeros() as usize])
        } else {
            CPoint::Star
        }
    }

    pub fn cdist(&self, _u: &Dom, a: &CPoint, b: &CPoint) -> f64 {
        match (a, b) {
            (CPoint::Int(i), CPoint::Int(j)) => (i - j).abs() as f64,
            _ => 0.0,
        }
    }

    /// Every ρ lands in a one-point space: only lines are unbounded, and a
    /// line is never transverse to anything nor properly contains anything.
    pub fn rho(&self, u: &Dom, v: &Dom) -> Option<CPoint> {
        matches!(self.relation(u, v), Relation::Transverse | Relation::NestedIn).then_some(CPoint::Star)
    }

    pub fn rho_down(&self, u: &Dom) -> Option<CPoint> {
        (!self.is_line(u)).then_some(CPoint::Star)
    }

    pub fn separating(&self, x: &Point, y: &Point) -> Vec<(Dom, f64)> {
        let (x, y) = (coords(x), coords(y));
        (0..self.n)
            .filter(|&i| x[i] != y[i])
            .map(|i| (Dom::Subset(1 << i), (x[i] - y[i]).abs() as f64))
            .collect()
    }

    /// The basis vector of a line domain.
    pub fn loxodromic(&self, u: &Dom) -> Option<Point> {
        let m = mask(u);
        (m.count_ones() == 1).then(|| {
            let mut v = vec![0; self.n];
            v[m.trailing_zeros() as usize] = 1;
            Point::Zn(v)
        })
    }

    pub fn sample_point<R: Rng>(&self, rng: &mut R, radius: usize) -> Point {
        let r = radius as i64;
        Point::Zn((0..self.n).map(|_| rng.gen_range(-r..=r)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        let m = ZnModel::new(3).unwrap();
        for u in m.window() {
            assert_eq!(m.parse_dom(&m.dom_id(&u)).unwrap(), u);
        }
        assert_eq!(m.dom_id(&Dom::Subset(0b101)), "U1_3");
        assert!(m.parse_dom("U4").is_err());
        assert!(m.parse_dom("U1_1").is_err());
    }

    #[test]
    fn projections() {
        let m = ZnModel::new(2).unwrap();
        let x = Point::Zn(vec![5, -1]);
        assert_eq!(m.project(&x, &m.parse_dom("U2").unwrap()), CPoint::Int(-1));
        assert_eq!(m.project(&x, &m.parse_dom("S").unwrap()), CPoint::Star);
        assert_eq!(m.relation(&Dom::Subset(1), &Dom::Subset(2)), Relation::Orthogonal);
        assert_eq!(m.container(&Dom::Subset(1)), Some(Dom::Subset(2)));
    }
}

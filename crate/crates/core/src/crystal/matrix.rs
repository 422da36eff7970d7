//! Square matrices over the rationals.

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatrix {
    n: usize,
    data: Vec<Rational64>,
}

impl QMatrix {
    pub fn zero(n: usize) -> Self {
        QMatrix { n, data: vec![Rational64::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Rational64::one();
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<Rational64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QMatrix { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut out = QMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col);
            for j in 0..n {
                a.data[col * n + j] /= p;
                inv.data[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (av, iv) = (a.get(col, j), inv.get(col, j));
                    a.data[r * n + j] -= f * av;
                    inv.data[r * n + j] -= f * iv;
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = Rational64::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Rational64::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col);
            det *= p;
            for r in (col + 1)..n {
                let f = a.get(r, col) / p;
                for j in col..n {
                    let v = a.get(col, j);
                    a.data[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integral with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.determinant().abs() == Rational64::one()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    /// Sylvester's criterion on a symmetric matrix.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric()
            && (1..=self.n).all(|k| {
                let mut m = QMatrix::zero(k);
                for i in 0..k {
                    for j in 0..k {
                        m.set(i, j, self.get(i, j));
                    }
                }
                m.determinant() > Rational64::zero()
            })
    }

    pub fn apply(&self, v: &[Rational64]) -> Vec<Rational64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// Smallest k ≥ 1 with `self^k = I`, if at most `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let id = QMatrix::identity(self.n);
        let mut p = self.clone();
        for k in 1..=cap {
            if p == id {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

pub fn parse_rational(tok: &str) -> Option<Rational64> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let (p, q): (i64, i64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            (q != 0).then(|| Rational64::new(p, q))
        }
        None => tok.trim().parse::<i64>().ok().map(Rational64::from_integer),
    }
}

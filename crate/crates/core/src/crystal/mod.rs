//! Crystallographic groups: point groups and their embeddability into the
//! signed permutation group of the same dimension.

mod catalog;
mod embed;
mod group;
mod matrix;
mod signed;

use std::fmt;

use num_rational::Rational64;

pub use catalog::{wallpaper_catalog, WallpaperEntry};
pub use embed::{embeds, EmbeddingResult, Obstruction};
pub use group::FiniteGroup;
pub use matrix::{parse_rational, QMatrix};
pub use signed::{
    hyperoctahedral_elements, hyperoctahedral_generators, hyperoctahedral_order, SignedPerm, ENUMERATION_BUDGET,
};

/// Default cap on point-group size.
pub const CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrystalError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("point group closure exceeded {0} elements; input is not crystallographic")]
    ClosureCapExceeded(usize),
    #[error("multiplication is not closed on the computed elements")]
    NotClosed,
    #[error("generator {index} does not preserve the lattice: {detail}")]
    NotLatticePreserving { index: usize, detail: String },
    #[error("generator {index} is not orthogonal")]
    NotOrthogonal { index: usize },
    #[error("invalid lattice: {0}")]
    BadLattice(String),
    #[error("n = {n} is outside the enumeration budget 1..={budget}")]
    BudgetExceeded { n: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineGenerator {
    /// Linear part in lattice coordinates.
    pub linear: QMatrix,
    pub translation: Vec<Rational64>,
}

/// A crystallographic group given by generators in lattice coordinates and
/// the Gram matrix of the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalGroup {
    pub name: String,
    pub dim: usize,
    pub gram: QMatrix,
    pub generators: Vec<AffineGenerator>,
}

impl CrystalGroup {
    /// Checks each linear part is integral and preserves the Gram form.
    pub fn new(name: impl Into<String>, gram: QMatrix, generators: Vec<AffineGenerator>) -> Result<Self, CrystalError> {
        let dim = gram.dim();
        if !gram.is_positive_definite() {
            return Err(CrystalError::BadLattice("Gram matrix is not symmetric positive definite".into()));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.linear.dim() != dim || g.translation.len() != dim {
                return Err(CrystalError::BadLattice(format!("generator {index} has the wrong dimension")));
            }
            if !g.linear.is_integral() {
                return Err(CrystalError::NotLatticePreserving { index, detail: format!("{} is not integral", g.linear) });
            }
            if g.linear.transpose().mul(&gram).mul(&g.linear) != gram {
                return Err(CrystalError::NotOrthogonal { index });
            }
        }
        Ok(CrystalGroup { name: name.into(), dim, gram, generators })
    }

    /// The same group in the basis whose vectors are the columns of `u`
    /// (in old lattice coordinates). `u` must be unimodular.
    pub fn change_basis(&self, u: &QMatrix) -> Result<CrystalGroup, CrystalError> {
        if !u.is_unimodular() {
            return Err(CrystalError::BadLattice("basis change is not unimodular".into()));
        }
        let inv = u.inverse().expect("unimodular matrices are invertible");
        let gram = u.transpose().mul(&self.gram).mul(u);
        let generators = self
            .generators
            .iter()
            .map(|g| AffineGenerator { linear: inv.mul(&g.linear).mul(u), translation: inv.apply(&g.translation) })
            .collect();
        CrystalGroup::new(self.name.clone(), gram, generators)
    }
}

#[derive(Debug, Clone)]
pub struct PointGroup {
    pub group: FiniteGroup,
    /// Matrix (lattice coordinates) of each element of `group`.
    pub elements: Vec<QMatrix>,
}

impl PointGroup {
    pub fn order(&self) -> usize {
        self.group.order()
    }
}

pub fn point_group(c: &CrystalGroup) -> Result<PointGroup, CrystalError> {
    point_group_with_cap(c, CLOSURE_CAP)
}

pub fn point_group_with_cap(c: &CrystalGroup, cap: usize) -> Result<PointGroup, CrystalError> {
    let gens: Vec<QMatrix> = c.generators.iter().map(|g| g.linear.clone()).collect();
    let (group, elements) = FiniteGroup::generated_by(
        format!("P({})", c.name),
        QMatrix::identity(c.dim),
        &gens,
        |a, b| a.mul(b),
        cap,
    )?;
    Ok(PointGroup { group, elements })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Admissible { generator_images: Vec<(usize, SignedPerm)> },
    NotHhg(Obstruction),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub name: String,
    pub dim: usize,
    pub point_group_order: usize,
    pub order_spectrum: Vec<usize>,
    pub verdict: Verdict,
}

impl Decision {
    pub fn is_admissible(&self) -> bool {
        matches!(self.verdict, Verdict::Admissible { .. })
    }

    /// The equivalent cubulation statement.
    pub fn cubulation(&self) -> &'static str {
        if self.is_admissible() {
            "cocompactly cubulated"
        } else {
            "not cocompactly cubulated"
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Admissible { .. } => write!(f, "{}: Admissible (|F| = {})", self.name, self.point_group_order),
            Verdict::NotHhg(o) => write!(f, "{}: NotHHG (|F| = {}, {})", self.name, self.point_group_order, o),
        }
    }
}

pub fn decide_hhg(c: &CrystalGroup) -> Result<Decision, CrystalError> {
    let pg = point_group(c)?;
    let verdict = match embeds(&pg.group, c.dim)? {
        EmbeddingResult::Embeds { generator_images, .. } => Verdict::Admissible { generator_images },
        EmbeddingResult::Obstructed(o) => Verdict::NotHhg(o),
    };
    Ok(Decision {
        name: c.name.clone(),
        dim: c.dim,
        point_group_order: pg.order(),
        order_spectrum: pg.group.order_spectrum().into_iter().collect(),
        verdict,
    })
}

/// Parses the crystal file format:
///
/// ```text
/// NAME p4m
/// DIM 2
/// LATTICE          # basis rows, Cartesian; GEN matrices are Cartesian
/// 1 0
/// 0 1
/// GEN 0 -1 ; 1 0 | 0 0
/// ```
///
/// `GRAM` (rows of the Gram matrix) may replace `LATTICE`; GEN matrices are
/// then read in lattice coordinates. Entries are integers or `p/q`.
pub fn parse_crystal(text: &str) -> Result<CrystalGroup, CrystalError> {
    enum Rows {
        None,
        Lattice,
        Gram,
    }
    let mut name = String::from("unnamed");
    let mut dim: Option<usize> = None;
    let mut rows_mode = Rows::None;
    let mut lattice: Vec<Vec<Rational64>> = Vec::new();
    let mut gram: Vec<Vec<Rational64>> = Vec::new();
    let mut raw_gens: Vec<(usize, QMatrix, Vec<Rational64>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |m: String| CrystalError::Syntax { line: line_no, message: m };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = |s: &str| -> Result<Vec<Rational64>, CrystalError> {
            s.split_whitespace()
                .map(|t| parse_rational(t).ok_or_else(|| err(format!("bad rational `{t}`"))))
                .collect()
        };
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "NAME" => name = rest.trim().to_string(),
            "DIM" => {
                let d: usize = rest.trim().parse().map_err(|_| err("DIM expects a positive integer".into()))?;
                if d == 0 {
                    return Err(err("DIM expects a positive integer".into()));
                }
                dim = Some(d);
            }
            "LATTICE" => rows_mode = Rows::Lattice,
            "GRAM" => rows_mode = Rows::Gram,
            "GEN" => {
                rows_mode = Rows::None;
                let d = dim.ok_or_else(|| err("GEN before DIM".into()))?;
                let (mat, trans) = rest.split_once('|').unwrap_or((rest, ""));
                let rows: Vec<Vec<Rational64>> = mat.split(';').map(row).collect::<Result<_, _>>()?;
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(err(format!("GEN matrix must be {d}x{d}")));
                }
                let mut t = row(trans)?;
                if t.is_empty() {
                    t = vec![Rational64::from_integer(0); d];
                }
                if t.len() != d {
                    return Err(err(format!("translation must have {d} entries")));
                }
                raw_gens.push((line_no, QMatrix::from_rows(rows), t));
            }
            _ => {
                let r = row(line)?;
                match rows_mode {
                    Rows::Lattice => lattice.push(r),
                    Rows::Gram => gram.push(r),
                    Rows::None => return Err(err(format!("unexpected `{head}`"))),
                }
            }
        }
    }
    let d = dim.ok_or_else(|| CrystalError::Syntax { line: 0, message: "missing DIM".into() })?;
    let check_rows = |rows: &Vec<Vec<Rational64>>, what: &str| {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            Err(CrystalError::BadLattice(format!("{what} must have {d} rows of {d} entries")))
        } else {
            Ok(())
        }
    };
    let (gram, gens) = match (lattice.is_empty(), gram.is_empty()) {
        (true, true) => (QMatrix::identity(d), raw_gens.into_iter().map(|(_, m, t)| (m, t)).collect::<Vec<_>>()),
        (false, true) => {
            check_rows(&lattice, "LATTICE")?;
            // basis vectors are columns of b
            let b = QMatrix::from_rows(lattice).transpose();
            let inv = b.inverse().ok_or_else(|| CrystalError::BadLattice("LATTICE rows are dependent".into()))?;
            let mut gens = Vec::new();
            for (index, (_, m, t)) in raw_gens.into_iter().enumerate() {
                if m.transpose().mul(&m) != QMatrix::identity(d) {
                    return Err(CrystalError::NotOrthogonal { index });
                }
                gens.push((inv.mul(&m).mul(&b), inv.apply(&t)));
            }
            (b.transpose().mul(&b), gens)
        }
        (true, false) => {
            check_rows(&gram, "GRAM")?;
            (QMatrix::from_rows(gram), raw_gens.into_iter().map(|(_, m, t)| (m, t)).collect())
        }
        (false, false) => return Err(CrystalError::BadLattice("give LATTICE or GRAM, not both".into())),
    };
    let generators = gens.into_iter().map(|(linear, translation)| AffineGenerator { linear, translation }).collect();
    CrystalGroup::new(name, gram, generators)
}

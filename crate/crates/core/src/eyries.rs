//! Eyrie sets: the ⊑-maximal unbounded domains, with certification of
//! orthogonality, covering and invariance, and the classifiers built on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::action::ActionTable;
use crate::structure::{validate, IndexStructure, StructureError, ValidationReport};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EyrieError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("structure is not valid ({} violations); run `validate` for details", .0.violations.len())]
    InvalidStructure(ValidationReport),
    #[error("unknown generator `{0}` in subgroup labeling")]
    UnknownGenerator(String),
    #[error("certificate carries a failure: {0}")]
    FailedCertificate(EyrieFailure),
    #[error("unbounded domain `{0}` has no quasiline flag")]
    MissingQuasilineFlag(String),
    #[error("labeling syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EyrieFailure {
    /// Two unbounded domains, neither below an unbounded domain, that are
    /// transverse.
    TransverseMaximalPair { u: String, v: String },
    Uncovered { domain: String },
    NotInvariant { generator: String, domain: String, image: String },
}

impl fmt::Display for EyrieFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EyrieFailure::TransverseMaximalPair { u, v } => {
                write!(f, "maximal unbounded domains {u} and {v} are transverse")
            }
            EyrieFailure::Uncovered { domain } => write!(f, "{domain} is nested in no eyrie"),
            EyrieFailure::NotInvariant { generator, domain, image } => {
                write!(f, "{generator}·{domain} = {image} is not an eyrie")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EyrieCertificate {
    pub eyries: BTreeSet<String>,
    /// Pairs of eyries checked orthogonal.
    pub pairwise_orthogonal: Vec<(String, String)>,
    /// Each labeled domain with the lexicographically first eyrie above it.
    pub covering: BTreeMap<String, String>,
    /// Generators (and their inverses) under which the eyrie set is closed.
    pub invariant_under: Vec<String>,
    pub failure: Option<EyrieFailure>,
}

impl EyrieCertificate {
    pub fn is_success(&self) -> bool {
        self.failure.is_none()
    }

    fn require_success(&self) -> Result<(), EyrieError> {
        match &self.failure {
            Some(f) => Err(EyrieError::FailedCertificate(f.clone())),
            None => Ok(()),
        }
    }
}

/// The unbounded domains a subgroup H sees, and which generators of the
/// ambient action belong to H.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgroupLabeling {
    pub unbounded_for_h: BTreeSet<String>,
    pub generators: Vec<String>,
}

impl SubgroupLabeling {
    /// Parses
    /// ```text
    /// LABELS
    /// U1 U2
    /// GENERATORS
    /// a
    /// ```
    pub fn parse(text: &str) -> Result<Self, EyrieError> {
        let mut out = SubgroupLabeling::default();
        let mut section = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            match line {
                "" => continue,
                "LABELS" => section = 1,
                "GENERATORS" => section = 2,
                _ => {
                    for tok in line.split_whitespace() {
                        match section {
                            1 => {
                                out.unbounded_for_h.insert(tok.to_string());
                            }
                            2 => out.generators.push(tok.to_string()),
                            _ => {
                                return Err(EyrieError::Syntax { line: i + 1, message: "content before LABELS/GENERATORS".into() })
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Eyries of the whole group, labeled by the structure's boundedness flags.
pub fn compute_eyries_default(s: &IndexStructure, action: Option<&ActionTable>) -> Result<EyrieCertificate, EyrieError> {
    compute_eyries(s, &s.unbounded_ids(), action)
}

pub fn compute_eyries(
    s: &IndexStructure,
    labels: &BTreeSet<String>,
    action: Option<&ActionTable>,
) -> Result<EyrieCertificate, EyrieError> {
    let gens: Vec<usize> = action.map(|a| (0..a.generator_count()).collect()).unwrap_or_default();
    certify(s, labels, action, &gens)
}

pub fn compute_subgroup_eyries(
    s: &IndexStructure,
    labeling: &SubgroupLabeling,
    action: Option<&ActionTable>,
) -> Result<EyrieCertificate, EyrieError> {
    let mut gens = Vec::new();
    for name in &labeling.generators {
        let g = action
            .and_then(|a| a.names().iter().position(|n| n == name))
            .ok_or_else(|| EyrieError::UnknownGenerator(name.clone()))?;
        gens.push(g);
    }
    certify(s, &labeling.unbounded_for_h, action, &gens)
}

fn certify(
    s: &IndexStructure,
    labels: &BTreeSet<String>,
    action: Option<&ActionTable>,
    gens: &[usize],
) -> Result<EyrieCertificate, EyrieError> {
    let report = validate(s);
    if !report.is_valid() {
        return Err(EyrieError::InvalidStructure(report));
    }
    let labeled = s.indices_of(labels)?;
    let maximal: BTreeSet<usize> = labeled
        .iter()
        .copied()
        .filter(|&u| !labeled.iter().any(|&v| s.is_nested(u, v)))
        .collect();
    let mut by_id: Vec<usize> = maximal.iter().copied().collect();
    by_id.sort_by(|&a, &b| s.id(a).cmp(s.id(b)));

    let mut cert = EyrieCertificate {
        eyries: maximal.iter().map(|&u| s.id(u).to_string()).collect(),
        ..Default::default()
    };

    for (i, &u) in by_id.iter().enumerate() {
        for &v in &by_id[i + 1..] {
            if s.is_orthogonal(u, v) {
                cert.pairwise_orthogonal.push((s.id(u).into(), s.id(v).into()));
            } else if cert.failure.is_none() {
                cert.failure = Some(EyrieFailure::TransverseMaximalPair { u: s.id(u).into(), v: s.id(v).into() });
            }
        }
    }

    let mut labeled_by_id: Vec<usize> = labeled.iter().copied().collect();
    labeled_by_id.sort_by(|&a, &b| s.id(a).cmp(s.id(b)));
    for &u in &labeled_by_id {
        match by_id.iter().find(|&&e| s.is_nested_or_equal(u, e)) {
            Some(&e) => {
                cert.covering.insert(s.id(u).into(), s.id(e).into());
            }
            None => {
                if cert.failure.is_none() {
                    cert.failure = Some(EyrieFailure::Uncovered { domain: s.id(u).into() });
                }
            }
        }
    }

    if let Some(a) = action {
        for &g in gens {
            let mut ok = true;
            for l in [Letter::new(g, false), Letter::new(g, true)] {
                for &e in &by_id {
                    if s.domain(e).frontier {
                        continue;
                    }
                    if let Some(ge) = a.apply(l, e) {
                        if !maximal.contains(&ge) && !s.domain(ge).frontier {
                            ok = false;
                            if cert.failure.is_none() {
                                cert.failure = Some(EyrieFailure::NotInvariant {
                                    generator: a.render_word(&Word::letter(l)),
                                    domain: s.id(e).into(),
                                    image: s.id(ge).into(),
                                });
                            }
                        }
                    }
                }
            }
            if ok {
                cert.invariant_under.push(a.names()[g].clone());
            }
        }
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianVerdict {
    VirtuallyAbelian(usize),
    NotByThisCriterion(String),
}

/// Rank equals the number of eyries when every domain is bounded or a
/// quasiline; otherwise reports a non-quasiline unbounded domain, preferring
/// eyries.
pub fn classify_virtually_abelian(s: &IndexStructure, cert: &EyrieCertificate) -> Result<AbelianVerdict, EyrieError> {
    cert.require_success()?;
    let mut offenders = Vec::new();
    for d in s.domains() {
        if d.bounded {
            continue;
        }
        match d.quasiline {
            None => return Err(EyrieError::MissingQuasilineFlag(d.id.clone())),
            Some(true) => {}
            Some(false) => offenders.push(d.id.clone()),
        }
    }
    offenders.sort_by_key(|id| (!cert.eyries.contains(id), id.clone()));
    Ok(match offenders.into_iter().next() {
        Some(w) => AbelianVerdict::NotByThisCriterion(w),
        None => AbelianVerdict::VirtuallyAbelian(cert.eyries.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trichotomy {
    NoEyrie,
    SingleEyrie(String),
    ProductOfK { k: usize, factors: Vec<String> },
}

pub fn classify_trichotomy(cert: &EyrieCertificate) -> Result<Trichotomy, EyrieError> {
    cert.require_success()?;
    let factors: Vec<String> = cert.eyries.iter().cloned().collect();
    Ok(match factors.len() {
        0 => Trichotomy::NoEyrie,
        1 => Trichotomy::SingleEyrie(factors[0].clone()),
        k => Trichotomy::ProductOfK { k, factors },
    })
}

/// Estimated big-set of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigSet {
    pub domains: BTreeSet<String>,
    pub pairwise_orthogonal: bool,
}

/// A model able to estimate `Bigset(h)` for words in its generators.
pub trait BigSetOracle {
    fn generator_names(&self) -> Vec<String>;
    fn big_set(&self, h: &Word) -> BigSet;
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OmnibusResult {
    /// The element found, as a word in the ambient generators.
    pub found: Option<Word>,
    pub words_checked: usize,
    /// Elements whose estimated big-set was not pairwise orthogonal.
    pub non_orthogonal: Vec<Word>,
}

/// Searches words of length ≤ `cap` over `subgroup_generators` (themselves
/// words in the ambient generators) in shortlex order for an element whose
/// big-set is the eyrie set. `None` is inconclusive.
pub fn omnibus_check(
    oracle: &dyn BigSetOracle,
    subgroup_generators: &[Word],
    cert: &EyrieCertificate,
    cap: usize,
) -> Result<OmnibusResult, EyrieError> {
    cert.require_success()?;
    let mut out = OmnibusResult::default();
    for len in 0..=cap {
        for w in Word::all_of_length(subgroup_generators.len(), len) {
            let h = w.letters().iter().fold(Word::identity(), |acc, l| {
                let g = &subgroup_generators[l.index()];
                acc.mul(&if l.inv { g.inverse() } else { g.clone() })
            });
            out.words_checked += 1;
            let b = oracle.big_set(&h);
            if !b.pairwise_orthogonal {
                out.non_orthogonal.push(h.clone());
            }
            if out.found.is_none() && b.domains == cert.eyries {
                out.found = Some(h);
                return Ok(out);
            }
        }
    }
    Ok(out)
}

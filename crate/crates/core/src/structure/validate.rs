use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::IndexStructure;

/// The combinatorial axioms checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    MutuallyExclusive,
    NestingIrreflexive,
    NestingTransitive,
    OrthogonalBound,
    OrthogonalContainer,
    OrthogonalityIrreflexive,
    QuasilineUnbounded,
    UniqueMaximal,
    /// Used by the action checks: a generator does not preserve a relation.
    RelationPreserved,
    /// Used by the action checks: a generator maps bounded to unbounded.
    BoundednessPreserved,
    /// Used by the action checks: too many orbits for the declared bound.
    CofiniteOrbits,
    /// Used by model spot checks of `gπ_U(x) = π_{gU}(gx)`.
    ModelEquivariance,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::MutuallyExclusive => "relations-mutually-exclusive",
            Axiom::NestingIrreflexive => "nesting-irreflexive",
            Axiom::NestingTransitive => "nesting-transitive",
            Axiom::OrthogonalBound => "orthogonal-set-bounded-by-complexity",
            Axiom::OrthogonalContainer => "orthogonal-container",
            Axiom::OrthogonalityIrreflexive => "orthogonality-irreflexive",
            Axiom::QuasilineUnbounded => "quasiline-unbounded",
            Axiom::UniqueMaximal => "unique-maximal-domain",
            Axiom::RelationPreserved => "action-preserves-relations",
            Axiom::BoundednessPreserved => "action-preserves-boundedness",
            Axiom::CofiniteOrbits => "action-cofinite",
            Axiom::ModelEquivariance => "model-equivariance",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub fn new(axiom: Axiom, witness: Vec<String>, detail: impl Into<String>) -> Self {
        Violation { axiom, witness, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.axiom, self.witness.join(", "), self.detail)
    }
}

/// Violations sorted by axiom name and then witness ids. Empty iff valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| a.axiom.name().cmp(b.axiom.name()).then_with(|| a.witness.cmp(&b.witness)));
        violations.dedup();
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn merge(self, other: ValidationReport) -> Self {
        let mut all = self.violations;
        all.extend(other.violations);
        Self::from_violations(all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateConfig {
    /// Up to this many domains the orthogonal-set bound is checked exactly.
    pub exhaustive_threshold: usize,
    /// Greedy restarts used above the threshold.
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { exhaustive_threshold: 20, random_trials: 256, seed: 0 }
    }
}

pub fn validate(structure: &IndexStructure) -> ValidationReport {
    validate_with(structure, &ValidateConfig::default())
}

pub fn validate_with(s: &IndexStructure, config: &ValidateConfig) -> ValidationReport {
    let mut out = Vec::new();
    let id = |u: usize| s.id(u).to_string();

    for d in s.domains() {
        if d.quasiline == Some(true) && d.bounded {
            out.push(Violation::new(Axiom::QuasilineUnbounded, vec![d.id.clone()], "flagged both quasiline and bounded"));
        }
    }

    let maxima = s.maximal_domains();
    if maxima.len() != 1 {
        let mut w: Vec<String> = maxima.iter().map(|&u| id(u)).collect();
        w.sort();
        out.push(Violation::new(
            Axiom::UniqueMaximal,
            w,
            format!("{} ⊑-maximal domains, expected exactly one", maxima.len()),
        ));
    }

    for (u, v) in s.declared_nesting() {
        if u == v {
            out.push(Violation::new(Axiom::NestingIrreflexive, vec![id(u)], "declared nested in itself"));
            continue;
        }
        if s.is_nested(v, u) && u < v {
            out.push(Violation::new(Axiom::MutuallyExclusive, vec![id(u), id(v)], "nested in both directions"));
        }
        if s.is_orthogonal(u, v) {
            let (a, b) = if id(u) <= id(v) { (u, v) } else { (v, u) };
            out.push(Violation::new(Axiom::MutuallyExclusive, vec![id(a), id(b)], "both nested and orthogonal"));
        }
        for &w in s.strictly_above(v) {
            if w != u && !s.is_nested(u, w) {
                out.push(Violation::new(
                    Axiom::NestingTransitive,
                    vec![id(u), id(v), id(w)],
                    format!("{} < {} < {} but not {} < {}", id(u), id(v), id(w), id(u), id(w)),
                ));
            }
        }
    }

    for u in 0..s.len() {
        if s.is_orthogonal(u, u) {
            out.push(Violation::new(Axiom::OrthogonalityIrreflexive, vec![id(u)], "orthogonal to itself"));
        }
        let orth = s.orthogonal_to(u);
        if orth.iter().all(|&v| v == u) {
            continue;
        }
        match s.container(u) {
            None => out.push(Violation::new(
                Axiom::OrthogonalContainer,
                vec![id(u)],
                "orthogonal container missing",
            )),
            Some(w) => {
                for &v in orth {
                    if v != u && !s.is_nested_or_equal(v, w) {
                        out.push(Violation::new(
                            Axiom::OrthogonalContainer,
                            vec![id(u), id(v), id(w)],
                            format!("{} ⊥ {} but {} is not nested in container {}", id(v), id(u), id(v), id(w)),
                        ));
                    }
                }
            }
        }
    }

    let c = s.complexity();
    let clique = if s.len() <= config.exhaustive_threshold {
        max_orthogonal_set_exact(s)
    } else {
        max_orthogonal_set_sampled(s, config.random_trials, config.seed)
    };
    if clique.len() > c {
        let mut w: Vec<String> = clique.iter().map(|&u| id(u)).collect();
        w.sort();
        out.push(Violation::new(
            Axiom::OrthogonalBound,
            w,
            format!("{} pairwise orthogonal domains exceed complexity {}", clique.len(), c),
        ));
    }

    ValidationReport::from_violations(out)
}

/// Largest pairwise-orthogonal set, by Bron–Kerbosch with pivoting.
pub(crate) fn max_orthogonal_set_exact(s: &IndexStructure) -> Vec<usize> {
    fn bk(s: &IndexStructure, r: &mut Vec<usize>, p: BTreeSet<usize>, x: BTreeSet<usize>, best: &mut Vec<usize>) {
        if p.is_empty() && x.is_empty() {
            if r.len() > best.len() || (r.len() == best.len() && sorted(r) < sorted(best)) {
                *best = r.clone();
            }
            return;
        }
        let pivot = p.iter().chain(x.iter()).max_by_key(|&&u| p.iter().filter(|&&v| s.is_orthogonal(u, v)).count());
        let pivot = *pivot.unwrap();
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !s.is_orthogonal(pivot, v)).collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let nbrs = |set: &BTreeSet<usize>| set.iter().copied().filter(|&w| w != v && s.is_orthogonal(v, w)).collect();
            r.push(v);
            bk(s, r, nbrs(&p), nbrs(&x), best);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    fn sorted(v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        v.sort();
        v
    }
    let mut best = Vec::new();
    let all: BTreeSet<usize> = (0..s.len()).filter(|&u| !s.is_orthogonal(u, u)).collect();
    bk(s, &mut Vec::new(), all, BTreeSet::new(), &mut best);
    best.sort();
    best
}

/// Randomized greedy search for a large pairwise-orthogonal set.
pub(crate) fn max_orthogonal_set_sampled(s: &IndexStructure, trials: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let with_ortho: Vec<usize> = (0..s.len()).filter(|&u| !s.orthogonal_to(u).is_empty()).collect();
    let mut best: Vec<usize> = with_ortho.first().map(|&u| vec![u]).unwrap_or_default();
    let mut order = with_ortho.clone();
    for _ in 0..trials.max(1) {
        order.shuffle(&mut rng);
        let mut clique: Vec<usize> = Vec::new();
        for &u in &order {
            if s.is_orthogonal(u, u) {
                continue;
            }
            if clique.iter().all(|&v| s.is_orthogonal(u, v)) {
                clique.push(u);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort();
    best
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{Domain, IndexStructure};
    use super::*;

    #[test]
    fn z2_is_valid() {
        let r = validate(&z2());
        assert!(r.is_valid(), "{:?}", r);
    }

    #[test]
    fn nested_and_orthogonal_pair() {
        let st = IndexStructure::new(
            vec![Domain::new("S", true), Domain::new("U1", false), Domain::new("U2", false)],
            &pairs(&[("U1", "S"), ("U2", "S"), ("U1", "U2")]),
            &pairs(&[("U1", "U2")]),
            &pairs(&[("U1", "S"), ("U2", "S")]),
        )
        .unwrap();
        let r = validate(&st);
        let v = r.violations.iter().find(|v| v.axiom == Axiom::MutuallyExclusive).unwrap();
        assert_eq!(v.witness, vec![s("U1"), s("U2")]);
    }

    #[test]
    fn missing_container() {
        let st = IndexStructure::new(
            vec![Domain::new("S", true), Domain::new("U", false), Domain::new("V", false)],
            &pairs(&[("U", "S"), ("V", "S")]),
            &pairs(&[("U", "V")]),
            &pairs(&[("V", "S")]),
        )
        .unwrap();
        let r = validate(&st);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].axiom, Axiom::OrthogonalContainer);
        assert_eq!(r.violations[0].witness, vec![s("U")]);
    }

    #[test]
    fn non_transitive_and_two_maxima() {
        let st = IndexStructure::new(
            vec![Domain::new("A", false), Domain::new("B", false), Domain::new("C", false), Domain::new("D", false)],
            &pairs(&[("A", "B"), ("B", "C")]),
            &[],
            &[],
        )
        .unwrap();
        let r = validate(&st);
        assert!(r.has(Axiom::NestingTransitive));
        assert!(r.has(Axiom::UniqueMaximal));
    }

    #[test]
    fn three_orthogonal_lines_need_complexity_three() {
        let st = IndexStructure::new(
            vec![Domain::new("S", true), Domain::new("U1", false), Domain::new("U2", false), Domain::new("U3", false)],
            &pairs(&[("U1", "S"), ("U2", "S"), ("U3", "S")]),
            &pairs(&[("U1", "U2"), ("U1", "U3"), ("U2", "U3")]),
            &pairs(&[("U1", "S"), ("U2", "S"), ("U3", "S")]),
        )
        .unwrap();
        let r = validate(&st);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].axiom, Axiom::OrthogonalBound);
        assert_eq!(r.violations[0].witness, vec![s("U1"), s("U2"), s("U3")]);
        // the sampled search finds the same clique
        assert_eq!(max_orthogonal_set_sampled(&st, 16, 7).len(), 3);
    }

    #[test]
    fn quasiline_flag_conflict() {
        let st = IndexStructure::new(vec![Domain::new("S", true).with_quasiline(true)], &[], &[], &[]).unwrap();
        assert!(validate(&st).has(Axiom::QuasilineUnbounded));
    }

    #[test]
    fn reports_are_sorted_and_stable() {
        let st = IndexStructure::new(
            vec![Domain::new("A", false), Domain::new("B", false), Domain::new("C", false), Domain::new("D", false)],
            &pairs(&[("A", "B"), ("B", "C"), ("B", "A")]),
            &pairs(&[("C", "D")]),
            &[],
        )
        .unwrap();
        let r1 = validate(&st);
        let r2 = validate(&st);
        assert_eq!(r1, r2);
        let names: Vec<&str> = r1.violations.iter().map(|v| v.axiom.name()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}

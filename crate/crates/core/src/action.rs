//! Groups acting on a finite truncation of an index structure.
//!
//! Each generator is a partial injective map on domain indices. A domain
//! without a declared image is fixed, unless it is a frontier domain, whose
//! image lies outside the truncation and is unknown.

use std::collections::{BTreeMap, BTreeSet};

use crate::structure::{ActionSpec, Axiom, IndexStructure, StructureError, ValidationReport, Violation};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("generator `{gen}` is not injective: `{image}` has two preimages")]
    NotInjective { gen: String, image: String },
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    names: Vec<String>,
    forward: Vec<Vec<Option<usize>>>,
    backward: Vec<Vec<Option<usize>>>,
    orbit_bound: Option<usize>,
    orbit_index: Vec<usize>,
}

impl ActionTable {
    /// Builds the table for `spec` over `s`.
    pub fn from_spec(s: &IndexStructure, spec: &ActionSpec) -> Result<Self, ActionError> {
        let mut gens = Vec::new();
        for (name, map) in &spec.generators {
            let mut pairs = Vec::new();
            for (u, v) in map {
                pairs.push((s.index_of(u)?, s.index_of(v)?));
            }
            gens.push((name.clone(), pairs));
        }
        Self::from_indices(s, gens, spec.orbit_bound)
    }

    /// Generators that fix every non-frontier domain.
    pub fn trivial(s: &IndexStructure, names: &[&str]) -> Self {
        let gens = names.iter().map(|n| (n.to_string(), Vec::new())).collect();
        Self::from_indices(s, gens, None).expect("identity maps are injective")
    }

    pub fn from_indices(
        s: &IndexStructure,
        gens: Vec<(String, Vec<(usize, usize)>)>,
        orbit_bound: Option<usize>,
    ) -> Result<Self, ActionError> {
        let n = s.len();
        let mut names = Vec::new();
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        for (name, pairs) in gens {
            if names.contains(&name) {
                return Err(ActionError::DuplicateGenerator(name));
            }
            let mut fwd: Vec<Option<usize>> = (0..n).map(|u| (!s.domain(u).frontier).then_some(u)).collect();
            for &(u, v) in &pairs {
                fwd[u] = Some(v);
            }
            let mut bwd = vec![None; n];
            for (u, img) in fwd.iter().enumerate() {
                if let Some(v) = *img {
                    if bwd[v].is_some() {
                        return Err(ActionError::NotInjective { gen: name, image: s.id(v).to_string() });
                    }
                    bwd[v] = Some(u);
                }
            }
            names.push(name);
            forward.push(fwd);
            backward.push(bwd);
        }

        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for fwd in &forward {
            for (u, img) in fwd.iter().enumerate() {
                if let Some(v) = *img {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let orbit_index = (0..n).map(|u| find(&mut parent, u)).collect();
        Ok(ActionTable { names, forward, backward, orbit_bound, orbit_index })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn orbit_bound(&self) -> Option<usize> {
        self.orbit_bound
    }

    pub fn apply(&self, l: Letter, u: usize) -> Option<usize> {
        if l.inv {
            self.backward[l.index()][u]
        } else {
            self.forward[l.index()][u]
        }
    }

    /// `w·U`, applying the rightmost letter first. `None` once the image
    /// leaves the truncation.
    pub fn apply_word(&self, w: &Word, u: usize) -> Option<usize> {
        w.letters().iter().rev().try_fold(u, |x, &l| self.apply(l, x))
    }

    /// Orbits of the generated action, as seen inside the truncation.
    pub fn orbit_partition(&self) -> Vec<BTreeSet<usize>> {
        let mut by_root: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (u, &r) in self.orbit_index.iter().enumerate() {
            by_root.entry(r).or_default().insert(u);
        }
        by_root.into_values().collect()
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.names)
    }
}

/// Model-level equivariance checks attached to [`verify_equivariance_with`].
pub trait EquivarianceHook {
    fn check(&self, structure: &IndexStructure, action: &ActionTable) -> Vec<Violation>;
}

pub fn verify_equivariance(s: &IndexStructure, action: &ActionTable) -> ValidationReport {
    verify_equivariance_with(s, action, None)
}

pub fn verify_equivariance_with(
    s: &IndexStructure,
    action: &ActionTable,
    hook: Option<&dyn EquivarianceHook>,
) -> ValidationReport {
    let mut out = Vec::new();
    for g in 0..action.generator_count() {
        for l in [Letter::new(g, false), Letter::new(g, true)] {
            let lname = action.render_word(&Word::letter(l));
            for u in 0..s.len() {
                let Some(gu) = action.apply(l, u) else { continue };
                if s.domain(u).bounded != s.domain(gu).bounded {
                    out.push(Violation::new(
                        Axiom::BoundednessPreserved,
                        vec![lname.clone(), s.id(u).into()],
                        format!("{} bounded={} but {}·{} = {} bounded={}", s.id(u), s.domain(u).bounded, lname, s.id(u), s.id(gu), s.domain(gu).bounded),
                    ));
                }
                for v in (u + 1)..s.len() {
                    let Some(gv) = action.apply(l, v) else { continue };
                    let (r, gr) = (s.relation(u, v), s.relation(gu, gv));
                    if r != gr {
                        out.push(Violation::new(
                            Axiom::RelationPreserved,
                            vec![lname.clone(), s.id(u).into(), s.id(v).into()],
                            format!("{} {} {} but {} {} {}", s.id(u), r, s.id(v), s.id(gu), gr, s.id(gv)),
                        ));
                    }
                }
            }
        }
    }
    if let Some(k) = action.orbit_bound() {
        let interior: Vec<usize> = action
            .orbit_partition()
            .into_iter()
            .filter_map(|o| o.into_iter().find(|&u| !s.domain(u).frontier))
            .collect();
        if interior.len() > k {
            let mut w: Vec<String> = interior.iter().map(|&u| s.id(u).to_string()).collect();
            w.sort();
            out.push(Violation::new(
                Axiom::CofiniteOrbits,
                w,
                format!("{} orbits among non-frontier domains, declared at most {}", interior.len(), k),
            ));
        }
    }
    if let Some(h) = hook {
        out.extend(h.check(s, action));
    }
    ValidationReport::from_violations(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: usize,
    /// Each member with a shortest word carrying the representative to it.
    pub members: BTreeMap<usize, Word>,
    pub complete: bool,
}

impl Orbit {
    pub fn member_set(&self) -> BTreeSet<usize> {
        self.members.keys().copied().collect()
    }

    /// Members ordered by their word in shortlex order.
    pub fn by_word(&self) -> Vec<(&Word, usize)> {
        let mut v: Vec<(&Word, usize)> = self.members.iter().map(|(&u, w)| (w, u)).collect();
        v.sort_by(|a, b| a.0.shortlex_cmp(b.0).then(a.1.cmp(&b.1)));
        v
    }
}

/// Breadth-first closure of `{U}` under the generators and their inverses,
/// using words of length at most `depth_cap`.
pub fn orbit(action: &ActionTable, u: usize, depth_cap: usize) -> Orbit {
    let mut members = BTreeMap::new();
    members.insert(u, Word::identity());
    let mut layer = vec![u];
    let mut escaped = false;
    let mut stabilised = false;
    let letters = Letter::alphabet(action.generator_count());
    for depth in 0..=depth_cap {
        let mut next: BTreeMap<usize, Word> = BTreeMap::new();
        for &x in &layer {
            let wx = members[&x].clone();
            for &l in &letters {
                match action.apply(l, x) {
                    None => escaped = true,
                    Some(y) if !members.contains_key(&y) => {
                        let w = wx.prepend(l);
                        match next.get(&y) {
                            Some(old) if old.shortlex_cmp(&w).is_le() => {}
                            _ => {
                                next.insert(y, w);
                            }
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        if next.is_empty() {
            stabilised = true;
            break;
        }
        if depth == depth_cap {
            break;
        }
        layer = next.keys().copied().collect();
        members.extend(next);
    }
    Orbit { representative: u, members, complete: stabilised && !escaped }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslateResult {
    Found { word: Word, image: usize },
    /// The orbit is complete and contains no translate transverse to U.
    Absent,
    Inconclusive,
}

pub fn transverse_translate(s: &IndexStructure, action: &ActionTable, u: usize, depth_cap: usize) -> TranslateResult {
    let o = orbit(action, u, depth_cap);
    for (w, gu) in o.by_word() {
        if s.is_transverse(u, gu) {
            return TranslateResult::Found { word: w.clone(), image: gu };
        }
    }
    if o.complete {
        TranslateResult::Absent
    } else {
        TranslateResult::Inconclusive
    }
}

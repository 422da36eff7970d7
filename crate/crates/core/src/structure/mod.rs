//! Finite hierarchical index structures.
//!
//! An [`IndexStructure`] is the combinatorial skeleton of an HHS: a finite set
//! of domains with nesting and orthogonality. Transversality is never stored;
//! it is whatever is left over once equality, nesting and orthogonality have
//! been ruled out.

mod parse;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_structure_file, render_structure_file, ActionSpec, StructureFile};
pub use validate::{validate, validate_with, Axiom, ValidateConfig, ValidationReport, Violation};

/// Input-level problems: the data does not describe a structure at all.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown domain id `{0}`")]
    UnknownDomain(String),
    #[error("duplicate declaration: {0}")]
    Duplicate(String),
    #[error("domain `{0}` has no boundedness flag (bounded, unbounded or quasiline)")]
    MissingBoundedness(String),
    #[error("orthogonality is not symmetric between `{0}` and `{1}`")]
    AsymmetricOrthogonality(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    pub id: String,
    /// Trusted label: the associated hyperbolic space is bounded.
    pub bounded: bool,
    /// Trusted label: the associated hyperbolic space is a quasiline.
    /// `None` when the input says nothing either way.
    pub quasiline: Option<bool>,
    /// The domain sits on the edge of a finite truncation, so some
    /// translates of it are not materialized.
    pub frontier: bool,
}

impl Domain {
    pub fn new(id: impl Into<String>, bounded: bool) -> Self {
        Domain { id: id.into(), bounded, quasiline: None, frontier: false }
    }

    pub fn quasiline(id: impl Into<String>) -> Self {
        Domain { id: id.into(), bounded: false, quasiline: Some(true), frontier: false }
    }

    pub fn with_quasiline(mut self, q: bool) -> Self {
        self.quasiline = Some(q);
        self
    }

    pub fn with_frontier(mut self, f: bool) -> Self {
        self.frontier = f;
        self
    }
}

/// The five mutually exclusive relations between two domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Equal,
    /// `U ⊊ V`
    NestedIn,
    /// `V ⊊ U`
    Contains,
    Orthogonal,
    Transverse,
}

impl Relation {
    pub fn flip(self) -> Self {
        match self {
            Relation::NestedIn => Relation::Contains,
            Relation::Contains => Relation::NestedIn,
            r => r,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::NestedIn => "<",
            Relation::Contains => ">",
            Relation::Orthogonal => "_|_",
            Relation::Transverse => "><",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A finite index set with nesting, orthogonality and orthogonal containers.
///
/// Immutable once built. Relations are stored exactly as declared so that
/// [`validate`] can report inconsistent input instead of silently repairing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexStructure {
    domains: Vec<Domain>,
    index: BTreeMap<String, usize>,
    nested: Vec<BTreeSet<usize>>,
    ortho: Vec<BTreeSet<usize>>,
    containers: Vec<Option<usize>>,
}

impl IndexStructure {
    /// Builds a structure from declared data. Orthogonality pairs are
    /// unordered; nesting pairs `(u, v)` mean `u ⊊ v`.
    pub fn new(
        domains: Vec<Domain>,
        nesting: &[(String, String)],
        orthogonality: &[(String, String)],
        containers: &[(String, String)],
    ) -> Result<Self, StructureError> {
        let mut index = BTreeMap::new();
        for (i, d) in domains.iter().enumerate() {
            if index.insert(d.id.clone(), i).is_some() {
                return Err(StructureError::Duplicate(format!("domain `{}`", d.id)));
            }
        }
        let n = domains.len();
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| StructureError::UnknownDomain(id.to_string()));
        let mut nested = vec![BTreeSet::new(); n];
        for (u, v) in nesting {
            let (u, v) = (lookup(u)?, lookup(v)?);
            nested[u].insert(v);
        }
        let mut ortho = vec![BTreeSet::new(); n];
        for (u, v) in orthogonality {
            let (u, v) = (lookup(u)?, lookup(v)?);
            ortho[u].insert(v);
            ortho[v].insert(u);
        }
        let mut cont = vec![None; n];
        for (u, w) in containers {
            let (u, w) = (lookup(u)?, lookup(w)?);
            if cont[u].replace(w).is_some() {
                return Err(StructureError::Duplicate(format!("container of `{}`", domains[u].id)));
            }
        }
        Ok(IndexStructure { domains, index, nested, ortho, containers: cont })
    }

    /// Builds a structure from an orthogonality matrix given as ordered pairs.
    /// Every pair must appear in both orders.
    pub fn from_directed_orthogonality(
        domains: Vec<Domain>,
        nesting: &[(String, String)],
        directed: &[(String, String)],
        containers: &[(String, String)],
    ) -> Result<Self, StructureError> {
        let set: BTreeSet<(&str, &str)> = directed.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        for (a, b) in &set {
            if !set.contains(&(*b, *a)) {
                return Err(StructureError::AsymmetricOrthogonality(a.to_string(), b.to_string()));
            }
        }
        let pairs: Vec<(String, String)> =
            set.iter().filter(|(a, b)| a <= b).map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Self::new(domains, nesting, &pairs, containers)
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn domain(&self, idx: usize) -> &Domain {
        &self.domains[idx]
    }

    pub fn id(&self, idx: usize) -> &str {
        &self.domains[idx].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize, StructureError> {
        self.index.get(id).copied().ok_or_else(|| StructureError::UnknownDomain(id.to_string()))
    }

    pub fn indices_of<I>(&self, ids: I) -> Result<BTreeSet<usize>, StructureError>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        ids.into_iter().map(|id| self.index_of(id.as_ref())).collect()
    }

    /// Declared `u ⊊ v`.
    pub fn is_nested(&self, u: usize, v: usize) -> bool {
        self.nested[u].contains(&v)
    }

    /// `u ⊑ v`, equality included.
    pub fn is_nested_or_equal(&self, u: usize, v: usize) -> bool {
        u == v || self.is_nested(u, v)
    }

    pub fn is_orthogonal(&self, u: usize, v: usize) -> bool {
        self.ortho[u].contains(&v)
    }

    pub fn is_transverse(&self, u: usize, v: usize) -> bool {
        self.relation(u, v) == Relation::Transverse
    }

    /// The relation between two domains, with transversality derived.
    /// On invalid input the first matching relation in the order
    /// `=, ⊊, ⊋, ⊥` wins; use [`validate`] to detect such input.
    pub fn relation(&self, u: usize, v: usize) -> Relation {
        if u == v {
            Relation::Equal
        } else if self.is_nested(u, v) {
            Relation::NestedIn
        } else if self.is_nested(v, u) {
            Relation::Contains
        } else if self.is_orthogonal(u, v) {
            Relation::Orthogonal
        } else {
            Relation::Transverse
        }
    }

    /// Domains strictly above `u`.
    pub fn strictly_above(&self, u: usize) -> &BTreeSet<usize> {
        &self.nested[u]
    }

    pub fn orthogonal_to(&self, u: usize) -> &BTreeSet<usize> {
        &self.ortho[u]
    }

    pub fn container(&self, u: usize) -> Option<usize> {
        self.containers[u]
    }

    /// `𝔖_V`: every domain nested in or equal to `v`.
    pub fn nested_in_or_equal(&self, v: usize) -> BTreeSet<usize> {
        (0..self.len()).filter(|&u| self.is_nested_or_equal(u, v)).collect()
    }

    /// Domains with no strict ancestor.
    pub fn maximal_domains(&self) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.nested[u].is_empty()).collect()
    }

    /// The unique ⊑-maximal domain, if there is exactly one.
    pub fn maximal(&self) -> Option<usize> {
        match self.maximal_domains().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn unbounded(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&u| !self.domains[u].bounded).collect()
    }

    pub fn unbounded_ids(&self) -> BTreeSet<String> {
        self.unbounded().into_iter().map(|u| self.id(u).to_string()).collect()
    }

    /// Length of the longest `⊊`-chain whose top element is `u`, counted in
    /// domains. Minimal domains have level 1. Declared cycles are cut, so the
    /// result is finite on any input.
    pub fn level(&self, u: usize) -> usize {
        let mut memo = vec![None; self.len()];
        let mut on_stack = vec![false; self.len()];
        self.level_memo(u, &mut memo, &mut on_stack)
    }

    pub fn level_of(&self, id: &str) -> Result<usize, StructureError> {
        Ok(self.level(self.index_of(id)?))
    }

    /// Levels of every domain at once.
    pub fn levels(&self) -> Vec<usize> {
        let mut memo = vec![None; self.len()];
        let mut on_stack = vec![false; self.len()];
        (0..self.len()).map(|u| self.level_memo(u, &mut memo, &mut on_stack)).collect()
    }

    fn level_memo(&self, u: usize, memo: &mut [Option<usize>], on_stack: &mut [bool]) -> usize {
        if let Some(l) = memo[u] {
            return l;
        }
        on_stack[u] = true;
        let mut best = 0;
        for w in 0..self.len() {
            if w != u && !on_stack[w] && self.nested[w].contains(&u) {
                best = best.max(self.level_memo(w, memo, on_stack));
            }
        }
        on_stack[u] = false;
        memo[u] = Some(best + 1);
        best + 1
    }

    /// Complexity: the longest nesting chain.
    pub fn complexity(&self) -> usize {
        self.levels().into_iter().max().unwrap_or(0)
    }

    /// The transversality graph on a subset of domains.
    pub fn transversality_graph<'a, I>(&self, subset: I) -> Result<TransversalityGraph, StructureError>
    where
        I: IntoIterator<Item = &'a String>,
    {
        let vertices = self.indices_of(subset)?;
        Ok(self.transversality_graph_idx(&vertices))
    }

    pub fn transversality_graph_idx(&self, vertices: &BTreeSet<usize>) -> TransversalityGraph {
        let verts: Vec<usize> = vertices.iter().copied().collect();
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if self.is_transverse(u, v) {
                    edges.push((u, v));
                }
            }
        }
        TransversalityGraph::from_parts(self, verts, edges)
    }

    /// The structure cut down to `keep`; relations among kept domains are
    /// preserved and containers that fall outside are dropped.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> IndexStructure {
        let domains: Vec<Domain> = keep.iter().map(|&u| self.domains[u].clone()).collect();
        let mut nesting = Vec::new();
        let mut ortho = Vec::new();
        let mut cont = Vec::new();
        for &u in keep {
            for &v in &self.nested[u] {
                if keep.contains(&v) {
                    nesting.push((self.id(u).to_string(), self.id(v).to_string()));
                }
            }
            for &v in &self.ortho[u] {
                if u < v && keep.contains(&v) {
                    ortho.push((self.id(u).to_string(), self.id(v).to_string()));
                }
            }
            if let Some(w) = self.containers[u].filter(|w| keep.contains(w)) {
                cont.push((self.id(u).to_string(), self.id(w).to_string()));
            }
        }
        IndexStructure::new(domains, &nesting, &ortho, &cont).expect("restriction of a well-formed structure")
    }

    pub(crate) fn declared_nesting(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nested.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub(crate) fn declared_orthogonality(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ortho.iter().enumerate().flat_map(|(u, vs)| vs.iter().filter(move |&&v| u <= v).map(move |&v| (u, v)))
    }
}

/// `Γ^⋔(𝔖′)`: vertices a subset of domains, edges the transverse pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalityGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub components: Vec<Vec<String>>,
}

impl TransversalityGraph {
    fn from_parts(s: &IndexStructure, verts: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for &(u, v) in &edges {
            adj[pos[&u]].push(pos[&v]);
            adj[pos[&v]].push(pos[&u]);
        }
        let mut seen = vec![false; verts.len()];
        let mut components = Vec::new();
        for start in 0..verts.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                comp.push(s.id(verts[i]).to_string());
                for &j in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            comp.sort();
            components.push(comp);
        }
        components.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut vertices: Vec<String> = verts.iter().map(|&u| s.id(u).to_string()).collect();
        vertices.sort();
        let mut edges: Vec<(String, String)> = edges
            .into_iter()
            .map(|(u, v)| {
                let (a, b) = (s.id(u).to_string(), s.id(v).to_string());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        TransversalityGraph { vertices, edges, components }
    }

    pub fn largest_component(&self) -> usize {
        self.components.first().map_or(0, Vec::len)
    }
}

//! Seeded random index structures with symmetric actions, for property tests.
//!
//! A structure is grown as a rooted tree (nesting = strict ancestry). Each
//! node's children come in blocks of identical copies; the copies in a block
//! are either pairwise orthogonal (orthogonality passes down to descendants)
//! or pairwise transverse. Every block with two or more copies contributes a
//! generator cycling its copies, which is an automorphism of the structure.

use std::collections::BTreeSet;

use rand::Rng;

use crate::action::ActionTable;
use crate::structure::{validate, Domain, IndexStructure};

#[derive(Debug, Clone)]
struct Template {
    bounded: bool,
    quasiline: Option<bool>,
    blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
struct Block {
    template: Template,
    copies: usize,
    orthogonal: bool,
}

impl Template {
    fn size(&self) -> usize {
        1 + self.blocks.iter().map(|b| b.copies * b.template.size()).sum::<usize>()
    }
}

#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub structure: IndexStructure,
    pub action: ActionTable,
}

fn random_template<R: Rng>(rng: &mut R, budget: usize, depth: usize) -> Template {
    let bounded = rng.gen_bool(0.5);
    let quasiline = if bounded { Some(false) } else { Some(rng.gen_bool(0.5)) };
    let mut t = Template { bounded, quasiline, blocks: Vec::new() };
    let mut left = budget.saturating_sub(1);
    while left > 0 && depth < 4 && rng.gen_bool(0.6) {
        let sub_budget = rng.gen_range(1..=left.min(4));
        let inner = random_template(rng, sub_budget, depth + 1);
        let sz = inner.size();
        if sz > left {
            break;
        }
        let max_copies = (left / sz).min(3);
        let copies = rng.gen_range(1..=max_copies);
        left -= copies * sz;
        t.blocks.push(Block { template: inner, copies, orthogonal: copies > 1 && rng.gen_bool(0.5) });
    }
    t
}

struct Builder {
    domains: Vec<Domain>,
    parent: Vec<Option<usize>>,
    /// For each node, the (block id, copy index) of it if it is a copy root.
    copy_of: Vec<Option<(usize, usize)>>,
    block_orthogonal: Vec<bool>,
    /// Per block, per copy, the nodes of that copy in a fixed order.
    block_nodes: Vec<Vec<Vec<usize>>>,
}

impl Builder {
    fn instantiate(&mut self, t: &Template, parent: Option<usize>, copy: Option<(usize, usize)>) -> Vec<usize> {
        let me = self.domains.len();
        let mut d = Domain::new(format!("D{me}"), t.bounded);
        d.quasiline = t.quasiline;
        self.domains.push(d);
        self.parent.push(parent);
        self.copy_of.push(copy);
        let mut nodes = vec![me];
        for b in &t.blocks {
            let id = self.block_nodes.len();
            self.block_nodes.push(Vec::new());
            self.block_orthogonal.push(b.orthogonal);
            for c in 0..b.copies {
                let sub = self.instantiate(&b.template, Some(me), Some((id, c)));
                self.block_nodes[id].push(sub.clone());
                nodes.extend(sub);
            }
        }
        nodes
    }

    fn ancestors(&self, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut x = u;
        while let Some(p) = self.parent[x] {
            out.push(p);
            x = p;
        }
        out
    }
}

/// Draws a valid structure with at most `max_domains` domains. Candidates
/// failing validation are redrawn.
pub fn random_instance<R: Rng>(rng: &mut R, max_domains: usize) -> RandomInstance {
    assert!(max_domains >= 1);
    loop {
        let budget = rng.gen_range(1..=max_domains);
        let t = random_template(rng, budget, 0);
        if t.size() > max_domains {
            continue;
        }
        let mut b = Builder {
            domains: Vec::new(),
            parent: Vec::new(),
            copy_of: Vec::new(),
            block_orthogonal: Vec::new(),
            block_nodes: Vec::new(),
        };
        b.instantiate(&t, None, None);
        let n = b.domains.len();
        let anc: Vec<Vec<usize>> = (0..n).map(|u| b.ancestors(u)).collect();

        let mut nesting = Vec::new();
        for u in 0..n {
            for &a in &anc[u][1..] {
                nesting.push((b.domains[u].id.clone(), b.domains[a].id.clone()));
            }
        }
        let orthogonal_roots = |u: usize, v: usize| {
            anc[u].iter().any(|&x| {
                anc[v].iter().any(|&y| match (b.copy_of[x], b.copy_of[y]) {
                    (Some((bx, cx)), Some((by, cy))) => bx == by && cx != cy && b.block_orthogonal[bx],
                    _ => false,
                })
            })
        };
        let mut ortho = Vec::new();
        let mut containers = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if orthogonal_roots(u, v) {
                    ortho.push((b.domains[u].id.clone(), b.domains[v].id.clone()));
                }
            }
            // parent of the topmost orthogonal copy root above u
            let top = anc[u]
                .iter()
                .rev()
                .find(|&&x| b.copy_of[x].is_some_and(|(bx, _)| b.block_orthogonal[bx]));
            if let Some(&x) = top {
                let w = b.parent[x].expect("copy roots have parents");
                containers.push((b.domains[u].id.clone(), b.domains[w].id.clone()));
            }
        }
        let Ok(structure) = IndexStructure::new(b.domains.clone(), &nesting, &ortho, &containers) else {
            continue;
        };
        if !validate(&structure).is_valid() {
            continue;
        }
        let mut gens = Vec::new();
        for (id, copies) in b.block_nodes.iter().enumerate() {
            if copies.len() < 2 {
                continue;
            }
            let k = copies.len();
            let mut map = Vec::new();
            for c in 0..k {
                for (x, y) in copies[c].iter().zip(&copies[(c + 1) % k]) {
                    map.push((*x, *y));
                }
            }
            gens.push((format!("t{id}"), map));
        }
        let action = ActionTable::from_indices(&structure, gens, None).expect("cyclic shifts are injective");
        return RandomInstance { structure, action };
    }
}

/// A random subset of the unbounded domains, closed under the action.
pub fn random_invariant_labels<R: Rng>(rng: &mut R, inst: &RandomInstance) -> BTreeSet<String> {
    let s = &inst.structure;
    let mut out = BTreeSet::new();
    for orbit in inst.action.orbit_partition() {
        if orbit.iter().all(|&u| !s.domain(u).bounded) && rng.gen_bool(0.7) {
            out.extend(orbit.iter().map(|&u| s.id(u).to_string()));
        }
    }
    out
}

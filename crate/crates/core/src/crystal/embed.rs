//! Backtracking search for an injective homomorphism F → Bₙ.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::group::FiniteGroup;
use super::signed::{hyperoctahedral_elements, hyperoctahedral_order, SignedPerm};
use super::CrystalError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// F has an element of this order and Bₙ has none.
    ElementOrderAbsent { order: usize },
    OrderDivisibility { group_order: usize, target_order: u128 },
    ExhaustedSearch,
}

impl Obstruction {
    pub fn kind(&self) -> &'static str {
        match self {
            Obstruction::ElementOrderAbsent { .. } => "element-order-absent",
            Obstruction::OrderDivisibility { .. } => "order-divisibility",
            Obstruction::ExhaustedSearch => "exhausted-search",
        }
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::ElementOrderAbsent { order } => write!(f, "no element of order {order} in the target"),
            Obstruction::OrderDivisibility { group_order, target_order } => {
                write!(f, "{group_order} does not divide {target_order}")
            }
            Obstruction::ExhaustedSearch => f.write_str("no injective homomorphism exists"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingResult {
    /// Images of `F.generators`, and of every element.
    Embeds { generator_images: Vec<(usize, SignedPerm)>, images: Vec<SignedPerm> },
    Obstructed(Obstruction),
}

impl EmbeddingResult {
    pub fn embeds(&self) -> bool {
        matches!(self, EmbeddingResult::Embeds { .. })
    }
}

/// Decides whether `f` embeds in Bₙ.
pub fn embeds(f: &FiniteGroup, n: usize) -> Result<EmbeddingResult, CrystalError> {
    let bn = hyperoctahedral_elements(n)?;
    let target_spectrum: BTreeSet<usize> = bn.iter().map(|g| g.order()).collect();
    if let Some(&order) = f.order_spectrum().iter().find(|o| !target_spectrum.contains(o)) {
        return Ok(EmbeddingResult::Obstructed(Obstruction::ElementOrderAbsent { order }));
    }
    let target_order = hyperoctahedral_order(n);
    if !target_order.is_multiple_of(f.order() as u128) {
        return Ok(EmbeddingResult::Obstructed(Obstruction::OrderDivisibility { group_order: f.order(), target_order }));
    }

    let mut by_order: BTreeMap<usize, Vec<&SignedPerm>> = BTreeMap::new();
    for g in &bn {
        by_order.entry(g.order()).or_default().push(g);
    }
    let mut gens = f.generators.clone();
    gens.sort_by_key(|&g| std::cmp::Reverse(f.element_order(g)));

    let mut chosen: Vec<SignedPerm> = Vec::new();
    if search(f, n, &gens, &by_order, &mut chosen) {
        let images = full_map(f, n, &gens, &chosen).expect("search only accepts consistent maps");
        let generator_images = gens.iter().copied().zip(chosen).collect();
        return Ok(EmbeddingResult::Embeds { generator_images, images });
    }
    Ok(EmbeddingResult::Obstructed(Obstruction::ExhaustedSearch))
}

fn search(
    f: &FiniteGroup,
    n: usize,
    gens: &[usize],
    by_order: &BTreeMap<usize, Vec<&SignedPerm>>,
    chosen: &mut Vec<SignedPerm>,
) -> bool {
    let k = chosen.len();
    if k == gens.len() {
        return full_map(f, n, gens, chosen).is_some();
    }
    let Some(candidates) = by_order.get(&f.element_order(gens[k])) else {
        return false;
    };
    let mut seen_types = BTreeSet::new();
    for &c in candidates {
        // up to conjugation in Bₙ the first image is determined by cycle type
        if k == 0 && !seen_types.insert(c.cycle_type()) {
            continue;
        }
        chosen.push(c.clone());
        if extend(f, n, &gens[..=k], chosen).is_some() && search(f, n, gens, by_order, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn full_map(f: &FiniteGroup, n: usize, gens: &[usize], images: &[SignedPerm]) -> Option<Vec<SignedPerm>> {
    extend(f, n, gens, images)?.into_iter().collect()
}

/// Propagates the generator images over the Cayley graph of the subgroup they
/// generate. `None` if two paths disagree or two elements collide.
fn extend(f: &FiniteGroup, n: usize, gens: &[usize], images: &[SignedPerm]) -> Option<Vec<Option<SignedPerm>>> {
    let mut phi: Vec<Option<SignedPerm>> = vec![None; f.order()];
    phi[0] = Some(SignedPerm::identity(n));
    let mut used: BTreeMap<SignedPerm, usize> = BTreeMap::from([(SignedPerm::identity(n), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        let pa = phi[a].clone().expect("queued elements are mapped");
        for (&g, img) in gens.iter().zip(images) {
            let b = f.mul(a, g);
            let pb = pa.compose(img);
            match &phi[b] {
                Some(existing) if *existing != pb => return None,
                Some(_) => {}
                None => {
                    if used.insert(pb.clone(), b).is_some() {
                        return None;
                    }
                    phi[b] = Some(pb);
                    queue.push_back(b);
                }
            }
        }
    }
    Some(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let d4 = FiniteGroup::dihedral(4);
        let r = embeds(&d4, 2).unwrap();
        match &r {
            EmbeddingResult::Embeds { images, .. } => assert!(d4.is_embedding(images)),
            _ => panic!("D4 embeds in B2"),
        }
        assert_eq!(
            embeds(&FiniteGroup::cyclic(3), 2).unwrap(),
            EmbeddingResult::Obstructed(Obstruction::ElementOrderAbsent { order: 3 })
        );
        assert_eq!(
            embeds(&FiniteGroup::cyclic(6), 2).unwrap(),
            EmbeddingResult::Obstructed(Obstruction::ElementOrderAbsent { order: 3 })
        );
        let a4 = FiniteGroup::alternating4();
        match embeds(&a4, 3).unwrap() {
            EmbeddingResult::Embeds { images, .. } => assert!(a4.is_embedding(&images)),
            _ => panic!("A4 embeds in B3"),
        }
    }

    #[test]
    fn exhausted_and_divisibility() {
        // Q8 has orders {1,2,4}, present in B2, and 8 | 8, but B2 ≅ D4.
        assert_eq!(embeds(&FiniteGroup::quaternion(), 2).unwrap(), EmbeddingResult::Obstructed(Obstruction::ExhaustedSearch));
        // the Klein four-group has order 4 but B1 has order 2
        assert!(matches!(
            embeds(&FiniteGroup::dihedral(2), 1).unwrap(),
            EmbeddingResult::Obstructed(Obstruction::OrderDivisibility { .. })
        ));
    }

    #[test]
    fn trivial_group() {
        let r = embeds(&FiniteGroup::cyclic(1), 2).unwrap();
        assert!(r.embeds());
    }
}

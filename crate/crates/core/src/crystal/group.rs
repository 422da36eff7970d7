//! Finite groups given by a Cayley table.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use super::signed::{hyperoctahedral_generators, SignedPerm};
use super::CrystalError;

/// Elements are `0..order`; element 0 is the identity. `table[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
    /// Non-identity generators.
    pub generators: Vec<usize>,
}

impl FiniteGroup {
    /// Closure of `gens` under `mul`. Returns the group and the element
    /// behind each index.
    pub fn generated_by<T, F>(
        name: impl Into<String>,
        identity: T,
        gens: &[T],
        mul: F,
        cap: usize,
    ) -> Result<(FiniteGroup, Vec<T>), CrystalError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for g in gens {
                let p = mul(&elems[a], g);
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(CrystalError::ClosureCapExceeded(cap));
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p = mul(&elems[a], &elems[b]);
                table[a][b] = *index.get(&p).ok_or(CrystalError::NotClosed)?;
            }
        }
        let mut generators: Vec<usize> = Vec::new();
        for g in gens {
            let i = index[g];
            if i != 0 && !generators.contains(&i) {
                generators.push(i);
            }
        }
        Ok((Self::from_table(name, table, generators), elems))
    }

    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>, generators: Vec<usize>) -> FiniteGroup {
        let n = table.len();
        let inverses = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).expect("group has inverses")).collect();
        let orders = (0..n)
            .map(|a| {
                let (mut p, mut k) = (a, 1);
                while p != 0 {
                    p = table[p][a];
                    k += 1;
                }
                k
            })
            .collect();
        FiniteGroup { name: name.into(), table, inverses, orders, generators }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn order_spectrum(&self) -> BTreeSet<usize> {
        self.orders.iter().copied().collect()
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("C{n}"), table, if n > 1 { vec![1] } else { vec![] })
    }

    /// Symmetries of the n-gon, order 2n; `D1` is cyclic of order 2.
    pub fn dihedral(n: usize) -> FiniteGroup {
        // r^k s^e is stored as k + n·e
        let idx = |k: usize, e: usize| k % n + n * e;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for e1 in 0..2 {
            for k1 in 0..n {
                for e2 in 0..2 {
                    for k2 in 0..n {
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        table[idx(k1, e1)][idx(k2, e2)] = idx(k, e1 ^ e2);
                    }
                }
            }
        }
        let mut gens = Vec::new();
        if n > 1 {
            gens.push(idx(1, 0));
        }
        gens.push(idx(0, 1));
        Self::from_table(format!("D{n}"), table, gens)
    }

    pub fn quaternion() -> FiniteGroup {
        // ±1, ±i, ±j, ±k as (sign, unit) with unit 0..4 = 1, i, j, k
        fn unit_mul(a: usize, b: usize) -> (bool, usize) {
            const T: [[(bool, usize); 4]; 4] = [
                [(false, 0), (false, 1), (false, 2), (false, 3)],
                [(false, 1), (true, 0), (false, 3), (true, 2)],
                [(false, 2), (true, 3), (true, 0), (false, 1)],
                [(false, 3), (false, 2), (true, 1), (true, 0)],
            ];
            T[a][b]
        }
        let mul = |x: &(bool, usize), y: &(bool, usize)| {
            let (neg, u) = unit_mul(x.1, y.1);
            (x.0 ^ y.0 ^ neg, u)
        };
        Self::generated_by("Q8", (false, 0), &[(false, 1), (false, 2)], mul, 16).expect("Q8 closes").0
    }

    pub fn alternating4() -> FiniteGroup {
        let mul = |a: &[u8; 4], b: &[u8; 4]| {
            let mut c = [0u8; 4];
            for i in 0..4 {
                c[i] = a[b[i] as usize];
            }
            c
        };
        Self::generated_by("A4", [0, 1, 2, 3], &[[1, 2, 0, 3], [1, 0, 3, 2]], mul, 24).expect("A4 closes").0
    }

    pub fn hyperoctahedral(n: usize) -> FiniteGroup {
        let gens = hyperoctahedral_generators(n);
        Self::generated_by(format!("B{n}"), SignedPerm::identity(n), &gens, |a, b| a.compose(b), 1 << 20)
            .expect("Bn closes")
            .0
    }

    /// Checks that `images` (indexed by element) is an injective
    /// homomorphism into signed permutations.
    pub fn is_embedding(&self, images: &[SignedPerm]) -> bool {
        let n = self.order();
        if images.len() != n {
            return false;
        }
        let distinct: std::collections::HashSet<&SignedPerm> = images.iter().collect();
        if distinct.len() != n {
            return false;
        }
        (0..n).all(|a| (0..n).all(|b| images[self.mul(a, b)] == images[a].compose(&images[b])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_group(g: &FiniteGroup) -> bool {
        let n = g.order();
        (0..n).all(|a| g.mul(0, a) == a && g.mul(a, 0) == a && g.mul(a, g.inverse(a)) == 0)
            && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)))))
    }

    #[test]
    fn standard_groups() {
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(1),
            FiniteGroup::dihedral(4),
            FiniteGroup::quaternion(),
            FiniteGroup::alternating4(),
        ] {
            assert!(is_group(&g), "{}", g.name);
        }
        assert_eq!(FiniteGroup::dihedral(1).order(), 2);
        assert_eq!(FiniteGroup::dihedral(1).generators.len(), 1);
        assert_eq!(FiniteGroup::quaternion().order_spectrum(), BTreeSet::from([1, 2, 4]));
        assert_eq!(FiniteGroup::alternating4().order_spectrum(), BTreeSet::from([1, 2, 3]));
        assert_eq!(FiniteGroup::dihedral(6).order_spectrum(), BTreeSet::from([1, 2, 3, 6]));
        assert_eq!(FiniteGroup::hyperoctahedral(3).order(), 48);
    }

    #[test]
    fn closure_cap() {
        let r = FiniteGroup::generated_by("Z", 0i64, &[1], |a, b| a + b, 100);
        assert_eq!(r.unwrap_err(), CrystalError::ClosureCapExceeded(100));
    }
}

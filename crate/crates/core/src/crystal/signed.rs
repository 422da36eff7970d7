//! Signed permutations: the hyperoctahedral group Bₙ = ℤ₂ⁿ ⋊ Sym(n).

use std::fmt;

use super::CrystalError;

/// Largest n for which Bₙ may be enumerated.
pub const ENUMERATION_BUDGET: usize = 8;

/// The signed permutation sending `e_i` to `signs[i]·e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    pub perm: Vec<u8>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { perm: (0..n as u8).collect(), signs: vec![1; n] }
    }

    pub fn new(perm: Vec<u8>, signs: Vec<i8>) -> Self {
        debug_assert_eq!(perm.len(), signs.len());
        SignedPerm { perm, signs }
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i) && self.signs.iter().all(|&s| s == 1)
    }

    /// `self · other`, i.e. apply `other` first (matrix product order).
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.degree();
        let mut perm = vec![0u8; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            let t = other.perm[i] as usize;
            perm[i] = self.perm[t];
            signs[i] = other.signs[i] * self.signs[t];
        }
        SignedPerm { perm, signs }
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.degree();
        let mut perm = vec![0u8; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            let t = self.perm[i] as usize;
            perm[t] = i as u8;
            signs[t] = self.signs[i];
        }
        SignedPerm { perm, signs }
    }

    pub fn order(&self) -> usize {
        // lcm over cycles of (length, doubled when the sign product is -1)
        self.cycle_type().iter().fold(1, |acc, &(len, neg)| lcm(acc, if neg { 2 * len } else { len }))
    }

    /// Sorted (cycle length, sign product is negative) pairs; a complete
    /// conjugacy invariant in Bₙ.
    pub fn cycle_type(&self) -> Vec<(usize, bool)> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let (mut len, mut sign, mut x) = (0, 1i8, start);
            while !seen[x] {
                seen[x] = true;
                sign *= self.signs[x];
                x = self.perm[x] as usize;
                len += 1;
            }
            out.push((len, sign < 0));
        }
        out.sort_unstable();
        out
    }

    /// Column `i` of the matrix is `signs[i]·e_{perm[i]}`.
    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.degree();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[self.perm[i] as usize][i] = self.signs[i] as i64;
        }
        m
    }

    /// Extends to degree `n + extra` fixing the new coordinates.
    pub fn pad(&self, extra: usize) -> SignedPerm {
        let n = self.degree();
        let mut p = self.clone();
        p.perm.extend((n..n + extra).map(|i| i as u8));
        p.signs.extend(std::iter::repeat_n(1, extra));
        p
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| format!("{}{}", if s < 0 { "-" } else { "+" }, p + 1))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn hyperoctahedral_order(n: usize) -> u128 {
    (1..=n as u128).product::<u128>() << n
}

/// Every element of Bₙ once: permutations in lexicographic order, each with
/// all sign vectors.
pub fn hyperoctahedral_elements(n: usize) -> Result<Vec<SignedPerm>, CrystalError> {
    if n == 0 || n > ENUMERATION_BUDGET {
        return Err(CrystalError::BudgetExceeded { n, budget: ENUMERATION_BUDGET });
    }
    let mut out = Vec::with_capacity(hyperoctahedral_order(n) as usize);
    let mut perm: Vec<u8> = (0..n as u8).collect();
    loop {
        for mask in 0..(1u32 << n) {
            let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push(SignedPerm { perm: perm.clone(), signs });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Standard generators of Bₙ: a transposition, an n-cycle and a sign flip.
pub fn hyperoctahedral_generators(n: usize) -> Vec<SignedPerm> {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<u8> = (0..n as u8).collect();
        t.swap(0, 1);
        gens.push(SignedPerm::new(t, vec![1; n]));
    }
    if n >= 3 {
        gens.push(SignedPerm::new((0..n).map(|i| ((i + 1) % n) as u8).collect(), vec![1; n]));
    }
    let mut signs = vec![1; n];
    signs[0] = -1;
    gens.push(SignedPerm::new((0..n as u8).collect(), signs));
    gens
}

//! Freely reduced words over a finite alphabet with formal inverses.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen: u16::try_from(gen).expect("generator index fits in u16"), inv }
    }

    pub fn index(self) -> usize {
        self.gen as usize
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    /// All letters over `k` generators, in the order `g0, g0^-1, g1, ...`.
    pub fn alphabet(k: usize) -> Vec<Letter> {
        (0..k).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word `{text}`: {reason}")]
pub struct WordParseError {
    pub text: String,
    pub reason: String,
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Right-multiplies by a letter, cancelling if possible.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn prepend(&self, l: Letter) -> Word {
        Word::letter(l).mul(self)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Linear in the length of the result: writes `self = u c u⁻¹` with `c`
    /// cyclically reduced, so `self^k = u c^k u⁻¹` needs no cancellation.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let n = base.len();
        let mut p = 0;
        while 2 * p + 1 < n && base.0[p] == base.0[n - 1 - p].inverse() {
            p += 1;
        }
        let (u, c) = (&base.0[..p], &base.0[p..n - p]);
        let reps = k.unsigned_abs() as usize;
        let mut out = Vec::with_capacity(2 * p + reps * c.len());
        if reps > 0 {
            out.extend_from_slice(u);
            for _ in 0..reps {
                out.extend_from_slice(c);
            }
            out.extend(u.iter().rev().map(|l| l.inverse()));
        }
        Word(out)
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Length first, then letters lexicographically.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Every freely reduced word of length exactly `n`, in shortlex order.
    pub fn all_of_length(k: usize, n: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &out {
                for l in Letter::alphabet(k) {
                    if w.last() != Some(l.inverse()) {
                        let mut v = w.clone();
                        v.0.push(l);
                        next.push(v);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Renders with generator names. Single-letter lowercase names invert to
    /// uppercase, others as `name^-1`. The identity renders as `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".into();
        }
        let short = single_letter_names(names);
        let mut parts = Vec::new();
        for l in &self.0 {
            let name = &names[l.index()];
            parts.push(match (l.inv, short) {
                (false, _) => name.clone(),
                (true, true) => name.to_uppercase(),
                (true, false) => format!("{name}^-1"),
            });
        }
        if short {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Accepts `1`, whitespace- or `*`-separated tokens `name` / `name^-1`,
    /// and, when every name is one lowercase letter, runs like `abAB`.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, WordParseError> {
        let err = |reason: String| WordParseError { text: text.to_string(), reason };
        let t = text.trim();
        if t.is_empty() || t == "1" || t == "e" && !names.iter().any(|n| n == "e") {
            return Ok(Word::identity());
        }
        let lookup = |name: &str| names.iter().position(|n| n == name);
        let mut w = Word::identity();
        for tok in t.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()) {
            let (base, inv) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            if let Some(g) = lookup(base) {
                w.push(Letter::new(g, inv));
            } else if single_letter_names(names) && !inv {
                for c in tok.chars() {
                    let lower = c.to_lowercase().to_string();
                    let g = lookup(&lower).ok_or_else(|| err(format!("unknown generator `{c}`")))?;
                    w.push(Letter::new(g, c.is_uppercase()));
                }
            } else {
                return Err(err(format!("unknown generator `{base}`")));
            }
        }
        Ok(w)
    }
}

fn single_letter_names(names: &[String]) -> bool {
    names.iter().all(|n| n.chars().count() == 1 && n.chars().all(|c| c.is_lowercase()))
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.0.iter().map(|l| l.index() + 1).max().unwrap_or(0)).map(|g| format!("g{g}")).collect();
        f.write_str(&self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn free_reduction() {
        let a = Letter::new(0, false);
        let w = Word::from_letters([a, Letter::new(1, false), Letter::new(1, true), a.inverse()]);
        assert!(w.is_empty());
        let x = Word::parse("abA", &ab()).unwrap();
        assert_eq!(x.mul(&x.inverse()), Word::identity());
        assert_eq!(x.pow(3).len(), 5);
        let y = Word::parse("abAAB", &ab()).unwrap();
        for k in -4..5i64 {
            let mut naive = Word::identity();
            for _ in 0..k.unsigned_abs() {
                naive = naive.mul(&if k < 0 { y.inverse() } else { y.clone() });
            }
            assert_eq!(y.pow(k), naive, "k = {k}");
        }
    }

    #[test]
    fn parse_and_render() {
        let names = ab();
        for s in ["1", "a", "aB", "abAB", "bbb"] {
            assert_eq!(Word::parse(s, &names).unwrap().render(&names), s);
        }
        assert_eq!(Word::parse("a b^-1", &names).unwrap().render(&names), "aB");
        let long = vec!["e1".to_string(), "e2".to_string()];
        let w = Word::parse("e1 e2^-1", &long).unwrap();
        assert_eq!(w.render(&long), "e1 e2^-1");
        assert!(Word::parse("c", &names).is_err());
    }

    #[test]
    fn reduced_word_counts() {
        // 2k(2k-1)^(n-1) reduced words of length n over k generators.
        for n in 1..5 {
            assert_eq!(Word::all_of_length(2, n).len(), 4 * 3usize.pow(n as u32 - 1));
        }
        let ws = Word::all_of_length(2, 3);
        assert!(ws.windows(2).all(|p| p[0].shortlex_cmp(&p[1]) == Ordering::Less));
    }
}

//! Enumeration of irreducible words over the unit generator.

use alloc::vec;
use alloc::vec::Vec;

use crate::confmod::{ModTerm, Root};
use crate::freelie::LieSpec;
use crate::opalg::OpLetter;
use crate::rules::RuleSet;

/// Largest index `n` tried for `L_n`, `R_n^a`, `R_n` during enumeration.
pub const ENUM_MAX_N: u32 = 3;

/// Every `∂`-free irreducible word over `1` whose superscript degree is
/// exactly `degree`.
///
/// Words are grown right to left; since a suffix of an irreducible word is
/// irreducible, only the new leftmost position needs checking.
pub fn irreducible_words(rules: &RuleSet, degree: usize) -> Vec<ModTerm> {
    let spec = rules.spec();
    let basis = spec.basis_upto(degree.max(1));
    let mut letters = Vec::new();
    for n in 0..=ENUM_MAX_N {
        for b in &basis {
            letters.push(OpLetter::L(n, b.clone()));
            letters.push(OpLetter::R(n, b.clone()));
        }
        letters.push(OpLetter::Ry(n));
    }
    let mut out = Vec::new();
    let start = ModTerm::one();
    if rules.rewrite_at(&start, 0).is_some() {
        return out;
    }
    let mut stack = vec![(start, 0usize)];
    while let Some((t, d)) = stack.pop() {
        if d == degree {
            out.push(t.clone());
        }
        for x in &letters {
            let nd = d + x.g_degree();
            // Degree-free letters never head an irreducible word over 1 in
            // the base system, but bound the length anyway.
            if nd > degree || (x.g_degree() == 0 && t.word.len() > 2 * degree + 2) {
                continue;
            }
            let mut w = Vec::with_capacity(t.word.len() + 1);
            w.push(x.clone());
            w.extend_from_slice(&t.word);
            let nt = ModTerm::new(w, Root::One);
            if rules.rewrite_at(&nt, 0).is_none() {
                stack.push((nt, nd));
            }
        }
    }
    out.sort();
    out
}

/// Dimension of the degree-`d` part of the symmetric algebra on the Lie
/// algebra: the `t^d` coefficient of `∏_e (1 - t^e)^{-dim g_e}`.
pub fn symmetric_dimension(spec: &LieSpec, d: usize) -> u64 {
    let mut c = vec![0u64; d + 1];
    c[0] = 1;
    for e in 1..=d {
        for _ in 0..spec.dimension(e) {
            for i in e..=d {
                c[i] += c[i - e];
            }
        }
    }
    c[d]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwReport {
    pub degree: usize,
    pub words: Vec<ModTerm>,
    pub expected: u64,
    /// Words that are not `L_1^{b_1}⋯L_1^{b_k}1` with sorted `b_i`.
    pub off_shape: Vec<ModTerm>,
}

impl PbwReport {
    pub fn ok(&self) -> bool {
        self.off_shape.is_empty() && self.words.len() as u64 == self.expected
    }
}

pub fn verify_pbw(rules: &RuleSet, degree: usize) -> PbwReport {
    let words = irreducible_words(rules, degree);
    let off_shape = words
        .iter()
        .filter(|t| !matches!(t.pbw_shape(), Some((_, 0))))
        .cloned()
        .collect();
    PbwReport { degree, expected: symmetric_dimension(rules.spec(), degree), words, off_shape }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confmod::base_ruleset;

    #[test]
    fn small_degrees_free() {
        let spec = LieSpec::free_on(&["x", "y"]).unwrap();
        let rules = base_ruleset(&spec);
        for d in 0..=3 {
            let r = verify_pbw(&rules, d);
            assert!(r.ok(), "degree {}: {:?}", d, r);
        }
    }
}

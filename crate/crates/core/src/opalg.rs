//! The operator algebra generated by `∂`, `L_n^a`, `R_n^a` and `R_n`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::freelie::{LieSpec, LsWord};
use crate::linear::{write_coeff, Lin, Q};
use crate::rules::{Rewrite, RuleSet};
use crate::ReduceError;

/// A generator of the operator algebra.
///
/// The derived order (`∂ < L < R < Ry`, then by `n`, then by superscript)
/// is the one used for `(n,a) >_lex (m,b)` among `L` letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OpLetter {
    D,
    L(u32, LsWord),
    R(u32, LsWord),
    /// `R_n` acting toward the unit generator.
    Ry(u32),
}

impl OpLetter {
    /// Degree of the superscript in the grading by generator count.
    pub fn g_degree(&self) -> usize {
        match self {
            OpLetter::L(_, a) | OpLetter::R(_, a) => a.degree(),
            _ => 0,
        }
    }
}

pub type OpWord = Vec<OpLetter>;
pub type OpPoly = Lin<OpWord>;

pub(crate) fn superscript(spec: &LieSpec, a: &LsWord, out: &mut String) {
    let name = spec.word_name(a);
    if a.degree() > 1 {
        let _ = write!(out, "{{({})}}", name);
    } else if name.chars().count() == 1 {
        out.push_str(&name);
    } else {
        let _ = write!(out, "{{{}}}", name);
    }
}

/// Appends a word in the `L_1^xL_0^{(xy)}∂^2` notation.
pub fn render_word(spec: &LieSpec, w: &[OpLetter], out: &mut String) {
    let mut i = 0;
    while i < w.len() {
        match &w[i] {
            OpLetter::D => {
                let mut k = 1;
                while i + k < w.len() && w[i + k] == OpLetter::D {
                    k += 1;
                }
                out.push('∂');
                if k > 1 {
                    let _ = write!(out, "^{}", k);
                }
                i += k;
                continue;
            }
            OpLetter::L(n, a) => {
                let _ = write!(out, "L_{}^", n);
                superscript(spec, a, out);
            }
            OpLetter::R(n, a) => {
                let _ = write!(out, "R_{}^", n);
                superscript(spec, a, out);
            }
            OpLetter::Ry(n) => {
                let _ = write!(out, "R_{}", n);
            }
        }
        i += 1;
    }
}

pub fn render_poly(spec: &LieSpec, p: &OpPoly) -> String {
    let mut out = String::new();
    if p.is_zero() {
        out.push('0');
        return out;
    }
    for (i, (w, c)) in p.iter().enumerate() {
        let _ = write_coeff(&mut out, c, i == 0, w.is_empty());
        render_word(spec, w, &mut out);
    }
    out
}

/// The eight commutation schemas of the operator algebra.
pub fn alg_rules(spec: &LieSpec) -> RuleSet {
    RuleSet::algebra_only(spec.clone())
}

/// Leftmost-innermost reduction of every monomial.
pub fn alg_reduce(p: &OpPoly, rules: &RuleSet, fuel: u64) -> Result<OpPoly, ReduceError<OpPoly>> {
    let mut left = fuel;
    let mut out = OpPoly::zero();
    let mut work: BTreeMap<OpWord, Q> = p.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = work.pop_first() {
        let hit = (0..w.len()).find_map(|pos| rules.rewrite_alg_at(&w, pos).map(|r| (pos, r)));
        match hit {
            None => out.add_term(c, w),
            Some((pos, Rewrite::Alg { len, rhs })) => {
                if left == 0 {
                    let mut rest = out;
                    rest.add_term(c, w);
                    for (k, v) in work {
                        rest.add_term(v, k);
                    }
                    return Err(ReduceError::FuelExhausted(rest));
                }
                left -= 1;
                for (mid, d) in rhs.iter() {
                    let mut nw: OpWord = Vec::with_capacity(w.len() - len + mid.len());
                    nw.extend_from_slice(&w[..pos]);
                    nw.extend_from_slice(mid);
                    nw.extend_from_slice(&w[pos + len..]);
                    let e = work.entry(nw).or_default();
                    *e += &c * d;
                }
                work.retain(|_, v| !num_traits::Zero::is_zero(v));
            }
            Some((_, Rewrite::Mod(_))) => unreachable!("algebra matching never yields module rewrites"),
        }
    }
    Ok(out)
}

pub fn op_mul(p: &OpPoly, q: &OpPoly, rules: &RuleSet, fuel: u64) -> Result<OpPoly, ReduceError<OpPoly>> {
    let mut prod = OpPoly::zero();
    for (u, cu) in p.iter() {
        for (v, cv) in q.iter() {
            let mut w = u.clone();
            w.extend_from_slice(v);
            prod.add_term(cu * cv, w);
        }
    }
    alg_reduce(&prod, rules, fuel)
}

//! Semantic model of module words, independent of the rewriting rules.
//!
//! `1`-rooted words (and `X`-rooted words containing some `R_n`) are
//! evaluated to elements of `H ⊗ P(g)`, stored as polynomials in `∂` with
//! Poisson coefficients. `X`-rooted words without `R_n` are conformal
//! operators and are compared by their action `ψ_μ w` on test vectors.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cgsb_core::confmod::{ModElement, ModTerm, Root};
use cgsb_core::freelie::{LieSpec, LsWord};
use cgsb_core::linear::{q, Q};
use cgsb_core::opalg::OpLetter;
use cgsb_core::poisson::{p_bracket, p_mul, PoissonElement, PoissonMonomial};
use num_traits::Zero;
use rand::Rng;

/// Polynomial in (∂, μ, λ) with Poisson coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<(u32, u32, u32), PoissonElement>);

const MU: usize = 1;
const LAM: usize = 2;

fn get(e: (u32, u32, u32), i: usize) -> u32 {
    [e.0, e.1, e.2][i]
}

fn set(e: (u32, u32, u32), i: usize, v: u32) -> (u32, u32, u32) {
    let mut a = [e.0, e.1, e.2];
    a[i] = v;
    (a[0], a[1], a[2])
}

fn binom(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

fn fact(n: u32) -> i64 {
    (1..=n as i64).product()
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(u: PoissonElement) -> Self {
        let mut p = Self::zero();
        p.add((0, 0, 0), &u, &q(1));
        p
    }

    pub fn add(&mut self, e: (u32, u32, u32), u: &PoissonElement, c: &Q) {
        let slot = self.0.entry(e).or_default();
        slot.add_scaled(c, u);
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add_poly(&mut self, other: &Poly, c: &Q) {
        for (e, u) in &other.0 {
            self.add(*e, u, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Replaces variable `v` by `sign_v·v + sign_w·w` (`w` another variable).
    fn substitute(&self, v: usize, w: usize, sign_v: i64, sign_w: i64) -> Poly {
        let mut out = Poly::zero();
        for (e, u) in &self.0 {
            let j = get(*e, v);
            for i in 0..=j {
                // (sv·v + sw·w)^j = Σ C(j,i) sv^{j-i} sw^i v^{j-i} w^i
                let c = binom(j, i) * sign_v.pow(j - i) * sign_w.pow(i);
                let mut ne = set(*e, v, j - i);
                ne = set(ne, w, get(ne, w) + i);
                out.add(ne, u, &q(c));
            }
        }
        out
    }

    /// `n!` times the coefficient of `λ^n`.
    fn extract_lambda(&self, n: u32) -> Poly {
        let mut out = Poly::zero();
        for (e, u) in &self.0 {
            if e.2 == n {
                out.add((e.0, e.1, 0), u, &q(fact(n)));
            }
        }
        out
    }

    fn mul_var(&self, v: usize, c: i64) -> Poly {
        let mut out = Poly::zero();
        for (e, u) in &self.0 {
            out.add(set(*e, v, get(*e, v) + 1), u, &q(c));
        }
        out
    }
}

fn gen_elem(a: &LsWord) -> PoissonElement {
    PoissonElement::basis(PoissonMonomial::new(vec![a.clone()]))
}

/// `ρ(a)_t` applied coefficientwise: `∂^k u ↦ (∂+t)^k ({a,u} + t·a·u)`.
fn rho(spec: &LieSpec, a: &LsWord, t: usize, w: &Poly) -> Poly {
    let ga = gen_elem(a);
    let mut out = Poly::zero();
    for (e, u) in &w.0 {
        let br = p_bracket(spec, &ga, u);
        let pr = p_mul(&ga, u);
        let k = e.0;
        for i in 0..=k {
            let c = q(binom(k, i));
            let base = set(*e, 0, k - i);
            let base = set(base, t, get(base, t) + i);
            out.add(base, &br, &c);
            out.add(set(base, t, get(base, t) + 1), &pr, &c);
        }
    }
    out
}

/// `ψ_μ w` for the operator `word·b`; `w` must only involve `∂`.
pub fn eval_op(spec: &LieSpec, word: &[OpLetter], b: &LsWord, w: &Poly) -> Poly {
    match word.split_first() {
        None => rho(spec, b, MU, w),
        Some((OpLetter::D, rest)) => eval_op(spec, rest, b, w).mul_var(MU, -1),
        Some((OpLetter::L(n, a), rest)) => {
            let v = eval_op(spec, rest, b, w).substitute(MU, LAM, 1, -1);
            rho(spec, a, LAM, &v).extract_lambda(*n)
        }
        Some((OpLetter::R(n, a), rest)) => {
            let v = rho(spec, a, LAM, w);
            let mut out = Poly::zero();
            for (e, u) in &v.0 {
                let mut arg = Poly::zero();
                arg.add((e.0, 0, 0), u, &q(1));
                let mut r = eval_op(spec, rest, b, &arg).substitute(MU, LAM, 1, -1);
                for _ in 0..e.2 {
                    r = r.mul_var(LAM, 1);
                }
                out.add_poly(&r, &q(1));
            }
            out.extract_lambda(*n)
        }
        Some((OpLetter::Ry(_), _)) => panic!("R_n inside an operator word"),
    }
}

/// Action of a letter on an element of `H ⊗ P`.
fn act_m(spec: &LieSpec, x: &OpLetter, v: &Poly) -> Poly {
    match x {
        OpLetter::D => v.mul_var(0, 1),
        OpLetter::L(n, a) => rho(spec, a, LAM, v).extract_lambda(*n),
        OpLetter::R(..) | OpLetter::Ry(_) => Poly::zero(),
    }
}

/// Value in `H ⊗ P`, or `None` for an operator-valued term.
pub fn eval_m(spec: &LieSpec, t: &ModTerm) -> Option<Poly> {
    let (mut v, upto) = match &t.root {
        Root::One => (Poly::constant(PoissonElement::basis(PoissonMonomial::unit())), t.word.len()),
        Root::X(b) => {
            let r = t.word.iter().rposition(|l| matches!(l, OpLetter::Ry(_)))?;
            let n = match t.word[r] {
                OpLetter::Ry(n) => n,
                _ => unreachable!(),
            };
            let one = Poly::constant(PoissonElement::basis(PoissonMonomial::unit()));
            // ψ_ν 1 with ν ↦ -λ-∂
            let psi = eval_op(spec, &t.word[r + 1..], b, &one);
            let mut sub = Poly::zero();
            for (e, u) in &psi.0 {
                let j = e.1;
                for i in 0..=j {
                    let c = binom(j, i) * (-1i64).pow(j);
                    sub.add((e.0 + (j - i), 0, i), u, &q(c));
                }
            }
            (sub.extract_lambda(n), r)
        }
    };
    for x in t.word[..upto].iter().rev() {
        v = act_m(spec, x, &v);
    }
    Some(v)
}

pub fn eval_m_elem(spec: &LieSpec, e: &ModElement) -> Option<Poly> {
    let mut out = Poly::zero();
    for (t, c) in e.iter() {
        out.add_poly(&eval_m(spec, t)?, c);
    }
    Some(out)
}

pub fn eval_op_elem(spec: &LieSpec, e: &ModElement, w: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (t, c) in e.iter() {
        let b = match &t.root {
            Root::X(b) => b,
            Root::One => panic!("operator expected"),
        };
        out.add_poly(&eval_op(spec, &t.word, b, w), c);
    }
    out
}

pub fn is_operator(t: &ModTerm) -> bool {
    matches!(t.root, Root::X(_)) && !t.word.iter().any(|l| matches!(l, OpLetter::Ry(_)))
}

/// Test vectors `∂^k ⊗ m` for a few monomials over the generators.
pub fn test_vectors(spec: &LieSpec) -> Vec<Poly> {
    let gens = spec.generators();
    let basis = spec.basis_upto(2);
    let mut out = Vec::new();
    let unit = PoissonElement::basis(PoissonMonomial::unit());
    for k in 0..=3u32 {
        let mut p = Poly::zero();
        p.add((k, 0, 0), &unit, &q(1));
        out.push(p);
    }
    for (i, a) in basis.iter().enumerate() {
        let mut p = Poly::zero();
        p.add(((i % 3) as u32, 0, 0), &gen_elem(a), &q(1));
        out.push(p);
    }
    for a in &gens {
        for b in &gens {
            let mut p = Poly::zero();
            p.add((1, 0, 0), &p_mul(&gen_elem(a), &gen_elem(b)), &q(1));
            p.add((0, 0, 0), &gen_elem(b), &q(2));
            out.push(p);
        }
    }
    out
}

/// Semantic equality of two module elements of the same kind.
pub fn same_value(spec: &LieSpec, a: &ModElement, b: &ModElement) -> bool {
    let op = a.iter().chain(b.iter()).any(|(t, _)| is_operator(t));
    if op {
        test_vectors(spec).iter().all(|w| eval_op_elem(spec, a, w) == eval_op_elem(spec, b, w))
    } else {
        eval_m_elem(spec, a) == eval_m_elem(spec, b)
    }
}

/// Letter pool for random words.
pub fn letter_pool(spec: &LieSpec, max_degree: usize, max_n: u32, with_r: bool) -> Vec<OpLetter> {
    let basis = spec.basis_upto(max_degree);
    let mut out = vec![OpLetter::D];
    for n in 0..=max_n {
        for b in &basis {
            out.push(OpLetter::L(n, b.clone()));
            if with_r {
                out.push(OpLetter::R(n, b.clone()));
            }
        }
        if with_r {
            out.push(OpLetter::Ry(n));
        }
    }
    out
}

pub fn random_term<R: Rng>(rng: &mut R, spec: &LieSpec, pool: &[OpLetter], max_len: usize) -> ModTerm {
    let len = rng.gen_range(0..=max_len);
    let word = (0..len).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
    let basis = spec.basis_upto(2);
    let root = if rng.gen_bool(0.5) { Root::One } else { Root::X(basis[rng.gen_range(0..basis.len())].clone()) };
    ModTerm::new(word, root)
}

pub fn is_zero_q(c: &Q) -> bool {
    c.is_zero()
}

/// Random monomial of degree between 1 and `max_degree`.
pub fn random_monomial<R: Rng>(rng: &mut R, spec: &LieSpec, max_degree: usize) -> PoissonMonomial {
    let target = rng.gen_range(1..=max_degree);
    let basis = spec.basis_upto(max_degree);
    let mut left = target;
    let mut factors = Vec::new();
    while left > 0 {
        let fits: Vec<&LsWord> = basis.iter().filter(|w| w.degree() <= left).collect();
        let w = fits[rng.gen_range(0..fits.len())].clone();
        left -= w.degree();
        factors.push(w);
    }
    PoissonMonomial::new(factors)
}

/// Random element with up to `max_terms` terms and coefficients in [-5, 5].
pub fn random_poisson<R: Rng>(rng: &mut R, spec: &LieSpec, max_degree: usize, max_terms: usize) -> PoissonElement {
    let mut p = PoissonElement::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        p.add_term(q(rng.gen_range(-5..=5)), random_monomial(rng, spec, max_degree));
    }
    p
}

/// Random expression tree of bounded depth over the generators.
pub fn random_expr<R: Rng>(rng: &mut R, spec: &LieSpec, depth: u32) -> cgsb_core::poisson::PoissonExpr {
    use cgsb_core::poisson::PoissonExpr as E;
    let gens = spec.generators();
    if depth == 0 || rng.gen_bool(0.3) {
        return E::Gen(gens[rng.gen_range(0..gens.len())].clone());
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, spec, depth - 1));
    match rng.gen_range(0..5) {
        0 => E::Sum((0..rng.gen_range(1..=3)).map(|_| random_expr(rng, spec, depth - 1)).collect()),
        1 => E::Prod((0..rng.gen_range(1..=2)).map(|_| random_expr(rng, spec, depth - 1)).collect()),
        2 => E::Bracket(sub(rng), sub(rng)),
        3 => E::Scale(q(rng.gen_range(-5..=5)), sub(rng)),
        _ => E::Pow(sub(rng), rng.gen_range(0..=2)),
    }
}

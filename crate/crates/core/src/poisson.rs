//! Free Poisson algebra arithmetic, the encoding into the conformal module,
//! and the two equality deciders.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_traits::One;
use thiserror::Error;

use crate::confmod::{mod_reduce, ModElement, ModTerm, Reducer, Root};
use crate::freelie::{LieElement, LieSpec, LsWord};
use crate::linear::{Lin, Q};
use crate::opalg::OpLetter;
use crate::rules::RuleSet;
use crate::ReduceError;

/// Commutative monomial in Lie basis elements; factors kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PoissonMonomial(Vec<LsWord>);

impl PoissonMonomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut factors: Vec<LsWord>) -> Self {
        factors.sort();
        Self(factors)
    }

    pub fn factors(&self) -> &[LsWord] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(LsWord::degree).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        Self::new(f)
    }

    fn without(&self, i: usize) -> Self {
        let mut f = self.0.clone();
        f.remove(i);
        Self(f)
    }
}

pub type PoissonElement = Lin<PoissonMonomial>;

pub fn p_one() -> PoissonElement {
    PoissonElement::basis(PoissonMonomial::unit())
}

/// A Lie element as a degree-one Poisson element.
pub fn p_lie(u: &LieElement) -> PoissonElement {
    u.map_keys(|w| PoissonMonomial(alloc::vec![w.clone()]))
}

pub fn p_mul(p: &PoissonElement, q: &PoissonElement) -> PoissonElement {
    let mut out = PoissonElement::zero();
    for (m, c) in p.iter() {
        for (n, d) in q.iter() {
            out.add_term(c * d, m.mul(n));
        }
    }
    out
}

/// Bracket by the Leibniz rule in both arguments, down to brackets of
/// Lie basis elements.
pub fn p_bracket(spec: &LieSpec, p: &PoissonElement, q: &PoissonElement) -> PoissonElement {
    let mut out = PoissonElement::zero();
    for (m, c) in p.iter() {
        for (n, d) in q.iter() {
            let cd = c * d;
            for (i, a) in m.factors().iter().enumerate() {
                let mi = m.without(i);
                for (j, b) in n.factors().iter().enumerate() {
                    let rest = mi.mul(&n.without(j));
                    for (z, e) in spec.bracket_basis(a, b).iter() {
                        out.add_term(&cd * e, rest.mul(&PoissonMonomial(alloc::vec![z.clone()])));
                    }
                }
            }
        }
    }
    out
}

/// Oracle equality: both sides are canonical, so compare the difference.
pub fn p_equal_oracle(p: &PoissonElement, q: &PoissonElement) -> bool {
    (p - q).is_zero()
}

fn encode_monomial(m: &PoissonMonomial) -> ModTerm {
    ModTerm::new(m.factors().iter().map(|b| OpLetter::L(1, b.clone())).collect(), Root::One)
}

/// `b_1⋯b_k ↦ L_1^{b_1}⋯L_1^{b_k}1`.
pub fn encode(p: &PoissonElement) -> ModElement {
    p.map_keys(encode_monomial)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("term is not of the form L_1^{{b_1}}…L_1^{{b_k}}1 with sorted b_i")]
    NotNormalForm(ModTerm),
    #[error("term carries ∂^{1} and has no Poisson preimage")]
    HasDerivative(ModTerm, usize),
}

pub fn decode(e: &ModElement) -> Result<PoissonElement, DecodeError> {
    let mut out = PoissonElement::zero();
    for (t, c) in e.iter() {
        match t.pbw_shape() {
            None => return Err(DecodeError::NotNormalForm(t.clone())),
            Some((_, s)) if s > 0 => return Err(DecodeError::HasDerivative(t.clone(), s)),
            Some((bs, _)) => out.add_term(c.clone(), PoissonMonomial(bs.into_iter().cloned().collect())),
        }
    }
    Ok(out)
}

/// Equality through the module: `p - q` encoded and reduced to zero.
pub fn p_equal_conformal(
    p: &PoissonElement,
    q: &PoissonElement,
    rules: &RuleSet,
    fuel: u64,
) -> Result<bool, ReduceError<ModElement>> {
    Ok(mod_reduce(&encode(&(p - q)), rules, fuel)?.is_zero())
}

/// Poisson expression tree over Lie basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoissonExpr {
    Gen(LsWord),
    Const(Q),
    Scale(Q, Box<PoissonExpr>),
    Sum(Vec<PoissonExpr>),
    Prod(Vec<PoissonExpr>),
    Bracket(Box<PoissonExpr>, Box<PoissonExpr>),
    Pow(Box<PoissonExpr>, u32),
}

/// Oracle evaluation with [`p_mul`] and [`p_bracket`].
pub fn eval_oracle(spec: &LieSpec, e: &PoissonExpr) -> PoissonElement {
    match e {
        PoissonExpr::Gen(w) => PoissonElement::basis(PoissonMonomial(alloc::vec![w.clone()])),
        PoissonExpr::Const(c) => p_one().scale(c),
        PoissonExpr::Scale(c, f) => eval_oracle(spec, f).scale(c),
        PoissonExpr::Sum(items) => {
            let mut out = PoissonElement::zero();
            for it in items {
                out += &eval_oracle(spec, it);
            }
            out
        }
        PoissonExpr::Prod(items) => items.iter().fold(p_one(), |acc, it| p_mul(&acc, &eval_oracle(spec, it))),
        PoissonExpr::Bracket(a, b) => p_bracket(spec, &eval_oracle(spec, a), &eval_oracle(spec, b)),
        PoissonExpr::Pow(f, n) => {
            let base = eval_oracle(spec, f);
            (0..*n).fold(p_one(), |acc, _| p_mul(&acc, &base))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Reduce(#[from] ReduceError<ModElement>),
    #[error("intermediate value is not a Poisson element")]
    Shape(#[from] DecodeError),
}

/// Evaluation through the conformal action: products apply `L_1` words,
/// brackets apply `L_0`; every intermediate value is a reduced module
/// element.
pub fn eval_conformal(red: &mut Reducer<'_>, e: &PoissonExpr) -> Result<ModElement, EvalError> {
    Ok(match e {
        PoissonExpr::Gen(w) => red.reduce(&ModElement::basis(ModTerm::new(
            alloc::vec![OpLetter::L(1, w.clone())],
            Root::One,
        )))?,
        PoissonExpr::Const(c) => red.reduce(&ModElement::term(c.clone(), ModTerm::one()))?,
        PoissonExpr::Scale(c, f) => eval_conformal(red, f)?.scale(c),
        PoissonExpr::Sum(items) => {
            let mut out = ModElement::zero();
            for it in items {
                out += &eval_conformal(red, it)?;
            }
            out
        }
        PoissonExpr::Prod(items) => {
            let mut acc = red.reduce(&ModElement::basis(ModTerm::one()))?;
            for it in items {
                let v = eval_conformal(red, it)?;
                acc = multiply(red, &v, &acc)?;
            }
            acc
        }
        PoissonExpr::Bracket(a, b) => {
            let u = eval_conformal(red, a)?;
            let v = eval_conformal(red, b)?;
            bracket(red, &u, &v)?
        }
        PoissonExpr::Pow(f, n) => {
            let base = eval_conformal(red, f)?;
            let mut acc = red.reduce(&ModElement::basis(ModTerm::one()))?;
            for _ in 0..*n {
                acc = multiply(red, &base, &acc)?;
            }
            acc
        }
    })
}

fn factors_of(t: &ModTerm) -> Result<Vec<LsWord>, DecodeError> {
    match t.pbw_shape() {
        None => Err(DecodeError::NotNormalForm(t.clone())),
        Some((_, s)) if s > 0 => Err(DecodeError::HasDerivative(t.clone(), s)),
        Some((bs, _)) => Ok(bs.into_iter().cloned().collect()),
    }
}

fn apply_l1_word(red: &mut Reducer<'_>, bs: &[LsWord], v: &ModElement) -> Result<ModElement, EvalError> {
    let mut acc = v.clone();
    for b in bs.iter().rev() {
        acc = red.act(&OpLetter::L(1, b.clone()), &acc)?;
    }
    Ok(acc)
}

/// `u·v` as `L_1^{b_1}⋯L_1^{b_k} v` summed over the terms of `u`.
pub fn multiply(red: &mut Reducer<'_>, u: &ModElement, v: &ModElement) -> Result<ModElement, EvalError> {
    let mut out = ModElement::zero();
    for (t, c) in u.iter() {
        let bs = factors_of(t)?;
        out.add_scaled(c, &apply_l1_word(red, &bs, v)?);
    }
    Ok(out)
}

/// `{b_1⋯b_k, v} = Σ_i (Π_{j≠i} b_j)·L_0^{b_i} v`.
pub fn bracket(red: &mut Reducer<'_>, u: &ModElement, v: &ModElement) -> Result<ModElement, EvalError> {
    let mut out = ModElement::zero();
    for (t, c) in u.iter() {
        let bs = factors_of(t)?;
        for i in 0..bs.len() {
            let inner = red.act(&OpLetter::L(0, bs[i].clone()), v)?;
            let mut rest = bs.clone();
            rest.remove(i);
            out.add_scaled(c, &apply_l1_word(red, &rest, &inner)?);
        }
    }
    Ok(out)
}

/// Conformal-route equality of two expressions under `rules`.
pub fn expr_equal_conformal(
    rules: &RuleSet,
    fuel: u64,
    a: &PoissonExpr,
    b: &PoissonExpr,
) -> Result<(bool, ModElement), EvalError> {
    let mut red = Reducer::new(rules, fuel);
    let d = &eval_conformal(&mut red, a)? - &eval_conformal(&mut red, b)?;
    let d = red.reduce(&d)?;
    Ok((d.is_zero(), d))
}

impl PoissonExpr {
    pub fn gen(w: LsWord) -> Self {
        PoissonExpr::Gen(w)
    }

    pub fn one() -> Self {
        PoissonExpr::Const(Q::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confmod::base_ruleset;
    use crate::linear::q;
    use alloc::vec;

    fn mono(spec: &LieSpec, names: &[&str]) -> PoissonElement {
        PoissonElement::basis(PoissonMonomial::new(names.iter().map(|n| spec.parse_word(n).unwrap()).collect()))
    }

    #[test]
    fn arithmetic_examples() {
        let spec = LieSpec::free_on(&["x", "y", "z"]).unwrap();
        let (x, y) = (mono(&spec, &["x"]), mono(&spec, &["y"]));
        assert_eq!(p_mul(&p_one(), &x), x);
        assert_eq!(p_mul(&x, &y), mono(&spec, &["y", "x"]));
        assert_eq!(p_mul(&mono(&spec, &["x", "y"]), &x), mono(&spec, &["x", "x", "y"]));
        assert_eq!(p_bracket(&spec, &x, &y), mono(&spec, &["xy"]));
        assert_eq!(p_bracket(&spec, &x, &mono(&spec, &["y", "y"])), mono(&spec, &["y", "xy"]).scale(&q(2)));
        assert_eq!(p_bracket(&spec, &mono(&spec, &["x", "y"]), &x), mono(&spec, &["x", "xy"]).scale(&q(-1)));
        let z = mono(&spec, &["z"]);
        let yz = p_bracket(&spec, &y, &z);
        let mut j = p_bracket(&spec, &x, &yz);
        j -= &p_bracket(&spec, &p_bracket(&spec, &x, &y), &z);
        j -= &p_bracket(&spec, &y, &p_bracket(&spec, &x, &z));
        assert!(j.is_zero());
        assert!(!p_equal_oracle(&p_mul(&x, &y), &(&p_mul(&y, &x) + &p_bracket(&spec, &x, &y))));
    }

    #[test]
    fn encode_decode() {
        let spec = LieSpec::free_on(&["x", "y"]).unwrap();
        let p = &mono(&spec, &["x", "xy"]) + &mono(&spec, &["y", "y", "x"]).scale(&q(-3));
        let e = encode(&p);
        assert_eq!(decode(&e).unwrap(), p);
        assert_eq!(encode(&p_one()), ModElement::basis(ModTerm::one()));
        assert!(decode(&ModElement::zero()).unwrap().is_zero());
        let bad = ModElement::basis(ModTerm::new(vec![OpLetter::D], Root::One));
        assert!(matches!(decode(&bad), Err(DecodeError::HasDerivative(_, 1))));
        let x = spec.parse_word("x").unwrap();
        let bad = ModElement::basis(ModTerm::new(vec![OpLetter::L(0, x)], Root::One));
        assert!(matches!(decode(&bad), Err(DecodeError::NotNormalForm(_))));
    }

    #[test]
    fn both_routes_on_leibniz() {
        let spec = LieSpec::free_on(&["x", "y"]).unwrap();
        let rules = base_ruleset(&spec);
        let (x, y) = (spec.parse_word("x").unwrap(), spec.parse_word("y").unwrap());
        let gx = || Box::new(PoissonExpr::Gen(x.clone()));
        let gy = || PoissonExpr::Gen(y.clone());
        // {x, y*y} and 2 y*{x,y}
        let lhs = PoissonExpr::Bracket(gx(), Box::new(PoissonExpr::Prod(vec![gy(), gy()])));
        let rhs = PoissonExpr::Scale(
            q(2),
            Box::new(PoissonExpr::Prod(vec![gy(), PoissonExpr::Bracket(gx(), Box::new(gy()))])),
        );
        assert!(p_equal_oracle(&eval_oracle(&spec, &lhs), &eval_oracle(&spec, &rhs)));
        assert!(expr_equal_conformal(&rules, 10_000, &lhs, &rhs).unwrap().0);
        let xy = PoissonExpr::Bracket(gx(), Box::new(gy()));
        assert!(!expr_equal_conformal(&rules, 10_000, &xy, &PoissonExpr::Const(q(0))).unwrap().0);
        let p = mono(&spec, &["x", "y"]);
        let r = mono(&spec, &["y", "x"]);
        assert!(p_equal_conformal(&p, &r, &rules, 100).unwrap());
    }
}

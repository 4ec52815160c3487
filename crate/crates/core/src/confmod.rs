//! The module over the operator algebra generated by `X ∪ {1}`, its rule
//! catalogue, and the normal-form engine.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use crate::freelie::{LieElement, LieSpec, LsWord};
use crate::linear::{write_coeff, Lin};
use crate::opalg::{render_word, OpLetter, OpWord};
use crate::rules::{apply, Locality, RuleSet, Schema};
use crate::ReduceError;

/// Generator a module word is applied to. `One` is the unit `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Root {
    X(LsWord),
    One,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ModTerm {
    pub word: OpWord,
    pub root: Root,
}

impl ModTerm {
    pub fn new(word: OpWord, root: Root) -> Self {
        Self { word, root }
    }

    pub fn one() -> Self {
        Self { word: Vec::new(), root: Root::One }
    }

    /// `(b_1 ≤ … ≤ b_k, s)` when the term is `L_1^{b_1}…L_1^{b_k}∂^s1`.
    pub fn pbw_shape(&self) -> Option<(Vec<&LsWord>, usize)> {
        if self.root != Root::One {
            return None;
        }
        let k = self.word.iter().take_while(|l| matches!(l, OpLetter::L(1, _))).count();
        if !self.word[k..].iter().all(|l| *l == OpLetter::D) {
            return None;
        }
        let bs: Vec<&LsWord> = self.word[..k]
            .iter()
            .map(|l| match l {
                OpLetter::L(_, b) => b,
                _ => unreachable!(),
            })
            .collect();
        if bs.windows(2).any(|p| p[0] > p[1]) {
            return None;
        }
        Some((bs, self.word.len() - k))
    }

    /// Total superscript degree, root included.
    pub fn g_degree(&self) -> usize {
        let r = match &self.root {
            Root::X(b) => b.degree(),
            Root::One => 0,
        };
        r + self.word.iter().map(OpLetter::g_degree).sum::<usize>()
    }
}

pub type ModElement = Lin<ModTerm>;

/// Monomial order used to pick leading terms.
///
/// `1`-rooted terms lie above `X`-rooted ones. Among `1`-rooted terms the
/// non-PBW-shaped ones lie above PBW-shaped ones; PBW-shaped terms compare
/// by degree, then by the power of `∂`, then by factors in descending order.
/// Putting `∂` before the factors keeps the order compatible with `L_1^a`,
/// whose action on `∂^k u` adds `k∂^{k-1}{a,u}` below `∂^k au`.
/// Everything else compares by degree, length and then structurally.
pub fn term_cmp(a: &ModTerm, b: &ModTerm) -> Ordering {
    let one = |t: &ModTerm| t.root == Root::One;
    one(a).cmp(&one(b)).then_with(|| match (a.pbw_shape(), b.pbw_shape()) {
        (Some((fa, sa)), Some((fb, sb))) => {
            let da: usize = fa.iter().map(|w| w.degree()).sum();
            let db: usize = fb.iter().map(|w| w.degree()).sum();
            da.cmp(&db)
                .then_with(|| sa.cmp(&sb))
                .then_with(|| fa.iter().rev().cmp(fb.iter().rev()))
        }
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a
            .g_degree()
            .cmp(&b.g_degree())
            .then_with(|| a.word.len().cmp(&b.word.len()))
            .then_with(|| a.cmp(b)),
    })
}

/// Leading term and coefficient under [`term_cmp`].
pub fn leading(e: &ModElement) -> Option<(&ModTerm, &crate::linear::Q)> {
    e.iter().max_by(|x, y| term_cmp(x.0, y.0))
}

pub fn render_root(spec: &LieSpec, r: &Root, out: &mut String) {
    match r {
        Root::One => out.push('1'),
        Root::X(b) => {
            let name = spec.word_name(b);
            if b.degree() > 1 {
                let _ = write!(out, "({})", name);
            } else if name.chars().count() == 1 {
                out.push_str(&name);
            } else {
                let _ = write!(out, "{{{}}}", name);
            }
        }
    }
}

pub fn render_term(spec: &LieSpec, t: &ModTerm) -> String {
    let mut out = String::new();
    render_word(spec, &t.word, &mut out);
    render_root(spec, &t.root, &mut out);
    out
}

/// Terms listed from the largest down.
pub fn render_element(spec: &LieSpec, e: &ModElement) -> String {
    let mut out = String::new();
    if e.is_zero() {
        out.push('0');
        return out;
    }
    let mut terms: Vec<_> = e.iter().collect();
    terms.sort_by(|x, y| term_cmp(y.0, x.0));
    for (i, (t, c)) in terms.into_iter().enumerate() {
        let _ = write_coeff(&mut out, c, i == 0, false);
        render_word(spec, &t.word, &mut out);
        render_root(spec, &t.root, &mut out);
    }
    out
}

/// The complete catalogue: operator-algebra commutations, the module
/// relations over `X ∪ {1}`, and the two families on `1`.
pub fn base_ruleset(spec: &LieSpec) -> RuleSet {
    let mut rs = RuleSet::algebra_only(spec.clone());
    for s in Schema::MODULE {
        rs.push_schema(s);
    }
    rs
}

/// Oriented relations of the free conformal module generated by `X` with
/// locality bound `n`.
pub fn generic_module_rules(spec: &LieSpec, n: Locality) -> RuleSet {
    let mut rs = RuleSet::empty(spec.clone());
    for s in [Schema::GenLD, Schema::LnD, Schema::RaD, Schema::RaL, Schema::GenLocal, Schema::GenR] {
        rs.push_schema(s);
    }
    rs.set_locality(n);
    rs
}

const MAX_DEPTH: usize = 1000;

struct Exhausted;

/// Normal-form engine with a memo table valid for one rule set.
///
/// A term `x·u` with `u` already normal can only be reducible at its first
/// letter, so normal forms are built from the right one letter at a time.
pub struct Reducer<'r> {
    rules: &'r RuleSet,
    memo: BTreeMap<ModTerm, ModElement>,
    fuel: u64,
    depth: usize,
}

impl<'r> Reducer<'r> {
    pub fn new(rules: &'r RuleSet, fuel: u64) -> Self {
        Self { rules, memo: BTreeMap::new(), fuel, depth: 0 }
    }

    pub fn rules(&self) -> &'r RuleSet {
        self.rules
    }

    pub fn fuel_left(&self) -> u64 {
        self.fuel
    }

    pub fn reduce(&mut self, e: &ModElement) -> Result<ModElement, ReduceError<ModElement>> {
        let mut out = ModElement::zero();
        for (t, c) in e.iter() {
            match self.nf_term(t) {
                Ok(v) => out.add_scaled(c, &v),
                Err(Exhausted) => return Err(ReduceError::FuelExhausted(e.clone())),
            }
        }
        Ok(out)
    }

    pub fn reduce_term(&mut self, t: &ModTerm) -> Result<ModElement, ReduceError<ModElement>> {
        self.nf_term(t).map_err(|_| ReduceError::FuelExhausted(ModElement::basis(t.clone())))
    }

    /// `Σ c·L_n^{z}` applied to `e` and reduced, for `a = Σ c·z`.
    pub fn act_l(&mut self, a: &LieElement, n: u32, e: &ModElement) -> Result<ModElement, ReduceError<ModElement>> {
        self.reduce(&prepend(e, a.iter().map(|(z, c)| (c.clone(), OpLetter::L(n, z.clone())))))
    }

    pub fn act_d(&mut self, e: &ModElement) -> Result<ModElement, ReduceError<ModElement>> {
        self.reduce(&prepend(e, core::iter::once((crate::linear::q(1), OpLetter::D))))
    }

    /// Prepends `letter` to `e` and reduces.
    pub fn act(&mut self, letter: &OpLetter, e: &ModElement) -> Result<ModElement, ReduceError<ModElement>> {
        self.reduce(&prepend(e, core::iter::once((crate::linear::q(1), letter.clone()))))
    }

    fn nf_term(&mut self, t: &ModTerm) -> Result<ModElement, Exhausted> {
        if let Some(v) = self.memo.get(t) {
            return Ok(v.clone());
        }
        // Normal form of the bare root first, then letters from the right.
        let bare = ModTerm { word: Vec::new(), root: t.root.clone() };
        let mut cur = self.nf_single(bare)?;
        for x in t.word.iter().rev() {
            let mut next = ModElement::zero();
            for (u, c) in cur.iter() {
                let mut w = Vec::with_capacity(u.word.len() + 1);
                w.push(x.clone());
                w.extend_from_slice(&u.word);
                let v = self.nf_single(ModTerm { word: w, root: u.root.clone() })?;
                next.add_scaled(c, &v);
            }
            cur = next;
        }
        self.memo.insert(t.clone(), cur.clone());
        Ok(cur)
    }

    /// Normal form of a term that can only be reducible at position 0.
    fn nf_single(&mut self, t: ModTerm) -> Result<ModElement, Exhausted> {
        if let Some(v) = self.memo.get(&t) {
            return Ok(v.clone());
        }
        let out = match self.rules.rewrite_at(&t, 0) {
            None => ModElement::basis(t.clone()),
            Some((_, rw)) => {
                if self.fuel == 0 || self.depth >= MAX_DEPTH {
                    return Err(Exhausted);
                }
                self.fuel -= 1;
                self.depth += 1;
                let e = apply(&t, 0, &rw);
                let mut out = ModElement::zero();
                for (u, c) in e.iter() {
                    match self.nf_term(u) {
                        Ok(v) => out.add_scaled(c, &v),
                        Err(x) => {
                            self.depth -= 1;
                            return Err(x);
                        }
                    }
                }
                self.depth -= 1;
                out
            }
        };
        self.memo.insert(t, out.clone());
        Ok(out)
    }
}

/// `Σ c·letter·t` over the given letters and terms of `e`.
pub fn prepend(e: &ModElement, letters: impl IntoIterator<Item = (crate::linear::Q, OpLetter)>) -> ModElement {
    let mut out = ModElement::zero();
    for (d, x) in letters {
        for (t, c) in e.iter() {
            let mut w = Vec::with_capacity(t.word.len() + 1);
            w.push(x.clone());
            w.extend_from_slice(&t.word);
            out.add_term(c * &d, ModTerm { word: w, root: t.root.clone() });
        }
    }
    out
}

pub fn mod_reduce(e: &ModElement, rules: &RuleSet, fuel: u64) -> Result<ModElement, ReduceError<ModElement>> {
    Reducer::new(rules, fuel).reduce(e)
}

/// The `λ^n/n!` coefficient of the conformal action of `a` on `e`.
pub fn conf_action(
    a: &LieElement,
    n: u32,
    e: &ModElement,
    rules: &RuleSet,
    fuel: u64,
) -> Result<ModElement, ReduceError<ModElement>> {
    Reducer::new(rules, fuel).act_l(a, n, e)
}

/// Action of `∂`.
pub fn d_action(e: &ModElement, rules: &RuleSet, fuel: u64) -> Result<ModElement, ReduceError<ModElement>> {
    Reducer::new(rules, fuel).act_d(e)
}

/// Rewrites one redex at a time with the choice made by `pick`, which is
/// given the number of available redexes. Used to test confluence.
pub fn reduce_with_strategy(
    e: &ModElement,
    rules: &RuleSet,
    fuel: u64,
    mut pick: impl FnMut(usize) -> usize,
) -> Result<ModElement, ReduceError<ModElement>> {
    let mut cur = e.clone();
    let mut out = ModElement::zero();
    let mut left = fuel;
    while let Some((t, c)) = cur.min_key().map(|(t, c)| (t.clone(), c.clone())) {
        let reds = rules.redexes(&t);
        let mut single = ModElement::basis(t.clone());
        if reds.is_empty() {
            out.add_term(c.clone(), t.clone());
        } else {
            if left == 0 {
                cur += &out;
                return Err(ReduceError::FuelExhausted(cur));
            }
            left -= 1;
            let (pos, _, rw) = &reds[pick(reds.len()) % reds.len()];
            single = &single - &apply(&t, *pos, rw);
        }
        cur.add_scaled(&-c, &single);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::q;
    use crate::rules::DEFAULT_FUEL;
    use alloc::vec;

    fn setup() -> (LieSpec, RuleSet) {
        let spec = LieSpec::free_on(&["x", "y"]).unwrap();
        let rules = base_ruleset(&spec);
        (spec, rules)
    }

    fn w(spec: &LieSpec, s: &str) -> LsWord {
        spec.parse_word(s).unwrap()
    }

    fn l(n: u32, a: &LsWord) -> OpLetter {
        OpLetter::L(n, a.clone())
    }

    #[test]
    fn catalogue_examples() {
        let (spec, rules) = setup();
        let (x, y, xy) = (w(&spec, "x"), w(&spec, "y"), w(&spec, "xy"));
        let red = |t: ModTerm| mod_reduce(&ModElement::basis(t), &rules, DEFAULT_FUEL).unwrap();
        assert!(red(ModTerm::new(vec![l(0, &x)], Root::One)).is_zero());
        assert_eq!(
            red(ModTerm::new(vec![OpLetter::Ry(1)], Root::X(x.clone()))),
            ModElement::term(q(-1), ModTerm::new(vec![l(1, &x)], Root::One))
        );
        assert_eq!(
            red(ModTerm::new(vec![l(0, &x), l(1, &y)], Root::One)),
            ModElement::basis(ModTerm::new(vec![l(1, &xy)], Root::One))
        );
        assert_eq!(
            red(ModTerm::new(vec![l(2, &y)], Root::X(x.clone()))),
            ModElement::basis(ModTerm::new(vec![l(2, &x)], Root::X(y.clone())))
        );
        // R_0∂L_2^xy
        let got = red(ModTerm::new(vec![OpLetter::Ry(0), OpLetter::D, l(2, &x)], Root::X(y.clone())));
        let mut want = ModElement::term(q(-2), ModTerm::new(vec![l(1, &x), l(1, &y), OpLetter::D], Root::One));
        want.add_term(q(2), ModTerm::new(vec![l(1, &xy)], Root::One));
        assert_eq!(got, want, "{}", render_element(&spec, &got));
        assert!(red(ModTerm::new(vec![OpLetter::Ry(1), l(2, &x)], Root::X(y.clone()))).is_zero());
    }

    #[test]
    fn actions() {
        let (spec, rules) = setup();
        let (x, y, xy) = (w(&spec, "x"), w(&spec, "y"), w(&spec, "xy"));
        let one = ModElement::basis(ModTerm::one());
        let ex = Lin::basis(x.clone());
        let lx = ModElement::basis(ModTerm::new(vec![l(1, &x)], Root::One));
        let ly = ModElement::basis(ModTerm::new(vec![l(1, &y)], Root::One));
        assert_eq!(conf_action(&ex, 1, &one, &rules, 100).unwrap(), lx);
        assert_eq!(
            conf_action(&ex, 0, &ly, &rules, 100).unwrap(),
            ModElement::basis(ModTerm::new(vec![l(1, &xy)], Root::One))
        );
        assert!(conf_action(&ex, 2, &ly, &rules, 100).unwrap().is_zero());
        assert!(d_action(&ModElement::zero(), &rules, 100).unwrap().is_zero());
        assert_eq!(
            d_action(&lx, &rules, 100).unwrap(),
            ModElement::basis(ModTerm::new(vec![l(1, &x), OpLetter::D], Root::One))
        );
        let lxly = ModElement::basis(ModTerm::new(vec![l(1, &x), l(1, &y)], Root::One));
        // ∂ ⊗ xy = L_1^xL_1^y∂1 − 1 ⊗ {x,y}
        let mut want = ModElement::basis(ModTerm::new(vec![l(1, &x), l(1, &y), OpLetter::D], Root::One));
        want.add_term(q(-1), ModTerm::new(vec![l(1, &xy)], Root::One));
        assert_eq!(d_action(&lxly, &rules, 100).unwrap(), want);
    }

    #[test]
    fn generic_module_examples() {
        let spec = LieSpec::free_on(&["a", "b"]).unwrap();
        let (a, b) = (w(&spec, "a"), w(&spec, "b"));
        let r2 = ModElement::basis(ModTerm::new(vec![OpLetter::R(2, b.clone())], Root::X(a.clone())));
        let r0 = ModElement::basis(ModTerm::new(vec![OpLetter::R(0, b.clone())], Root::X(a.clone())));
        let l_ab = |n| ModElement::basis(ModTerm::new(vec![OpLetter::L(n, a.clone())], Root::X(b.clone())));
        let rs3 = generic_module_rules(&spec, Locality::constant(3));
        assert_eq!(mod_reduce(&r2, &rs3, 100).unwrap(), l_ab(2));
        let rs1 = generic_module_rules(&spec, Locality::constant(1));
        assert_eq!(mod_reduce(&r0, &rs1, 100).unwrap(), l_ab(0));
        let rs0 = generic_module_rules(&spec, Locality::constant(0));
        assert!(mod_reduce(&r0, &rs0, 100).unwrap().is_zero());
        assert!(mod_reduce(&l_ab(0), &rs0, 100).unwrap().is_zero());
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        let (spec, rules) = setup();
        let x = w(&spec, "x");
        let t = ModElement::basis(ModTerm::new(vec![OpLetter::D, OpLetter::D, l(1, &x), l(1, &x)], Root::One));
        match mod_reduce(&t, &rules, 1) {
            Err(ReduceError::FuelExhausted(e)) => assert_eq!(e, t),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn order_prefers_unit_root_and_degree() {
        let (spec, _) = setup();
        let (x, y, xy) = (w(&spec, "x"), w(&spec, "y"), w(&spec, "xy"));
        let pbw = |ls: &[&LsWord]| ModTerm::new(ls.iter().map(|b| l(1, b)).collect(), Root::One);
        assert_eq!(term_cmp(&pbw(&[&x, &x]), &pbw(&[&y])), Ordering::Greater);
        assert_eq!(term_cmp(&pbw(&[&x, &y]), &pbw(&[&xy])), Ordering::Less);
        assert_eq!(term_cmp(&ModTerm::new(vec![], Root::X(x.clone())), &ModTerm::one()), Ordering::Less);
        let l0 = ModTerm::new(vec![l(0, &y), l(1, &x)], Root::One);
        assert_eq!(term_cmp(&l0, &pbw(&[&xy])), Ordering::Greater);
        assert_eq!(
            render_element(&spec, &ModElement::basis(pbw(&[&x, &xy]))),
            "L_1^xL_1^{(xy)}1"
        );
    }
}

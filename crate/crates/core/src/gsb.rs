//! Compositions of rewriting rules, completion, proof replay, and rule sets
//! for Poisson ideals.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::confmod::{base_ruleset, leading, term_cmp, ModElement, ModTerm, Reducer, Root};
use crate::freelie::{LieElement, LieSpec, LsWord};
use crate::linear::{q, Q};
use crate::opalg::{alg_reduce, OpLetter, OpPoly, OpWord};
use crate::poisson::{encode, PoissonElement, PoissonMonomial};
use crate::rules::{apply, Rewrite, RewriteRule, RuleBody, RuleSet, Tb};
use crate::ReduceError;

/// Limits on the schema instances and words that completion looks at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest `n` in `L_n`, `R_n^a`, `R_n`.
    pub max_n: u32,
    /// Largest run of `∂` in a schema instance.
    pub max_s: usize,
    /// Longest composition word.
    pub max_word_len: usize,
    /// Superscripts and roots range over basis elements up to this degree.
    pub letter_degree: usize,
    /// Words of larger superscript degree are skipped.
    pub max_degree: Option<usize>,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { max_n: 3, max_s: 4, max_word_len: 6, letter_degree: 1, max_degree: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Overlap {
    Word(OpWord),
    Term(ModTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompositionKind {
    Intersection,
    Inclusion,
    LeftMultiplication(OpLetter),
}

/// Two ways of rewriting one word: rule `rule_a` at `pos_a` and rule
/// `rule_b` at `pos_b` (indices into the rule set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub overlap: Overlap,
    pub rule_a: usize,
    pub pos_a: usize,
    pub rule_b: usize,
    pub pos_b: usize,
    pub kind: CompositionKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    Module(ModElement),
    Algebra(OpPoly),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Module(e) => e.is_zero(),
            Residual::Algebra(p) => p.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GsbError {
    #[error("fuel exhausted while reducing a composition")]
    FuelExhausted,
    #[error("residual cannot be oriented: leading term is not strictly greater")]
    OrderViolation(ModElement),
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
    #[error("relation {0} has a constant term")]
    UnitInIdeal(usize),
    #[error("unknown proof case {0:?}")]
    UnknownCase(String),
    #[error("the Lie algebra needs at least three degree-one basis elements")]
    TooFewLetters,
}

impl<T> From<ReduceError<T>> for GsbError {
    fn from(_: ReduceError<T>) -> Self {
        GsbError::FuelExhausted
    }
}

fn letter_pool(spec: &LieSpec, b: &Bounds) -> Vec<OpLetter> {
    let basis = spec.basis_upto(b.letter_degree);
    let mut out = vec![OpLetter::D];
    for n in 0..=b.max_n {
        for a in &basis {
            out.push(OpLetter::L(n, a.clone()));
        }
        for a in &basis {
            out.push(OpLetter::R(n, a.clone()));
        }
        out.push(OpLetter::Ry(n));
    }
    out
}

fn term_degree_ok(t: &ModTerm, b: &Bounds) -> bool {
    t.word.len() <= b.max_word_len && b.max_degree.is_none_or(|d| t.g_degree() <= d)
}

/// Candidate left sides: every module-rule instance within bounds, found by
/// matching a family of word shapes that covers all module schemas.
fn module_instances(rules: &RuleSet, b: &Bounds, pool: &[OpLetter]) -> Vec<ModTerm> {
    let spec = rules.spec();
    let basis = spec.basis_upto(b.letter_degree);
    let mut roots: Vec<Root> = basis.iter().map(|a| Root::X(a.clone())).collect();
    roots.push(Root::One);
    let mut cand: BTreeSet<ModTerm> = BTreeSet::new();
    for r in &roots {
        for x in pool {
            cand.insert(ModTerm::new(vec![x.clone()], r.clone()));
            for y in pool {
                cand.insert(ModTerm::new(vec![x.clone(), y.clone()], r.clone()));
            }
        }
        for a in &basis {
            for s in 1..=b.max_s {
                for n in [0, 1] {
                    let mut w = vec![OpLetter::L(n, a.clone())];
                    w.extend(core::iter::repeat_n(OpLetter::D, s));
                    cand.insert(ModTerm::new(w, r.clone()));
                }
            }
        }
    }
    // L_0^a L_1^{b_1}⋯L_1^{b_k} ∂^s 1 with sorted b
    for a in &basis {
        let mut stack: Vec<Vec<LsWord>> = basis.iter().map(|x| vec![x.clone()]).collect();
        while let Some(bs) = stack.pop() {
            if 1 + bs.len() > b.max_word_len {
                continue;
            }
            for s in 0..=b.max_s.min(b.max_word_len - 1 - bs.len()) {
                let mut w = vec![OpLetter::L(0, a.clone())];
                w.extend(bs.iter().map(|x| OpLetter::L(1, x.clone())));
                w.extend(core::iter::repeat_n(OpLetter::D, s));
                cand.insert(ModTerm::new(w, Root::One));
            }
            let last = bs.last().unwrap();
            for x in basis.iter().filter(|x| *x >= last) {
                let mut nb = bs.clone();
                nb.push(x.clone());
                stack.push(nb);
            }
        }
    }
    for r in rules.rules() {
        if let RuleBody::Mod { lhs, .. } = &r.body {
            cand.insert(lhs.clone());
        }
    }
    cand.into_iter()
        .filter(|t| term_degree_ok(t, b))
        .filter(|t| rules.redexes(t).iter().any(|(p, _, rw)| *p == 0 && matches!(rw, Rewrite::Mod(_))))
        .collect()
}

/// Left sides of algebra rules within bounds.
fn algebra_instances(rules: &RuleSet, pool: &[OpLetter]) -> Vec<(OpWord, usize)> {
    let mut out = Vec::new();
    for x in pool {
        for y in pool {
            let t = ModTerm::new(vec![x.clone(), y.clone()], Root::One);
            for (p, i, rw) in rules.redexes(&t) {
                if p == 0 && matches!(rw, Rewrite::Alg { len: 2, .. }) {
                    out.push((t.word.clone(), i));
                }
            }
        }
    }
    for (i, r) in rules.rules().iter().enumerate() {
        if let RuleBody::Alg { lhs, .. } = &r.body {
            out.push((lhs.clone(), i));
        }
    }
    out
}

fn fresh(a: usize, b: usize, since: usize) -> bool {
    a >= since || b >= since
}

/// All compositions within bounds.
pub fn overlaps(rules: &RuleSet, bounds: &Bounds) -> Vec<Composition> {
    overlaps_since(rules, bounds, 0)
}

/// Compositions in which at least one rule has index `>= since`.
pub fn overlaps_since(rules: &RuleSet, bounds: &Bounds, since: usize) -> Vec<Composition> {
    let pool = letter_pool(rules.spec(), bounds);
    let mut out = Vec::new();

    // algebra words: overlaps of two left sides, and one inside another
    let alg = algebra_instances(rules, &pool);
    let mut seen: BTreeSet<(OpWord, usize, usize, usize, usize)> = BTreeSet::new();
    for (u, i) in &alg {
        for (v, j) in &alg {
            for k in 1..u.len().min(v.len()) {
                if u[u.len() - k..] == v[..k] && fresh(*i, *j, since) {
                    let mut w = u.clone();
                    w.extend_from_slice(&v[k..]);
                    let pb = u.len() - k;
                    if w.len() <= bounds.max_word_len && seen.insert((w.clone(), *i, 0, *j, pb)) {
                        out.push(Composition {
                            overlap: Overlap::Word(w),
                            rule_a: *i,
                            pos_a: 0,
                            rule_b: *j,
                            pos_b: pb,
                            kind: CompositionKind::Intersection,
                        });
                    }
                }
            }
            if v.len() < u.len() && (i, u) != (j, v) && fresh(*i, *j, since) {
                for p in 0..=u.len() - v.len() {
                    if u[p..p + v.len()] == v[..] && seen.insert((u.clone(), *i, 0, *j, p)) {
                        out.push(Composition {
                            overlap: Overlap::Word(u.clone()),
                            rule_a: *i,
                            pos_a: 0,
                            rule_b: *j,
                            pos_b: p,
                            kind: CompositionKind::Inclusion,
                        });
                    }
                }
            }
        }
    }

    // module words
    for t in module_instances(rules, bounds, &pool) {
        let reds = rules.redexes(&t);
        let mains: Vec<usize> = reds
            .iter()
            .filter(|(p, _, rw)| *p == 0 && matches!(rw, Rewrite::Mod(_)))
            .map(|(_, i, _)| *i)
            .collect();
        for &i in &mains {
            for (p, j, _) in &reds {
                if (*p == 0 && *j <= i) || !fresh(i, *j, since) {
                    continue;
                }
                out.push(Composition {
                    overlap: Overlap::Term(t.clone()),
                    rule_a: i,
                    pos_a: 0,
                    rule_b: *j,
                    pos_b: *p,
                    kind: CompositionKind::Inclusion,
                });
            }
            for x in &pool {
                let mut w = Vec::with_capacity(t.word.len() + 1);
                w.push(x.clone());
                w.extend_from_slice(&t.word);
                let xt = ModTerm::new(w, t.root.clone());
                if !term_degree_ok(&xt, bounds) {
                    continue;
                }
                for (p, j, _) in rules.redexes(&xt) {
                    if p == 0 && fresh(i, j, since) {
                        out.push(Composition {
                            overlap: Overlap::Term(xt.clone()),
                            rule_a: i,
                            pos_a: 1,
                            rule_b: j,
                            pos_b: 0,
                            kind: CompositionKind::LeftMultiplication(x.clone()),
                        });
                    }
                }
            }
        }
    }
    out
}

fn word_cmp(a: &[OpLetter], b: &[OpLetter]) -> Ordering {
    let deg = |w: &[OpLetter]| w.iter().map(OpLetter::g_degree).sum::<usize>();
    deg(a).cmp(&deg(b)).then(a.len().cmp(&b.len())).then_with(|| a.cmp(b))
}

fn monic_module(e: ModElement) -> ModElement {
    match leading(&e) {
        Some((t, _)) => {
            let t = t.clone();
            e.monic_by(&t)
        }
        None => e,
    }
}

fn monic_algebra(p: OpPoly) -> OpPoly {
    let lead = p.keys().max_by(|a, b| word_cmp(a, b)).cloned();
    match lead {
        Some(w) => p.monic_by(&w),
        None => p,
    }
}

fn branch(rules: &RuleSet, idx: usize, t: &ModTerm, pos: usize) -> ModElement {
    let rw = rules.rewrite_with(idx, t, pos).expect("composition rule does not match its word");
    apply(t, pos, &rw)
}

fn residual_with(c: &Composition, red: &mut Reducer<'_>, fuel: u64) -> Result<Residual, GsbError> {
    let rules = red.rules();
    match &c.overlap {
        Overlap::Term(t) => {
            let a = red.reduce(&branch(rules, c.rule_a, t, c.pos_a))?;
            let b = red.reduce(&branch(rules, c.rule_b, t, c.pos_b))?;
            Ok(Residual::Module(monic_module(&a - &b)))
        }
        Overlap::Word(w) => {
            // root is irrelevant to algebra rules
            let t = ModTerm::new(w.clone(), Root::One);
            let to_poly = |e: ModElement| -> OpPoly { e.map_keys(|t| t.word.clone()) };
            let a = alg_reduce(&to_poly(branch(rules, c.rule_a, &t, c.pos_a)), rules, fuel)?;
            let b = alg_reduce(&to_poly(branch(rules, c.rule_b, &t, c.pos_b)), rules, fuel)?;
            Ok(Residual::Algebra(monic_algebra(&a - &b)))
        }
    }
}

/// Reduces the overlap word along both branches and returns the difference,
/// scaled so that its leading coefficient is 1.
pub fn composition_residual(c: &Composition, rules: &RuleSet, fuel: u64) -> Result<Residual, GsbError> {
    let mut red = Reducer::new(rules, fuel);
    residual_with(c, &mut red, fuel)
}

#[derive(Clone, Debug)]
pub struct CompletionReport {
    pub rules: RuleSet,
    pub new_rule_count: usize,
    pub checked: usize,
    pub rounds: usize,
    /// True when the round limit stopped completion while rules were still
    /// being added.
    pub exhausted: bool,
    /// Nonzero residuals of the last round; empty iff the final rule set has
    /// no nontrivial composition within bounds.
    pub residuals: Vec<Residual>,
}

fn orient_module(r: &ModElement) -> Result<(ModTerm, ModElement), GsbError> {
    let (lead, c) = leading(r).expect("nonzero residual");
    let lead = lead.clone();
    let rhs = &ModElement::basis(lead.clone()) - &r.scale(&(Q::one() / c));
    if rhs.keys().any(|t| term_cmp(t, &lead) != Ordering::Less) {
        return Err(GsbError::OrderViolation(r.clone()));
    }
    Ok((lead, rhs))
}

fn orient_algebra(p: &OpPoly) -> (OpWord, OpPoly) {
    let lead = p.keys().max_by(|a, b| word_cmp(a, b)).cloned().expect("nonzero residual");
    let c = p.coeff(&lead);
    let rhs = &OpPoly::basis(lead.clone()) - &p.scale(&(Q::one() / c));
    (lead, rhs)
}

/// Adds the residuals of all compositions as new rules, round after round,
/// until every composition within bounds is trivial or `max_rounds` is hit.
///
/// Pairs of rules below `rules.trusted()` are not checked.
pub fn complete(rules: &RuleSet, bounds: &Bounds, fuel: u64, max_rounds: usize) -> Result<CompletionReport, GsbError> {
    let mut rs = rules.clone();
    let mut since = rs.trusted();
    let mut checked = 0;
    let mut added = 0;
    let mut rounds = 0;
    let mut next_id = 1;
    while rounds < max_rounds {
        rounds += 1;
        let comps = overlaps_since(&rs, bounds, since);
        checked += comps.len();
        let mut residuals = Vec::new();
        {
            let mut red = Reducer::new(&rs, fuel);
            for c in &comps {
                let r = residual_with(c, &mut red, fuel)?;
                if !r.is_zero() && !residuals.contains(&r) {
                    residuals.push(r);
                }
            }
        }
        if residuals.is_empty() {
            return Ok(CompletionReport { rules: rs, new_rule_count: added, checked, rounds, exhausted: false, residuals });
        }
        since = rs.len();
        for r in &residuals {
            // earlier additions of this round may already cover it
            let body = match r {
                Residual::Module(e) => {
                    let e = Reducer::new(&rs, fuel).reduce(e)?;
                    if e.is_zero() {
                        continue;
                    }
                    let (lhs, rhs) = orient_module(&e)?;
                    RuleBody::Mod { lhs, rhs }
                }
                Residual::Algebra(p) => {
                    let p = alg_reduce(p, &rs, fuel)?;
                    if p.is_zero() {
                        continue;
                    }
                    let (lhs, rhs) = orient_algebra(&p);
                    RuleBody::Alg { lhs, rhs }
                }
            };
            if rs.push(RewriteRule { id: format!("S{}", next_id), body }) {
                next_id += 1;
                added += 1;
            }
        }
        if rounds == max_rounds {
            return Ok(CompletionReport { rules: rs, new_rule_count: added, checked, rounds, exhausted: true, residuals });
        }
    }
    Ok(CompletionReport { rules: rs, new_rule_count: added, checked, rounds, exhausted: false, residuals: Vec::new() })
}

/// Base rules followed by one oriented rule per relation.
///
/// The base rules are marked trusted so completion only looks at pairs
/// involving the new relations.
pub fn ideal_rules(s: &[PoissonElement], spec: &LieSpec) -> Result<RuleSet, GsbError> {
    let mut rs = base_ruleset(spec);
    rs.mark_trusted();
    let fuel = rs.fuel;
    for (i, p) in s.iter().enumerate() {
        if p.is_zero() {
            return Err(GsbError::ZeroRelation(i));
        }
        if !p.coeff(&PoissonMonomial::unit()).is_zero() {
            return Err(GsbError::UnitInIdeal(i));
        }
        let e = Reducer::new(&rs, fuel).reduce(&encode(p))?;
        if e.is_zero() {
            continue;
        }
        let (lhs, rhs) = orient_module(&e)?;
        rs.push(RewriteRule { id: format!("I{}", i + 1), body: RuleBody::Mod { lhs, rhs } });
    }
    Ok(rs)
}

/// Composition cases worked out by hand for the base rules.
pub const PROOF_CASES: [&str; 21] = [
    "C1xR0",
    "C1xR1",
    "C2xR0",
    "C2xR1",
    "C3xR0",
    "C3xR1",
    "DsxR0",
    "DsxR1",
    "G22xR0",
    "G22xR1",
    "G12xR0",
    "G12xR1",
    "G12'xR0",
    "G12'xR1",
    "G11'xR0",
    "G11'xR1",
    "G11xR0",
    "G11xR1",
    "G01xR0",
    "G01xR1",
    "leibniz-genesis",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayInstance {
    pub label: String,
    pub word: ModTerm,
    /// Normal form after first commuting the leftmost letter.
    pub left: ModElement,
    /// Normal form after first applying the relation being checked.
    pub right: ModElement,
    pub expected: Expected,
    pub residual: ModElement,
}

/// What a replayed chain must reproduce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    /// Both sides reach this normal form.
    Value(ModElement),
    /// The monic difference of the two sides.
    Residual(ModElement),
}

impl ReplayInstance {
    pub fn matches(&self) -> bool {
        match &self.expected {
            Expected::Value(v) => self.left == *v && self.right == *v,
            Expected::Residual(r) => self.residual == *r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub case: String,
    pub spec: LieSpec,
    /// Basis elements standing for `a`, `b`, `c`.
    pub letters: [LsWord; 3],
    pub instances: Vec<ReplayInstance>,
}

impl ReplayReport {
    pub fn chain_matches(&self) -> bool {
        self.instances.iter().all(|i| i.matches())
    }

    /// First nonzero residual, or zero. Instances that are expected to
    /// leave a nonzero residual are skipped.
    pub fn residual(&self) -> ModElement {
        self.instances
            .iter()
            .filter(|i| !matches!(&i.expected, Expected::Residual(r) if !r.is_zero()))
            .map(|i| i.residual.clone())
            .find(|r| !r.is_zero())
            .unwrap_or_else(ModElement::zero)
    }
}

fn canonical_case(case: &str) -> Option<&'static str> {
    let norm: String = case
        .chars()
        .map(|c| match c {
            '×' | 'X' => 'x',
            'p' => '\'',
            c => c.to_ascii_lowercase(),
        })
        .collect();
    PROOF_CASES.iter().copied().find(|c| c.to_lowercase() == norm)
}

/// Order of `a`, `b`, `c` required by the relation under test.
fn case_order(rel: &str) -> [usize; 3] {
    // positions of a, b, c among the sorted letters
    match rel {
        "G12" => [2, 0, 1],  // b < c < a
        "G12'" => [1, 0, 2], // b < a < c
        "G11'" => [1, 2, 0], // c < a < b
        "G11" => [0, 2, 1],  // a < c < b
        "G01" => [2, 1, 0],  // c < b < a
        "G22" => [0, 1, 2],
        _ => [1, 0, 2], // b < a
    }
}

fn pick_letters(spec: &LieSpec, order: [usize; 3]) -> Result<(LieSpec, [LsWord; 3]), GsbError> {
    if spec.is_free() {
        let mut names = ["", "", ""];
        for (i, n) in ["a", "b", "c"].iter().enumerate() {
            names[order[i]] = n;
        }
        let s = LieSpec::free_on(&names).expect("valid names");
        let g = s.generators();
        return Ok((s, [g[order[0]].clone(), g[order[1]].clone(), g[order[2]].clone()]));
    }
    let g = spec.basis_upto(1);
    if g.len() < 3 {
        return Err(GsbError::TooFewLetters);
    }
    Ok((spec.clone(), [g[order[0]].clone(), g[order[1]].clone(), g[order[2]].clone()]))
}

fn br(spec: &LieSpec, a: &LsWord, b: &LsWord) -> LieElement {
    spec.bracket_basis(a, b)
}

fn ry(k: u32) -> OpLetter {
    OpLetter::Ry(k)
}

fn l(n: u32, a: &LsWord) -> OpLetter {
    OpLetter::L(n, a.clone())
}

/// Replays one hand-computed composition of the base rules.
///
/// Over a free algebra the letters are `a, b, c` in the order the case
/// needs; over a structure table they are the first three basis elements.
pub fn replay_proof(case: &str, spec: &LieSpec) -> Result<ReplayReport, GsbError> {
    let case = canonical_case(case).ok_or_else(|| GsbError::UnknownCase(case.to_string()))?;
    let (rel, mult) = match case.split_once('x') {
        Some((r, m)) => (r, m),
        _ => ("leibniz", ""),
    };
    let (spec, letters) = pick_letters(spec, case_order(rel))?;
    let [a, b, c] = letters.clone();
    let base = base_ruleset(&spec);
    let fuel = base.fuel;
    let k: u32 = if mult == "R1" { 1 } else { 0 };
    let sp = &spec;
    let mut instances = Vec::new();

    let mut run = |label: String, rules: &RuleSet, lhs: OpWord, root: Root, expected: Expected| -> Result<(), GsbError> {
        let mut w = vec![ry(k)];
        w.extend(lhs);
        let t = ModTerm::new(w, root);
        let mut red = Reducer::new(rules, fuel);
        let (_, r0) = rules.rewrite_at(&t, 0).expect("leftmost letter commutes");
        let (_, r1) = rules.rewrite_at(&t, 1).expect("relation applies");
        let left = red.reduce(&apply(&t, 0, &r0))?;
        let right = red.reduce(&apply(&t, 1, &r1))?;
        // catalogued values need not be fully reduced
        let expected = match expected {
            Expected::Value(v) => Expected::Value(red.reduce(&v)?),
            Expected::Residual(r) => Expected::Residual(monic_module(red.reduce(&r)?)),
        };
        let residual = monic_module(&left - &right);
        instances.push(ReplayInstance { label, word: t, left, right, expected, residual });
        Ok(())
    };
    let v = Expected::Value;

    let x = |b: &LsWord| Root::X(b.clone());
    let d = OpLetter::D;
    match (rel, k) {
        ("C1", 0) => run("".into(), &base, vec![l(2, &a)], x(&b), v(Tb::new().l(l(1, &b)).l(l(1, &a)).one().scale(&q(-2))))?,
        ("C1", _) => run("".into(), &base, vec![l(2, &a)], x(&b), v(ModElement::zero()))?,
        ("C2", 0) => {
            let mut e = Tb::new().l(l(1, &b)).l(l(1, &a)).ds(1).one().scale(&q(-2));
            e += &Tb::new().lie(1, &br(sp, &b, &a)).one().scale(&q(2));
            run("".into(), &base, vec![d.clone(), l(2, &a)], x(&b), v(e))?
        }
        ("C2", _) => run("".into(), &base, vec![d.clone(), l(2, &a)], x(&b), v(Tb::new().l(l(1, &b)).l(l(1, &a)).one().scale(&q(-2))))?,
        ("C3", _) | ("Ds", _) => {
            let ss: Vec<usize> = if rel == "C3" { vec![1] } else { vec![2, 3, 4] };
            for s in ss {
                let si = s as i64;
                let mut e;
                if k == 0 {
                    e = Tb::new().l(l(1, &b)).l(l(1, &a)).ds(s + 1).one().scale(&q(-1));
                    e += &Tb::new().lie(1, &br(sp, &a, &b)).ds(s).one().scale(&q(-2 * (si + 1)));
                } else {
                    e = Tb::new().l(l(1, &b)).l(l(1, &a)).ds(s).one().scale(&q(-(si + 1)));
                    e += &Tb::new().lie(1, &br(sp, &a, &b)).ds(s - 1).one().scale(&q(-2 * si * (si + 1)));
                }
                let mut lhs = vec![l(1, &a)];
                lhs.extend(core::iter::repeat_n(d.clone(), s));
                let label = if rel == "Ds" { format!("s={}", s) } else { String::new() };
                run(label, &base, lhs, x(&b), v(e))?;
            }
        }
        ("G22", _) => run("".into(), &base, vec![l(2, &a), l(2, &b)], x(&c), v(ModElement::zero()))?,
        ("G12", 0) => run("".into(), &base, vec![l(1, &a), l(2, &b)], x(&c), v(Tb::new().l(l(1, &b)).l(l(1, &c)).l(l(1, &a)).one().scale(&q(-2))))?,
        ("G12'", 0) => run("".into(), &base, vec![l(1, &a), l(2, &b)], x(&c), v(Tb::new().l(l(1, &b)).l(l(1, &a)).l(l(1, &c)).one().scale(&q(-2))))?,
        ("G12", _) | ("G12'", _) => run("".into(), &base, vec![l(1, &a), l(2, &b)], x(&c), v(ModElement::zero()))?,
        ("G11'", 0) => {
            let mut e = Tb::new().l(l(1, &c)).l(l(1, &a)).l(l(1, &b)).ds(1).one().scale(&q(-1));
            e += &Tb::new().l(l(1, &b)).lie(1, &br(sp, &a, &c)).one().scale(&q(-2));
            e += &Tb::new().l(l(1, &a)).lie(1, &br(sp, &b, &c)).one().scale(&q(-2));
            run("".into(), &base, vec![l(1, &a), l(1, &b)], x(&c), v(e))?
        }
        ("G11'", _) => run("".into(), &base, vec![l(1, &a), l(1, &b)], x(&c), v(Tb::new().l(l(1, &c)).l(l(1, &a)).l(l(1, &b)).one().scale(&q(-1))))?,
        ("G11", 0) => {
            let mut e = Tb::new().l(l(1, &a)).l(l(1, &c)).l(l(1, &b)).ds(1).one().scale(&q(-1));
            e += &Tb::new().l(l(1, &a)).lie(1, &br(sp, &b, &c)).one().scale(&q(-2));
            run("".into(), &base, vec![l(1, &a), l(1, &b)], x(&c), v(e))?
        }
        ("G11", _) => run("".into(), &base, vec![l(1, &a), l(1, &b)], x(&c), v(Tb::new().l(l(1, &a)).l(l(1, &c)).l(l(1, &b)).one().scale(&q(-1))))?,
        ("G01", _) => {
            let ds = if k == 0 { 1 } else { 0 };
            let mut e = Tb::new().lie(1, &br(sp, &a, &c)).l(l(1, &b)).ds(ds).one().scale(&q(-1));
            e += &Tb::new().l(l(1, &c)).lie(1, &br(sp, &a, &b)).ds(ds).one().scale(&q(-1));
            if k == 0 {
                let abc = sp.bracket(&LieElement::basis(a.clone()), &br(sp, &b, &c));
                e += &Tb::new().lie(1, &abc).one().scale(&q(-2));
            }
            run("".into(), &base, vec![l(0, &a), l(1, &b)], x(&c), v(e))?
        }
        ("leibniz", _) => {
            let without = base.without("leibniz");
            let mut want = Tb::new().l(l(0, &b)).l(l(1, &a)).one();
            want += &Tb::new().lie(1, &br(sp, &a, &b)).one();
            run("without the Leibniz rule".into(), &without, vec![d.clone(), l(2, &a)], x(&b), Expected::Residual(want))?;
            run("with the Leibniz rule".into(), &base, vec![d.clone(), l(2, &a)], x(&b), Expected::Residual(ModElement::zero()))?;
        }
        _ => unreachable!("catalogued case"),
    }
    Ok(ReplayReport { case: case.to_string(), spec, letters, instances })
}

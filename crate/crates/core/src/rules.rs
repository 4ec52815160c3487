//! Rewriting rules: schemas with side conditions and concrete rules, and
//! the indexed collections they are matched from.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::confmod::{ModElement, ModTerm, Root};
use crate::freelie::{LieElement, LieSpec, LsWord};
use crate::linear::{q, Lin, Q};
use crate::opalg::{OpLetter, OpPoly, OpWord};

/// Rewriting rule families matched symbolically in `n`, `s` and `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Schema {
    // operator algebra
    DL0,
    DL1,
    LnD,
    RaD,
    RyD,
    RaL,
    RyL,
    LL,
    // module over X ∪ {1}
    LocalL,
    LocalR,
    L0One,
    LnOne,
    RaOne,
    RyOne,
    R2ab,
    R1ab,
    R0ab,
    RyHigh,
    R1x,
    R0x,
    L2Swap,
    DL2,
    L1Db,
    L1Dsb,
    L2L2,
    L1L2,
    L1L2p,
    L1L1p,
    L1L1,
    L0L1,
    L0DsOne,
    Leibniz,
    // free conformal module with locality bound N
    GenLD,
    GenLocal,
    GenR,
}

impl Schema {
    pub fn tag(self) -> &'static str {
        use Schema::*;
        match self {
            DL0 => "dL0",
            DL1 => "dL1",
            LnD => "Ld",
            RaD => "Rad",
            RyD => "Rd",
            RaL => "RaL",
            RyL => "RL",
            LL => "LL",
            LocalL => "Lab-high",
            LocalR => "Rab-high",
            L0One => "L0-1",
            LnOne => "Ln-1",
            RaOne => "Ra-1",
            RyOne => "R-1",
            R2ab => "R2ab",
            R1ab => "R1ab",
            R0ab => "R0ab",
            RyHigh => "Rx-high",
            R1x => "R1x",
            R0x => "R0x",
            L2Swap => "L2-swap",
            DL2 => "dL2",
            L1Db => "L1db",
            L1Dsb => "L1dsb",
            L2L2 => "L2L2",
            L1L2 => "L1L2",
            L1L2p => "L1L2'",
            L1L1p => "L1L1'",
            L1L1 => "L1L1",
            L0L1 => "L0L1",
            L0DsOne => "L0ds-1",
            Leibniz => "leibniz",
            GenLD => "gen-Ld",
            GenLocal => "gen-local",
            GenR => "gen-R",
        }
    }

    pub fn is_algebra(self) -> bool {
        use Schema::*;
        matches!(self, DL0 | DL1 | LnD | RaD | RyD | RaL | RyL | LL | GenLD)
    }

    pub const ALGEBRA: [Schema; 8] = [
        Schema::DL0,
        Schema::DL1,
        Schema::LnD,
        Schema::RaD,
        Schema::RyD,
        Schema::RaL,
        Schema::RyL,
        Schema::LL,
    ];

    pub const MODULE: [Schema; 24] = [
        Schema::LocalL,
        Schema::LocalR,
        Schema::L0One,
        Schema::LnOne,
        Schema::RaOne,
        Schema::RyOne,
        Schema::R2ab,
        Schema::R1ab,
        Schema::R0ab,
        Schema::RyHigh,
        Schema::R1x,
        Schema::R0x,
        Schema::L2Swap,
        Schema::DL2,
        Schema::L1Db,
        Schema::L1Dsb,
        Schema::L2L2,
        Schema::L1L2,
        Schema::L1L2p,
        Schema::L1L1p,
        Schema::L1L1,
        Schema::L0L1,
        Schema::L0DsOne,
        Schema::Leibniz,
    ];
}

/// Locality bound `N(a,b)` for the free conformal module constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Locality {
    pub default: u32,
    pub overrides: BTreeMap<(LsWord, LsWord), u32>,
}

impl Locality {
    pub fn constant(n: u32) -> Self {
        Self { default: n, overrides: BTreeMap::new() }
    }

    pub fn get(&self, a: &LsWord, b: &LsWord) -> u32 {
        self.overrides.get(&(a.clone(), b.clone())).copied().unwrap_or(self.default)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleBody {
    Schema(Schema),
    Alg { lhs: OpWord, rhs: OpPoly },
    Mod { lhs: ModTerm, rhs: ModElement },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Algebra,
    Module,
    Schema,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: String,
    pub body: RuleBody,
}

impl RewriteRule {
    pub fn kind(&self) -> RuleKind {
        match self.body {
            RuleBody::Schema(_) => RuleKind::Schema,
            RuleBody::Alg { .. } => RuleKind::Algebra,
            RuleBody::Mod { .. } => RuleKind::Module,
        }
    }

    pub fn schema(&self) -> Option<Schema> {
        match self.body {
            RuleBody::Schema(s) => Some(s),
            _ => None,
        }
    }
}

/// Result of matching a rule at a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rewrite {
    /// Replace `len` letters starting at the position.
    Alg { len: usize, rhs: OpPoly },
    /// Replace the whole suffix from the position, root included.
    Mod(ModElement),
}

/// An ordered rule catalogue with lookup indices for concrete rules.
#[derive(Clone, Debug)]
pub struct RuleSet {
    spec: LieSpec,
    rules: Vec<RewriteRule>,
    schemas: Vec<(usize, Schema)>,
    alg_index: BTreeMap<OpWord, usize>,
    alg_lens: BTreeSet<usize>,
    mod_index: BTreeMap<ModTerm, usize>,
    locality: Locality,
    /// Rules before this index are known to be mutually confluent.
    trusted: usize,
    /// Fuel used when callers do not pass their own.
    pub fuel: u64,
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

impl RuleSet {
    pub fn empty(spec: LieSpec) -> Self {
        Self {
            spec,
            rules: Vec::new(),
            schemas: Vec::new(),
            alg_index: BTreeMap::new(),
            alg_lens: BTreeSet::new(),
            mod_index: BTreeMap::new(),
            locality: Locality::constant(3),
            trusted: 0,
            fuel: DEFAULT_FUEL,
        }
    }

    pub(crate) fn algebra_only(spec: LieSpec) -> Self {
        let mut rs = Self::empty(spec);
        for s in Schema::ALGEBRA {
            rs.push_schema(s);
        }
        rs
    }

    pub(crate) fn set_locality(&mut self, n: Locality) {
        self.locality = n;
    }

    pub fn locality(&self) -> &Locality {
        &self.locality
    }

    /// Number of leading rules whose compositions among themselves are
    /// skipped by completion.
    pub fn trusted(&self) -> usize {
        self.trusted
    }

    /// Marks every rule currently in the set as trusted.
    pub fn mark_trusted(&mut self) {
        self.trusted = self.rules.len();
    }

    pub fn spec(&self) -> &LieSpec {
        &self.spec
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn push_schema(&mut self, s: Schema) {
        self.schemas.push((self.rules.len(), s));
        self.rules.push(RewriteRule { id: s.tag().to_string(), body: RuleBody::Schema(s) });
    }

    /// Adds a concrete rule; a rule whose left side is already present is
    /// ignored and `false` is returned.
    pub fn push(&mut self, rule: RewriteRule) -> bool {
        let idx = self.rules.len();
        match &rule.body {
            RuleBody::Schema(s) => {
                self.schemas.push((idx, *s));
            }
            RuleBody::Alg { lhs, .. } => {
                if self.alg_index.contains_key(lhs) {
                    return false;
                }
                self.alg_index.insert(lhs.clone(), idx);
                self.alg_lens.insert(lhs.len());
            }
            RuleBody::Mod { lhs, .. } => {
                if self.mod_index.contains_key(lhs) {
                    return false;
                }
                self.mod_index.insert(lhs.clone(), idx);
            }
        }
        self.rules.push(rule);
        true
    }

    /// Copy of the set with every rule tagged `id` removed.
    pub fn without(&self, id: &str) -> Self {
        let mut out = Self::empty(self.spec.clone());
        out.locality = self.locality.clone();
        out.fuel = self.fuel;
        for (i, r) in self.rules.iter().enumerate() {
            if r.id != id {
                out.push(r.clone());
                if i < self.trusted {
                    out.trusted = out.rules.len();
                }
            }
        }
        out
    }

    pub fn rule(&self, idx: usize) -> &RewriteRule {
        &self.rules[idx]
    }

    /// First algebra rule matching at `pos`, in catalogue order.
    pub fn rewrite_alg_at(&self, word: &[OpLetter], pos: usize) -> Option<Rewrite> {
        let w = &word[pos..];
        for &(_, s) in &self.schemas {
            if s.is_algebra() {
                if let Some(r) = self.match_schema(s, w, None) {
                    return Some(r);
                }
            }
        }
        self.match_concrete_alg(w).map(|(_, r)| r)
    }

    fn match_concrete_alg(&self, w: &[OpLetter]) -> Option<(usize, Rewrite)> {
        for &len in &self.alg_lens {
            if len > w.len() {
                break;
            }
            if let Some(&i) = self.alg_index.get(&w[..len]) {
                if let RuleBody::Alg { rhs, .. } = &self.rules[i].body {
                    return Some((i, Rewrite::Alg { len, rhs: rhs.clone() }));
                }
            }
        }
        None
    }

    /// First rule (algebra or module) matching `term` at `pos`.
    pub fn rewrite_at(&self, term: &ModTerm, pos: usize) -> Option<(usize, Rewrite)> {
        let w = &term.word[pos..];
        for &(i, s) in &self.schemas {
            if let Some(r) = self.match_schema(s, w, Some(&term.root)) {
                return Some((i, r));
            }
        }
        if let Some(hit) = self.match_concrete_alg(w) {
            return Some(hit);
        }
        self.match_concrete_mod(w, &term.root)
    }

    fn match_concrete_mod(&self, w: &[OpLetter], root: &Root) -> Option<(usize, Rewrite)> {
        if self.mod_index.is_empty() {
            return None;
        }
        let key = ModTerm { word: w.to_vec(), root: root.clone() };
        let &i = self.mod_index.get(&key)?;
        match &self.rules[i].body {
            RuleBody::Mod { rhs, .. } => Some((i, Rewrite::Mod(rhs.clone()))),
            _ => None,
        }
    }

    /// Every (position, rule, rewrite) applicable to `term`.
    pub fn redexes(&self, term: &ModTerm) -> Vec<(usize, usize, Rewrite)> {
        let mut out = Vec::new();
        for pos in 0..=term.word.len() {
            let w = &term.word[pos..];
            for &(i, s) in &self.schemas {
                if let Some(r) = self.match_schema(s, w, Some(&term.root)) {
                    out.push((pos, i, r));
                }
            }
            for &len in &self.alg_lens {
                if len > w.len() {
                    break;
                }
                if let Some(&i) = self.alg_index.get(&w[..len]) {
                    if let RuleBody::Alg { rhs, .. } = &self.rules[i].body {
                        out.push((pos, i, Rewrite::Alg { len, rhs: rhs.clone() }));
                    }
                }
            }
            if let Some((i, r)) = self.match_concrete_mod(w, &term.root) {
                out.push((pos, i, r));
            }
        }
        out
    }

    /// Matches one rule, given by index, at `pos`.
    pub fn rewrite_with(&self, idx: usize, term: &ModTerm, pos: usize) -> Option<Rewrite> {
        let w = &term.word[pos..];
        match &self.rules[idx].body {
            RuleBody::Schema(s) => self.match_schema(*s, w, Some(&term.root)),
            RuleBody::Alg { lhs, rhs } => {
                (w.len() >= lhs.len() && &w[..lhs.len()] == lhs.as_slice())
                    .then(|| Rewrite::Alg { len: lhs.len(), rhs: rhs.clone() })
            }
            RuleBody::Mod { lhs, rhs } => {
                (lhs.word.as_slice() == w && lhs.root == term.root).then(|| Rewrite::Mod(rhs.clone()))
            }
        }
    }

    fn match_schema(&self, s: Schema, w: &[OpLetter], root: Option<&Root>) -> Option<Rewrite> {
        use OpLetter::{L, R, D};
        use Schema::*;
        let spec = &self.spec;
        if s.is_algebra() {
            let (a, b) = (w.first()?, w.get(1)?);
            let poly = |terms: Vec<(Q, OpWord)>| -> Option<Rewrite> {
                Some(Rewrite::Alg { len: 2, rhs: terms.into_iter().collect() })
            };
            return match (s, a, b) {
                (DL0, D, L(0, x)) => poly(vec![(q(1), vec![L(0, x.clone()), D])]),
                (DL1, D, L(1, x)) => poly(vec![(q(1), vec![L(1, x.clone()), D]), (q(-1), vec![L(0, x.clone())])]),
                (LnD, L(n, x), D) if *n >= 2 => poly(vec![
                    (q(1), vec![D, L(*n, x.clone())]),
                    (q(*n as i64), vec![L(n - 1, x.clone())]),
                ]),
                (GenLD, L(n, x), D) if *n < 2 => {
                    let mut t = vec![(q(1), vec![D, L(*n, x.clone())])];
                    if *n > 0 {
                        t.push((q(*n as i64), vec![L(n - 1, x.clone())]));
                    }
                    poly(t)
                }
                (RaD, R(n, x), D) => {
                    let mut t = vec![(q(1), vec![D, R(*n, x.clone())])];
                    if *n > 0 {
                        t.push((q(*n as i64), vec![R(n - 1, x.clone())]));
                    }
                    poly(t)
                }
                (RyD, OpLetter::Ry(n), D) => {
                    let mut t = vec![(q(1), vec![D, OpLetter::Ry(*n)])];
                    if *n > 0 {
                        t.push((q(*n as i64), vec![OpLetter::Ry(n - 1)]));
                    }
                    poly(t)
                }
                (RaL, R(..), L(..)) => poly(vec![(q(1), vec![b.clone(), a.clone()])]),
                (RyL, OpLetter::Ry(_), L(..)) => poly(vec![(q(1), vec![b.clone(), a.clone()])]),
                (LL, L(n, x), L(m, y)) if (n, x) > (m, y) => {
                    let mut rhs = OpPoly::basis(vec![b.clone(), a.clone()]);
                    for (z, c) in spec.bracket_basis(x, y).iter() {
                        rhs.add_term(c.clone(), vec![L(n + m, z.clone())]);
                    }
                    Some(Rewrite::Alg { len: 2, rhs })
                }
                _ => None,
            };
        }

        let root = root?;
        let one = matches!(root, Root::One);
        let rb = match root {
            Root::X(b) => Some(b),
            Root::One => None,
        };
        let zero = || Some(Rewrite::Mod(ModElement::zero()));
        let done = |e: ModElement| Some(Rewrite::Mod(e));
        match s {
            LocalL => match (w, rb) {
                ([L(n, _)], Some(_)) if *n >= 3 => zero(),
                _ => None,
            },
            LocalR => match (w, rb) {
                ([R(n, _)], Some(_)) if *n >= 3 => zero(),
                _ => None,
            },
            L0One => match w {
                [L(0, _)] if one => zero(),
                _ => None,
            },
            LnOne => match w {
                [L(n, _)] if one && *n >= 2 => zero(),
                _ => None,
            },
            RaOne => match w {
                [R(..)] if one => zero(),
                _ => None,
            },
            RyOne => match w {
                [OpLetter::Ry(_)] if one => zero(),
                _ => None,
            },
            R2ab => match (w, rb) {
                ([R(2, a)], Some(b)) => done(Tb::new().l(L(2, a.clone())).x(b)),
                _ => None,
            },
            R1ab => match (w, rb) {
                ([R(1, a)], Some(b)) => done(Tb::new().l(L(1, a.clone())).x(b)),
                _ => None,
            },
            R0ab => match (w, rb) {
                ([R(0, a)], Some(b)) => {
                    let mut e = Tb::new().l(L(0, a.clone())).x(b);
                    e -= &Tb::new().lie_root(&spec.bracket_basis(a, b));
                    done(e)
                }
                _ => None,
            },
            RyHigh => match (w, rb) {
                ([OpLetter::Ry(n)], Some(_)) if *n >= 2 => zero(),
                _ => None,
            },
            R1x => match (w, rb) {
                ([OpLetter::Ry(1)], Some(a)) => done(Tb::new().l(L(1, a.clone())).one().scale(&q(-1))),
                _ => None,
            },
            R0x => match (w, rb) {
                ([OpLetter::Ry(0)], Some(a)) => done(Tb::new().l(D).l(L(1, a.clone())).one().scale(&q(-1))),
                _ => None,
            },
            L2Swap => match (w, rb) {
                ([L(2, a)], Some(b)) if a > b => done(Tb::new().l(L(2, b.clone())).x(a)),
                _ => None,
            },
            DL2 => match (w, rb) {
                ([D, L(2, a)], Some(b)) => {
                    let mut e = Tb::new().l(L(1, a.clone())).x(b);
                    e += &Tb::new().l(L(1, b.clone())).x(a);
                    done(e)
                }
                _ => None,
            },
            L1Db | L1Dsb => match (w, rb) {
                ([L(1, a), rest @ ..], Some(b)) if a > b && !rest.is_empty() && rest.iter().all(|l| *l == D) => {
                    let s_ = rest.len();
                    if (s == L1Db) != (s_ == 1) {
                        return None;
                    }
                    let k = q(s_ as i64 + 2);
                    let mut e = Tb::new().l(L(1, b.clone())).ds(s_).x(a);
                    e.add_scaled(&-k.clone(), &Tb::new().l(L(0, b.clone())).ds(s_ - 1).x(a));
                    e.add_scaled(&k, &Tb::new().l(L(0, a.clone())).ds(s_ - 1).x(b));
                    e.add_scaled(&q(-2), &Tb::new().ds(s_ - 1).lie_root(&spec.bracket_basis(a, b)));
                    done(e)
                }
                _ => None,
            },
            L2L2 => match (w, rb) {
                ([L(2, _), L(2, _)], Some(_)) => zero(),
                _ => None,
            },
            L1L2 => match (w, rb) {
                ([L(1, a), L(2, b)], Some(c)) if b <= c && c < a => {
                    done(Tb::new().l(L(1, b.clone())).l(L(2, c.clone())).x(a))
                }
                _ => None,
            },
            L1L2p => match (w, rb) {
                ([L(1, a), L(2, b)], Some(c)) if b < a && a <= c => {
                    done(Tb::new().l(L(1, b.clone())).l(L(2, a.clone())).x(c))
                }
                _ => None,
            },
            L1L1p => match (w, rb) {
                ([L(1, a), L(1, b)], Some(c)) if c < a && a <= b => {
                    let mut e = Tb::new().l(L(1, c.clone())).l(L(1, a.clone())).x(b);
                    e += &Tb::new().l(L(0, b.clone())).l(L(2, c.clone())).x(a);
                    e -= &Tb::new().l(L(0, c.clone())).l(L(2, a.clone())).x(b);
                    e += &Tb::new().l(L(2, c.clone())).lie_root(&spec.bracket_basis(a, b));
                    e += &Tb::new().l(L(2, a.clone())).lie_root(&spec.bracket_basis(c, b));
                    done(e)
                }
                _ => None,
            },
            L1L1 => match (w, rb) {
                ([L(1, a), L(1, b)], Some(c)) if a <= c && c < b => {
                    let mut e = Tb::new().l(L(1, a.clone())).l(L(1, c.clone())).x(b);
                    e += &Tb::new().l(L(0, b.clone())).l(L(2, a.clone())).x(c);
                    e -= &Tb::new().l(L(0, c.clone())).l(L(2, a.clone())).x(b);
                    e += &Tb::new().l(L(2, a.clone())).lie_root(&spec.bracket_basis(c, b));
                    e += &Tb::new().l(L(2, b.clone())).lie_root(&spec.bracket_basis(c, a));
                    e += &Tb::new().l(L(2, c.clone())).lie_root(&spec.bracket_basis(a, b));
                    done(e)
                }
                _ => None,
            },
            L0L1 => match (w, rb) {
                ([L(0, a), L(1, b)], Some(c)) if c < b && b < a => {
                    let mut e = Tb::new().l(L(0, a.clone())).l(L(1, c.clone())).x(b);
                    e += &Tb::new().l(L(0, b.clone())).l(L(1, a.clone())).x(c);
                    e += &Tb::new().l(L(0, c.clone())).l(L(1, b.clone())).x(a);
                    e -= &Tb::new().l(L(0, b.clone())).l(L(1, c.clone())).x(a);
                    e -= &Tb::new().l(L(0, c.clone())).l(L(1, a.clone())).x(b);
                    e += &Tb::new().lie(1, &spec.bracket_basis(c, a)).x(b);
                    e += &Tb::new().lie(1, &spec.bracket_basis(a, b)).x(c);
                    e += &Tb::new().lie(1, &spec.bracket_basis(b, c)).x(a);
                    e -= &Tb::new().l(L(1, c.clone())).lie_root(&spec.bracket_basis(a, b));
                    e -= &Tb::new().l(L(1, a.clone())).lie_root(&spec.bracket_basis(b, c));
                    e -= &Tb::new().l(L(1, b.clone())).lie_root(&spec.bracket_basis(c, a));
                    done(e)
                }
                _ => None,
            },
            L0DsOne => match w {
                [L(0, _), rest @ ..] if one && !rest.is_empty() && rest.iter().all(|l| *l == D) => zero(),
                _ => None,
            },
            Leibniz => match w {
                [L(0, a), rest @ ..] if one => {
                    let k = rest.iter().take_while(|l| matches!(l, L(1, _))).count();
                    if k == 0 || !rest[k..].iter().all(|l| *l == D) {
                        return None;
                    }
                    let bs: Vec<&LsWord> = rest[..k]
                        .iter()
                        .map(|l| match l {
                            L(1, b) => b,
                            _ => unreachable!(),
                        })
                        .collect();
                    if bs.windows(2).any(|p| p[0] > p[1]) {
                        return None;
                    }
                    let s_ = rest.len() - k;
                    let mut e = ModElement::zero();
                    for i in 0..k {
                        let mut t = Tb::new();
                        for (j, b) in bs.iter().enumerate() {
                            t = if i == j {
                                t.lie(1, &spec.bracket_basis(a, b))
                            } else {
                                t.l(L(1, (*b).clone()))
                            };
                        }
                        e += &t.ds(s_).one();
                    }
                    done(e)
                }
                _ => None,
            },
            GenLocal => match (w, rb) {
                ([L(n, a)], Some(b)) if *n >= self.locality.get(a, b) => zero(),
                _ => None,
            },
            GenR => match (w, rb) {
                ([R(m, b)], Some(a)) => {
                    let n = self.locality.get(a, b);
                    let mut e = ModElement::zero();
                    if *m <= n {
                        let mut fact = Q::one();
                        for s_ in 0..=(n - m) {
                            if s_ > 0 {
                                fact *= q(s_ as i64);
                            }
                            let sign = if (m + s_) % 2 == 0 { Q::one() } else { -Q::one() };
                            let c = sign / &fact;
                            e.add_scaled(&c, &Tb::new().ds(s_ as usize).l(L(m + s_, a.clone())).x(b));
                        }
                    }
                    done(e)
                }
                _ => None,
            },
            _ => None,
        }
    }
}

/// Builds linear combinations of module terms letter by letter, expanding
/// Lie-element superscripts and roots linearly.
#[derive(Clone)]
pub(crate) struct Tb {
    acc: Lin<OpWord>,
}

impl Tb {
    pub(crate) fn new() -> Self {
        Self { acc: Lin::basis(Vec::new()) }
    }

    pub(crate) fn l(mut self, letter: OpLetter) -> Self {
        self.acc = self.acc.map_keys(|w| {
            let mut w = w.clone();
            w.push(letter.clone());
            w
        });
        self
    }

    pub(crate) fn ds(mut self, s: usize) -> Self {
        for _ in 0..s {
            self = self.l(OpLetter::D);
        }
        self
    }

    /// Appends `L_n^u` for a Lie element `u`.
    pub(crate) fn lie(self, n: u32, u: &LieElement) -> Self {
        let mut acc = Lin::zero();
        for (w, c) in self.acc.iter() {
            for (z, d) in u.iter() {
                let mut w = w.clone();
                w.push(OpLetter::L(n, z.clone()));
                acc.add_term(c * d, w);
            }
        }
        Self { acc }
    }

    pub(crate) fn root(self, r: Root) -> ModElement {
        self.acc.map_keys(|w| ModTerm { word: w.clone(), root: r.clone() })
    }

    pub(crate) fn x(self, b: &LsWord) -> ModElement {
        self.root(Root::X(b.clone()))
    }

    pub(crate) fn one(self) -> ModElement {
        self.root(Root::One)
    }

    pub(crate) fn lie_root(self, u: &LieElement) -> ModElement {
        let mut out = ModElement::zero();
        for (w, c) in self.acc.iter() {
            for (z, d) in u.iter() {
                out.add_term(c * d, ModTerm { word: w.clone(), root: Root::X(z.clone()) });
            }
        }
        out
    }
}

/// Applies a rewrite found at `pos` to `term`.
pub fn apply(term: &ModTerm, pos: usize, rw: &Rewrite) -> ModElement {
    match rw {
        Rewrite::Alg { len, rhs } => rhs.map_keys(|mid| {
            let mut w = Vec::with_capacity(term.word.len() - len + mid.len());
            w.extend_from_slice(&term.word[..pos]);
            w.extend_from_slice(mid);
            w.extend_from_slice(&term.word[pos + len..]);
            ModTerm { word: w, root: term.root.clone() }
        }),
        Rewrite::Mod(rhs) => rhs.map_keys(|t| {
            let mut w = Vec::with_capacity(pos + t.word.len());
            w.extend_from_slice(&term.word[..pos]);
            w.extend_from_slice(&t.word);
            ModTerm { word: w, root: t.root.clone() }
        }),
    }
}

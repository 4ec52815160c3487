//! The Lie coefficient algebra: free Lie algebras in the Lyndon–Shirshov
//! basis, or finite-dimensional algebras given by structure constants.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::One;
use smallvec::SmallVec;
use thiserror::Error;

use crate::linear::{Lin, Q};

pub type Letter = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("unknown generator or basis label `{0}`")]
    Unknown(String),
    #[error("`{0}` is not a Lyndon word")]
    NotLyndon(String),
    #[error("basis element outside the algebra")]
    Mismatch,
    #[error("structure constants are not antisymmetric at [{0},{1}]")]
    NotAntisymmetric(String, String),
    #[error("structure constants violate the Jacobi identity at ({0},{1},{2})")]
    Jacobi(String, String, String),
}

/// The ordered generating set `G` of a free Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorAlphabet {
    names: Vec<String>,
}

pub(crate) fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GeneratorAlphabet {
    /// Order of the alphabet is the order of `names`.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, LieError> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !valid_ident(n) {
                return Err(LieError::InvalidName(n.to_owned()));
            }
            if out.iter().any(|m| m == n) {
                return Err(LieError::DuplicateGenerator(n.to_owned()));
            }
            out.push(n.to_owned());
        }
        Ok(Self { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }
}

/// A word over the alphabet; ordered degree-first, then lexicographically.
///
/// Values handed out by [`LieSpec`] are Lyndon words (free mode) or
/// single letters naming a basis vector (table mode).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LsWord(SmallVec<[Letter; 6]>);

impl LsWord {
    pub fn letter(l: Letter) -> Self {
        let mut v = SmallVec::new();
        v.push(l);
        Self(v)
    }

    pub(crate) fn from_slice(letters: &[Letter]) -> Self {
        Self(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.0)
    }
}

impl Ord for LsWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for LsWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LsWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0.as_slice())
    }
}

/// True iff `w` is nonempty and strictly smaller than each proper rotation.
pub fn is_lyndon(w: &[Letter]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| {
        let rot = w[i..].iter().chain(w[..i].iter());
        w.iter().cmp(rot) == Ordering::Less
    })
}

/// Every Lyndon word of length at most `max_degree` over an alphabet of
/// `k` letters, sorted degree-first then lexicographically.
pub fn lyndon_words(k: usize, max_degree: usize) -> Vec<LsWord> {
    let mut out = Vec::new();
    if k == 0 || max_degree == 0 {
        return out;
    }
    // Duval's generation in lexicographic order.
    let top = (k - 1) as Letter;
    let mut w: Vec<Letter> = alloc::vec![0];
    loop {
        out.push(LsWord::from_slice(&w));
        let m = w.len();
        while w.len() < max_degree {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(l) => *l += 1,
            None => break,
        }
    }
    out.sort();
    out
}

/// Binary bracketing of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketTree {
    Leaf(Letter),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Letter>) {
        match self {
            BracketTree::Leaf(l) => out.push(*l),
            BracketTree::Node(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Image in the free associative algebra (`[u,v] = uv - vu`).
    pub fn expand(&self) -> Lin<LsWord> {
        match self {
            BracketTree::Leaf(l) => Lin::basis(LsWord::letter(*l)),
            BracketTree::Node(a, b) => {
                let (ea, eb) = (a.expand(), b.expand());
                &assoc_mul(&ea, &eb) - &assoc_mul(&eb, &ea)
            }
        }
    }
}

/// Standard bracketing: split at the longest proper Lyndon suffix.
pub fn std_bracketing(w: &LsWord) -> BracketTree {
    std_bracketing_slice(w.letters())
}

fn std_bracketing_slice(w: &[Letter]) -> BracketTree {
    if w.len() == 1 {
        return BracketTree::Leaf(w[0]);
    }
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a single letter is always a Lyndon suffix");
    BracketTree::Node(
        Box::new(std_bracketing_slice(&w[..split])),
        Box::new(std_bracketing_slice(&w[split..])),
    )
}

fn assoc_mul(a: &Lin<LsWord>, b: &Lin<LsWord>) -> Lin<LsWord> {
    let mut out = Lin::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            let mut w = u.0.clone();
            w.extend_from_slice(&v.0);
            out.add_term(cu * cv, LsWord(w));
        }
    }
    out
}

/// Rewrites a Lie polynomial given in the free associative algebra in the
/// Lyndon–Shirshov basis by peeling off minimal words.
fn peel_lie_polynomial(mut f: Lin<LsWord>) -> Lin<LsWord> {
    let mut out = Lin::zero();
    while let Some((w, c)) = f.min_key() {
        let (w, c) = (w.clone(), c.clone());
        debug_assert!(w.is_lyndon(), "minimal word of a Lie polynomial must be Lyndon");
        f.add_scaled(&-c.clone(), &std_bracketing(&w).expand());
        out.add_term(c, w);
    }
    out
}

/// Element of the Lie algebra in its ordered basis.
pub type LieElement = Lin<LsWord>;

/// Formal bracket expression over basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieExpr {
    Atom(LsWord),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Combo(Vec<(Q, LieExpr)>),
}

impl LieExpr {
    pub fn atom(w: LsWord) -> Self {
        LieExpr::Atom(w)
    }

    pub fn bracket(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct StructureTable {
    names: Vec<String>,
    // [e_i, e_j] for i < j; the rest follows by antisymmetry.
    brackets: BTreeMap<(Letter, Letter), Lin<Letter>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum LieKind {
    Free(GeneratorAlphabet),
    Table(StructureTable),
}

/// The coefficient Lie algebra `g` together with its ordered basis `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSpec {
    kind: LieKind,
}

/// `((a, b), [(c, coefficient), ...])` meaning `[a,b] = Σ coefficient·c`.
pub type TableEntry = ((String, String), Vec<(String, Q)>);

impl LieSpec {
    pub fn free(alphabet: GeneratorAlphabet) -> Self {
        Self { kind: LieKind::Free(alphabet) }
    }

    pub fn free_on<S: AsRef<str>>(names: &[S]) -> Result<Self, LieError> {
        Ok(Self::free(GeneratorAlphabet::new(names)?))
    }

    /// Builds a finite-dimensional algebra from `[a,b] = Σ c·e` entries.
    ///
    /// Omitted pairs are zero and `[b,a] = -[a,b]` is implied; a pair given
    /// in both orders must agree. Jacobi is checked on every triple.
    pub fn table<S: AsRef<str>>(
        basis: &[S],
        entries: &[TableEntry],
    ) -> Result<Self, LieError> {
        let names = GeneratorAlphabet::new(basis)?.names;
        let idx = |n: &str| -> Result<Letter, LieError> {
            names
                .iter()
                .position(|m| m == n)
                .map(|i| i as Letter)
                .ok_or_else(|| LieError::Unknown(n.to_owned()))
        };
        let mut given: BTreeMap<(Letter, Letter), Lin<Letter>> = BTreeMap::new();
        for ((a, b), rhs) in entries {
            let (ia, ib) = (idx(a)?, idx(b)?);
            let mut v: Lin<Letter> = Lin::zero();
            for (n, c) in rhs {
                v.add_term(c.clone(), idx(n)?);
            }
            if ia == ib {
                if !v.is_zero() {
                    return Err(LieError::NotAntisymmetric(a.clone(), b.clone()));
                }
                continue;
            }
            let (key, val) = if ia < ib { ((ia, ib), v) } else { ((ib, ia), -&v) };
            if let Some(prev) = given.get(&key) {
                if *prev != val {
                    return Err(LieError::NotAntisymmetric(a.clone(), b.clone()));
                }
            }
            given.insert(key, val);
        }
        given.retain(|_, v| !v.is_zero());
        let spec = Self { kind: LieKind::Table(StructureTable { names, brackets: given }) };
        spec.check_jacobi()?;
        Ok(spec)
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let basis = self.basis_upto(1);
        for a in &basis {
            for b in &basis {
                for c in &basis {
                    let ea = Lin::basis(a.clone());
                    let eb = Lin::basis(b.clone());
                    let ec = Lin::basis(c.clone());
                    let mut j = self.bracket(&ea, &self.bracket(&eb, &ec));
                    j += &self.bracket(&eb, &self.bracket(&ec, &ea));
                    j += &self.bracket(&ec, &self.bracket(&ea, &eb));
                    if !j.is_zero() {
                        return Err(LieError::Jacobi(self.word_name(a), self.word_name(b), self.word_name(c)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, LieKind::Free(_))
    }

    /// Generator names (free mode) or basis names (table mode).
    pub fn letter_names(&self) -> &[String] {
        match &self.kind {
            LieKind::Free(a) => a.names(),
            LieKind::Table(t) => &t.names,
        }
    }

    pub fn letter_index(&self, name: &str) -> Option<Letter> {
        self.letter_names().iter().position(|n| n == name).map(|i| i as Letter)
    }

    /// Degree-one basis elements: the generators, or the whole table basis.
    pub fn generators(&self) -> Vec<LsWord> {
        (0..self.letter_names().len()).map(|i| LsWord::letter(i as Letter)).collect()
    }

    /// Basis elements of degree at most `d`, in basis order.
    pub fn basis_upto(&self, d: usize) -> Vec<LsWord> {
        match &self.kind {
            LieKind::Free(a) => lyndon_words(a.len(), d),
            LieKind::Table(_) if d >= 1 => self.generators(),
            LieKind::Table(_) => Vec::new(),
        }
    }

    pub fn contains(&self, w: &LsWord) -> bool {
        let k = self.letter_names().len();
        if w.letters().iter().any(|&l| l as usize >= k) {
            return false;
        }
        match &self.kind {
            LieKind::Free(_) => w.is_lyndon(),
            LieKind::Table(_) => w.degree() == 1,
        }
    }

    pub fn check_element(&self, u: &LieElement) -> Result<(), LieError> {
        if u.keys().all(|w| self.contains(w)) {
            Ok(())
        } else {
            Err(LieError::Mismatch)
        }
    }

    /// `[a,b]` on basis elements.
    pub fn bracket_basis(&self, a: &LsWord, b: &LsWord) -> LieElement {
        if a == b {
            return Lin::zero();
        }
        match &self.kind {
            LieKind::Free(_) => {
                let (ea, eb) = (std_bracketing(a).expand(), std_bracketing(b).expand());
                peel_lie_polynomial(&assoc_mul(&ea, &eb) - &assoc_mul(&eb, &ea))
            }
            LieKind::Table(t) => {
                let (i, j) = (a.letters()[0], b.letters()[0]);
                let (key, sign) = if i < j { ((i, j), Q::one()) } else { ((j, i), -Q::one()) };
                match t.brackets.get(&key) {
                    Some(v) => v.map_keys(|l| LsWord::letter(*l)).scale(&sign),
                    None => Lin::zero(),
                }
            }
        }
    }

    /// Bilinear extension of [`Self::bracket_basis`].
    pub fn bracket(&self, u: &LieElement, v: &LieElement) -> LieElement {
        let mut out = Lin::zero();
        for (a, ca) in u.iter() {
            for (b, cb) in v.iter() {
                out.add_scaled(&(ca * cb), &self.bracket_basis(a, b));
            }
        }
        out
    }

    /// Checked bracket: both arguments must live in this algebra.
    pub fn try_bracket(&self, u: &LieElement, v: &LieElement) -> Result<LieElement, LieError> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(self.bracket(u, v))
    }

    /// Expands a formal bracket expression in the basis.
    pub fn normal_form(&self, expr: &LieExpr) -> Result<LieElement, LieError> {
        match expr {
            LieExpr::Atom(w) => {
                if self.contains(w) {
                    Ok(Lin::basis(w.clone()))
                } else if self.is_free() && w.letters().iter().all(|&l| (l as usize) < self.letter_names().len()) {
                    Err(LieError::NotLyndon(self.word_name(w)))
                } else {
                    Err(LieError::Mismatch)
                }
            }
            LieExpr::Bracket(a, b) => {
                let (a, b) = (self.normal_form(a)?, self.normal_form(b)?);
                Ok(self.bracket(&a, &b))
            }
            LieExpr::Combo(parts) => {
                let mut out = Lin::zero();
                for (c, e) in parts {
                    out.add_scaled(c, &self.normal_form(e)?);
                }
                Ok(out)
            }
        }
    }

    fn separator(&self) -> &'static str {
        if self.letter_names().iter().all(|n| n.len() == 1) {
            ""
        } else {
            "."
        }
    }

    /// Bare-letter serialization, e.g. `xxy`; multi-character generator
    /// names are joined with `.`.
    pub fn word_name(&self, w: &LsWord) -> String {
        let names = self.letter_names();
        let sep = self.separator();
        let mut s = String::new();
        for (i, &l) in w.letters().iter().enumerate() {
            if i > 0 {
                s.push_str(sep);
            }
            match names.get(l as usize) {
                Some(n) => s.push_str(n),
                None => s.push_str(&format!("#{}", l)),
            }
        }
        s
    }

    /// Inverse of [`Self::word_name`]; the result must be a basis element.
    pub fn parse_word(&self, s: &str) -> Result<LsWord, LieError> {
        let names = self.letter_names();
        let mut letters: Vec<Letter> = Vec::new();
        if let Some(i) = self.letter_index(s) {
            letters.push(i);
        } else if s.contains('.') {
            for part in s.split('.') {
                letters.push(self.letter_index(part).ok_or_else(|| LieError::Unknown(part.to_owned()))?);
            }
        } else if names.iter().all(|n| n.len() == 1) {
            for ch in s.chars() {
                let mut buf = [0u8; 4];
                let part = ch.encode_utf8(&mut buf);
                letters.push(self.letter_index(part).ok_or_else(|| LieError::Unknown(part.to_string()))?);
            }
        } else {
            return Err(LieError::Unknown(s.to_owned()));
        }
        if letters.is_empty() {
            return Err(LieError::Unknown(s.to_owned()));
        }
        let w = LsWord::from_slice(&letters);
        if self.contains(&w) {
            Ok(w)
        } else if self.is_free() {
            Err(LieError::NotLyndon(s.to_owned()))
        } else {
            Err(LieError::Unknown(s.to_owned()))
        }
    }

    /// Nested-brace rendering of a basis element, e.g. `{x,{x,y}}`.
    pub fn bracket_name(&self, w: &LsWord) -> String {
        fn go(spec: &LieSpec, t: &BracketTree, out: &mut String) {
            match t {
                BracketTree::Leaf(l) => out.push_str(&spec.letter_names()[*l as usize]),
                BracketTree::Node(a, b) => {
                    out.push('{');
                    go(spec, a, out);
                    out.push(',');
                    go(spec, b, out);
                    out.push('}');
                }
            }
        }
        let mut s = String::new();
        match &self.kind {
            LieKind::Free(_) => go(self, &std_bracketing(w), &mut s),
            LieKind::Table(_) => s.push_str(&self.word_name(w)),
        }
        s
    }

    /// Number of basis elements of degree exactly `d`.
    pub fn dimension(&self, d: usize) -> u64 {
        match &self.kind {
            LieKind::Free(a) => witt(a.len() as u64, d as u64),
            LieKind::Table(t) if d == 1 => t.names.len() as u64,
            LieKind::Table(_) => 0,
        }
    }

    /// `(i, j, [e_i,e_j])` for each nonzero table entry with `i < j`.
    pub fn table_entries(&self) -> Vec<(LsWord, LsWord, LieElement)> {
        match &self.kind {
            LieKind::Free(_) => Vec::new(),
            LieKind::Table(t) => t
                .brackets
                .iter()
                .map(|(&(i, j), v)| (LsWord::letter(i), LsWord::letter(j), v.map_keys(|l| LsWord::letter(*l))))
                .collect(),
        }
    }
}

/// Witt's formula: dimension of the degree-`d` part of the free Lie
/// algebra on `k` generators.
pub fn witt(k: u64, d: u64) -> u64 {
    if d == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += mobius(e) as i128 * (k as i128).pow((d / e) as u32);
        }
    }
    (total / d as i128) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

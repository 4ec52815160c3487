//! Sparse linear combinations with exact rational coefficients.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used for every coefficient in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A finite formal sum `Σ c_k · k` over an ordered key type.
///
/// Zero coefficients are never stored, so structural equality is
/// equality of vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(Q::one(), key)
    }

    pub fn term(coeff: Q, key: K) -> Self {
        let mut out = Self::zero();
        out.add_term(coeff, key);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, coeff: Q, key: K) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, coeff: &Q, other: &Self) {
        if coeff.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(coeff * c, k.clone());
        }
    }

    pub fn scale(&self, coeff: &Q) -> Self {
        let mut out = Self::zero();
        out.add_scaled(coeff, self);
        out
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (K, Q)> {
        self.terms.into_iter()
    }

    /// Largest key under `K`'s own order.
    pub fn max_key(&self) -> Option<(&K, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn min_key(&self) -> Option<(&K, &Q)> {
        self.terms.iter().next()
    }

    /// Applies a linear map given on basis keys.
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<K2>) -> Lin<K2> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_scaled(c, &f(k));
        }
        out
    }

    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Lin<K2> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_term(c.clone(), f(k));
        }
        out
    }

    /// Divides through by the coefficient of `lead`.
    pub fn monic_by(&self, lead: &K) -> Self {
        let c = self.coeff(lead);
        if c.is_zero() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    pub fn to_vec(&self) -> Vec<(K, Q)> {
        self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
}

impl<K: Ord + Clone> FromIterator<(Q, K)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (Q, K)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (c, k) in iter {
            out.add_term(c, k);
        }
        out
    }
}

impl<K: Ord + Clone> AddAssign<&Lin<K>> for Lin<K> {
    fn add_assign(&mut self, rhs: &Lin<K>) {
        self.add_scaled(&Q::one(), rhs);
    }
}

impl<K: Ord + Clone> SubAssign<&Lin<K>> for Lin<K> {
    fn sub_assign(&mut self, rhs: &Lin<K>) {
        self.add_scaled(&-Q::one(), rhs);
    }
}

impl<K: Ord + Clone> Add<&Lin<K>> for &Lin<K> {
    type Output = Lin<K>;
    fn add(self, rhs: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub<&Lin<K>> for &Lin<K> {
    type Output = Lin<K>;
    fn sub(self, rhs: &Lin<K>) -> Lin<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for &Lin<K> {
    type Output = Lin<K>;
    fn neg(self) -> Lin<K> {
        self.scale(&-Q::one())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*{:?}", c, k)?;
        }
        Ok(())
    }
}

/// Writes `c·body` with sign handling; `first` suppresses a leading `+`.
pub(crate) fn write_coeff(f: &mut dyn fmt::Write, c: &Q, first: bool, body_is_unit: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if !a.is_one() || body_is_unit {
        write!(f, "{}", a)?;
        if !body_is_unit {
            f.write_str(" ")?;
        }
    }
    Ok(())
}

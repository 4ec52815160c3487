//! Normal forms in free Poisson algebras via a Gröbner–Shirshov basis of
//! the conformal module `H ⊗ P(g)` over the universal associative envelope
//! of the current conformal algebra with locality 3.

#![no_std]
extern crate alloc;

pub mod confmod;
pub mod freelie;
pub mod gsb;
pub mod linear;
pub mod opalg;
pub mod pbw;
pub mod poisson;
pub mod rules;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError<T> {
    /// The rewrite budget ran out; carries the input that was being reduced.
    #[error("fuel exhausted before a normal form was reached")]
    FuelExhausted(T),
}

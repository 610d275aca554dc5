//! Core machinery for analysing the spectrum of substitution dynamical systems.
//!
//! The crate is organised around a single pipeline: a [`Substitution`] over a
//! finite alphabet yields an exact integer substitution matrix, a matrix of
//! trigonometric polynomials (the spectral cocycle), and a toral endomorphism.
//! Iterating the cocycle along orbits of the endomorphism gives Lyapunov
//! exponent estimates, which are compared against half the log of the
//! Perron-Frobenius eigenvalue to decide singularity of the spectrum.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats and the CLI live in
//! the companion `subcocycle` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod iet;
pub mod intmatrix;
pub mod lyapunov;
pub mod polynomial;
pub mod roots;
pub mod substitution;
pub mod trig;
pub mod verdict;

pub use error::Error;
pub use intmatrix::IntMatrix;
pub use polynomial::IntPolynomial;
pub use roots::RootSet;
pub use substitution::{Alphabet, Substitution};
pub use trig::{ComplexMatrix, TorusPoint, TrigMatrix, TrigPoly};

pub type Result<T> = core::result::Result<T, Error>;

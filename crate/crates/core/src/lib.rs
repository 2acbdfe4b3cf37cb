//! Symbolic and numeric engine for the universal involutive algebras
//! generated by doubly non-commuting isometries.
//!
//! A signature `(n, l, z)` fixes `n` generators — the first `l` are
//! isometries (`s*s = 1`), the rest unitaries — subject to the twisted
//! commutation relations `s_i s_j = z_ij s_j s_i` and
//! `s_i* s_j = conj(z_ij) s_j s_i*` for `i != j`, with unimodular `z_ij`.
//! Every word in the generators reduces to a unique phase times a normal
//! monomial, which makes the whole algebra exactly computable.
//!
//! The crate provides:
//!
//! - [`phase`]: exact arithmetic with the unimodular half-phases `w_ij`
//!   (`w_ij^2 = z_ij`) and their group ring over Gaussian rationals;
//! - [`algebra`]: words, normal forms, products, adjoints, the torus
//!   grading, the averaging projection `theta`, and signature embeddings;
//! - [`normkit`]: exact C*-norms on the commutative subalgebra spanned by
//!   the range projections `s^e s*^e`;
//! - [`representation`]: the shift representation on truncated tensor
//!   bases, coefficient extraction (injectivity as an algorithm), and
//!   monomial-choice representations;
//! - [`stinespring`]: finite Gram-matrix models of the GNS/Stinespring
//!   space attached to the diagonal expectation;
//! - [`deformation`]: the cocycle-twisted product, the isomorphism with
//!   the twisted algebra, and the explicit diagonal intertwiner;
//! - [`ktheory`]: the K-group ranks as a function of the signature;
//! - [`parse`]: a small expression language for elements;
//! - [`suites`]: the machine-checkable verification suites behind the
//!   `verify` subcommand of the bundled CLI.

pub mod scalar;
pub mod phase;
pub mod algebra;
pub mod normkit;
pub mod representation;
pub mod stinespring;
pub mod deformation;
pub mod ktheory;
pub mod parse;
pub mod suites;

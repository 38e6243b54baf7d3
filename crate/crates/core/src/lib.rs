//! Exact machinery for classifying the nonorientable regular embeddings of
//! the complete bipartite graphs `K_{n,n}`.
//!
//! A regular embedding is described combinatorially by a flag set together
//! with three fixed-point-free involutions (the longitudinal, rotary and
//! transversal flag moves). For `K_{n,n}` every such embedding arises, up to
//! isomorphism, from a normal-form triple of involutory graph automorphisms
//! `(ell, r_delta, t)` determined by a single permutation `delta` of one
//! partite set fixing the root vertex. The crate provides:
//!
//! - [`perm`]: exact permutation arithmetic and breadth-first group closure
//!   with an element cap;
//! - [`numthy`]: the solution count of `x^2 ≡ 2 (mod n)` via Gauss' lemma,
//!   root lifting to prime powers and CRT recombination;
//! - [`flagmap`]: flag systems, validity axioms, orientability, regularity,
//!   map isomorphism and surface invariants;
//! - [`knn`]: the `K_{n,n}` normal form, the `delta_bar` calculus with its
//!   two independent membership routes, the `delta_bar_{n,x}` family and the
//!   modular reduction of members;
//! - [`classify`]: brute-force and constructive enumeration pipelines that
//!   compare both against the closed-form count.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and thread fan-out
//! live in the companion `crosscap` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classify;
pub mod flagmap;
pub mod knn;
pub mod numthy;
pub mod perm;

pub use classify::{ClassifyConfig, EmbeddingRecord, Source, VerificationReport};
pub use flagmap::{FlagMap, MapInvariants};
pub use knn::{DeltaBar, StarVariant, StarWitness, Triple};
pub use perm::{ClosureStatus, GroupClosure, Perm};

//! Exact-arithmetic toolkit for the combinatorics and algebra of
//! Mirkovic-Vilonen cycles in type A.
//!
//! The crate is organised around the objects it computes with:
//!
//! - [`exactalg`]: sparse multivariate polynomials over the rationals in the
//!   unitriangular matrix entries, Laurent polynomials in `t`, and exact
//!   symbolic determinants and division.
//! - [`kostant`]: Kostant pictures (multisets of loops), coweights,
//!   D-statistics, fusion and the partial order it generates.
//! - [`detform`]: line diagrams, the loop overlap graph, allowable paths,
//!   and the masked-determinant construction of MV-polynomials.
//! - [`cluster`]: the cluster algebra structure on `C[N]` - the minor seed,
//!   matrix mutation, and seed enumeration with canonical deduplication.
//! - [`mvbasis`]: a registry of MV-polynomials, triangular expansion in that
//!   basis, and convolution structure constants.
//! - [`lattice`]: the lattice model of the affine Grassmannian at a finite
//!   degree window - classification of t-stable subspaces, the unitriangular
//!   group action, moment maps and point sampling.
//! - [`chi`]: the two functions on a cycle's dense subset - a designated
//!   Laurent coefficient and a projection Jacobian - and the harness that
//!   tests their equality.
//!
//! Every runnable capability has an example under `examples/`; the `mvcycles`
//! binary exposes the same operations as subcommands.

pub mod cluster;
pub mod detform;
pub mod exactalg;
pub mod kostant;
pub mod lattice;
pub mod mvbasis;

pub mod chi;
pub mod cli;
pub mod reproduce;

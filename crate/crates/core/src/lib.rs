//! Exact-arithmetic models of finite and parahoric-level groups of Lie type.
//!
//! The crate provides four layers:
//!
//! * lattice-level torus audits (orders, very-regular counts, Henniart
//!   inequalities) driven by shipped Carter-class data;
//! * concrete jet groups `SL2/GL2(F_q[t]/t^{r+1})` with conjugacy classes,
//!   congruence filtrations, class functions and induction functors;
//! * character tables by the Dixon-Burnside method, with exact cyclotomic
//!   values, pattern ("litmus") searches and imported-table support;
//! * the parahoric Yu construction for 0-toral data on SL2 jets, its Green
//!   functions, and the associated Fourier-transform identity on the jet
//!   Lie algebra.

pub mod cyclotomic;
pub mod error;
pub mod snf;

pub mod roots;
pub mod torus;

pub mod ff;
pub mod jetring;

pub mod classfn;
pub mod group;
pub mod parabolic;

pub mod chartab;
pub mod smallgroup;

pub mod weil;
pub mod yu;

pub mod lie;

pub mod ctbl;
pub mod report;
pub mod counterexample;

pub use error::Error;

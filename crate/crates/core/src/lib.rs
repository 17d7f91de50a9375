//! Exact-arithmetic engine for deciding whether a nonhomogeneous quotient of
//! a tensor algebra is a PBW-deformation of an N-homogeneous algebra, for
//! constructing the deformed A-infinity structure on the Yoneda algebra, for
//! building the deformation families of T(V)/(Λ^N V), and for reproducing the
//! cubic Artin-Schelter deformation coefficient tables by staged symbolic
//! solving.
//!
//! Everything is computed over Q or a cyclotomic field Q(zeta_n); there is no
//! floating point anywhere.

pub mod scalar;
pub mod poly;
pub mod expr;
pub mod solve;
pub mod word;
pub mod subspace;
pub mod linmap;
pub mod exterior;
pub mod freealg;
pub mod pbw;
pub mod yoneda;
pub mod wedgedef;
pub mod artinschelter;
pub mod props;
pub mod io;

pub use poly::{PolyElement, PolyRing};
pub use scalar::{Field, FieldElement};

//! Topological profiles of degenerate plane curves and the landscape graph
//! they span.
//!
//! When the projective plane degenerates to the union of a plane `P` and a
//! Hirzebruch surface `F`, every component of the degenerate moduli space of
//! plane curves of degree `d` and genus `g` (with tangency orders `m` to a
//! fixed line) is labelled by a finite combinatorial object, a *topological
//! profile*: a weighted bipartite multigraph with degree and genus data on
//! its vertices. This crate
//!
//! * models profiles and checks their defining constraints ([`profile`]),
//! * enumerates the small profiles of a context up to isomorphism, applies
//!   the three elementary rewrites and builds the landscape graph
//!   ([`landscape`]),
//! * implements the partition graphs that govern the single-vertex part of
//!   the landscape ([`partition`]),
//! * evaluates the closed-form arithmetic that accompanies the construction
//!   ([`identities`]),
//! * numerically checks an explicit nodal rational curve and a cross-ratio
//!   ([`curve`]),
//! * and bundles all of the above into reproducible verification suites
//!   ([`verify`]).
//!
//! ```
//! use severi_landscape::{landscape, EnumerationContext};
//!
//! let ctx = EnumerationContext::new(4, 1, vec![2, 1, 1]).unwrap();
//! let graph = landscape::build_landscape(&ctx).unwrap();
//! assert_eq!(graph.node_count(), 7);
//! assert!(graph.connectivity().unwrap().connected);
//! ```

pub mod connectivity;
pub mod curve;
pub mod identities;
pub mod landscape;
pub mod partition;
pub mod profile;
pub mod report;
pub mod verify;

pub use profile::{
    CanonicalKey, EnumerationContext, FVertex, LegSymmetry, MultiplicityVector, PVertex,
    TopologicalProfile, WeightedEdge,
};
pub use report::{SuiteReport, ValidationReport};

/// `C(a, 2)`, with the usual convention that it vanishes for `a < 2`.
pub fn choose2(a: i64) -> i64 {
    if a < 2 {
        0
    } else {
        a * (a - 1) / 2
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/landscape.md")]
    mod landscape {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/curve.md")]
    mod curve {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

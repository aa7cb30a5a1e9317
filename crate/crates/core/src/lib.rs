//! Exact symbolic intersection theory for the tautological ring of the
//! Hilbert scheme of points on the projective plane.
//!
//! The engine models classes on Hilb(n), the nested incidence variety, and
//! the products Hilb(n) x S and Hilb(n) x |dH| as exact-rational polynomials
//! in a finite generator catalog. Integration reduces along the incidence
//! variety down to the surface; class vanishing is decided by the Poincare
//! pairing against theta-monomials; an independent torus-localization
//! backend cross-checks the integrals; and a linear-algebra solver decides
//! membership in the xi-kernel filtration of the gamma subring.

pub mod betti;
pub mod bott;
pub mod gamma;
pub mod integrator;
pub mod linalg;
pub mod perversity;
pub mod rat;
pub mod recursion;
pub mod ring;
pub mod spaces;

pub use rat::Q;
pub use ring::{make_context, ClassExpr, Gen, Monomial, RingContext, RingError, SpaceKind};

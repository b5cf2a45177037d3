//! Osculating spaces, secant dimensions and degenerations of Lagrangian
//! Grassmannians and Spinor varieties, computed by exact linear algebra.

pub mod exactlinalg;
pub mod combinat;
pub mod embed;
pub mod osculate;
pub mod secant;
pub mod regularity;

//! Constructions and checks around the Euler-characteristic bound
//! `mu(G) <= 7 - 2 chi(S)` for graphs embedded on a surface `S`.
//!
//! * [`surface_map`]: signed rotation systems, faces, Euler characteristic, surgery.
//! * [`filling`]: isometric fillings of cycles from line arrangements.
//! * [`refine`]: triangulations of `S \ D` with prescribed edgewidth.
//! * [`homotopy`]: contractibility of cycles and edgewidth.
//! * [`spectral`]: Schrodinger operators, exact kernels, eigenvalue checks.
//! * [`nodal`]: zero-set complexes and the Euler characteristic chain.
//! * [`pipeline`]: end-to-end runs and the bound table.

pub mod catalog;
pub mod filling;
pub mod homotopy;
pub mod nodal;
pub mod pipeline;
pub mod refine;
pub mod spectral;
pub mod surface_map;

//! Spherical twists on complexes of projectives over ADE zigzag algebras,
//! word recovery from twisted objects, and mesh calculus for braid monoids.

#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod braid;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod field;
pub mod homalg;
pub mod linalg;
pub mod meshbraid;
pub mod reconstruct;
pub mod twists;
pub mod zigzag;

pub use braid::{equivalent, flatten, layer, left_divisible_by, BraidWord, LayeredWord};
pub use diagram::{DynkinDiagram, Family, Vertex};
pub use error::{Error, Result};
pub use field::{Field, Fp, Rational, F2, F3};
pub use homalg::{cone, profiles_equal, ChainMap, Cone, HomComplex, HomProfile, MorphMatrix, ProjComplex};
pub use linalg::Matrix;
pub use meshbraid::{chi_of_layered, find_left_divisor, to_decorated, DecoratedSet, Move, MoveCertificate, Tau, ZGammaVertex};
pub use reconstruct::{long_morphism_dim, max_degree, min_degree, peel, recover_word, words_equal_via_category, Recovery, SummandWitness};
pub use twists::{twist, twist_inv, twist_of_word, twist_word, two_term_of, two_term_reflect, TwoTermObject, TwoTermShape};
pub use zigzag::{compose, hom_basis, pairing, trace, CompositionTable, MorphBasisElement, MorphElement, MorphKind};

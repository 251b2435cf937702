//! Generalized cellular automata between configuration spaces over finite groups.
//!
//! For a homomorphism `φ: H -> G`, a φ-cellular automaton maps configurations
//! `A^G` to `A^H` by applying one local rule at every cell of `H`, reading the
//! input around `φ(h)`. With `φ = id_G` this is the classical cellular
//! automaton on `G`.
//!
//! ```
//! use phica_core::{Alphabet, Configuration, LocalRule, PhiCA, make_cyclic};
//!
//! let z4 = make_cyclic(4).unwrap();
//! let a = Alphabet::new(2).unwrap();
//! let xor = LocalRule::from_fn(a, vec![1, 3], |p| p[0] ^ p[1]).unwrap();
//! let t = PhiCA::classical(&z4, xor).unwrap();
//! let x = Configuration::parse("1,0,0,0", a).unwrap();
//! assert_eq!(t.apply(&x).unwrap().to_string(), "0,1,0,1");
//! ```

pub mod automaton;
pub mod config;
pub mod covering;
pub mod error;
pub mod group;
pub mod io;
pub mod linear;
pub mod verify;

pub use automaton::{
    apply, check_equivariant, compose, composed_memory, decompose_ca, f_tau, find_memory_set,
    find_memory_set_exhaustive, is_injective, is_memory_set, is_surjective, minimal_memory_sets,
    phi_star, reconstruct_rule, run, LocalRule, MapTable, PhiCA,
};
pub use config::{
    enumerate_configs, restrict, same_on, shift, Alphabet, Configuration, Cylinder, Pattern,
    DEFAULT_BUDGET,
};
pub use covering::{
    build_circulant, cover_report, fold_number, induced_injective_ca, is_covering, is_graph_hom,
    quotient_cover, CirculantGraph, CoverReport, CoveringMap, GraphMap,
};
pub use error::{CoverViolation, Error, Result};
pub use group::{
    decompose_hom, enumerate_homs, image, kernel, make_cyclic, quotient, FiniteGroup, GroupHom,
    NormalSubgroup, Subgroup,
};
pub use linear::{
    dependency_set, is_linear_ca, is_linear_map, is_linear_rule, matrix_form, LinearLocalRule,
    Matrix, VectorAlphabet,
};
pub use verify::{run_suite, Suite, VerifyParams, VerifyReport};

//! The Fock space `𝒱 = ⊕_l T^l ℚ[t₁, t₂, …]` obtained by localizing at `0`.

pub mod additive;
pub mod element;
pub mod gcoef;
pub mod hbasis;
pub mod hpoly;
pub mod local;
pub mod naturality;
pub mod pole_commutator;
pub mod vertex;
pub mod zpoly;

pub use element::{FockElement, TPoly};
pub use local::{localize, localize_scalar, localize_series, unlocalize};
pub use vertex::{
    anticommutator_matrix, anticommutator_matrix_t, b_minus_coeff, b_plus_coeff, bracket_seq, composed_coeffs, fock_e_s, fock_m_z_minus_s,
    vertex_apply, vertex_coeff, FermionPair, Field, Flag, FockSeries, VertexSpec,
};
pub use gcoef::{b_coefficient, g_coefficient, g_window_geometric, x_coefficient, y_operator, Flavor};
pub use additive::{additive_series_check, AdditiveReport};
pub use naturality::{geometric_series, naturality_mismatch, Realized};
pub use pole_commutator::{check_fermion_prediction, pole_data, predicted_bracket, predicted_window, PoleData};
pub use hbasis::{composed_coeffs_h, composed_coeffs_z, from_integral, to_integral, HElem, HEngine};
pub use zpoly::{ZPoly, ZVec};

//! Exact shuffle/Hopf algebra calculus for the polylogarithmic quotient.
//!
//! Everything here works over `Q` (or `Q` adjoined symbolic constants);
//! p-adic numbers only enter through explicit evaluation of the resulting
//! formulas.

pub mod hopf;
pub mod matrix;
pub mod poly;
pub mod shuffle;
pub mod synthesis;

pub use hopf::{db_matrix, half_expansions, reduced_coproduct, DbMatrix, MotPoly, Tensor};
pub use matrix::{group_matrix, li3_word_values, Li3WordValues, NilpotentMatrix, UnipotentMatrix};
pub use poly::{Monomial, Poly, Ring, SymPoly};
pub use shuffle::{shuffle, Letter, ShufflePoly, Word};
pub use synthesis::{
    expand_li3, expand_li3_half, f_coefficients, fphi_matrices, lambda_image, relations, FCoefficients, FTerm,
    FphiMatrix, LambdaImage, Li3Expansion, MotivicValues, Relations, SymbolicConstant,
};

//! Finite-field linear algebra and the square-code distinguisher for alternant and
//! Goppa codes.

mod bitmat;
pub mod code;
pub mod distinguisher;
pub mod error;
pub mod experiment;
pub mod families;
pub mod field;
pub mod fmatrix;
pub mod poly;
pub mod report;
pub mod subfield;
pub mod verify;

pub use code::{random_square_dim, subfield_subcode_of_parity, LinearCode};
pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, FieldDescriptor};
pub use fmatrix::{FMatrix, Rref};
pub use poly::{GoppaFlavor, Poly};
pub use subfield::SubfieldCtx;

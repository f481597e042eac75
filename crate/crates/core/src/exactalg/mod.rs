//! Exact arithmetic over the supported Euclidean domains, Smith normal form,
//! and finitely generated modules with their supports.

pub mod factor;
pub mod matrix;
pub mod module;
pub mod parse;
pub mod poly;
pub mod ring;
pub mod snf;

pub use factor::{factor, radical, PrimePoint};
pub use matrix::Matrix;
pub use module::{module_normal_form, support, FgModule};
pub use parse::parse_element;
pub use poly::FpPoly;
pub use ring::{BaseElem, BaseRing, RingDescriptor, RingElement};
pub use snf::{smith_normal_form, Snf};

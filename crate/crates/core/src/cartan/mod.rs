//! Exterior calculus and the structure-equation route to curvature.

mod form;
mod structure;

pub use form::{Basis, ExteriorForm, FormError};
pub use structure::{cartan_table, connection_forms, curvature_two_forms, extract_rtc, torsion};

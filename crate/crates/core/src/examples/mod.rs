//! The three worked qubit examples with their closed-form solutions.

pub mod a;
pub mod b;
pub mod c;

pub use a::{asymptotic_q, ExampleAParams, Schedule};
pub use b::{example_frame, occupation, qdb_family, qdb_family_bloch, sigma_minus, sigma_plus, ExampleBParams};
pub use c::ExampleCParams;

pub mod catalog;
pub mod curve;
pub mod divisor;
pub mod dsl;
pub mod flat;
pub mod lattice;
pub mod spin;
pub mod strata;
pub mod twist;
pub mod weierstrass;

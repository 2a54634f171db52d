//! Software models of three fixed-point control cores: a parameterized
//! Takagi-Sugeno fuzzy processor, a genetic-algorithm engine, and a fuzzy
//! path tracker for a forward-only car.

pub mod fixedq;
pub mod flc;
pub mod flcref;
pub mod ga;
pub mod problems;
pub mod tracksim;

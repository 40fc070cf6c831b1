//! Simulation and certification toolkit for the hyperplane absolute game and
//! the hyperplane potential game on the plane, with Alice strategies that
//! steer the outcome into the weighted badly approximable set `Bad(s,t)`.

pub mod diophantine;
pub mod game;
pub mod geometry;
pub mod harness;
pub mod scalar;
pub mod strategies;

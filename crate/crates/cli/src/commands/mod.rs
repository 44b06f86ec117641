pub mod condition;
pub mod harmonic;
pub mod noise;
pub mod qpe_compare;
pub mod support;
pub mod tfim;
pub mod timestep;

pub mod audit;
pub mod dataset;
pub mod engine;
pub mod formula;
pub mod norms;
pub mod semantics;

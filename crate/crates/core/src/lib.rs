pub mod cli;
pub mod cone;
pub mod counterexample;
pub mod description;
pub mod error;
pub mod hypotheses;
pub mod linalg;
pub mod maps;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod superadditive;
pub mod verdict;

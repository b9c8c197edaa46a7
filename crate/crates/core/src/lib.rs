pub mod cli;
pub mod error;
pub mod galilean;
pub mod linalg;
pub mod qubits;
pub mod random;
pub mod scattering;
pub mod tps;

//! Small protocols: teleportation, key distribution, Bell statistics,
//! EPR-controlled assembly, amplitude granularity, state complexity and an
//! oscillator-chain spectrum.

pub mod bb84;
pub mod chsh;
pub mod complexity;
pub mod phonons;
pub mod polymer;
pub mod quanta;
pub mod teleport;

pub use bb84::{bb84, bb84_checked, Bb84Report, Verdict, THRESHOLD as BB84_THRESHOLD};
pub use chsh::{
    chsh_classical_max, chsh_exact, chsh_mixture, chsh_sample, chsh_trials, chsh_value, ChshTrial,
    DetectorSetting,
};
pub use complexity::{naive_complexity, quantum_complexity, SCHMIDT_TOL};
pub use phonons::{circulant_frequencies, oscillator_chain_spectrum};
pub use polymer::{
    classical_strategies, glues, polymer_expected, polymer_run, polymer_trials, Control, MonoType,
    PolymerTrial, Strategy,
};
pub use quanta::{
    amplitude_quantization, capacity, equilibrium_check, granular_evolve, granular_grover, quantize_state,
    GrainedState, GranularGrover, Quantization, QuantaGroup, QuantaSet, QuantumType,
};
pub use teleport::{teleport, teleport_branch, Correction};

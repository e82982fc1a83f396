//! Search, Fourier-based period finding and Schrödinger simulation.

pub mod grover;
pub mod qft;
pub mod shor;
pub mod zalka;

pub use grover::{
    diffusion, grover, grover_minimize, grover_state, grover_unknown, oracle_reflection,
    BooleanOracle, GroverReport, Minimum,
};
pub use qft::{bit_reversal, qft, qft_full, qft_inverse, truncation_bound};
pub use shor::{
    convergents, multiplicative_order, phase_distribution, phase_estimate, shor_factor,
    shor_order,
};
pub use zalka::{zalka_wiesner, PotentialGrid};

//! Cavity QED, open-system dynamics and control under always-on couplings.

pub mod cavity;
pub mod cnot;
pub mod cocsign;
pub mod decouple;
pub mod lindblad;

pub use cavity::{
    jc_hamiltonian, rabi_trajectory, tch_hamiltonian, CavityModel, CavityNetwork, Trajectory,
};
pub use cnot::{cnot_from_diagonal, CnotSynthesis};
pub use cocsign::{cocsign_simulate, cocsign_timings, CoCSignReport, Commensuration};
pub use decouple::{periodic_decoupling, randomized_decoupling, DecouplingReport};
pub use lindblad::{lindblad_evolve, LindbladModel, LindbladTrajectory};

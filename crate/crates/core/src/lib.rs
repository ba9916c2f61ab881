//! Ground-state logic: compile boolean functions, CNF formulas and
//! deterministic Turing machines into energy models whose minimum-energy
//! configurations are exactly the valid computations, then read those
//! configurations out by exact enumeration or simulated annealing.

pub mod anneal;
pub mod cnf;
mod compiled;
pub mod complexity;
pub mod dump;
pub mod edl;
pub mod energy;
pub mod error;
pub mod exact;
pub mod gadget;
pub mod model;
pub mod netlist;
pub mod network;
pub mod sqdtm;
pub mod truth;

pub use complexity::ComplexityReport;
pub use energy::Energy;
pub use error::{Error, Result};
pub use exact::{enumerate_ground_states, ground_energy, project, spectrum, GroundStates, SpectrumReport, DEFAULT_CAP};
pub use gadget::{
    check_edc, check_implements, check_implements_all, decompose_to_basis, make_physical, make_physical_and,
    make_physical_or, symmetrize, synthesize_gadget, EdcReport, Gadget, ImplementsReport, Relation,
};
pub use model::{Assignment, EnergyModel, EnergyTerm, Role, VarId, Variable, K_MAX};
pub use netlist::{Gate, GateKind, Netlist, NetlistBuilder};
pub use network::{
    clamp_inputs, compile_netlist, count_elements, make_wire_chain, CompileOptions, Network, PhysicalProfile, Policy,
    WireOptions,
};
pub use truth::TruthFunction;

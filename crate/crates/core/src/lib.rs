//! Multiple-paths multi-hop (MPMH) scheduling for directional 60 GHz WPANs.
//!
//! The crate houses the whole scheduling stack:
//! - [`radio`]: path loss, SINR, and the concurrent-transmission feasibility
//!   test for a pairing of simultaneously active links.
//! - [`network`]: topology, directional links, flows, paths, and the
//!   adjacency relation every scheduler relies on.
//! - [`mpmh`]: the MPMH scheme proper — flow selection, path selection,
//!   proportional traffic distribution, and pairing-based scheduling.
//! - [`milp`]: the exact formulation (P1), its RLT linearization (P2), and a
//!   small branch-and-bound / enumeration solver used as the optimality
//!   oracle on desk-scale instances.
//! - [`baseline`]: the FDMAC and FDMAC-UR comparison schedulers.
//! - [`traffic`]: Poisson and interrupted-Poisson packet arrival generators.
//! - [`sim`]: the frame-based discrete-time engine (poll, schedule, push,
//!   transmit) with delay/throughput accounting and sweep aggregation.
//!
//! Everything is deterministic given its inputs and seeds; the crate is
//! `no_std` + `alloc` so the algorithms stay free of IO concerns (the
//! companion CLI crate carries config files, CSV, and orchestration).

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baseline;
pub mod fixtures;
pub mod milp;
pub mod mpmh;
pub mod network;
pub mod radio;
pub mod sim;
mod simplex;
pub mod traffic;

pub use mpmh::{MpmhParams, Pairing, Schedule, ScheduledHop};
pub use network::{Flow, FlowId, Link, NodeId, Path, PathSet, Point, Topology};
pub use radio::{BeamPolicy, BeamState, RadioModel};

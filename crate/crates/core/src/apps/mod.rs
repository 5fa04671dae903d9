//! Worked applications built from the transforms.

pub mod aoi;
pub mod beamforming;
pub mod ee;
pub mod ncut;
pub mod pilot;
pub mod network;
pub mod power;
pub mod schedule;
pub mod secrecy;
pub mod svm;

pub use network::{
    dbm_to_mw, generate_mimo, generate_network, generate_pilot_instance, generate_uplink, mw_to_dbm, pathloss_db,
    GraphInstance, MimoInstance, NetworkInstance, Pathloss, PilotInstance, Topology, UplinkInstance,
};

//! Fixed instances shared by the benchmarks.

use fracprog::apps::{generate_mimo, generate_network, ncut, pilot, GraphInstance, MimoInstance, NetworkInstance, PilotInstance, Topology};
use fracprog::matrix::CVec;
use fracprog::rng::seeded;

pub fn network(links: usize, seed: u64) -> NetworkInstance {
    generate_network(&Topology { cells: links, ..Topology::default() }, seed).expect("valid topology")
}

pub fn pilot_case(seed: u64) -> (PilotInstance, Vec<CVec>) {
    let inst = pilot::pilot_study_instance(seed).expect("valid pilot instance");
    let init = pilot::orthogonal_pilots(&inst, &mut seeded(seed)).expect("orthogonal pilots");
    (inst, init)
}

pub fn mimo(seed: u64) -> MimoInstance {
    generate_mimo(&Topology { cells: 2, tx_power_dbm: 20.0, ..Topology::default() }, 2, 2, 1, seed).expect("valid mimo instance")
}

pub fn graph(n: usize, seed: u64) -> GraphInstance {
    ncut::planted_graph(n, seed).expect("valid graph")
}

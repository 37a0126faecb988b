//! Fixed-seed models shared by the benchmarks.

use nqscps::cps::{CpsModel, MpsCorrelator};
use nqscps::nqs::{couplings_from_params, NqsModel, RbmParams};
use nqscps::vmc::chain_rng;
use nqscps::zoo::{self, SectorLabel, TorusLattice, DEFAULT_MPS_BOND_CAP};
use nqscps::{ClassicalIsingParams, Config};

pub fn rbm(n: usize, m: usize) -> RbmParams {
    RbmParams::random(n, m, 0.3, &mut chain_rng(n as u64, m))
}

pub fn nqs(n: usize, m: usize) -> NqsModel {
    couplings_from_params(&rbm(n, m))
}

pub fn mps(n: usize, m: usize) -> MpsCorrelator {
    zoo::nqs_to_mps(&nqs(n, m), DEFAULT_MPS_BOND_CAP).expect("bond within cap")
}

pub fn thermal(n: usize) -> CpsModel {
    nqscps::cps::thermal_cps(&ClassicalIsingParams::random(n, 0.5, &mut chain_rng(n as u64, 0))).expect("all pairs coupled")
}

pub fn toric(lx: usize, ly: usize) -> NqsModel {
    let lat = TorusLattice::new(lx, ly).expect("torus at least 2x2");
    zoo::build_toric_code_nqs(&lat, SectorLabel::new(1, 1).expect("valid sector")).expect("toric model")
}

pub fn rvb_2x2() -> NqsModel {
    zoo::build_rvb_deep_nqs(&TorusLattice::new(2, 2).expect("torus")).expect("rvb model")
}

/// Alternating bits, nonzero for every model above except the toric code.
pub fn neel(n: usize) -> Config {
    Config::from_bits((0..n).map(|i| (i % 2) as u8).collect()).expect("binary bits")
}

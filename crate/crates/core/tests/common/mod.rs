//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use qspec_core::dubrovin::{KMatrix, Potential};
use qspec_core::gw::GwTable;
use qspec_core::rings::{parse_rational, Q};
use qspec_core::surfaces::{SurfaceKind, SurfaceModel};
use serde_json::Value;

/// One frozen oracle value: `N_{d, alpha}` on the plane blown up `r` times.
pub struct OracleRow {
    pub r: usize,
    pub d: i64,
    pub alpha: Vec<i64>,
    pub value: Q,
}

/// Values from `tests/data/p2_oracle.py`, a separate brute-force
/// implementation of the recursions, frozen as JSON.
pub fn plane_oracle() -> Vec<OracleRow> {
    let v: Value = serde_json::from_str(include_str!("../data/p2_oracle.json")).expect("oracle fixture parses");
    v["classes"]
        .as_array()
        .expect("classes array")
        .iter()
        .map(|row| OracleRow {
            r: row["r"].as_u64().expect("r") as usize,
            d: row["d"].as_i64().expect("d"),
            alpha: row["alpha"].as_array().expect("alpha").iter().map(|a| a.as_i64().expect("int")).collect(),
            value: parse_rational(row["value"].as_str().expect("value")).expect("rational"),
        })
        .collect()
}

pub fn potential(s: SurfaceModel, cap: i64, order: u32) -> Potential {
    let mut t = GwTable::new(s, cap);
    Potential::new(&mut t, cap, order).expect("potential builds")
}

pub fn kmatrix(s: SurfaceModel, cap: i64, order: u32) -> KMatrix {
    potential(s, cap, order).k_matrix()
}

/// Nef model with hyperbolic pairing and trivial anticanonical class. It
/// has no minimal-model curve contributions, so `K` is triangular.
pub fn nef_hyperbolic(r: usize) -> SurfaceModel {
    SurfaceModel::new(SurfaceKind::NefAnticanonical { pairing: vec![vec![0, 1], vec![1, 0]], c1: vec![0, 0] }, r)
        .expect("nef model")
}

pub fn ruled21(r: usize) -> SurfaceModel {
    SurfaceModel::ruled(2, 1, r).expect("ruled model")
}

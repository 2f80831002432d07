//! Oracles shared by several test targets.
#![allow(dead_code)]

pub mod naive;
pub mod rendezvous;

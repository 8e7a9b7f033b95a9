#![allow(dead_code)]

pub mod brute_matching;
pub mod fock_oracle;

pub mod bench;
pub mod prox_check;
pub mod rho_bound;
pub mod solve;
pub mod toy;

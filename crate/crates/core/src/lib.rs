pub mod circuits;
pub mod cli;
pub mod cospan;
pub mod decoration;
pub mod dynam;
pub mod finset;
pub mod laws;

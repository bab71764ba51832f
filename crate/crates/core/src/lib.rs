pub mod appendix;
pub mod cli;
pub mod floordiag;
pub mod invariants;
pub mod laurent;
pub mod polygon;
pub mod surgery;

pub mod bsgs;
pub mod census;
pub mod error;
pub mod field;
pub mod formulas;
pub mod group;
pub mod lattice;
pub mod perm;
pub mod report;
pub mod tsystems;
pub mod ucover;
pub mod zoo;

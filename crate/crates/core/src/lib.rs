pub mod catalog;
pub mod cyclofield;
pub mod fixgeom;
pub mod groups;
pub mod lattice;
pub mod pencil;
pub mod report;

pub mod compare;
pub mod dump_basis;
pub mod eval;
pub mod oracle;
pub mod train;

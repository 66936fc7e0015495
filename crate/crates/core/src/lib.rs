pub mod decomp;
pub mod dp;
pub mod gen;
pub mod graph;
pub mod kernel;
pub mod oracle;
pub mod pipeline;
pub mod selfcheck;

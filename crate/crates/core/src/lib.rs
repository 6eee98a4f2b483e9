pub mod analysis;
pub mod belief;
pub mod cli;
pub mod constructions;
pub mod development;
pub mod ed;
pub mod error;
pub mod events;
pub mod format;
pub mod inversion;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod prob;
pub mod symbol;
pub mod trajectory;
pub mod validate;

pub mod apiseq;
pub mod corpus;
pub mod desc;
pub mod error;
pub mod eval;
pub mod pipeline;
pub mod pysrc;
pub mod retrieval;
pub mod textproc;

pub use error::{Error, Result};

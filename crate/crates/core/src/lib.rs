pub mod bench;
pub mod error;
pub mod estc;
pub mod grid;
pub mod init;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod pools;
pub mod search;

pub use error::{Error, Result};

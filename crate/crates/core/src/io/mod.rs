pub mod generate;
pub mod instance;
pub mod map;
pub mod report;
pub mod solution;
pub mod svg;

pub use instance::{load_instance, parse_instance, Instance, InstanceFile, ParamOverrides};
pub use solution::SolutionFile;

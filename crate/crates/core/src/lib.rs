pub mod comm;
pub mod fixtures;
pub mod locator;
pub mod model;
pub mod pipeline;
pub mod ranking;
pub mod rpu;
pub mod runtime;

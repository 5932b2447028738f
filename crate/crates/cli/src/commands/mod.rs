pub mod audit;
pub mod compile;
pub mod demo;
pub mod iterate;
pub mod sweep;
pub mod variants;

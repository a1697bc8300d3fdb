pub mod caselang;
pub mod engine;
pub mod rules;
pub mod scenario;
pub mod term;

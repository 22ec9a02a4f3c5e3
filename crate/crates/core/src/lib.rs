pub mod corpus;
pub mod lexicon;
pub mod transforms;
pub mod synthtask;
pub mod model;
pub mod sdro;
pub mod evalsuite;
pub mod experiments;
pub mod cli;

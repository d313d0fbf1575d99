pub mod lexicon;
pub mod text;
pub mod wsdl;
pub mod similarity;
pub mod matcher;
pub mod mapping;
pub mod annotate;

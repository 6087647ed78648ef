//! Separation of distinct βη-normal forms, and the discriminator, left
//! inverse and third-point constructions built on it.

mod chain;
mod corollary;
mod head;
mod lemmas;
mod separate;

pub use chain::{build_chain, expand_pair, Chain, ChainLink};
pub use corollary::{
    discriminate, discriminate_with, left_inverse, third_point, Certificate, Discriminator,
    LeftInverse, ThirdPoint,
};
pub use head::{head_form, similar, HeadForm};
pub use lemmas::{lemma1_separator, lemma2_select, lemma3_retuple, Retupling, TerminalSeparator};
pub use separate::{
    apply_transformation, separate, separate_traced, verify_transformation, BohmTransformation,
    Separation,
};

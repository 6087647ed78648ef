//! Untyped λ-calculus engine with constructive separation of normal forms.
//!
//! Given two distinct βη-normal forms, [`separate`] builds a context
//! (substitutions for free variables plus a list of applied arguments) that
//! sends the first term to a fresh variable `v1` and the second to `v2`. On
//! top of it sit [`discriminate`] (a closed `Δ` with `Δ C1 = X1`,
//! `Δ C2 = X2`), [`left_inverse`] (`Δ ∘ F ∘ ∇ = I`) and [`third_point`].

pub mod boehm;
pub mod combinators;
pub mod error;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod term;
pub mod testgen;

pub use boehm::{
    apply_transformation, build_chain, discriminate, discriminate_with, expand_pair, head_form,
    left_inverse, lemma1_separator, lemma2_select, lemma3_retuple, separate, separate_traced,
    similar, third_point, verify_transformation, BohmTransformation, Certificate, Chain, ChainLink,
    Discriminator, HeadForm, LeftInverse, Retupling, Separation, TerminalSeparator, ThirdPoint,
};
pub use error::BohmError;
pub use parse::{parse, ParseError};
pub use print::print;
pub use reduce::{
    conv_eq, head_normal_form, is_beta_eta_nf, joinable, normalize, step, Budget, ConvVerdict,
    ReductionOutcome,
};
pub use term::{alpha_eq, free_vars, substitute, substitute_all, FreshSupply, Name, Term};
pub use testgen::{random_distinct_pair, random_nf, GenConfig, GenError, Generator};

/// Runs `f`, first moving to a fresh stack segment if the current one is
/// nearly exhausted. Every recursive walk over terms goes through this.
pub(crate) fn grow<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(64 * 1024, 8 * 1024 * 1024, f)
}

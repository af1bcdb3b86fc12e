#![doc = include_str!("../README.md")]

pub mod analysis;
pub mod automaton;
pub mod error;
pub mod monoid;
pub mod words;

pub use analysis::{analyze, AnalyzeOptions, CyclonormalBounds, PropertyReport, DEFAULT_MONOID_CAP};
pub use automaton::{
    CoreTail, InverseAutomaton, LabeledGraph, MultiAutomaton, ProductAutomaton,
    ProductComponent, SubgroupIndex,
};
pub use error::{Error, Result};
pub use monoid::{
    green_classes, group_h_classes, idempotent_poset, reduced_realizable, GreenClasses,
    GroupHClass, IdempotentPoset, PartialInjection, TransitionMonoid,
};
pub use words::{
    free_reduce, Alphabet, EndomorphismSpec, Letter, Nielsen, ReducedWord, Word,
};

pub mod guide;

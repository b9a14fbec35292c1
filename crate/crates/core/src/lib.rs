//! A modeling language for roles, rights and permitted activities, with a
//! forward-chaining reasoner, interval-aware temporal views and a checker
//! that decides whether a process trace realizes a procedure.

pub mod cli;
pub mod error;
pub mod kb_roman;
pub mod ontology;
pub mod procedure;
pub mod rcl;
pub mod reasoner;
pub mod temporal;

pub use error::{Error, Result};
pub use ontology::{Category, EntityId, Fact, FactStore, Interval, Provenance, RelationSig, Time};
pub use procedure::{check_realization, ProcessTrace, Procedure, RealizationReport};
pub use rcl::Model;
pub use reasoner::{compile_rules, infer_closure, permitted_activities, Rule, RulePlan};

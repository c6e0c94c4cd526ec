//! Scripted dialogue generation.
//!
//! A fact base and a roster of personas are compiled into a dialogue in
//! three planning steps over abstract dialogue acts, and only then turned
//! into text:
//!
//! 1. [`distributor`] decides who informs, who asks, and who holds an opinion
//!    about each selected fact.
//! 2. [`sequencer`] expands that into question/answer pairs in a total order.
//! 3. [`strategies`] splices in emphasis subdialogues and stage-marking
//!    metadiscourse, and swaps explicit opinions for evidence.
//!
//! The plan lives in [`scene_ir`] as a set of acts plus a separately stored
//! partial order. [`realizer`] maps the linearized plan to text with
//! user-supplied templates, and [`pipeline`] runs everything end to end.
//!
//! ```
//! use scripted_dialogue::prelude::*;
//!
//! let fb = parse_fact_base(include_str!("../fixtures/showroom/facts.json")).unwrap();
//! let personas = parse_personas(include_str!("../fixtures/showroom/personas.json")).unwrap();
//! let templates = TemplateSet::parse(include_str!("../fixtures/showroom/templates.json")).unwrap();
//!
//! let run = generate(&fb, &personas, &templates, &GenerationConfig::new("car1")).unwrap();
//! assert_eq!(run.transcript().lines().nth(2), Some("B: As much as 180mph?"));
//! ```

pub mod config;
pub mod distributor;
pub mod ids;
pub mod knowledge;
pub mod pipeline;
pub mod realizer;
pub mod scene_ir;
pub mod sequencer;
pub mod strategies;

pub mod prelude {
    pub use crate::config::GenerationConfig;
    pub use crate::distributor::{assign_opinions, distribute, AssignedItem, Assignment, OpinionMode};
    pub use crate::ids::{ActId, EntityId, FactId, PersonaId};
    pub use crate::knowledge::{parse_fact_base, parse_personas, select_content, FactBase, Persona};
    pub use crate::pipeline::{generate, run_pipeline, Generation, PipelineRun};
    pub use crate::realizer::{realize, render_transcript, RealizedScript, TemplateSet};
    pub use crate::scene_ir::{
        parse_scene, serialize_scene, validate_plan, ActType, DialogueAct, InsertionReason, InsertionRecord, Polarity,
        ScenePlan, SemanticContent,
    };
    pub use crate::sequencer::plan_sequence;
    pub use crate::strategies::{apply_association, apply_style_markers, emphasize, emphasize_with_ids, revert};
}

//! End-to-end run: parse, select, distribute, sequence, transform, validate,
//! realize, emit.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use crate::config::GenerationConfig;
use crate::distributor::{assign_opinions, distribute, Assignment, DistributeError};
use crate::ids::EntityId;
use crate::knowledge::{
    parse_fact_base, parse_personas, select_content, ContentSelection, FactBase, KnowledgeError, Persona,
};
use crate::realizer::{realize, render_transcript, RealizeError, RealizedScript, TemplateSet};
use crate::scene_ir::{serialize_scene, validate_plan, InsertionRecord, SceneError, ScenePlan, ValidationReport};
use crate::sequencer::plan_sequence;
use crate::strategies::{apply_association, apply_style_markers, emphasize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    ReadInputs,
    ParseFactBase,
    ParsePersonas,
    ParseTemplates,
    Config,
    SelectContent,
    Distribute,
    AssignOpinions,
    ApplyAssociation,
    PlanSequence,
    Emphasize,
    ApplyStyleMarkers,
    ValidatePlan,
    Realize,
    Emit,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::ReadInputs => "read_inputs",
            Stage::ParseFactBase => "parse_fact_base",
            Stage::ParsePersonas => "parse_personas",
            Stage::ParseTemplates => "parse_templates",
            Stage::Config => "config",
            Stage::SelectContent => "select_content",
            Stage::Distribute => "distribute",
            Stage::AssignOpinions => "assign_opinions",
            Stage::ApplyAssociation => "apply_association",
            Stage::PlanSequence => "plan_sequence",
            Stage::Emphasize => "emphasize",
            Stage::ApplyStyleMarkers => "apply_style_markers",
            Stage::ValidatePlan => "validate_plan",
            Stage::Realize => "realize",
            Stage::Emit => "emit",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error(transparent)]
    Distribute(#[from] DistributeError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("{} plan violation(s)", .0.violations.len())]
    Invalid(ValidationReport),
    #[error(transparent)]
    Realize(#[from] RealizeError),
}

#[derive(Debug, Error)]
#[error("{stage}: {failure}")]
pub struct PipelineError {
    pub stage: Stage,
    pub failure: Failure,
}

impl PipelineError {
    fn at(stage: Stage) -> impl FnOnce(Failure) -> PipelineError {
        move |failure| PipelineError { stage, failure }
    }

    /// 2 for bad input, 3 for a broken plan, 4 for realization failures.
    pub fn exit_code(&self) -> i32 {
        if self.stage == Stage::ParseTemplates {
            return 2;
        }
        match &self.failure {
            Failure::Io { .. } | Failure::Knowledge(_) | Failure::Distribute(_) => 2,
            Failure::Scene(_) | Failure::Invalid(_) => 3,
            Failure::Realize(_) => 4,
        }
    }

    /// One JSON object per line: stage, code, offending id and message.
    pub fn diagnostics(&self) -> Vec<String> {
        let record = |code: &str, id: Option<&str>, message: String| {
            json!({ "stage": self.stage.as_str(), "code": code, "id": id, "message": message }).to_string()
        };
        match &self.failure {
            Failure::Io { path, message } => {
                vec![record("io", Some(&path.display().to_string()), message.clone())]
            }
            Failure::Knowledge(e) => vec![record(e.code(), e.offending_id(), e.to_string())],
            Failure::Distribute(e) => {
                let id = match e {
                    DistributeError::UnknownFact(f) => Some(f.as_str()),
                    DistributeError::TooFewPersonas(_) => None,
                };
                vec![record("distribute", id, e.to_string())]
            }
            Failure::Scene(e) => vec![record("scene", e.offending_id().map(|i| i.as_str()), e.to_string())],
            Failure::Invalid(report) => report
                .violations
                .iter()
                .map(|v| record("plan_violation", Some(v.act().as_str()), v.to_string()))
                .collect(),
            Failure::Realize(e) => vec![record("realize", e.offending_id(), e.to_string())],
        }
    }
}

/// Everything a generation run produced, stage by stage.
#[derive(Clone, Debug)]
pub struct Generation {
    pub selection: ContentSelection,
    pub assignment: Assignment,
    /// The plan as sequenced, before emphasis and style markers.
    pub step_two: ScenePlan,
    pub plan: ScenePlan,
    pub insertions: Vec<InsertionRecord>,
    pub script: RealizedScript,
}

impl Generation {
    pub fn scene_document(&self) -> String {
        serialize_scene(&self.plan)
    }

    pub fn transcript(&self) -> String {
        render_transcript(&self.script)
    }
}

pub fn generate(
    fb: &FactBase,
    personas: &[Persona],
    templates: &TemplateSet,
    cfg: &GenerationConfig,
) -> Result<Generation, PipelineError> {
    cfg.validate().map_err(|e| PipelineError::at(Stage::Config)(e.into()))?;
    let selection = select_content(fb, personas, cfg).map_err(|e| PipelineError::at(Stage::SelectContent)(e.into()))?;
    let assignment =
        distribute(&selection, fb, personas).map_err(|e| PipelineError::at(Stage::Distribute)(e.into()))?;
    let mut assignment = assign_opinions(&assignment, personas, fb, cfg);
    if cfg.enable_association {
        assignment = apply_association(&assignment, fb);
    }
    let step_two =
        plan_sequence(&assignment, personas, cfg).map_err(|e| PipelineError::at(Stage::PlanSequence)(e.into()))?;

    let mut plan = step_two.clone();
    let mut insertions = Vec::new();
    if cfg.enable_emphasis {
        let (next, records) = emphasize(&plan, fb, cfg).map_err(|e| PipelineError::at(Stage::Emphasize)(e.into()))?;
        plan = next;
        insertions.extend(records);
    }
    if cfg.enable_style_markers {
        let (next, records) = apply_style_markers(&plan, personas, fb, cfg)
            .map_err(|e| PipelineError::at(Stage::ApplyStyleMarkers)(e.into()))?;
        plan = next;
        insertions.extend(records);
    }

    let report = validate_plan(&plan);
    if !report.is_empty() {
        return Err(PipelineError::at(Stage::ValidatePlan)(Failure::Invalid(report)));
    }
    let script = realize(&plan, personas, fb, templates).map_err(|e| PipelineError::at(Stage::Realize)(e.into()))?;
    Ok(Generation {
        selection,
        assignment,
        step_two,
        plan,
        insertions,
        script,
    })
}

/// One invocation. An empty `config.target_entity` picks the fact base's
/// only entity.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub config: GenerationConfig,
    pub facts: PathBuf,
    pub personas: PathBuf,
    pub templates: PathBuf,
    pub out_scene: Option<PathBuf>,
    pub out_transcript: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub scene_document: String,
    pub transcript: String,
    pub provenance: Vec<InsertionRecord>,
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError {
        stage: Stage::ReadInputs,
        failure: Failure::Io {
            path: path.to_owned(),
            message: e.to_string(),
        },
    })
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|e| PipelineError {
        stage: Stage::Emit,
        failure: Failure::Io {
            path: path.to_owned(),
            message: e.to_string(),
        },
    })
}

pub fn run_pipeline(run: &PipelineRun) -> Result<PipelineOutput, PipelineError> {
    let facts = read(&run.facts)?;
    let personas = read(&run.personas)?;
    let templates = read(&run.templates)?;

    let fb = parse_fact_base(&facts).map_err(|e| PipelineError::at(Stage::ParseFactBase)(e.into()))?;
    let personas = parse_personas(&personas).map_err(|e| PipelineError::at(Stage::ParsePersonas)(e.into()))?;
    let templates = TemplateSet::parse(&templates).map_err(|e| PipelineError::at(Stage::ParseTemplates)(e.into()))?;

    let mut cfg = run.config.clone();
    if cfg.target_entity.as_str().is_empty() {
        cfg.target_entity = match fb.entities.as_slice() {
            [only] => only.id.clone(),
            _ => {
                return Err(PipelineError::at(Stage::Config)(
                    KnowledgeError::UnknownEntity(EntityId::new("")).into(),
                ))
            }
        };
    }

    let generation = generate(&fb, &personas, &templates, &cfg)?;
    let output = PipelineOutput {
        scene_document: generation.scene_document(),
        transcript: generation.transcript(),
        provenance: generation.insertions,
    };
    if let Some(path) = &run.out_scene {
        write(path, &output.scene_document)?;
    }
    if let Some(path) = &run.out_transcript {
        write(path, &output.transcript)?;
    }
    Ok(output)
}

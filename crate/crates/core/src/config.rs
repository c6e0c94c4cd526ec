use serde::{Deserialize, Serialize};

use crate::ids::EntityId;
use crate::knowledge::{check_unit, KnowledgeError};

/// Knobs for one generation run.
///
/// The defaults reproduce the showroom scene: emphasis subdialogues on,
/// association and style markers on, no greeting or closing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationConfig {
    pub target_entity: EntityId,
    #[serde(default)]
    pub topic_priority: Vec<String>,
    pub emphasis_threshold: f64,
    pub opinion_threshold: f64,
    pub indirectness_threshold: f64,
    pub dominance_threshold: f64,
    pub max_style_markers: usize,
    pub enable_emphasis: bool,
    pub enable_association: bool,
    pub enable_style_markers: bool,
    pub include_greeting: bool,
    pub include_closing: bool,
}

impl GenerationConfig {
    pub fn new(target_entity: impl Into<EntityId>) -> Self {
        Self {
            target_entity: target_entity.into(),
            topic_priority: Vec::new(),
            emphasis_threshold: 0.6,
            opinion_threshold: 0.5,
            indirectness_threshold: 0.7,
            dominance_threshold: 0.7,
            max_style_markers: 1,
            enable_emphasis: true,
            enable_association: true,
            enable_style_markers: true,
            include_greeting: false,
            include_closing: false,
        }
    }

    /// Config with every transform after sequencing switched off.
    pub fn step_two_only(mut self) -> Self {
        self.enable_emphasis = false;
        self.enable_association = false;
        self.enable_style_markers = false;
        self
    }

    pub fn validate(&self) -> Result<(), KnowledgeError> {
        let id = "config";
        check_unit(id, "emphasis_threshold", self.emphasis_threshold)?;
        check_unit(id, "opinion_threshold", self.opinion_threshold)?;
        check_unit(id, "indirectness_threshold", self.indirectness_threshold)?;
        check_unit(id, "dominance_threshold", self.dominance_threshold)?;
        for (i, topic) in self.topic_priority.iter().enumerate() {
            if self.topic_priority[..i].contains(topic) {
                return Err(KnowledgeError::DuplicateId {
                    kind: "topic_priority",
                    id: topic.clone(),
                });
            }
        }
        Ok(())
    }

    /// Sort key for a topic: listed topics by position, the rest after them
    /// by name.
    pub fn topic_key<'a>(&self, topic: &'a str) -> (usize, &'a str) {
        match self.topic_priority.iter().position(|t| t == topic) {
            Some(rank) => (rank, ""),
            None => (self.topic_priority.len(), topic),
        }
    }
}

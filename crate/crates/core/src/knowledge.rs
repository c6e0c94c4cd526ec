//! Fact base and persona roster: parsing, validation and content selection.
//!
//! Both documents are JSON with exactly the field names of the types below.
//! Unknown fields are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::GenerationConfig;
use crate::ids::{EntityId, FactId, PersonaId, RuleId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnowledgeError {
    #[error("malformed {document} document: {message}")]
    Malformed { document: &'static str, message: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("fact `{fact}` references unknown entity `{entity}`")]
    DanglingEntity { fact: FactId, entity: EntityId },
    #[error("fact `{fact}` repeats attribute `{attribute}` of entity `{entity}`")]
    DuplicateAttribute {
        fact: FactId,
        entity: EntityId,
        attribute: String,
    },
    #[error("rule `{rule}` has premise attribute `{attribute}` that no fact carries")]
    DanglingRule { rule: RuleId, attribute: String },
    #[error("`{id}`: {field} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        id: String,
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("persona `{0}` has zero informer and elicitor weight")]
    InactivePersona(PersonaId),
    #[error("unknown target entity `{0}`")]
    UnknownEntity(EntityId),
    #[error("nothing to say about `{0}`: no fact matches a persona interest")]
    EmptySelection(EntityId),
}

impl KnowledgeError {
    /// The id of the item that failed validation, if there is one.
    pub fn offending_id(&self) -> Option<&str> {
        match self {
            KnowledgeError::Malformed { .. } => None,
            KnowledgeError::DuplicateId { id, .. } | KnowledgeError::OutOfRange { id, .. } => Some(id),
            KnowledgeError::DanglingEntity { fact, .. } | KnowledgeError::DuplicateAttribute { fact, .. } => {
                Some(fact.as_str())
            }
            KnowledgeError::DanglingRule { rule, .. } => Some(rule.as_str()),
            KnowledgeError::InactivePersona(id) => Some(id.as_str()),
            KnowledgeError::UnknownEntity(id) | KnowledgeError::EmptySelection(id) => Some(id.as_str()),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            KnowledgeError::Malformed { .. } => "malformed",
            KnowledgeError::DuplicateId { .. } => "duplicate_id",
            KnowledgeError::DanglingEntity { .. } => "dangling_entity",
            KnowledgeError::DuplicateAttribute { .. } => "duplicate_attribute",
            KnowledgeError::DanglingRule { .. } => "dangling_rule",
            KnowledgeError::OutOfRange { .. } => "out_of_range",
            KnowledgeError::InactivePersona(_) => "inactive_persona",
            KnowledgeError::UnknownEntity(_) => "unknown_entity",
            KnowledgeError::EmptySelection(_) => "empty_selection",
        }
    }
}

fn check_range(id: &str, field: &'static str, value: f64, min: f64, max: f64) -> Result<(), KnowledgeError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(KnowledgeError::OutOfRange {
            id: id.to_owned(),
            field,
            value,
            min,
            max,
        })
    }
}

pub(crate) fn check_unit(id: &str, field: &'static str, value: f64) -> Result<(), KnowledgeError> {
    check_range(id, field, value, 0.0, 1.0)
}

fn check_valence(id: &str, field: &'static str, value: f64) -> Result<(), KnowledgeError> {
    check_range(id, field, value, -1.0, 1.0)
}

fn check_unique<'a, I>(kind: &'static str, ids: I) -> Result<(), KnowledgeError>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(KnowledgeError::DuplicateId {
                kind,
                id: id.to_owned(),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub class: String,
}

/// Scalar or string value of a fact attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactValue {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl fmt::Display for FactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactValue::Bool(b) => write!(f, "{b}"),
            FactValue::Number(n) if n.fract() == 0.0 && n.abs() < 1e15 => write!(f, "{}", *n as i64),
            FactValue::Number(n) => write!(f, "{n}"),
            FactValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fact {
    pub id: FactId,
    pub entity: EntityId,
    pub attribute: String,
    pub value: FactValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// Audience-perceived goodness in [-1, +1]; the sign is what matters.
    pub valence: f64,
    /// How strongly the author wants this fact highlighted, in [0, 1].
    pub emphasis: f64,
    pub topic: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Eq,
    Ge,
    Le,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Premise {
    pub attribute: String,
    pub op: Comparison,
    pub threshold: FactValue,
}

impl Premise {
    pub fn holds_for(&self, fact: &Fact) -> bool {
        if fact.attribute != self.attribute {
            return false;
        }
        match (self.op, &fact.value, &self.threshold) {
            (Comparison::Eq, v, t) => v == t,
            (Comparison::Ge, FactValue::Number(v), FactValue::Number(t)) => v >= t,
            (Comparison::Le, FactValue::Number(v), FactValue::Number(t)) => v <= t,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Implication {
    pub property: String,
    pub valence: f64,
}

/// `premise` holding on a fact implies that its entity has `implies.property`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImplicationRule {
    pub id: RuleId,
    pub premise: Premise,
    pub implies: Implication,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactBase {
    pub entities: Vec<Entity>,
    #[serde(default)]
    pub facts: Vec<Fact>,
    #[serde(default)]
    pub implications: Vec<ImplicationRule>,
}

impl FactBase {
    pub fn validate(&self) -> Result<(), KnowledgeError> {
        check_unique("entity", self.entities.iter().map(|e| e.id.as_str()))?;
        check_unique("fact", self.facts.iter().map(|f| f.id.as_str()))?;
        check_unique("rule", self.implications.iter().map(|r| r.id.as_str()))?;

        let mut pairs = BTreeSet::new();
        for fact in &self.facts {
            if self.entity(&fact.entity).is_none() {
                return Err(KnowledgeError::DanglingEntity {
                    fact: fact.id.clone(),
                    entity: fact.entity.clone(),
                });
            }
            check_valence(fact.id.as_str(), "valence", fact.valence)?;
            check_unit(fact.id.as_str(), "emphasis", fact.emphasis)?;
            if !pairs.insert((&fact.entity, &fact.attribute)) {
                return Err(KnowledgeError::DuplicateAttribute {
                    fact: fact.id.clone(),
                    entity: fact.entity.clone(),
                    attribute: fact.attribute.clone(),
                });
            }
        }

        for rule in &self.implications {
            check_valence(rule.id.as_str(), "implies.valence", rule.implies.valence)?;
            if !self.facts.iter().any(|f| f.attribute == rule.premise.attribute) {
                return Err(KnowledgeError::DanglingRule {
                    rule: rule.id.clone(),
                    attribute: rule.premise.attribute.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn entity(&self, id: &EntityId) -> Option<&Entity> {
        self.entities.iter().find(|e| &e.id == id)
    }

    pub fn fact(&self, id: &str) -> Option<&Fact> {
        self.facts.iter().find(|f| f.id.as_str() == id)
    }

    pub fn facts_about<'a>(&'a self, entity: &'a EntityId) -> impl Iterator<Item = &'a Fact> + 'a {
        self.facts.iter().filter(move |f| &f.entity == entity)
    }

    /// Rules whose premise holds for `fact`, in rule-id order.
    pub fn rules_for<'a>(&'a self, fact: &'a Fact) -> impl Iterator<Item = &'a ImplicationRule> + 'a {
        let mut rules: Vec<_> = self.implications.iter().filter(|r| r.premise.holds_for(fact)).collect();
        rules.sort_by(|a, b| a.id.cmp(&b.id));
        rules.into_iter()
    }

    /// Whether some rule implies `property`.
    pub fn is_property(&self, property: &str) -> bool {
        self.implications.iter().any(|r| r.implies.property == property)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Role {
    pub informer_weight: f64,
    pub elicitor_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Traits {
    pub extroversion: f64,
    pub agreeableness: f64,
    pub dominance: f64,
    pub indirectness: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attitude {
    /// An entity id or a property name.
    pub target: String,
    pub valence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Persona {
    pub id: PersonaId,
    pub name: String,
    pub role: Role,
    #[serde(default)]
    pub interests: BTreeMap<String, f64>,
    pub traits: Traits,
    #[serde(default)]
    pub attitudes: Vec<Attitude>,
}

impl Persona {
    pub fn validate(&self) -> Result<(), KnowledgeError> {
        let id = self.id.as_str();
        check_unit(id, "role.informer_weight", self.role.informer_weight)?;
        check_unit(id, "role.elicitor_weight", self.role.elicitor_weight)?;
        if self.role.informer_weight + self.role.elicitor_weight <= 0.0 {
            return Err(KnowledgeError::InactivePersona(self.id.clone()));
        }
        for weight in self.interests.values() {
            check_unit(id, "interests", *weight)?;
        }
        check_unit(id, "traits.extroversion", self.traits.extroversion)?;
        check_unit(id, "traits.agreeableness", self.traits.agreeableness)?;
        check_unit(id, "traits.dominance", self.traits.dominance)?;
        check_unit(id, "traits.indirectness", self.traits.indirectness)?;
        for attitude in &self.attitudes {
            check_valence(id, "attitudes.valence", attitude.valence)?;
        }
        Ok(())
    }

    pub fn interest(&self, topic: &str) -> f64 {
        self.interests.get(topic).copied().unwrap_or(0.0)
    }

    pub fn attitude_toward(&self, target: &str) -> Option<f64> {
        self.attitudes.iter().find(|a| a.target == target).map(|a| a.valence)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PersonaDocument {
    personas: Vec<Persona>,
}

pub fn parse_fact_base(doc: &str) -> Result<FactBase, KnowledgeError> {
    let fb: FactBase = serde_json::from_str(doc).map_err(|e| KnowledgeError::Malformed {
        document: "fact base",
        message: e.to_string(),
    })?;
    fb.validate()?;
    Ok(fb)
}

pub fn serialize_fact_base(fb: &FactBase) -> String {
    let mut out = serde_json::to_string_pretty(fb).expect("fact base serializes");
    out.push('\n');
    out
}

/// Parses a `{"personas": [...]}` document. An empty list is accepted here;
/// the distributor rejects rosters with fewer than two personas.
pub fn parse_personas(doc: &str) -> Result<Vec<Persona>, KnowledgeError> {
    let parsed: PersonaDocument = serde_json::from_str(doc).map_err(|e| KnowledgeError::Malformed {
        document: "persona",
        message: e.to_string(),
    })?;
    check_unique("persona", parsed.personas.iter().map(|p| p.id.as_str()))?;
    for persona in &parsed.personas {
        persona.validate()?;
    }
    Ok(parsed.personas)
}

pub fn serialize_personas(personas: &[Persona]) -> String {
    let doc = PersonaDocument {
        personas: personas.to_vec(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("personas serialize");
    out.push('\n');
    out
}

/// Facts about the target entity that at least one persona cares about.
#[derive(Clone, Debug, PartialEq)]
pub struct ContentSelection {
    pub entity: EntityId,
    pub facts: Vec<FactId>,
}

impl ContentSelection {
    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

/// Picks the target entity's facts whose topic some persona is interested
/// in, ordered by topic priority and then fact id.
pub fn select_content(
    fb: &FactBase,
    personas: &[Persona],
    cfg: &GenerationConfig,
) -> Result<ContentSelection, KnowledgeError> {
    let target = &cfg.target_entity;
    if fb.entity(target).is_none() {
        return Err(KnowledgeError::UnknownEntity(target.clone()));
    }
    let mut chosen: Vec<&Fact> = fb
        .facts_about(target)
        .filter(|f| personas.iter().any(|p| p.interest(&f.topic) > 0.0))
        .collect();
    if chosen.is_empty() {
        return Err(KnowledgeError::EmptySelection(target.clone()));
    }
    chosen.sort_by(|a, b| {
        cfg.topic_key(&a.topic)
            .cmp(&cfg.topic_key(&b.topic))
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(ContentSelection {
        entity: target.clone(),
        facts: chosen.into_iter().map(|f| f.id.clone()).collect(),
    })
}

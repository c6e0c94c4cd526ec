//! Surface realization. Runs only on a finished plan and never changes it.
//!
//! Templates are keyed `type.polarity[.follows_subdialogue][@qualifier]`. The
//! optional qualifier narrows a template to acts about one fact attribute or
//! with one expressed emotion label. Lookup goes from most to least specific:
//! the context flag beats the qualifier, and both fall back to the bare key.
//!
//! An act carries the `follows_subdialogue` flag when it reacts to an act of
//! an emphasis subdialogue, or comes right after the last act of one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{ActId, PersonaId};
use crate::knowledge::{Fact, FactBase, Persona};
use crate::scene_ir::{
    validate_plan, ActType, DialogueAct, InsertionReason, Polarity, SceneError, ScenePlan, Violation, MARKERS,
};

pub const FOLLOWS_SUBDIALOGUE: &str = "follows_subdialogue";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("malformed template file: {0}")]
    Malformed(String),
    #[error("bad template key `{0}`")]
    BadKey(String),
    #[error("template `{key}` has an unclosed placeholder")]
    UnclosedPlaceholder { key: String },
    #[error("template `{key}` uses unknown placeholder `{{{placeholder}}}`")]
    UnknownPlaceholder { key: String, placeholder: String },
    #[error("no template for `{key}` (act `{act}`)")]
    MissingTemplate { act: ActId, key: String },
    #[error("act `{act}`: placeholder `{{{placeholder}}}` cannot be filled")]
    UnresolvedPlaceholder { act: ActId, placeholder: String },
    #[error("act `{act}`: proposition `{proposition}` is neither a fact, a property nor a marker")]
    UnresolvedProposition { act: ActId, proposition: String },
    #[error("act `{act}`: unknown persona `{persona}`")]
    UnknownPersona { act: ActId, persona: PersonaId },
    #[error("plan is not realizable: {0:?}")]
    InvalidPlan(Vec<Violation>),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

impl RealizeError {
    pub fn offending_id(&self) -> Option<&str> {
        match self {
            RealizeError::MissingTemplate { act, .. }
            | RealizeError::UnresolvedPlaceholder { act, .. }
            | RealizeError::UnresolvedProposition { act, .. }
            | RealizeError::UnknownPersona { act, .. } => Some(act.as_str()),
            RealizeError::BadKey(key)
            | RealizeError::UnclosedPlaceholder { key }
            | RealizeError::UnknownPlaceholder { key, .. } => Some(key),
            RealizeError::InvalidPlan(v) => v.first().map(|v| v.act().as_str()),
            RealizeError::Scene(e) => e.offending_id().map(|id| id.as_str()),
            RealizeError::Malformed(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct TemplateKey {
    act_type: ActType,
    polarity: Polarity,
    follows_subdialogue: bool,
    qualifier: Option<String>,
}

impl TemplateKey {
    fn parse(raw: &str) -> Option<Self> {
        let (base, qualifier) = match raw.split_once('@') {
            Some((base, q)) if !q.is_empty() => (base, Some(q.to_owned())),
            Some(_) => return None,
            None => (raw, None),
        };
        let mut parts = base.split('.');
        let (type_name, polarity_name) = (parts.next()?, parts.next()?);
        let act_type = ActType::ALL.into_iter().find(|t| t.as_str() == type_name)?;
        let polarity = Polarity::ALL.into_iter().find(|p| p.as_str() == polarity_name)?;
        let follows_subdialogue = match parts.next() {
            None => false,
            Some(FOLLOWS_SUBDIALOGUE) => true,
            Some(_) => return None,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(Self {
            act_type,
            polarity,
            follows_subdialogue,
            qualifier,
        })
    }
}

fn base_key(act_type: ActType, polarity: Polarity) -> String {
    format!("{act_type}.{polarity}")
}

/// Placeholder names a template may use.
pub const PLACEHOLDERS: [&str; 6] = ["speaker", "entity", "attribute", "value", "unit", "property"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TemplateSet {
    raw: BTreeMap<String, String>,
    entries: BTreeMap<TemplateKey, String>,
}

impl TemplateSet {
    pub fn from_entries<I, K, V>(entries: I) -> Result<Self, RealizeError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut set = TemplateSet::default();
        for (k, v) in entries {
            let (k, v) = (k.into(), v.into());
            let key = TemplateKey::parse(&k).ok_or_else(|| RealizeError::BadKey(k.clone()))?;
            let names = placeholders(&v).ok_or_else(|| RealizeError::UnclosedPlaceholder { key: k.clone() })?;
            if let Some(name) = names.iter().find(|n| !PLACEHOLDERS.contains(n)) {
                return Err(RealizeError::UnknownPlaceholder {
                    key: k,
                    placeholder: name.to_string(),
                });
            }
            set.entries.insert(key, v.clone());
            set.raw.insert(k, v);
        }
        Ok(set)
    }

    /// Reads a flat JSON object of key to template string.
    pub fn parse(doc: &str) -> Result<Self, RealizeError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(doc).map_err(|e| RealizeError::Malformed(e.to_string()))?;
        Self::from_entries(raw)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.raw).expect("templates serialize");
        out.push('\n');
        out
    }

    fn lookup(&self, act_type: ActType, polarity: Polarity, flagged: bool, qualifiers: &[&str]) -> Option<&str> {
        let flags: &[bool] = if flagged { &[true, false] } else { &[false] };
        for &follows_subdialogue in flags {
            let quals = qualifiers.iter().map(|q| Some(q.to_string())).chain([None]);
            for qualifier in quals {
                let key = TemplateKey {
                    act_type,
                    polarity,
                    follows_subdialogue,
                    qualifier,
                };
                if let Some(t) = self.entries.get(&key) {
                    return Some(t);
                }
            }
        }
        None
    }

    /// Keys of acts in `plan` that have no default template.
    pub fn missing_for(&self, plan: &ScenePlan) -> Vec<String> {
        let needed: BTreeSet<(ActType, Polarity)> =
            plan.acts.values().map(|a| (a.act_type, a.content.polarity)).collect();
        needed
            .into_iter()
            .filter(|(t, p)| {
                !self
                    .entries
                    .keys()
                    .any(|k| k.act_type == *t && k.polarity == *p && !k.follows_subdialogue && k.qualifier.is_none())
            })
            .map(|(t, p)| base_key(t, p))
            .collect()
    }
}

/// Placeholder names in order of appearance, or `None` if a brace is left open.
fn placeholders(template: &str) -> Option<Vec<&str>> {
    let mut names = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        let close = after.find('}')?;
        names.push(&after[..close]);
        rest = &after[close + 1..];
    }
    Some(names)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub act: ActId,
    pub speaker: String,
    pub text: String,
}

/// Surface strings in linear order, together with the plan they realize.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedScript {
    pub entries: Vec<ScriptEntry>,
    pub source_plan: ScenePlan,
}

/// Acts whose realization depends on a preceding emphasis subdialogue.
pub fn context_flags(plan: &ScenePlan, order: &[ActId]) -> BTreeSet<ActId> {
    let emphasis = plan.provenance.iter().filter(|r| r.reason == InsertionReason::Emphasis);
    let inserted: BTreeSet<&ActId> = emphasis.clone().flat_map(|r| &r.inserted).collect();
    let closers: BTreeSet<&ActId> = emphasis.filter_map(|r| r.inserted.last()).collect();

    let mut flagged = BTreeSet::new();
    for (pos, id) in order.iter().enumerate() {
        let act = &plan.acts[id];
        let reacts = act.reacts_to.iter().any(|r| inserted.contains(r));
        let after_close = pos > 0 && closers.contains(&order[pos - 1]) && !inserted.contains(id);
        if reacts || after_close {
            flagged.insert(id.clone());
        }
    }
    flagged
}

fn humanize(attribute: &str) -> String {
    attribute.replace('_', " ")
}

struct Slots<'a> {
    speaker: &'a str,
    fact: Option<&'a Fact>,
    entity: Option<&'a str>,
    property: Option<&'a str>,
}

impl Slots<'_> {
    fn get(&self, name: &str) -> Option<String> {
        match name {
            "speaker" => Some(self.speaker.to_owned()),
            "entity" => self.entity.map(str::to_owned),
            "attribute" => self.fact.map(|f| humanize(&f.attribute)),
            "value" => self.fact.map(|f| f.value.to_string()),
            "unit" => self.fact.map(|f| f.unit.clone().unwrap_or_default()),
            "property" => self.property.map(humanize),
            _ => None,
        }
    }
}

fn fill(act: &DialogueAct, template: &str, slots: &Slots<'_>) -> Result<String, RealizeError> {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after.find('}').expect("templates are checked on load");
        let name = &after[..close];
        let value = slots.get(name).ok_or_else(|| RealizeError::UnresolvedPlaceholder {
            act: act.id.clone(),
            placeholder: name.to_owned(),
        })?;
        out.push_str(&value);
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

pub fn realize(
    plan: &ScenePlan,
    personas: &[Persona],
    fb: &FactBase,
    templates: &TemplateSet,
) -> Result<RealizedScript, RealizeError> {
    let report = validate_plan(plan);
    if !report.is_empty() {
        return Err(RealizeError::InvalidPlan(report.violations));
    }
    let order = plan.linearize()?;
    let flagged = context_flags(plan, &order);

    let mut entries = Vec::with_capacity(order.len());
    for id in &order {
        let act = &plan.acts[id];
        let speaker = personas
            .iter()
            .find(|p| p.id == act.speaker)
            .ok_or_else(|| RealizeError::UnknownPersona {
                act: id.clone(),
                persona: act.speaker.clone(),
            })?;

        let proposition = act.content.proposition.as_str();
        let fact = fb.fact(proposition);
        let property = match fact {
            Some(f) => fb.rules_for(f).next().map(|r| r.implies.property.as_str()),
            None if fb.is_property(proposition) => Some(proposition),
            None if MARKERS.contains(&proposition) => None,
            None => {
                return Err(RealizeError::UnresolvedProposition {
                    act: id.clone(),
                    proposition: proposition.to_owned(),
                })
            }
        };
        let slots = Slots {
            speaker: &speaker.name,
            fact,
            entity: fact.and_then(|f| fb.entity(&f.entity)).map(|e| e.name.as_str()),
            property,
        };

        let mut qualifiers: Vec<&str> = Vec::new();
        if let Some(f) = fact {
            qualifiers.push(&f.attribute);
        } else if property.is_some() || MARKERS.contains(&proposition) {
            qualifiers.push(proposition);
        }
        qualifiers.push(act.emotion.expressed.label.as_str());

        let template = templates
            .lookup(act.act_type, act.content.polarity, flagged.contains(id), &qualifiers)
            .ok_or_else(|| RealizeError::MissingTemplate {
                act: id.clone(),
                key: base_key(act.act_type, act.content.polarity),
            })?;
        entries.push(ScriptEntry {
            act: id.clone(),
            speaker: speaker.name.clone(),
            text: fill(act, template, &slots)?,
        });
    }
    Ok(RealizedScript {
        entries,
        source_plan: plan.clone(),
    })
}

/// One `speaker: text` line per entry.
pub fn render_transcript(script: &RealizedScript) -> String {
    script
        .entries
        .iter()
        .map(|e| format!("{}: {}\n", e.speaker, e.text))
        .collect()
}

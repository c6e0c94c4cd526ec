//! Step I: who says what.
//!
//! Every selected fact gets an informer and an elicitor, and facts the
//! audience should feel strongly about get an opinion slot held by the
//! participant who did not raise them.

use thiserror::Error;

use crate::config::GenerationConfig;
use crate::ids::{FactId, PersonaId};
use crate::knowledge::{ContentSelection, Fact, FactBase, Persona};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributeError {
    #[error("a dialogue needs at least two personas, got {0}")]
    TooFewPersonas(usize),
    #[error("selected fact `{0}` is not in the fact base")]
    UnknownFact(FactId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpinionMode {
    Explicit,
    /// Conveyed by presenting a related fact rather than an evaluation.
    Implicit,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssignedItem {
    pub fact: FactId,
    pub topic: String,
    /// Valence of the fact itself.
    pub valence: f64,
    pub informer: PersonaId,
    pub elicitor: PersonaId,
    pub opinion_holder: Option<PersonaId>,
    pub opinion_mode: OpinionMode,
    /// Valence of the holder's opinion; zero while no opinion is assigned.
    pub opinion_valence: f64,
    /// Fact presented in place of an explicit evaluation.
    pub evidence: Option<FactId>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    pub items: Vec<AssignedItem>,
}

impl Assignment {
    pub fn fact_ids(&self) -> impl Iterator<Item = &FactId> {
        self.items.iter().map(|i| &i.fact)
    }
}

/// Highest score wins; `personas` must be in ascending id order so that the
/// first maximum is the tie-break winner.
fn argmax<'a>(personas: &[&'a Persona], score: impl Fn(&Persona) -> f64) -> &'a Persona {
    let mut best = personas[0];
    let mut best_score = score(best);
    for p in &personas[1..] {
        let s = score(p);
        if s > best_score {
            best = p;
            best_score = s;
        }
    }
    best
}

pub fn distribute(
    selection: &ContentSelection,
    fb: &FactBase,
    personas: &[Persona],
) -> Result<Assignment, DistributeError> {
    if personas.len() < 2 {
        return Err(DistributeError::TooFewPersonas(personas.len()));
    }
    let mut roster: Vec<&Persona> = personas.iter().collect();
    roster.sort_by(|a, b| a.id.cmp(&b.id));

    let mut items = Vec::with_capacity(selection.facts.len());
    for fact_id in &selection.facts {
        let fact = fb
            .fact(fact_id.as_str())
            .ok_or_else(|| DistributeError::UnknownFact(fact_id.clone()))?;
        let informer = argmax(&roster, |p| p.role.informer_weight * (1.0 + p.interest(&fact.topic)));
        let rest: Vec<&Persona> = roster.iter().copied().filter(|p| p.id != informer.id).collect();
        let elicitor = argmax(&rest, |p| p.role.elicitor_weight * (1.0 + p.interest(&fact.topic)));
        items.push(AssignedItem {
            fact: fact.id.clone(),
            topic: fact.topic.clone(),
            valence: fact.valence,
            informer: informer.id.clone(),
            elicitor: elicitor.id.clone(),
            opinion_holder: None,
            opinion_mode: OpinionMode::None,
            opinion_valence: 0.0,
            evidence: None,
        });
    }
    Ok(Assignment { items })
}

pub(crate) fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Lowest-id other fact about the same entity that some rule turns into a
/// property whose valence has the given sign.
pub fn find_evidence<'a>(fb: &'a FactBase, fact: &Fact, opinion_sign: i8) -> Option<&'a Fact> {
    let mut candidates: Vec<&Fact> = fb
        .facts
        .iter()
        .filter(|f| f.entity == fact.entity && f.id != fact.id)
        .filter(|f| fb.rules_for(f).any(|r| sign(r.implies.valence) == opinion_sign))
        .collect();
    candidates.sort_by(|a, b| a.id.cmp(&b.id));
    candidates.into_iter().next()
}

/// Fills in opinion slots.
///
/// The holder's own attitude toward the entity, if any, sets the opinion's
/// valence; otherwise the fact's valence does. Personas may disagree with
/// each other and with the audience.
pub fn assign_opinions(
    assignment: &Assignment,
    personas: &[Persona],
    fb: &FactBase,
    cfg: &GenerationConfig,
) -> Assignment {
    let items = assignment
        .items
        .iter()
        .map(|item| {
            let mut item = item.clone();
            item.opinion_holder = None;
            item.opinion_mode = OpinionMode::None;
            item.opinion_valence = 0.0;
            item.evidence = None;
            let Some(fact) = fb.fact(item.fact.as_str()) else {
                return item;
            };
            if fact.valence.abs() < cfg.opinion_threshold {
                return item;
            }
            let holder = personas.iter().find(|p| p.id == item.elicitor);
            let valence = holder
                .and_then(|p| p.attitude_toward(fact.entity.as_str()))
                .unwrap_or(fact.valence);
            let indirect = holder.is_some_and(|p| p.traits.indirectness >= cfg.indirectness_threshold);
            item.opinion_mode = if indirect && find_evidence(fb, fact, sign(valence)).is_some() {
                OpinionMode::Implicit
            } else {
                OpinionMode::Explicit
            };
            item.opinion_holder = Some(item.elicitor.clone());
            item.opinion_valence = valence;
            item
        })
        .collect();
    Assignment { items }
}

//! Plan transforms applied around Step II.
//!
//! [`apply_association`] rewrites the assignment before sequencing;
//! [`emphasize`] (Step III) and [`apply_style_markers`] splice extra acts into
//! a sequenced plan and report what they added as [`InsertionRecord`]s, which
//! are also appended to the plan's provenance.

use crate::config::GenerationConfig;
use crate::distributor::{find_evidence, sign, Assignment, OpinionMode};
use crate::ids::{ActId, PersonaId};
use crate::knowledge::{FactBase, Persona};
use crate::scene_ir::{ActType, DialogueAct, NumberedIds, Polarity, SceneError, ScenePlan, SemanticContent};

pub use crate::scene_ir::{InsertionReason, InsertionRecord};

/// Prefix of ids given to inserted acts.
pub const INSERTED_PREFIX: &str = "y";

/// Replaces implicit opinions with evidence: a related fact whose implied
/// property carries the opinion's sign. Items without such a fact fall back
/// to an explicit evaluation.
pub fn apply_association(assignment: &Assignment, fb: &FactBase) -> Assignment {
    let items = assignment
        .items
        .iter()
        .map(|item| {
            let mut item = item.clone();
            if item.opinion_mode != OpinionMode::Implicit {
                return item;
            }
            let evidence = fb
                .fact(item.fact.as_str())
                .and_then(|fact| find_evidence(fb, fact, sign(item.opinion_valence)));
            match evidence {
                Some(fact) => item.evidence = Some(fact.id.clone()),
                None => {
                    item.opinion_mode = OpinionMode::Explicit;
                    item.evidence = None;
                }
            }
            item
        })
        .collect();
    Assignment { items }
}

/// Step III with `y1, y2, ...` ids continuing after any already present.
pub fn emphasize(
    plan: &ScenePlan,
    fb: &FactBase,
    cfg: &GenerationConfig,
) -> Result<(ScenePlan, Vec<InsertionRecord>), SceneError> {
    let mut ids = NumberedIds::continuing(plan, INSERTED_PREFIX);
    emphasize_with_ids(plan, fb, cfg, &mut ids)
}

/// After every inform act whose fact is emphasized enough, splice in an echo
/// question from the addressee and a confirmation from the informer.
///
/// Each inform act gets at most one subdialogue, and the inserted acts are
/// never anchors themselves.
pub fn emphasize_with_ids(
    plan: &ScenePlan,
    fb: &FactBase,
    cfg: &GenerationConfig,
    ids: &mut dyn Iterator<Item = ActId>,
) -> Result<(ScenePlan, Vec<InsertionRecord>), SceneError> {
    let mut out = plan.clone();
    let mut records = Vec::new();
    if !cfg.enable_emphasis {
        return Ok((out, records));
    }
    for id in plan.linearize()? {
        let inform = &plan.acts[&id];
        if inform.act_type != ActType::Inform {
            continue;
        }
        let Some(fact) = fb.fact(&inform.content.proposition) else {
            continue;
        };
        if fact.emphasis < cfg.emphasis_threshold {
            continue;
        }
        let echoed = plan
            .acts
            .values()
            .any(|a| a.act_type == ActType::EchoQuestion && a.reacts_to.contains(&id));
        if echoed {
            continue;
        }
        let Some(asker) = inform.addressees.first().cloned() else {
            continue;
        };
        let proposition = inform.content.proposition.clone();
        let echo = DialogueAct::new(
            ids.next().expect("id source exhausted"),
            ActType::EchoQuestion,
            asker.clone(),
            [inform.speaker.clone()],
            SemanticContent::new(proposition.clone(), Polarity::ReQuery),
        )
        .with_emotion(inform.emotion);
        let confirm = DialogueAct::new(
            ids.next().expect("id source exhausted"),
            ActType::Confirm,
            inform.speaker.clone(),
            [asker],
            SemanticContent::new(proposition, Polarity::Agree),
        )
        .reacting_to(echo.id.clone())
        .with_emotion(inform.emotion);
        let record = InsertionRecord {
            anchor: id.clone(),
            inserted: vec![echo.id.clone(), confirm.id.clone()],
            reason: InsertionReason::Emphasis,
        };
        out.splice(&id, vec![echo, confirm])?;
        out.provenance.push(record.clone());
        records.push(record);
    }
    Ok((out, records))
}

fn question_topic<'a>(act: &DialogueAct, fb: &'a FactBase) -> Option<&'a str> {
    if act.act_type != ActType::Question {
        return None;
    }
    fb.fact(&act.content.proposition).map(|f| f.topic.as_str())
}

/// Most dominant participant at or above the threshold, lowest id on ties.
fn dominant_speaker<'a>(plan: &ScenePlan, personas: &'a [Persona], threshold: f64) -> Option<&'a Persona> {
    let mut best: Option<&Persona> = None;
    for p in personas {
        if !plan.participants.contains(&p.id) || p.traits.dominance < threshold {
            continue;
        }
        best = match best {
            Some(b) if b.traits.dominance > p.traits.dominance => Some(b),
            Some(b) if b.traits.dominance == p.traits.dominance && b.id < p.id => Some(b),
            _ => Some(p),
        };
    }
    best
}

/// Stage-marking metadiscourse from a dominant participant at topic
/// boundaries, at most `cfg.max_style_markers` in the whole plan.
///
/// A boundary is a question whose topic differs from the previous
/// question's; the marker goes right before it.
pub fn apply_style_markers(
    plan: &ScenePlan,
    personas: &[Persona],
    fb: &FactBase,
    cfg: &GenerationConfig,
) -> Result<(ScenePlan, Vec<InsertionRecord>), SceneError> {
    let mut out = plan.clone();
    let mut records = Vec::new();
    if !cfg.enable_style_markers {
        return Ok((out, records));
    }
    let Some(speaker) = dominant_speaker(plan, personas, cfg.dominance_threshold) else {
        return Ok((out, records));
    };
    let addressees: Vec<PersonaId> = plan
        .participants
        .iter()
        .filter(|p| **p != speaker.id)
        .cloned()
        .collect();
    if addressees.is_empty() {
        return Ok((out, records));
    }
    let existing = plan
        .acts
        .values()
        .filter(|a| a.act_type == ActType::Metadiscourse)
        .count();
    let mut budget = cfg.max_style_markers.saturating_sub(existing);

    let order = plan.linearize()?;
    let mut anchors = Vec::new();
    let mut topic: Option<&str> = None;
    let mut marked = false;
    for (pos, id) in order.iter().enumerate() {
        let act = &plan.acts[id];
        if act.act_type == ActType::Metadiscourse {
            marked = true;
            continue;
        }
        let Some(next) = question_topic(act, fb) else {
            continue;
        };
        if topic.is_some_and(|t| t != next) && !marked && budget > 0 {
            anchors.push(order[pos - 1].clone());
            budget -= 1;
        }
        topic = Some(next);
        marked = false;
    }

    let mut ids = NumberedIds::continuing(plan, INSERTED_PREFIX);
    for anchor in anchors {
        let marker = DialogueAct::new(
            ids.next().expect("unbounded"),
            ActType::Metadiscourse,
            speaker.id.clone(),
            addressees.iter().cloned(),
            SemanticContent::new("next_stage", Polarity::Assert),
        );
        let record = InsertionRecord {
            anchor: anchor.clone(),
            inserted: vec![marker.id.clone()],
            reason: InsertionReason::Style,
        };
        out.splice(&anchor, vec![marker])?;
        out.provenance.push(record.clone());
        records.push(record);
    }
    Ok((out, records))
}

/// Removes the acts listed in `records` (latest first) and reconnects the
/// order around them.
pub fn revert(plan: &ScenePlan, records: &[InsertionRecord]) -> ScenePlan {
    let mut out = plan.clone();
    for record in records.iter().rev() {
        out.unsplice(record);
    }
    out
}

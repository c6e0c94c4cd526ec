//! Step II: expand an assignment into a totally ordered scene of
//! question/answer pairs, optional opinions, and optional greeting and
//! closing acts. Acts are numbered `x1..xn` in order.

use crate::distributor::{AssignedItem, Assignment, OpinionMode};
use crate::ids::{ActId, PersonaId};
use crate::knowledge::Persona;
use crate::scene_ir::{
    ActType, DialogueAct, Emotion, EmotionSpec, NumberedIds, Polarity, SceneError, ScenePlan, SemanticContent,
};

pub use crate::config::GenerationConfig;

/// Question by the elicitor, then the informer's answer reacting to it.
pub fn emit_question_answer_pair(
    item: &AssignedItem,
    ids: &mut dyn Iterator<Item = ActId>,
) -> (DialogueAct, DialogueAct) {
    let question = DialogueAct::new(
        ids.next().expect("id source exhausted"),
        ActType::Question,
        item.elicitor.clone(),
        [item.informer.clone()],
        SemanticContent::new(item.fact.as_str(), Polarity::Query),
    );
    let inform = DialogueAct::new(
        ids.next().expect("id source exhausted"),
        ActType::Inform,
        item.informer.clone(),
        [item.elicitor.clone()],
        SemanticContent::new(item.fact.as_str(), Polarity::Assert),
    )
    .reacting_to(question.id.clone())
    .with_emotion(EmotionSpec::sincere(Emotion::from_valence(item.valence)));
    (question, inform)
}

fn opinion_act(item: &AssignedItem, answer: &ActId, ids: &mut dyn Iterator<Item = ActId>) -> Option<DialogueAct> {
    if item.opinion_mode == OpinionMode::None {
        return None;
    }
    let holder = item.opinion_holder.clone()?;
    let id = ids.next().expect("id source exhausted");
    let act = match &item.evidence {
        Some(evidence) => DialogueAct::new(
            id,
            ActType::Inform,
            holder,
            [item.informer.clone()],
            SemanticContent::new(evidence.as_str(), Polarity::Assert),
        ),
        None => DialogueAct::new(
            id,
            ActType::Evaluate,
            holder,
            [item.informer.clone()],
            SemanticContent::new(item.fact.as_str(), Polarity::Assert),
        )
        .with_emotion(EmotionSpec::sincere(Emotion::from_valence(item.opinion_valence))),
    };
    Some(act.reacting_to(answer.clone()))
}

fn lead(personas: &[Persona], weight: impl Fn(&Persona) -> f64) -> Option<&Persona> {
    personas.iter().fold(None, |best: Option<&Persona>, p| match best {
        Some(b) if weight(b) > weight(p) || (weight(b) == weight(p) && b.id < p.id) => Some(b),
        _ => Some(p),
    })
}

fn others(participants: &[PersonaId], speaker: &PersonaId) -> Vec<PersonaId> {
    participants.iter().filter(|p| *p != speaker).cloned().collect()
}

pub fn plan_sequence(
    assignment: &Assignment,
    personas: &[Persona],
    cfg: &GenerationConfig,
) -> Result<ScenePlan, SceneError> {
    let mut participants: Vec<PersonaId> = personas.iter().map(|p| p.id.clone()).collect();
    participants.sort();
    let mut plan = ScenePlan::new(participants.clone());
    let mut ids = NumberedIds::new("x", 1);
    let mut last: Option<ActId> = None;
    let mut push = |plan: &mut ScenePlan, act: DialogueAct| -> Result<(), SceneError> {
        let id = act.id.clone();
        plan.push_act(act, last.as_ref())?;
        last = Some(id);
        Ok(())
    };

    if cfg.include_greeting {
        if let Some(host) = lead(personas, |p| p.role.informer_weight) {
            let act = DialogueAct::new(
                ids.next().expect("unbounded"),
                ActType::Greet,
                host.id.clone(),
                others(&participants, &host.id),
                SemanticContent::new("greeting", Polarity::Assert),
            );
            push(&mut plan, act)?;
        }
    }

    let mut items: Vec<&AssignedItem> = assignment.items.iter().collect();
    items.sort_by(|a, b| cfg.topic_key(&a.topic).cmp(&cfg.topic_key(&b.topic)));
    for item in items {
        let (question, answer) = emit_question_answer_pair(item, &mut ids);
        let answer_id = answer.id.clone();
        push(&mut plan, question)?;
        push(&mut plan, answer)?;
        if let Some(act) = opinion_act(item, &answer_id, &mut ids) {
            push(&mut plan, act)?;
        }
    }

    if cfg.include_closing {
        if let Some(guest) = lead(personas, |p| p.role.elicitor_weight) {
            let act = DialogueAct::new(
                ids.next().expect("unbounded"),
                ActType::Close,
                guest.id.clone(),
                others(&participants, &guest.id),
                SemanticContent::new("farewell", Polarity::Assert),
            );
            push(&mut plan, act)?;
        }
    }
    Ok(plan)
}

//! Dialogue-act intermediate representation.
//!
//! A [`ScenePlan`] keeps the acts and their temporal order apart: the order is
//! a set of `(before, after)` pairs that may leave acts unordered, and
//! [`ScenePlan::linearize`] resolves it deterministically. Every public
//! operation leaves `self` untouched and returns a new plan.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{ActId, PersonaId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("duplicate act id `{0}`")]
    DuplicateId(ActId),
    #[error("unknown anchor act `{0}`")]
    UnknownAnchor(ActId),
    #[error("act `{act}` refers to unknown act `{target}`")]
    UnknownReference { act: ActId, target: ActId },
    #[error("act `{act}` reacts to `{target}`, which is not ordered before it")]
    ForwardReaction { act: ActId, target: ActId },
    #[error("act `{0}` is malformed: {1}")]
    InvalidAct(ActId, &'static str),
    #[error("temporal constraints contain a cycle through `{before}` -> `{after}`")]
    Cycle { before: ActId, after: ActId },
    #[error("scene document: {0}")]
    Schema(String),
}

impl SceneError {
    pub fn offending_id(&self) -> Option<&ActId> {
        match self {
            SceneError::DuplicateId(id) | SceneError::UnknownAnchor(id) | SceneError::InvalidAct(id, _) => Some(id),
            SceneError::UnknownReference { act, .. } | SceneError::ForwardReaction { act, .. } => Some(act),
            SceneError::Cycle { before, .. } => Some(before),
            SceneError::Schema(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActType {
    Greet,
    Question,
    Inform,
    /// Opens an emphasis subdialogue by re-asking what was just said.
    EchoQuestion,
    Confirm,
    Evaluate,
    Metadiscourse,
    Close,
}

impl ActType {
    pub const ALL: [ActType; 8] = [
        ActType::Greet,
        ActType::Question,
        ActType::Inform,
        ActType::EchoQuestion,
        ActType::Confirm,
        ActType::Evaluate,
        ActType::Metadiscourse,
        ActType::Close,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ActType::Greet => "greet",
            ActType::Question => "question",
            ActType::Inform => "inform",
            ActType::EchoQuestion => "echo_question",
            ActType::Confirm => "confirm",
            ActType::Evaluate => "evaluate",
            ActType::Metadiscourse => "metadiscourse",
            ActType::Close => "close",
        }
    }

    /// Acts that expect an answer from one of their addressees.
    pub fn is_question(self) -> bool {
        matches!(self, ActType::Question | ActType::EchoQuestion)
    }
}

impl fmt::Display for ActType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "assert")]
    Assert,
    #[serde(rename = "query")]
    Query,
    #[serde(rename = "re-query")]
    ReQuery,
    #[serde(rename = "agree")]
    Agree,
}

impl Polarity {
    pub const ALL: [Polarity; 4] = [Polarity::Assert, Polarity::Query, Polarity::ReQuery, Polarity::Agree];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Assert => "assert",
            Polarity::Query => "query",
            Polarity::ReQuery => "re-query",
            Polarity::Agree => "agree",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Discourse markers that can stand in for a proposition.
pub const MARKERS: [&str; 3] = ["greeting", "farewell", "next_stage"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemanticContent {
    /// A fact id, a property name, or one of [`MARKERS`].
    pub proposition: String,
    pub polarity: Polarity,
}

impl SemanticContent {
    pub fn new(proposition: impl Into<String>, polarity: Polarity) -> Self {
        Self {
            proposition: proposition.into(),
            polarity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmotionLabel {
    Neutral,
    Enthusiasm,
    Disappointment,
}

impl EmotionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Neutral => "neutral",
            EmotionLabel::Enthusiasm => "enthusiasm",
            EmotionLabel::Disappointment => "disappointment",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Emotion {
    pub label: EmotionLabel,
    pub intensity: f64,
}

impl Emotion {
    pub const NEUTRAL: Emotion = Emotion {
        label: EmotionLabel::Neutral,
        intensity: 0.0,
    };

    /// Enthusiasm for good news, disappointment for bad, scaled by |valence|.
    pub fn from_valence(valence: f64) -> Self {
        if valence > 0.0 {
            Emotion {
                label: EmotionLabel::Enthusiasm,
                intensity: valence.min(1.0),
            }
        } else if valence < 0.0 {
            Emotion {
                label: EmotionLabel::Disappointment,
                intensity: (-valence).min(1.0),
            }
        } else {
            Emotion::NEUTRAL
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmotionSpec {
    pub felt: Emotion,
    pub expressed: Emotion,
}

impl EmotionSpec {
    pub const NEUTRAL: EmotionSpec = EmotionSpec {
        felt: Emotion::NEUTRAL,
        expressed: Emotion::NEUTRAL,
    };

    /// Felt and expressed emotion are the same.
    pub fn sincere(emotion: Emotion) -> Self {
        Self {
            felt: emotion,
            expressed: emotion,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DialogueAct {
    pub id: ActId,
    #[serde(rename = "type")]
    pub act_type: ActType,
    pub speaker: PersonaId,
    pub addressees: BTreeSet<PersonaId>,
    pub content: SemanticContent,
    #[serde(default)]
    pub reacts_to: BTreeSet<ActId>,
    pub emotion: EmotionSpec,
}

impl DialogueAct {
    pub fn new(
        id: impl Into<ActId>,
        act_type: ActType,
        speaker: impl Into<PersonaId>,
        addressees: impl IntoIterator<Item = PersonaId>,
        content: SemanticContent,
    ) -> Self {
        Self {
            id: id.into(),
            act_type,
            speaker: speaker.into(),
            addressees: addressees.into_iter().collect(),
            content,
            reacts_to: BTreeSet::new(),
            emotion: EmotionSpec::NEUTRAL,
        }
    }

    pub fn reacting_to(mut self, target: impl Into<ActId>) -> Self {
        self.reacts_to.insert(target.into());
        self
    }

    pub fn with_emotion(mut self, emotion: EmotionSpec) -> Self {
        self.emotion = emotion;
        self
    }

    fn check_shape(&self) -> Result<(), SceneError> {
        if self.addressees.is_empty() {
            return Err(SceneError::InvalidAct(self.id.clone(), "no addressees"));
        }
        if self.addressees.contains(&self.speaker) {
            return Err(SceneError::InvalidAct(self.id.clone(), "speaker addresses itself"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionReason {
    Emphasis,
    Style,
}

/// Audit entry for acts a transform spliced into a plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsertionRecord {
    pub anchor: ActId,
    pub inserted: Vec<ActId>,
    pub reason: InsertionReason,
}

/// Yields `prefix1`, `prefix2`, ... starting after the highest such id
/// already present in a plan.
#[derive(Clone, Debug)]
pub struct NumberedIds {
    prefix: String,
    next: usize,
}

impl NumberedIds {
    pub fn new(prefix: impl Into<String>, first: usize) -> Self {
        Self {
            prefix: prefix.into(),
            next: first,
        }
    }

    pub fn continuing(plan: &ScenePlan, prefix: &str) -> Self {
        let highest = plan
            .acts
            .keys()
            .filter_map(|id| id.as_str().strip_prefix(prefix)?.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Self::new(prefix, highest + 1)
    }
}

impl Iterator for NumberedIds {
    type Item = ActId;

    fn next(&mut self) -> Option<ActId> {
        let id = ActId::new(format!("{}{}", self.prefix, self.next));
        self.next += 1;
        Some(id)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScenePlan {
    pub participants: Vec<PersonaId>,
    pub acts: BTreeMap<ActId, DialogueAct>,
    pub constraints: BTreeSet<(ActId, ActId)>,
    pub provenance: Vec<InsertionRecord>,
}

impl ScenePlan {
    pub fn new(participants: impl IntoIterator<Item = PersonaId>) -> Self {
        Self {
            participants: participants.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn act(&self, id: &str) -> Option<&DialogueAct> {
        self.acts.get(id)
    }

    pub fn len(&self) -> usize {
        self.acts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acts.is_empty()
    }

    /// Whether `a` is ordered strictly before `b` by the transitive closure
    /// of the constraints.
    pub fn precedes(&self, a: &ActId, b: &ActId) -> bool {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([a]);
        while let Some(cur) = queue.pop_front() {
            for (_, next) in self.successors(cur) {
                if next == b {
                    return true;
                }
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        false
    }

    fn successors<'a>(&'a self, id: &'a ActId) -> impl Iterator<Item = &'a (ActId, ActId)> + 'a {
        self.constraints
            .range((id.clone(), ActId::new(""))..)
            .take_while(move |(before, _)| before == id)
    }

    /// Returns a plan with `act` added, ordered right after `after` if given.
    pub fn add_act(&self, act: DialogueAct, after: Option<&ActId>) -> Result<ScenePlan, SceneError> {
        let mut next = self.clone();
        next.push_act(act, after)?;
        Ok(next)
    }

    pub(crate) fn push_act(&mut self, act: DialogueAct, after: Option<&ActId>) -> Result<(), SceneError> {
        if self.acts.contains_key(&act.id) {
            return Err(SceneError::DuplicateId(act.id));
        }
        if let Some(anchor) = after {
            if !self.acts.contains_key(anchor) {
                return Err(SceneError::UnknownAnchor(anchor.clone()));
            }
        }
        act.check_shape()?;
        for target in &act.reacts_to {
            if !self.acts.contains_key(target) {
                return Err(SceneError::UnknownReference {
                    act: act.id.clone(),
                    target: target.clone(),
                });
            }
            let backwards = after.is_some_and(|a| a == target || self.precedes(target, a));
            if !backwards {
                return Err(SceneError::ForwardReaction {
                    act: act.id.clone(),
                    target: target.clone(),
                });
            }
        }
        if let Some(anchor) = after {
            self.constraints.insert((anchor.clone(), act.id.clone()));
        }
        self.acts.insert(act.id.clone(), act);
        Ok(())
    }

    /// Splices `acts` into the order immediately after `anchor`.
    ///
    /// The new acts are chained in list order, the first one reacts to the
    /// anchor, and everything that used to follow the anchor directly now
    /// follows the last new act.
    pub fn insert_subsequence(&self, anchor: &ActId, acts: Vec<DialogueAct>) -> Result<ScenePlan, SceneError> {
        let mut next = self.clone();
        next.splice(anchor, acts)?;
        Ok(next)
    }

    pub(crate) fn splice(&mut self, anchor: &ActId, mut acts: Vec<DialogueAct>) -> Result<(), SceneError> {
        if !self.acts.contains_key(anchor) {
            return Err(SceneError::UnknownAnchor(anchor.clone()));
        }
        if acts.is_empty() {
            return Ok(());
        }
        acts[0].reacts_to.insert(anchor.clone());

        let mut fresh = BTreeSet::new();
        for act in &acts {
            if self.acts.contains_key(&act.id) || !fresh.insert(act.id.clone()) {
                return Err(SceneError::DuplicateId(act.id.clone()));
            }
            act.check_shape()?;
        }
        for (i, act) in acts.iter().enumerate() {
            for target in &act.reacts_to {
                let earlier_new = acts[..i].iter().any(|a| &a.id == target);
                if earlier_new || target == anchor {
                    continue;
                }
                if !self.acts.contains_key(target) {
                    return Err(SceneError::UnknownReference {
                        act: act.id.clone(),
                        target: target.clone(),
                    });
                }
                if !self.precedes(target, anchor) {
                    return Err(SceneError::ForwardReaction {
                        act: act.id.clone(),
                        target: target.clone(),
                    });
                }
            }
        }

        let followers: Vec<ActId> = self.successors(anchor).map(|(_, z)| z.clone()).collect();
        for z in &followers {
            self.constraints.remove(&(anchor.clone(), z.clone()));
        }
        let mut prev = anchor.clone();
        for act in acts {
            let id = act.id.clone();
            self.constraints.insert((prev, id.clone()));
            self.acts.insert(id.clone(), act);
            prev = id;
        }
        for z in followers {
            self.constraints.insert((prev.clone(), z));
        }
        Ok(())
    }

    /// Undoes a splice made by [`ScenePlan::splice`]: drops the inserted
    /// acts and reconnects the anchor to whatever followed them.
    pub(crate) fn unsplice(&mut self, record: &InsertionRecord) {
        let inserted: BTreeSet<&ActId> = record.inserted.iter().collect();
        let Some(last) = record.inserted.last() else {
            return;
        };
        let mut restored = Vec::new();
        self.constraints.retain(|(before, after)| {
            let touches = inserted.contains(before) || inserted.contains(after);
            if touches && before == last && !inserted.contains(after) {
                restored.push((record.anchor.clone(), after.clone()));
            }
            !touches
        });
        self.constraints.extend(restored);
        for id in &record.inserted {
            self.acts.remove(id);
        }
        for act in self.acts.values_mut() {
            act.reacts_to.retain(|r| !inserted.contains(r));
        }
        self.provenance.retain(|r| r != record);
    }

    /// Topological order that always takes the lexicographically smallest
    /// ready act.
    pub fn linearize(&self) -> Result<Vec<ActId>, SceneError> {
        let mut indegree: BTreeMap<&ActId, usize> = self.acts.keys().map(|id| (id, 0)).collect();
        for (before, after) in &self.constraints {
            if !self.acts.contains_key(before) || !self.acts.contains_key(after) {
                let (act, target) = if self.acts.contains_key(before) {
                    (before, after)
                } else {
                    (after, before)
                };
                return Err(SceneError::UnknownReference {
                    act: act.clone(),
                    target: target.clone(),
                });
            }
            *indegree.get_mut(after).expect("checked above") += 1;
        }
        let mut ready: BTreeSet<&ActId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(id, _)| *id).collect();
        let mut order = Vec::with_capacity(self.acts.len());
        while let Some(id) = ready.pop_first() {
            order.push(id.clone());
            for (_, next) in self.successors(id) {
                let d = indegree.get_mut(next).expect("known act");
                *d -= 1;
                if *d == 0 {
                    ready.insert(next);
                }
            }
        }
        if order.len() == self.acts.len() {
            return Ok(order);
        }
        let placed: BTreeSet<&ActId> = order.iter().collect();
        Err(self.find_cycle_edge(&placed))
    }

    // Every act Kahn's algorithm could not place has a predecessor that was
    // not placed either, so walking predecessors must revisit some act.
    fn find_cycle_edge(&self, placed: &BTreeSet<&ActId>) -> SceneError {
        let pred = |v: &ActId| -> Option<ActId> {
            self.constraints
                .iter()
                .find(|(b, a)| a == v && !placed.contains(b))
                .map(|(b, _)| b.clone())
        };
        let start = self
            .acts
            .keys()
            .find(|id| !placed.contains(id))
            .expect("some act is unplaced")
            .clone();
        let mut seen = BTreeSet::new();
        let mut cur = start;
        loop {
            seen.insert(cur.clone());
            let prev = pred(&cur).expect("unplaced act has an unplaced predecessor");
            if seen.contains(&prev) {
                return SceneError::Cycle {
                    before: prev,
                    after: cur,
                };
            }
            cur = prev;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Cycle {
        before: ActId,
        after: ActId,
    },
    DanglingConstraint {
        before: ActId,
        after: ActId,
    },
    DanglingReaction {
        act: ActId,
        target: ActId,
    },
    ForwardReaction {
        act: ActId,
        target: ActId,
    },
    NoAddressees {
        act: ActId,
    },
    SpeakerAddressed {
        act: ActId,
    },
    UnknownParticipant {
        act: ActId,
        persona: PersonaId,
    },
    /// A question or echo question that no addressee reacts to.
    Unanswered {
        act: ActId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { before, after } => write!(f, "cycle through {before} -> {after}"),
            Violation::DanglingConstraint { before, after } => {
                write!(f, "constraint {before} -> {after} names an unknown act")
            }
            Violation::DanglingReaction { act, target } => write!(f, "{act} reacts to unknown act {target}"),
            Violation::ForwardReaction { act, target } => {
                write!(f, "{act} reacts to {target}, which is not ordered before it")
            }
            Violation::NoAddressees { act } => write!(f, "{act} has no addressees"),
            Violation::SpeakerAddressed { act } => write!(f, "{act} is addressed to its own speaker"),
            Violation::UnknownParticipant { act, persona } => {
                write!(f, "{act} involves {persona}, who is not a participant")
            }
            Violation::Unanswered { act } => write!(f, "{act} is never answered by an addressee"),
        }
    }
}

impl Violation {
    pub fn act(&self) -> &ActId {
        match self {
            Violation::Cycle { before, .. } | Violation::DanglingConstraint { before, .. } => before,
            Violation::DanglingReaction { act, .. }
            | Violation::ForwardReaction { act, .. }
            | Violation::NoAddressees { act }
            | Violation::SpeakerAddressed { act }
            | Violation::UnknownParticipant { act, .. }
            | Violation::Unanswered { act } => act,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_plan(plan: &ScenePlan) -> ValidationReport {
    let mut violations = Vec::new();

    for (before, after) in &plan.constraints {
        if !plan.acts.contains_key(before) || !plan.acts.contains_key(after) {
            violations.push(Violation::DanglingConstraint {
                before: before.clone(),
                after: after.clone(),
            });
        }
    }
    if violations.is_empty() {
        if let Err(SceneError::Cycle { before, after }) = plan.linearize() {
            violations.push(Violation::Cycle { before, after });
        }
    }

    let participants: BTreeSet<&PersonaId> = plan.participants.iter().collect();
    for act in plan.acts.values() {
        for persona in std::iter::once(&act.speaker).chain(&act.addressees) {
            if !participants.contains(persona) {
                violations.push(Violation::UnknownParticipant {
                    act: act.id.clone(),
                    persona: persona.clone(),
                });
            }
        }
        if act.addressees.is_empty() {
            violations.push(Violation::NoAddressees { act: act.id.clone() });
        }
        if act.addressees.contains(&act.speaker) {
            violations.push(Violation::SpeakerAddressed { act: act.id.clone() });
        }
        for target in &act.reacts_to {
            if !plan.acts.contains_key(target) {
                violations.push(Violation::DanglingReaction {
                    act: act.id.clone(),
                    target: target.clone(),
                });
            } else if !plan.precedes(target, &act.id) {
                violations.push(Violation::ForwardReaction {
                    act: act.id.clone(),
                    target: target.clone(),
                });
            }
        }
        if act.act_type.is_question() {
            let answered = plan
                .acts
                .values()
                .any(|other| other.reacts_to.contains(&act.id) && act.addressees.contains(&other.speaker));
            if !answered {
                violations.push(Violation::Unanswered { act: act.id.clone() });
            }
        }
    }
    ValidationReport { violations }
}

/// On-disk form of a scene plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDocument {
    participants: Vec<PersonaId>,
    acts: Vec<DialogueAct>,
    temporal_constraints: Vec<(ActId, ActId)>,
    #[serde(default)]
    provenance: Vec<InsertionRecord>,
}

/// Pretty JSON with acts in linear order (id order if the plan is cyclic)
/// and constraints sorted.
pub fn serialize_scene(plan: &ScenePlan) -> String {
    let order = plan.linearize().unwrap_or_else(|_| plan.acts.keys().cloned().collect());
    let doc = SceneDocument {
        participants: plan.participants.clone(),
        acts: order.iter().map(|id| plan.acts[id].clone()).collect(),
        temporal_constraints: plan.constraints.iter().cloned().collect(),
        provenance: plan.provenance.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("scene serializes");
    out.push('\n');
    out
}

/// Parses a scene document. Structural problems that are not schema errors
/// (cycles, unanswered questions, ...) are left for [`validate_plan`].
pub fn parse_scene(doc: &str) -> Result<ScenePlan, SceneError> {
    let doc: SceneDocument = serde_json::from_str(doc).map_err(|e| SceneError::Schema(e.to_string()))?;
    let mut plan = ScenePlan::new(doc.participants);
    for act in doc.acts {
        if plan.acts.contains_key(&act.id) {
            return Err(SceneError::DuplicateId(act.id));
        }
        plan.acts.insert(act.id.clone(), act);
    }
    for (before, after) in doc.temporal_constraints {
        for id in [&before, &after] {
            if !plan.acts.contains_key(id) {
                return Err(SceneError::Schema(format!(
                    "temporal constraint names unknown act `{id}`"
                )));
            }
        }
        plan.constraints.insert((before, after));
    }
    for act in plan.acts.values() {
        if let Some(target) = act.reacts_to.iter().find(|t| !plan.acts.contains_key(*t)) {
            return Err(SceneError::UnknownReference {
                act: act.id.clone(),
                target: target.clone(),
            });
        }
    }
    for record in &doc.provenance {
        for id in std::iter::once(&record.anchor).chain(&record.inserted) {
            if !plan.acts.contains_key(id) {
                return Err(SceneError::Schema(format!("provenance names unknown act `{id}`")));
            }
        }
    }
    plan.provenance = doc.provenance;
    Ok(plan)
}

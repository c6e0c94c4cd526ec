//! Fixtures, independent oracles and generators shared by the integration
//! tests. Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use proptest::prelude::*;

use scripted_dialogue::config::GenerationConfig;
use scripted_dialogue::ids::ActId;
use scripted_dialogue::knowledge::{
    parse_fact_base, parse_personas, Attitude, Comparison, Entity, Fact, FactBase, FactValue, Implication,
    ImplicationRule, Persona, Premise, Role, Traits,
};
use scripted_dialogue::realizer::TemplateSet;
use scripted_dialogue::scene_ir::{parse_scene, ActType, DialogueAct, Polarity, ScenePlan, SemanticContent};

pub fn fixture_path(name: &str, file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .join(file)
}

pub fn read_fixture(name: &str, file: &str) -> String {
    std::fs::read_to_string(fixture_path(name, file)).expect("fixture readable")
}

pub struct Fixture {
    pub fb: FactBase,
    pub personas: Vec<Persona>,
    pub templates: TemplateSet,
}

pub fn load(name: &str) -> Fixture {
    Fixture {
        fb: parse_fact_base(&read_fixture(name, "facts.json")).unwrap(),
        personas: parse_personas(&read_fixture(name, "personas.json")).unwrap(),
        templates: TemplateSet::parse(&read_fixture(name, "templates.json")).unwrap(),
    }
}

pub fn step_two_fixture(name: &str) -> ScenePlan {
    parse_scene(&read_fixture(name, "step_two.json")).unwrap()
}

pub fn ids(list: &[&str]) -> Vec<ActId> {
    list.iter().map(|s| ActId::from(*s)).collect()
}

// ---------------------------------------------------------------- oracles

/// Every topological order of `nodes` under `edges`, by exhaustive search.
pub fn all_topological_orders(nodes: &[ActId], edges: &BTreeSet<(ActId, ActId)>) -> Vec<Vec<ActId>> {
    fn go(
        remaining: &mut Vec<ActId>,
        edges: &BTreeSet<(ActId, ActId)>,
        prefix: &mut Vec<ActId>,
        out: &mut Vec<Vec<ActId>>,
    ) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..remaining.len() {
            let candidate = remaining[i].clone();
            let blocked = remaining
                .iter()
                .any(|other| edges.contains(&(other.clone(), candidate.clone())));
            if blocked {
                continue;
            }
            remaining.remove(i);
            prefix.push(candidate.clone());
            go(remaining, edges, prefix, out);
            prefix.pop();
            remaining.insert(i, candidate);
        }
    }
    let mut out = Vec::new();
    go(&mut nodes.to_vec(), edges, &mut Vec::new(), &mut out);
    out
}

pub fn is_topological(order: &[ActId], edges: &BTreeSet<(ActId, ActId)>) -> bool {
    let pos: BTreeMap<&ActId, usize> = order.iter().enumerate().map(|(i, id)| (id, i)).collect();
    edges.iter().all(|(b, a)| pos[b] < pos[a])
}

/// Splice `new` into an explicit sequence right after `anchor`.
pub fn splice_list(order: &[ActId], anchor: &ActId, new: &[ActId]) -> Vec<ActId> {
    let mut out = Vec::with_capacity(order.len() + new.len());
    for id in order {
        out.push(id.clone());
        if id == anchor {
            out.extend(new.iter().cloned());
        }
    }
    out
}

/// Expected emotion for an answer: independent restatement of the scaling rule.
pub fn expected_emotion(valence: f64) -> (&'static str, f64) {
    match valence.partial_cmp(&0.0).unwrap() {
        std::cmp::Ordering::Greater => ("enthusiasm", valence),
        std::cmp::Ordering::Less => ("disappointment", -valence),
        std::cmp::Ordering::Equal => ("neutral", 0.0),
    }
}

/// Counts acts referencing `proposition` by scanning a serialized scene
/// document as plain JSON.
pub fn count_mentions(scene_document: &str, proposition: &str) -> usize {
    let doc: serde_json::Value = serde_json::from_str(scene_document).unwrap();
    doc["acts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|act| act["content"]["proposition"] == proposition)
        .count()
}

// ------------------------------------------------------------- generators

pub fn act(id: &str, t: ActType, speaker: &str, to: &str, prop: &str) -> DialogueAct {
    let polarity = match t {
        ActType::Question => Polarity::Query,
        ActType::EchoQuestion => Polarity::ReQuery,
        ActType::Confirm => Polarity::Agree,
        _ => Polarity::Assert,
    };
    DialogueAct::new(id, t, speaker, [to.into()], SemanticContent::new(prop, polarity))
}

/// A DAG over up to 8 acts with arbitrary single-letter ids.
pub fn arb_dag() -> impl Strategy<Value = ScenePlan> {
    (1usize..=8)
        .prop_flat_map(|n| {
            let ids = Just("abcdefgh".chars().map(|c| c.to_string()).collect::<Vec<_>>()).prop_shuffle();
            let edges = prop::collection::vec(any::<bool>(), n * n);
            (Just(n), ids, edges)
        })
        .prop_map(|(n, ids, edges)| {
            let mut plan = ScenePlan::new(["p".into(), "q".into()]);
            // edges only go forward in the shuffled order, so the graph is acyclic
            for id in &ids[..n] {
                plan.acts
                    .insert(id.as_str().into(), act(id, ActType::Inform, "p", "q", "f"));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if edges[i * n + j] {
                        plan.constraints
                            .insert((ids[i].as_str().into(), ids[j].as_str().into()));
                    }
                }
            }
            plan
        })
}

/// A plan whose constraints form one chain `x1 .. xn` in a random id order.
pub fn arb_chain() -> impl Strategy<Value = ScenePlan> {
    (1usize..=7).prop_flat_map(|n| {
        Just((1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|order| {
                let mut plan = ScenePlan::new(["p".into(), "q".into()]);
                let mut prev: Option<ActId> = None;
                for (i, id) in order.iter().enumerate() {
                    let (s, a) = if i % 2 == 0 { ("p", "q") } else { ("q", "p") };
                    plan = plan
                        .add_act(act(id, ActType::Inform, s, a, "f"), prev.as_ref())
                        .unwrap();
                    prev = Some(id.as_str().into());
                }
                plan
            })
    })
}

const TOPICS: [&str; 4] = ["comfort", "finance", "performance", "safety"];
const ATTRIBUTES: [&str; 6] = ["top_speed", "price", "seats", "airbags", "did_action", "color"];

/// A random but always generatable showroom-like scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub fb: FactBase,
    pub personas: Vec<Persona>,
    pub cfg: GenerationConfig,
}

fn arb_fact(i: usize) -> impl Strategy<Value = Fact> {
    (
        0usize..TOPICS.len(),
        0u32..300,
        -1.0f64..=1.0,
        0.0f64..=1.0,
        prop::option::of(Just("mph")),
    )
        .prop_map(move |(topic, value, valence, emphasis, unit)| Fact {
            id: format!("f{i}").into(),
            entity: "car1".into(),
            attribute: ATTRIBUTES[i].into(),
            value: FactValue::Number(value as f64),
            unit: unit.map(str::to_owned),
            valence: (valence * 4.0).round() / 4.0,
            emphasis,
            topic: TOPICS[topic].into(),
        })
}

fn arb_persona(i: usize) -> impl Strategy<Value = Persona> {
    (
        0.0f64..=1.0,
        0.0f64..=1.0,
        prop::collection::vec(0.0f64..=1.0, TOPICS.len()),
        prop::collection::vec(0.0f64..=1.0, 4),
        prop::option::of(-1.0f64..=1.0),
    )
        .prop_map(move |(informer, elicitor, interests, traits, attitude)| Persona {
            id: format!("p{i}").into(),
            name: format!("P{i}"),
            role: Role {
                informer_weight: informer.max(0.05),
                elicitor_weight: elicitor,
            },
            interests: TOPICS
                .iter()
                .zip(&interests)
                // the first persona cares about everything so selection is never empty
                .map(|(t, w)| (t.to_string(), if i == 0 { w.max(0.1) } else { *w }))
                .collect(),
            traits: Traits {
                extroversion: traits[0],
                agreeableness: traits[1],
                dominance: traits[2],
                indirectness: traits[3],
            },
            attitudes: attitude
                .map(|v| Attitude {
                    target: "car1".into(),
                    valence: v,
                })
                .into_iter()
                .collect(),
        })
}

fn arb_rule(i: usize) -> impl Strategy<Value = (usize, bool, f64, u32)> {
    let _ = i;
    (0usize..ATTRIBUTES.len(), any::<bool>(), -1.0f64..=1.0, 0u32..300)
}

pub fn arb_scenario() -> impl Strategy<Value = Scenario> {
    (1usize..=6, 2usize..=3)
        .prop_flat_map(|(n_facts, n_personas)| {
            let facts: Vec<_> = (0..n_facts).map(arb_fact).collect();
            let personas: Vec<_> = (0..n_personas).map(arb_persona).collect();
            let rules = prop::collection::vec(arb_rule(0), 0..4);
            let flags = prop::collection::vec(any::<bool>(), 5);
            let thresholds = prop::collection::vec(0.0f64..=1.0, 4);
            let priority = Just(TOPICS.iter().map(|t| t.to_string()).collect::<Vec<_>>()).prop_shuffle();
            (
                facts,
                personas,
                rules,
                flags,
                thresholds,
                0usize..3,
                priority,
                0usize..=4,
            )
        })
        .prop_map(
            |(facts, personas, rules, flags, thresholds, markers, priority, n_priority)| {
                let implications = rules
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, (attr, ge, valence, threshold))| {
                        let attribute = facts.get(attr % facts.len())?.attribute.clone();
                        Some(ImplicationRule {
                            id: format!("r{i}").into(),
                            premise: Premise {
                                attribute,
                                op: if ge { Comparison::Ge } else { Comparison::Le },
                                threshold: FactValue::Number(threshold as f64),
                            },
                            implies: Implication {
                                property: format!("prop{i}"),
                                valence,
                            },
                        })
                    })
                    .collect();
                let fb = FactBase {
                    entities: vec![Entity {
                        id: "car1".into(),
                        name: "car".into(),
                        class: "sedan".into(),
                    }],
                    facts,
                    implications,
                };
                let mut cfg = GenerationConfig::new("car1");
                cfg.topic_priority = priority[..n_priority].to_vec();
                cfg.emphasis_threshold = thresholds[0];
                cfg.opinion_threshold = thresholds[1];
                cfg.indirectness_threshold = thresholds[2];
                cfg.dominance_threshold = thresholds[3];
                cfg.max_style_markers = markers;
                cfg.enable_emphasis = flags[0];
                cfg.enable_association = flags[1];
                cfg.enable_style_markers = flags[2];
                cfg.include_greeting = flags[3];
                cfg.include_closing = flags[4];
                Scenario { fb, personas, cfg }
            },
        )
}

/// Templates covering every act the planner can emit, using only
/// placeholders that always resolve.
pub fn generic_templates() -> TemplateSet {
    TemplateSet::from_entries([
        ("greet.assert", "Hello."),
        ("question.query", "What about the {attribute}?"),
        ("inform.assert", "The {attribute} is {value}{unit}."),
        ("echo_question.re-query", "{value}{unit}?"),
        ("confirm.agree", "Yes, the {attribute} is {value} {unit}."),
        ("confirm.agree.follows_subdialogue", "Yes, {value} {unit}."),
        ("evaluate.assert", "I see."),
        ("evaluate.assert@enthusiasm", "Great."),
        ("evaluate.assert@disappointment", "Too bad."),
        ("evaluate.assert.follows_subdialogue", "Well then."),
        ("metadiscourse.assert", "Next part."),
        ("close.assert", "Bye."),
    ])
    .unwrap()
}

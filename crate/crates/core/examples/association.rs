//! An indirect speaker who dislikes Mike never says so; instead they
//! mention something Mike did that speaks for itself.
//!
//! cargo run --example association

use scripted_dialogue::prelude::*;

const FACTS: &str = r#"{
  "entities": [{"id": "mike", "name": "Mike", "class": "person"}],
  "facts": [
    {"id": "f_job", "entity": "mike", "attribute": "job", "value": "landlord",
     "valence": -0.6, "emphasis": 0.2, "topic": "people"},
    {"id": "f_deed", "entity": "mike", "attribute": "did_action", "value": "evicted the Jacksons",
     "valence": -0.9, "emphasis": 0.2, "topic": "gossip"}
  ],
  "implications": [
    {"id": "r_heartless", "premise": {"attribute": "did_action", "op": "eq", "threshold": "evicted the Jacksons"},
     "implies": {"property": "heartless", "valence": -1}}
  ]
}"#;

const PERSONAS: &str = r#"{"personas": [
  {"id": "ann", "name": "Ann", "role": {"informer_weight": 0.0, "elicitor_weight": 1.0},
   "interests": {"people": 1.0},
   "traits": {"extroversion": 0.5, "agreeableness": 0.4, "dominance": 0.3, "indirectness": 0.9},
   "attitudes": [{"target": "mike", "valence": -0.8}]},
  {"id": "bob", "name": "Bob", "role": {"informer_weight": 1.0, "elicitor_weight": 0.0},
   "interests": {"people": 1.0},
   "traits": {"extroversion": 0.6, "agreeableness": 0.7, "dominance": 0.4, "indirectness": 0.2},
   "attitudes": []}
]}"#;

const TEMPLATES: &str = r#"{
  "question.query": "What does {entity} do for a living?",
  "inform.assert": "{entity}? He's a {value}.",
  "inform.assert@did_action": "Isn't he the one who {value}?",
  "evaluate.assert": "I don't like {entity} much.",
  "evaluate.assert@disappointment": "I can't stand {entity}."
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fb = parse_fact_base(FACTS)?;
    let personas = parse_personas(PERSONAS)?;
    let templates = TemplateSet::parse(TEMPLATES)?;
    let mut cfg = GenerationConfig::new("mike");

    let selection = select_content(&fb, &personas, &cfg)?;
    let assignment = assign_opinions(&distribute(&selection, &fb, &personas)?, &personas, &fb, &cfg);
    for item in &apply_association(&assignment, &fb).items {
        println!(
            "{}: {} answers {}, opinion {:?} held by {}{}",
            item.fact,
            item.informer,
            item.elicitor,
            item.opinion_mode,
            item.opinion_holder
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_default(),
            item.evidence.as_ref().map(|e| format!(" via {e}")).unwrap_or_default(),
        );
    }

    println!("\n-- with association --");
    print!("{}", generate(&fb, &personas, &templates, &cfg)?.transcript());

    cfg.enable_association = false;
    println!("\n-- without association --");
    print!("{}", generate(&fb, &personas, &templates, &cfg)?.transcript());
    Ok(())
}

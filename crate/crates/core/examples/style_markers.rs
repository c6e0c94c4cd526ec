//! A dominant salesperson marks each new topic with stage-setting
//! metadiscourse, up to a fixed number of times.
//!
//! cargo run --example style_markers

use scripted_dialogue::prelude::*;

const FACTS: &str = r#"{
  "entities": [{"id": "car1", "name": "car", "class": "sedan"}],
  "facts": [
    {"id": "f_price", "entity": "car1", "attribute": "price", "value": 24000,
     "valence": 0.2, "emphasis": 0.1, "topic": "finance"},
    {"id": "f_seats", "entity": "car1", "attribute": "seats", "value": 5,
     "valence": 0.1, "emphasis": 0.1, "topic": "comfort"},
    {"id": "f_airbags", "entity": "car1", "attribute": "airbags", "value": 8,
     "valence": 0.3, "emphasis": 0.1, "topic": "safety"}
  ]
}"#;

const PERSONAS: &str = r#"{"personas": [
  {"id": "buyer", "name": "B", "role": {"informer_weight": 0.0, "elicitor_weight": 1.0},
   "interests": {"finance": 1.0, "comfort": 0.5, "safety": 0.8},
   "traits": {"extroversion": 0.5, "agreeableness": 0.6, "dominance": 0.2, "indirectness": 0.2}},
  {"id": "seller", "name": "S", "role": {"informer_weight": 1.0, "elicitor_weight": 0.0},
   "interests": {"finance": 0.5},
   "traits": {"extroversion": 0.9, "agreeableness": 0.6, "dominance": 0.9, "indirectness": 0.2}}
]}"#;

const TEMPLATES: &str = r#"{
  "question.query": "And the {attribute}?",
  "inform.assert": "That would be {value}.",
  "metadiscourse.assert": "Right. Moving on."
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fb = parse_fact_base(FACTS)?;
    let personas = parse_personas(PERSONAS)?;
    let templates = TemplateSet::parse(TEMPLATES)?;

    for cap in [0, 1, 2] {
        let mut cfg = GenerationConfig::new("car1");
        cfg.topic_priority = vec!["finance".into(), "safety".into(), "comfort".into()];
        cfg.max_style_markers = cap;
        let g = generate(&fb, &personas, &templates, &cfg)?;
        println!("-- at most {cap} marker(s), {} inserted --", g.insertions.len());
        print!("{}", g.transcript());
        println!();
    }
    Ok(())
}

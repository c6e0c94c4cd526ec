//! The same act realized twice: after an emphasis subdialogue it gets the
//! short follow-up wording, otherwise the full one.
//!
//! cargo run --example context_realization

use std::path::Path;

use scripted_dialogue::prelude::*;
use scripted_dialogue::realizer::context_flags;

fn fixture(file: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/erasmus")
        .join(file);
    std::fs::read_to_string(path).expect("fixture")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fb = parse_fact_base(&fixture("facts.json"))?;
    let personas = parse_personas(&fixture("personas.json"))?;
    let templates = TemplateSet::parse(&fixture("templates.json"))?;
    let plan = parse_scene(&fixture("step_two.json"))?;

    let mut ids = ["4", "5"].into_iter().map(ActId::from);
    let (emphasized, _) = emphasize_with_ids(&plan, &fb, &GenerationConfig::new("pilgrimage"), &mut ids)?;

    for (label, p) in [("without subdialogue", &plan), ("with subdialogue", &emphasized)] {
        let flags = context_flags(p, &p.linearize()?);
        let flagged: Vec<&str> = flags.iter().map(ActId::as_str).collect();
        println!("-- {label} (follow-up acts: {}) --", flagged.join(", "));
        print!("{}", render_transcript(&realize(p, &personas, &fb, &templates)?));
        println!();
    }
    Ok(())
}

//! Step III on a precomputed plan from the Twain dialogue: an emphasized
//! answer gets an echo question and a confirmation spliced in after it.
//!
//! cargo run --example emphasis_insertion

use std::path::Path;

use scripted_dialogue::prelude::*;

fn fixture(file: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/twain").join(file);
    std::fs::read_to_string(path).expect("fixture")
}

fn show(label: &str, plan: &ScenePlan) -> Result<(), Box<dyn std::error::Error>> {
    let order: Vec<String> = plan.linearize()?.iter().map(ToString::to_string).collect();
    println!("{label}: {}", order.join(", "));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fb = parse_fact_base(&fixture("facts.json"))?;
    let personas = parse_personas(&fixture("personas.json"))?;
    let templates = TemplateSet::parse(&fixture("templates.json"))?;
    let plan = parse_scene(&fixture("step_two.json"))?;
    show("step two", &plan)?;

    // number the new acts the way the source text does
    let mut ids = ["3", "4"].into_iter().map(ActId::from);
    let cfg = GenerationConfig::new("doctrine");
    let (emphasized, records) = emphasize_with_ids(&plan, &fb, &cfg, &mut ids)?;
    show("emphasized", &emphasized)?;
    for r in &records {
        let inserted: Vec<&str> = r.inserted.iter().map(ActId::as_str).collect();
        println!("inserted {} after {}", inserted.join(", "), r.anchor);
    }

    println!();
    print!(
        "{}",
        render_transcript(&realize(&emphasized, &personas, &fb, &templates)?)
    );

    println!();
    let restored = revert(&emphasized, &records);
    show("reverted", &restored)?;
    assert_eq!(restored, plan);
    Ok(())
}

//! Scene documents: serialize a generated plan, read it back, and check
//! a hand-edited one.
//!
//! cargo run --example scene_document

use std::path::Path;

use scripted_dialogue::prelude::*;

fn fixture(file: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/showroom")
        .join(file);
    std::fs::read_to_string(path).expect("fixture")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fb = parse_fact_base(&fixture("facts.json"))?;
    let personas = parse_personas(&fixture("personas.json"))?;
    let templates = TemplateSet::parse(&fixture("templates.json"))?;
    let g = generate(&fb, &personas, &templates, &GenerationConfig::new("car1"))?;

    let doc = serialize_scene(&g.plan);
    print!("{doc}");
    let back = parse_scene(&doc)?;
    println!(
        "round trip identical: {}",
        back == g.plan && serialize_scene(&back) == doc
    );

    // the buyer now talks to themself, and the echo question is left hanging
    let mut edited = back.clone();
    if let Some(a) = edited.acts.get_mut(&ActId::from("x3")) {
        a.addressees = ["buyer".into()].into();
    }
    if let Some(a) = edited.acts.get_mut(&ActId::from("y2")) {
        a.reacts_to.clear();
    }
    for v in validate_plan(&edited).violations {
        println!("violation at {}: {v}", v.act());
    }
    Ok(())
}

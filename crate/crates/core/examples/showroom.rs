//! The car showroom scene, with and without the emphasis subdialogue.
//!
//! cargo run --example showroom

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

    let mut plain = GenerationConfig::new("car1");
    plain.enable_emphasis = false;
    let g = generate(&fb, &personas, &templates, &plain)?;
    println!("-- plain --");
    print!("{}", g.transcript());

    let g = generate(&fb, &personas, &templates, &GenerationConfig::new("car1"))?;
    println!("\n-- with emphasis --");
    print!("{}", g.transcript());

    let mut full = GenerationConfig::new("car1");
    full.include_greeting = true;
    full.include_closing = true;
    let g = generate(&fb, &personas, &templates, &full)?;
    println!("\n-- with greeting and closing --");
    print!("{}", g.transcript());
    Ok(())
}

//! Scene plans keep their order as a set of constraints; linearization
//! resolves it deterministically, and splicing keeps it consistent.
//!
//! cargo run --example partial_order

use scripted_dialogue::prelude::*;

fn act(id: &str, speaker: &str, to: &str) -> DialogueAct {
    DialogueAct::new(
        id,
        ActType::Inform,
        speaker,
        [to.into()],
        SemanticContent::new("greeting", Polarity::Assert),
    )
}

fn order(plan: &ScenePlan) -> String {
    match plan.linearize() {
        Ok(ids) => ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        Err(e) => format!("error: {e}"),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // b and c both follow a but are unordered relative to each other
    let plan = ScenePlan::new(["p".into(), "q".into()])
        .add_act(act("a", "p", "q"), None)?
        .add_act(act("c", "q", "p"), Some(&"a".into()))?
        .add_act(act("b", "q", "p"), Some(&"a".into()))?;
    println!("constraints: {:?}", plan.constraints);
    println!("linearized:  {}", order(&plan));

    let chained = plan.add_act(act("d", "p", "q"), Some(&"c".into()))?;
    println!("after d:     {}", order(&chained));

    let spliced = chained.insert_subsequence(&"a".into(), vec![act("y1", "q", "p"), act("y2", "p", "q")])?;
    println!("spliced:     {}", order(&spliced));
    println!("y2 before b: {}", spliced.precedes(&"y2".into(), &"b".into()));

    // a constraint loop is reported, naming an edge on it
    let mut looped = spliced.clone();
    looped.constraints.insert(("d".into(), "a".into()));
    println!("with d -> a: {}", order(&looped));
    for v in validate_plan(&looped).violations {
        println!("  {v}");
    }
    Ok(())
}

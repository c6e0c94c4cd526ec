//! Property bodies. `tests/properties.rs` drives them through `proptest!`,
//! the acceptance runner through an explicit `TestRunner`.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use scripted_dialogue::distributor::OpinionMode;
use scripted_dialogue::ids::ActId;
use scripted_dialogue::knowledge::{parse_fact_base, parse_personas, serialize_fact_base, serialize_personas};
use scripted_dialogue::pipeline::{generate, Generation};
use scripted_dialogue::realizer::{context_flags, realize};
use scripted_dialogue::scene_ir::{parse_scene, serialize_scene, validate_plan, ActType, ScenePlan};
use scripted_dialogue::strategies::{apply_association, apply_style_markers, emphasize, revert, INSERTED_PREFIX};

use super::{act, all_topological_orders, generic_templates, is_topological, splice_list, Scenario};

type Check = Result<(), TestCaseError>;

fn run(s: &Scenario) -> Result<Generation, TestCaseError> {
    generate(&s.fb, &s.personas, &generic_templates(), &s.cfg)
        .map_err(|e| TestCaseError::fail(format!("generation failed: {e}")))
}

fn is_chain(plan: &ScenePlan) -> bool {
    let n = plan.len();
    if n == 0 {
        return plan.constraints.is_empty();
    }
    let befores: BTreeSet<&ActId> = plan.constraints.iter().map(|(b, _)| b).collect();
    let afters: BTreeSet<&ActId> = plan.constraints.iter().map(|(_, a)| a).collect();
    plan.constraints.len() == n - 1 && befores.len() == n - 1 && afters.len() == n - 1
}

/// Acyclic, backwards-only reactions, answered questions: after every
/// transform and for Step II itself.
pub fn transforms_keep_plan_valid(s: Scenario) -> Check {
    let g = run(&s)?;
    for plan in [&g.step_two, &g.plan] {
        let report = validate_plan(plan);
        prop_assert!(report.is_empty(), "violations: {:?}", report.violations);
        prop_assert!(plan.linearize().is_ok());
    }
    prop_assert!(is_chain(&g.step_two), "step two must be a total order");
    prop_assert!(is_chain(&g.plan));

    let (emph, _) = emphasize(&g.step_two, &s.fb, &s.cfg).unwrap();
    prop_assert!(validate_plan(&emph).is_empty());
    let (styled, _) = apply_style_markers(&g.step_two, &s.personas, &s.fb, &s.cfg).unwrap();
    prop_assert!(validate_plan(&styled).is_empty());
    Ok(())
}

/// Step I partitions the selection; roles are distinct.
pub fn assignment_partitions_selection(s: Scenario) -> Check {
    let g = run(&s)?;
    let mut assigned: Vec<_> = g.assignment.fact_ids().cloned().collect();
    let mut selected = g.selection.facts.clone();
    assigned.sort();
    selected.sort();
    prop_assert_eq!(assigned, selected);
    for item in &g.assignment.items {
        prop_assert_ne!(&item.informer, &item.elicitor);
        if let Some(holder) = &item.opinion_holder {
            prop_assert_ne!(holder, &item.informer);
        }
        prop_assert_eq!(item.opinion_holder.is_some(), item.opinion_mode != OpinionMode::None);
    }
    let once = apply_association(&g.assignment, &s.fb);
    prop_assert_eq!(apply_association(&once, &s.fb), once);
    Ok(())
}

/// Step II shape: act count, answer/question pairing, x-numbering.
pub fn step_two_shape(s: Scenario) -> Check {
    let g = run(&s)?;
    let items = g.assignment.items.len();
    let opinions = g
        .assignment
        .items
        .iter()
        .filter(|i| i.opinion_mode != OpinionMode::None)
        .count();
    let expected = 2 * items + opinions + usize::from(s.cfg.include_greeting) + usize::from(s.cfg.include_closing);
    prop_assert_eq!(g.step_two.len(), expected);
    for a in g.step_two.acts.values() {
        prop_assert!(a.id.as_str().starts_with('x'));
        let answered: Vec<_> = a
            .reacts_to
            .iter()
            .map(|r| &g.step_two.acts[r])
            .filter(|r| r.act_type == ActType::Question)
            .collect();
        if a.act_type == ActType::Inform && !answered.is_empty() {
            prop_assert_eq!(a.reacts_to.len(), 1);
            prop_assert_eq!(&answered[0].content.proposition, &a.content.proposition);
        }
    }

    let mut off = s.cfg.clone();
    off.enable_emphasis = false;
    off.enable_association = false;
    off.enable_style_markers = false;
    let plain = run(&Scenario { cfg: off, ..s.clone() })?;
    prop_assert_eq!(&plain.plan, &plain.step_two);
    Ok(())
}

/// Deleting inserted acts gives back the Step II plan; the original acts
/// keep their relative order; emphasized content is mentioned three times.
pub fn insertions_are_reversible(s: Scenario) -> Check {
    let g = run(&s)?;
    let restored = revert(&g.plan, &g.insertions);
    prop_assert_eq!(restored.linearize().unwrap(), g.step_two.linearize().unwrap());
    prop_assert_eq!(&restored, &g.step_two);

    let order = g.plan.linearize().unwrap();
    let originals: Vec<ActId> = order
        .iter()
        .filter(|id| !id.as_str().starts_with(INSERTED_PREFIX))
        .cloned()
        .collect();
    prop_assert_eq!(originals, g.step_two.linearize().unwrap());

    if s.cfg.enable_emphasis {
        for a in g.step_two.acts.values() {
            let Some(fact) = s.fb.fact(&a.content.proposition) else {
                continue;
            };
            if a.act_type == ActType::Inform && fact.emphasis >= s.cfg.emphasis_threshold {
                let mentions = g
                    .plan
                    .acts
                    .values()
                    .filter(|b| b.content.proposition == a.content.proposition)
                    .count();
                prop_assert!(mentions >= 3);
            }
        }
    }

    let (again, records) = emphasize(&g.plan, &s.fb, &s.cfg).unwrap();
    prop_assert!(records.is_empty());
    prop_assert_eq!(&again, &g.plan);
    let (again, records) = apply_style_markers(&g.plan, &s.personas, &s.fb, &s.cfg).unwrap();
    prop_assert!(records.is_empty());
    prop_assert_eq!(&again, &g.plan);
    Ok(())
}

/// Documents round-trip exactly.
pub fn documents_round_trip(s: Scenario) -> Check {
    let g = run(&s)?;
    let doc = serialize_scene(&g.plan);
    let parsed = parse_scene(&doc).unwrap();
    prop_assert_eq!(&parsed, &g.plan);
    prop_assert_eq!(serialize_scene(&parsed), doc);

    prop_assert_eq!(parse_fact_base(&serialize_fact_base(&s.fb)).unwrap(), s.fb.clone());
    prop_assert_eq!(
        parse_personas(&serialize_personas(&s.personas)).unwrap(),
        s.personas.clone()
    );
    Ok(())
}

/// Two runs on equal inputs agree byte for byte.
pub fn runs_are_deterministic(s: Scenario) -> Check {
    let a = run(&s)?;
    let b = run(&s.clone())?;
    prop_assert_eq!(a.scene_document(), b.scene_document());
    prop_assert_eq!(a.transcript(), b.transcript());
    Ok(())
}

/// Realization never touches the plan, fills every placeholder, and only
/// changes an act's text when its context flag changes.
pub fn realization_is_context_sensitive(s: Scenario) -> Check {
    let g = run(&s)?;
    let templates = generic_templates();
    let script = realize(&g.plan, &s.personas, &s.fb, &templates).unwrap();
    prop_assert_eq!(&script.source_plan, &g.plan);
    let order: Vec<&ActId> = script.entries.iter().map(|e| &e.act).collect();
    let expected = g.plan.linearize().unwrap();
    prop_assert_eq!(order, expected.iter().collect::<Vec<_>>());
    for e in &script.entries {
        prop_assert!(!e.text.contains('{') && !e.text.contains('}'), "unfilled: {}", e.text);
    }

    let mut cfg = s.cfg.clone();
    cfg.enable_emphasis = true;
    let (enhanced, _) = emphasize(&g.step_two, &s.fb, &cfg).unwrap();
    let before = realize(&g.step_two, &s.personas, &s.fb, &templates).unwrap();
    let after = realize(&enhanced, &s.personas, &s.fb, &templates).unwrap();
    let flags_before = context_flags(&g.step_two, &g.step_two.linearize().unwrap());
    let flags_after = context_flags(&enhanced, &enhanced.linearize().unwrap());
    for entry in &before.entries {
        let other = after.entries.iter().find(|e| e.act == entry.act).unwrap();
        if flags_before.contains(&entry.act) == flags_after.contains(&entry.act) {
            prop_assert_eq!(&entry.text, &other.text);
        }
    }
    Ok(())
}

/// Linearization is topological and the lexicographically smallest such
/// order.
pub fn linearize_is_least_topological(plan: ScenePlan) -> Check {
    let got = plan.linearize().unwrap();
    prop_assert_eq!(got.len(), plan.len());
    prop_assert!(is_topological(&got, &plan.constraints));
    let nodes: Vec<ActId> = plan.acts.keys().cloned().collect();
    let best = all_topological_orders(&nodes, &plan.constraints)
        .into_iter()
        .min()
        .unwrap();
    prop_assert_eq!(got, best);
    Ok(())
}

/// On a totally ordered plan, inserting after an anchor is list splicing.
pub fn insertion_splices_linearization((plan, anchor, k): (ScenePlan, usize, usize)) -> Check {
    let before = plan.linearize().unwrap();
    let anchor = before[anchor % before.len()].clone();
    let new: Vec<_> = (1..=k)
        .map(|i| {
            let (s, a) = if i % 2 == 1 { ("q", "p") } else { ("p", "q") };
            act(&format!("y{i}"), ActType::Inform, s, a, "f")
        })
        .collect();
    let new_ids: Vec<ActId> = new.iter().map(|a| a.id.clone()).collect();
    let after = plan.insert_subsequence(&anchor, new).unwrap();
    prop_assert_eq!(after.linearize().unwrap(), splice_list(&before, &anchor, &new_ids));
    Ok(())
}

/// Arbitrary sequences of add and insert keep the order acyclic and every
/// reaction pointing backwards; operations the plan rejects leave it alone.
pub fn edits_keep_order_sound(ops: Vec<(bool, usize, bool)>) -> Check {
    let mut plan = ScenePlan::new(["p".into(), "q".into()]);
    for (n, (insert, pick, react)) in ops.into_iter().enumerate() {
        let existing: Vec<ActId> = plan.acts.keys().cloned().collect();
        let anchor = (!existing.is_empty()).then(|| existing[pick % existing.len()].clone());
        let id = format!("n{n}");
        let mut a = act(&id, ActType::Inform, "p", "q", "f");
        if react {
            if let Some(target) = &anchor {
                a = a.reacting_to(target.clone());
            }
        }
        let next = match (&anchor, insert) {
            (Some(anchor), true) => plan.insert_subsequence(anchor, vec![a]),
            (anchor, _) => plan.add_act(a, anchor.as_ref()),
        };
        if let Ok(next) = next {
            plan = next;
        }
        let report = validate_plan(&plan);
        prop_assert!(report.is_empty(), "{:?}", report.violations);
    }
    Ok(())
}

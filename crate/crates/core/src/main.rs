use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use scripted_dialogue::config::GenerationConfig;
use scripted_dialogue::pipeline::{run_pipeline, PipelineRun};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    /// The scene document.
    #[value(name = "json-like")]
    JsonLike,
    /// The transcript.
    Text,
}

/// Generate a scripted dialogue from a fact base and a persona roster.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(long)]
    facts: PathBuf,
    #[arg(long)]
    personas: PathBuf,
    #[arg(long)]
    templates: PathBuf,
    /// Entity to talk about; defaults to the only entity in the fact base.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    out_scene: Option<PathBuf>,
    #[arg(long)]
    out_transcript: Option<PathBuf>,
    #[arg(long)]
    emphasis_threshold: Option<f64>,
    /// Comma-separated topics, most important first.
    #[arg(long, value_delimiter = ',')]
    topic_priority: Vec<String>,
    #[arg(long)]
    no_emphasis: bool,
    #[arg(long)]
    no_association: bool,
    #[arg(long)]
    no_style: bool,
    #[arg(long)]
    greeting: bool,
    #[arg(long)]
    closing: bool,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();

    let mut config = GenerationConfig::new(args.target.unwrap_or_default());
    if let Some(t) = args.emphasis_threshold {
        config.emphasis_threshold = t;
    }
    config.topic_priority = args.topic_priority;
    config.enable_emphasis = !args.no_emphasis;
    config.enable_association = !args.no_association;
    config.enable_style_markers = !args.no_style;
    config.include_greeting = args.greeting;
    config.include_closing = args.closing;

    let run = PipelineRun {
        config,
        facts: args.facts,
        personas: args.personas,
        templates: args.templates,
        out_scene: args.out_scene,
        out_transcript: args.out_transcript,
    };
    match run_pipeline(&run) {
        Ok(out) => {
            match args.format {
                Format::JsonLike => print!("{}", out.scene_document),
                Format::Text => print!("{}", out.transcript),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            for line in err.diagnostics() {
                eprintln!("{line}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

//! `montel <command> [--input FILE|-] [--output FILE|-] [--pretty] [--seed N]`
//!
//! The input file holds the command's params object. `montel run` instead
//! reads a full `{"command": ..., "params": ...}` request.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use montel::cli::{dispatch, Command, CommandRequest, Response};
use montel::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "montel", version, about = "Exact finite-difference calculus on integer lattices, over JSON")]
struct Args {
    /// Command name such as `solve` or `lattice-check`, or `run` for a full request.
    command: String,
    /// Params file, `-` for stdin. Without it params are `{}` plus the flags below.
    #[arg(long)]
    input: Option<String>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: String,
    #[arg(long)]
    pretty: bool,
    /// Seed for `self-test`.
    #[arg(long)]
    seed: Option<u64>,
    /// Window radius for `counterexample`.
    #[arg(long)]
    radius: Option<u32>,
    /// Largest pure difference order for `counterexample`.
    #[arg(long)]
    max_order: Option<u32>,
}

fn read_input(path: &str) -> io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn build_request(args: &Args) -> Result<CommandRequest, Error> {
    let text = args
        .input
        .as_deref()
        .map(read_input)
        .transpose()
        .map_err(|e| Error::InvalidInput(format!("cannot read input: {e}")))?;
    let mut request = if args.command == "run" {
        CommandRequest::parse(text.as_deref().unwrap_or("{}"))?
    } else {
        let command: Command = args.command.parse()?;
        let params = match text {
            Some(t) => serde_json::from_str(&t).map_err(|e| Error::Parse(e.to_string()))?,
            None => json!({}),
        };
        CommandRequest::new(command, params)
    };
    let Value::Object(map) = &mut request.params else {
        return Err(Error::InvalidInput("params must be a JSON object".into()));
    };
    if let Some(s) = args.seed {
        map.insert("seed".into(), json!(s));
    }
    if let Some(r) = args.radius {
        map.insert("radius".into(), json!(r));
    }
    if let Some(k) = args.max_order {
        map.insert("maxOrder".into(), json!(k));
    }
    Ok(request)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let response = match build_request(&args) {
        Ok(r) => dispatch(&r),
        Err(e) => Response::error(&e),
    };
    let text = response.render(args.pretty);
    let written =
        if args.output == "-" { io::stdout().write_all(text.as_bytes()) } else { fs::write(&args.output, text) };
    if let Err(e) = written {
        eprintln!("montel: cannot write output: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(response.exit_code as u8)
}

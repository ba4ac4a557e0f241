//! The JSON request interface shared with the `montel` binary.

use montel::cli::{dispatch_str, Command};

fn main() {
    let requests = [
        r#"{"command": "lattice-check", "params": {"steps": [[2], [3]]}}"#,
        r#"{"command": "verify", "params": {"f": {"dim": 1, "terms": [{"alpha": [2], "coeff": "1"}]}, "steps": [[1]], "m": 2}}"#,
        r#"{"command": "counterexample", "params": {"radius": 2, "maxOrder": 3}}"#,
        r#"{"command": "nope"}"#,
    ];
    for text in requests {
        let response = dispatch_str(text);
        print!("exit {} <- {text}\n  {}", response.exit_code, response.render(false));
    }
    let names: Vec<String> = Command::ALL.iter().map(|c| c.name()).collect();
    println!("commands: {}", names.join(", "));
}

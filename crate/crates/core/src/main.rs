use std::io::{Read, Write};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    // Standard input is consumed only by commands that take `-`.
    let wants_stdin = argv.iter().skip(1).any(|a| a == "-");
    let mut stdin = String::new();
    if wants_stdin {
        if let Err(e) = std::io::stdin().read_to_string(&mut stdin) {
            eprintln!("error: cannot read standard input: {e}");
            std::process::exit(2);
        }
    }
    let (code, out, err) = hahn::cli::run_command(&argv, &stdin);
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    std::process::exit(code);
}

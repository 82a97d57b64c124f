use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = fintetris_cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let code = match out.flush() {
        Ok(()) => code,
        Err(_) => fintetris_cli::EXIT_ERROR,
    };
    std::process::exit(code);
}

use std::io::Write;

fn main() {
    let (code, out) = spinrecouple::cli::run(std::env::args().skip(1));
    let _ = std::io::stdout().write_all(out.as_bytes());
    std::process::exit(code);
}

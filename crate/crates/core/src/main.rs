use std::io::Write;

fn main() {
    let outcome = sonine::cli::run(std::env::args_os());
    let text = outcome.text.as_bytes();
    let written = if outcome.code == 0 || outcome.code == 1 && !outcome.text.starts_with("error:") {
        std::io::stdout().write_all(text)
    } else {
        std::io::stderr().write_all(text)
    };
    if written.is_err() && outcome.code == 0 {
        std::process::exit(1);
    }
    std::process::exit(outcome.code);
}

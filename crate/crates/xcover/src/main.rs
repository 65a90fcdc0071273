use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = xcover::cli::main_with(std::env::args(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}

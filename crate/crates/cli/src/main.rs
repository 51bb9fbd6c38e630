use std::io;

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = rpq_cli::main_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}

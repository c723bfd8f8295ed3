use std::io;

fn main() {
    let env = std::env::var(greedy_cli::THREADS_ENV).ok();
    let code = greedy_cli::run(std::env::args_os(), env.as_deref(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}

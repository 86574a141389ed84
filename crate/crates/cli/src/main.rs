use std::io::Write;

fn main() {
    let exit = k3sv_cli::run(std::env::args_os());
    std::io::stdout().write_all(exit.stdout.as_bytes()).ok();
    std::io::stderr().write_all(exit.stderr.as_bytes()).ok();
    std::process::exit(exit.code);
}

fn main() {
    std::process::exit(hyperfractal_cli::run(std::env::args_os()));
}

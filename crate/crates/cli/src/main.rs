fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(pomalg_cli::run(&args));
}

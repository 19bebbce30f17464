fn main() {
    std::process::exit(enemyforge::cli::main(std::env::args_os()));
}

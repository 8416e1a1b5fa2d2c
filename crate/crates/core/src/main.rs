fn main() {
    std::process::exit(magphon::cli::run(std::env::args_os()));
}

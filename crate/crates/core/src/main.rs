fn main() {
    std::process::exit(affinity_discord::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(twogroups::cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(bfdx::run(std::env::args_os()));
}

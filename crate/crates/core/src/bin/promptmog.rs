fn main() {
    std::process::exit(promptmog::cli::main());
}

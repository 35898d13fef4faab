fn main() {
    std::process::exit(eulertrail::cli::main_with_large_stack());
}

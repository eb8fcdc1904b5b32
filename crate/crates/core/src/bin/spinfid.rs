fn main() {
    std::process::exit(spin_fidelity::cli::run());
}

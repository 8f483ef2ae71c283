fn main() {
    std::process::exit(modseq::cli::run());
}

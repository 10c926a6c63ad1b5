fn main() {
    std::process::exit(recip_sums::cli::run());
}

fn main() {
    std::process::exit(latent_truth::cli::run_from_args(std::env::args_os()));
}

//! Command-line entry point; see `surface_census::cli`.

fn main() {
    std::process::exit(surface_census::cli::main_with_args(std::env::args_os()));
}

fn main() { std::process::exit(euler_voigt::cli::cli_main(std::env::args_os())); }

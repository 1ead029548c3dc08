fn main() { std::process::exit(fdpgen::cli::run(std::env::args_os())); }

fn main() { std::process::exit(kobdd::cli::main()) }

fn main() { std::process::exit(edgewalk::cli::main()) }

use clap::Parser;
use homcone::cli::{execute, RunConfig};

fn main() {
    std::process::exit(execute(&RunConfig::parse()));
}

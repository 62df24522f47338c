use clap::Parser;
use morrey_embed::cli::{main_with, Args};

fn main() {
    std::process::exit(main_with(Args::parse()));
}

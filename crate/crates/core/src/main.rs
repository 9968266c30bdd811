use clap::Parser;
use polyinv::cli::{run, CliConfig};

fn main() {
    let cfg = CliConfig::parse();
    let code = run(&cfg, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}

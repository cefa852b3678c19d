use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().filter("QF_LOG")).init();
    let cli = match quadforge_cli::Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let err = quadforge_cli::CliError::Config(e.to_string());
            eprint!("{e}");
            println!("{}", err.to_json());
            std::process::exit(2);
        }
        Err(e) => e.exit(),
    };
    std::process::exit(quadforge_cli::run(&cli));
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BOOLSDR_LOG", "warn")).init();
    std::process::exit(boolsdr::cli::run(std::env::args_os()));
}

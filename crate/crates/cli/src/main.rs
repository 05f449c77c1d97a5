fn main() {
    std::process::exit(thermal_ent_cli::run(std::env::args_os()));
}

fn main() {
    if let Err(e) = popgcn::cli::run() {
        eprintln!("error[{}]: {e}", e.category());
        std::process::exit(e.exit_code());
    }
}

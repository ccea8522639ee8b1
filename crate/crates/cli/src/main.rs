fn main() {
    std::process::exit(vdkernel_cli::run(std::env::args_os()));
}

fn main() {
    std::process::exit(numdiff::run(std::env::args_os()));
}

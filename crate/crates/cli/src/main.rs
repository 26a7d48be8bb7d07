fn main() {
    std::process::exit(accentgram::run(std::env::args_os()));
}

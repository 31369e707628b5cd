fn main() {
    let (code, out) = netclosure::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}

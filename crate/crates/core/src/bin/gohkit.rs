use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = gohkit::cli::run(&args, &mut std::io::stdin().lock());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}

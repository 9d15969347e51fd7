//! Drive the command-line front end from code, piping a demo frame through it.
//!
//!     cargo run --example cli_in_process

use gohkit::cli::run;

fn main() {
    let demo = run(&["gohkit", "demo", "dim4"], &mut std::io::empty());
    print!("{}", demo.stdout);

    for args in [
        vec!["gohkit", "certify"],
        vec!["gohkit", "singular-set"],
        vec!["gohkit", "--json", "bracket-check", "--depth", "2"],
    ] {
        let out = run(&args, &mut demo.stdout.as_bytes());
        println!("$ {} (exit {})", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
    }
}

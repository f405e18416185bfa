//! Build the same JSON run report the `qproof prove` command prints.

use qproof::cli::{prove_report, Method, ProveOptions};

fn main() {
    for (text, method) in [
        ("A*(B*(C*D)) |- D*(B*(A*C))", Method::Pairdb),
        ("A, B |- A*B", Method::Splitsearch),
        ("A |- B", Method::Classical),
    ] {
        let opts = ProveOptions {
            method,
            seed: 7,
            ..ProveOptions::default()
        };
        let report = prove_report(text, &opts).unwrap();
        println!(
            "# {text} ({}) -> exit {}",
            method.name(),
            report.exit_code()
        );
        print!("{}", report.to_json());
    }
}

//! Drive the command line in-process and inspect exit codes and output.

use berger_conformal::cli::run;

fn main() {
    let runs: [&[&str]; 5] = [
        &["validate", "flat2"],
        &["harmonic", "flat2", "--direction", "from-deformed"],
        &[
            "biharmonic",
            "flat2",
            "--direction",
            "to-deformed",
            "--samples",
            "50",
        ],
        &[
            "compare",
            "flat2",
            "--formula",
            "scalar,connection",
            "--samples",
            "50",
            "--json",
        ],
        &["compare", "flat2", "--formula", "torsion"],
    ];
    for args in runs {
        let out = run(std::iter::once("berger").chain(args.iter().copied()));
        println!("$ berger {}   (exit {})", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
    }
}

//! Charts that ship with the crate, addressable by name wherever a manifest
//! path is accepted.

use crate::chart::{ChartSource, ManifoldSpec};

pub const BUILTIN_NAMES: &[&str] = &["flat2", "flat4", "curved4", "flat2-affine", "line1"];

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn matrix(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| strings(r)).collect()
}

/// The text form of a built-in chart.
pub fn builtin_source(name: &str) -> Option<ChartSource> {
    let src = match name {
        "flat2" | "flat2-affine" => ChartSource {
            name: name.to_string(),
            coordinates: strings(&["x", "y"]),
            metric: matrix(&[&["1", "0"], &["0", "1"]]),
            f: Some(matrix(&[&["0", "1"], &["1", "0"]])),
            v: Some(strings(&["1", "0"])),
            alpha: Some(
                if name == "flat2" {
                    "1 + x^2"
                } else {
                    "1 + x/10"
                }
                .to_string(),
            ),
            domain: vec![(-2.0, 2.0); 2],
        },
        "flat4" => ChartSource {
            name: name.to_string(),
            coordinates: strings(&["x1", "x2", "x3", "x4"]),
            metric: matrix(&[
                &["1", "0", "0", "0"],
                &["0", "1", "0", "0"],
                &["0", "0", "1", "0"],
                &["0", "0", "0", "1"],
            ]),
            f: Some(matrix(&[
                &["0", "1", "0", "0"],
                &["1", "0", "0", "0"],
                &["0", "0", "0", "1"],
                &["0", "0", "1", "0"],
            ])),
            v: Some(strings(&["0", "0", "1", "0"])),
            alpha: Some("1 + x2^2".to_string()),
            domain: vec![(-2.0, 2.0); 4],
        },
        // product of a conformally flat plane and a flat plane, F = ±1 on the factors
        "curved4" => {
            let warp = "exp(2*(x1/3 + x1^2/5))";
            ChartSource {
                name: name.to_string(),
                coordinates: strings(&["x1", "x2", "x3", "x4"]),
                metric: matrix(&[
                    &[warp, "0", "0", "0"],
                    &["0", warp, "0", "0"],
                    &["0", "0", "1", "0"],
                    &["0", "0", "0", "1"],
                ]),
                f: Some(matrix(&[
                    &["1", "0", "0", "0"],
                    &["0", "1", "0", "0"],
                    &["0", "0", "-1", "0"],
                    &["0", "0", "0", "-1"],
                ])),
                v: Some(strings(&["0", "0", "1", "0"])),
                alpha: Some("2 + x1^2/3 + cos(x2)/2 + x4/5".to_string()),
                domain: vec![(-1.0, 1.0); 4],
            }
        }
        "line1" => ChartSource {
            name: name.to_string(),
            coordinates: strings(&["t"]),
            metric: matrix(&[&["1"]]),
            f: None,
            v: None,
            alpha: None,
            domain: vec![(-1.0, 1.0)],
        },
        _ => return None,
    };
    Some(src)
}

pub fn builtin(name: &str) -> Option<ManifoldSpec> {
    builtin_source(name).map(|s| ManifoldSpec::compile(&s, None).expect("built-in charts compile"))
}

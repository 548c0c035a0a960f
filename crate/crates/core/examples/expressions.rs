//! Parse a coordinate expression, print its canonical form and read exact
//! derivatives off a third-order jet.

use berger_conformal::expr::{eval_jet3, parse_expression};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let coords = ["x", "y"];
    let e = parse_expression("exp(2*(x/3 + x^2/5)) * cos(y) - sqrt(1 + y^2)", &coords)?;
    println!("canonical: {e}");

    let p = [0.4, -0.7];
    let j = eval_jet3(&e, &p)?;
    println!("value      {:.12}", j.value());
    println!("gradient   {:?}", j.grad());
    println!("d2/dxdy    {:.12}", j.d2(0, 1));
    println!("d3/dx3     {:.12}", j.d3(0, 0, 0));

    // central difference on the first partial, for comparison
    let h = 1e-5;
    let f = |x: f64| eval_jet3(&e, &[x, p[1]]).map(|j| j.value());
    let fd = (f(p[0] + h)? - f(p[0] - h)?) / (2.0 * h);
    println!("fd d/dx    {fd:.12}  (jet {:.12})", j.d1(0));

    for bad in ["x +", "sin x", "z + 1", "sqrt(-1 - x^2)"] {
        match parse_expression(bad, &coords).and_then(|e| eval_jet3(&e, &p)) {
            Ok(j) => println!("{bad:>16} -> {}", j.value()),
            Err(err) => println!("{bad:>16} -> {err}"),
        }
    }
    Ok(())
}

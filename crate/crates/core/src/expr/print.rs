use super::Node;

/// Fully parenthesised rendering: every compound subterm is wrapped, so the
/// printed text parses back to the same tree regardless of precedence.
pub(super) fn print_node(node: &Node, coordinates: &[String]) -> String {
    let mut out = String::new();
    write_node(node, coordinates, &mut out);
    out
}

fn write_node(node: &Node, coordinates: &[String], out: &mut String) {
    match node {
        // Display for f64 is the shortest text that parses back to the same value.
        Node::Number(v) => out.push_str(&format!("{v}")),
        Node::Constant(c) => out.push_str(c.name()),
        Node::Var(k) => out.push_str(&coordinates[*k]),
        Node::Neg(a) => {
            out.push_str("(-");
            write_node(a, coordinates, out);
            out.push(')');
        }
        Node::Binary(op, a, b) => {
            out.push('(');
            write_node(a, coordinates, out);
            out.push(' ');
            out.push(op.symbol());
            out.push(' ');
            write_node(b, coordinates, out);
            out.push(')');
        }
        Node::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_node(a, coordinates, out);
            out.push(')');
        }
    }
}

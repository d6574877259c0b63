use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::algebra::Algebra;
use crate::scalar::Scalar;

fn term(out: &mut String, first: bool, c: &Scalar, name: Option<&str>) {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let abs = c.abs();
    match name {
        Some(n) if abs.is_one() => out.push_str(n),
        Some(n) => {
            let _ = write!(out, "{abs}*{n}");
        }
        None => {
            let _ = write!(out, "{abs}");
        }
    }
}

/// Renders an algebra in the text format; zero products and unit products are omitted.
pub fn print_algebra(a: &Algebra, name: &str) -> String {
    let names = a.names();
    let mut out = format!("algebra {name} {{\n  basis {};\n", names.join(", "));
    if names[0] != "1" {
        let _ = writeln!(out, "  unit {};", names[0]);
    }
    let m = a.dim();
    for i in 1..m {
        for j in 1..m {
            let terms = a.product_terms(i, j);
            if terms.is_empty() {
                continue;
            }
            let mut rhs = String::new();
            for (n, (k, c)) in terms.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                term(&mut rhs, n == 0, c, Some(&names[*k]));
            }
            let _ = writeln!(out, "  {}*{} = {};", names[i], names[j], rhs);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::dsl::{elaborate, parse};

    #[test]
    fn round_trip_builtins() {
        for a in [
            builtins::dual(),
            builtins::matrix(2),
            builtins::upper(3),
            builtins::truncpoly(4),
            builtins::product(&builtins::dual(), &builtins::field()),
            builtins::group_algebra(&builtins::cyclic(3)),
        ] {
            let text = print_algebra(&a, "a");
            let back = elaborate(&parse(&text).unwrap()).unwrap();
            assert_eq!(*back, *a, "{text}");
        }
    }

    #[test]
    fn negative_coefficients_printed() {
        let text = print_algebra(&builtins::matrix(2), "m");
        assert!(text.contains("e12*e21 = 1 - e22;"), "{text}");
    }
}

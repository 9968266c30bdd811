use std::fmt;

use num_traits::{One, Signed};

use super::{format_rational, Monomial, Polynomial, Ring, TermOrder};

impl Polynomial {
    /// Render with terms in descending `ord` order, e.g.
    /// `2*y^6 - 6*y^5 + 5*y^4 - y^2 - 12*x`.
    pub fn render(&self, ord: TermOrder) -> String {
        let terms = self.terms_desc(ord);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mono = render_monomial(self.ring(), m);
            if mono.is_empty() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

/// `x^2*y`, or the empty string for the unit monomial.
pub(crate) fn render_monomial(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &e) in ring.names().iter().zip(m.exponents()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl Monomial {
    pub fn render(&self, ring: &Ring) -> String {
        let s = render_monomial(ring, self);
        if s.is_empty() {
            "1".to_string()
        } else {
            s
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(TermOrder::GradedLex))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

use super::{same_ring, PolyError, Polynomial, Rational, TermOrder};

impl Polynomial {
    /// Single-divisor division: `self = q * g + r` where no term of `r` is
    /// divisible by the leading monomial of `g`.
    pub fn divide(&self, g: &Polynomial, ord: TermOrder) -> Result<(Polynomial, Polynomial), PolyError> {
        if !same_ring(self.ring(), g.ring()) {
            return Err(PolyError::RingMismatch);
        }
        let (lm_g, lc_g) = match g.leading_term(ord) {
            Ok((m, c)) => (m.clone(), c.clone()),
            Err(_) => return Err(PolyError::DivisionByZero),
        };
        let lc_inv = lc_g.recip();
        let mut p = self.clone();
        let mut q = Polynomial::zero(self.ring());
        let mut r = Polynomial::zero(self.ring());
        while let Ok((lm_p, lc_p)) = p.leading_term(ord) {
            let (lm_p, lc_p) = (lm_p.clone(), lc_p.clone());
            match lm_g.quotient_of(&lm_p) {
                Some(t) => {
                    let c = lc_p * &lc_inv;
                    p.add_scaled_shifted(&-c.clone(), &t, g);
                    q.add_term(t, c);
                }
                None => {
                    p.remove_term(&lm_p);
                    r.add_term(lm_p, lc_p);
                }
            }
        }
        Ok((q, r))
    }

    /// Whether `self` divides `f` exactly; returns the quotient when it does.
    pub fn exact_quotient(&self, f: &Polynomial, ord: TermOrder) -> Result<Option<Polynomial>, PolyError> {
        let (q, r) = f.divide(self, ord)?;
        Ok(r.is_zero().then_some(q))
    }
}

/// Remainder of `f` modulo a list of divisors (multivariate division).
pub fn reduce(f: &Polynomial, divisors: &[Polynomial], ord: TermOrder) -> Result<Polynomial, PolyError> {
    let mut leads = Vec::with_capacity(divisors.len());
    for g in divisors {
        if !same_ring(f.ring(), g.ring()) {
            return Err(PolyError::RingMismatch);
        }
        let (m, c) = g.leading_term(ord).map_err(|_| PolyError::DivisionByZero)?;
        leads.push((m.clone(), c.recip()));
    }
    let mut p = f.clone();
    let mut r = Polynomial::zero(f.ring());
    while let Ok((lm_p, lc_p)) = p.leading_term(ord) {
        let (lm_p, lc_p) = (lm_p.clone(), lc_p.clone());
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(i, (lm, inv))| lm.quotient_of(&lm_p).map(|t| (i, t, inv)));
        match hit {
            Some((i, t, inv)) => {
                let c: Rational = lc_p * inv;
                p.add_scaled_shifted(&-c, &t, &divisors[i]);
            }
            None => {
                p.remove_term(&lm_p);
                r.add_term(lm_p, lc_p);
            }
        }
    }
    Ok(r)
}

use std::cmp::Ordering;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    /// All monomials of total degree `degree` in `nvars` variables, in
    /// descending lexicographic order of exponent vectors.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if degree == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(0, degree, &mut vec![0; nvars], &mut out);
        out
    }
}

/// Admissible monomial orders used by the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic with `x1 > x2 > ...`.
    GrevLex,
    /// Grevlex on the first `split` variables, ties broken by grevlex on the
    /// remaining ones. Eliminates the first block.
    BlockGrevLex { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::BlockGrevLex { split } => {
                grevlex(&a.0[..split], &b.0[..split]).then_with(|| grevlex(&a.0[split..], &b.0[split..]))
            }
        }
    }

    /// A key whose lexicographic order is this monomial order.
    pub fn sort_key(&self, m: &Monomial) -> Vec<i64> {
        fn push(out: &mut Vec<i64>, e: &[u32]) {
            out.push(e.iter().map(|&x| x as i64).sum());
            out.extend(e.iter().rev().map(|&x| -(x as i64)));
        }
        let mut out = Vec::with_capacity(m.0.len() + 2);
        match *self {
            MonomialOrder::GrevLex => push(&mut out, &m.0),
            MonomialOrder::BlockGrevLex { split } => {
                push(&mut out, &m.0[..split]);
                push(&mut out, &m.0[split..]);
            }
        }
        out
    }

    pub fn tag(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".to_string(),
            MonomialOrder::BlockGrevLex { split } => format!("block-grevlex:{split}"),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::GrevLex;
        for a in Monomial::all_of_degree(3, 2).iter().chain(&Monomial::all_of_degree(3, 3)) {
            for b in Monomial::all_of_degree(3, 3) {
                assert_eq!(o.sort_key(a).cmp(&o.sort_key(&b)), o.cmp(a, &b));
                let blk = MonomialOrder::BlockGrevLex { split: 1 };
                assert_eq!(blk.sort_key(a).cmp(&blk.sort_key(&b)), blk.cmp(a, &b));
            }
        }
        // x1 > x2 > x3
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        // x1 x3 < x2^2 in grevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        // degree first
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[2, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_prefers_first_block() {
        let o = MonomialOrder::BlockGrevLex { split: 1 };
        assert_eq!(o.cmp(&m(&[3, 0]), &m(&[0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn enumerate_degree() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(1, 4), vec![m(&[4])]);
        assert_eq!(Monomial::all_of_degree(2, 0), vec![m(&[0, 0])]);
    }

    #[test]
    fn division() {
        assert_eq!(m(&[2, 1]).div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(m(&[2, 0]).div(&m(&[1, 1])), None);
        assert!(m(&[1, 0]).is_coprime(&m(&[0, 3])));
    }
}

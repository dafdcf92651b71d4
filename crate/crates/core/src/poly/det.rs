use super::monomial::MonomialOrder;
use super::polynomial::Polynomial;
use super::PolyError;

/// Determinant of a square matrix of polynomials in `nvars` variables.
///
/// Cofactor expansion up to 3x3, fraction-free (Bareiss) elimination above.
pub fn det(nvars: usize, m: &[Vec<Polynomial>]) -> Result<Polynomial, PolyError> {
    let n = m.len();
    if let Some((row, r)) = m.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(PolyError::NonSquare { rows: n, row, cols: r.len() });
    }
    Ok(match n {
        0 => Polynomial::one(nvars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        3 => {
            let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
            let t0 = &m[0][0] * &minor(1, 2);
            let t1 = &m[0][1] * &minor(0, 2);
            let t2 = &m[0][2] * &minor(0, 1);
            &(&t0 - &t1) + &t2
        }
        _ => bareiss(nvars, m),
    })
}

fn bareiss(nvars: usize, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut negate = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev, MonomialOrder::GrevLex).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Z-basis of `{ x ∈ Z^n : A x = 0 }` via column Hermite reduction with a unimodular transform.
pub fn integer_kernel_basis(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // u[j] is column j of the transform, stored as a vector
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut p = 0;
    for i in 0..m.len() {
        if p == n {
            break;
        }
        loop {
            let pick = (p..n)
                .filter(|&j| !m[i][j].is_zero())
                .min_by(|&x, &y| m[i][x].abs().cmp(&m[i][y].abs()).then(x.cmp(&y)));
            let Some(j0) = pick else { break };
            swap_cols(&mut m, &mut u, p, j0);
            let mut done = true;
            for j in p + 1..n {
                if m[i][j].is_zero() {
                    continue;
                }
                let q = m[i][j].div_floor(&m[i][p]);
                col_sub(&mut m, &mut u, j, p, &q);
                if !m[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m[i][p].is_zero() {
            p += 1;
        }
    }
    u.drain(p..).collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
    u.swap(a, b);
}

fn col_sub(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[target] -= t;
    }
    let s = u[src].clone();
    for (x, y) in u[target].iter_mut().zip(&s) {
        *x -= y * q;
    }
}

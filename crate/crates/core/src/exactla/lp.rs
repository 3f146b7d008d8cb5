use num_traits::{One, Signed, Zero};

use super::matrix::MatrixQ;
use super::rational::{dot, Rational};
use super::ExactLaError;

/// `coeffs · x (= | >) rhs` depending on the list it is passed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        LinearConstraint { coeffs, rhs }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible(w) => Some(w),
            LpOutcome::Infeasible => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplexResult {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
}

/// Maximizes `c · x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the slack basis is feasible.
/// Bland's rule on both the entering and the leaving variable.
pub fn simplex_max(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> SimplexResult {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|v| !v.is_negative()), "simplex_max needs b >= 0");
    let width = n + m;
    let mut tab: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.resize(width, Rational::zero());
            r[n + i] = Rational::one();
            r.push(b[i].clone());
            r
        })
        .collect();
    // objective row holds reduced costs c_j - z_j; optimal when none is positive
    let mut obj: Vec<Rational> = c.to_vec();
    obj.resize(width + 1, Rational::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..width).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][width] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return SimplexResult::Unbounded;
        };
        let inv = tab[row][enter].recip();
        for v in tab[row].iter_mut() {
            *v *= &inv;
        }
        let prow = tab[row].clone();
        for (i, r) in tab.iter_mut().enumerate() {
            if i != row && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (x, y) in r.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        basis[row] = enter;
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width].clone();
        }
    }
    let value = dot(c, &x);
    SimplexResult::Optimal { value, x }
}

/// Finds `x` with `E x = e` and `G x > g` exactly, or proves there is none.
///
/// The system is homogenized with a scale `s > 0`, equalities are eliminated through a kernel
/// basis, and a single slack `t` common to every strict row is maximized under `t <= 1`.
pub fn lp_strict_feasible(
    num_vars: usize,
    equalities: &[LinearConstraint],
    strict: &[LinearConstraint],
) -> Result<LpOutcome, ExactLaError> {
    for c in equalities.iter().chain(strict) {
        if c.coeffs.len() != num_vars {
            return Err(ExactLaError::Shape(format!(
                "constraint has {} coefficients, expected {num_vars}",
                c.coeffs.len()
            )));
        }
    }
    let hom = |c: &LinearConstraint| {
        let mut row = c.coeffs.clone();
        row.push(-c.rhs.clone());
        row
    };
    let eq_rows: Vec<Vec<Rational>> = equalities.iter().map(hom).collect();
    let mut strict_rows: Vec<Vec<Rational>> = strict.iter().map(hom).collect();
    let mut scale_row = vec![Rational::zero(); num_vars + 1];
    scale_row[num_vars] = Rational::one();
    strict_rows.push(scale_row);

    let kernel = if eq_rows.is_empty() {
        MatrixQ::identity(num_vars + 1).to_dense()
    } else {
        MatrixQ::from_dense(eq_rows.len(), num_vars + 1, &eq_rows).kernel_basis()
    };
    let k = kernel.len();
    if k == 0 {
        return Ok(LpOutcome::Infeasible);
    }
    // reduced strict rows in kernel coordinates: (G K)_{i,j} = g_i . K_j
    let reduced: Vec<Vec<Rational>> =
        strict_rows.iter().map(|g| kernel.iter().map(|kv| dot(g, kv)).collect()).collect();

    // variables: z+ (k), z- (k), t
    let n = 2 * k + 1;
    let mut a = Vec::with_capacity(reduced.len() + 1);
    let mut b = Vec::with_capacity(reduced.len() + 1);
    for row in &reduced {
        let mut r = Vec::with_capacity(n);
        r.extend(row.iter().map(|v| -v.clone()));
        r.extend(row.iter().cloned());
        r.push(Rational::one());
        a.push(r);
        b.push(Rational::zero());
    }
    let mut cap = vec![Rational::zero(); n];
    cap[2 * k] = Rational::one();
    a.push(cap.clone());
    b.push(Rational::one());

    let SimplexResult::Optimal { value, x } = simplex_max(&a, &b, &cap) else {
        unreachable!("objective bounded by t <= 1");
    };
    if !value.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    let z: Vec<Rational> = (0..k).map(|j| &x[j] - &x[k + j]).collect();
    let mut y = vec![Rational::zero(); num_vars + 1];
    for (zj, kv) in z.iter().zip(&kernel) {
        if zj.is_zero() {
            continue;
        }
        for (yi, ki) in y.iter_mut().zip(kv) {
            *yi += zj * ki;
        }
    }
    let s = y[num_vars].clone();
    debug_assert!(s.is_positive());
    let witness: Vec<Rational> = y[..num_vars].iter().map(|v| v / &s).collect();
    debug_assert!(equalities.iter().all(|c| c.value(&witness) == c.rhs));
    debug_assert!(strict.iter().all(|c| c.value(&witness) > c.rhs));
    Ok(LpOutcome::Feasible(witness))
}

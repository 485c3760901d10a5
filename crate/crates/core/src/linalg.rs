//! Small dense linear algebra for dimensions 1..=6.
//!
//! Everything here is hand-rolled on flat row-major buffers: the matrices are
//! tiny (at most 6x6), allocation-free inner loops matter in the subset
//! enumeration, and no heavyweight matrix crate is warranted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::tolerances;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant of an n x n row-major matrix by LU with partial pivoting.
/// The buffer is destroyed.
pub fn det_in_place(m: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(m.len(), n * n);
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k * n + k].abs();
        for i in k + 1..n {
            let v = m[i * n + k].abs();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = m[k * n + k];
        det *= d;
        for i in k + 1..n {
            let f = m[i * n + k] / d;
            if f != 0.0 {
                for j in k + 1..n {
                    m[i * n + j] -= f * m[k * n + j];
                }
            }
        }
    }
    det
}

/// Gram determinant of `k` vectors of length `n` stored contiguously
/// (vectors[i*n..(i+1)*n]).
pub fn gram_det(vectors: &[f64], k: usize, n: usize) -> f64 {
    debug_assert_eq!(vectors.len(), k * n);
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let d = dot(&vectors[i * n..(i + 1) * n], &vectors[j * n..(j + 1) * n]);
            g[i * k + j] = d;
            g[j * k + i] = d;
        }
    }
    det_in_place(&mut g, k)
}

/// Unit normal of the span of `k = n-1` row vectors, via Householder QR with
/// column pivoting on the n x k matrix whose columns are the vectors.
///
/// Returns `None` when the vectors are numerically dependent (rank < k).
/// The sign is canonical: the first coordinate larger than `1e-9 * max|coord|`
/// in absolute value is positive.
pub fn null_direction(vectors: &[f64], n: usize) -> Option<Vec<f64>> {
    let k = n - 1;
    debug_assert_eq!(vectors.len(), k * n);
    if k == 0 {
        // Ambient dimension 1: the complement of the empty span is spanned by +1.
        return Some(vec![1.0]);
    }
    // a[col][row]: columns of the matrix being factorized.
    let mut a: Vec<Vec<f64>> = (0..k).map(|c| vectors[c * n..(c + 1) * n].to_vec()).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut max_colnorm: f64 = 0.0;
    for c in &a {
        max_colnorm = max_colnorm.max(norm(c));
    }
    if max_colnorm == 0.0 {
        return None;
    }
    for step in 0..k {
        // Column pivot: bring the column with the largest remaining tail norm forward.
        let mut piv = step;
        let mut best = -1.0;
        for c in step..k {
            let t = norm(&a[c][step..]);
            if t > best {
                best = t;
                piv = c;
            }
        }
        if best <= tolerances::RANK_REL * max_colnorm {
            return None; // rank deficient
        }
        a.swap(step, piv);
        // Householder reflector zeroing a[step][step+1..].
        let mut v = a[step][step..].to_vec();
        let alpha = -v[0].signum() * norm(&v);
        v[0] -= alpha;
        let vn = norm(&v);
        if vn > 0.0 {
            for x in v.iter_mut() {
                *x /= vn;
            }
            for c in a.iter_mut().skip(step) {
                let tail = &mut c[step..];
                let proj = 2.0 * dot(tail, &v);
                for (t, w) in tail.iter_mut().zip(&v) {
                    *t -= proj * w;
                }
            }
        }
        reflectors.push(v);
    }
    // Last column of Q: apply the reflectors to e_n in reverse order.
    let mut w = vec![0.0; n];
    w[n - 1] = 1.0;
    for (step, v) in reflectors.iter().enumerate().rev() {
        let tail = &mut w[step..];
        let proj = 2.0 * dot(tail, v);
        for (t, x) in tail.iter_mut().zip(v) {
            *t -= proj * x;
        }
    }
    canonicalize_sign(&mut w);
    Some(w)
}

/// Flips `v` in place so its first significant coordinate is positive.
/// Significant means `|x| > 1e-9 * max|coord|`.
pub fn canonicalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let thresh = 1e-9 * max;
    for &x in v.iter() {
        if x.abs() > thresh {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Orthonormalizes the standard basis against `fixed` (assumed orthonormal),
/// returning the first `n - fixed.len()` surviving directions in standard-basis
/// order.  Deterministic by construction.
pub fn gram_schmidt_complement(fixed: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let want = n - fixed.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(want);
    for i in 0..n {
        if basis.len() == want {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for f in fixed.iter().chain(basis.iter()) {
            let p = dot(&v, f);
            for (x, y) in v.iter_mut().zip(f) {
                *x -= p * y;
            }
        }
        // Re-orthogonalize once; classical GS alone loses orthogonality.
        for f in fixed.iter().chain(basis.iter()) {
            let p = dot(&v, f);
            for (x, y) in v.iter_mut().zip(f) {
                *x -= p * y;
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            for x in v.iter_mut() {
                *x /= nv;
            }
            basis.push(v);
        }
    }
    assert_eq!(basis.len(), want, "standard basis failed to complete the frame");
    basis
}

/// Least squares `min ||A x - b||` by Householder QR without pivoting.
/// Returns `(solution, residual_norm, condition_estimate)` where the condition
/// estimate is `max|R_ii| / min|R_ii|`.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, b: &[f64]) -> (Vec<f64>, f64, f64) {
    assert!(rows >= cols && cols > 0);
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for step in 0..cols {
        let mut v: Vec<f64> = (step..rows).map(|r| m[r * cols + step]).collect();
        let alpha = -v[0].signum() * norm(&v);
        v[0] -= alpha;
        let vn = norm(&v);
        if vn == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vn;
        }
        for c in step..cols {
            let mut proj = 0.0;
            for (i, w) in v.iter().enumerate() {
                proj += w * m[(step + i) * cols + c];
            }
            proj *= 2.0;
            for (i, w) in v.iter().enumerate() {
                m[(step + i) * cols + c] -= proj * w;
            }
        }
        let mut proj = 0.0;
        for (i, w) in v.iter().enumerate() {
            proj += w * rhs[step + i];
        }
        proj *= 2.0;
        for (i, w) in v.iter().enumerate() {
            rhs[step + i] -= proj * w;
        }
    }
    let mut maxd: f64 = 0.0;
    let mut mind = f64::INFINITY;
    for i in 0..cols {
        let d = m[i * cols + i].abs();
        maxd = maxd.max(d);
        mind = mind.min(d);
    }
    let cond = if mind == 0.0 { f64::INFINITY } else { maxd / mind };
    let mut x = vec![0.0; cols];
    for i in (0..cols).rev() {
        let mut s = rhs[i];
        for j in i + 1..cols {
            s -= m[i * cols + j] * x[j];
        }
        x[i] = s / m[i * cols + i];
    }
    let residual = norm(&rhs[cols..]);
    (x, residual, cond)
}

// ===== Exact rational path =====

/// Exact rational value of a finite f64 (every finite double is rational).
pub fn rational_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input required for the exact path")
}

/// Exact determinant of an n x n matrix of f64 entries via integer Bareiss
/// elimination after clearing the (power-of-two) denominators.
pub fn det_exact(rows: &[Vec<f64>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    // Decompose x = mant * 2^exp with integer mant; find the common scale.
    let mut mants = vec![vec![BigInt::zero(); n]; n];
    let mut exps = vec![vec![0i64; n]; n];
    let mut min_exp = i64::MAX;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        for (j, &x) in row.iter().enumerate() {
            assert!(x.is_finite(), "exact path requires finite entries");
            let (m, e) = integer_decompose(x);
            if !m.is_zero() {
                min_exp = min_exp.min(e);
            }
            mants[i][j] = m;
            exps[i][j] = e;
        }
    }
    if min_exp == i64::MAX {
        return BigRational::zero(); // all-zero matrix
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &mants[i][j] << u64::try_from(exps[i][j] - min_exp).unwrap())
                .collect()
        })
        .collect();
    let det_int = bareiss_det(&mut m);
    scale_by_pow2(BigRational::from(det_int), min_exp.checked_mul(n as i64).unwrap())
}

/// Exact dot product of two f64 vectors.
pub fn dot_exact(a: &[f64], b: &[f64]) -> BigRational {
    let mut s = BigRational::zero();
    for (&x, &y) in a.iter().zip(b) {
        s += rational_of(x) * rational_of(y);
    }
    s
}

/// Exact Gram determinant of `k` vectors of length `n` stored contiguously.
pub fn gram_det_exact(vectors: &[f64], k: usize, n: usize) -> BigRational {
    let mut g = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let d = dot_exact(&vectors[i * n..(i + 1) * n], &vectors[j * n..(j + 1) * n]);
            g[i][j] = d.clone();
            g[j][i] = d;
        }
    }
    rational_det(&mut g)
}

fn integer_decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let r = rational_of(x);
    // Denominator of a finite double is a power of two.
    let denom = r.denom();
    let e = denom.bits() as i64 - 1;
    debug_assert_eq!(&(BigInt::one() << u64::try_from(e).unwrap()), denom);
    (r.numer().clone(), -e)
}

fn scale_by_pow2(x: BigRational, e: i64) -> BigRational {
    if e >= 0 {
        x * BigRational::from(BigInt::one() << u64::try_from(e).unwrap())
    } else {
        x / BigRational::from(BigInt::one() << u64::try_from(-e).unwrap())
    }
}

/// Fraction-free Bareiss determinant over BigInt; destroys the buffer.
fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Bareiss
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Exact determinant over BigRational with full pivoting on nonzero entries.
fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        let d = m[k][k].clone();
        det *= d.clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &d;
            for j in k..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

// ===== Gauss-Legendre nodes =====

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Nodes are exactly symmetric about 0 (computed on one half and mirrored).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    let m = n / 2;
    for i in 0..m {
        // Initial guess (Abramowitz & Stegun), then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x.abs(), w);
        out[n - 1 - i] = (x.abs(), w);
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_pair(n, 0.0);
        out[m] = (0.0, 2.0 / (dp * dp));
    }
    out
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

//! Minimal dense complex linear algebra: numerical rank via Householder QR
//! with column pivoting. The pivot magnitudes |R_kk| play the role of
//! singular values for thresholding.

use num_complex::Complex64;

/// Numerical rank of the matrix whose columns are given. Columns may have
/// different lengths; they are padded with zeros to the longest. Rank counts
/// the pivots with |R_kk| >= tol * |R_00|.
pub(crate) fn column_rank(columns: &[Vec<Complex64>], tol: f64) -> usize {
    let n = columns.len();
    if n == 0 {
        return 0;
    }
    let m = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    if m == 0 {
        return 0;
    }
    let mut a: Vec<Vec<Complex64>> = columns
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.resize(m, Complex64::new(0.0, 0.0));
            v
        })
        .collect();

    let steps = m.min(n);
    let mut first_pivot = 0.0f64;
    let mut rank = 0usize;
    for k in 0..steps {
        // Pivot: remaining column with the largest tail norm.
        let (pivot, pivot_norm) = (k..n)
            .map(|j| (j, tail_norm(&a[j], k)))
            .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if k == 0 {
            first_pivot = pivot_norm;
        }
        if pivot_norm <= 0.0 || pivot_norm < tol * first_pivot {
            break;
        }
        a.swap(k, pivot);
        rank += 1;

        // Householder vector zeroing a[k][k+1..].
        let alpha = a[k][k];
        let phase = if alpha.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        let mut v: Vec<Complex64> = a[k][k..].to_vec();
        v[0] += phase * pivot_norm;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in a.iter_mut().skip(k) {
            let dot: Complex64 = v
                .iter()
                .zip(col[k..].iter())
                .map(|(vi, xi)| vi.conj() * xi)
                .sum();
            let factor = dot * (2.0 / vnorm2);
            for (vi, xi) in v.iter().zip(col[k..].iter_mut()) {
                *xi -= factor * vi;
            }
        }
    }
    rank
}

fn tail_norm(col: &[Complex64], from: usize) -> f64 {
    col[from..].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

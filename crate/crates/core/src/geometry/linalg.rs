use nalgebra::{SMatrix, SVector};

/// Gaussian elimination with partial pivoting on a fixed-size system.
///
/// Returns the solution and the determinant, or `None` when the largest
/// available pivot falls below `tol`.
pub fn solve<const D: usize>(
    mut a: SMatrix<f64, D, D>,
    mut b: SVector<f64, D>,
    tol: f64,
) -> Option<(SVector<f64, D>, f64)> {
    let mut det = 1.0;
    for c in 0..D {
        let (r, piv) = (c..D)
            .map(|r| (r, a[(r, c)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if piv < tol {
            return None;
        }
        if r != c {
            a.swap_rows(r, c);
            b.swap_rows(r, c);
            det = -det;
        }
        let p = a[(c, c)];
        det *= p;
        for r in c + 1..D {
            let f = a[(r, c)] / p;
            if f != 0.0 {
                for k in c..D {
                    a[(r, k)] -= f * a[(c, k)];
                }
                b[r] -= f * b[c];
            }
        }
    }
    let mut x = SVector::<f64, D>::zeros();
    for c in (0..D).rev() {
        let s: f64 = (c + 1..D).map(|k| a[(c, k)] * x[k]).sum();
        x[c] = (b[c] - s) / a[(c, c)];
    }
    Some((x, det))
}

pub fn determinant<const D: usize>(a: &SMatrix<f64, D, D>) -> f64 {
    solve(*a, SVector::zeros(), 0.0).map_or(0.0, |(_, d)| d)
}

//! Dense primal simplex on a condensed (Tucker) tableau.
//!
//! Solves `max c·z` subject to `A z <= b` with every `z` free, starting from a
//! known feasible point. Free variables enter the basis and never leave it;
//! slack variables follow Bland's rule, which rules out cycling on the
//! heavily degenerate systems that bisector arrangements produce.

use super::GeometryError;

const EPS_PIVOT: f64 = 1e-11;
const EPS_COST: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Unbounded,
}

/// Maximizes `objective · z` over `{z : rows[i] · z <= rhs[i]}`.
///
/// `start` must satisfy every constraint (up to rounding).
pub fn maximize(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
    start: &[f64],
) -> Result<LpOutcome, GeometryError> {
    let n = objective.len();
    let m = rows.len();
    if start.len() != n || rhs.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(GeometryError::Lp("inconsistent problem dimensions".into()));
    }
    let w = n + 1;
    // Row i: basic_i = t[i][n] + sum_j t[i][j] * nonbasic_j.
    let mut t = vec![0.0; (m + 1) * w];
    for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
        let slack: f64 = b - row.iter().zip(start).map(|(a, s)| a * s).sum::<f64>();
        if slack < -1e-9 * (1.0 + b.abs()) {
            return Err(GeometryError::Lp(format!(
                "start violates row {i} by {}",
                -slack
            )));
        }
        for j in 0..n {
            t[i * w + j] = -row[j];
        }
        t[i * w + n] = slack.max(0.0);
    }
    for j in 0..n {
        t[m * w + j] = objective[j];
    }
    t[m * w + n] = objective.iter().zip(start).map(|(c, s)| c * s).sum();

    // Variable ids: 0..n are the free unknowns, n..n+m the slacks.
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut nonbasic: Vec<usize> = (0..n).collect();

    for _ in 0..MAX_PIVOTS {
        // Entering column: smallest variable id with an improving direction.
        let mut enter: Option<(usize, f64)> = None;
        for j in 0..n {
            let d = t[m * w + j];
            let free = nonbasic[j] < n;
            let dir = if d > EPS_COST {
                1.0
            } else if free && d < -EPS_COST {
                -1.0
            } else {
                continue;
            };
            if enter.is_none_or(|(k, _)| nonbasic[j] < nonbasic[k]) {
                enter = Some((j, dir));
            }
        }
        let Some((col, dir)) = enter else {
            let mut point = start.to_vec();
            for (i, &v) in basic.iter().enumerate() {
                if v < n {
                    point[v] += t[i * w + n];
                }
            }
            return Ok(LpOutcome::Optimal {
                value: t[m * w + n],
                point,
            });
        };

        // Ratio test over rows whose basic variable is a bounded slack.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if basic[i] < n {
                continue;
            }
            let a = t[i * w + col] * dir;
            if a < -EPS_PIVOT {
                let ratio = t[i * w + n].max(0.0) / -a;
                let better = match leave {
                    None => true,
                    Some((k, r)) => {
                        ratio < r - 1e-14 || (ratio <= r + 1e-14 && basic[i] < basic[k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        pivot(&mut t, w, m, row, col);
        std::mem::swap(&mut basic[row], &mut nonbasic[col]);
        for i in 0..m {
            if basic[i] >= n && t[i * w + n] < 0.0 {
                t[i * w + n] = 0.0;
            }
        }
    }
    Err(GeometryError::Lp("pivot limit exceeded".into()))
}

fn pivot(t: &mut [f64], w: usize, m: usize, row: usize, col: usize) {
    let n = w - 1;
    let p = t[row * w + col];
    for j in 0..w {
        t[row * w + j] = if j == col {
            1.0 / p
        } else {
            -t[row * w + j] / p
        };
    }
    for i in 0..=m {
        if i == row {
            continue;
        }
        let f = t[i * w + col];
        if f == 0.0 {
            continue;
        }
        for j in 0..=n {
            if j == col {
                t[i * w + j] = f / p;
            } else {
                t[i * w + j] += f * t[row * w + j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opt(outcome: LpOutcome) -> (f64, Vec<f64>) {
        match outcome {
            LpOutcome::Optimal { value, point } => (value, point),
            LpOutcome::Unbounded => panic!("unexpected unbounded"),
        }
    }

    #[test]
    fn square_corner() {
        // max x + y over the unit square centred at the origin.
        let rows = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let (v, p) = opt(maximize(&[1.0, 1.0], &rows, &[1.0, 1.0, 1.0, 1.0], &[0.0, 0.0]).unwrap());
        assert!((v - 2.0).abs() < 1e-12);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_direction_for_free_variable() {
        let rows = vec![vec![-1.0], vec![1.0]];
        let (v, p) = opt(maximize(&[-1.0], &rows, &[3.0, 10.0], &[0.0]).unwrap());
        assert!((v - 3.0).abs() < 1e-12);
        assert!((p[0] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn detects_unbounded() {
        let rows = vec![vec![-1.0, 0.0]];
        assert_eq!(
            maximize(&[1.0, 0.0], &rows, &[0.0], &[0.0, 0.0]).unwrap(),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn degenerate_vertex() {
        // Many constraints through the optimum (1, 0).
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for k in 0..12 {
            let a = std::f64::consts::PI * (k as f64 - 5.5) / 12.0;
            rows.push(vec![a.cos(), a.sin()]);
            rhs.push(a.cos());
        }
        let (v, p) = opt(maximize(&[1.0, 0.0], &rows, &rhs, &[-1.0, 0.0]).unwrap());
        assert!((v - 1.0).abs() < 1e-10, "{v} {p:?}");
    }

    #[test]
    fn rejects_infeasible_start() {
        assert!(maximize(&[1.0], &[vec![1.0]], &[0.0], &[1.0]).is_err());
    }
}

//! Phase-1 primal simplex feasibility for small dense equality systems.

/// Pivot threshold; entries smaller in magnitude are treated as zero.
const PIVOT_TOL: f64 = 1e-9;
/// Hard cap on pivots (Bland's rule already prevents cycling).
const MAX_PIVOTS: usize = 20_000;

/// Finds x >= 0 with A x = b, or None when no such point exists within `tol`.
///
/// Two-phase primal simplex, phase 1 only: artificial variables start basic
/// and their sum is minimized with Bland's anti-cycling rule. Deterministic
/// for identical input.
pub fn feasible_point(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row counts must agree");
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    assert!(a.iter().all(|r| r.len() == cols), "ragged constraint matrix");

    // Tableau: [A | I | b] with rows flipped so b >= 0.
    let width = cols + rows + 1;
    let mut t = vec![vec![0.0f64; width]; rows];
    for i in 0..rows {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..cols {
            t[i][j] = flip * a[i][j];
        }
        t[i][cols + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (0..rows).map(|i| cols + i).collect();

    // Reduced costs for minimizing the artificial sum: -(column sums) on
    // original columns, 0 on artificials.
    let mut obj = vec![0.0f64; width];
    for j in 0..width {
        if (cols..cols + rows).contains(&j) {
            continue;
        }
        obj[j] = -(0..rows).map(|i| t[i][j]).sum::<f64>();
    }

    for _ in 0..MAX_PIVOTS {
        // Bland: lowest-index column with a negative reduced cost.
        let Some(enter) = (0..cols + rows).find(|&j| obj[j] < -PIVOT_TOL) else {
            break;
        };
        // Ratio test; ties go to the row with the lowest basic index.
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            if t[i][enter] > PIVOT_TOL {
                let ratio = t[i][width - 1] / t[i][enter];
                let better = ratio < best - PIVOT_TOL
                    || ((ratio - best).abs() <= PIVOT_TOL
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded phase-1 cannot happen with b >= 0; treat as failure.
            return None;
        };
        // Pivot on (r, enter).
        let piv = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..rows {
            if i != r && t[i][enter].abs() > 0.0 {
                let f = t[i][enter];
                for j in 0..width {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        let f = obj[enter];
        if f.abs() > 0.0 {
            for j in 0..width {
                obj[j] -= f * t[r][j];
            }
        }
        basis[r] = enter;
    }

    // Feasible iff every basic artificial carries (numerically) zero value.
    let infeas: f64 = (0..rows)
        .filter(|&i| basis[i] >= cols)
        .map(|i| t[i][width - 1].abs())
        .sum();
    if infeas > tol {
        return None;
    }
    let mut x = vec![0.0f64; cols];
    for i in 0..rows {
        if basis[i] < cols {
            x[basis[i]] = t[i][width - 1].max(0.0);
        }
    }
    Some(x)
}

//! Self-contained dense tableau simplex for standard-form programs
//! minimize c.x subject to A x = b, x >= 0.
//!
//! Two-phase with artificial columns, Dantzig pricing, and a permanent switch
//! to Bland's rule once the objective stalls on degenerate pivots, which
//! guarantees termination. The tableau always carries the identity block, so
//! row duals come out for free at the end; every distance solve reads both
//! its primal and its dual witness from one run.

/// Dense standard-form program, row-major.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// Row duals y with y = c_B B^{-1} at the final basis.
    pub y: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    pub pivot_tol: f64,
    pub cost_tol: f64,
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub stall_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 200_000,
            pivot_tol: 1e-9,
            cost_tol: 1e-9,
            stall_limit: 64,
        }
    }
}

struct Tableau {
    rows: usize,
    /// Structural columns followed by the identity/artificial block.
    width: usize,
    data: Vec<f64>, // rows x width
    rhs: Vec<f64>,
    cost: Vec<f64>, // reduced-cost row over all width columns
    obj: f64,
    basis: Vec<usize>,
    bland: bool,
    stall: usize,
    iterations: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    /// Pick the entering column among those with index < limit and not barred.
    fn price(&self, limit: usize, barred_from: usize, tol: f64) -> Option<usize> {
        if self.bland {
            (0..limit)
                .find(|&j| j < barred_from && self.cost[j] < -tol)
        } else {
            let mut best = None;
            let mut best_val = -tol;
            for j in 0..limit {
                if j >= barred_from {
                    continue;
                }
                if self.cost[j] < best_val {
                    best_val = self.cost[j];
                    best = Some(j);
                }
            }
            best
        }
    }

    /// Ratio test: smallest ratio, ties to the smallest row index.
    fn ratio_test(&self, col: usize, tol: f64) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for r in 0..self.rows {
            let a = self.at(r, col);
            if a > tol {
                let ratio = self.rhs[r] / a;
                match best {
                    None => best = Some((ratio, r)),
                    Some((br, _)) if ratio < br - 1e-12 => best = Some((ratio, r)),
                    _ => {}
                }
            }
        }
        best.map(|(_, r)| r)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let piv = self.data[row * w + col];
        let inv = 1.0 / piv;
        for j in 0..w {
            self.data[row * w + j] *= inv;
        }
        self.rhs[row] *= inv;
        self.data[row * w + col] = 1.0;
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let f = self.data[r * w + col];
            if f != 0.0 {
                for j in 0..w {
                    self.data[r * w + j] -= f * self.data[row * w + j];
                }
                self.data[r * w + col] = 0.0;
                self.rhs[r] -= f * self.rhs[row];
                if self.rhs[r].abs() < 1e-13 {
                    self.rhs[r] = 0.0;
                }
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for j in 0..w {
                self.cost[j] -= f * self.data[row * w + j];
            }
            self.cost[col] = 0.0;
            self.obj -= f * self.rhs[row];
        }
        self.basis[row] = col;
    }

    /// Run simplex until optimal within tolerance. `barred_from` marks the
    /// first column index that may never enter the basis.
    fn optimize(&mut self, barred_from: usize, opts: &SimplexOptions) -> LpStatus {
        loop {
            if self.iterations >= opts.max_iterations {
                return LpStatus::IterationLimit;
            }
            let col = match self.price(self.width, barred_from, opts.cost_tol) {
                Some(c) => c,
                None => return LpStatus::Optimal,
            };
            let row = match self.ratio_test(col, opts.pivot_tol) {
                Some(r) => r,
                None => return LpStatus::Unbounded,
            };
            let degenerate = self.rhs[row].abs() <= 1e-12;
            self.pivot(row, col);
            self.iterations += 1;
            if degenerate {
                self.stall += 1;
                if self.stall > opts.stall_limit {
                    self.bland = true;
                }
            } else {
                self.stall = 0;
            }
        }
    }
}

/// Two-phase solve. Row signs are normalized internally so b >= 0.
pub fn solve(lp: &LinearProgram, opts: &SimplexOptions) -> LpSolution {
    solve_inner(lp, None, opts)
}

/// Solve starting from a known feasible basis: `basis[i]` must name a column
/// equal to the i-th unit vector, and b must already be nonnegative.
pub fn solve_from_basis(lp: &LinearProgram, basis: Vec<usize>, opts: &SimplexOptions) -> LpSolution {
    solve_inner(lp, Some(basis), opts)
}

fn solve_inner(lp: &LinearProgram, start: Option<Vec<usize>>, opts: &SimplexOptions) -> LpSolution {
    let (rows, cols) = (lp.rows, lp.cols);
    debug_assert_eq!(lp.a.len(), rows * cols);
    debug_assert_eq!(lp.b.len(), rows);
    debug_assert_eq!(lp.c.len(), cols);

    let width = cols + rows;
    let mut flips = vec![1.0f64; rows];
    let mut data = vec![0.0f64; rows * width];
    let mut rhs = vec![0.0f64; rows];
    for r in 0..rows {
        let flip = if lp.b[r] < 0.0 { -1.0 } else { 1.0 };
        flips[r] = flip;
        rhs[r] = flip * lp.b[r];
        for j in 0..cols {
            data[r * width + j] = flip * lp.a[r * cols + j];
        }
        data[r * width + cols + r] = flip * flip; // identity block
    }
    // The identity block must stay +1 on the diagonal for dual extraction.
    for r in 0..rows {
        data[r * width + cols + r] = 1.0;
    }

    let mut tab = Tableau {
        rows,
        width,
        data,
        rhs,
        cost: vec![0.0; width],
        obj: 0.0,
        basis: vec![0; rows],
        bland: false,
        stall: 0,
        iterations: 0,
    };

    match start {
        Some(basis) => {
            debug_assert!(lp.b.iter().all(|&v| v >= 0.0));
            tab.basis = basis;
            // Reduce the cost row against the starting basis (columns are
            // unit vectors by contract, so subtraction per basic row works).
            for j in 0..cols {
                tab.cost[j] = lp.c[j];
            }
            for r in 0..rows {
                let cb = lp.c[tab.basis[r]];
                if cb != 0.0 {
                    for j in 0..tab.width {
                        tab.cost[j] -= cb * tab.at(r, j);
                    }
                    tab.obj -= cb * tab.rhs[r];
                }
            }
            let status = tab.optimize(cols, opts);
            extract(lp, &tab, &flips, status)
        }
        None => {
            // Phase 1: artificial basis, minimize the artificial mass.
            for r in 0..rows {
                tab.basis[r] = cols + r;
            }
            for j in 0..tab.width {
                let mut s = 0.0;
                for r in 0..rows {
                    s += tab.at(r, j);
                }
                tab.cost[j] = if j >= cols { 1.0 } else { 0.0 } - s;
            }
            for r in 0..rows {
                tab.cost[cols + r] = 0.0;
            }
            tab.obj = -tab.rhs.iter().sum::<f64>();
            let status = tab.optimize(tab.width, opts);
            if status != LpStatus::Optimal {
                return extract(lp, &tab, &flips, status);
            }
            if -tab.obj > 1e-7 {
                return extract(lp, &tab, &flips, LpStatus::Infeasible);
            }
            // Drive leftover artificials out of the basis where possible.
            for r in 0..rows {
                if tab.basis[r] >= cols {
                    if let Some(j) = (0..cols).find(|&j| tab.at(r, j).abs() > opts.pivot_tol) {
                        tab.pivot(r, j);
                    }
                }
            }
            // Phase 2: real costs, artificials barred.
            for j in 0..tab.width {
                tab.cost[j] = if j < cols { lp.c[j] } else { 0.0 };
            }
            tab.obj = 0.0;
            for r in 0..rows {
                let bj = tab.basis[r];
                let cb = if bj < cols { lp.c[bj] } else { 0.0 };
                if cb != 0.0 {
                    let row_start = r * tab.width;
                    for j in 0..tab.width {
                        tab.cost[j] -= cb * tab.data[row_start + j];
                    }
                    tab.obj -= cb * tab.rhs[r];
                }
            }
            for r in 0..rows {
                tab.cost[tab.basis[r]] = 0.0;
            }
            tab.bland = false;
            tab.stall = 0;
            let status = tab.optimize(cols, opts);
            extract(lp, &tab, &flips, status)
        }
    }
}

fn extract(lp: &LinearProgram, tab: &Tableau, flips: &[f64], status: LpStatus) -> LpSolution {
    let mut x = vec![0.0; lp.cols];
    for r in 0..tab.rows {
        if tab.basis[r] < lp.cols {
            x[tab.basis[r]] = tab.rhs[r];
        }
    }
    // Reduced cost of the i-th identity column is -y_i; undo the row flips.
    let y: Vec<f64> = (0..tab.rows)
        .map(|r| -tab.cost[lp.cols + r] * flips[r])
        .collect();
    let objective = x.iter().zip(&lp.c).map(|(x, c)| x * c).sum();
    LpSolution {
        status,
        objective,
        x,
        y,
        iterations: tab.iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_simple(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> LpSolution {
        let rows = a.len();
        let cols = c.len();
        let lp = LinearProgram {
            rows,
            cols,
            a: a.into_iter().flatten().collect(),
            b,
            c,
        };
        solve(&lp, &SimplexOptions::default())
    }

    #[test]
    fn known_optimum() {
        // min -x1 - 2x2 s.t. x1 + x2 + s1 = 4, x1 + 3x2 + s2 = 6, x >= 0.
        // Optimum at (3, 1): objective -5.
        let sol = solve_simple(
            vec![vec![1.0, 1.0, 1.0, 0.0], vec![1.0, 3.0, 0.0, 1.0]],
            vec![4.0, 6.0],
            vec![-1.0, -2.0, 0.0, 0.0],
        );
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 5.0).abs() <= 1e-9);
        assert!((sol.x[0] - 3.0).abs() <= 1e-9);
        assert!((sol.x[1] - 1.0).abs() <= 1e-9);
        // Strong duality: y.b equals the objective.
        let dual_obj = sol.y[0] * 4.0 + sol.y[1] * 6.0;
        assert!((dual_obj - sol.objective).abs() <= 1e-9);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // x1 - x2 = -3, x1 + x2 = 5 -> (1, 4); minimize x1.
        let sol = solve_simple(
            vec![vec![1.0, -1.0], vec![1.0, 1.0]],
            vec![-3.0, 5.0],
            vec![1.0, 0.0],
        );
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() <= 1e-9);
        assert!((sol.x[1] - 4.0).abs() <= 1e-9);
        let dual_obj = -3.0 * sol.y[0] + 5.0 * sol.y[1];
        assert!((dual_obj - sol.objective).abs() <= 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        // x1 + x2 = 1 and x1 + x2 = 3 cannot both hold.
        let sol = solve_simple(
            vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 3.0],
            vec![1.0, 1.0],
        );
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 with x1 - x2 = 0: ray x1 = x2 -> inf.
        let sol = solve_simple(vec![vec![1.0, -1.0]], vec![0.0], vec![-1.0, 0.0]);
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn warm_basis_start() {
        // Same as known_optimum; slacks form the starting basis.
        let lp = LinearProgram {
            rows: 2,
            cols: 4,
            a: vec![1.0, 1.0, 1.0, 0.0, 1.0, 3.0, 0.0, 1.0],
            b: vec![4.0, 6.0],
            c: vec![-1.0, -2.0, 0.0, 0.0],
        };
        let sol = solve_from_basis(&lp, vec![2, 3], &SimplexOptions::default());
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 5.0).abs() <= 1e-9);
    }

    #[test]
    fn degenerate_cycling_guard() {
        // The classic Beale cycling example for Dantzig pricing.
        let sol = solve_simple(
            vec![
                vec![0.25, -60.0, -1.0 / 25.0, 9.0, 1.0, 0.0, 0.0],
                vec![0.5, -90.0, -1.0 / 50.0, 3.0, 0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            ],
            vec![0.0, 0.0, 1.0],
            vec![-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0],
        );
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 0.05).abs() <= 1e-9);
    }

    #[test]
    fn l1_fit_toy() {
        // min |1 - g| + |3 - g| over scalar g: residual split u - v = b - g.
        // Variables (u1, v1, u2, v2, g+, g-).
        let sol = solve_simple(
            vec![
                vec![1.0, -1.0, 0.0, 0.0, 1.0, -1.0],
                vec![0.0, 0.0, 1.0, -1.0, 1.0, -1.0],
            ],
            vec![1.0, 3.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0],
        );
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 2.0).abs() <= 1e-9);
        let g = sol.x[4] - sol.x[5];
        assert!((1.0..=3.0).contains(&g));
        // Duals are subgradients of the two absolute values: |y_i| <= 1.
        assert!(sol.y.iter().all(|v| v.abs() <= 1.0 + 1e-9));
    }
}

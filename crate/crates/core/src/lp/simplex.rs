//! Dense two-phase tableau simplex with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `min c·x` subject to the rows and `x >= 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One multiplier per row, signed for the row as given: `<=` rows get
    /// non-positive duals and `>=` rows non-negative ones.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const FEAS_EPS: f64 = 1e-9;

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        LinearProgram { objective, rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.rows.push(Constraint { coeffs, relation, rhs });
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self, max_pivots: usize) -> Result<SimplexSolution> {
        let n = self.objective.len();
        if self.rows.iter().any(|r| r.coeffs.len() != n) {
            return Err(Error::InvalidParameter("constraint width differs from objective"));
        }
        let mut t = Tableau::new(self);
        let mut pivots = 0usize;

        // phase 1
        let mut cost = vec![0.0; t.cols];
        for &a in &t.artificial {
            cost[a] = 1.0;
        }
        t.set_costs(&cost);
        t.run(&mut pivots, max_pivots, false)?;
        if -t.z[t.cols] > FEAS_EPS * (1.0 + t.rhs_scale) {
            return Err(Error::Infeasible("no point satisfies all constraints"));
        }
        t.drive_out_artificials(&mut pivots);

        // phase 2
        let mut cost = vec![0.0; t.cols];
        cost[..n].copy_from_slice(&self.objective);
        t.set_costs(&cost);
        t.run(&mut pivots, max_pivots, true)?;

        let mut x = vec![0.0; n];
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                x[b] = t.at(i, t.cols).max(0.0);
            }
        }
        let objective = crate::num::stable_sum(x.iter().zip(&self.objective).map(|(a, b)| a * b));
        let duals = t
            .dual_col
            .iter()
            .zip(&t.sign)
            .map(|(&c, &s)| -t.z[c] * s)
            .collect();
        Ok(SimplexSolution { x, objective, duals, pivots })
    }
}

struct Tableau {
    m: usize,
    cols: usize,
    /// Row-major, `cols + 1` entries per row (last is the right-hand side).
    a: Vec<f64>,
    z: Vec<f64>,
    basis: Vec<usize>,
    artificial: Vec<usize>,
    is_artificial: Vec<bool>,
    /// Column that starts as `+e_i` for row `i`.
    dual_col: Vec<usize>,
    /// `-1` for rows negated to make the right-hand side non-negative.
    sign: Vec<f64>,
    rhs_scale: f64,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Tableau {
        let n = lp.objective.len();
        let m = lp.rows.len();
        let mut sign = vec![1.0; m];
        let mut rel = Vec::with_capacity(m);
        for (i, r) in lp.rows.iter().enumerate() {
            let mut relation = r.relation;
            if r.rhs < 0.0 {
                sign[i] = -1.0;
                relation = match relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rel.push(relation);
        }
        let slacks = rel.iter().filter(|r| **r != Relation::Eq).count();
        let arts = rel.iter().filter(|r| **r != Relation::Le).count();
        let cols = n + slacks + arts;
        let w = cols + 1;
        let mut a = vec![0.0; m * w];
        let mut basis = vec![0; m];
        let mut artificial = Vec::with_capacity(arts);
        let mut is_artificial = vec![false; cols];
        let mut dual_col = vec![0; m];
        let mut next_slack = n;
        let mut next_art = n + slacks;
        let mut rhs_scale = 0.0f64;
        for (i, r) in lp.rows.iter().enumerate() {
            let row = &mut a[i * w..(i + 1) * w];
            for (dst, c) in row.iter_mut().zip(&r.coeffs) {
                *dst = sign[i] * c;
            }
            row[cols] = sign[i] * r.rhs;
            rhs_scale = rhs_scale.max(row[cols]);
            match rel[i] {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[i] = next_slack;
                    dual_col[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    dual_col[i] = next_art;
                    artificial.push(next_art);
                    is_artificial[next_art] = true;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[i] = next_art;
                    dual_col[i] = next_art;
                    artificial.push(next_art);
                    is_artificial[next_art] = true;
                    next_art += 1;
                }
            }
        }
        Tableau {
            m,
            cols,
            a,
            z: vec![0.0; cols + 1],
            basis,
            artificial,
            is_artificial,
            dual_col,
            sign,
            rhs_scale,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    /// Reduced costs `c - c_B B⁻¹ A`; the last entry is `-c_B B⁻¹ b`.
    fn set_costs(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        self.z[..self.cols].copy_from_slice(cost);
        self.z[self.cols] = 0.0;
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.z[j] -= cb * self.a[i * w + j];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.a[r * w + c];
        for j in 0..w {
            self.a[r * w + j] /= p;
        }
        self.a[r * w + c] = 1.0;
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        let f = self.z[c];
        if f != 0.0 {
            for (x, y) in self.z.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.z[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn run(&mut self, pivots: &mut usize, max_pivots: usize, block_artificial: bool) -> Result<()> {
        loop {
            let entering = (0..self.cols)
                .find(|&j| self.z[j] < -COST_EPS && !(block_artificial && self.is_artificial[j]));
            let Some(c) = entering else { return Ok(()) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aic = self.at(i, c);
                if aic > PIVOT_EPS {
                    let ratio = self.at(i, self.cols) / aic;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best || (ratio == best && self.basis[i] < self.basis[k]) {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Solver("objective is unbounded"));
            };
            if *pivots >= max_pivots {
                return Err(Error::Solver("pivot limit reached"));
            }
            self.pivot(r, c);
            *pivots += 1;
        }
    }

    fn drive_out_artificials(&mut self, pivots: &mut usize) {
        for i in 0..self.m {
            if !self.is_artificial[self.basis[i]] {
                continue;
            }
            let col = (0..self.cols)
                .filter(|&j| !self.is_artificial[j])
                .find(|&j| self.at(i, j).abs() > 1e-9);
            if let Some(c) = col {
                self.pivot(i, c);
                *pivots += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  =>  (2, 6), 36
        let mut lp = LinearProgram::new(vec![-3.0, -5.0]);
        lp.push(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.push(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.push(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve(100).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
        assert!((s.objective + 36.0).abs() < 1e-12);
        let dual_obj: f64 = s.duals.iter().zip([4.0, 12.0, 18.0]).map(|(y, b)| y * b).sum();
        assert!((dual_obj - s.objective).abs() < 1e-12);
        assert!(s.duals.iter().all(|y| *y <= 1e-12));
    }

    #[test]
    fn ge_and_eq_rows() {
        // min x + 2y, x + y >= 2, x - y = 0  =>  (1, 1), 3
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.push(vec![1.0, 1.0], Relation::Ge, 2.0);
        lp.push(vec![1.0, -1.0], Relation::Eq, 0.0);
        let s = lp.solve(100).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.5).abs() < 1e-12);
        assert!((s.duals[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // min x, -x <= -3  =>  x = 3, dual -1
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.push(vec![-1.0], Relation::Le, -3.0);
        let s = lp.solve(100).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-12);
        assert!((s.duals[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.push(vec![1.0], Relation::Le, 1.0);
        lp.push(vec![1.0], Relation::Ge, 2.0);
        assert!(matches!(lp.solve(100), Err(Error::Infeasible(_))));
        let mut lp = LinearProgram::new(vec![-1.0]);
        lp.push(vec![1.0], Relation::Ge, 1.0);
        assert!(matches!(lp.solve(100), Err(Error::Solver(_))));
    }

    #[test]
    fn pivot_limit() {
        let mut lp = LinearProgram::new(vec![-1.0, -1.0]);
        lp.push(vec![1.0, 0.0], Relation::Le, 1.0);
        lp.push(vec![0.0, 1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(1), Err(Error::Solver("pivot limit reached")));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.push(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.push(vec![2.0, 2.0], Relation::Eq, 2.0);
        let s = lp.solve(100).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
    }
}

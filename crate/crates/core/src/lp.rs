//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Instances in this crate stay small (a few hundred rows and columns at most),
//! so a full tableau is simpler and fully reproducible: the pivot sequence is a
//! deterministic function of the input.

use thiserror::Error;

/// Pivot and feasibility tolerance.
pub const LP_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
    #[error("constraint has {got} coefficients, expected {expected}")]
    Shape { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    sense: Sense,
    objective: Vec<f64>,
    kinds: Vec<VarKind>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

impl LinearProgram {
    /// All variables start nonnegative; use [`LinearProgram::set_free`] to lift that.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            kinds: vec![VarKind::NonNegative; n],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, var: usize) {
        self.kinds[var] = VarKind::Free;
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars() {
            return Err(LpError::Shape {
                expected: self.num_vars(),
                got: coeffs.len(),
            });
        }
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        // Column layout: split variables (x+ and, for free vars, x-), then one
        // slack/surplus per inequality, then artificials.
        let n = self.num_vars();
        let mut col_of = Vec::with_capacity(n);
        let mut ncols = 0usize;
        for kind in &self.kinds {
            match kind {
                VarKind::NonNegative => {
                    col_of.push((ncols, None));
                    ncols += 1;
                }
                VarKind::Free => {
                    col_of.push((ncols, Some(ncols + 1)));
                    ncols += 2;
                }
            }
        }
        let structural = ncols;
        let m = self.constraints.len();

        // Normalize every row to a nonnegative right-hand side.
        let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(m);
        for c in &self.constraints {
            let mut coeffs = vec![0.0; structural];
            for (j, &a) in c.coeffs.iter().enumerate() {
                let (p, neg) = col_of[j];
                coeffs[p] = a;
                if let Some(q) = neg {
                    coeffs[q] = -a;
                }
            }
            let (mut rel, mut rhs) = (c.relation, c.rhs);
            if rhs < 0.0 {
                coeffs.iter_mut().for_each(|v| *v = -*v);
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push((coeffs, rel, rhs));
        }

        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let total = structural + n_slack + n_art;
        let width = total + 1;
        let mut tab = Tableau {
            a: vec![0.0; m * width],
            width,
            rows: m,
            basis: vec![0; m],
            pivots: 0,
        };
        let mut slack = structural;
        let mut art = structural + n_slack;
        let art_start = art;
        for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
            let row = tab.row_mut(i);
            row[..structural].copy_from_slice(coeffs);
            row[total] = *rhs;
            match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    tab.basis[i] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    row[art] = 1.0;
                    tab.basis[i] = art;
                    slack += 1;
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    tab.basis[i] = art;
                    art += 1;
                }
            }
        }

        // Phase 1: maximize -sum(artificials).
        if n_art > 0 {
            let mut cost = vec![0.0; total];
            for c in cost.iter_mut().skip(art_start) {
                *c = -1.0;
            }
            let value = tab.optimize(&cost, total)?;
            if value < -LP_TOL * (1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max)) {
                return Err(LpError::Infeasible);
            }
            tab.evict_artificials(art_start);
        }

        // Phase 2 over structural and slack columns only.
        let sign = match self.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let mut cost = vec![0.0; total];
        for (j, &c) in self.objective.iter().enumerate() {
            let (p, neg) = col_of[j];
            cost[p] = sign * c;
            if let Some(q) = neg {
                cost[q] = -sign * c;
            }
        }
        tab.optimize(&cost, art_start)?;

        let mut split = vec![0.0; total];
        for (i, &b) in tab.basis.iter().enumerate() {
            split[b] = tab.rhs(i);
        }
        let x: Vec<f64> = col_of
            .iter()
            .map(|&(p, neg)| split[p] - neg.map_or(0.0, |q| split[q]))
            .collect();
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            x,
            objective,
            pivots: tab.pivots,
        })
    }
}

struct Tableau {
    a: Vec<f64>,
    width: usize,
    rows: usize,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.width..(i + 1) * self.width]
    }

    fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.a[i * self.width..(i + 1) * self.width]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.a[r * w + c];
        for v in &mut self.a[r * w..(r + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.a.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for other in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = other[c];
            if f != 0.0 {
                for (o, &pv) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * pv;
                }
                other[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Maximizes `cost . x` over columns `< active`; returns the optimum.
    fn optimize(&mut self, cost: &[f64], active: usize) -> Result<f64, LpError> {
        let w = self.width;
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit(MAX_PIVOTS));
            }
            // Reduced cost d_j = c_j - c_B . column_j ; Bland: first improving j.
            let mut entering = None;
            for j in 0..active {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..self.rows {
                    d -= cost[self.basis[i]] * self.a[i * w + j];
                }
                if d > LP_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                let value = (0..self.rows)
                    .map(|i| cost[self.basis[i]] * self.rhs(i))
                    .sum();
                return Ok(value);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let aij = self.a[i * w + j];
                if aij > LP_TOL {
                    let ratio = self.rhs(i) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - LP_TOL
                                || (ratio <= best + LP_TOL && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, j);
        }
    }

    /// Pivots basic artificials out where possible; rows with no usable
    /// structural entry are redundant and get zeroed.
    fn evict_artificials(&mut self, art_start: usize) {
        for i in 0..self.rows {
            if self.basis[i] < art_start {
                continue;
            }
            let col = (0..art_start).find(|&j| self.row(i)[j].abs() > LP_TOL);
            match col {
                Some(j) => self.pivot(i, j),
                None => {
                    for v in self.row_mut(i) {
                        *v = 0.0;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0).unwrap();
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0).unwrap();
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn minimization_with_ge_rows() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6 -> (8/5, 6/5), 14/5
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add(vec![1.0, 2.0], Relation::Ge, 4.0).unwrap();
        lp.add(vec![3.0, 1.0], Relation::Ge, 6.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective - 2.8).abs() < 1e-9);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x s.t. x - y = -3, y <= 1, x free -> x = -3 at y = 0
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0, 0.0]);
        lp.set_free(0);
        lp.add(vec![1.0, -1.0], Relation::Eq, -3.0).unwrap();
        lp.add(vec![0.0, 1.0], Relation::Le, 1.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.x[0] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.add(vec![1.0], Relation::Le, 1.0).unwrap();
        lp.add(vec![1.0], Relation::Ge, 2.0).unwrap();
        assert_eq!(lp.solve().unwrap_err(), LpError::Infeasible);

        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add(vec![1.0, -1.0], Relation::Le, 1.0).unwrap();
        assert_eq!(lp.solve().unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.add(vec![1.0, 1.0], Relation::Eq, 2.0).unwrap();
        lp.add(vec![2.0, 2.0], Relation::Eq, 4.0).unwrap();
        lp.add(vec![1.0, 0.0], Relation::Le, 1.5).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective - 2.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![0.75, -150.0, 0.02, -6.0]);
        lp.add(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0)
            .unwrap();
        lp.add(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0)
            .unwrap();
        lp.add(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0).unwrap();
        let s = lp.solve().unwrap();
        assert!((s.objective - 0.05).abs() < 1e-9);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        assert!(matches!(
            lp.add(vec![1.0, 2.0], Relation::Le, 1.0),
            Err(LpError::Shape { .. })
        ));
    }
}

//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex over `BigRational` with Bland's rule.
//! Every verdict produced by this crate that depends on an LP goes through
//! this module, so no floating point ever reaches a yes/no answer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<(usize, Q)>,
    sense: Sense,
    rhs: Q,
}

/// `maximize c·x` subject to linear rows; each variable is either `>= 0` or free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    free: Vec<bool>,
    objective: Vec<Q>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Q>,
        value: Q,
        /// Dual solution in the convention checked by [`LinearProgram::dual_value`].
        duals: Vec<Q>,
    },
    Infeasible {
        /// Farkas multipliers for the rows, see [`LinearProgram::is_farkas_certificate`].
        farkas: Vec<Q>,
    },
    Unbounded,
}

impl LinearProgram {
    pub fn new() -> Self {
        LinearProgram {
            free: Vec::new(),
            objective: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Adds a variable constrained to be non-negative and returns its index.
    pub fn add_var(&mut self, objective: Q) -> usize {
        self.free.push(false);
        self.objective.push(objective);
        self.free.len() - 1
    }

    pub fn add_free_var(&mut self, objective: Q) -> usize {
        self.free.push(true);
        self.objective.push(objective);
        self.free.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Q)>, sense: Sense, rhs: Q) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.free.len()));
        self.rows.push(Row { coeffs, sense, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Checks that `y` is feasible for the dual program and returns `b·y`,
    /// an upper bound on the primal optimum by weak duality.
    pub fn dual_value(&self, y: &[Q]) -> Option<Q> {
        if y.len() != self.rows.len() {
            return None;
        }
        for (row, yi) in self.rows.iter().zip(y) {
            let ok = match row.sense {
                Sense::Le => !yi.is_negative(),
                Sense::Ge => !yi.is_positive(),
                Sense::Eq => true,
            };
            if !ok {
                return None;
            }
        }
        let aty = self.transpose_times(y);
        for (j, (col, c)) in aty.iter().zip(&self.objective).enumerate() {
            if self.free[j] {
                if col != c {
                    return None;
                }
            } else if col < c {
                return None;
            }
        }
        Some(
            self.rows
                .iter()
                .zip(y)
                .fold(Q::zero(), |acc, (r, yi)| acc + &r.rhs * yi),
        )
    }

    /// A Farkas certificate `y` proves infeasibility: `y` has the row-sign
    /// pattern of a dual solution, `Aᵀy` is `>= 0` on sign-constrained
    /// columns and `0` on free columns, yet `b·y < 0`.
    pub fn is_farkas_certificate(&self, y: &[Q]) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        for (row, yi) in self.rows.iter().zip(y) {
            let ok = match row.sense {
                Sense::Le => !yi.is_negative(),
                Sense::Ge => !yi.is_positive(),
                Sense::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        let aty = self.transpose_times(y);
        for (j, col) in aty.iter().enumerate() {
            if self.free[j] {
                if !col.is_zero() {
                    return false;
                }
            } else if col.is_negative() {
                return false;
            }
        }
        let by = self
            .rows
            .iter()
            .zip(y)
            .fold(Q::zero(), |acc, (r, yi)| acc + &r.rhs * yi);
        by.is_negative()
    }

    fn transpose_times(&self, y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.free.len()];
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, a) in &row.coeffs {
                out[*j] += a * yi;
            }
        }
        out
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

impl Default for LinearProgram {
    fn default() -> Self {
        Self::new()
    }
}

/// Column bookkeeping of the standard form `A x = b, x >= 0, b >= 0`.
#[derive(Clone, Copy, Debug)]
enum Col {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial(usize),
}

struct Tableau {
    cols: Vec<Col>,
    /// `m` rows of `n` coefficients followed by the right-hand side.
    a: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// `+1` or `-1`: the factor each original row was multiplied by.
    row_sign: Vec<i8>,
    /// Original row index of each tableau row (rows can be dropped).
    row_origin: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut cols = Vec::new();
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::new();
        for (j, free) in lp.free.iter().enumerate() {
            cols.push(Col::Plus(j));
            let plus = cols.len() - 1;
            let minus = if *free {
                cols.push(Col::Minus(j));
                Some(cols.len() - 1)
            } else {
                None
            };
            var_cols.push((plus, minus));
        }
        let m = lp.rows.len();
        let mut slack_of_row = vec![None; m];
        for (i, row) in lp.rows.iter().enumerate() {
            if row.sense != Sense::Eq {
                cols.push(Col::Slack);
                slack_of_row[i] = Some(cols.len() - 1);
            }
        }
        let art_start = cols.len();
        for i in 0..m {
            cols.push(Col::Artificial(i));
        }
        let n = cols.len();
        let mut a = vec![vec![Q::zero(); n + 1]; m];
        let mut row_sign = vec![1i8; m];
        for (i, row) in lp.rows.iter().enumerate() {
            for (j, c) in &row.coeffs {
                let (p, mi) = var_cols[*j];
                a[i][p] += c;
                if let Some(mi) = mi {
                    a[i][mi] -= c;
                }
            }
            if let Some(s) = slack_of_row[i] {
                a[i][s] = match row.sense {
                    Sense::Le => Q::one(),
                    Sense::Ge => -Q::one(),
                    Sense::Eq => unreachable!(),
                };
            }
            a[i][n] = row.rhs.clone();
            if a[i][n].is_negative() {
                row_sign[i] = -1;
                for v in a[i].iter_mut() {
                    *v = -v.clone();
                }
            }
            a[i][art_start + i] = Q::one();
        }
        Tableau {
            cols,
            a,
            basis: (art_start..art_start + m).collect(),
            row_sign,
            row_origin: (0..m).collect(),
        }
    }

    fn n(&self) -> usize {
        self.cols.len()
    }

    fn is_artificial(&self, j: usize) -> bool {
        matches!(self.cols[j], Col::Artificial(_))
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v /= &piv;
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B⁻¹ A_j` for the given cost vector.
    fn reduced_costs(&self, cost: &[Q]) -> Vec<Q> {
        let n = self.n();
        let mut d: Vec<Q> = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.a[i][j].is_zero() {
                    d[j] -= &cost[b] * &self.a[i][j];
                }
            }
        }
        d
    }

    /// Maximizes `cost·x` from the current basic feasible solution.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], allow: impl Fn(usize) -> bool) -> bool {
        let n = self.n();
        loop {
            let d = self.reduced_costs(cost);
            // Bland: smallest index with positive reduced cost enters.
            let Some(enter) = (0..n).find(|&j| allow(j) && d[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for i in 0..self.a.len() {
                let coef = &self.a[i][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = &self.a[i][n] / coef;
                let better = match &best {
                    None => true,
                    Some((r, _, bvar)) => ratio < *r || (ratio == *r && self.basis[i] < *bvar),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, enter),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = self.n();
        // Phase 1: maximize -(sum of artificials).
        let phase1: Vec<Q> = (0..n)
            .map(|j| if self.is_artificial(j) { -Q::one() } else { Q::zero() })
            .collect();
        let bounded = self.optimize(&phase1, |_| true);
        debug_assert!(bounded);
        let infeas: Q = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| self.is_artificial(b))
            .fold(Q::zero(), |acc, (i, _)| acc + &self.a[i][n]);
        if infeas.is_positive() {
            let d = self.reduced_costs(&phase1);
            let mut farkas = vec![Q::zero(); lp.rows.len()];
            for (j, col) in self.cols.iter().enumerate() {
                if let Col::Artificial(orig) = col {
                    // y_std = c_B B^-1; reduced cost of artificial e_i is -1 - y_i.
                    let y_std = -Q::one() - &d[j];
                    farkas[*orig] = &y_std * q(self.row_sign[*orig] as i64);
                }
            }
            return LpOutcome::Infeasible { farkas };
        }
        // Drive zero-level artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < self.a.len() {
            if self.is_artificial(self.basis[i]) {
                if let Some(c) = (0..n).find(|&j| !self.is_artificial(j) && !self.a[i][j].is_zero()) {
                    self.pivot(i, c);
                    i += 1;
                } else {
                    self.a.remove(i);
                    self.basis.remove(i);
                    self.row_origin.remove(i);
                }
            } else {
                i += 1;
            }
        }
        let cost: Vec<Q> = self
            .cols
            .iter()
            .map(|c| match c {
                Col::Plus(j) => lp.objective[*j].clone(),
                Col::Minus(j) => -lp.objective[*j].clone(),
                _ => Q::zero(),
            })
            .collect();
        let art: Vec<bool> = (0..n).map(|j| self.is_artificial(j)).collect();
        if !self.optimize(&cost, |j| !art[j]) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Q::zero(); lp.free.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            match self.cols[b] {
                Col::Plus(j) => x[j] += &self.a[i][n],
                Col::Minus(j) => x[j] -= &self.a[i][n],
                _ => {}
            }
        }
        let value = x
            .iter()
            .zip(&lp.objective)
            .fold(Q::zero(), |acc, (xi, ci)| acc + xi * ci);
        let d = self.reduced_costs(&cost);
        let mut duals = vec![Q::zero(); lp.rows.len()];
        for (j, col) in self.cols.iter().enumerate() {
            if let Col::Artificial(orig) = col {
                // Rows dropped as redundant keep multiplier zero.
                if self.row_origin.contains(orig) {
                    duals[*orig] = -d[j].clone() * q(self.row_sign[*orig] as i64);
                }
            }
        }
        LpOutcome::Optimal { x, value, duals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_maximization_with_duals() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q(3));
        let y = lp.add_var(q(2));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Sense::Le, q(4));
        lp.add_row(vec![(x, q(1)), (y, q(3))], Sense::Le, q(6));
        lp.add_row(vec![(x, q(1))], Sense::Le, q(3));
        match lp.solve() {
            LpOutcome::Optimal { x: sol, value, duals } => {
                assert_eq!(value, q(11));
                assert_eq!(sol, vec![q(3), q(1)]);
                assert_eq!(lp.dual_value(&duals), Some(q(11)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // max t, r1 - t >= 0, r2 - t >= 0, r1 + r2 = 1, t free
        let mut lp = LinearProgram::new();
        let t = lp.add_free_var(q(1));
        let r1 = lp.add_free_var(q(0));
        let r2 = lp.add_free_var(q(0));
        lp.add_row(vec![(r1, q(1)), (t, q(-1))], Sense::Ge, q(0));
        lp.add_row(vec![(r2, q(1)), (t, q(-1))], Sense::Ge, q(0));
        lp.add_row(vec![(r1, q(1)), (r2, q(1))], Sense::Eq, q(1));
        match lp.solve() {
            LpOutcome::Optimal { value, duals, .. } => {
                assert_eq!(value, q_frac(1, 2));
                assert_eq!(lp.dual_value(&duals), Some(q_frac(1, 2)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_system_has_farkas_certificate() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q(0));
        let y = lp.add_free_var(q(0));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Sense::Eq, q(1));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Sense::Eq, q(2));
        match lp.solve() {
            LpOutcome::Infeasible { farkas } => assert!(lp.is_farkas_certificate(&farkas)),
            other => panic!("unexpected {other:?}"),
        }
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q(0));
        lp.add_row(vec![(x, q(1))], Sense::Le, q(-1));
        match lp.solve() {
            LpOutcome::Infeasible { farkas } => assert!(lp.is_farkas_certificate(&farkas)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbounded_is_reported() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q(1));
        lp.add_row(vec![(x, q(1))], Sense::Ge, q(1));
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q(1));
        let y = lp.add_var(q(1));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Sense::Eq, q(2));
        lp.add_row(vec![(x, q(2)), (y, q(2))], Sense::Eq, q(4));
        lp.add_row(vec![(x, q(1))], Sense::Le, q(1));
        match lp.solve() {
            LpOutcome::Optimal { value, duals, .. } => {
                assert_eq!(value, q(2));
                assert_eq!(lp.dual_value(&duals), Some(q(2)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! Dense linear programming by a bounded-variable two-phase primal simplex.
//!
//! The solver is deliberately a simplex and not an interior-point method:
//! every certification and minimax routine in this crate consumes *basic*
//! (vertex) primal and dual solutions, and interior-point iterates generally
//! are neither. Design choices, all tuned for dense desk-scale instances:
//!
//! * one slack per row (`Le` slack in `[0, inf)`, `Ge` in `(-inf, 0]`, `Eq`
//!   fixed at zero), artificial variables only for rows whose slack start is
//!   infeasible, minimized in phase 1;
//! * Dantzig pricing with a switch to Bland's rule after a streak of 10
//!   degenerate pivots, switching back once a real step is made;
//! * a two-pass ratio test: the minimum ratio is taken with bounds relaxed
//!   by the feasibility tolerance and the pivot is then the numerically
//!   healthiest row under that minimum, so forced tiny pivots cannot blow up
//!   the basis inverse;
//! * if a degenerate streak reaches 100 pivots anyway, tiny deterministic
//!   bound offsets make all ratios distinct and positive until the vertex is
//!   left, then the exact bounds are restored and the phase reoptimizes
//!   (certification problems start at the origin, a vertex with
//!   combinatorially many bases, where index rules alone can walk for ages);
//! * an explicit dense basis inverse, product-updated per pivot and rebuilt
//!   from scratch every 100 pivots to control drift;
//! * a hard iteration cap of `50 * (rows + cols)`; hitting it is reported as
//!   an error, never silently.
//!
//! Duals follow the sensitivity convention `y = d(objective)/d(rhs)`: for a
//! minimization, binding `Le` rows have `y <= 0` and binding `Ge` rows
//! `y >= 0`; signs flip for maximization. When a problem is infeasible the
//! `dual` field instead carries Farkas multipliers `w` with `w >= 0` on `Le`
//! rows, `w <= 0` on `Ge` rows, `wᵀA = 0`, and `wᵀb < 0` (exact for problems
//! whose variables are free or bounded at zero, which covers every use in
//! this crate).

use serde::Serialize;

use crate::linalg::{dot, DenseMatrix};
use crate::{Error, Result};

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Reduced-cost (optimality) tolerance.
pub const OPT_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-10;
const DEGEN_STEP_TOL: f64 = 1e-12;
const BLAND_STREAK: usize = 10;
const PERTURB_STREAK: usize = 100;
const PERTURB_BASE: f64 = 1e-9;
const REFACTOR_PERIOD: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// A dense LP in bounded-variable form.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraint_matrix: DenseMatrix,
    pub row_sense: Vec<RowSense>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    /// Problem with free variables.
    pub fn new(
        sense: Sense,
        objective: Vec<f64>,
        constraint_matrix: DenseMatrix,
        row_sense: Vec<RowSense>,
        rhs: Vec<f64>,
    ) -> Self {
        let n = objective.len();
        Self::with_bounds(
            sense,
            objective,
            constraint_matrix,
            row_sense,
            rhs,
            vec![f64::NEG_INFINITY; n],
            vec![f64::INFINITY; n],
        )
    }

    pub fn with_bounds(
        sense: Sense,
        objective: Vec<f64>,
        constraint_matrix: DenseMatrix,
        row_sense: Vec<RowSense>,
        rhs: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Self {
        let p = LpProblem {
            sense,
            objective,
            constraint_matrix,
            row_sense,
            rhs,
            lower,
            upper,
        };
        p.validate();
        p
    }

    fn rows(&self) -> usize {
        self.constraint_matrix.rows()
    }

    fn cols(&self) -> usize {
        self.constraint_matrix.cols()
    }

    fn validate(&self) {
        let (m, n) = (self.rows(), self.cols());
        assert_eq!(self.objective.len(), n, "objective length");
        assert_eq!(self.row_sense.len(), m, "row sense length");
        assert_eq!(self.rhs.len(), m, "rhs length");
        assert_eq!(self.lower.len(), n, "lower bounds length");
        assert_eq!(self.upper.len(), n, "upper bounds length");
        assert!(self.objective.iter().all(|v| v.is_finite()));
        assert!(self.rhs.iter().all(|v| v.is_finite()));
        assert!(
            self.lower
                .iter()
                .zip(&self.upper)
                .all(|(l, u)| !l.is_nan() && !u.is_nan() && l <= u),
            "variable bounds must satisfy lower <= upper"
        );
    }
}

/// A basic solution. `basis[r]` is the variable index basic in row `r`, in
/// the indexing `0..n` structural, `n..n+m` row slacks, `>= n+m` artificial
/// (an artificial left in the basis marks a redundant row).
#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
    pub objective_value: f64,
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarStatus {
    Basic(usize),
    AtLower,
    AtUpper,
    Free,
    Fixed,
}

enum RunEnd {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    prob: &'a LpProblem,
    m: usize,
    n: usize,
    nv: usize,
    art_start: usize,
    art_row: Vec<usize>,
    art_sign: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    status: Vec<VarStatus>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    x: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    pivots_since_refactor: usize,
    degen_streak: usize,
    bland: bool,
    saved_bounds: Option<(Vec<f64>, Vec<f64>)>,
}

impl<'a> Simplex<'a> {
    fn new(prob: &'a LpProblem) -> Self {
        let m = prob.rows();
        let n = prob.cols();

        let mut lower = prob.lower.clone();
        let mut upper = prob.upper.clone();
        let mut status = Vec::with_capacity(n + m);
        let mut x = vec![0.0; n + m];

        for j in 0..n {
            let (l, u) = (lower[j], upper[j]);
            let st = if l == u {
                x[j] = l;
                VarStatus::Fixed
            } else if l.is_finite() {
                x[j] = l;
                VarStatus::AtLower
            } else if u.is_finite() {
                x[j] = u;
                VarStatus::AtUpper
            } else {
                VarStatus::Free
            };
            status.push(st);
        }

        // slack bounds per row sense
        for sense in &prob.row_sense {
            let (l, u) = match sense {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            lower.push(l);
            upper.push(u);
            status.push(VarStatus::Basic(0)); // placeholder, set below
        }

        let mut sim = Simplex {
            prob,
            m,
            n,
            nv: n + m,
            art_start: n + m,
            art_row: Vec::new(),
            art_sign: Vec::new(),
            lower,
            upper,
            status,
            basis: vec![0; m],
            binv: vec![0.0; m * m],
            x,
            iterations: 0,
            max_iterations: 50 * (m + n),
            pivots_since_refactor: 0,
            degen_streak: 0,
            bland: false,
            saved_bounds: None,
        };

        // starting basis: the slack of each row, replaced by an artificial
        // when the slack value required by the nonbasic point is out of bounds
        for i in 0..m {
            let activity = dot(prob.constraint_matrix.row(i), &sim.x[..n]);
            let required = prob.rhs[i] - activity;
            let slack = n + i;
            if required >= sim.lower[slack] && required <= sim.upper[slack] {
                sim.x[slack] = required;
                sim.status[slack] = VarStatus::Basic(i);
                sim.basis[i] = slack;
                sim.binv[i * m + i] = 1.0;
            } else {
                let clamped = required.clamp(sim.lower[slack], sim.upper[slack]);
                sim.x[slack] = clamped;
                sim.status[slack] = if sim.lower[slack] == sim.upper[slack] {
                    VarStatus::Fixed
                } else if clamped == sim.lower[slack] {
                    VarStatus::AtLower
                } else {
                    VarStatus::AtUpper
                };
                let deficit = required - clamped;
                let art = sim.nv;
                sim.nv += 1;
                sim.art_row.push(i);
                sim.art_sign.push(deficit.signum());
                sim.lower.push(0.0);
                sim.upper.push(f64::INFINITY);
                sim.status.push(VarStatus::Basic(i));
                sim.x.push(deficit.abs());
                sim.basis[i] = art;
                sim.binv[i * m + i] = deficit.signum();
            }
        }
        sim
    }

    fn has_artificials(&self) -> bool {
        self.nv > self.art_start
    }

    /// Phase-2 costs in minimization form, over all variables.
    fn phase2_costs(&self) -> Vec<f64> {
        let sign = match self.prob.sense {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        };
        let mut c = vec![0.0; self.nv];
        for (cj, oj) in c.iter_mut().zip(&self.prob.objective) {
            *cj = sign * oj;
        }
        c
    }

    fn phase1_costs(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.nv];
        for cj in c.iter_mut().skip(self.art_start) {
            *cj = 1.0;
        }
        c
    }

    /// Writes the constraint column of variable `j` into `out`.
    fn column(&self, j: usize, out: &mut [f64]) {
        out.fill(0.0);
        if j < self.n {
            for i in 0..self.m {
                out[i] = self.prob.constraint_matrix[(i, j)];
            }
        } else if j < self.art_start {
            out[j - self.n] = 1.0;
        } else {
            let a = j - self.art_start;
            out[self.art_row[a]] = self.art_sign[a];
        }
    }

    /// `w = B⁻¹ * column(j)`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m];
        if j < self.n {
            for r in 0..m {
                let mut s = 0.0;
                let row = &self.binv[r * m..(r + 1) * m];
                for i in 0..m {
                    s += row[i] * self.prob.constraint_matrix[(i, j)];
                }
                w[r] = s;
            }
        } else if j < self.art_start {
            let col = j - self.n;
            for r in 0..m {
                w[r] = self.binv[r * m + col];
            }
        } else {
            let a = j - self.art_start;
            let col = self.art_row[a];
            for r in 0..m {
                w[r] = self.art_sign[a] * self.binv[r * m + col];
            }
        }
        w
    }

    /// Row multipliers `y = c_Bᵀ B⁻¹` for the given cost vector.
    fn price(&self, costs: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for i in 0..m {
                    y[i] += cb * row[i];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64], costs: &[f64]) -> f64 {
        if j < self.n {
            let mut s = costs[j];
            for i in 0..self.m {
                s -= y[i] * self.prob.constraint_matrix[(i, j)];
            }
            s
        } else if j < self.art_start {
            costs[j] - y[j - self.n]
        } else {
            let a = j - self.art_start;
            costs[j] - self.art_sign[a] * y[self.art_row[a]]
        }
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination and recomputes
    /// the basic variable values from the nonbasic point.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        if m == 0 {
            self.pivots_since_refactor = 0;
            return Ok(());
        }
        let mut bmat = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (r, &var) in self.basis.iter().enumerate() {
            self.column(var, &mut col);
            for i in 0..m {
                bmat[i * m + r] = col[i];
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            let mut piv_row = k;
            let mut piv_val = bmat[k * m + k].abs();
            for r in k + 1..m {
                let v = bmat[r * m + k].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val <= 1e-14 {
                return Err(Error::Numerical("singular simplex basis"));
            }
            if piv_row != k {
                for c in 0..m {
                    bmat.swap(k * m + c, piv_row * m + c);
                    inv.swap(k * m + c, piv_row * m + c);
                }
            }
            let p = bmat[k * m + k];
            for c in 0..m {
                bmat[k * m + c] /= p;
                inv[k * m + c] /= p;
            }
            for r in 0..m {
                if r == k {
                    continue;
                }
                let f = bmat[r * m + k];
                if f != 0.0 {
                    for c in 0..m {
                        bmat[r * m + c] -= f * bmat[k * m + c];
                        inv[r * m + c] -= f * inv[k * m + c];
                    }
                }
            }
        }
        self.binv = inv;

        // basic values from the equality system
        let mut rhs = self.prob.rhs.clone();
        let mut colbuf = vec![0.0; m];
        for j in 0..self.nv {
            if matches!(self.status[j], VarStatus::Basic(_)) || self.x[j] == 0.0 {
                continue;
            }
            self.column(j, &mut colbuf);
            for i in 0..m {
                rhs[i] -= colbuf[i] * self.x[j];
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            self.x[self.basis[r]] = dot(row, &rhs);
        }
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn update_binv(&mut self, pivot_row: usize, w: &[f64]) {
        let m = self.m;
        let piv = w[pivot_row];
        for c in 0..m {
            self.binv[pivot_row * m + c] /= piv;
        }
        for r in 0..m {
            if r == pivot_row {
                continue;
            }
            let f = w[r];
            if f != 0.0 {
                for c in 0..m {
                    self.binv[r * m + c] -= f * self.binv[pivot_row * m + c];
                }
            }
        }
    }

    /// Runs one phase until optimal or unbounded.
    ///
    /// When the pivot loop stalls on a long degenerate streak it applies a
    /// deterministic tiny bound perturbation (making all ratios distinct and
    /// positive), lets the loop escape the degenerate vertex, then restores
    /// the exact bounds and reoptimizes.
    fn run(&mut self, costs: &[f64]) -> Result<RunEnd> {
        loop {
            let end = self.run_pivots(costs)?;
            if self.saved_bounds.is_some() {
                self.restore_perturbation()?;
                continue;
            }
            return Ok(end);
        }
    }

    fn apply_perturbation(&mut self) {
        self.saved_bounds = Some((self.lower.clone(), self.upper.clone()));
        for j in 0..self.art_start {
            if self.lower[j] == self.upper[j] {
                continue;
            }
            // deterministic per-variable offsets so that degenerate ties
            // break differently in every row
            let mix = ((j.wrapping_mul(2654435761)) % 97) as f64 / 97.0;
            let eps = PERTURB_BASE * (1.0 + mix);
            if self.lower[j].is_finite() {
                self.lower[j] -= eps * (1.0 + self.lower[j].abs());
            }
            if self.upper[j].is_finite() {
                self.upper[j] += eps * (1.0 + self.upper[j].abs());
            }
        }
        self.degen_streak = 0;
        self.bland = false;
    }

    fn restore_perturbation(&mut self) -> Result<()> {
        let (lower, upper) = self.saved_bounds.take().expect("perturbation active");
        self.lower = lower;
        self.upper = upper;
        for j in 0..self.nv {
            match self.status[j] {
                VarStatus::AtLower | VarStatus::Fixed => self.x[j] = self.lower[j],
                VarStatus::AtUpper => self.x[j] = self.upper[j],
                VarStatus::Free | VarStatus::Basic(_) => {}
            }
        }
        self.refactor()?;
        self.degen_streak = 0;
        self.bland = false;
        Ok(())
    }

    /// Pivots until optimal or unbounded under the current bounds.
    fn run_pivots(&mut self, costs: &[f64]) -> Result<RunEnd> {
        loop {
            if self.pivots_since_refactor >= REFACTOR_PERIOD {
                self.refactor()?;
            }
            let y = self.price(costs);

            // entering variable: Dantzig (largest improvement rate), or the
            // lowest eligible index while Bland's rule is active
            let mut entering: Option<(usize, f64, f64)> = None; // (j, |d|, direction)
            for j in 0..self.nv {
                let cand = match self.status[j] {
                    VarStatus::Basic(_) | VarStatus::Fixed => None,
                    VarStatus::AtLower => {
                        let d = self.reduced_cost(j, &y, costs);
                        (d < -OPT_TOL).then_some((-d, 1.0))
                    }
                    VarStatus::AtUpper => {
                        let d = self.reduced_cost(j, &y, costs);
                        (d > OPT_TOL).then_some((d, -1.0))
                    }
                    VarStatus::Free => {
                        let d = self.reduced_cost(j, &y, costs);
                        (d.abs() > OPT_TOL).then_some((d.abs(), if d > 0.0 { -1.0 } else { 1.0 }))
                    }
                };
                if let Some((score, dir)) = cand {
                    if self.bland {
                        entering = Some((j, score, dir));
                        break;
                    }
                    match entering {
                        Some((_, best, _)) if score <= best => {}
                        _ => entering = Some((j, score, dir)),
                    }
                }
            }
            let Some((q, _, t)) = entering else {
                return Ok(RunEnd::Optimal);
            };

            let w = self.ftran(q);

            // Harris-style two-pass ratio test. Pass 1 finds the minimum
            // ratio with bounds relaxed by the feasibility tolerance; pass 2
            // picks, among rows whose true ratio fits under that relaxed
            // minimum, a numerically healthy pivot. Any bound overshoot this
            // admits is below FEAS_TOL.
            let gap = self.upper[q] - self.lower[q];
            let mut theta_relaxed = f64::INFINITY;
            // (row, true ratio, to_upper, |pivot|, var)
            let mut pool: Vec<(usize, f64, bool, f64, usize)> = Vec::new();
            for r in 0..self.m {
                let g = w[r];
                if g.abs() <= RATIO_TOL {
                    continue;
                }
                let delta = -t * g;
                let vb = self.basis[r];
                let v = self.x[vb];
                let (bound, to_upper) = if delta > 0.0 {
                    if !self.upper[vb].is_finite() {
                        continue;
                    }
                    (self.upper[vb], true)
                } else {
                    if !self.lower[vb].is_finite() {
                        continue;
                    }
                    (self.lower[vb], false)
                };
                let ratio = ((bound - v) / delta).max(0.0);
                theta_relaxed = theta_relaxed.min(ratio + FEAS_TOL / delta.abs());
                pool.push((r, ratio, to_upper, g.abs(), vb));
            }
            let mut theta_row = f64::INFINITY;
            let mut leave: Option<(usize, bool, f64, usize)> = None;
            if !pool.is_empty() {
                pool.retain(|c| c.1 <= theta_relaxed);
                let gmax = pool.iter().map(|c| c.3).fold(0.0f64, f64::max);
                let healthy = 0.01 * gmax;
                let mut best: Option<&(usize, f64, bool, f64, usize)> = None;
                for c in &pool {
                    if c.3 < healthy {
                        continue;
                    }
                    let take = match best {
                        None => true,
                        Some(b) => {
                            if self.bland {
                                c.4 < b.4
                            } else {
                                c.3 > b.3 || (c.3 == b.3 && c.4 < b.4)
                            }
                        }
                    };
                    if take {
                        best = Some(c);
                    }
                }
                let b = best.expect("nonempty pivot pool");
                theta_row = b.1;
                leave = Some((b.0, b.2, b.3, b.4));
            }

            let step;
            if gap <= theta_row {
                if !gap.is_finite() {
                    return Ok(RunEnd::Unbounded);
                }
                // bound flip: the entering variable crosses its box
                step = gap;
                self.apply_step(q, t, step, &w);
                if self.saved_bounds.is_none() {
                    self.x[q] = if t > 0.0 {
                        self.upper[q]
                    } else {
                        self.lower[q]
                    };
                }
                self.status[q] = if t > 0.0 {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                };
            } else {
                let (row, to_upper, _, leaving) = leave.expect("finite ratio without a row");
                step = theta_row;
                self.apply_step(q, t, step, &w);
                self.x[leaving] = if to_upper {
                    self.upper[leaving]
                } else {
                    self.lower[leaving]
                };
                self.status[leaving] = if leaving >= self.art_start {
                    // artificials never re-enter once they leave the basis
                    self.lower[leaving] = 0.0;
                    self.upper[leaving] = 0.0;
                    self.x[leaving] = 0.0;
                    VarStatus::Fixed
                } else if self.lower[leaving] == self.upper[leaving] {
                    VarStatus::Fixed
                } else if to_upper {
                    VarStatus::AtUpper
                } else {
                    VarStatus::AtLower
                };
                self.status[q] = VarStatus::Basic(row);
                self.basis[row] = q;
                self.update_binv(row, &w);
            }
            self.pivots_since_refactor += 1;
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::MaxIterations(self.max_iterations));
            }

            if step <= DEGEN_STEP_TOL {
                self.degen_streak += 1;
                if self.degen_streak >= BLAND_STREAK {
                    self.bland = true;
                }
                if self.degen_streak >= PERTURB_STREAK && self.saved_bounds.is_none() {
                    self.apply_perturbation();
                }
            } else {
                self.degen_streak = 0;
                self.bland = false;
            }
        }
    }

    fn apply_step(&mut self, q: usize, t: f64, theta: f64, w: &[f64]) {
        if theta == 0.0 {
            return;
        }
        self.x[q] += t * theta;
        for r in 0..self.m {
            self.x[self.basis[r]] -= t * theta * w[r];
        }
    }

    /// Replaces basic artificials at value zero by regular columns where a
    /// nonzero pivot exists; rows without one are structurally redundant and
    /// keep their (frozen) artificial.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < self.art_start {
                continue;
            }
            let row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.art_start {
                if matches!(self.status[j], VarStatus::Basic(_)) {
                    continue;
                }
                let elem = if j < self.n {
                    let mut s = 0.0;
                    for i in 0..m {
                        s += row[i] * self.prob.constraint_matrix[(i, j)];
                    }
                    s
                } else {
                    row[j - self.n]
                };
                if elem.abs() > 1e-8 {
                    match best {
                        Some((_, mag)) if elem.abs() <= mag => {}
                        _ => best = Some((j, elem.abs())),
                    }
                }
            }
            if let Some((j, _)) = best {
                let w = self.ftran(j);
                let art = self.basis[r];
                self.lower[art] = 0.0;
                self.upper[art] = 0.0;
                self.x[art] = 0.0;
                self.status[art] = VarStatus::Fixed;
                self.status[j] = VarStatus::Basic(r);
                self.basis[r] = j;
                self.update_binv(r, &w);
                self.pivots_since_refactor += 1;
            }
        }
        Ok(())
    }

    /// Freezes every artificial at zero before phase 2.
    fn freeze_artificials(&mut self) {
        for a in self.art_start..self.nv {
            self.lower[a] = 0.0;
            self.upper[a] = 0.0;
            if !matches!(self.status[a], VarStatus::Basic(_)) {
                self.status[a] = VarStatus::Fixed;
                self.x[a] = 0.0;
            }
        }
    }

    fn infeasibility(&self) -> f64 {
        self.x[self.art_start..self.nv]
            .iter()
            .map(|v| v.max(0.0))
            .sum()
    }

    fn structural_values(&self) -> Vec<f64> {
        self.x[..self.n].to_vec()
    }
}

/// Solves the problem, returning a basic primal/dual pair.
pub fn solve_lp(prob: &LpProblem) -> Result<LpSolution> {
    prob.validate();
    let mut sim = Simplex::new(prob);
    let m = sim.m;

    if sim.has_artificials() {
        let c1 = sim.phase1_costs();
        match sim.run(&c1)? {
            RunEnd::Optimal => {}
            RunEnd::Unbounded => return Err(Error::Numerical("phase 1 cannot be unbounded")),
        }
        sim.refactor()?;
        let b_inf = prob.rhs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let infeas = sim.infeasibility();
        if infeas > FEAS_TOL * (1.0 + b_inf) {
            // Farkas multipliers from the phase-1 duals
            let y = sim.price(&c1);
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: sim.structural_values(),
                dual: y.iter().map(|v| -v).collect(),
                objective_value: infeas,
                basis: sim.basis.clone(),
            });
        }
        sim.drive_out_artificials()?;
        sim.freeze_artificials();
    }

    let c2 = sim.phase2_costs();
    match sim.run(&c2)? {
        RunEnd::Unbounded => Ok(LpSolution {
            status: LpStatus::Unbounded,
            primal: sim.structural_values(),
            dual: vec![0.0; m],
            objective_value: match prob.sense {
                Sense::Min => f64::NEG_INFINITY,
                Sense::Max => f64::INFINITY,
            },
            basis: sim.basis.clone(),
        }),
        RunEnd::Optimal => {
            sim.refactor()?;
            let y = sim.price(&c2);
            let dual = match prob.sense {
                Sense::Min => y,
                Sense::Max => y.iter().map(|v| -v).collect(),
            };
            let primal = sim.structural_values();
            let objective_value = dot(&prob.objective, &primal);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                primal,
                dual,
                objective_value,
                basis: sim.basis.clone(),
            })
        }
    }
}

/// Outcome of a feasibility check for `A x <= b` with free variables:
/// either a feasible point or a Farkas certificate `w >= 0`, `wᵀA = 0`,
/// `wᵀb < 0`, normalized to `max(w) = 1`.
#[derive(Debug, Clone)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible(Vec<f64>),
}

/// Decides `A x <= b` constructively; exactly one variant is returned.
pub fn check_feasible(a: &DenseMatrix, b: &[f64]) -> Result<Feasibility> {
    assert_eq!(a.rows(), b.len(), "rhs length");
    let prob = LpProblem::new(
        Sense::Min,
        vec![0.0; a.cols()],
        a.clone(),
        vec![RowSense::Le; a.rows()],
        b.to_vec(),
    );
    let sol = solve_lp(&prob)?;
    match sol.status {
        LpStatus::Optimal => Ok(Feasibility::Feasible(sol.primal)),
        LpStatus::Infeasible => {
            let mut w: Vec<f64> = sol.dual.iter().map(|&v| v.max(0.0)).collect();
            let wmax = w.iter().fold(0.0f64, |acc, &v| acc.max(v));
            if wmax <= 0.0 {
                return Err(Error::Numerical("empty infeasibility certificate"));
            }
            for v in &mut w {
                *v /= wmax;
            }
            Ok(Feasibility::Infeasible(w))
        }
        LpStatus::Unbounded => Err(Error::UnexpectedLpStatus(LpStatus::Unbounded)),
    }
}

//! Exact rational linear programming.
//!
//! [`LinearProgram`] is a general `min c·x, x ≥ 0` problem solved by a dense
//! two-phase tableau simplex with Bland's rule, which cannot cycle.
//! [`SimplexLp`] restricts the variables to the probability simplex, which
//! is the setting of every credal-set computation in this crate.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::Error;

/// Default cap on the number of variables for vertex enumeration.
pub const VERTEX_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// Linear constraint `coeffs·x (≥|≤|=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Ge, rhs)
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Le, rhs)
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint::new(coeffs, Relation::Eq, rhs)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Outcome of a general linear program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

/// `minimize objective·x` subject to `constraints` and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn minimize(&self) -> LpOutcome {
        Tableau::solve(self)
    }
}

/// Linear program over the probability simplex: variables are implicitly
/// non-negative and sum to one, so the problem is bounded.
#[derive(Clone, Debug)]
pub struct SimplexLp {
    pub n: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        witness: Vec<Rational>,
    },
    Infeasible,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            LpResult::Infeasible => None,
        }
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { witness, .. } => Some(witness),
            LpResult::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }
}

impl SimplexLp {
    pub fn new(n: usize) -> Self {
        SimplexLp {
            n,
            objective: vec![Rational::zero(); n],
            constraints: Vec::new(),
        }
    }

    pub fn with_objective(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, constraint: Constraint) {
        debug_assert_eq!(constraint.coeffs.len(), self.n);
        self.constraints.push(constraint);
    }

    fn simplex_row(&self) -> Constraint {
        Constraint::eq(vec![Rational::one(); self.n], Rational::one())
    }

    /// True iff `p` lies in the simplex and satisfies every constraint.
    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.n
            && p.iter().all(|v| !v.is_negative())
            && self.simplex_row().is_satisfied(p)
            && self.constraints.iter().all(|c| c.is_satisfied(p))
    }

    fn as_program(&self) -> LinearProgram {
        let mut constraints = self.constraints.clone();
        constraints.push(self.simplex_row());
        LinearProgram {
            num_vars: self.n,
            objective: self.objective.clone(),
            constraints,
        }
    }
}

pub fn solve_min(lp: &SimplexLp) -> LpResult {
    match lp.as_program().minimize() {
        LpOutcome::Optimal { value, point } => LpResult::Optimal {
            value,
            witness: point,
        },
        LpOutcome::Infeasible => LpResult::Infeasible,
        LpOutcome::Unbounded => unreachable!("programs over the simplex are bounded"),
    }
}

pub fn solve_max(lp: &SimplexLp) -> LpResult {
    let negated = SimplexLp {
        n: lp.n,
        objective: lp.objective.iter().map(|c| -c).collect(),
        constraints: lp.constraints.clone(),
    };
    match solve_min(&negated) {
        LpResult::Optimal { value, witness } => LpResult::Optimal {
            value: -value,
            witness,
        },
        LpResult::Infeasible => LpResult::Infeasible,
    }
}

/// Exact infimum of `(numerator·p) / (denominator·p)` over the feasible
/// region of `lp` (its objective is ignored), by the Charnes–Cooper change
/// of variables `y = t·p`, `t = 1 / (denominator·p)`.
pub fn solve_fractional_min(
    numerator: &[Rational],
    denominator: &[Rational],
    lp: &SimplexLp,
) -> Result<LpResult, Error> {
    let n = lp.n;
    if numerator.len() != n || denominator.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: numerator.len().min(denominator.len()),
        });
    }
    let positivity = solve_min(&SimplexLp {
        n,
        objective: denominator.to_vec(),
        constraints: lp.constraints.clone(),
    });
    match positivity {
        LpResult::Infeasible => return Ok(LpResult::Infeasible),
        LpResult::Optimal { value, .. } if !value.is_positive() => {
            return Err(Error::PositivityViolated)
        }
        LpResult::Optimal { .. } => {}
    }

    // Variables (y_1..y_n, t).
    let mut program = LinearProgram::new(n + 1);
    program.objective[..n].clone_from_slice(numerator);
    for c in &lp.constraints {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(-&c.rhs);
        program
            .constraints
            .push(Constraint::new(coeffs, c.relation, Rational::zero()));
    }
    let mut sum = vec![Rational::one(); n];
    sum.push(-Rational::one());
    program.constraints.push(Constraint::eq(sum, Rational::zero()));
    let mut scale = denominator.to_vec();
    scale.push(Rational::zero());
    program.constraints.push(Constraint::eq(scale, Rational::one()));

    match program.minimize() {
        LpOutcome::Optimal { value, point } => {
            let t = &point[n];
            let witness = point[..n].iter().map(|y| y / t).collect();
            Ok(LpResult::Optimal { value, witness })
        }
        LpOutcome::Infeasible => Ok(LpResult::Infeasible),
        LpOutcome::Unbounded => Err(Error::PositivityViolated),
    }
}

pub fn enumerate_vertices(lp: &SimplexLp) -> Result<Vec<Vec<Rational>>, Error> {
    enumerate_vertices_with_cap(lp, VERTEX_CAP)
}

/// All extreme points of the feasible polytope, in lexicographic order.
///
/// The equality rows are reduced first, so the polytope is parametrised by
/// its `d` free coordinates; every choice of `d` tight inequality rows
/// whose system is nonsingular yields a candidate point, kept if feasible.
pub fn enumerate_vertices_with_cap(lp: &SimplexLp, cap: usize) -> Result<Vec<Vec<Rational>>, Error> {
    let n = lp.n;
    if n > cap {
        return Err(Error::VertexCapExceeded { n, cap });
    }
    let mut equalities: Vec<Vec<Rational>> = vec![augmented(&lp.simplex_row())];
    let mut inequalities: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        let mut row = vec![Rational::zero(); n + 1];
        row[i] = Rational::one();
        inequalities.push(row);
    }
    for c in &lp.constraints {
        match c.relation {
            Relation::Eq => equalities.push(augmented(c)),
            Relation::Ge => inequalities.push(augmented(c)),
            Relation::Le => inequalities.push(augmented(c).iter().map(|v| -v).collect()),
        }
    }

    let Some(pivots) = reduce(&mut equalities, n) else {
        return Ok(Vec::new());
    };
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let d = free.len();

    // x = base + Σ_t z_t · direction[t]
    let mut base = vec![Rational::zero(); n];
    for (row, &p) in equalities.iter().zip(&pivots) {
        base[p] = row[n].clone();
    }
    let directions: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut dir = vec![Rational::zero(); n];
            dir[f] = Rational::one();
            for (row, &p) in equalities.iter().zip(&pivots) {
                dir[p] = -&row[f];
            }
            dir
        })
        .collect();

    // Each inequality a·x ≥ b becomes g·z ≥ h in the free coordinates.
    let mut reduced: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for row in &inequalities {
        let a = &row[..n];
        let g: Vec<Rational> = directions.iter().map(|dir| dot(a, dir)).collect();
        let h = &row[n] - dot(a, &base);
        if g.iter().all(Zero::is_zero) {
            if h.is_positive() {
                return Ok(Vec::new());
            }
        } else {
            reduced.push((g, h));
        }
    }

    let feasible = |z: &[Rational]| reduced.iter().all(|(g, h)| dot(g, z) >= *h);
    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    if d == 0 {
        found.insert(base);
    } else {
        for rows in (0..reduced.len()).combinations(d) {
            let mut system: Vec<Vec<Rational>> = rows
                .iter()
                .map(|&i| {
                    let mut r = reduced[i].0.clone();
                    r.push(reduced[i].1.clone());
                    r
                })
                .collect();
            let Some(z) = solve_square(&mut system) else {
                continue;
            };
            if !feasible(&z) {
                continue;
            }
            let mut x = base.clone();
            for (zt, dir) in z.iter().zip(&directions) {
                for (xi, di) in x.iter_mut().zip(dir) {
                    *xi += zt * di;
                }
            }
            found.insert(x);
        }
    }
    Ok(found.into_iter().collect())
}

fn augmented(c: &Constraint) -> Vec<Rational> {
    let mut row = c.coeffs.clone();
    row.push(c.rhs.clone());
    row
}

/// Reduced row echelon form of augmented rows with `n` coefficient columns.
/// Drops zero rows and returns the pivot column of each remaining row, or
/// `None` if the system is inconsistent.
fn reduce(rows: &mut Vec<Vec<Rational>>, n: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v /= &lead;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    rows.truncate(r);
    Some(pivots)
}

/// Solves a square augmented system; `None` if singular.
fn solve_square(rows: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let d = rows.len();
    for col in 0..d {
        let p = (col..d).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(col, p);
        let lead = rows[col][col].clone();
        for v in rows[col][col..].iter_mut() {
            *v /= &lead;
        }
        let (above, rest) = rows.split_at_mut(col);
        let (pivot, below) = rest.split_first_mut().expect("col < d");
        for row in above.iter_mut().chain(below.iter_mut()) {
            if !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Some(rows.iter().map(|row| row[d].clone()).collect())
}

/// Dense simplex tableau. Columns: structural, slack/surplus, artificial.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost_row: Vec<Rational>,
    cost_rhs: Rational,
    allowed: Vec<bool>,
}

impl Tableau {
    fn solve(lp: &LinearProgram) -> LpOutcome {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let art_start = n + slack_count;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        let mut slack = n;
        let mut artificial = art_start;
        for c in &lp.constraints {
            debug_assert_eq!(c.coeffs.len(), n);
            let (coeffs, relation, b) = if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Ge => Relation::Le,
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            };
            let mut row: Vec<Rational> = coeffs;
            row.resize(art_start, Rational::zero());
            match relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            relations.push(relation);
            rows.push(row);
            rhs.push(b);
        }
        let total = artificial;
        for (row, &b) in rows.iter_mut().zip(&basis) {
            row.resize(total, Rational::zero());
            if b >= art_start {
                row[b] = Rational::one();
            }
        }

        let mut tableau = Tableau {
            rows,
            rhs,
            basis,
            cost_row: Vec::new(),
            cost_rhs: Rational::zero(),
            allowed: vec![true; total],
        };

        if total > art_start {
            let mut phase_one = vec![Rational::zero(); total];
            for c in phase_one[art_start..].iter_mut() {
                *c = Rational::one();
            }
            tableau.set_costs(&phase_one);
            tableau.run().expect("phase one is bounded below by zero");
            if !tableau.objective_value().is_zero() {
                return LpOutcome::Infeasible;
            }
            tableau.evict_artificials(art_start);
            for a in tableau.allowed[art_start..].iter_mut() {
                *a = false;
            }
        }

        let mut costs = lp.objective.clone();
        costs.resize(total, Rational::zero());
        tableau.set_costs(&costs);
        if tableau.run().is_none() {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Rational::zero(); n];
        for (i, &b) in tableau.basis.iter().enumerate() {
            if b < n {
                point[b] = tableau.rhs[i].clone();
            }
        }
        LpOutcome::Optimal {
            value: tableau.objective_value(),
            point,
        }
    }

    fn objective_value(&self) -> Rational {
        -&self.cost_rhs
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.cost_row = costs.to_vec();
        self.cost_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (c, a) in self.cost_row.iter_mut().zip(&self.rows[i]) {
                *c -= &cb * a;
            }
            self.cost_rhs -= &cb * &self.rhs[i];
        }
    }

    /// Runs Bland's rule to optimality; `None` if unbounded.
    fn run(&mut self) -> Option<()> {
        loop {
            let Some(enter) = (0..self.cost_row.len())
                .find(|&j| self.allowed[j] && self.cost_row[j].is_negative())
            else {
                return Some(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (row, _) = leave?;
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let lead = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &lead;
        }
        self.rhs[r] /= &lead;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.cost_row[col].is_zero() {
            let factor = self.cost_row[col].clone();
            for (v, pv) in self.cost_row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.cost_rhs -= &factor * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// After a successful phase one, pivots zero-level artificials out of
    /// the basis, dropping rows that turn out to be redundant.
    fn evict_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < art_start {
                i += 1;
                continue;
            }
            match (0..art_start).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}

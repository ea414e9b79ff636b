//! Exact rational linear programming: a dense two-phase primal simplex
//! with Bland's rule. Every optimal answer comes with dual multipliers and
//! is checked for primal feasibility, dual feasibility and equal objective
//! values before it is returned. Infeasible and unbounded answers carry a
//! certificate that is checked the same way.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `min objective · z` over the rows, with each variable either `>= 0` or
/// free.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    bounds: Vec<Bound>,
    rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        let bounds = vec![Bound::NonNegative; objective.len()];
        LinearProgram { objective, bounds, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn set_bound(&mut self, var: usize, bound: Bound) {
        self.bounds[var] = bound;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> usize {
        self.rows.push(Constraint { coeffs, relation, rhs });
        self.rows.len() - 1
    }

    /// Row given by `(variable, coefficient)` pairs; repeated variables add up.
    pub fn add_sparse_row(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        let mut coeffs = vec![Rational::zero(); self.num_vars()];
        for (j, c) in terms {
            coeffs[j] += c;
        }
        self.add_row(coeffs, relation, rhs)
    }

    fn validate(&self) -> Result<()> {
        if self.bounds.len() != self.objective.len() {
            return Err(Error::MalformedLp("bound count differs from variable count".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars() {
                return Err(Error::MalformedLp(format!(
                    "row {i} has {} coefficients for {} variables",
                    row.coeffs.len(),
                    self.num_vars()
                )));
            }
        }
        Ok(())
    }

    fn row_activity(&self, row: &Constraint, z: &[Rational]) -> Rational {
        row.coeffs.iter().zip(z).filter(|(a, _)| !a.is_zero()).map(|(a, x)| a * x).sum()
    }

    /// `y^T A_j` for column `j`.
    fn column_dot(&self, j: usize, y: &[Rational]) -> Rational {
        self.rows
            .iter()
            .zip(y)
            .filter(|(r, yi)| !yi.is_zero() && !r.coeffs[j].is_zero())
            .map(|(r, yi)| &r.coeffs[j] * yi)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { primal: Vec<Rational>, duals: Vec<Rational>, objective: Rational },
    /// Row multipliers `y` with the sign pattern of a dual solution,
    /// `y^T A <= 0` on nonnegative columns (`= 0` on free ones) and
    /// `y^T b > 0`.
    Infeasible { farkas: Vec<Rational> },
    /// A recession direction of the feasible region with negative cost.
    Unbounded { ray: Vec<Rational> },
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }

    pub fn objective(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { objective, .. } => Some(objective),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Column {
    Structural { var: usize, negated: bool },
    Slack,
    Surplus,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    columns: Vec<Column>,
    /// Column that formed the unit vector of each row initially.
    unit_col: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let nz: Vec<usize> = (0..self.columns.len()).filter(|&k| !self.rows[r][k].is_zero()).collect();
        for &k in &nz {
            self.rows[r][k] *= &inv;
        }
        self.rhs[r] *= &inv;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.rows[i][k] -= delta;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.reduced[c].is_zero() {
            let f = self.reduced[c].clone();
            for &k in &nz {
                let delta = &f * &pivot_row[k];
                self.reduced[k] -= delta;
            }
        }
        self.basis[r] = c;
    }

    fn price(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (k, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    reduced[k] -= cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    /// Bland's rule: lowest-index improving column, lowest basic index
    /// among tied ratios.
    fn iterate(&mut self, eligible: &[bool]) -> Outcome {
        loop {
            let Some(c) = (0..self.columns.len()).find(|&k| eligible[k] && self.reduced[k].is_negative())
            else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Outcome::Unbounded(c),
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.columns.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[i].clone();
        }
        values
    }
}

/// Solves `lp` exactly. Exact duplicate rows are solved once; the copies
/// receive a zero multiplier.
pub fn solve_exact_lp(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let mut kept: Vec<usize> = Vec::new();
    let mut seen: HashMap<&Constraint, usize> = HashMap::new();
    for (i, row) in lp.rows.iter().enumerate() {
        if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(row) {
            slot.insert(i);
            kept.push(i);
        }
    }
    let result = simplex(lp, &kept);
    verify(lp, &result)?;
    Ok(result)
}

fn simplex(lp: &LinearProgram, kept: &[usize]) -> LpResult {
    let n = lp.num_vars();
    let m = kept.len();
    let mut columns = Vec::new();
    for j in 0..n {
        columns.push(Column::Structural { var: j, negated: false });
        if lp.bounds[j] == Bound::Free {
            columns.push(Column::Structural { var: j, negated: true });
        }
    }
    let structural = columns.len();
    // Rows are scaled so that every right-hand side is nonnegative.
    let signs: Vec<bool> = kept.iter().map(|&i| lp.rows[i].rhs.is_negative()).collect();
    let relations: Vec<Relation> = kept
        .iter()
        .zip(&signs)
        .map(|(&i, &neg)| match (lp.rows[i].relation, neg) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (rel, _) => rel,
        })
        .collect();
    let mut unit_col = vec![0; m];
    let mut extra: Vec<(usize, Column)> = Vec::new();
    for (i, rel) in relations.iter().enumerate() {
        match rel {
            Relation::Le => extra.push((i, Column::Slack)),
            Relation::Ge => {
                extra.push((i, Column::Surplus));
                extra.push((i, Column::Artificial));
            }
            Relation::Eq => extra.push((i, Column::Artificial)),
        }
    }
    let width = structural + extra.len();
    let mut rows = vec![vec![Rational::zero(); width]; m];
    let mut rhs = Vec::with_capacity(m);
    for (i, &ri) in kept.iter().enumerate() {
        let row = &lp.rows[ri];
        let flip = signs[i];
        for (k, col) in columns.iter().enumerate() {
            if let Column::Structural { var, negated } = *col {
                let a = &row.coeffs[var];
                if !a.is_zero() {
                    rows[i][k] = if negated != flip { -a } else { a.clone() };
                }
            }
        }
        rhs.push(if flip { -&row.rhs } else { row.rhs.clone() });
    }
    let mut basis = vec![0; m];
    for (offset, &(i, col)) in extra.iter().enumerate() {
        let k = structural + offset;
        columns.push(col);
        match col {
            Column::Slack | Column::Artificial => {
                rows[i][k] = Rational::one();
                basis[i] = k;
                unit_col[i] = k;
            }
            Column::Surplus => rows[i][k] = -Rational::one(),
            Column::Structural { .. } => unreachable!(),
        }
    }
    let mut tab = Tableau { rows, rhs, basis, reduced: Vec::new(), columns, unit_col };
    let is_art: Vec<bool> = tab.columns.iter().map(|c| *c == Column::Artificial).collect();

    if is_art.iter().any(|&a| a) {
        let phase1: Vec<Rational> =
            is_art.iter().map(|&a| if a { Rational::one() } else { Rational::zero() }).collect();
        tab.price(&phase1);
        let all = vec![true; width];
        // Phase one is bounded below by zero.
        let _ = tab.iterate(&all);
        let infeasibility: Rational =
            (0..m).filter(|&i| is_art[tab.basis[i]]).map(|i| tab.rhs[i].clone()).sum();
        if infeasibility.is_positive() {
            let mut farkas = vec![Rational::zero(); lp.rows.len()];
            for (i, &ri) in kept.iter().enumerate() {
                let u = tab.unit_col[i];
                let y = &phase1[u] - &tab.reduced[u];
                farkas[ri] = if signs[i] { -y } else { y };
            }
            return LpResult::Infeasible { farkas };
        }
        for i in 0..m {
            if !is_art[tab.basis[i]] {
                continue;
            }
            if let Some(k) = (0..width).find(|&k| !is_art[k] && !tab.rows[i][k].is_zero()) {
                tab.pivot(i, k);
            }
        }
    }

    let costs: Vec<Rational> = tab
        .columns
        .iter()
        .map(|c| match *c {
            Column::Structural { var, negated: false } => lp.objective[var].clone(),
            Column::Structural { var, negated: true } => -&lp.objective[var],
            _ => Rational::zero(),
        })
        .collect();
    tab.price(&costs);
    let eligible: Vec<bool> = is_art.iter().map(|a| !a).collect();
    let outcome = tab.iterate(&eligible);
    let values = tab.column_values();
    let to_vars = |col_values: &[Rational]| {
        let mut z = vec![Rational::zero(); n];
        for (k, col) in tab.columns.iter().enumerate() {
            if let Column::Structural { var, negated } = *col {
                if negated {
                    z[var] -= &col_values[k];
                } else {
                    z[var] += &col_values[k];
                }
            }
        }
        z
    };
    match outcome {
        Outcome::Unbounded(c) => {
            let mut dir = vec![Rational::zero(); width];
            dir[c] = Rational::one();
            for (i, &b) in tab.basis.iter().enumerate() {
                if !tab.rows[i][c].is_zero() {
                    dir[b] = -&tab.rows[i][c];
                }
            }
            LpResult::Unbounded { ray: to_vars(&dir) }
        }
        Outcome::Optimal => {
            let primal = to_vars(&values);
            let mut duals = vec![Rational::zero(); lp.rows.len()];
            for (i, &ri) in kept.iter().enumerate() {
                let y = -&tab.reduced[tab.unit_col[i]];
                duals[ri] = if signs[i] { -y } else { y };
            }
            let objective = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
            LpResult::Optimal { primal, duals, objective }
        }
    }
}

fn sign_ok(relation: Relation, y: &Rational) -> bool {
    match relation {
        Relation::Le => !y.is_positive(),
        Relation::Ge => !y.is_negative(),
        Relation::Eq => true,
    }
}

fn verify(lp: &LinearProgram, result: &LpResult) -> Result<()> {
    let fail = |what: String| Err(Error::Internal(format!("simplex certificate: {what}")));
    match result {
        LpResult::Optimal { primal, duals, objective } => {
            for (j, (x, b)) in primal.iter().zip(&lp.bounds).enumerate() {
                if *b == Bound::NonNegative && x.is_negative() {
                    return fail(format!("variable {j} negative"));
                }
            }
            for (i, row) in lp.rows.iter().enumerate() {
                let act = lp.row_activity(row, primal);
                let ok = match row.relation {
                    Relation::Le => act <= row.rhs,
                    Relation::Ge => act >= row.rhs,
                    Relation::Eq => act == row.rhs,
                };
                if !ok {
                    return fail(format!("row {i} violated"));
                }
                if !sign_ok(row.relation, &duals[i]) {
                    return fail(format!("multiplier {i} has the wrong sign"));
                }
                if !duals[i].is_zero() && act != row.rhs {
                    return fail(format!("row {i} has a multiplier but is slack"));
                }
            }
            for j in 0..lp.num_vars() {
                let reduced = &lp.objective[j] - lp.column_dot(j, duals);
                let ok = match lp.bounds[j] {
                    Bound::NonNegative => !reduced.is_negative(),
                    Bound::Free => reduced.is_zero(),
                };
                if !ok {
                    return fail(format!("reduced cost of variable {j} infeasible"));
                }
            }
            let dual_obj: Rational = lp.rows.iter().zip(duals).map(|(r, y)| &r.rhs * y).sum();
            if dual_obj != *objective {
                return fail("primal and dual objectives differ".into());
            }
        }
        LpResult::Infeasible { farkas } => {
            for (i, row) in lp.rows.iter().enumerate() {
                if !sign_ok(row.relation, &farkas[i]) {
                    return fail(format!("Farkas multiplier {i} has the wrong sign"));
                }
            }
            for j in 0..lp.num_vars() {
                let d = lp.column_dot(j, farkas);
                let ok = match lp.bounds[j] {
                    Bound::NonNegative => !d.is_positive(),
                    Bound::Free => d.is_zero(),
                };
                if !ok {
                    return fail(format!("Farkas column {j} infeasible"));
                }
            }
            let yb: Rational = lp.rows.iter().zip(farkas).map(|(r, y)| &r.rhs * y).sum();
            if !yb.is_positive() {
                return fail("Farkas value not positive".into());
            }
        }
        LpResult::Unbounded { ray } => {
            for (j, (r, b)) in ray.iter().zip(&lp.bounds).enumerate() {
                if *b == Bound::NonNegative && r.is_negative() {
                    return fail(format!("ray leaves the bound of variable {j}"));
                }
            }
            for (i, row) in lp.rows.iter().enumerate() {
                let act = lp.row_activity(row, ray);
                let ok = match row.relation {
                    Relation::Le => !act.is_positive(),
                    Relation::Ge => !act.is_negative(),
                    Relation::Eq => act.is_zero(),
                };
                if !ok {
                    return fail(format!("ray violates row {i}"));
                }
            }
            let slope: Rational = lp.objective.iter().zip(ray).map(|(c, r)| c * r).sum();
            if !slope.is_negative() {
                return fail("ray does not improve the objective".into());
            }
        }
    }
    Ok(())
}

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relop {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub op: Relop,
    pub rhs: Rat,
}

/// A linear program over exact rationals. Variables are free unless
/// flagged nonnegative; `nonneg` must match the variable count.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub maximize: bool,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl Constraint {
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, op: Relop::Le, rhs }
    }
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, op: Relop::Ge, rhs }
    }
    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, op: Relop::Eq, rhs }
    }

    /// Signed violation of the constraint at a point; zero or negative
    /// means satisfied (exactly zero slack for equalities).
    pub fn violation(&self, point: &[Rat]) -> Rat {
        let lhs: Rat = self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        match self.op {
            Relop::Le => lhs - &self.rhs,
            Relop::Ge => &self.rhs - lhs,
            Relop::Eq => (lhs - &self.rhs).abs(),
        }
    }
}

/// Dense two-phase simplex with Bland's rule. Exact arithmetic keeps
/// every optimum and vertex rational; Bland's rule rules out cycling.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    if lp.nonneg.len() != n {
        return Err(Error::InvalidSpec("nonneg flags do not match variable count".into()));
    }
    for c in &lp.constraints {
        if c.coeffs.len() != n {
            return Err(Error::InvalidSpec("constraint width does not match variable count".into()));
        }
    }

    // Split free variables into positive and negative parts.
    let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut n_struct = 0usize;
    for &nn in &lp.nonneg {
        if nn {
            col_of_var.push((n_struct, None));
            n_struct += 1;
        } else {
            col_of_var.push((n_struct, Some(n_struct + 1)));
            n_struct += 2;
        }
    }

    let m = lp.constraints.len();
    // Count extra columns: one slack/surplus per inequality, one
    // artificial per Ge/Eq row (after sign normalization).
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut ops: Vec<Relop> = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut row = vec![Rat::zero(); n_struct + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            let (pos, negpart) = col_of_var[j];
            row[pos] = a.clone();
            if let Some(neg) = negpart {
                row[neg] = -a.clone();
            }
        }
        row[n_struct] = c.rhs.clone();
        let mut op = c.op;
        if row[n_struct].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            op = match op {
                Relop::Le => Relop::Ge,
                Relop::Ge => Relop::Le,
                Relop::Eq => Relop::Eq,
            };
        }
        rows.push(row);
        ops.push(op);
    }

    let n_slack = ops.iter().filter(|o| !matches!(o, Relop::Eq)).count();
    let n_art = ops.iter().filter(|o| !matches!(o, Relop::Le)).count();
    let total = n_struct + n_slack + n_art;

    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack_idx = n_struct;
    let mut art_idx = n_struct + n_slack;
    let art_start = n_struct + n_slack;
    for (r, row) in rows.into_iter().enumerate() {
        let mut full = vec![Rat::zero(); total + 1];
        full[..n_struct].clone_from_slice(&row[..n_struct]);
        full[total] = row[n_struct].clone();
        match ops[r] {
            Relop::Le => {
                full[slack_idx] = Rat::one();
                basis.push(slack_idx);
                slack_idx += 1;
            }
            Relop::Ge => {
                full[slack_idx] = -Rat::one();
                slack_idx += 1;
                full[art_idx] = Rat::one();
                basis.push(art_idx);
                art_idx += 1;
            }
            Relop::Eq => {
                full[art_idx] = Rat::one();
                basis.push(art_idx);
                art_idx += 1;
            }
        }
        tab.push(full);
    }

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        let mut cost = vec![Rat::zero(); total + 1];
        for j in art_start..total {
            cost[j] = Rat::one();
        }
        for (r, &b) in basis.iter().enumerate() {
            if b >= art_start {
                for j in 0..=total {
                    cost[j] = &cost[j] - &tab[r][j];
                }
            }
        }
        if !run_simplex(&mut tab, &mut cost, &mut basis, total, usize::MAX) {
            // Phase 1 of a feasibility objective is always bounded.
            unreachable!("phase 1 cannot be unbounded");
        }
        if cost[total].is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive out artificials still sitting in the basis at level 0.
        for r in 0..m {
            if basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&c| !tab[r][c].is_zero()) {
                    pivot(&mut tab, &mut cost, &mut basis, r, c, total);
                }
            }
        }
    }

    // Phase 2: the real objective (as minimization).
    let mut cost = vec![Rat::zero(); total + 1];
    for (j, c) in lp.objective.iter().enumerate() {
        let v = if lp.maximize { -c.clone() } else { c.clone() };
        let (pos, negpart) = col_of_var[j];
        cost[pos] = v.clone();
        if let Some(neg) = negpart {
            cost[neg] = -v;
        }
    }
    for (r, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            let factor = cost[b].clone();
            for j in 0..=total {
                let delta = &factor * &tab[r][j];
                cost[j] = &cost[j] - &delta;
            }
        }
    }
    if !run_simplex(&mut tab, &mut cost, &mut basis, total, art_start) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point_cols = vec![Rat::zero(); total];
    for (r, &b) in basis.iter().enumerate() {
        point_cols[b] = tab[r][total].clone();
    }
    let point: Vec<Rat> = col_of_var
        .iter()
        .map(|&(pos, negpart)| match negpart {
            None => point_cols[pos].clone(),
            Some(neg) => &point_cols[pos] - &point_cols[neg],
        })
        .collect();
    let mut value = -cost[total].clone();
    if lp.maximize {
        value = -value;
    }
    Ok(LpOutcome::Optimal { value, point })
}

/// Bland-rule simplex on a tableau in minimization form. Columns at or
/// past `banned_from` may not enter the basis (used to freeze
/// artificials in phase 2). Returns false on unboundedness.
fn run_simplex(
    tab: &mut [Vec<Rat>],
    cost: &mut [Rat],
    basis: &mut [usize],
    total: usize,
    banned_from: usize,
) -> bool {
    loop {
        let entering = (0..total.min(banned_from)).find(|&j| cost[j].is_negative());
        let Some(c) = entering else {
            return true;
        };
        let mut best: Option<(Rat, usize, usize)> = None; // (ratio, basis var, row)
        for (r, row) in tab.iter().enumerate() {
            if row[c].is_positive() {
                let ratio = &row[total] / &row[c];
                let key = (ratio, basis[r], r);
                best = match best {
                    None => Some(key),
                    Some(cur) => {
                        if (key.0.clone(), key.1) < (cur.0.clone(), cur.1) {
                            Some(key)
                        } else {
                            Some(cur)
                        }
                    }
                };
            }
        }
        let Some((_, _, r)) = best else {
            return false;
        };
        pivot(tab, cost, basis, r, c, total);
    }
}

fn pivot(
    tab: &mut [Vec<Rat>],
    cost: &mut [Rat],
    basis: &mut [usize],
    r: usize,
    c: usize,
    total: usize,
) {
    let piv = tab[r][c].clone();
    for j in 0..=total {
        tab[r][j] = &tab[r][j] / &piv;
    }
    for i in 0..tab.len() {
        if i != r && !tab[i][c].is_zero() {
            let factor = tab[i][c].clone();
            for j in 0..=total {
                let delta = &factor * &tab[r][j];
                tab[i][j] = &tab[i][j] - &delta;
            }
        }
    }
    if !cost[c].is_zero() {
        let factor = cost[c].clone();
        for j in 0..=total {
            let delta = &factor * &tab[r][j];
            cost[j] = &cost[j] - &delta;
        }
    }
    basis[r] = c;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn maximize_over_triangle() {
        // max x + y, x + y <= 1, x,y >= 0.
        let lp = LinearProgram {
            maximize: true,
            objective: vec![r(1), r(1)],
            constraints: vec![Constraint::le(vec![r(1), r(1)], r(1))],
            nonneg: vec![true, true],
        };
        let LpOutcome::Optimal { value, point } = solve(&lp).unwrap() else {
            panic!("expected optimum");
        };
        assert_eq!(value, r(1));
        for c in &lp.constraints {
            assert!(!c.violation(&point).is_positive());
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x - y with x + y = 2, x - y >= -4, both free.
        let lp = LinearProgram {
            maximize: false,
            objective: vec![r(1), r(-1)],
            constraints: vec![
                Constraint::eq(vec![r(1), r(1)], r(2)),
                Constraint::ge(vec![r(1), r(-1)], r(-4)),
            ],
            nonneg: vec![false, false],
        };
        let LpOutcome::Optimal { value, point } = solve(&lp).unwrap() else {
            panic!("expected optimum");
        };
        assert_eq!(value, r(-4));
        assert_eq!(point, vec![r(-1), r(3)]);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            maximize: false,
            objective: vec![r(1)],
            constraints: vec![
                Constraint::ge(vec![r(1)], r(3)),
                Constraint::le(vec![r(1)], r(1)),
            ],
            nonneg: vec![true],
        };
        assert_eq!(solve(&infeasible).unwrap(), LpOutcome::Infeasible);

        let unbounded = LinearProgram {
            maximize: true,
            objective: vec![r(1)],
            constraints: vec![Constraint::ge(vec![r(1)], r(0))],
            nonneg: vec![true],
        };
        assert_eq!(solve(&unbounded).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn exact_fractional_optimum() {
        // min t with a1 <= t, a2 <= t, a1 + a2 = 1, a >= 0: t = 1/2.
        let lp = LinearProgram {
            maximize: false,
            objective: vec![r(0), r(0), r(1)],
            constraints: vec![
                Constraint::le(vec![r(1), r(0), r(-1)], r(0)),
                Constraint::le(vec![r(0), r(1), r(-1)], r(0)),
                Constraint::eq(vec![r(1), r(1), r(0)], r(1)),
            ],
            nonneg: vec![true, true, false],
        };
        let LpOutcome::Optimal { value, .. } = solve(&lp).unwrap() else {
            panic!("expected optimum");
        };
        assert_eq!(value, rq(1, 2));
    }
}

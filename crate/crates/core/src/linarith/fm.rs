//! Fourier–Motzkin elimination over exact rationals with strict constraints
//! and witness extraction by back-substitution.

use std::collections::{BTreeMap, HashMap};

use super::{Feasibility, LinSystem, Rational, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    coeffs: Vec<Rational>,
    strict: bool,
    bound: Rational,
}

impl Row {
    fn is_ground(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn ground_holds(&self) -> bool {
        let zero = Rational::zero();
        if self.strict {
            zero > self.bound
        } else {
            zero >= self.bound
        }
    }
}

/// Keeps only the tightest row per normalized coefficient vector.
#[derive(Default)]
struct RowSet {
    rows: HashMap<Vec<Rational>, (Rational, bool)>,
}

impl RowSet {
    fn insert(&mut self, row: Row) {
        let pivot = row
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("ground rows are handled by the caller")
            .abs();
        let coeffs: Vec<Rational> = row.coeffs.iter().map(|c| c / &pivot).collect();
        let bound = &row.bound / &pivot;
        match self.rows.get_mut(&coeffs) {
            Some(existing) => {
                if bound > existing.0 || (bound == existing.0 && row.strict) {
                    *existing = (bound, row.strict);
                }
            }
            None => {
                self.rows.insert(coeffs, (bound, row.strict));
            }
        }
    }

    fn into_rows(self) -> Vec<Row> {
        let mut rows: Vec<Row> = self
            .rows
            .into_iter()
            .map(|(coeffs, (bound, strict))| Row { coeffs, strict, bound })
            .collect();
        // HashMap iteration order is not stable; keep elimination deterministic.
        rows.sort_by(|a, b| {
            a.coeffs
                .cmp(&b.coeffs)
                .then_with(|| a.bound.cmp(&b.bound))
                .then_with(|| a.strict.cmp(&b.strict))
        });
        rows
    }
}

/// Decides feasibility of `sys` over the rationals. A feasible answer carries
/// a witness that satisfies every constraint exactly.
pub fn fm_feasible(sys: &LinSystem) -> Feasibility {
    let names: Vec<String> = sys.variables().into_iter().collect();
    let index: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    // Independent blocks of variables are solved separately.
    let mut parent: Vec<usize> = (0..names.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for c in sys.constraints() {
        let mut vars = c.coefficients().keys().map(|v| index[v.as_str()]);
        if let Some(first) = vars.next() {
            for other in vars {
                let (a, b) = (find(&mut parent, first), find(&mut parent, other));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }

    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..names.len() {
        let root = find(&mut parent, v);
        blocks.entry(root).or_default().push(v);
    }
    let mut local_of = vec![(0usize, 0usize); names.len()];
    let block_list: Vec<Vec<usize>> = blocks.into_values().collect();
    for (b, members) in block_list.iter().enumerate() {
        for (pos, &v) in members.iter().enumerate() {
            local_of[v] = (b, pos);
        }
    }

    let mut block_rows: Vec<Vec<Row>> = vec![Vec::new(); block_list.len()];
    for c in sys.constraints() {
        if c.is_ground() {
            let row = Row {
                coeffs: Vec::new(),
                strict: c.relation() == Relation::Gt,
                bound: c.bound().clone(),
            };
            let ok = match c.relation() {
                Relation::Eq => c.bound().is_zero(),
                _ => row.ground_holds(),
            };
            if !ok {
                return Feasibility::Infeasible;
            }
            continue;
        }
        let first = index[c.coefficients().keys().next().unwrap().as_str()];
        let block = local_of[first].0;
        let width = block_list[block].len();
        let mut coeffs = vec![Rational::zero(); width];
        for (v, a) in c.coefficients() {
            coeffs[local_of[index[v.as_str()]].1] = a.clone();
        }
        match c.relation() {
            Relation::Ge | Relation::Gt => block_rows[block].push(Row {
                coeffs,
                strict: c.relation() == Relation::Gt,
                bound: c.bound().clone(),
            }),
            Relation::Eq => {
                let negated: Vec<Rational> = coeffs.iter().map(|a| -a).collect();
                block_rows[block].push(Row { coeffs, strict: false, bound: c.bound().clone() });
                block_rows[block].push(Row { coeffs: negated, strict: false, bound: -c.bound() });
            }
        }
    }

    let mut witness = BTreeMap::new();
    for (members, rows) in block_list.iter().zip(block_rows) {
        match solve_block(rows, members.len()) {
            Some(values) => {
                for (&v, value) in members.iter().zip(values) {
                    witness.insert(names[v].clone(), value);
                }
            }
            None => return Feasibility::Infeasible,
        }
    }
    debug_assert!(sys.is_satisfied_by(&witness));
    Feasibility::Feasible(witness)
}

struct Stage {
    var: usize,
    rows: Vec<Row>,
}

fn solve_block(rows: Vec<Row>, width: usize) -> Option<Vec<Rational>> {
    let mut current = {
        let mut set = RowSet::default();
        for row in rows {
            set.insert(row);
        }
        set.into_rows()
    };
    let mut remaining: Vec<usize> = (0..width).collect();
    let mut stages: Vec<Stage> = Vec::with_capacity(width);

    while !remaining.is_empty() {
        // Fewest occurrences first, ties by identifier order.
        let (pos, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let count = current.iter().filter(|r| !r.coeffs[v].is_zero()).count();
                (count, v)
            })
            .unwrap();
        remaining.remove(pos);

        let (with_var, without): (Vec<Row>, Vec<Row>) =
            current.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let (lower, upper): (Vec<&Row>, Vec<&Row>) =
            with_var.iter().partition(|r| r.coeffs[var].is_positive());

        let mut next = RowSet::default();
        for row in without {
            next.insert(row);
        }
        for lo in &lower {
            for up in &upper {
                let a = &lo.coeffs[var];
                let b = up.coeffs[var].abs();
                let coeffs: Vec<Rational> = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(x, y)| x * &b + y * a)
                    .collect();
                let combined = Row {
                    coeffs,
                    strict: lo.strict || up.strict,
                    bound: &lo.bound * &b + &up.bound * a,
                };
                if combined.is_ground() {
                    if !combined.ground_holds() {
                        return None;
                    }
                } else {
                    next.insert(combined);
                }
            }
        }
        stages.push(Stage { var, rows: with_var });
        current = next.into_rows();
    }

    let mut values = vec![Rational::zero(); width];
    for stage in stages.iter().rev() {
        values[stage.var] = pick_value(stage, &values)?;
    }
    Some(values)
}

#[derive(Clone)]
struct Bound {
    value: Rational,
    strict: bool,
}

impl Bound {
    fn admits_from_below(&self, x: &Rational) -> bool {
        if self.strict {
            x > &self.value
        } else {
            x >= &self.value
        }
    }

    fn admits_from_above(&self, x: &Rational) -> bool {
        if self.strict {
            x < &self.value
        } else {
            x <= &self.value
        }
    }
}

fn pick_value(stage: &Stage, values: &[Rational]) -> Option<Rational> {
    let var = stage.var;
    let mut lower: Option<Bound> = None;
    let mut upper: Option<Bound> = None;
    for row in &stage.rows {
        let rest: Rational = row
            .coeffs
            .iter()
            .enumerate()
            .filter(|(v, _)| *v != var)
            .map(|(v, c)| c * &values[v])
            .sum();
        let a = &row.coeffs[var];
        let value = (&row.bound - &rest) / a.clone();
        let candidate = Bound { value, strict: row.strict };
        if a.is_positive() {
            let tighter = match &lower {
                None => true,
                Some(b) => candidate.value > b.value || (candidate.value == b.value && candidate.strict),
            };
            if tighter {
                lower = Some(candidate);
            }
        } else {
            let tighter = match &upper {
                None => true,
                Some(b) => candidate.value < b.value || (candidate.value == b.value && candidate.strict),
            };
            if tighter {
                upper = Some(candidate);
            }
        }
    }

    let fits = |x: &Rational| {
        lower.as_ref().is_none_or(|b| b.admits_from_below(x))
            && upper.as_ref().is_none_or(|b| b.admits_from_above(x))
    };
    let zero = Rational::zero();
    if fits(&zero) {
        return Some(zero);
    }
    match (&lower, &upper) {
        (None, None) => Some(zero),
        (Some(lo), None) => Some(if lo.strict { &lo.value + &Rational::one() } else { lo.value.clone() }),
        (None, Some(up)) => Some(if up.strict { &up.value - &Rational::one() } else { up.value.clone() }),
        (Some(lo), Some(up)) => {
            if fits(&lo.value) {
                Some(lo.value.clone())
            } else if fits(&up.value) {
                Some(up.value.clone())
            } else {
                let mid = (&lo.value + &up.value).div_count(2);
                fits(&mid).then_some(mid)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linarith::LinConstraint;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let sys: LinSystem = [
            LinConstraint::ge([("x", q(1))], q(0)),
            LinConstraint::ge([("x", q(-1))], q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(fm_feasible(&sys), Feasibility::Infeasible);
    }

    #[test]
    fn equality_with_inequality_gives_checked_witness() {
        let sys: LinSystem = [
            LinConstraint::eq([("x", q(1))], q(0)),
            LinConstraint::ge([("x", q(2)), ("y", q(3))], q(6)),
        ]
        .into_iter()
        .collect();
        let result = fm_feasible(&sys);
        let w = result.witness().expect("feasible");
        assert!(sys.is_satisfied_by(w));
        assert_eq!(w["x"], q(0));
        assert!(w["y"] >= q(2));
        assert_eq!(w["y"], q(2));
    }

    #[test]
    fn strict_interval_uses_midpoint() {
        // 0 < x < 1 excludes both bounds and zero.
        let sys: LinSystem = [
            LinConstraint::gt([("x", q(1))], q(0)),
            LinConstraint::gt([("x", q(-1))], q(-1)),
        ]
        .into_iter()
        .collect();
        let w = fm_feasible(&sys).witness().cloned().unwrap();
        assert_eq!(w["x"], Rational::new(1, 2).unwrap());
    }

    #[test]
    fn strict_point_interval_is_infeasible() {
        let sys: LinSystem = [
            LinConstraint::ge([("x", q(1))], q(3)),
            LinConstraint::gt([("x", q(-1))], q(-3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(fm_feasible(&sys), Feasibility::Infeasible);
    }

    #[test]
    fn ground_constraints() {
        let ok: LinSystem = [LinConstraint::ge(Vec::<(String, Rational)>::new(), q(-1))]
            .into_iter()
            .collect();
        assert!(fm_feasible(&ok).is_feasible());
        let bad: LinSystem = [LinConstraint::gt(Vec::<(String, Rational)>::new(), q(0))]
            .into_iter()
            .collect();
        assert_eq!(fm_feasible(&bad), Feasibility::Infeasible);
        let cancelled: LinSystem = [LinConstraint::ge([("x", q(1)), ("x", q(-1))], q(1))]
            .into_iter()
            .collect();
        assert_eq!(fm_feasible(&cancelled), Feasibility::Infeasible);
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(fm_feasible(&LinSystem::new()), Feasibility::Feasible(BTreeMap::new()));
    }

    #[test]
    fn independent_blocks_solved_separately() {
        let sys: LinSystem = [
            LinConstraint::ge([("a", q(1)), ("b", q(1))], q(4)),
            LinConstraint::ge([("a", q(-1))], q(-1)),
            LinConstraint::gt([("c", q(1))], q(7)),
        ]
        .into_iter()
        .collect();
        let w = fm_feasible(&sys).witness().cloned().unwrap();
        assert_eq!(w.len(), 3);
        assert!(sys.is_satisfied_by(&w));
    }

    #[test]
    fn three_variable_chain_needs_back_substitution() {
        // x < y < z, z <= 1, x >= 0
        let sys: LinSystem = [
            LinConstraint::gt([("y", q(1)), ("x", q(-1))], q(0)),
            LinConstraint::gt([("z", q(1)), ("y", q(-1))], q(0)),
            LinConstraint::ge([("z", q(-1))], q(-1)),
            LinConstraint::ge([("x", q(1))], q(0)),
        ]
        .into_iter()
        .collect();
        let w = fm_feasible(&sys).witness().cloned().unwrap();
        assert!(sys.is_satisfied_by(&w));
    }
}

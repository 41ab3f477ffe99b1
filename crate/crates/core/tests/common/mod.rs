//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

use spq::linarith::{LinConstraint, LinSystem, Rational, Relation};

fn var(k: usize) -> String {
    format!("x{k}")
}

/// A random system made true at a random point, which is returned too.
pub fn planted_system<R: Rng>(rng: &mut R) -> (LinSystem, BTreeMap<String, Rational>) {
    let vars = rng.gen_range(1..=5);
    let point: BTreeMap<String, Rational> = (0..vars)
        .map(|k| (var(k), Rational::new(rng.gen_range(-30..=30), rng.gen_range(1..=4)).unwrap()))
        .collect();
    let mut sys = LinSystem::new();
    for _ in 0..rng.gen_range(1..=10) {
        let mut coeffs: Vec<(String, Rational)> = Vec::new();
        for k in 0..vars {
            if rng.gen_bool(0.7) {
                coeffs.push((var(k), Rational::from(rng.gen_range(-5..=5))));
            }
        }
        let probe = LinConstraint::ge(coeffs.clone(), Rational::zero());
        let value = probe.lhs_value(&point);
        let c = match rng.gen_range(0..4) {
            0 => LinConstraint::eq(coeffs, value),
            1 => LinConstraint::gt(coeffs, value - Rational::new(rng.gen_range(1..=6), 2).unwrap()),
            _ => LinConstraint::ge(coeffs, value - Rational::from(rng.gen_range(0..=3))),
        };
        sys.push(c);
    }
    (sys, point)
}

/// A random system over at most three variables with small integer data.
pub fn small_system<R: Rng>(rng: &mut R) -> LinSystem {
    let vars = rng.gen_range(1..=3);
    let mut sys = LinSystem::new();
    for _ in 0..rng.gen_range(1..=6) {
        let coeffs: Vec<(String, Rational)> = (0..vars).map(|k| (var(k), Rational::from(rng.gen_range(-3..=3)))).collect();
        let relation = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Gt,
            _ => Relation::Ge,
        };
        sys.push(LinConstraint::new(coeffs, relation, Rational::from(rng.gen_range(-5..=5))));
    }
    sys
}

/// Searches the quarter-step grid on `[-10, 10]` in every variable for a
/// point satisfying `sys`, whose coefficients and bounds must be integers.
pub fn grid_point(sys: &LinSystem) -> Option<BTreeMap<String, Rational>> {
    let names: Vec<String> = sys.variables().into_iter().collect();
    assert!(names.len() <= 3, "grid search is for small systems");
    let int = |r: &Rational| r.to_i64().expect("integer data");
    // Scaled by four so that grid points are integers.
    let rows: Vec<(Vec<i64>, Relation, i64)> = sys
        .constraints()
        .iter()
        .map(|c| {
            let a = names.iter().map(|n| c.coefficients().get(n).map_or(0, int)).collect();
            (a, c.relation(), 4 * int(c.bound()))
        })
        .collect();
    let mut x = vec![-40i64; names.len()];
    loop {
        let ok = rows.iter().all(|(a, rel, b)| {
            let lhs: i64 = a.iter().zip(&x).map(|(a, x)| a * x).sum();
            match rel {
                Relation::Ge => lhs >= *b,
                Relation::Gt => lhs > *b,
                Relation::Eq => lhs == *b,
            }
        });
        if ok {
            return Some(names.iter().zip(&x).map(|(n, &v)| (n.clone(), Rational::new(v, 4).unwrap())).collect());
        }
        let mut k = 0;
        loop {
            if k == x.len() {
                return None;
            }
            x[k] += 1;
            if x[k] <= 40 {
                break;
            }
            x[k] = -40;
            k += 1;
        }
    }
}

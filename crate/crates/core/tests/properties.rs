use proptest::prelude::*;

use fracbvp::benchmark;
use fracbvp::certify::{contraction_constant, theta};
use fracbvp::expr::{parse, BinOp, Expr, Func, Var};
use fracbvp::fracops::{frac_integral_grid, frac_integral_monomial, gamma, Grid, GridFunction};
use fracbvp::greens::{gstar, ProblemParams, WeightTables};
use fracbvp::solver::{linear_solve_with, picard_solve, residual, ProblemSpec};

fn params() -> impl Strategy<Value = ProblemParams> {
    (1.001f64..1.999, 0.01f64..0.99, 0.01f64..0.99).prop_map(|(a, b, x)| ProblemParams::new(a, b, x).unwrap())
}

fn samples(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, n)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..1000, 0u32..4).prop_map(|(m, e)| Expr::Num(m as f64 / 10f64.powi(e as i32))),
        Just(Expr::Pi),
        Just(Expr::Var(Var::T)),
        Just(Expr::Var(Var::U)),
        Just(Expr::Var(Var::V)),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        let func = prop_oneof![
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Exp),
            Just(Func::Ln),
            Just(Func::Sqrt),
            Just(Func::Abs)
        ];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (func, inner.clone()).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
            (op, inner.clone(), inner).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frac_integral_is_linear(
        alpha in 0.1f64..2.0,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        f in samples(65),
        g in samples(65),
        i in 0usize..65,
    ) {
        let grid = Grid::new(65).unwrap();
        let combo: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
        let fg = GridFunction::new(grid, f).unwrap();
        let gg = GridFunction::new(grid, g).unwrap();
        let lhs = frac_integral_grid(alpha, &GridFunction::new(grid, combo).unwrap(), i).unwrap();
        let rhs = a * frac_integral_grid(alpha, &fg, i).unwrap() + b * frac_integral_grid(alpha, &gg, i).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn frac_integral_exact_on_lines(alpha in 0.1f64..2.0, c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, i in 0usize..129) {
        let grid = Grid::new(129).unwrap();
        let f = GridFunction::from_fn(grid, |t| c0 + c1 * t).unwrap();
        let t = grid.node(i);
        let exact = c0 * frac_integral_monomial(alpha, 0.0, t).unwrap() + c1 * frac_integral_monomial(alpha, 1.0, t).unwrap();
        prop_assert!((frac_integral_grid(alpha, &f, i).unwrap() - exact).abs() <= 1e-12);
    }

    #[test]
    fn linear_solve_superposes(p in params(), a in -2.0f64..2.0, b in -2.0f64..2.0, y1 in samples(65), y2 in samples(65)) {
        let grid = Grid::new(65).unwrap();
        let tables = WeightTables::new(&p, grid);
        let combo: Vec<f64> = y1.iter().zip(&y2).map(|(x, y)| a * x + b * y).collect();
        let s1 = linear_solve_with(&tables, &GridFunction::new(grid, y1).unwrap()).unwrap();
        let s2 = linear_solve_with(&tables, &GridFunction::new(grid, y2).unwrap()).unwrap();
        let s = linear_solve_with(&tables, &GridFunction::new(grid, combo).unwrap()).unwrap();
        for i in 0..65 {
            let u = a * s1.u.values()[i] + b * s2.u.values()[i];
            let v = a * s1.v.values()[i] + b * s2.v.values()[i];
            prop_assert!((s.u.values()[i] - u).abs() <= 1e-12 * (1.0 + u.abs()));
            prop_assert!((s.v.values()[i] - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn boundary_conditions_hold(p in params(), coeffs in prop::collection::vec(-5.0f64..5.0, 1..=4)) {
        let grid = Grid::new(129).unwrap();
        let y = GridFunction::from_fn(grid, |t| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)).unwrap();
        let pair = linear_solve_with(&WeightTables::new(&p, grid), &y).unwrap();
        let u = pair.u.values();
        prop_assert!((u[0] - p.xi() * u[128]).abs() <= 1e-8);
        prop_assert_eq!(pair.v.values()[0], 0.0);
        // D^beta u(t) = I^(alpha-beta) y(t) + C1 t^(1-beta) / Gamma(2-beta)
        let g2b = gamma(2.0 - p.beta()).unwrap();
        let c1 = -g2b * frac_integral_grid(p.alpha() - p.beta(), &y, 128).unwrap();
        let dbu = |i: usize| {
            frac_integral_grid(p.alpha() - p.beta(), &y, i).unwrap() + c1 * grid.node(i).powf(1.0 - p.beta()) / g2b
        };
        prop_assert!((dbu(0) - p.xi() * dbu(128)).abs() <= 1e-6);
    }

    #[test]
    fn print_parse_round_trip(e in tree()) {
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &e);
        prop_assert_eq!(parse(&reparsed.to_string()).unwrap(), reparsed);
    }

    #[test]
    fn contraction_constant_is_monotone(p in params(), k in 0.0f64..5.0, dk in 0.0f64..1.0, g in 0.0f64..5.0, dg in 0.0f64..1.0) {
        let base = contraction_constant(&p, k, g).unwrap();
        prop_assert!(contraction_constant(&p, k + dk, g).unwrap() >= base);
        prop_assert!(contraction_constant(&p, k, g + dg).unwrap() >= base);
        prop_assert!(theta(&p) > 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gstar_non_negative(p in params()) {
        prop_assert!(gstar(&p, 257, 17).unwrap() >= 0.0);
    }
}

#[test]
fn gstar_refinement_stable() {
    for (a, b, xi) in [(1.5, 0.5, 0.5), (1.9, 0.3, 0.2), (1.6, 0.9, 0.7), (2.0, 0.5, 0.5)] {
        let p = ProblemParams::new(a, b, xi).unwrap();
        let coarse = gstar(&p, 2049, 65).unwrap();
        let fine = gstar(&p, 4097, 65).unwrap();
        assert!((coarse - fine).abs() < 1e-3, "{a},{b},{xi}: {coarse} vs {fine}");
    }
}

/// `u` for `y = t^2` on the benchmark parameters.
fn quadratic_forcing_solution(t: f64) -> f64 {
    let (a, b, xi) = (1.5, 0.5, 0.5);
    let c1 = -gamma(2.0 - b).unwrap() * frac_integral_monomial(a - b, 2.0, 1.0).unwrap();
    let c0 = xi / (1.0 - xi) * (frac_integral_monomial(a, 2.0, 1.0).unwrap() + c1);
    frac_integral_monomial(a, 2.0, t).unwrap() + c0 + c1 * t
}

#[test]
fn solver_converges_at_first_order_or_better() {
    let spec = ProblemSpec::parse(benchmark::params(), "t^2").unwrap();
    let mut errors = Vec::new();
    for n in [129, 257, 513, 1025] {
        let (pair, _) = picard_solve(&spec, n, 1e-10, 10).unwrap();
        let err = pair
            .grid()
            .nodes()
            .zip(pair.u.values())
            .map(|(t, u)| (u - quadratic_forcing_solution(t)).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    for w in errors.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.0, "{errors:?}");
    }
    assert!(errors[3] <= 1e-4);
}

#[test]
fn v_consistency_halves_under_refinement() {
    let spec = ProblemSpec::parse(benchmark::params(), "1").unwrap();
    let defects: Vec<f64> = [129, 257, 513, 1025]
        .into_iter()
        .map(|n| {
            let (pair, _) = picard_solve(&spec, n, 1e-10, 10).unwrap();
            residual(&spec, &pair).unwrap().consistency
        })
        .collect();
    for w in defects.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 2.0).abs() <= 0.6, "{defects:?}");
    }
}

#[test]
fn contraction_tail_is_non_increasing() {
    let (_, report) = picard_solve(&benchmark::spec(), 257, 1e-12, 100).unwrap();
    let tail = &report.diffs[report.diffs.len() / 2..];
    assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{:?}", report.diffs);
}

#[test]
fn converged_pair_is_a_fixed_point() {
    use fracbvp::solver::apply_t;
    let spec = benchmark::spec();
    let tol = 1e-10;
    let (pair, _) = picard_solve(&spec, 129, tol, 100).unwrap();
    let tables = WeightTables::new(&spec.params, pair.grid());
    assert!(apply_t(&spec, &pair, &tables).unwrap().distance(&pair) <= 2.0 * tol);
}

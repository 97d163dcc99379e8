//! Boundary forms are encoded as complex contour sums; here each real and
//! imaginary coefficient is compared with its trigonometric table, written
//! out independently below.

use loopbound::dhsys::{c2_boundary_forms, on_boundary_forms, EquationSystem, LinearForm};
use loopbound::params::{C2Params, OnParams};
use loopbound::weights::{c2_boundary, Branch, Symbol};

use Symbol::{Beta1, Beta2, Beta3, Beta4};

fn form<'a>(sys: &'a EquationSystem, name: &str) -> &'a LinearForm {
    sys.forms
        .iter()
        .find(|f| f.name == name)
        .unwrap_or_else(|| panic!("no form {name}"))
}

fn assert_row(sys: &EquationSystem, name: &str, syms: &[Symbol], expected: &[f64]) {
    let f = form(sys, name);
    for (sym, want) in syms.iter().zip(expected) {
        let got = f.coefficient(*sym, &sys.couplings);
        assert!(
            got.im.abs() < 1e-15,
            "{name}/{sym}: complex coefficient {got}"
        );
        assert!(
            (got.re - want).abs() < 1e-13,
            "{name}/{sym}: {} vs {want}",
            got.re
        );
    }
}

fn on_rows(p: &OnParams) -> [(&'static str, [f64; 3]); 6] {
    let (l, l1, x, rho) = (p.lambda, p.lambda1, p.x, p.rho);
    let a = x - 2.5 * l - 2.0 * l1;
    let b = x + 2.5 * l + 2.0 * l1;
    let c = x - 5.5 * l - 2.0 * l1;
    let d = x + 5.5 * l + 2.0 * l1;
    [
        (
            "R1",
            [(x - 1.5 * l).sin(), (x + 1.5 * l).sin(), rho * a.sin()],
        ),
        ("R2", [rho * b.sin(), rho * a.sin(), rho * p.n2 * a.sin()]),
        ("R3", [rho * c.sin(), rho * d.sin(), rho * p.n3 * a.sin()]),
        (
            "I1",
            [-(x - 1.5 * l).cos(), (x + 1.5 * l).cos(), rho * a.cos()],
        ),
        ("I2", [-rho * b.cos(), rho * a.cos(), rho * p.n2 * a.cos()]),
        ("I3", [-rho * c.cos(), rho * d.cos(), rho * p.n3 * a.cos()]),
    ]
}

#[test]
fn on_forms_match_trig_tables() {
    for (l, l1, x, n2) in [
        (0.3, 0.2, 0.4, 1.0),
        (0.2, 0.1, 0.7, 2.5),
        (0.45, 0.2, 0.15, -0.6),
    ] {
        let p = OnParams::new(l, l1, x, n2).unwrap();
        let sys = on_boundary_forms(&p);
        for (name, row) in on_rows(&p) {
            assert_row(&sys, name, &[Beta1, Beta2, Beta3], &row);
        }
    }
}

/// Real and imaginary rows of the C₂⁽¹⁾ boundary, with the fourth pair
/// carrying x − 8λ − 4λ₁ on β₃ (the mirror of the β₄ entry of the fifth).
fn c2_rows(p: &C2Params, beta3_arg4: f64) -> [(&'static str, [f64; 4]); 10] {
    let (x, rho, n2, n3) = (p.x, p.rho, p.n2, p.n3);
    let a = x - 4.0 * p.lambda - 2.0 * p.lambda1;
    let b = x + 4.0 * p.lambda + 2.0 * p.lambda1;
    let e = x - 8.0 * p.lambda - 4.0 * p.lambda1;
    let r2 = rho * rho;
    [
        ("R1", [-x.cos(), x.cos(), -rho * a.cos(), rho * a.cos()]),
        (
            "R2",
            [
                -rho * a.cos(),
                rho * b.cos(),
                -n2 * rho * a.cos(),
                r2 * x.cos(),
            ],
        ),
        (
            "R3",
            [
                rho * b.cos(),
                -rho * a.cos(),
                r2 * x.cos(),
                -n2 * rho * a.cos(),
            ],
        ),
        (
            "R4",
            [
                -rho * a.cos(),
                rho * b.cos(),
                -r2 * beta3_arg4.cos(),
                rho * n3 * a.cos(),
            ],
        ),
        (
            "R5",
            [
                rho * b.cos(),
                -rho * a.cos(),
                n3 * rho * a.cos(),
                -r2 * e.cos(),
            ],
        ),
        ("I1", [x.sin(), x.sin(), rho * a.sin(), rho * a.sin()]),
        (
            "I2",
            [
                rho * a.sin(),
                rho * b.sin(),
                n2 * rho * a.sin(),
                r2 * x.sin(),
            ],
        ),
        (
            "I3",
            [
                rho * b.sin(),
                rho * a.sin(),
                r2 * x.sin(),
                n2 * rho * a.sin(),
            ],
        ),
        (
            "I4",
            [
                rho * a.sin(),
                rho * b.sin(),
                r2 * beta3_arg4.sin(),
                rho * n3 * a.sin(),
            ],
        ),
        (
            "I5",
            [
                rho * b.sin(),
                rho * a.sin(),
                n3 * rho * a.sin(),
                r2 * e.sin(),
            ],
        ),
    ]
}

#[test]
fn c2_forms_match_trig_tables() {
    for (l, l1, x, n1) in [
        (0.25, 0.15, 0.5, 1.0),
        (0.3, 0.1, 0.7, 2.0),
        (0.45, 0.15, 0.15, -0.4),
    ] {
        let p = C2Params::new(l, l1, x, n1).unwrap();
        let sys = c2_boundary_forms(&p);
        let arg = x - 8.0 * l - 4.0 * l1;
        for (name, row) in c2_rows(&p, arg) {
            assert_row(&sys, name, &[Beta1, Beta2, Beta3, Beta4], &row);
        }
    }
}

/// With x − 4λ − 4λ₁ on β₃ in the fourth pair, the boundary solution no
/// longer annihilates it, which pins down the argument used above.
#[test]
fn c2_fourth_pair_argument_is_forced() {
    let p = C2Params::new(0.25, 0.15, 0.5, 1.0).unwrap();
    let alt = p.x - 4.0 * p.lambda - 4.0 * p.lambda1;
    let rows = c2_rows(&p, alt);
    for br in Branch::BOTH {
        let w = c2_boundary(&p, br).values();
        let name = if br == Branch::Real { "R4" } else { "I4" };
        let row = rows.iter().find(|(n, _)| *n == name).unwrap().1;
        let value: f64 = row.iter().zip(&w).map(|(c, b)| c * b).sum();
        let scale: f64 = row.iter().zip(&w).map(|(c, b)| (c * b).abs()).sum();
        assert!(value.abs() / scale > 1e-3, "{name}: {value}");
    }
}

#[test]
fn c2_boundary_weights_solve_the_tables() {
    let p = C2Params::new(0.25, 0.15, 0.5, 1.0).unwrap();
    let rows = c2_rows(&p, p.x - 8.0 * p.lambda - 4.0 * p.lambda1);
    for br in Branch::BOTH {
        let w = c2_boundary(&p, br).values();
        let prefix = if br == Branch::Real { 'R' } else { 'I' };
        for (name, row) in rows.iter().filter(|(n, _)| n.starts_with(prefix)) {
            let v: f64 = row.iter().zip(&w).map(|(c, b)| c * b).sum();
            assert!(v.abs() < 1e-12, "{name}: {v}");
        }
    }
}

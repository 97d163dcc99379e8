//! Grid sweeps producing report records.

use crate::dhsys::{
    c2_boundary_system, c2_bulk_systems, c2_diagonal_system, n3_condition, nullspace,
    on_boundary_system, on_bulk_blob_systems, on_bulk_system_at, on_diagonal_system,
    projective_deviation, solve_c2_boundary, solve_c2_diagonal, solve_on_boundary, solve_on_bulk,
    solve_on_diagonal,
};
use crate::params::{C2Params, GenOnParams, OnParams, DENOM_TOL};
use crate::reflect::{
    c2_slot_weights, gen_slot_weights, on_slot_weights, Catalog, Fugacities, ReflectionSystem,
    SlotWeights,
};
use crate::weights::{
    c2_boundary, c2_bulk, on_blobbed, on_boundary, on_boundary_diagonal, on_bulk_at,
    on_generalized_boundary, Branch, WeightSet,
};

use super::config::{Check, Model, SweepConfig, Tolerances};
use super::report::{Metric, Record};
use super::CliError;

/// Offset of the spin used to show the nullspace closes off criticality.
pub const SPIN_OFFSET: f64 = 0.01;
/// Finite k standing in for the k → ∞ limit.
pub const LARGE_K: f64 = 1e6;

struct Sweep<'a> {
    cfg: &'a SweepConfig,
    tol: &'a Tolerances,
    branches: Vec<Branch>,
    out: Vec<Record>,
}

fn pt2(lambda: f64, x: f64) -> [(&'static str, f64); 2] {
    [("lambda", lambda), ("x", x)]
}

fn pt3(lambda: f64, lambda1: f64, x: f64) -> [(&'static str, f64); 3] {
    [("lambda", lambda), ("lambda1", lambda1), ("x", x)]
}

fn max_dev(a: &WeightSet, b: &WeightSet) -> f64 {
    projective_deviation(&a.values(), &b.values()).unwrap_or(f64::INFINITY)
}

impl<'a> Sweep<'a> {
    fn push(&mut self, r: Record) {
        self.out.push(r);
    }

    fn perturb(&self, mut w: WeightSet) -> WeightSet {
        if let Some(p) = &self.cfg.perturbation {
            w.perturb(p.symbol, p.delta);
        }
        w
    }

    fn perturb_slots(&self, w: SlotWeights) -> SlotWeights {
        SlotWeights {
            boundary_x: self.perturb(w.boundary_x),
            boundary_y: self.perturb(w.boundary_y),
            bulk_sum: self.perturb(w.bulk_sum),
            bulk_diff: self.perturb(w.bulk_diff),
        }
    }

    fn grid2(&self) -> Vec<(f64, f64)> {
        let g = &self.cfg.grids;
        g.lambda
            .iter()
            .flat_map(|&l| g.x.iter().map(move |&x| (l, x)))
            .collect()
    }

    fn grid3(&self) -> Vec<(f64, f64, f64)> {
        let g = &self.cfg.grids;
        g.lambda
            .iter()
            .flat_map(|&l| {
                g.lambda1
                    .iter()
                    .flat_map(move |&l1| g.x.iter().map(move |&x| (l, l1, x)))
            })
            .collect()
    }

    /// O(n) points; singular ones become skipped records under `check`.
    fn on_points(&mut self, check: &str) -> Vec<OnParams> {
        let mut ok = Vec::new();
        for (l, l1, x) in self.grid3() {
            match OnParams::new(l, l1, x, self.cfg.scale) {
                Ok(p) => ok.push(p),
                Err(e) => self
                    .push(Record::new(check, "point", &pt3(l, l1, x), None).skipped(e.to_string())),
            }
        }
        ok
    }

    fn c2_points(&mut self, check: &str) -> Vec<C2Params> {
        let mut ok = Vec::new();
        for (l, l1, x) in self.grid3() {
            match C2Params::new(l, l1, x, self.cfg.scale) {
                Ok(p) => ok.push(p),
                Err(e) => self
                    .push(Record::new(check, "point", &pt3(l, l1, x), None).skipped(e.to_string())),
            }
        }
        ok
    }

    fn dh_bulk(&mut self, model: Model) {
        let c = Check::DhBulk.name();
        let rt = self.tol.residual_tol;
        match model {
            Model::On | Model::GenOn => {
                for (l, x) in self.grid2() {
                    let s = 3.0 * l / std::f64::consts::PI + 1.0;
                    let w = self.perturb(on_bulk_at(l, x));
                    let r = on_bulk_system_at(l, x, s).max_residual(&w);
                    self.push(residual_record(c, "bulk", &pt2(l, x), None, r, rt));
                }
                if model == Model::GenOn {
                    return;
                }
                for p in self.on_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    let w = self.perturb(on_bulk_at(p.lambda, p.x));
                    let (a, b) = on_bulk_blob_systems(&p);
                    self.push(residual_record(
                        c,
                        "blob-first",
                        &pt,
                        None,
                        a.max_residual(&w),
                        rt,
                    ));
                    self.push(residual_record(
                        c,
                        "blob-second",
                        &pt,
                        None,
                        b.max_residual(&w),
                        rt,
                    ));
                    let it = self.tol.identity_tol;
                    let cond = n3_condition(&p).norm();
                    self.push(Record::new(c, "n3-condition", &pt, None).bounded(
                        Metric::Residual,
                        cond,
                        it,
                    ));
                    let gap = p.n3 * p.n3 - (p.n1 * p.n1 + p.n2 * p.n2 - p.n * p.n1 * p.n2);
                    self.push(Record::new(c, "fugacity-identity", &pt, None).bounded(
                        Metric::Residual,
                        gap.abs(),
                        it,
                    ));
                }
            }
            Model::C2 => {
                for p in self.c2_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    let w = self.perturb(c2_bulk(&p));
                    let r = c2_bulk_systems(&p).max_residual(&w);
                    self.push(residual_record(c, "bulk", &pt, None, r, rt));
                }
            }
        }
    }

    fn dh_boundary(&mut self, model: Model) {
        let c = Check::DhBoundary.name();
        let rt = self.tol.residual_tol;
        match model {
            Model::On => {
                for p in self.on_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    for br in self.branches.clone() {
                        let b = Some(br.name());
                        let w = self.perturb(on_boundary(&p, br));
                        let r = on_boundary_system(&p, br).max_residual(&w);
                        self.push(residual_record(c, "boundary", &pt, b, r, rt));
                        let d = self.perturb(on_boundary_diagonal(p.lambda, p.x, br));
                        let r = on_diagonal_system(&p, br).max_residual(&d);
                        self.push(residual_record(c, "diagonal", &pt, b, r, rt));
                        let dev = blobbed_gap(p.lambda, p.lambda1, p.x, br);
                        self.push(Record::new(c, "blobbed", &pt, b).bounded(
                            Metric::Deviation,
                            dev,
                            self.tol.identity_tol,
                        ));
                    }
                }
            }
            Model::C2 => {
                for p in self.c2_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    for br in self.branches.clone() {
                        let b = Some(br.name());
                        let w = self.perturb(c2_boundary(&p, br));
                        let r = c2_boundary_system(&p, br).max_residual(&w);
                        self.push(residual_record(c, "boundary", &pt, b, r, rt));
                        let d = WeightSet::from_values(
                            crate::weights::WeightModel::C2Boundary,
                            Some(br),
                            &[crate::weights::Symbol::Beta1, crate::weights::Symbol::Beta2],
                            &[1.0, br.sign()],
                        )
                        .expect("two-symbol C2 boundary");
                        let r = c2_diagonal_system(&p, br).max_residual(&self.perturb(d));
                        self.push(residual_record(c, "diagonal", &pt, b, r, rt));
                    }
                }
            }
            Model::GenOn => self.push(
                Record::new(c, "boundary", &[], None)
                    .skipped("the generalized model is checked through the reflection equation"),
            ),
        }
    }

    fn solve(&mut self, model: Model) {
        let c = Check::Solve.name();
        let pt_tol = self.tol.projective_tol;
        match model {
            Model::On => {
                let x0 = self.cfg.grids.x[0];
                for &l in &self.cfg.grids.lambda.clone() {
                    let s = 3.0 * l / std::f64::consts::PI + 1.0;
                    for (item, ds, expected) in [
                        ("bulk-rank(s)", 0.0, 5),
                        ("bulk-rank(s+0.01)", SPIN_OFFSET, 6),
                        ("bulk-rank(s-0.01)", -SPIN_OFFSET, 6),
                    ] {
                        let m = on_bulk_system_at(l, x0, s + ds).real_matrix();
                        let rec = Record::new(c, item, &pt2(l, x0), None);
                        self.push(match nullspace(&m, self.tol.rank_tol) {
                            Ok(ns) => rec.rank(ns.rank, expected),
                            Err(e) => rec.failed(e.to_string()),
                        });
                    }
                }
                for (l, x) in self.grid2() {
                    let rec = Record::new(c, "bulk", &pt2(l, x), None);
                    self.push(match solve_on_bulk(l, x) {
                        Ok(w) => rec
                            .bounded(Metric::Deviation, max_dev(&w, &on_bulk_at(l, x)), pt_tol)
                            .with_weights(&w),
                        Err(e) => rec.failed(e.to_string()),
                    });
                }
                for p in self.on_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    for br in self.branches.clone() {
                        let b = Some(br.name());
                        let rec = Record::new(c, "boundary", &pt, b);
                        self.push(match solve_on_boundary(&p, br) {
                            Ok(w) => rec
                                .bounded(
                                    Metric::Deviation,
                                    max_dev(&w, &on_boundary(&p, br)),
                                    pt_tol,
                                )
                                .with_weights(&w),
                            Err(e) => rec.failed(e.to_string()),
                        });
                        let rec = Record::new(c, "boundary-rank", &pt, b);
                        self.push(match on_boundary_system(&p, br).rank(self.tol.rank_tol) {
                            Ok(r) => rec.rank(r, 2),
                            Err(e) => rec.failed(e.to_string()),
                        });
                        let rec = Record::new(c, "diagonal", &pt, b);
                        let closed = on_boundary_diagonal(p.lambda, p.x, br);
                        self.push(match solve_on_diagonal(&p, br) {
                            Ok(w) => rec
                                .bounded(Metric::Deviation, max_dev(&w, &closed), pt_tol)
                                .with_weights(&w),
                            Err(e) => rec.failed(e.to_string()),
                        });
                    }
                }
            }
            Model::C2 => {
                for p in self.c2_points(c) {
                    let pt = pt3(p.lambda, p.lambda1, p.x);
                    for br in self.branches.clone() {
                        let b = Some(br.name());
                        let rec = Record::new(c, "boundary", &pt, b);
                        self.push(match solve_c2_boundary(&p, br) {
                            Ok(w) => rec
                                .bounded(
                                    Metric::Deviation,
                                    max_dev(&w, &c2_boundary(&p, br)),
                                    pt_tol,
                                )
                                .with_weights(&w),
                            Err(e) => rec.failed(e.to_string()),
                        });
                        let rec = Record::new(c, "boundary-rank", &pt, b);
                        self.push(match c2_boundary_system(&p, br).rank(self.tol.rank_tol) {
                            Ok(r) => rec.rank(r, 3),
                            Err(e) => rec.failed(e.to_string()),
                        });
                        let rec = Record::new(c, "diagonal", &pt, b);
                        self.push(match solve_c2_diagonal(&p, br) {
                            Ok(w) => {
                                let ratio =
                                    w.get(crate::weights::Symbol::Beta2).unwrap_or(f64::NAN);
                                rec.bounded(Metric::Deviation, (ratio - br.sign()).abs(), pt_tol)
                                    .with_weights(&w)
                            }
                            Err(e) => rec.failed(e.to_string()),
                        });
                    }
                }
            }
            Model::GenOn => self.k_zero(c),
        }
    }

    /// k = 0 must reproduce the diagonal real-flux solution exactly.
    fn k_zero(&mut self, check: &str) {
        if !self.cfg.grids.k.contains(&0.0) && check == Check::Solve.name() {
            self.push(Record::new(check, "k-zero", &[], None).skipped("k grid does not contain 0"));
            return;
        }
        for (l, x) in self.grid2() {
            let pt = [("lambda", l), ("x", x), ("k", 0.0)];
            let rec = Record::new(check, "k-zero", &pt, None);
            self.push(match GenOnParams::new(l, x, 0.0, self.cfg.scale) {
                Ok(g) => {
                    let w = on_generalized_boundary(&g);
                    rec.bounded(
                        Metric::Deviation,
                        k_zero_gap(&w, l, x),
                        self.tol.identity_tol,
                    )
                    .with_weights(&w)
                }
                Err(e) => rec.skipped(e.to_string()),
            });
        }
    }

    fn reflection(&mut self, model: Model) -> Result<(), CliError> {
        let c = Check::Reflection.name();
        let rt = self.tol.residual_tol;
        let catalog = match model {
            Model::On => Catalog::on(),
            Model::C2 => Catalog::c2(),
            Model::GenOn => Catalog::on_generalized(),
        };
        let sys = ReflectionSystem::new(catalog).map_err(|e| CliError::Internal(e.to_string()))?;
        let note = format!(
            "{} classes, {} not mirror-symmetric",
            sys.classes.len(),
            sys.nontrivial().count()
        );
        let ys = self.cfg.grids.y.clone();
        let eval = |this: &mut Self, rec: Record, w: SlotWeights, f: Fugacities| {
            let w = this.perturb_slots(w);
            let r = sys.max_residual(&w, &f).map_err(|e| e.to_string());
            this.push(residual_record_s(rec, r, rt).with_note(note.clone()));
        };
        match model {
            Model::On => {
                for p in self.on_points(c) {
                    for &y in &ys {
                        for br in self.branches.clone() {
                            let pt = [
                                ("lambda", p.lambda),
                                ("lambda1", p.lambda1),
                                ("x", p.x),
                                ("y", y),
                            ];
                            let rec = Record::new(c, "classes", &pt, Some(br.name()));
                            eval(self, rec, on_slot_weights(&p, y, br), (&p).into());
                        }
                    }
                }
            }
            Model::C2 => {
                for p in self.c2_points(c) {
                    for &y in &ys {
                        for br in self.branches.clone() {
                            let pt = [
                                ("lambda", p.lambda),
                                ("lambda1", p.lambda1),
                                ("x", p.x),
                                ("y", y),
                            ];
                            let rec = Record::new(c, "classes", &pt, Some(br.name()));
                            eval(self, rec, c2_slot_weights(&p, y, br), (&p).into());
                        }
                    }
                }
            }
            Model::GenOn => {
                let ks = self.cfg.grids.k.clone();
                for (l, x) in self.grid2() {
                    for &y in &ys {
                        for &k in &ks {
                            let pt = [("lambda", l), ("x", x), ("y", y), ("k", k)];
                            let rec = Record::new(c, "classes", &pt, None);
                            match GenOnParams::new(l, x, k, self.cfg.scale) {
                                Ok(g) => eval(self, rec, gen_slot_weights(&g, y), (&g).into()),
                                Err(e) => self.push(rec.skipped(e.to_string())),
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn limits(&mut self) {
        let c = Check::Limits.name();
        self.k_zero(c);
        for (l, x) in self.grid2() {
            let pt = [("lambda", l), ("x", x), ("k", LARGE_K)];
            let rec = Record::new(c, "large-k", &pt, None);
            self.push(match large_k_gap(l, x, self.cfg.scale) {
                Ok(dev) => rec.bounded(Metric::Deviation, dev, self.tol.limit_tol),
                Err(why) => rec.skipped(why),
            });
        }
    }
}

fn residual_record(
    check: &str,
    item: &str,
    pt: &[(&str, f64)],
    branch: Option<&str>,
    r: Result<f64, crate::dhsys::DhError>,
    tol: f64,
) -> Record {
    residual_record_s(
        Record::new(check, item, pt, branch),
        r.map_err(|e| e.to_string()),
        tol,
    )
}

fn residual_record_s(rec: Record, r: Result<f64, String>, tol: f64) -> Record {
    match r {
        Ok(v) => rec.bounded(Metric::Residual, v, tol),
        Err(e) => rec.failed(e),
    }
}

/// Largest entry of `β̂ − f·β` with `β` the boundary solution at n₂ = 1.
pub fn blobbed_gap(lambda: f64, lambda1: f64, x: f64, br: Branch) -> f64 {
    let Ok(p) = OnParams::new(lambda, lambda1, x, 1.0) else {
        return f64::INFINITY;
    };
    let hat = on_blobbed(lambda, lambda1, x, br);
    let full = on_boundary(&p, br);
    let f = -br.sign() * (4.0 * lambda + 4.0 * lambda1).sin() / (2.0 * (4.0 * lambda).sin());
    hat.values()
        .iter()
        .zip(full.values())
        .map(|(h, b)| (h - f * b).abs())
        .fold(0.0, f64::max)
}

/// Projective gap to the diagonal pair, together with |β₃| and |β₄|.
pub fn k_zero_gap(w: &WeightSet, lambda: f64, x: f64) -> f64 {
    use crate::weights::Symbol::*;
    let v = |s| w.get(s).unwrap_or(f64::NAN);
    let d = on_boundary_diagonal(lambda, x, Branch::Real);
    let pair = projective_deviation(&[v(Beta1), v(Beta2)], &d.values()).unwrap_or(f64::INFINITY);
    pair.max(v(Beta3).abs()).max(v(Beta4).abs())
}

/// Rescaled generalized weights at k = 10⁶ against the O(n) boundary with
/// n₁ = n₂ (reached at λ₁ = −λ/2), β₄ compared with zero.
pub fn large_k_gap(lambda: f64, x: f64, n1: f64) -> Result<f64, String> {
    large_k_gap_at(lambda, x, n1, LARGE_K)
}

pub fn large_k_gap_at(lambda: f64, x: f64, n1: f64, k: f64) -> Result<f64, String> {
    let d = (0.5 * lambda - x).sin();
    if d.abs() <= DENOM_TOL {
        return Err(format!("sin(λ/2 − x) = {d:e} vanishes"));
    }
    let g = GenOnParams::new(lambda, x, k, n1).map_err(|e| e.to_string())?;
    let scaled: Vec<f64> = on_generalized_boundary(&g)
        .values()
        .iter()
        .map(|b| -b / (k * k * d))
        .collect();
    let p = OnParams::new(lambda, -0.5 * lambda, x, n1).map_err(|e| e.to_string())?;
    let mut target = on_boundary(&p, Branch::Real).values();
    target.push(0.0);
    projective_deviation(&scaled, &target).map_err(|e| e.to_string())
}

/// Runs `checks` in canonical order; records follow check order, then grid order.
pub fn run(cfg: &SweepConfig, checks: &[Check]) -> Result<Vec<Record>, CliError> {
    let model = cfg.model();
    let mut checks = checks.to_vec();
    checks.sort();
    checks.dedup();
    let mut sweep = Sweep {
        cfg,
        tol: &cfg.tolerances,
        branches: cfg.branch.branches(),
        out: Vec::new(),
    };
    for ch in checks {
        match ch {
            Check::DhBulk => sweep.dh_bulk(model),
            Check::DhBoundary => sweep.dh_boundary(model),
            Check::Solve => sweep.solve(model),
            Check::Reflection => sweep.reflection(model)?,
            Check::Limits => {
                if model != Model::GenOn {
                    return Err(CliError::Config("limits require model gen-on".into()));
                }
                sweep.limits()
            }
        }
    }
    Ok(sweep.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_k_limit_and_its_correction() {
        let dev = large_k_gap(0.3, 0.4, 0.7).unwrap();
        assert!(dev < 1e-4, "{dev}");
        assert!(dev > 1e-9, "{dev}");
        // the gap shrinks like 1/k
        let dev10 = large_k_gap_at(0.3, 0.4, 0.7, 1e7).unwrap();
        assert!((dev / dev10 - 10.0).abs() < 0.1);
        assert!(large_k_gap(0.3, 0.15, 0.7).is_err());
    }

    #[test]
    fn k_zero_is_exact() {
        let g = GenOnParams::new(0.3, 0.4, 0.0, 0.7).unwrap();
        assert!(k_zero_gap(&on_generalized_boundary(&g), 0.3, 0.4) < 1e-15);
    }

    #[test]
    fn blobbed_gap_is_tiny() {
        for br in Branch::BOTH {
            assert!(blobbed_gap(0.3, 0.2, 0.4, br) < 1e-12);
        }
    }
}

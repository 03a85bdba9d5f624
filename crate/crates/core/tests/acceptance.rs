//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::process::ExitCode;

use vesselopt::commands::{cmd_netting, cmd_optimize, OptimizeOutcome};
use vesselopt::config::RunConfig;
use vesselopt::failure::{tsai_wu, Criterion, Strengths};
use vesselopt::materials::{chamis_complete, MaterialDb, PartialMaterial, Property};
use vesselopt::mechanics::{laminate_solve, solve_vessel, station_stack, Lamina, LoadCase, MembraneForces, Ply};
use vesselopt::optimize::{analyze, run_miga, DesignVector, Encoding, MigaConfig, VesselProblem};
use vesselopt::winding::{build_layup, dome_thickness, fiber_angle, thickness_cap_radius, DomeSide, LayerKind, WindingLayerSpec};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} criterion {id} ({name}): {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn run(cfg: &RunConfig) -> OptimizeOutcome {
    cmd_optimize(cfg, &MaterialDb::bundled(), None).expect("optimization runs")
}

fn netting(r: &mut Report) {
    let rows = cmd_netting(&RunConfig::default(), &MaterialDb::bundled()).unwrap();
    let targets = [("GF-PP", 0.98), ("CF-PA", 0.43), ("FF-PLA", 2.54)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, target) in targets {
        let row = rows.iter().find(|x| x.material == name).unwrap();
        let e = rel(row.thickness, target);
        pass &= e <= 0.01;
        parts.push(format!("{name} {:.4} vs {target} ({:.2}%)", row.thickness, 100.0 * e));
    }
    r.line(1, "netting oracle, 1%", pass, parts.join("; "));
}

fn tsai_wu_identities(r: &mut Report) {
    let db = MaterialDb::bundled();
    let mut worst: f64 = 0.0;
    let mut zero: f64 = 0.0;
    for card in &db.composites {
        let s = Strengths::from(card);
        for sigma in [[s.xt, 0.0, 0.0], [-s.xc, 0.0, 0.0], [0.0, s.yt, 0.0], [0.0, -s.yc, 0.0], [0.0, 0.0, s.s12]] {
            worst = worst.max((tsai_wu(sigma, &s) - 1.0).abs());
        }
        zero = zero.max(tsai_wu([0.0; 3], &s).abs());
    }
    r.line(
        2,
        "Tsai-Wu boundary identities",
        worst <= 1e-9 && zero == 0.0,
        format!("max |FI - 1| = {worst:.2e} over 5 states x {} cards; FI(0) = {zero}", db.composites.len()),
    );
}

fn chamis_anchor(r: &mut Report) {
    let db = MaterialDb::bundled();
    let card = chamis_complete(
        "GF-PP",
        db.fiber("E-glass").unwrap(),
        db.matrix("PP").unwrap(),
        0.45,
        &PartialMaterial::new(),
    )
    .unwrap();
    let e = rel(card.yt, 24.0);
    r.line(
        3,
        "Chamis Yt anchor, 10%",
        e <= 0.10 && card.provenance(Property::Yt) == vesselopt::materials::Provenance::Chamis,
        format!("derived GF-PP Yt = {:.3} MPa ({:.1}% from 24), provenance {:?}", card.yt, 100.0 * e, card.provenance(Property::Yt)),
    );
}

fn max_principal_vs_netting(r: &mut Report) {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["GF-PP", "CF-PA", "FF-PLA"] {
        let cfg = RunConfig {
            material: name.into(),
            criterion: Criterion::MaxPrincipal,
            ..RunConfig::default()
        };
        let out = run(&cfg);
        let best = &out.summary.best;
        let e = rel(best.th_c, out.summary.netting_thickness);
        pass &= best.feasible && e <= 0.15;
        parts.push(format!(
            "{name} Th_c {:.3} vs {:.3} ({:+.1}%, feasible {})",
            best.th_c,
            out.summary.netting_thickness,
            100.0 * (best.th_c / out.summary.netting_thickness - 1.0),
            best.feasible
        ));
    }
    r.line(4, "max-principal MIGA vs netting, 15%", pass, parts.join("; "));
}

fn tsai_wu_trend(r: &mut Report) -> OptimizeOutcome {
    let out = run(&RunConfig::default());
    let s = &out.summary;
    let detail = match &s.initial_feasible {
        Some(init) if s.best.feasible => {
            let drop = 1.0 - s.best.mass / init.mass;
            let pass = s.best.mass < init.mass && s.best.fi < 1.0 && drop >= 0.15;
            r.line(
                5,
                "Tsai-Wu trend, mass drop >= 15%",
                pass,
                format!("initial {:.2} kg -> final {:.2} kg ({:.1}% drop), final FI {:.3}", init.mass, s.best.mass, 100.0 * drop, s.best.fi),
            );
            return out;
        }
        Some(init) => format!("initial feasible {:.2} kg but final design infeasible (FI {:.3})", init.mass, s.best.fi),
        None => format!(
            "no feasible design among {} evaluations; lowest-violation design FI {:.3}, mass {:.2} kg, Th_c {:.2} mm (initial population best FI {:.3})",
            s.evaluations, s.best.fi, s.best.mass, s.best.th_c, s.initial.fi
        ),
    };
    r.line(5, "Tsai-Wu trend, mass drop >= 15%", false, detail);
    out
}

fn strength_sensitivity(r: &mut Report, base: &OptimizeOutcome) {
    let mut cfg = RunConfig::default();
    cfg.overrides.insert("yt".into(), 24.0);
    let high = run(&cfg);
    let (a, b) = (&base.summary.best, &high.summary.best);
    let drop = 1.0 - b.th_c / a.th_c;
    let pass = a.feasible && b.feasible && drop >= 0.05;
    r.line(
        6,
        "Yt 13.1 -> 24 thins the Tsai-Wu design by >= 5%",
        pass,
        format!(
            "Th_c {:.3} mm (feasible {}) -> {:.3} mm (feasible {}), change {:+.1}%",
            a.th_c,
            a.feasible,
            b.th_c,
            b.feasible,
            -100.0 * drop
        ),
    );
}

fn reference_design() -> DesignVector {
    DesignVector {
        r0_up: vec![20.0, 80.0, 160.0],
        r0_d: vec![125.0, 150.0, 200.0],
        th: vec![0.6, 0.4, 0.5, 0.3, 0.4, 0.2, 0.3],
    }
}

fn solver_properties(r: &mut Report) {
    let db = MaterialDb::bundled();
    let cfg = RunConfig::default();
    let ctx = cfg.context(&db).unwrap();
    let design = reference_design();
    let layers = design.layers(&ctx.layout, &ctx.winding, ctx.geometry.radius());
    let layup = build_layup(&ctx.geometry, &layers, &ctx.sections).unwrap();
    let lamina = Lamina::from(&ctx.material);
    let states = solve_vessel(&ctx.geometry, &layup, &lamina, ctx.liner.as_ref(), &ctx.load).unwrap();

    let mut recovery: f64 = 0.0;
    for (i, st) in states.iter().enumerate() {
        let stack = station_stack(&layup, i, &lamina, ctx.liner.as_ref());
        let mut n = [0.0; 3];
        for (ply, ps) in stack.iter().zip(&st.plies) {
            for k in 0..3 {
                n[k] += ps.lab[k] * ply.thickness;
            }
        }
        let scale = st.forces.n_phi.abs().max(st.forces.n_theta.abs());
        recovery = recovery.max((n[0] - st.forces.n_phi).abs() / scale);
        recovery = recovery.max((n[1] - st.forces.n_theta).abs() / scale);
        recovery = recovery.max(n[2].abs() / scale);
    }

    let balanced = [30.0, -30.0, 90.0]
        .map(|angle| Ply { lamina, angle, thickness: 0.5 })
        .to_vec();
    let f = MembraneForces { pressure: 2.0, n_phi: 250.0, n_theta: 500.0 };
    let shear = laminate_solve(&balanced, &f, 0).unwrap().strain[2].abs();

    let load1 = LoadCase::internal_only(1.0);
    let load2 = LoadCase::internal_only(2.0);
    let s1 = solve_vessel(&ctx.geometry, &layup, &lamina, ctx.liner.as_ref(), &load1).unwrap();
    let s2 = solve_vessel(&ctx.geometry, &layup, &lamina, ctx.liner.as_ref(), &load2).unwrap();
    let mut linearity: f64 = 0.0;
    for (a, b) in s1.iter().zip(&s2) {
        let scale = a.strain.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..3 {
            linearity = linearity.max((b.strain[k] - 2.0 * a.strain[k]).abs() / scale);
        }
    }

    let bounds = ctx.bounds().unwrap();
    let enc = Encoding::new(&bounds, 16).unwrap();
    let x = ctx.layout.encode(&design).unwrap();
    let y = enc.decode(&enc.encode(&x));
    let roundtrip = (0..x.len()).all(|i| (x[i] - y[i]).abs() <= enc.step(i));

    let problem = VesselProblem::new(ctx.clone()).unwrap();
    let miga = MigaConfig::default();
    let ra = run_miga(&problem, &miga).unwrap();
    let rb = run_miga(&problem, &miga).unwrap();
    let elitism = ra.island_best.iter().all(|row| row.windows(2).all(|w| w[1] <= w[0]));
    let deterministic = ra.history_hash() == rb.history_hash();

    let mut fine_cfg = cfg.clone();
    fine_cfg.geometry.dome_stations = 2 * cfg.geometry.dome_stations;
    fine_cfg.geometry.cylinder_stations = 2 * cfg.geometry.cylinder_stations;
    let coarse = analyze(&ctx, &design).unwrap();
    let fine = analyze(&fine_cfg.context(&db).unwrap(), &design).unwrap();
    let dm = rel(fine.mass, coarse.mass);
    let dfi = rel(fine.failure.worst, coarse.failure.worst);

    let pass = recovery <= 1e-6 && shear <= 1e-12 && linearity <= 1e-9 && roundtrip && elitism && deterministic && dm < 0.02 && dfi < 0.02;
    r.line(
        7,
        "solver property suite",
        pass,
        format!(
            "force recovery {recovery:.1e}; balanced shear strain {shear:.1e}; pressure linearity {linearity:.1e}; roundtrip {roundtrip}; elitism {elitism}; determinism {deterministic}; doubling stations: mass {:.3}%, worst FI {:.3}%",
            100.0 * dm,
            100.0 * dfi
        ),
    );
}

fn geometry_layup(r: &mut Report) {
    let layer = WindingLayerSpec::helical(250.0, 20.0, 125.0, 0.5, 10.0);
    let at_opening = fiber_angle(&layer, 20.0, DomeSide::Up).unwrap();
    let half = fiber_angle(&layer, 40.0, DomeSide::Up).unwrap();
    let equator = dome_thickness(&layer, 250.0, DomeSide::Down).unwrap();
    let cap_ok = thickness_cap_radius(&layer, DomeSide::Up) > 20.0;

    let db = MaterialDb::bundled();
    let cfg = RunConfig::default();
    let ctx = cfg.context(&db).unwrap();
    let design = reference_design();
    let layers = design.layers(&ctx.layout, &ctx.winding, ctx.geometry.radius());
    let layup = build_layup(&ctx.geometry, &layers, &ctx.sections).unwrap();
    let mut masked = true;
    let mut helical = 0;
    for (l, kind) in ctx.layout.layers.iter().enumerate() {
        if *kind != LayerKind::Helical {
            continue;
        }
        for (i, st) in ctx.geometry.stations.iter().enumerate() {
            let r0 = match st.region {
                vesselopt::winding::Region::DomeUp => design.r0_up[helical],
                vesselopt::winding::Region::DomeDown => design.r0_d[helical],
                vesselopt::winding::Region::Cylinder => continue,
            };
            let present = layup.layer_angle(i, l).is_some();
            if st.r < r0 - 1e-9 && present || st.r > r0 + 1e-9 && !present {
                masked = false;
            }
        }
        helical += 1;
    }
    let uncovered = layup.uncovered_stations();

    let pass = (at_opening - 90.0).abs() < 1e-12
        && (half - 30.0).abs() < 1e-9
        && (equator - 0.5).abs() < 1e-12
        && cap_ok
        && masked
        && uncovered.is_empty();
    r.line(
        8,
        "geometry/layup suite",
        pass,
        format!(
            "alpha(r0) = {at_opening}; alpha(2 r0) = {half:.9}; th(R) = {equator}; layer masking {masked}; uncovered stations {}",
            uncovered.len()
        ),
    );
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    netting(&mut r);
    tsai_wu_identities(&mut r);
    chamis_anchor(&mut r);
    max_principal_vs_netting(&mut r);
    let base = tsai_wu_trend(&mut r);
    strength_sensitivity(&mut r, &base);
    solver_properties(&mut r);
    geometry_layup(&mut r);
    println!("acceptance: {} of 8 criteria failed", r.failed);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

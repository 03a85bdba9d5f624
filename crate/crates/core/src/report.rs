//! Run artifacts: config snapshot, evaluation history, Pareto archive,
//! per-station exports and plot-ready tables.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::failure::Criterion;
use crate::optimize::{Analysis, EvaluationRecord, RunResult, StackLayout, VesselProblem};
use crate::winding::{LayerKind, LayupField, VesselGeometry};

pub const CONFIG_FILE: &str = "config.toml";
pub const HISTORY_FILE: &str = "history.csv";
pub const PARETO_FILE: &str = "pareto.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const LAYUP_FILE: &str = "best_layup.csv";
pub const STATIONS_FILE: &str = "best_stations.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const ANGLES_FILE: &str = "angle_distribution.csv";

fn num(v: f64) -> String {
    format!("{v}")
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_text(path, &(text + "\n"))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_config_snapshot(dir: &Path, cfg: &RunConfig) -> Result<PathBuf> {
    let path = dir.join(CONFIG_FILE);
    write_text(&path, &cfg.to_toml()?)?;
    Ok(path)
}

/// Design variables of a record in vector order.
fn design_values(layout: &StackLayout, r: &EvaluationRecord) -> Vec<f64> {
    let mut v = Vec::with_capacity(layout.n_vars());
    for i in 1..r.design.r0_up.len() {
        v.push(r.design.r0_up[i]);
        v.push(r.design.r0_d[i]);
    }
    v.extend(&r.design.th);
    v
}

/// One row per evaluation in run order.
pub fn write_history(path: &Path, layout: &StackLayout, result: &RunResult<EvaluationRecord>) -> Result<()> {
    let mut w = writer(path)?;
    let mut header: Vec<String> = [
        "k", "island", "generation", "mass_kg", "th_c_mm", "energy_mj", "energy_peak", "fi", "fi_tsai_wu",
        "fi_max_principal", "feasible", "fitness",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(layout.var_names());
    w.write_record(&header)?;
    for t in &result.history {
        let r = &t.scored.outcome;
        let mut row = vec![
            t.k.to_string(),
            t.island.map(|i| i.to_string()).unwrap_or_default(),
            t.generation.to_string(),
            num(r.mass),
            num(r.th_c),
            num(r.energy),
            num(r.energy_peak),
            num(r.fi),
            num(r.fi_tsai_wu),
            num(r.fi_max_principal),
            r.feasible.to_string(),
            num(r.fitness),
        ];
        row.extend(design_values(layout, r).into_iter().map(num));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Per evaluation: the evaluated point and the best-ranked point so far,
/// for thickness/mass/energy/opening convergence plots.
pub fn write_convergence(path: &Path, layout: &StackLayout, result: &RunResult<EvaluationRecord>) -> Result<()> {
    let mut w = writer(path)?;
    let openings: Vec<String> = layout.var_names().into_iter().filter(|n| n.starts_with("r0_")).collect();
    let mut header: Vec<String> = ["k", "mass_kg", "th_c_mm", "energy_peak", "fi", "best_mass_kg", "best_th_c_mm", "best_energy_peak", "best_fi", "best_feasible"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(openings.iter().map(|n| format!("best_{n}")));
    w.write_record(&header)?;
    let mut best = 0;
    for (i, t) in result.history.iter().enumerate() {
        if t.scored.rank_cmp(&result.history[best].scored).is_lt() {
            best = i;
        }
        let r = &t.scored.outcome;
        let b = &result.history[best].scored.outcome;
        let mut row = vec![
            t.k.to_string(),
            num(r.mass),
            num(r.th_c),
            num(r.energy_peak),
            num(r.fi),
            num(b.mass),
            num(b.th_c),
            num(b.energy_peak),
            num(b.fi),
            b.feasible.to_string(),
        ];
        row.extend(design_values(layout, b).into_iter().take(openings.len()).map(num));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_pareto(path: &Path, records: &[EvaluationRecord]) -> Result<()> {
    write_json(path, &VesselProblem::pareto_archive(records))
}

fn layer_label(layout: &StackLayout, layer: usize) -> String {
    match layout.layers[layer] {
        LayerKind::Helical => format!("L{}_helical", layer + 1),
        LayerKind::Hoop => format!("L{}_hoop", layer + 1),
    }
}

/// Per station: position and, per layer, the unsigned fiber angle and ply
/// thickness. Absent layers leave the angle empty and a zero thickness.
pub fn write_layup(path: &Path, layout: &StackLayout, analysis: &Analysis) -> Result<()> {
    let geom = &analysis.geometry;
    let mut w = writer(path)?;
    let mut header: Vec<String> = ["station", "region", "s", "z", "r", "total_thickness"].iter().map(|s| s.to_string()).collect();
    for l in 0..layout.layers.len() {
        let name = layer_label(layout, l);
        header.push(format!("{name}_angle"));
        header.push(format!("{name}_thickness"));
    }
    w.write_record(&header)?;
    for (i, st) in geom.stations.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            st.region.label().to_string(),
            num(st.s),
            num(st.z),
            num(st.r),
            num(analysis.layup.station_thickness(i)),
        ];
        for l in 0..layout.layers.len() {
            row.push(analysis.layup.layer_angle(i, l).map(num).unwrap_or_default());
            row.push(num(analysis.layup.layer_thickness(i, l)));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Per station: forces, strains, energy density and, per ply, material-axis
/// stresses and both failure indices.
pub fn write_stations(path: &Path, analysis: &Analysis) -> Result<()> {
    let geom = &analysis.geometry;
    let mut w = writer(path)?;
    let mut header: Vec<String> = [
        "station", "region", "s", "r", "pressure", "n_phi", "n_theta", "eps_x", "eps_y", "gamma_xy", "energy_density", "worst_fi",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for p in &analysis.layup.plies {
        let tag = match p.sign {
            1 => format!("L{}p", p.layer + 1),
            -1 => format!("L{}m", p.layer + 1),
            _ => format!("L{}", p.layer + 1),
        };
        for f in ["s1", "s2", "s6", "tsai_wu", "max_principal"] {
            header.push(format!("{tag}_{f}"));
        }
    }
    w.write_record(&header)?;
    let criterion = analysis.failure.criterion;
    for (i, (st, state)) in geom.stations.iter().zip(&analysis.states).enumerate() {
        let fields = &analysis.failure.fields[i];
        let worst = fields.iter().flatten().map(|f| f.get(criterion)).fold(f64::NAN, f64::max);
        let mut row = vec![
            i.to_string(),
            st.region.label().to_string(),
            num(st.s),
            num(st.r),
            num(state.forces.pressure),
            num(state.forces.n_phi),
            num(state.forces.n_theta),
            num(state.strain[0]),
            num(state.strain[1]),
            num(state.strain[2]),
            num(state.energy_density),
            if worst.is_nan() { String::new() } else { num(worst) },
        ];
        for (j, _) in analysis.layup.plies.iter().enumerate() {
            match &fields[j] {
                Some(f) => {
                    let s = state.plies[j].material;
                    row.extend([num(s[0]), num(s[1]), num(s[2]), num(f.get(Criterion::TsaiWu)), num(f.get(Criterion::MaxPrincipal))]);
                }
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Helical-layer fiber angles along the meridian for the initial and final
/// designs, both laid on the same stations.
pub fn write_angle_distribution(
    path: &Path,
    geom: &VesselGeometry,
    layout: &StackLayout,
    initial: &LayupField,
    last: &LayupField,
) -> Result<()> {
    let mut w = writer(path)?;
    let helical: Vec<usize> = (0..layout.layers.len()).filter(|&l| layout.layers[l] == LayerKind::Helical).collect();
    let mut header: Vec<String> = ["station", "region", "s", "r"].iter().map(|s| s.to_string()).collect();
    for tag in ["initial", "final"] {
        for &l in &helical {
            header.push(format!("{tag}_L{}_angle", l + 1));
        }
    }
    w.write_record(&header)?;
    for (i, st) in geom.stations.iter().enumerate() {
        let mut row = vec![i.to_string(), st.region.label().to_string(), num(st.s), num(st.r)];
        for a in [initial, last] {
            for &l in &helical {
                row.push(a.layer_angle(i, l).map(num).unwrap_or_default());
            }
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub material: String,
    pub criterion: Criterion,
    pub optimizer: String,
    pub seed: u64,
    pub evaluations: usize,
    pub history_hash: String,
    pub netting_thickness: f64,
    pub any_feasible: bool,
    /// Best-ranked design of the starting population (or start point).
    pub initial: EvaluationRecord,
    pub best: EvaluationRecord,
    /// Best-ranked feasible design of the starting population, if any.
    pub initial_feasible: Option<EvaluationRecord>,
}

pub fn write_summary(path: &Path, summary: &RunSummary) -> Result<()> {
    write_json(path, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::{analyze, DesignVector};

    #[test]
    fn layup_and_station_tables_have_one_row_per_station() {
        let cfg = RunConfig::default();
        let ctx = cfg.context(&crate::materials::MaterialDb::bundled()).unwrap();
        let layout = cfg.layout();
        let design = DesignVector {
            r0_up: vec![20.0, 60.0, 120.0],
            r0_d: vec![125.0, 140.0, 180.0],
            th: vec![0.5; 7],
        };
        let a = analyze(&ctx, &design).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let lp = dir.path().join(LAYUP_FILE);
        let sp = dir.path().join(STATIONS_FILE);
        write_layup(&lp, &layout, &a).unwrap();
        write_stations(&sp, &a).unwrap();
        assert!(a.geometry.len() > ctx.geometry.len());
        for p in [lp, sp] {
            let mut r = csv::Reader::from_path(&p).unwrap();
            assert_eq!(r.records().count(), a.geometry.len());
        }
    }
}

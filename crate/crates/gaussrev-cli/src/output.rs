//! Output writers: CSV tables with pinned schemas, JSON reports, the
//! reproducibility sidecar written next to every output, and standalone
//! plot scripts that consume the CSVs.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use gaussrev::trajectory::NoiseFloorReport;
use serde::Serialize;
use serde_json::json;

use crate::runners::{PhaseDiagramData, PhaseRow};

pub const PHASE_HEADER: [&str; 4] = ["nu", "r", "lambda_min", "repair_trace"];
pub const BOUNDARY_HEADER: [&str; 2] = ["r", "nu"];
pub const NOISE_FLOOR_HEADER: [&str; 4] = ["s", "neg2lnf_wc", "bound", "defect_flag"];

/// Companion path `<stem>_<suffix>.<ext>` next to `out`.
pub fn companion_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

pub fn write_phase_csv(path: &Path, data: &PhaseDiagramData) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PHASE_HEADER)?;
    for row in &data.rows {
        w.write_record(&[
            row.nu.to_string(),
            row.r.to_string(),
            row.lambda_min.to_string(),
            row.repair_trace.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_boundary_csv(path: &Path, data: &PhaseDiagramData) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(BOUNDARY_HEADER)?;
    for &(r, nu) in &data.boundary {
        w.write_record(&[r.to_string(), nu.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn phase_rows_json(rows: &[PhaseRow]) -> serde_json::Value {
    serde_json::to_value(rows).expect("phase rows serialize")
}

pub fn write_noise_floor_csv(path: &Path, report: &NoiseFloorReport) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(NOISE_FLOOR_HEADER)?;
    for row in &report.rows {
        w.write_record(&[
            row.s.to_string(),
            row.neg2lnf_wc.to_string(),
            row.bound.to_string(),
            row.defect_flag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-member detail behind each noise-floor row, including both worst-case
/// maximizers.
pub fn noise_floor_members_json(report: &NoiseFloorReport) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = report
        .rows
        .iter()
        .zip(&report.members)
        .map(|(row, members)| {
            json!({
                "s": row.s,
                "neg2lnf_wc": row.neg2lnf_wc,
                "bound": row.bound,
                "defect": row.defect_flag,
                "argmax_i_dec": row.argmax_i_dec,
                "argmax_infidelity": row.argmax_infidelity,
                "members": members.iter().map(|m| json!({
                    "index": m.index,
                    "nu": m.nu,
                    "r": m.r,
                    "i_dec": m.i_dec,
                    "neg2lnf": m.neg2lnf,
                    "nu_min_observed": m.nu_min_observed,
                    "defect": m.defect,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "rows": rows })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")
}

/// Reproducibility sidecar `<out>.meta.json`: the resolved configuration,
/// code version and the tolerances baked into the run.
pub fn write_meta_sidecar(
    out: &Path,
    command: &str,
    resolved: serde_json::Value,
) -> io::Result<PathBuf> {
    let meta = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": resolved,
        "tolerances": {
            "psd_margin": 1e-10,
            "symmetry_gate": 1e-9,
            "hermiticity_gate": 1e-12,
            "inequality_slack": crate::runners::INEQUALITY_SLACK,
            "sdp_gap_target": "1e-9 * (1 + cost)",
        },
    });
    let path = PathBuf::from(format!("{}.meta.json", out.display()));
    fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(path)
}

pub fn phase_plot_script(data_csv: &Path, boundary_csv: &Path) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Plot the CP phase diagram from {data} (boundary overlay from {boundary})."""
import csv
import matplotlib.pyplot as plt
import numpy as np

with open("{data}") as fh:
    rows = list(csv.DictReader(fh))
nu = sorted({{float(r["nu"]) for r in rows}})
rr = sorted({{float(r["r"]) for r in rows}})
lam = np.full((len(rr), len(nu)), np.nan)
rep = np.full((len(rr), len(nu)), np.nan)
for row in rows:
    i = rr.index(float(row["r"]))
    j = nu.index(float(row["nu"]))
    lam[i, j] = float(row["lambda_min"])
    rep[i, j] = float(row["repair_trace"])

with open("{boundary}") as fh:
    boundary = [(float(r["r"]), float(r["nu"])) for r in csv.DictReader(fh)]

fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)
for ax, grid, title in [
    (axes[0], lam, "min eigenvalue of the reverse CP matrix"),
    (axes[1], rep, "trace of the minimal repair"),
]:
    im = ax.pcolormesh(nu, rr, grid, shading="nearest")
    if boundary:
        ax.plot([b for _, b in boundary], [a for a, _ in boundary], "k--", lw=1.2)
    ax.set_xlabel("nu")
    ax.set_title(title)
    fig.colorbar(im, ax=ax)
axes[0].set_ylabel("r")
fig.tight_layout()
fig.savefig("phase_diagram.png", dpi=160)
print("wrote phase_diagram.png")
"#,
        data = data_csv.display(),
        boundary = boundary_csv.display(),
    )
}

pub fn noise_floor_plot_script(data_csv: &Path) -> String {
    format!(
        r#"#!/usr/bin/env python3
"""Plot worst-case infidelity against the geometric bound from {data}."""
import csv
import matplotlib.pyplot as plt

with open("{data}") as fh:
    rows = list(csv.DictReader(fh))
s = [float(r["s"]) for r in rows]
lnf = [float(r["neg2lnf_wc"]) for r in rows]
bound = [float(r["bound"]) for r in rows]
defect = [r["defect_flag"] == "true" for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(s, lnf, "o-", label="-2 ln F (worst case)")
ax.plot(s, bound, "s--", label="c_geom * I_dec (bound)")
for x, flag in zip(s, defect):
    if flag:
        ax.axvspan(x * 0.98, x * 1.02, color="0.85", zorder=0)
ax.set_xlabel("depth S")
ax.set_ylabel("infidelity scale")
ax.legend()
fig.tight_layout()
fig.savefig("noise_floor.png", dpi=160)
print("wrote noise_floor.png")
"#,
        data = data_csv.display(),
    )
}

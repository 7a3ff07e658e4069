//! CSV and JSON artifact writers.
//!
//! Every output file starts with comment lines echoing the artifact version
//! and the fully resolved run configuration, so identical configs produce
//! byte-identical files. Floating-point values are written with 17
//! significant digits.

use crate::dynamics::Trajectory;
use crate::floquet::SweepRow;
use crate::lattice::{BlochBands, CompactState, SiteKind};
use crate::Result;
use serde::Serialize;
use std::io::Write;

/// 17-significant-digit scientific formatting: round-trips any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `# abcage vX.Y.Z` and `# config: {...}` comment lines.
pub fn echo_header<C: Serialize>(config: &C) -> Result<String> {
    let json = serde_json::to_string(config)?;
    Ok(format!(
        "# abcage v{}\n# config: {}\n",
        env!("CARGO_PKG_VERSION"),
        json
    ))
}

/// `q,e_minus,e_zero,e_plus`
pub fn write_bands_csv<W: Write>(mut w: W, header: &str, bands: &BlochBands) -> Result<()> {
    w.write_all(header.as_bytes())?;
    writeln!(w, "q,e_minus,e_zero,e_plus")?;
    for (q, (lo, mid, hi)) in bands.q_grid.iter().zip(&bands.bands) {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f64(*q),
            fmt_f64(*lo),
            fmt_f64(*mid),
            fmt_f64(*hi)
        )?;
    }
    Ok(())
}

/// `gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff`
pub fn write_sweep_csv<W: Write>(mut w: W, header: &str, rows: &[SweepRow]) -> Result<()> {
    w.write_all(header.as_bytes())?;
    writeln!(w, "gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(row.gamma),
            fmt_f64(row.q),
            fmt_f64(row.eps[0]),
            fmt_f64(row.eps[1]),
            fmt_f64(row.eps[2]),
            fmt_f64(row.eps_eff[0]),
            fmt_f64(row.eps_eff[1]),
            fmt_f64(row.eps_eff[2]),
        )?;
    }
    Ok(())
}

/// `t,site_kind,n,intensity`, sample-major, site rows ordered a, b, c.
pub fn write_trajectory_csv<W: Write>(mut w: W, header: &str, traj: &Trajectory) -> Result<()> {
    w.write_all(header.as_bytes())?;
    writeln!(w, "t,site_kind,n,intensity")?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        for (kind, values) in [
            (SiteKind::A, &snap.a),
            (SiteKind::B, &snap.b),
            (SiteKind::C, &snap.c),
        ] {
            for (j, intensity) in values.iter().enumerate() {
                let n = traj.window.n_min + j as i64;
                writeln!(
                    w,
                    "{},{},{n},{}",
                    fmt_f64(*t),
                    kind.label(),
                    fmt_f64(*intensity)
                )?;
            }
        }
    }
    Ok(())
}

/// `t,norm,pr,leakage,return_intensity` for a hub excitation at `cell`.
pub fn write_summary_csv<W: Write>(
    mut w: W,
    header: &str,
    traj: &Trajectory,
    cage: &[(SiteKind, i64)],
    cell: i64,
) -> Result<()> {
    let pr = traj.participation_ratios();
    let leak = crate::dynamics::cage_leakage(traj, cage)?;
    let ret = crate::dynamics::return_intensity(traj, cell)?;
    w.write_all(header.as_bytes())?;
    writeln!(w, "t,norm,pr,leakage,return_intensity")?;
    for i in 0..traj.times.len() {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(traj.times[i]),
            fmt_f64(traj.norm_history[i]),
            fmt_f64(pr[i]),
            fmt_f64(leak[i]),
            fmt_f64(ret[i]),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StatesDocument<'a, C: Serialize> {
    artifact_version: &'static str,
    config: &'a C,
    states: &'a [CompactState],
}

/// Compact flat-band states as a JSON document with the config embedded.
pub fn write_states_json<W: Write, C: Serialize>(
    mut w: W,
    config: &C,
    states: &[CompactState],
) -> Result<()> {
    let doc = StatesDocument {
        artifact_version: env!("CARGO_PKG_VERSION"),
        config,
        states,
    };
    let json = serde_json::to_string_pretty(&doc)?;
    w.write_all(json.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{bloch_bands, compact_flat_band_states, FluxedRhombicParams};

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.0, 1.0, -2.0 * std::f64::consts::SQRT_2, 1e-300, 3.5e17] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn bands_csv_shape() {
        let p = FluxedRhombicParams::new(1.0, 0.0, 4, crate::lattice::Boundary::Periodic).unwrap();
        let bands = bloch_bands(&p, 8).unwrap();
        let mut buf = Vec::new();
        write_bands_csv(&mut buf, "# abcage vtest\n", &bands).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# abcage vtest");
        assert_eq!(lines[1], "q,e_minus,e_zero,e_plus");
        assert_eq!(lines.len(), 2 + 8);
    }

    #[test]
    fn states_json_contains_energies() {
        let states = compact_flat_band_states(2.0);
        let mut buf = Vec::new();
        write_states_json(&mut buf, &serde_json::json!({"kappa": 2.0}), &states).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["states"].as_array().unwrap().len(), 3);
        assert_eq!(doc["states"][1]["energy"].as_f64().unwrap(), 4.0);
    }
}

//! Spectrum evaluation over an energy grid and its file formats.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use cslrad_core::quadrature::Tolerance;
use cslrad_core::units::Constants;

use crate::config::{Model, RunConfig};
use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "E_keV,p_inv_cm,dGamma_dp_s_inv_cm,structure_factor,dPower_dp_erg_s_inv_cm";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumPoint {
    #[serde(rename = "E_keV")]
    pub e_kev: f64,
    pub p_inv_cm: f64,
    #[serde(rename = "dGamma_dp_s_inv_cm")]
    pub d_gamma_dp: f64,
    pub structure_factor: f64,
    #[serde(rename = "dPower_dp_erg_s_inv_cm")]
    pub d_power_dp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub version: String,
    pub constants: String,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub warnings: Vec<String>,
    pub points: Vec<SpectrumPoint>,
}

/// Thread count from `CSLRAD_THREADS`, if set to a positive integer.
/// Worker count from `CSLRAD_THREADS`; unset or empty means rayon's default.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("CSLRAD_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::config("CSLRAD_THREADS", format!("expected a positive integer, got {v:?}"))),
        },
    }
}

/// Runs `f` on a pool of `threads` workers (rayon's default when `None`).
pub fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool").install(f)
}

pub fn evaluate_point(model: &Model, e_kev: f64, tol: Tolerance) -> Result<(SpectrumPoint, Vec<String>)> {
    let k: &Constants = &model.constants;
    let p = k.energy_to_momentum(e_kev)?;
    let em = model.system.emission(k, p, &model.noise, &model.corr, tol)?;
    let point = SpectrumPoint {
        e_kev,
        p_inv_cm: p.get(),
        d_gamma_dp: em.rate,
        structure_factor: em.structure_factor,
        d_power_dp: k.photon_energy_erg(p) * em.rate,
    };
    let warnings = em.warnings.iter().map(|w| format!("E_keV={e_kev:e}: {w}")).collect();
    Ok((point, warnings))
}

pub fn compute_spectrum(config: &RunConfig, threads: Option<usize>) -> Result<Spectrum> {
    let model = config.model()?;
    let energies = config.grid.energies()?;
    let tol = Tolerance::DEFAULT_1D;
    let results: Vec<Result<(SpectrumPoint, Vec<String>)>> =
        with_pool(threads, || energies.par_iter().map(|&e| evaluate_point(&model, e, tol)).collect());
    let mut points = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (pt, w) = r?;
        points.push(pt);
        warnings.extend(w);
    }
    Ok(Spectrum {
        version: crate::VERSION.to_string(),
        constants: Constants::VERSION.to_string(),
        config_sha256: config.sha256(),
        config: serde_json::to_value(config).expect("config serializes"),
        warnings,
        points,
    })
}

impl Spectrum {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# cslrad {}", self.version).unwrap();
        writeln!(s, "# constants {}", self.constants).unwrap();
        writeln!(s, "# config_sha256 {}", self.config_sha256).unwrap();
        for w in &self.warnings {
            writeln!(s, "# warning {w}").unwrap();
        }
        writeln!(s, "{CSV_HEADER}").unwrap();
        for p in &self.points {
            writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e}",
                p.e_kev, p.p_inv_cm, p.d_gamma_dp, p.structure_factor, p.d_power_dp
            )
            .unwrap();
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spectrum serializes");
        s.push('\n');
        s
    }

    /// 800×600 log-log plot of dΓ/dp against photon energy.
    pub fn to_svg(&self) -> String {
        let pts: Vec<(f64, f64)> =
            self.points.iter().filter(|p| p.d_gamma_dp > 0.0).map(|p| (p.e_kev, p.d_gamma_dp)).collect();
        let e_range = self.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.e_kev), b.max(p.e_kev))
        });
        let r_range = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
        svg_loglog(&pts, e_range, r_range, "photon energy (keV)", "dGamma/dp (1/s cm)", &self.config_sha256)
    }
}

fn decades(lo: f64, hi: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.log10().floor(), hi.log10().ceil());
    if a == b {
        a -= 1.0;
        b += 1.0;
    }
    (a, b)
}

fn svg_loglog(pts: &[(f64, f64)], xr: (f64, f64), yr: (f64, f64), xlabel: &str, ylabel: &str, tag: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 600.0;
    const L: f64 = 100.0;
    const R: f64 = 30.0;
    const T: f64 = 30.0;
    const B: f64 = 70.0;
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#).unwrap();
    writeln!(s, "<!-- config_sha256 {tag} -->").unwrap();
    writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#).unwrap();
    writeln!(s, r#"<rect x="{L}" y="{T}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - L - R, H - T - B)
        .unwrap();
    if pts.is_empty() || !xr.0.is_finite() {
        writeln!(s, r#"<text x="400" y="300" text-anchor="middle" font-size="16">no positive values</text>"#).unwrap();
        s.push_str("</svg>\n");
        return s;
    }
    let (x0, x1) = decades(xr.0, xr.1);
    let (y0, y1) = decades(yr.0, yr.1);
    let sx = |x: f64| L + (x.log10() - x0) / (x1 - x0) * (W - L - R);
    let sy = |y: f64| H - B - (y.log10() - y0) / (y1 - y0) * (H - T - B);
    for d in x0 as i32..=x1 as i32 {
        let x = sx(10f64.powi(d));
        writeln!(s, r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#, H - B, H - B + 6.0).unwrap();
        writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle" font-size="12">1e{d}</text>"#, H - B + 22.0).unwrap();
    }
    for d in y0 as i32..=y1 as i32 {
        let y = sy(10f64.powi(d));
        writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{L}" y2="{y:.2}" stroke="black"/>"#, L - 6.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end" font-size="12">1e{d}</text>"#, L - 10.0, y + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{xlabel}</text>"#, (W + L - R) / 2.0, H - 20.0)
        .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {0})">{ylabel}</text>"#,
        (H + T - B) / 2.0
    )
    .unwrap();
    let poly: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
    writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#, poly.join(" ")).unwrap();
    s.push_str("</svg>\n");
    s
}

/// Writes the data file named in the config and, if requested, an SVG next
/// to it. Returns the paths written.
pub fn write_outputs(spec: &Spectrum, config: &RunConfig, plot: bool) -> Result<Vec<std::path::PathBuf>> {
    use crate::config::Format;
    let path = std::path::PathBuf::from(&config.output.path);
    let body = match config.output.format {
        Format::Csv => spec.to_csv(),
        Format::Json => spec.to_json(),
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    let mut written = vec![path.clone()];
    if plot || config.output.plot {
        let svg = path.with_extension("svg");
        std::fs::write(&svg, spec.to_svg()).map_err(|e| CliError::io(&svg, e))?;
        written.push(svg);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_config(extra_noise: &str) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{"system": {{"type": "free_electron"}}, "noise": {extra_noise},
                "correlation": {{"type": "gaussian", "r_c": 1e-5}},
                "grid": {{"e_min_kev": 1, "e_max_kev": 100, "n_points": 9}}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn free_electron_is_inverse_p() {
        let s = compute_spectrum(&free_config(r#"{"type": "white", "lambda": 2.2e-17}"#), Some(2)).unwrap();
        let c = s.points[0].d_gamma_dp * s.points[0].p_inv_cm;
        for p in &s.points {
            assert!((p.d_gamma_dp * p.p_inv_cm / c - 1.0).abs() < 1e-12);
            assert_eq!(p.structure_factor, 1.0);
            assert!((p.d_power_dp / (1.054_571_817e-27 * 2.997_924_58e10 * p.p_inv_cm * p.d_gamma_dp) - 1.0).abs() < 1e-14);
        }
        assert!(s.points.windows(2).all(|w| w[1].p_inv_cm > w[0].p_inv_cm));
    }

    #[test]
    fn csv_layout() {
        let s = compute_spectrum(&free_config(r#"{"type": "white", "lambda": 2.2e-17}"#), Some(1)).unwrap();
        let csv = s.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# cslrad "));
        assert!(lines.iter().any(|l| l.starts_with("# config_sha256 ")));
        let header = lines.iter().position(|l| *l == CSV_HEADER).unwrap();
        assert_eq!(lines.len() - header - 1, 9);
        let row: Vec<f64> = lines[header + 1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[0], 1.0);
        assert_eq!(row[2], s.points[0].d_gamma_dp);
    }

    #[test]
    fn cutoff_gives_zero_spectrum_and_plot_still_renders() {
        let s = compute_spectrum(
            &free_config(r#"{"type": "colored", "gamma0": 1e-30, "cutoff_s_inv": 1e15}"#),
            Some(1),
        )
        .unwrap();
        assert!(s.points.iter().all(|p| p.d_gamma_dp == 0.0 && p.d_power_dp == 0.0));
        assert!(s.to_svg().contains("no positive values"));
    }

    #[test]
    fn svg_has_polyline_and_decade_ticks() {
        let s = compute_spectrum(&free_config(r#"{"type": "white", "lambda": 2.2e-17}"#), Some(1)).unwrap();
        let svg = s.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"width="800" height="600""#));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains(">1e0<") && svg.contains(">1e2<"));
    }

    #[test]
    fn json_round_trips_points() {
        let s = compute_spectrum(&free_config(r#"{"type": "white", "lambda": 2.2e-17}"#), Some(1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["points"].as_array().unwrap().len(), 9);
        assert_eq!(v["points"][0]["dGamma_dp_s_inv_cm"].as_f64().unwrap(), s.points[0].d_gamma_dp);
        assert_eq!(v["config_sha256"].as_str().unwrap(), s.config_sha256);
    }
}

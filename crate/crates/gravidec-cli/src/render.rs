//! Report rendering: table, CSV and JSON emitters with a stable schema.
//! CSV and table floats carry 17 significant digits; JSON numbers use the
//! shortest representation that round-trips exactly.

use clap::ValueEnum;
use gravidec::{DecoherenceReport, ScenarioPreset};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (csv|json|table)")),
        }
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

/// Flattened report record. Field order is the output schema.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub scenario: String,
    pub m: f64,
    pub a: f64,
    pub rho: f64,
    pub omega: f64,
    pub r: f64,
    pub chh_at_2omega: f64,
    pub t_gr: f64,
    pub n_gr: f64,
    pub t_em: f64,
    pub gamma_gr: f64,
    pub gamma_em: f64,
    pub d_gr: f64,
    pub d_em: f64,
    pub lambda_gr: f64,
    pub lambda_em: f64,
    pub ratio_direct: f64,
    pub ratio_dimensionless: f64,
    pub t_dec_planck_length: Option<f64>,
    pub t_dec_femtometre: Option<f64>,
    pub t_dec_angstrom: Option<f64>,
    pub em_regime_ok: bool,
}

impl ReportRow {
    pub fn from_report(report: &DecoherenceReport) -> Self {
        let time_for = |label: &str| {
            report
                .times
                .iter()
                .find(|t| t.label == label)
                .map(|t| t.t_dec)
        };
        ReportRow {
            scenario: report.scenario.clone(),
            m: report.m,
            a: report.a,
            rho: report.rho,
            omega: report.omega,
            r: report.em.r,
            chh_at_2omega: report.chh_at_2omega,
            t_gr: report.grav.t_gr,
            n_gr: report.n_gr,
            t_em: report.em.t_em,
            gamma_gr: report.grav.gamma_gr,
            gamma_em: report.em.gamma_em,
            d_gr: report.grav.d_gr,
            d_em: report.em.d_em,
            lambda_gr: report.grav.lambda_gr,
            lambda_em: report.em.lambda_em,
            ratio_direct: report.ratio_direct,
            ratio_dimensionless: report.ratio_dimensionless,
            t_dec_planck_length: time_for("planck_length"),
            t_dec_femtometre: time_for("femtometre"),
            t_dec_angstrom: time_for("angstrom"),
            em_regime_ok: report.em_regime_ok,
        }
    }

    pub const CSV_HEADER: &'static str = "scenario,m,a,rho,omega,r,chh_at_2omega,t_gr,n_gr,t_em,gamma_gr,gamma_em,d_gr,d_em,lambda_gr,lambda_em,ratio_direct,ratio_dimensionless,t_dec_planck_length,t_dec_femtometre,t_dec_angstrom,em_regime_ok";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            fmt_float(self.m),
            fmt_float(self.a),
            fmt_float(self.rho),
            fmt_float(self.omega),
            fmt_float(self.r),
            fmt_float(self.chh_at_2omega),
            fmt_float(self.t_gr),
            fmt_float(self.n_gr),
            fmt_float(self.t_em),
            fmt_float(self.gamma_gr),
            fmt_float(self.gamma_em),
            fmt_float(self.d_gr),
            fmt_float(self.d_em),
            fmt_float(self.lambda_gr),
            fmt_float(self.lambda_em),
            fmt_float(self.ratio_direct),
            fmt_float(self.ratio_dimensionless),
            fmt_opt(self.t_dec_planck_length),
            fmt_opt(self.t_dec_femtometre),
            fmt_opt(self.t_dec_angstrom),
            self.em_regime_ok,
        )
    }
}

const TABLE_FOOTNOTES: &str = "\
# Decoherence times use the unit-exponent convention t = 1/(Lambda dx^2).
# The common mass in both channels is the reduced mass of the orbit.
# Literature comparisons for the Earth-Moon system (not computed here):
#   solar radiation pressure damping  > 1e10 x Gamma_gr
#   Earth-Moon tidal damping          > 1e16 x Gamma_gr";

const EM_REGIME_WARNING: &str =
    "# warning: sphere radius below 10 thermal wavelengths; Gamma_em formula out of regime";

pub fn render_report(report: &DecoherenceReport, format: Format) -> String {
    let row = ReportRow::from_report(report);
    match format {
        Format::Json => json_pretty(&row),
        Format::Csv => format!("{}\n{}\n", ReportRow::CSV_HEADER, row.csv_line()),
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("scenario: {}\n", row.scenario));
            let entries: [(&str, &str, f64); 17] = [
                ("m", "kg", row.m),
                ("a", "m/s^2", row.a),
                ("rho", "m", row.rho),
                ("omega", "rad/s", row.omega),
                ("r", "m", row.r),
                ("chh_at_2omega", "1/Hz", row.chh_at_2omega),
                ("t_gr", "K", row.t_gr),
                ("n_gr", "", row.n_gr),
                ("t_em", "K", row.t_em),
                ("gamma_gr", "1/s", row.gamma_gr),
                ("gamma_em", "1/s", row.gamma_em),
                ("d_gr", "kg^2 m^2/s^3", row.d_gr),
                ("d_em", "kg^2 m^2/s^3", row.d_em),
                ("lambda_gr", "1/(s m^2)", row.lambda_gr),
                ("lambda_em", "1/(s m^2)", row.lambda_em),
                ("ratio_direct", "", row.ratio_direct),
                ("ratio_dimensionless", "", row.ratio_dimensionless),
            ];
            for (name, unit, value) in entries {
                out.push_str(&format!("{name:<22} {} {unit}\n", fmt_float(value)));
            }
            for (name, value) in [
                ("t_dec_planck_length", row.t_dec_planck_length),
                ("t_dec_femtometre", row.t_dec_femtometre),
                ("t_dec_angstrom", row.t_dec_angstrom),
            ] {
                match value {
                    Some(v) => out.push_str(&format!("{name:<22} {} s\n", fmt_float(v))),
                    None => out.push_str(&format!("{name:<22} - (no gravitational channel)\n")),
                }
            }
            if !row.em_regime_ok {
                out.push_str(EM_REGIME_WARNING);
                out.push('\n');
            }
            out.push_str(TABLE_FOOTNOTES);
            out.push('\n');
            out
        }
    }
}

/// One sweep output row: the axis point plus the full report.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub axis_param: String,
    pub axis_value: f64,
    #[serde(flatten)]
    pub report: ReportRow,
}

pub fn render_sweep(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => json_pretty(&rows),
        Format::Csv | Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "axis_param,axis_value,{}\n",
                ReportRow::CSV_HEADER
            ));
            for row in rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    row.axis_param,
                    fmt_float(row.axis_value),
                    row.report.csv_line()
                ));
            }
            out
        }
    }
}

/// One row of the spectrum-conversion table.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub omega: f64,
    pub chh: f64,
    pub t_gr: f64,
    pub n_gr: f64,
}

pub fn render_spectrum(rows: &[SpectrumRow], format: Format) -> String {
    match format {
        Format::Json => json_pretty(&rows),
        Format::Csv => {
            let mut out = String::from("omega,chh,t_gr,n_gr\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_float(r.omega),
                    fmt_float(r.chh),
                    fmt_float(r.t_gr),
                    fmt_float(r.n_gr)
                ));
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:<26} {:<26} {:<26} {:<26}\n",
                "omega [rad/s]", "chh [1/Hz]", "t_gr [K]", "n_gr"
            ));
            for r in rows {
                out.push_str(&format!(
                    "{:<26} {:<26} {:<26} {:<26}\n",
                    fmt_float(r.omega),
                    fmt_float(r.chh),
                    fmt_float(r.t_gr),
                    fmt_float(r.n_gr)
                ));
            }
            out
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogRow {
    pub name: String,
    pub m_a: f64,
    pub m_b: f64,
    pub rho: f64,
    pub r: f64,
    pub t_em: f64,
    pub chh_at_2omega: f64,
}

impl From<&ScenarioPreset> for CatalogRow {
    fn from(p: &ScenarioPreset) -> Self {
        CatalogRow {
            name: p.name.clone(),
            m_a: p.m_a,
            m_b: p.m_b,
            rho: p.rho,
            r: p.r,
            t_em: p.t_em,
            chh_at_2omega: p.chh_at_2omega,
        }
    }
}

pub fn render_catalog(rows: &[CatalogRow], format: Format) -> String {
    match format {
        Format::Json => json_pretty(&rows),
        Format::Csv => {
            let mut out = String::from("name,m_a,m_b,rho,r,t_em,chh_at_2omega\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.name,
                    fmt_float(r.m_a),
                    fmt_float(r.m_b),
                    fmt_float(r.rho),
                    fmt_float(r.r),
                    fmt_float(r.t_em),
                    fmt_float(r.chh_at_2omega)
                ));
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:<12} {:<13} {:<13} {:<13} {:<13} {:<8} {:<13}\n",
                "name", "m_a [kg]", "m_b [kg]", "rho [m]", "r [m]", "t_em[K]", "chh [1/Hz]"
            ));
            for r in rows {
                out.push_str(&format!(
                    "{:<12} {:<13.6e} {:<13.6e} {:<13.6e} {:<13.6e} {:<8} {:<13.6e}\n",
                    r.name, r.m_a, r.m_b, r.rho, r.r, r.t_em, r.chh_at_2omega
                ));
            }
            out
        }
    }
}

fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

use gmlife_core::oracle::{
    integrate_m, integrate_survival, mc_remaining_life, relative_tolerance, seed_stream,
};
use gmlife_core::{
    ageing_factor, annuity, commutation_row, mortality_rate, positive_shape_check, remaining_life,
    survival, Age, Error, GmParams, Rate,
};
use rayon::prelude::*;

pub const MAX_ROWS: usize = 1_000_000;
const ORACLE_REL_TOL: f64 = 1e-10;
const MC_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A validated table request.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub params: GmParams,
    pub delta: Rate,
    pub x_min: f64,
    pub step: f64,
    pub rows: usize,
    pub format: Format,
    pub double_rate: bool,
    pub verify: bool,
    pub verify_tol: f64,
    pub diagnostics: bool,
    pub seed: u64,
}

impl TableSpec {
    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["x", "l", "mu", "D", "N", "M", "a_bar", "e_x"];
        if self.double_rate {
            h.extend(["D2", "N2", "M2"]);
        }
        if self.diagnostics {
            h.extend(["ageing_factor", "shape"]);
        }
        if self.verify {
            h.extend(["a_bar_rel_diff", "M_rel_diff", "e_x_mc_z"]);
        }
        h
    }

    pub fn age(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.step
    }
}

/// One output row. `None` marks a quantity that is undefined for the basis.
#[derive(Debug, Clone)]
pub struct Row {
    pub x: f64,
    pub fields: Vec<Option<f64>>,
    pub verify_failed: bool,
}

#[derive(Debug)]
pub struct RowFailure {
    pub x: f64,
    pub error: Error,
}

fn rel_diff(closed: f64, reference: f64) -> f64 {
    if closed == reference {
        0.0
    } else {
        ((closed - reference) / reference).abs()
    }
}

fn finite(func: &'static str, v: f64) -> Result<f64, Error> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow {
            func,
            reason: format!("result {v} is not finite"),
        })
    }
}

fn compute_row(spec: &TableSpec, i: usize) -> Result<Row, Error> {
    let p = &spec.params;
    let r = spec.delta;
    let xv = spec.age(i);
    let x = Age::new(xv)?;
    let base = commutation_row(p, r, x, false)?;
    let a_bar = finite("annuity", annuity(p, r, x)?)?;
    let e_x = finite("remaining_life", remaining_life(p, x)?)?;
    let mut fields = vec![
        Some(xv),
        Some(survival(p, x)),
        Some(mortality_rate(p, x)?),
        Some(base.d_val),
        Some(finite("commutation_n", base.n_val)?),
        Some(finite("commutation_m", base.m_val)?),
        Some(a_bar),
        Some(e_x),
    ];
    if spec.double_rate {
        let twice = commutation_row(p, r, x, true)?;
        fields.extend([
            Some(twice.d_val),
            Some(finite("commutation_n", twice.n_val)?),
            Some(finite("commutation_m", twice.m_val)?),
        ]);
    }
    if spec.diagnostics {
        fields.push(ageing_factor(p, r, x).ok());
        fields.push(positive_shape_check(p, r).ok());
    }
    let mut verify_failed = false;
    if spec.verify {
        let a_ref = relative_tolerance(ORACLE_REL_TOL, |t| integrate_survival(p, r, x, t))?;
        let m_ref = relative_tolerance(ORACLE_REL_TOL, |t| integrate_m(p, r, x, t))?;
        let a_diff = rel_diff(a_bar, a_ref.value);
        let m_diff = rel_diff(base.m_val, m_ref.value);
        verify_failed = !(a_diff <= spec.verify_tol && m_diff <= spec.verify_tol);
        let mut rng = seed_stream(spec.seed.wrapping_add(i as u64));
        let mc = mc_remaining_life(p, x, MC_SAMPLES, &mut rng)?;
        let z = if mc.std_error > 0.0 {
            Some((mc.mean - e_x) / mc.std_error)
        } else {
            None
        };
        fields.extend([Some(a_diff), Some(m_diff), z]);
    }
    Ok(Row {
        x: xv,
        fields,
        verify_failed,
    })
}

/// Evaluates every grid age in parallel. Rows come back in ascending age
/// order; on failure the lowest failing age is reported.
pub fn compute(spec: &TableSpec) -> Result<Vec<Row>, RowFailure> {
    (0..spec.rows)
        .into_par_iter()
        .map(|i| {
            compute_row(spec, i).map_err(|error| RowFailure {
                x: spec.age(i),
                error,
            })
        })
        .collect()
}

/// 15 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.14e}")
}

pub fn render_csv(spec: &TableSpec, rows: &[Row]) -> String {
    let mut out = spec.header().join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .fields
            .iter()
            .map(|f| f.map(format_number).unwrap_or_default())
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(spec: &TableSpec, rows: &[Row]) -> String {
    let header = spec.header();
    let array: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let obj: serde_json::Map<String, serde_json::Value> = header
                .iter()
                .zip(&row.fields)
                .map(|(k, f)| {
                    // same rounding as the CSV output
                    let v = f
                        .and_then(|v| format_number(v).parse::<f64>().ok())
                        .and_then(serde_json::Number::from_f64)
                        .map_or(serde_json::Value::Null, serde_json::Value::Number);
                    (k.to_string(), v)
                })
                .collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&array).expect("JSON values are finite");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rows: usize) -> TableSpec {
        TableSpec {
            params: GmParams::new(0.001, 0.000_012, 0.101_314).unwrap(),
            delta: Rate::new(0.026_559).unwrap(),
            x_min: 0.0,
            step: 1.0,
            rows,
            format: Format::Csv,
            double_rate: false,
            verify: false,
            verify_tol: 1e-7,
            diagnostics: false,
            seed: 0,
        }
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.0, 1.0, 24.815_040_221_325_92, 1.2e-300, 6.02e23, -3.5] {
            let s = format_number(v);
            let back: f64 = s.parse().unwrap();
            assert!(back == v || ((back - v) / v).abs() <= 5e-15, "{s}");
        }
        assert_eq!(format_number(25.0), "2.50000000000000e1");
    }

    #[test]
    fn header_tracks_flags() {
        let mut s = spec(1);
        assert_eq!(s.header().len(), 8);
        s.double_rate = true;
        s.diagnostics = true;
        s.verify = true;
        let h = s.header();
        assert_eq!(h.len(), 16);
        assert_eq!(h[8..11], ["D2", "N2", "M2"]);
    }

    #[test]
    fn rows_are_ordered_and_sized() {
        let s = spec(11);
        let rows = compute(&s).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.windows(2).all(|w| w[0].x < w[1].x));
        assert!(rows.iter().all(|r| r.fields.len() == 8));
    }

    #[test]
    fn undefined_diagnostics_are_empty() {
        let mut s = spec(1);
        s.params = GmParams::new(0.0, 1e-5, 0.1).unwrap();
        s.delta = Rate::ZERO;
        s.diagnostics = true;
        let rows = compute(&s).unwrap();
        assert_eq!(rows[0].fields[8], None);
        let csv = render_csv(&s, &rows);
        assert!(csv.lines().nth(1).unwrap().contains(",,"));
    }
}

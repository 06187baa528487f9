// SPDX-License-Identifier: MIT OR Apache-2.0
//! Orbit traces as CSV.

use std::io::Write;

use schwarz_core::numeric::{NumericOrbit, NumericSystem};

use crate::CliError;

/// Writes one row per orbit point: `t_re, t_im`, then `X{j}_re, X{j}_im`
/// for each coordinate and `drift_{name}` for each primary.
pub fn write_trace<W: Write>(
    out: W,
    sys: &NumericSystem,
    orbit: &NumericOrbit,
    primary_names: &[String],
) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t_re".to_string(), "t_im".to_string()];
    for j in 1..=sys.nvars() {
        header.push(format!("X{j}_re"));
        header.push(format!("X{j}_im"));
    }
    header.extend(primary_names.iter().map(|n| format!("drift_{n}")));
    w.write_record(&header).map_err(io)?;
    for (t, x) in orbit.times.iter().zip(&orbit.states) {
        let mut row = vec![fmt(t.re), fmt(t.im)];
        for z in x {
            row.push(fmt(z.re));
            row.push(fmt(z.im));
        }
        row.extend(sys.deviations(x, *t)?.into_iter().map(fmt));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use schwarz_core::numeric::C64;
    use schwarz_core::pipeline::build_associated_system;
    use schwarz_core::{Poly, RatFn};

    #[test]
    fn header_and_rows() {
        // X1 = t along the flow of P = X1
        let sys = build_associated_system(1, vec![Poly::var(0)], vec![RatFn::var(0)], 0).unwrap();
        let ns = NumericSystem::new(&sys, &[C64::new(0.0, 0.0)]).unwrap();
        let orbit = NumericOrbit {
            times: vec![C64::new(1.0, 0.0), C64::new(2.0, 0.5)],
            states: vec![vec![C64::new(1.0, 0.0)], vec![C64::new(2.0, 0.5)]],
            errors: vec![0.0, 0.0],
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, &ns, &orbit, &["P".into()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t_re,t_im,X1_re,X1_im,drift_P");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("2.00000000000000000e0,5.00000000000000000e-1"));
        assert!(lines[2].ends_with("0.00000000000000000e0"));
    }
}

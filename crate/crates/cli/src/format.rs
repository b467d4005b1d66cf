//! Locale-independent number formatting and curve CSV output.

use std::io::Write;

use retinex_entropy::EntropyCurve;

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed,
/// scientific notation for very small or very large magnitudes.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..9).contains(&exp) {
        let s = format!("{x:.8e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        return format!("{}e{exponent}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `name=value` with 9 digits after the decimal point.
pub fn named_value(name: &str, value: f64) -> String {
    format!("{name}={value:.9}")
}

/// Writes `kappa,<id>,...` followed by one row per κ grid point. All curves
/// must share the same grid.
pub fn write_curve_csv<W: Write>(
    out: W,
    columns: &[(String, &EntropyCurve)],
) -> Result<(), csv::Error> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["kappa".to_string()];
    header.extend(columns.iter().map(|(id, _)| id.clone()));
    wtr.write_record(&header)?;
    let Some((_, first)) = columns.first() else {
        return wtr.flush().map_err(csv::Error::from);
    };
    for (i, &kappa) in first.kappas().iter().enumerate() {
        let mut row = vec![sig9(kappa)];
        row.extend(columns.iter().map(|(_, c)| sig9(c.values()[i])));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(5.545177444479562), "5.54517744");
        assert_eq!(sig9(0.1), "0.1");
        assert_eq!(sig9(0.01), "0.01");
        assert_eq!(sig9(12.0), "12");
        assert_eq!(sig9(-0.4123456789), "-0.412345679");
        assert_eq!(sig9(1.5e-7), "1.5e-7");
        assert_eq!(sig9(123456789012.0), "1.23456789e11");
    }

    #[test]
    fn named_values() {
        assert_eq!(named_value("shannon", 0.0), "shannon=0.000000000");
        assert_eq!(
            named_value("kaniadakis", 5.833773),
            "kaniadakis=5.833773000"
        );
    }
}

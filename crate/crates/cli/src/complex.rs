use std::str::FromStr;

use num_complex::Complex64;

/// Parses `i`, `-i`, `[re,im]`, `a+bi` or a plain real.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "" => return Err("empty complex number".into()),
        "i" | "+i" => return Ok(Complex64::i()),
        "-i" => return Ok(-Complex64::i()),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if let [re, im] = parts.as_slice() {
            let re = re.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?;
            let im = im.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?;
            return Ok(Complex64::new(re, im));
        }
        return Err(format!("`{s}`: expected [re,im]"));
    }
    Complex64::from_str(&t).map_err(|e| format!("`{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("[0.3, -2]").unwrap(), Complex64::new(0.3, -2.0));
        assert_eq!(parse_complex("0.3+0.8i").unwrap(), Complex64::new(0.3, 0.8));
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-0.2i").unwrap(), Complex64::new(0.0, -0.2));
        assert_eq!(parse_complex("1e8").unwrap(), Complex64::new(1e8, 0.0));
        assert!(parse_complex("[1,2,3]").is_err());
        assert!(parse_complex("abc").is_err());
    }
}

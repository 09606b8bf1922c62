//! Upper limits on the work a single invocation may request.

use crate::CliError;

pub const CAP_ENV: &str = "STANLEY_GRID_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest value bound (`--max-value`, `--limit`, sieve bounds).
    pub max_value: u64,
    /// Largest row count (`--max-rows`, `--row`, `--count`).
    pub max_rows: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_value: 3u64.pow(12),
            max_rows: 500,
        }
    }
}

impl Caps {
    /// `"max_value"` or `"max_value,max_rows"`; an omitted part keeps its default.
    pub fn parse(text: &str) -> Result<Caps, CliError> {
        let bad = || CliError::Usage(format!("{CAP_ENV} must look like N or N,R; got {text:?}"));
        let mut caps = Caps::default();
        let mut parts = text.split(',').map(str::trim);
        match parts.next() {
            Some("") | None => {}
            Some(v) => caps.max_value = v.parse().map_err(|_| bad())?,
        }
        if let Some(r) = parts.next() {
            caps.max_rows = r.parse().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(caps)
    }

    pub fn from_env() -> Result<Caps, CliError> {
        match std::env::var(CAP_ENV) {
            Ok(text) => Caps::parse(&text),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn check_value(&self, flag: &str, value: u64) -> Result<(), CliError> {
        if value > self.max_value {
            return Err(CliError::Cap(format!(
                "{flag} {value} exceeds the value cap {} (set {CAP_ENV} to raise it)",
                self.max_value
            )));
        }
        Ok(())
    }

    pub fn check_rows(&self, flag: &str, rows: u64) -> Result<(), CliError> {
        if rows > self.max_rows {
            return Err(CliError::Cap(format!(
                "{flag} {rows} exceeds the row cap {} (set {CAP_ENV} to raise it)",
                self.max_rows
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides() {
        assert_eq!(Caps::parse("1000").unwrap(), Caps { max_value: 1000, max_rows: 500 });
        assert_eq!(Caps::parse("10,20").unwrap(), Caps { max_value: 10, max_rows: 20 });
        assert_eq!(Caps::parse(",7").unwrap().max_rows, 7);
        assert!(Caps::parse("x").is_err());
        assert!(Caps::parse("1,2,3").is_err());
    }

    #[test]
    fn limits() {
        let caps = Caps { max_value: 10, max_rows: 2 };
        assert!(caps.check_value("--limit", 10).is_ok());
        assert_eq!(caps.check_value("--limit", 11).unwrap_err().exit_code(), 4);
        assert_eq!(caps.check_rows("--row", 3).unwrap_err().exit_code(), 4);
    }
}

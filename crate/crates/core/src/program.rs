//! Line-oriented pulse program files.
//!
//! ```text
//! # comment
//! register N=1 eta=0.4819 cutoff=4 [omega_rad_s=879645.94]
//! pulse ion=0 k=0 phase=pi/2 dur=9.35per_omega
//! pulse ion=0 k=1 phase=0 dur=1.2e-5seconds
//! ```
//!
//! Phases and duration values accept plain floats or multiples of `pi`
//! (`pi`, `-pi/2`, `3pi/2`, `0.5*pi`). Durations carry a unit: `per_omega`
//! means the value is `Ωt`; `seconds` is converted with `omega_rad_s`, which
//! then becomes the register's base Rabi frequency. Fields may appear in any
//! order. [`PulseProgramFile::to_canonical`] writes every number with the
//! shortest round-tripping representation, so parse and serialize commute.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use crate::coupling::{LambDicke, RabiBase, SidebandIndex};
use crate::gates::PulseProgram;
use crate::register::{PulseSpec, RegisterConfig, MAX_IONS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. } | ParseError::Semantic { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurationUnit {
    PerOmega,
    Seconds,
}

impl DurationUnit {
    pub fn tag(self) -> &'static str {
        match self {
            DurationUnit::PerOmega => "per_omega",
            DurationUnit::Seconds => "seconds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterHeader {
    pub n_ions: usize,
    pub eta: f64,
    pub cutoff: usize,
    /// Base Rabi frequency in rad/s; absent for dimensionless programs.
    pub omega_rad_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseRecord {
    pub ion: usize,
    pub k: u32,
    pub phase: f64,
    pub duration: f64,
    pub unit: DurationUnit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgramFile {
    pub header: RegisterHeader,
    pub pulses: Vec<PulseRecord>,
}

impl PulseProgramFile {
    pub fn config(&self) -> crate::error::Result<RegisterConfig> {
        let omega = match self.header.omega_rad_s {
            Some(w) => RabiBase::new(w)?,
            None => RabiBase::dimensionless(),
        };
        RegisterConfig::new(self.header.n_ions, LambDicke::new(self.header.eta)?, omega, self.header.cutoff)
    }

    /// `Ωt` of one record.
    pub fn dimensionless_duration(&self, pulse: &PulseRecord) -> f64 {
        match pulse.unit {
            DurationUnit::PerOmega => pulse.duration,
            // Parsing guarantees omega is present for seconds.
            DurationUnit::Seconds => pulse.duration * self.header.omega_rad_s.unwrap_or(1.0),
        }
    }

    pub fn pulse_specs(&self) -> Vec<PulseSpec> {
        self.pulses
            .iter()
            .map(|p| PulseSpec {
                target: p.ion,
                sideband: SidebandIndex(p.k),
                phase: p.phase,
                duration: self.dimensionless_duration(p),
            })
            .collect()
    }

    /// Executable program; fails when the file has no pulses.
    pub fn program(&self) -> crate::error::Result<PulseProgram> {
        PulseProgram::new(self.config()?, self.pulse_specs())
    }

    pub fn to_canonical(&self) -> String {
        let h = &self.header;
        let mut out = format!("register N={} eta={:?} cutoff={}", h.n_ions, h.eta, h.cutoff);
        if let Some(w) = h.omega_rad_s {
            let _ = write!(out, " omega_rad_s={w:?}");
        }
        out.push('\n');
        for p in &self.pulses {
            let _ = writeln!(
                out,
                "pulse ion={} k={} phase={:?} dur={:?}{}",
                p.ion,
                p.k,
                p.phase,
                p.duration,
                p.unit.tag()
            );
        }
        out
    }
}

impl fmt::Display for PulseProgramFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col + 1)),
            (true, Some((b, c))) => {
                out.push(Token { text: &line[b..byte], column: c });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        out.push(Token { text: &line[b..], column: c });
    }
    out
}

/// Longest prefix of `s` that is a decimal float literal, without sign.
fn float_prefix(s: &str) -> usize {
    let b = s.as_bytes();
    let digits = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(0);
    if i < b.len() && b[i] == b'.' {
        i = digits(i + 1);
    }
    if i == 0 || (i == 1 && b[0] == b'.') {
        return 0;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let end = digits(j);
        if end > j {
            i = end;
        }
    }
    i
}

/// Parses a float or pi multiple at the start of `s`; returns value and rest.
fn number_prefix(s: &str) -> Option<(f64, &str)> {
    let (sign, body) = match s.as_bytes().first() {
        Some(b'-') => (-1.0, &s[1..]),
        Some(b'+') => (1.0, &s[1..]),
        _ => (1.0, s),
    };
    let n = float_prefix(body);
    let coeff: Option<f64> = (n > 0).then(|| body[..n].parse().ok()).flatten();
    let mut rest = &body[n..];
    let after_star = rest.strip_prefix('*').filter(|_| coeff.is_some());
    if let Some(tail) = after_star.unwrap_or(rest).strip_prefix("pi") {
        let mut value = coeff.unwrap_or(1.0) * PI;
        rest = tail;
        if let Some(tail) = rest.strip_prefix('/') {
            let d = float_prefix(tail);
            let den: f64 = tail[..d].parse().ok()?;
            if den == 0.0 {
                return None;
            }
            value /= den;
            rest = &tail[d..];
        }
        return Some((sign * value, rest));
    }
    if after_star.is_some() {
        return None;
    }
    coeff.map(|c| (sign * c, rest))
}

struct Fields<'a> {
    line: usize,
    values: Vec<(&'a str, &'a str, usize)>,
}

impl<'a> Fields<'a> {
    fn collect(line: usize, toks: &[Token<'a>], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut values: Vec<(&str, &str, usize)> = Vec::new();
        for t in toks {
            let Some((key, value)) = t.text.split_once('=') else {
                return Err(ParseError::Syntax {
                    line,
                    column: t.column,
                    expected: "key=value".into(),
                    found: format!("`{}`", t.text),
                });
            };
            if !allowed.contains(&key) {
                return Err(ParseError::Syntax {
                    line,
                    column: t.column,
                    expected: format!("one of {}", allowed.join(", ")),
                    found: format!("`{key}`"),
                });
            }
            if values.iter().any(|(k, _, _)| *k == key) {
                return Err(ParseError::Semantic { line, message: format!("field `{key}` given twice") });
            }
            values.push((key, value, t.column + key.len() + 1));
        }
        Ok(Self { line, values })
    }

    fn get(&self, key: &str) -> Option<(&'a str, usize)> {
        self.values.iter().find(|(k, _, _)| *k == key).map(|(_, v, c)| (*v, *c))
    }

    fn require(&self, key: &str, end_column: usize) -> Result<(&'a str, usize), ParseError> {
        self.get(key).ok_or_else(|| ParseError::Syntax {
            line: self.line,
            column: end_column,
            expected: format!("field `{key}=`"),
            found: "end of line".into(),
        })
    }

    fn syntax(&self, column: usize, expected: &str, found: &str) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column,
            expected: expected.into(),
            found: if found.is_empty() { "nothing".into() } else { format!("`{found}`") },
        }
    }

    fn integer<T: std::str::FromStr>(&self, key: &str, end: usize) -> Result<T, ParseError> {
        let (v, c) = self.require(key, end)?;
        v.parse().map_err(|_| self.syntax(c, "an unsigned integer", v))
    }

    fn float(&self, v: &str, c: usize) -> Result<f64, ParseError> {
        match number_prefix(v) {
            Some((x, "")) if x.is_finite() => Ok(x),
            _ => Err(self.syntax(c, "a number or pi expression", v)),
        }
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic { line, message: message.into() }
}

pub fn parse_program(text: &str) -> Result<PulseProgramFile, ParseError> {
    let mut header: Option<RegisterHeader> = None;
    let mut pulses = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split_once('#').map_or(raw, |(before, _)| before);
        let toks = tokens(content);
        let Some(first) = toks.first() else { continue };
        let end = content.chars().count() + 1;

        match first.text {
            "register" => {
                let f = Fields::collect(line, &toks[1..], &["N", "eta", "cutoff", "omega_rad_s"])?;
                if header.is_some() {
                    return Err(semantic(line, "duplicate `register` line"));
                }
                let n_ions: usize = f.integer("N", end)?;
                let (ev, ec) = f.require("eta", end)?;
                let eta = f.float(ev, ec)?;
                let cutoff: usize = f.integer("cutoff", end)?;
                let omega_rad_s = f.get("omega_rad_s").map(|(v, c)| f.float(v, c)).transpose()?;
                if !(1..=MAX_IONS).contains(&n_ions) {
                    return Err(semantic(line, format!("N = {n_ions} outside 1..={MAX_IONS}")));
                }
                if !(eta > 0.0 && eta < 1.0) {
                    return Err(semantic(line, format!("eta = {eta} outside (0, 1)")));
                }
                if cutoff < 2 {
                    return Err(semantic(line, format!("cutoff = {cutoff} below 2")));
                }
                if let Some(w) = omega_rad_s.filter(|w| *w <= 0.0) {
                    return Err(semantic(line, format!("omega_rad_s = {w} must be positive")));
                }
                header = Some(RegisterHeader { n_ions, eta, cutoff, omega_rad_s });
            }
            "pulse" => {
                let f = Fields::collect(line, &toks[1..], &["ion", "k", "phase", "dur"])?;
                let Some(h) = header else {
                    return Err(semantic(line, "`pulse` before the `register` line"));
                };
                let ion: usize = f.integer("ion", end)?;
                let (kv, kc) = f.require("k", end)?;
                let k = match kv {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(f.syntax(kc, "sideband k = 0 or 1", kv)),
                };
                let (pv, pc) = f.require("phase", end)?;
                let phase = f.float(pv, pc)?;
                let (dv, dc) = f.require("dur", end)?;
                let (duration, unit_text) =
                    number_prefix(dv).ok_or_else(|| f.syntax(dc, "a duration value", dv))?;
                let unit = match unit_text {
                    "per_omega" => DurationUnit::PerOmega,
                    "seconds" => DurationUnit::Seconds,
                    other => {
                        let col = dc + dv.chars().count() - other.chars().count();
                        return Err(f.syntax(col, "unit `per_omega` or `seconds`", other));
                    }
                };
                if ion >= h.n_ions {
                    return Err(semantic(line, format!("ion {ion} out of range for N = {}", h.n_ions)));
                }
                if !duration.is_finite() || duration < 0.0 {
                    return Err(semantic(line, format!("negative duration {duration}")));
                }
                if unit == DurationUnit::Seconds && h.omega_rad_s.is_none() {
                    return Err(semantic(
                        line,
                        "duration in seconds needs `omega_rad_s` on the register line",
                    ));
                }
                pulses.push(PulseRecord { ion, k, phase, duration, unit });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column: first.column,
                    expected: "`register`, `pulse` or a comment".into(),
                    found: format!("`{other}`"),
                })
            }
        }
    }

    let header = header.ok_or_else(|| semantic(last_line.max(1), "missing `register` line"))?;
    Ok(PulseProgramFile { header, pulses })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CN: &str = "\
# ion-bus CN, (p, q, p', q') = (2, 2, 5, 1)
register N=1 eta=0.9692 cutoff=4
pulse ion=0 k=0 phase=pi/2 dur=91.6681per_omega
pulse ion=0 k=1 phase=pi/2 dur=41.4765per_omega   # off-resonant
pulse ion=0 k=0 phase=pi/2 dur=8.8304per_omega
";

    #[test]
    fn three_pulse_program() {
        let f = parse_program(CN).unwrap();
        let ks: Vec<u32> = f.pulses.iter().map(|p| p.k).collect();
        assert_eq!(ks, [0, 1, 0]);
        assert_eq!(f.program().unwrap().len(), 3);
    }

    #[test]
    fn pi_expressions() {
        for (s, v) in [
            ("3pi/2", 1.5 * PI),
            ("pi", PI),
            ("-pi/2", -PI / 2.0),
            ("0.5*pi", PI / 2.0),
            ("2.5", 2.5),
            ("1e-3", 1e-3),
        ] {
            assert_eq!(number_prefix(s), Some((v, "")), "{s}");
        }
        assert_eq!(number_prefix("1.5e-5seconds"), Some((1.5e-5, "seconds")));
        assert_eq!(number_prefix("3pi/2per_omega"), Some((1.5 * PI, "per_omega")));
        assert!(number_prefix("pi/0").is_none());
        assert!(number_prefix("2*x").is_none());
    }

    #[test]
    fn phase_folds_to_constant() {
        let f = parse_program("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=3pi/2 dur=1per_omega")
            .unwrap();
        assert!((f.pulses[0].phase - 4.71238898038469).abs() < 1e-14);
    }

    #[test]
    fn duplicate_register() {
        let err =
            parse_program("register N=1 eta=0.5 cutoff=4\nregister N=1 eta=0.5 cutoff=4\n").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 2, .. }), "{err}");
    }

    #[test]
    fn semantic_errors() {
        let head = "register N=2 eta=0.5 cutoff=4\n";
        let ion = parse_program(&format!("{head}pulse ion=2 k=0 phase=0 dur=1per_omega")).unwrap_err();
        assert!(ion.to_string().contains("out of range"));
        let neg = parse_program(&format!("{head}pulse ion=0 k=0 phase=0 dur=-1per_omega")).unwrap_err();
        assert!(neg.to_string().contains("negative duration"));
        let sec = parse_program(&format!("{head}pulse ion=0 k=0 phase=0 dur=1seconds")).unwrap_err();
        assert!(matches!(sec, ParseError::Semantic { line: 2, .. }));
        assert!(parse_program("pulse ion=0 k=0 phase=0 dur=1per_omega").is_err());
        assert!(parse_program("# nothing\n").is_err());
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = parse_program("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=2 phase=0 dur=1per_omega")
            .unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                column: 15,
                expected: "sideband k = 0 or 1".into(),
                found: "`2`".into()
            }
        );
        let err =
            parse_program("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=0 dur=1minutes").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 30, .. }), "{err:?}");
        let err = parse_program("regster N=1").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 1, .. }));
        let err = parse_program("register N=1 eta=0.5").unwrap_err();
        assert!(err.to_string().contains("cutoff"));
    }

    #[test]
    fn canonical_round_trip() {
        let f = parse_program(CN).unwrap();
        let once = f.to_canonical();
        let g = parse_program(&once).unwrap();
        assert_eq!(f, g);
        assert_eq!(once, g.to_canonical());
    }

    #[test]
    fn seconds_convert_with_omega() {
        let f = parse_program(
            "register N=1 eta=0.5 cutoff=4 omega_rad_s=2e5\npulse ion=0 k=1 phase=0 dur=1e-5seconds",
        )
        .unwrap();
        assert!((f.pulse_specs()[0].duration - 2.0).abs() < 1e-12);
        assert_eq!(f.config().unwrap().omega.value(), 2e5);
    }

    #[test]
    fn empty_program_is_valid_file() {
        let f = parse_program("register N=3 eta=0.2 cutoff=2\n").unwrap();
        assert!(f.pulses.is_empty());
        assert!(f.program().is_err());
    }
}

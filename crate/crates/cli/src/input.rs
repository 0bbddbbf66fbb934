use clap::Args;

use rootiso::error::Error;
use rootiso::number::parse_rational;
use rootiso::oracle::generators::{chebyshev_like, mignotte, nested_clusters, random_int, random_roots};
use rootiso::{Dyadic, Interval, Polynomial};

/// Bits kept when a non-dyadic endpoint is rounded outward.
const ROUNDING_BITS: i64 = 64;

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Coefficients, constant term first: integers, `p/q`, or `m*2^e`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,

    /// File holding a coefficient list (commas or whitespace).
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,

    /// Generated instance: `mignotte:N:L`, `nested:DEPTH:L`, `chebyshev:N`,
    /// `random:N:L` or `roots:N`.
    #[arg(long)]
    pub generate: Option<String>,
}

impl InputArgs {
    pub fn polynomial(&self, seed: u64) -> Result<Polynomial, Error> {
        if let Some(c) = &self.coeffs {
            return Polynomial::parse_list(c);
        }
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let list = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect::<Vec<_>>();
            return Polynomial::parse_list(&list.join(","));
        }
        let spec = self.generate.as_deref().unwrap_or_default();
        generate(spec, seed)
    }
}

fn field<T: std::str::FromStr>(spec: &str, parts: &[&str], i: usize) -> Result<T, Error> {
    parts
        .get(i)
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad generator spec {spec:?}")))
}

pub fn generate(spec: &str, seed: u64) -> Result<Polynomial, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let arity = |k: usize| {
        if parts.len() == k {
            Ok(())
        } else {
            Err(Error::Parse(format!("bad generator spec {spec:?}")))
        }
    };
    match parts[0] {
        "mignotte" => {
            arity(3)?;
            mignotte(field(spec, &parts, 1)?, field(spec, &parts, 2)?)
        }
        "nested" => {
            arity(3)?;
            Ok(nested_clusters(field(spec, &parts, 1)?, field(spec, &parts, 2)?)?.0)
        }
        "chebyshev" => {
            arity(2)?;
            chebyshev_like(field(spec, &parts, 1)?)
        }
        "random" => {
            arity(3)?;
            random_int(field(spec, &parts, 1)?, field(spec, &parts, 2)?, seed)
        }
        "roots" => {
            arity(2)?;
            let n: usize = field(spec, &parts, 1)?;
            if n < 2 {
                return Err(Error::InvalidArgument("roots needs N >= 2".into()));
            }
            Ok(random_roots(n, seed).polynomial())
        }
        other => Err(Error::Parse(format!("unknown family {other:?}"))),
    }
}

pub enum IntervalSpec {
    Auto,
    Given(Interval),
}

/// Exact dyadic, or the outward rounding of a rational.
fn endpoint(s: &str, up: bool) -> Result<Dyadic, Error> {
    let r = parse_rational(s)?;
    Ok(Dyadic::from_rational(&r).unwrap_or_else(|| {
        if up {
            Dyadic::ceil_rational(&r, -ROUNDING_BITS)
        } else {
            Dyadic::floor_rational(&r, -ROUNDING_BITS)
        }
    }))
}

pub fn parse_interval(s: &str) -> Result<IntervalSpec, Error> {
    if s.trim() == "auto" {
        return Ok(IntervalSpec::Auto);
    }
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected lo,hi or auto, got {s:?}")))?;
    Ok(IntervalSpec::Given(Interval::new(endpoint(a, false)?, endpoint(b, true)?)?))
}

pub fn parse_dyadic(s: &str) -> Result<Dyadic, Error> {
    s.parse()
}

/// `[-B, B]` with `B` a power of two at least `1 + max |a_i / a_n|`.
pub fn auto_interval(f: &Polynomial) -> Interval {
    let b = f.cauchy_bound();
    Interval::new(-&b, b).expect("positive bound")
}

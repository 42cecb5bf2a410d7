use clap::{ArgGroup, Parser, ValueEnum};
use distinction_core::endo_invariants::QuadType;
use distinction_core::report::Query;
use distinction_core::sweep::{SweepRanges, SweepTuple};
use distinction_core::tame_tower::SquareClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Invariants,
    Exists,
    Count,
    Epsilon,
    Verdict,
    Verify,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuadArg {
    Null,
    Unram,
    Ram,
}

impl From<QuadArg> for QuadType {
    fn from(q: QuadArg) -> Self {
        match q {
            QuadArg::Null => QuadType::Null,
            QuadArg::Unram => QuadType::Unramified,
            QuadArg::Ram => QuadType::Ramified,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlphaArg {
    Square,
    UnitNonsquare,
    Unif,
    UnifNonsquare,
}

impl From<AlphaArg> for SquareClass {
    fn from(a: AlphaArg) -> Self {
        match a {
            AlphaArg::Square => SquareClass::ONE,
            AlphaArg::UnitNonsquare => SquareClass::UNIT_NONSQUARE,
            AlphaArg::Unif => SquareClass::UNIFORMIZER,
            AlphaArg::UnifNonsquare => SquareClass::UNIFORMIZER_NONSQUARE,
        }
    }
}

/// Distinction invariants for inner forms of GL_2n over a p-adic field.
#[derive(Debug, Parser)]
#[command(name = "distinction", version)]
#[command(group(ArgGroup::new("format").args(["json", "table"])))]
pub struct Cli {
    #[arg(long, value_enum)]
    pub mode: Mode,

    /// Residue characteristic (odd prime).
    #[arg(long)]
    pub p: Option<u64>,
    /// Residue degree of F over Q_p.
    #[arg(long)]
    pub f0: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Degree of the endo-class; must equal e * f.
    #[arg(long)]
    pub deg: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long)]
    pub f: Option<u32>,
    #[arg(long, value_enum)]
    pub quad: Option<QuadArg>,
    #[arg(long, value_enum)]
    pub alpha: Option<AlphaArg>,
    /// Exponent of the tower unit zeta.
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: Option<i128>,
    #[arg(long, allow_negative_numbers = true, requires = "beta_zeta")]
    pub beta_val: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "beta_val")]
    pub beta_zeta: Option<i128>,
    #[arg(long)]
    pub symplectic: Option<bool>,
    /// Whether the twisting character is trivial on norms from K (level zero, s = 2n only).
    #[arg(long)]
    pub chi_trivial_on_norms: Option<bool>,

    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub table: bool,

    /// Worker threads for sweeps (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Sweep: comma-separated primes.
    #[arg(long, value_delimiter = ',', conflicts_with = "p")]
    pub primes: Option<Vec<u64>>,
    /// Sweep: comma-separated base residue degrees.
    #[arg(long, value_delimiter = ',', conflicts_with = "f0")]
    pub f0s: Option<Vec<u32>>,
    #[arg(long)]
    pub max_two_n: Option<u32>,
    #[arg(long)]
    pub max_e: Option<u32>,
    #[arg(long)]
    pub max_f: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
pub enum ArgError {
    #[error("--{0} is required in this mode")]
    Missing(&'static str),
    #[error("--deg {deg} does not equal e * f = {ef}")]
    DegreeMismatch { deg: u32, ef: u32 },
    #[error("--{0} is not used by mode {1:?}")]
    Unused(&'static str, Mode),
}

impl Cli {
    fn tower(&self) -> Result<(u32, u32, QuadType), ArgError> {
        let quad: QuadType = self.quad.map(Into::into).unwrap_or(QuadType::Null);
        let (e, f) = match (self.e, self.f, self.deg) {
            (Some(e), Some(f), _) => (e, f),
            (Some(e), None, Some(deg)) if deg % e == 0 => (e, deg / e),
            (None, Some(f), Some(deg)) if deg % f == 0 => (deg / f, f),
            (None, None, None) if quad == QuadType::Null => (1, 1),
            (None, None, Some(1)) => (1, 1),
            _ => return Err(ArgError::Missing("e and --f")),
        };
        if let Some(deg) = self.deg {
            if deg != e * f {
                return Err(ArgError::DegreeMismatch { deg, ef: e * f });
            }
        }
        Ok((e, f, quad))
    }

    pub fn query(&self) -> Result<Query, ArgError> {
        let (e, f, quad) = self.tower()?;
        Ok(Query {
            p: self.p.ok_or(ArgError::Missing("p"))?,
            f0: self.f0.unwrap_or(1),
            r: self.r.ok_or(ArgError::Missing("r"))?,
            d: self.d.ok_or(ArgError::Missing("d"))?,
            e,
            f,
            quad,
            alpha: self.alpha.ok_or(ArgError::Missing("alpha"))?.into(),
            zeta: self.zeta.unwrap_or(0),
            beta: self.beta_val.zip(self.beta_zeta),
            symplectic: self.symplectic,
            chi_trivial_on_norms: self.chi_trivial_on_norms,
        })
    }

    pub fn ranges(&self) -> Result<SweepRanges, ArgError> {
        if self.mode == Mode::Verify {
            let given = [
                ("primes", self.primes.is_some()),
                ("f0s", self.f0s.is_some()),
                ("max-two-n", self.max_two_n.is_some()),
                ("max-e", self.max_e.is_some()),
                ("max-f", self.max_f.is_some()),
                ("p", self.p.is_some()),
                ("r", self.r.is_some()),
                ("d", self.d.is_some()),
            ];
            if let Some((name, _)) = given.iter().find(|(_, set)| *set) {
                return Err(ArgError::Unused(name, self.mode));
            }
            return Ok(SweepRanges::default());
        }
        let mut ranges = SweepRanges::default();
        if let Some(p) = self.p {
            ranges.primes = vec![p];
        }
        if let Some(f0) = self.f0 {
            ranges.f0s = vec![f0];
        }
        if let (Some(r), Some(d)) = (self.r, self.d) {
            ranges.max_two_n = ranges.max_two_n.max(r * d);
        }
        if let Some(e) = self.e {
            ranges.max_e = ranges.max_e.max(e);
        }
        if let Some(f) = self.f {
            ranges.max_f = ranges.max_f.max(f);
        }
        if let Some(p) = &self.primes {
            ranges.primes = p.clone();
        }
        if let Some(f0s) = &self.f0s {
            ranges.f0s = f0s.clone();
        }
        if let Some(x) = self.max_two_n {
            ranges.max_two_n = x;
        }
        if let Some(x) = self.max_e {
            ranges.max_e = x;
        }
        if let Some(x) = self.max_f {
            ranges.max_f = x;
        }
        if let Some(q) = self.quad {
            ranges.quads = vec![q.into()];
        }
        Ok(ranges)
    }
}

impl Cli {
    /// Sweep-mode restriction by whatever single-tuple flags were given.
    pub fn admits(&self, t: &SweepTuple) -> bool {
        let alpha: Option<SquareClass> = self.alpha.map(Into::into);
        self.p.is_none_or(|p| p == t.p)
            && self.f0.is_none_or(|f0| f0 == t.f0)
            && self.r.is_none_or(|r| r == t.r)
            && self.d.is_none_or(|d| d == t.d)
            && self.e.is_none_or(|e| e == t.e)
            && self.f.is_none_or(|f| f == t.f)
            && self.deg.is_none_or(|deg| deg == t.e * t.f)
            && alpha.is_none_or(|a| a == t.alpha)
            && self.zeta.is_none_or(|z| z == t.zeta as i128)
            && self.beta_val.is_none_or(|v| v == t.beta_val)
            && self.beta_zeta.is_none_or(|z| z == t.beta_zeta as i128)
    }
}

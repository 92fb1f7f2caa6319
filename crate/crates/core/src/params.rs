//! Shared reconciliation configuration and everything derived from it.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::codes::{bh_sequence, bh_width, BchCode, BhSequence, CodeError, RsCode};
use crate::gf2::{full_rank_completion, BinaryMatrix, Field};

/// Largest supported C_ℓ redundancy; the position space has `2^r` entries.
pub const MAX_REDUNDANCY: usize = 24;
pub const MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("constraint `{name}` violated: {detail}")]
    Constraint { name: &'static str, detail: String },
    #[error("params file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn violated(name: &'static str, detail: impl Into<String>) -> ParamsError {
    ParamsError::Constraint {
        name,
        detail: detail.into(),
    }
}

/// The raw `(n, t, h, ℓ, I)` tuple. `index_set` is 1-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamsSpec {
    pub n: usize,
    pub t: usize,
    pub h: usize,
    pub ell: usize,
    pub index_set: Vec<usize>,
}

impl ParamsSpec {
    pub fn new(n: usize, t: usize, h: usize, ell: usize, index_set: Vec<usize>) -> Self {
        let mut index_set = index_set;
        index_set.sort_unstable();
        index_set.dedup();
        ParamsSpec {
            n,
            t,
            h,
            ell,
            index_set,
        }
    }

    /// `I = {1, …, ⌈lg n⌉}` when `t > 1`, empty otherwise.
    pub fn with_default_index(n: usize, t: usize, h: usize, ell: usize) -> Self {
        let index = if t > 1 { (1..=ceil_lg(n)).collect() } else { Vec::new() };
        Self::new(n, t, h, ell, index)
    }

    /// Canonical params file text; the fingerprint hashes exactly these bytes.
    pub fn canonical(&self) -> String {
        let idx: Vec<String> = self.index_set.iter().map(|i| i.to_string()).collect();
        format!(
            "n={}\nt={}\nh={}\nell={}\nI={}\n",
            self.n,
            self.t,
            self.h,
            self.ell,
            idx.join(",")
        )
    }

    pub fn fingerprint(&self) -> [u8; 32] {
        Sha256::digest(self.canonical().as_bytes()).into()
    }

    pub fn build(&self) -> Result<Params, ParamsError> {
        Params::build(self)
    }
}

impl fmt::Display for ParamsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for ParamsSpec {
    type Err = ParamsError;

    /// Parses `key=value` lines; blank lines and `#` comments are ignored.
    /// All five keys are required, in any order.
    fn from_str(s: &str) -> Result<Self, ParamsError> {
        let mut vals: [Option<usize>; 4] = [None; 4];
        let mut index: Option<Vec<usize>> = None;
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ParamsError::Parse {
                line: lineno + 1,
                msg,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            let slot = match k {
                "n" => 0,
                "t" => 1,
                "h" => 2,
                "ell" => 3,
                "I" => {
                    if index.is_some() {
                        return Err(err("duplicate key `I`".into()));
                    }
                    let parsed: Result<Vec<usize>, _> = v
                        .split(',')
                        .map(str::trim)
                        .filter(|x| !x.is_empty())
                        .map(str::parse)
                        .collect();
                    index = Some(parsed.map_err(|e| err(format!("bad index list: {e}")))?);
                    continue;
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            };
            if vals[slot].is_some() {
                return Err(err(format!("duplicate key `{k}`")));
            }
            vals[slot] = Some(v.parse().map_err(|e| err(format!("bad value for `{k}`: {e}")))?);
        }
        let missing = |name: &str| ParamsError::Parse {
            line: 0,
            msg: format!("missing key `{name}`"),
        };
        Ok(ParamsSpec::new(
            vals[0].ok_or_else(|| missing("n"))?,
            vals[1].ok_or_else(|| missing("t"))?,
            vals[2].ok_or_else(|| missing("h"))?,
            vals[3].ok_or_else(|| missing("ell"))?,
            index.ok_or_else(|| missing("I"))?,
        ))
    }
}

pub(crate) fn ceil_lg(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Derived objects for the single-block scheme.
#[derive(Clone, Debug)]
pub struct SingleScheme {
    /// C_comp: binary BCH code of length N correcting h errors.
    pub comp: BchCode,
    /// GF(2^m) with `m = max(n − r, B_h width)`; `H̄_ℓ·x` is zero-padded into it.
    pub digest_field: Field,
    pub b: BhSequence,
    /// H̄_ℓ, `(n−r) × n`.
    pub hbar: BinaryMatrix,
    /// Inverse of H_F = [H_ℓ; H̄_ℓ].
    pub hf_inv: BinaryMatrix,
}

/// Derived objects for the general multi-block scheme.
#[derive(Clone, Debug)]
pub struct GeneralScheme {
    pub nbar: usize,
    /// Ī as 0-based coordinates, ascending.
    pub complement: Vec<usize>,
    /// GF(2^(|I|+1)), home of β in `f`.
    pub f_field: Field,
    /// GF(Q), `Q = 2^(t(|I|+1))`.
    pub q_field: Field,
    /// C_comp: Reed–Solomon code of length N and distance 2th+1.
    pub rs: RsCode,
    /// GF(2^n̄).
    pub big: Field,
    pub gamma: BhSequence,
}

#[derive(Clone, Debug)]
pub enum Scheme {
    Single(Box<SingleScheme>),
    General(Box<GeneralScheme>),
}

/// Validated parameters plus every derived code and field. Both hosts
/// building from the same [`ParamsSpec`] obtain identical objects.
#[derive(Clone, Debug)]
pub struct Params {
    spec: ParamsSpec,
    /// I as 0-based coordinates.
    index: Vec<usize>,
    c_ell: BchCode,
    scheme: Scheme,
    fingerprint: [u8; 32],
}

impl Params {
    pub fn build(spec: &ParamsSpec) -> Result<Params, ParamsError> {
        let &ParamsSpec { n, t, h, ell, .. } = spec;
        if !(3..=MAX_N).contains(&n) {
            return Err(violated("n_range", format!("need 3 <= n <= {MAX_N}, got n={n}")));
        }
        if t < 1 {
            return Err(violated("t_min", "t must be at least 1"));
        }
        if h < 1 {
            return Err(violated("h_min", "h must be at least 1"));
        }
        if !(1..n).contains(&ell) {
            return Err(violated("ell_range", format!("need 1 <= ell < n, got ell={ell}")));
        }
        if 2 * ell + 1 > n {
            return Err(violated(
                "ell_distance",
                format!("C_ell needs 2*ell+1 <= n, got {} > {n}", 2 * ell + 1),
            ));
        }
        let mut sorted = spec.index_set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != spec.index_set.len() || sorted != spec.index_set {
            return Err(violated("index_sorted", "I must be sorted without repeats"));
        }
        if let Some(&bad) = sorted.iter().find(|&&i| i == 0 || i > n) {
            return Err(violated("index_range", format!("index {bad} outside 1..={n}")));
        }
        let index: Vec<usize> = sorted.iter().map(|i| i - 1).collect();
        if t > 1 && index.len() < ceil_lg(t).max(1) {
            return Err(violated(
                "index_size",
                format!("t={t} needs |I| >= {}", ceil_lg(t).max(1)),
            ));
        }
        if index.len() >= n {
            return Err(violated("index_size", "I must leave at least one coordinate outside"));
        }

        let c_ell = BchCode::new(n, ell)?;
        let r = c_ell.redundancy();
        if r > MAX_REDUNDANCY {
            return Err(violated(
                "redundancy_limit",
                format!("C_ell redundancy {r} exceeds {MAX_REDUNDANCY}"),
            ));
        }
        let big_n = 1usize << r;

        let scheme = if index.is_empty() {
            Scheme::Single(Box::new(build_single(n, h, &c_ell, big_n)?))
        } else {
            Scheme::General(Box::new(build_general(n, t, h, &index, r, big_n)?))
        };
        Ok(Params {
            spec: spec.clone(),
            index,
            c_ell,
            scheme,
            fingerprint: spec.fingerprint(),
        })
    }

    pub fn spec(&self) -> &ParamsSpec {
        &self.spec
    }
    pub fn n(&self) -> usize {
        self.spec.n
    }
    pub fn t(&self) -> usize {
        self.spec.t
    }
    pub fn h(&self) -> usize {
        self.spec.h
    }
    pub fn ell(&self) -> usize {
        self.spec.ell
    }
    /// I as 0-based coordinates.
    pub fn index(&self) -> &[usize] {
        &self.index
    }
    pub fn c_ell(&self) -> &BchCode {
        &self.c_ell
    }
    /// Redundancy of C_ℓ.
    pub fn r(&self) -> usize {
        self.c_ell.redundancy()
    }
    /// Size of the position space, `2^r`.
    pub fn big_n(&self) -> usize {
        1 << self.r()
    }
    pub fn nbar(&self) -> usize {
        self.spec.n - self.index.len()
    }
    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }
    pub fn single(&self) -> Option<&SingleScheme> {
        match &self.scheme {
            Scheme::Single(s) => Some(s),
            Scheme::General(_) => None,
        }
    }
    pub fn general(&self) -> Option<&GeneralScheme> {
        match &self.scheme {
            Scheme::General(g) => Some(g),
            Scheme::Single(_) => None,
        }
    }
    pub fn fingerprint(&self) -> &[u8; 32] {
        &self.fingerprint
    }

    /// Exact digest size in bits for the selected scheme.
    pub fn digest_bits(&self) -> usize {
        match &self.scheme {
            Scheme::Single(s) => s.comp.redundancy() + s.digest_field.degree(),
            Scheme::General(g) => g.rs.redundancy() * g.rs.field().degree() + self.t() * self.t() * g.nbar,
        }
    }
}

fn build_single(n: usize, h: usize, c_ell: &BchCode, big_n: usize) -> Result<SingleScheme, ParamsError> {
    let r = c_ell.redundancy();
    if 2 * h + 1 > big_n {
        return Err(violated(
            "comp_distance",
            format!("C_comp needs 2h+1 <= N, got {} > {big_n}", 2 * h + 1),
        ));
    }
    let width = bh_width(big_n, h);
    let comp = BchCode::new(big_n, h)?;
    let digest_field = Field::new(width.max(n - r)).map_err(CodeError::from)?;
    let b = bh_sequence(big_n, h, &digest_field)?;
    let h_ell = c_ell.parity_matrix();
    let hbar = full_rank_completion(&h_ell).map_err(CodeError::from)?;
    let hf = h_ell.stack(&hbar).map_err(CodeError::from)?;
    let hf_inv = hf.inverse().map_err(CodeError::from)?;
    Ok(SingleScheme {
        comp,
        digest_field,
        b,
        hbar,
        hf_inv,
    })
}

fn build_general(
    n: usize,
    t: usize,
    h: usize,
    index: &[usize],
    r: usize,
    big_n: usize,
) -> Result<GeneralScheme, ParamsError> {
    let nbar = n - index.len();
    let f_deg = index.len() + 1;
    let q_deg = t * f_deg;
    if q_deg > nbar {
        return Err(violated(
            "f_width",
            format!("t(|I|+1) = {q_deg} exceeds nbar = {nbar}"),
        ));
    }
    let d = 2 * t * h + 1;
    if d > big_n {
        return Err(violated(
            "comp_distance",
            format!("C_comp needs 2th+1 <= N, got {d} > {big_n}"),
        ));
    }
    let width = bh_width(big_n, t * h);
    if width > nbar {
        return Err(violated(
            "gamma_width",
            format!("gamma width {width} exceeds nbar = {nbar}"),
        ));
    }
    let a = q_deg.max(r + 1);
    let rs_field = Field::new(a).map_err(CodeError::from)?;
    let rs = RsCode::new(&rs_field, big_n, d)?;
    let big = Field::new(nbar).map_err(CodeError::from)?;
    let gamma = bh_sequence(big_n, t * h, &big)?;
    let complement = (0..n).filter(|i| index.binary_search(i).is_err()).collect();
    Ok(GeneralScheme {
        nbar,
        complement,
        f_field: Field::new(f_deg).map_err(CodeError::from)?,
        q_field: Field::new(q_deg).map_err(CodeError::from)?,
        rs,
        big,
        gamma,
    })
}

pub fn params_build(spec: &ParamsSpec) -> Result<Params, ParamsError> {
    Params::build(spec)
}

/// Upper estimate `min(1, t·h²·ℓ·|I|/n + t²·h²/2^|I|)` on the chance that
/// random blocks violate the I-projection condition.
pub fn cond4_violation_prob(spec: &ParamsSpec) -> f64 {
    let (n, t, h, ell) = (spec.n as f64, spec.t as f64, spec.h as f64, spec.ell as f64);
    let i = spec.index_set.len() as f64;
    let p = t * h * h * ell * i / n + t * t * h * h / 2f64.powf(i);
    p.min(1.0)
}

//! Command implementations and JSON record types for the `cantorlab`
//! binary. Every command is a pure function of its arguments; `main.rs`
//! only parses flags and maps errors to exit codes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use cantorlab_core::critical::{classify, critical_table, Regime, RegimeVerdict};
use cantorlab_core::expansion::{quasi_greedy, DEFAULT_DEPTH_CAP};
use cantorlab_core::rational::{to_decimal, to_fraction, Rounding};
use cantorlab_core::selfsimilar::{build_ifs, dims, in_s, verify_ifs, IfsCheck};
use cantorlab_core::uniqueness::{
    count_unique_prefixes, enum_codes, explicit_neighborhoods, unique_exact, unique_lex, TranslationCode,
};
use cantorlab_core::{admissible, Alphabet, EpSequence, Error, Params, Rat, RatInterval, Result, Verdict};
use serde::{Deserialize, Serialize};

/// Decimal places used for enclosure endpoints in JSON.
pub const JSON_DIGITS: usize = 15;

/// Environment variable overriding the lexicographic depth cap.
pub const DEPTH_CAP_ENV: &str = "CANTORLAB_DEPTH_CAP";

pub fn default_depth_cap() -> usize {
    DEFAULT_DEPTH_CAP
}

/// Outward-rounded decimal rendering of an enclosure, with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
    pub lo_exact: String,
    pub hi_exact: String,
}

impl From<&RatInterval> for IntervalJson {
    fn from(i: &RatInterval) -> Self {
        IntervalJson {
            lo: to_decimal(&i.lo, JSON_DIGITS, Rounding::Floor),
            hi: to_decimal(&i.hi, JSON_DIGITS, Rounding::Ceil),
            lo_exact: to_fraction(&i.lo),
            hi_exact: to_fraction(&i.hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalRowJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub beta_c: IntervalJson,
    pub alpha_c: IntervalJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Table,
    Csv,
    Json,
}

fn five(i: &RatInterval) -> String {
    to_decimal(&i.midpoint(), 5, Rounding::Nearest)
}

/// `critical-points`: `β_c` and `α_c` for `N` in `n_from..=n_to`.
pub fn critical_points(n_from: u32, n_to: u32, tol: &Rat, format: TableFormat) -> Result<String> {
    if n_from < 2 || n_to < n_from {
        return Err(Error::InvalidParams(format!("bad range {n_from}..={n_to}")));
    }
    let rows = critical_table(n_from..=n_to, tol)?;
    let mut out = String::new();
    match format {
        TableFormat::Table => {
            write!(out, "{:<6}", "N").unwrap();
            for r in &rows {
                write!(out, "{:>9}", r.n_parts).unwrap();
            }
            write!(out, "\n{:<6}", "β_c").unwrap();
            for r in &rows {
                write!(out, "{:>9}", five(&r.beta_c.interval)).unwrap();
            }
            write!(out, "\n{:<6}", "α_c").unwrap();
            for r in &rows {
                write!(out, "{:>9}", five(&r.alpha_c)).unwrap();
            }
            out.push('\n');
        }
        TableFormat::Csv => {
            out.push_str("N,beta_c_lo,beta_c_hi,alpha_c_lo,alpha_c_hi\n");
            for r in &rows {
                let b = IntervalJson::from(&r.beta_c.interval);
                let a = IntervalJson::from(&r.alpha_c);
                writeln!(out, "{},{},{},{},{}", r.n_parts, b.lo, b.hi, a.lo, a.hi).unwrap();
            }
        }
        TableFormat::Json => {
            let json: Vec<CriticalRowJson> = rows
                .iter()
                .map(|r| CriticalRowJson {
                    n: r.n_parts,
                    beta_c: (&r.beta_c.interval).into(),
                    alpha_c: (&r.alpha_c).into(),
                })
                .collect();
            out = serde_json::to_string_pretty(&json).expect("serializable");
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn parse_code(n: u32, text: &str) -> Result<EpSequence> {
    EpSequence::parse(Alphabet::Signed(n), text)
}

fn verdict_str(v: Verdict) -> String {
    v.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UniqueJson {
    /// `t` to 15 decimals.
    pub t: String,
    pub t_exact: String,
    pub exact: bool,
    /// `yes`, `no` or `undetermined`.
    pub lex: String,
    /// Number of leading depths at which enumeration found a single prefix.
    pub enum_depth_consistent: usize,
}

/// `unique`: all three deciders for one code.
pub fn unique(p: &Params, code: EpSequence, depth: usize, depth_cap: usize) -> Result<(UniqueJson, Verdict)> {
    let tc = TranslationCode::new(code, p.clone())?;
    let lex = unique_lex(&tc, depth_cap)?;
    let enumeration = enum_codes(tc.t(), p, depth, 0)?;
    Ok((
        UniqueJson {
            t: to_decimal(tc.t(), JSON_DIGITS, Rounding::Nearest),
            t_exact: to_fraction(tc.t()),
            exact: unique_exact(&tc),
            lex: verdict_str(lex),
            enum_depth_consistent: enumeration.unique_through_depth(),
        },
        lex,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessJson {
    pub q: usize,
    #[serde(rename = "I")]
    pub i: Vec<i32>,
    #[serde(rename = "J")]
    pub j: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IfsJson {
    pub ratio: String,
    pub offsets: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelfSimilarJson {
    pub t: String,
    pub t_exact: String,
    pub unique: bool,
    pub member: bool,
    pub witness: Option<WitnessJson>,
    pub ifs: Option<IfsJson>,
    /// `verified` or `mismatch at <p/q>`.
    pub verification: Option<String>,
}

/// `selfsimilar`: membership in `𝒮`, the witness and the generating IFS.
pub fn selfsimilar(p: &Params, code: EpSequence, depth: usize) -> Result<SelfSimilarJson> {
    let tc = TranslationCode::new(code, p.clone())?;
    let mut out = SelfSimilarJson {
        t: to_decimal(tc.t(), JSON_DIGITS, Rounding::Nearest),
        t_exact: to_fraction(tc.t()),
        unique: unique_exact(&tc),
        member: false,
        witness: None,
        ifs: None,
        verification: None,
    };
    if !out.unique {
        return Ok(out);
    }
    if let Some(w) = in_s(&tc)? {
        let spec = build_ifs(&w, p);
        out.member = true;
        out.verification = Some(match verify_ifs(&spec, &tc, depth)? {
            IfsCheck::Verified => "verified".into(),
            IfsCheck::Mismatch { point } => format!("mismatch at {}", to_fraction(&point)),
        });
        out.witness = Some(WitnessJson {
            q: w.q,
            i: w.i.digits().to_vec(),
            j: w.j.digits().to_vec(),
        });
        out.ifs = Some(IfsJson {
            ratio: to_fraction(&spec.ratio),
            offsets: spec.offsets.iter().map(to_fraction).collect(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimsJson {
    pub dim_h: String,
    pub dim_p: String,
}

/// `dims`: Hausdorff and packing dimension, 12 decimals.
pub fn dimensions(p: &Params, code: EpSequence) -> Result<DimsJson> {
    let tc = TranslationCode::new(code, p.clone())?;
    let report = dims(&tc)?;
    Ok(DimsJson {
        dim_h: to_decimal(&report.dim_h.midpoint(), 12, Rounding::Nearest),
        dim_p: to_decimal(&report.dim_p.midpoint(), 12, Rounding::Nearest),
    })
}

/// `codes`: the prefix tree of `Ω_±N`-codes of `t`, one node per line.
pub fn codes(p: &Params, t: &Rat, depth: usize, node_cap: usize) -> Result<String> {
    let e = enum_codes(t, p, depth, node_cap)?;
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); e.nodes.len()];
    let mut roots = Vec::new();
    for (i, node) in e.nodes.iter().enumerate() {
        match node.parent {
            Some(parent) => children[parent].push(i),
            None => roots.push(i),
        }
    }
    let mut out = format!("t = {} ({})\n", to_fraction(t), to_decimal(t, 10, Rounding::Nearest));
    let mut stack: Vec<usize> = roots.into_iter().rev().collect();
    while let Some(i) = stack.pop() {
        let node = &e.nodes[i];
        writeln!(out, "{}{}", "  ".repeat(node.depth), node.digit).unwrap();
        stack.extend(children[i].iter().rev());
    }
    let counts: Vec<String> = e.counts.iter().map(u128::to_string).collect();
    writeln!(out, "counts: {}", counts.join(" ")).unwrap();
    if e.counts_truncated {
        writeln!(out, "counts stopped at depth {}: too many distinct remainders", e.counts.len()).unwrap();
    }
    if e.tree_truncated {
        writeln!(out, "tree truncated at {node_cap} nodes").unwrap();
    }
    Ok(out)
}

fn join(digits: &[i32]) -> String {
    digits.iter().map(i32::to_string).collect::<Vec<_>>().join(",")
}

/// `lambda`: the first `len` digits of `λ` over `Ω_m`.
pub fn lambda(m: u32, len: usize) -> Result<String> {
    if m < 2 {
        return Err(Error::InvalidParams("alphabet size must be at least 2".into()));
    }
    Ok(join(&admissible::lambda(m, len)) + "\n")
}

/// `expand`: quasi-greedy expansion of `x` in base `1/β` over `Ω_m`.
pub fn expand(x: &Rat, beta: &Rat, m: u32, len: usize) -> Result<String> {
    Ok(join(&quasi_greedy(x, beta, m, len)?) + "\n")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyJson {
    #[serde(rename = "N")]
    pub n: u32,
    pub beta: String,
    #[serde(rename = "U")]
    pub u: RegimeVerdict,
    #[serde(rename = "S")]
    pub s: RegimeVerdict,
}

/// `classify`: regimes of `𝒰` and `𝒮`.
pub fn classify_params(p: &Params) -> Result<ClassifyJson> {
    let (u, s): (Regime, Regime) = classify(p)?;
    Ok(ClassifyJson {
        n: p.n(),
        beta: to_fraction(p.beta()),
        u: u.verdict,
        s: s.verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnumerateJson {
    /// `counts[k-1]`: admissible words of length `k`.
    pub counts: Vec<u64>,
    /// `log2(count) / depth` at the last depth.
    pub growth_bits: f64,
}

/// `enumerate`: words over `Ω_{2N-1}` passing the finite uniqueness test.
pub fn enumerate(p: &Params, depth: usize) -> Result<EnumerateJson> {
    if depth == 0 || depth > 24 {
        return Err(Error::InvalidParams("depth must be in 1..=24".into()));
    }
    let counts: Vec<u64> = count_unique_prefixes(p, depth)?.into_iter().map(|c| c as u64).collect();
    let last = *counts.last().unwrap() as f64;
    Ok(EnumerateJson {
        growth_bits: last.log2() / depth as f64,
        counts,
    })
}

const WIDTH: f64 = 1000.0;
const ROW: f64 = 40.0;
const MARGIN: f64 = 20.0;

/// `figure`: `levels` rows of components of `Γ` and `Γ + t` as an SVG
/// document. Components `φ_J([0,1])` meeting two translated components are
/// drawn in red.
pub fn figure_svg(p: &Params, t: &Rat, levels: usize) -> Result<String> {
    if levels == 0 || levels > 8 {
        return Err(Error::InvalidParams("levels must be in 1..=8".into()));
    }
    let rows = 2 * levels;
    let height = ROW * rows as f64;
    let lo = cantorlab_core::rational::to_f64(t).min(0.0);
    let hi = 1.0 + cantorlab_core::rational::to_f64(t).max(0.0);
    let x = |v: &Rat| MARGIN + (cantorlab_core::rational::to_f64(v) - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\">\n"
    );
    let c = p.spacing();
    let beta = p.beta();
    for level in 1..=levels {
        let width = cantorlab_core::rational::pow(beta, level);
        let hoods = explicit_neighborhoods(t, p, level)?;
        let left = |w: &[i32]| {
            let mut acc = Rat::from_integer(0.into());
            let mut scale = c.clone();
            for &d in w {
                acc += &scale * Rat::from_integer(d.into());
                scale *= beta;
            }
            acc
        };
        let base_y = ROW * (2 * (level - 1)) as f64;
        for (j, neighbors) in &hoods {
            let a = left(j);
            let fill = if neighbors.len() >= 2 { "#c0392b" } else { "#222222" };
            writeln!(
                svg,
                "  <rect class=\"gamma\" x=\"{:.3}\" y=\"{:.1}\" width=\"{:.3}\" height=\"12\" fill=\"{fill}\"/>",
                x(&a),
                base_y + 10.0,
                x(&(&a + &width)) - x(&a)
            )
            .unwrap();
        }
        for (j, _) in &hoods {
            let a = left(j) + t;
            writeln!(
                svg,
                "  <rect class=\"translate\" x=\"{:.3}\" y=\"{:.1}\" width=\"{:.3}\" height=\"12\" fill=\"#2e86c1\"/>",
                x(&a),
                base_y + ROW + 10.0,
                x(&(&a + &width)) - x(&a)
            )
            .unwrap();
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write `contents` to `path` through a temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cantorlab_core::rational::rat;

    #[test]
    fn table_reproduces_five_decimals() {
        let text = critical_points(2, 4, &rat(1, 10_000_000), TableFormat::Table).unwrap();
        assert!(text.contains("0.39433") && text.contains("0.27130") && text.contains("0.21004"));
        assert!(text.contains("0.38197") && text.contains("0.26795") && text.contains("0.20871"));
    }

    #[test]
    fn figure_has_expected_bars() {
        let p = Params::new(3, rat(28, 100)).unwrap();
        let svg = figure_svg(&p, &rat(19, 100), 1).unwrap();
        assert_eq!(svg.matches("class=\"gamma\"").count(), 3);
        assert_eq!(svg.matches("#c0392b").count(), 2);
        let svg = figure_svg(&p, &rat(19, 100), 3).unwrap();
        assert_eq!(svg.matches("class=\"translate\"").count(), 3 + 9 + 27);
        assert!(svg.contains("height=\"240\""));
    }
}

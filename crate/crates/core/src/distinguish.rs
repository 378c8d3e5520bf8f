//! Deciding whether two encodings differ up to row permutation (and
//! optionally up to column signs and global scaling), plus category
//! surveys over collections of pairs.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encode::{self, AutoConvert, EncodingSpec};
use crate::encoding::{ColumnFlag, EncodingMatrix};
use crate::format;

/// Rows rounded to multiples of `tol`, then sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// Entries are the integer multiples `round(x / tol)`.
    pub rows: Vec<Vec<f64>>,
    pub tol: f64,
    pub normalizations: Vec<String>,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn round_to(x: f64, tol: f64) -> f64 {
    let r = (x / tol).round();
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn canonical_rows(rows: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| round_to(x, tol)).collect()).collect();
    out.sort_by(|a, b| lex(a, b));
    out
}

pub fn canonicalize(m: &EncodingMatrix, tol: f64) -> CanonicalForm {
    CanonicalForm { rows: canonical_rows(&m.to_rows(), tol), tol, normalizations: Vec::new() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Also accept `A = c·B` for a scalar `c ≥ 0`.
    pub scaling: bool,
    /// Remove per-column sign ambiguity (eigenvector encodings).
    pub sign: bool,
}

impl CompareOptions {
    /// Sign handling switched on for eigenvector encodings.
    pub fn for_kind(kind: &str) -> Self {
        CompareOptions { scaling: false, sign: kind.ends_with("lape") }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinguishable,
    Indistinguishable,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeResult {
    pub mode: String,
    pub equivalent: bool,
}

/// A simple statistic on which the two encodings disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub statistic: String,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub encoding: String,
    pub verdict: Verdict,
    /// Every mode that was evaluated. The verdict follows the loosest one
    /// requested (scaling if enabled, else plain).
    pub modes: Vec<ModeResult>,
    pub sign_normalized: bool,
    pub witness: Option<Witness>,
    pub tolerance: f64,
    /// Columns whose comparison went through a basis-independent or
    /// sign-free substitute and may therefore hide a real difference.
    pub lossy_columns: Vec<usize>,
}

/// Sign-normalized copy of `m` plus the columns where information was lost.
fn sign_normalize(m: &EncodingMatrix, tol: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut cols: Vec<Vec<f64>> = (0..m.ncols()).map(|j| m.column(j)).collect();
    let mut lossy = Vec::new();
    for (j, col) in cols.iter_mut().enumerate() {
        if m.column_flags.get(j) == Some(&ColumnFlag::Degenerate) {
            if let Some(Some(p)) = m.column_projectors.get(j) {
                *col = p.clone();
            } else {
                col.iter_mut().for_each(|x| *x = x.abs());
            }
            lossy.push(j);
            continue;
        }
        let mut up = col.clone();
        up.sort_by(f64::total_cmp);
        let mut down: Vec<f64> = col.iter().map(|x| -x).collect();
        down.sort_by(f64::total_cmp);
        let first_diff = up.iter().zip(&down).find(|(a, b)| (*a - *b).abs() > tol);
        match first_diff {
            None => {
                col.iter_mut().for_each(|x| *x = x.abs());
                lossy.push(j);
            }
            Some((a, b)) if a < b => col.iter_mut().for_each(|x| *x = -*x),
            Some(_) => {}
        }
    }
    let rows = (0..m.nrows()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    (rows, lossy)
}

/// Largest number of row pairs scanned by the tolerant matcher.
const MATCH_BUDGET: usize = 50_000_000;

/// Equality up to row permutation: exact on rounded forms, otherwise a
/// bipartite matching of rows that agree entrywise within `tol`.
fn rows_equivalent(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if canonical_rows(a, tol) == canonical_rows(b, tol) {
        return true;
    }
    let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| (p - q).abs() <= tol);
    let mut sa: Vec<&Vec<f64>> = a.iter().collect();
    let mut sb: Vec<&Vec<f64>> = b.iter().collect();
    sa.sort_by(|x, y| lex(x, y));
    sb.sort_by(|x, y| lex(x, y));
    if sa.iter().zip(&sb).all(|(x, y)| close(x, y)) {
        return true;
    }
    let n = a.len();
    if n.saturating_mul(n) > MATCH_BUDGET {
        return false;
    }
    let adj: Vec<Vec<usize>> = sa.iter().map(|x| (0..n).filter(|&j| close(x, sb[j])).collect()).collect();
    if adj.iter().any(|l| l.is_empty()) {
        return false;
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..n).all(|u| augment(u, &adj, &mut vec![false; n], &mut owner))
}

fn max_abs(rows: &[Vec<f64>]) -> f64 {
    rows.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

fn scaled(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let s = max_abs(rows);
    rows.iter().map(|r| r.iter().map(|x| x / s).collect()).collect()
}

/// `A = c·B` for some `c ≥ 0` up to row permutation. An all-zero matrix
/// is `0·B`, so it is scaling-equivalent to any matrix of its shape.
fn scaling_equivalent(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ma, mb) = (max_abs(a), max_abs(b));
    if ma <= tol || mb <= tol {
        return true;
    }
    rows_equivalent(&scaled(a), &scaled(b), tol)
}

fn witness(a: &[Vec<f64>], b: &[Vec<f64>], cols: usize, tol: f64) -> Option<Witness> {
    let w = |s: String, x: f64, y: f64| Some(Witness { statistic: s, a: x, b: y });
    if a.len() != b.len() {
        return w("rows".into(), a.len() as f64, b.len() as f64);
    }
    let (ma, mb) = (max_abs(a), max_abs(b));
    if (ma - mb).abs() > tol {
        return w("max_abs".into(), ma, mb);
    }
    for j in 0..cols {
        let col = |m: &[Vec<f64>]| -> (f64, f64, f64) {
            m.iter().fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, s), r| (lo.min(r[j]), hi.max(r[j]), s + r[j]))
        };
        let (la, ha, sa) = col(a);
        let (lb, hb, sb) = col(b);
        if (ha - hb).abs() > tol {
            return w(format!("max of column {j}"), ha, hb);
        }
        if (la - lb).abs() > tol {
            return w(format!("min of column {j}"), la, lb);
        }
        if (sa - sb).abs() > tol * a.len().max(1) as f64 {
            return w(format!("sum of column {j}"), sa, sb);
        }
    }
    None
}

/// Compares two encodings of the same kind. See [`CompareOptions`].
pub fn compare(a: &EncodingMatrix, b: &EncodingMatrix, opts: &CompareOptions, tol: f64) -> ComparisonReport {
    let mut report = ComparisonReport {
        encoding: a.kind.clone(),
        verdict: Verdict::Distinguishable,
        modes: Vec::new(),
        sign_normalized: opts.sign,
        witness: None,
        tolerance: tol,
        lossy_columns: Vec::new(),
    };
    if a.ncols() != b.ncols() || a.nrows() != b.nrows() {
        report.witness = Some(if a.ncols() != b.ncols() {
            Witness { statistic: "columns".into(), a: a.ncols() as f64, b: b.ncols() as f64 }
        } else {
            Witness { statistic: "rows".into(), a: a.nrows() as f64, b: b.nrows() as f64 }
        });
        report.modes.push(ModeResult { mode: "plain".into(), equivalent: false });
        return report;
    }
    let (ra, rb) = if opts.sign {
        let (ra, la) = sign_normalize(a, tol);
        let (rb, lb) = sign_normalize(b, tol);
        let mut lossy: Vec<usize> = la.into_iter().chain(lb).collect();
        lossy.sort_unstable();
        lossy.dedup();
        report.lossy_columns = lossy;
        (ra, rb)
    } else {
        (a.to_rows(), b.to_rows())
    };
    let plain = rows_equivalent(&ra, &rb, tol);
    report.modes.push(ModeResult { mode: "plain".into(), equivalent: plain });
    let decisive = if opts.scaling {
        let s = plain || scaling_equivalent(&ra, &rb, tol);
        report.modes.push(ModeResult { mode: "scaling".into(), equivalent: s });
        s
    } else {
        plain
    };
    report.verdict = if !decisive {
        Verdict::Distinguishable
    } else if !report.lossy_columns.is_empty() {
        Verdict::Indeterminate
    } else {
        Verdict::Indistinguishable
    };
    if !decisive {
        let (wa, wb) = if opts.scaling && max_abs(&ra) > 0.0 && max_abs(&rb) > 0.0 {
            (scaled(&ra), scaled(&rb))
        } else {
            (ra, rb)
        };
        report.witness = witness(&wa, &wb, a.ncols(), tol).or_else(|| {
            Some(Witness { statistic: "row multiset".into(), a: f64::NAN, b: f64::NAN })
        });
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub category: String,
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest line {line}: expected `category,fileA,fileB`")]
    BadLine { line: usize },
    #[error("reading manifest: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses `category,fileA,fileB` lines. Relative paths resolve against
/// `base`. An optional header line and `#` comments are skipped.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(ManifestError::BadLine { line: idx + 1 });
        }
        if out.is_empty() && fields == ["category", "fileA", "fileB"] {
            continue;
        }
        out.push(ManifestEntry {
            category: fields[0].to_string(),
            a: base.join(fields[1]),
            b: base.join(fields[2]),
        });
    }
    Ok(out)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let text = std::fs::read_to_string(path)?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub encoding: String,
    pub category: String,
    pub pairs: usize,
    pub distinguished: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyFailure {
    pub pair: usize,
    pub category: String,
    /// `None` when the pair itself could not be loaded.
    pub encoding: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SurveyResult {
    pub records: Vec<SurveyRecord>,
    pub failures: Vec<SurveyFailure>,
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    pub compare: CompareOptions,
    /// Overrides each encoding's default tolerance.
    pub tol: Option<f64>,
    /// Conversion used by specs that do not set their own.
    pub default_convert: AutoConvert,
}

impl SurveyResult {
    /// CSV report, one record per encoding × category, failures as
    /// trailing comment lines.
    pub fn render(&self) -> String {
        let mut out = String::from("encoding,category,pairs,distinguished,percent\n");
        for r in &self.records {
            writeln!(out, "{},{},{},{},{:.2}", r.encoding, r.category, r.pairs, r.distinguished, r.percent).unwrap();
        }
        for f in &self.failures {
            let enc = f.encoding.as_deref().unwrap_or("*");
            writeln!(out, "# excluded: pair {} ({}) encoding {}: {}", f.pair, f.category, enc, f.message).unwrap();
        }
        out
    }
}

enum Outcome {
    Verdict(Verdict),
    Failed(String),
}

/// Percentage of pairs each encoding distinguishes, per category. Pairs
/// that fail to load or encode are excluded from the denominators and
/// listed as failures.
pub fn survey(entries: &[ManifestEntry], specs: &[EncodingSpec], opts: &SurveyOptions) -> SurveyResult {
    let outcomes: Vec<Result<Vec<Outcome>, String>> = entries
        .par_iter()
        .map(|entry| {
            let a = format::read_file(&entry.a).map_err(|e| format!("{}: {e}", entry.a.display()))?;
            let b = format::read_file(&entry.b).map_err(|e| format!("{}: {e}", entry.b.display()))?;
            Ok(specs
                .iter()
                .map(|spec| {
                    let mut spec = spec.clone();
                    if spec.auto_convert == AutoConvert::None {
                        spec.auto_convert = opts.default_convert;
                    }
                    let ea = encode::encode(&a.input, &spec);
                    let eb = encode::encode(&b.input, &spec);
                    match (ea, eb) {
                        (Ok(ea), Ok(eb)) => {
                            let tol = opts.tol.unwrap_or(spec.kind.default_tolerance());
                            let mut copts = opts.compare;
                            copts.sign |= spec.kind.is_eigenvector_kind();
                            Outcome::Verdict(compare(&ea, &eb, &copts, tol).verdict)
                        }
                        (Err(e), _) | (_, Err(e)) => Outcome::Failed(e.to_string()),
                    }
                })
                .collect())
        })
        .collect();

    let mut categories: Vec<&str> = Vec::new();
    for e in entries {
        if !categories.contains(&e.category.as_str()) {
            categories.push(&e.category);
        }
    }
    let mut result = SurveyResult::default();
    for (idx, (entry, outcome)) in entries.iter().zip(&outcomes).enumerate() {
        match outcome {
            Err(msg) => result.failures.push(SurveyFailure {
                pair: idx,
                category: entry.category.clone(),
                encoding: None,
                message: msg.clone(),
            }),
            Ok(per_spec) => {
                for (spec, o) in specs.iter().zip(per_spec) {
                    if let Outcome::Failed(msg) = o {
                        result.failures.push(SurveyFailure {
                            pair: idx,
                            category: entry.category.clone(),
                            encoding: Some(spec.to_string()),
                            message: msg.clone(),
                        });
                    }
                }
            }
        }
    }
    for (s, spec) in specs.iter().enumerate() {
        for cat in &categories {
            let mut pairs = 0;
            let mut distinguished = 0;
            for (entry, outcome) in entries.iter().zip(&outcomes) {
                if entry.category != *cat {
                    continue;
                }
                if let Ok(per_spec) = outcome {
                    if let Outcome::Verdict(v) = &per_spec[s] {
                        pairs += 1;
                        distinguished += usize::from(*v == Verdict::Distinguishable);
                    }
                }
            }
            let percent = if pairs == 0 { 0.0 } else { 100.0 * distinguished as f64 / pairs as f64 };
            result.records.push(SurveyRecord {
                encoding: spec.to_string(),
                category: cat.to_string(),
                pairs,
                distinguished,
                percent,
            });
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: Vec<Vec<f64>>) -> EncodingMatrix {
        let c = rows.first().map_or(0, Vec::len);
        EncodingMatrix::from_rows("x", rows, c).unwrap()
    }

    #[test]
    fn rounding_absorbs_noise() {
        let a = canonicalize(&m(vec![vec![1.0000000001], vec![2.0]]), 1e-6);
        let b = canonicalize(&m(vec![vec![2.0], vec![1.0]]), 1e-6);
        assert_eq!(a, b);
    }

    #[test]
    fn scaling_modes() {
        let a = m(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = m(vec![vec![6.0, 8.0], vec![2.0, 4.0]]);
        let plain = compare(&a, &b, &CompareOptions::default(), 1e-9);
        assert_eq!(plain.verdict, Verdict::Distinguishable);
        assert_eq!(plain.witness.unwrap().statistic, "max_abs");
        let scaled = compare(&a, &b, &CompareOptions { scaling: true, sign: false }, 1e-9);
        assert_eq!(scaled.verdict, Verdict::Indistinguishable);

        let zero = m(vec![vec![0.0], vec![0.0]]);
        let neg = m(vec![vec![-12.0], vec![-12.0]]);
        assert_eq!(compare(&zero, &neg, &CompareOptions { scaling: true, sign: false }, 1e-9).verdict, Verdict::Indistinguishable);
        assert_eq!(compare(&zero, &neg, &CompareOptions::default(), 1e-9).verdict, Verdict::Distinguishable);
        let pos = m(vec![vec![12.0], vec![12.0]]);
        assert_eq!(compare(&pos, &neg, &CompareOptions { scaling: true, sign: false }, 1e-9).verdict, Verdict::Distinguishable);
    }

    #[test]
    fn shapes_and_empty() {
        let a = m(vec![vec![1.0]]);
        let b = m(vec![vec![1.0, 2.0]]);
        assert_eq!(compare(&a, &b, &CompareOptions::default(), 1e-9).verdict, Verdict::Distinguishable);
        let e1 = EncodingMatrix::empty("lase", 4);
        let e2 = EncodingMatrix::empty("lase", 4);
        assert_eq!(compare(&e1, &e2, &CompareOptions::default(), 1e-9).verdict, Verdict::Indistinguishable);
    }

    #[test]
    fn boundary_noise_is_matched() {
        // 0.5e-9 and 0.4999e-9 round to different multiples of 1e-9.
        let a = m(vec![vec![0.50001e-9], vec![1.0]]);
        let b = m(vec![vec![1.0], vec![0.49999e-9]]);
        assert_ne!(canonicalize(&a, 1e-9), canonicalize(&b, 1e-9));
        assert_eq!(compare(&a, &b, &CompareOptions::default(), 1e-9).verdict, Verdict::Indistinguishable);
    }

    #[test]
    fn sign_mode() {
        let a = m(vec![vec![0.5, 0.1], vec![-0.3, 0.2], vec![0.2, 0.3]]);
        let mut b = m(vec![vec![0.3, 0.2], vec![-0.2, 0.3], vec![-0.5, 0.1]]);
        assert_eq!(compare(&a, &b, &CompareOptions::default(), 1e-9).verdict, Verdict::Distinguishable);
        let signed = CompareOptions { scaling: false, sign: true };
        assert_eq!(compare(&a, &b, &signed, 1e-9).verdict, Verdict::Indistinguishable);

        // Sign-symmetric column: comparison goes through |v| and cannot be
        // conclusive.
        let s1 = m(vec![vec![0.5], vec![-0.5]]);
        let s2 = m(vec![vec![-0.5], vec![0.5]]);
        let r = compare(&s1, &s2, &signed, 1e-9);
        assert_eq!(r.verdict, Verdict::Indeterminate);
        assert_eq!(r.lossy_columns, vec![0]);

        // Degenerate columns compare through their projector diagonals.
        b.column_flags[1] = ColumnFlag::Degenerate;
        b.column_projectors[1] = Some(vec![0.1, 0.3, 0.2]);
        let mut a2 = a.clone();
        a2.column_flags[1] = ColumnFlag::Degenerate;
        a2.column_projectors[1] = Some(vec![0.9, 0.3, 0.2]);
        assert_eq!(compare(&a2, &b, &signed, 1e-9).verdict, Verdict::Distinguishable);
    }

    #[test]
    fn manifest_parsing() {
        let text = "category,fileA,fileB\n# comment\nstr,a.g,b.g\n\nBasic, x/1.g , /abs/2.g\n";
        let e = parse_manifest(text, Path::new("/base")).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].a, PathBuf::from("/base/a.g"));
        assert_eq!(e[1].b, PathBuf::from("/abs/2.g"));
        assert!(parse_manifest("only,two", Path::new(".")).is_err());
        assert!(survey(&[], &[], &SurveyOptions::default()).records.is_empty());
    }

    proptest! {
        #[test]
        fn canonical_form_is_permutation_invariant(
            rows in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 3), 1..20),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = rows.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = canonicalize(&m(rows), 1e-9);
            let b = canonicalize(&m(shuffled), 1e-9);
            prop_assert_eq!(&a, &b);
            let again = CanonicalForm { rows: canonical_rows(&a.rows.iter().map(|r| r.iter().map(|x| x * 1e-9).collect()).collect::<Vec<_>>(), 1e-9), ..a.clone() };
            prop_assert_eq!(again, a);
        }
    }
}

//! The line-oriented spec file format.
//!
//! `#` starts a comment. Sections:
//!
//! ```text
//! tomonoid <n>          followed by n rows of n indices
//! partition             followed by rows `lo hi L|O R|O` or `point x`
//! filter lukasiewicz|product|semilattice
//! rho <class> <alpha>
//! numap <class> preserving|reversing
//! pair <r> <t> case=<id> [m=<real>] [sprime=<p|a..b>,...] [zmap=affine:<c0>,<c1>]
//! ```
//!
//! A file with only a `tomonoid` section describes a bare table; a `filter`
//! line makes it a coextension spec. Printing a parsed document and parsing
//! it again yields an identical document.

use std::fmt::Write as _;
use std::str::FromStr;

use coext::arch::{
    ArchCoextensionSpec, ArchFamily, ArchPairSpec, DeclaredCase, FilterKind, RhoAssignment,
    ValidationReport, Zmap,
};
use coext::finite::{FiniteTomonoid, TomonoidError};
use coext::partition::{ClassShape, IntervalPartition, Orientation};
use coext::semi::{
    NuAssignment, ParamSubset, SemiCoextensionSpec, SemiDeclaredCase, SemiFamily, SemiPairSpec,
};
use coext::{ArchEvaluator, SemiEvaluator};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDecl {
    Lukasiewicz,
    Product,
    Semilattice,
}

impl FilterDecl {
    fn name(self) -> &'static str {
        match self {
            FilterDecl::Lukasiewicz => "lukasiewicz",
            FilterDecl::Product => "product",
            FilterDecl::Semilattice => "semilattice",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDecl {
    pub r: usize,
    pub t: usize,
    pub case: String,
    pub m: Option<f64>,
    pub sprime: Option<Vec<(f64, f64)>>,
    pub zmap: Option<(f64, f64)>,
}

/// A parsed spec file; semantic validation happens in [`SpecDocument::build`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpecDocument {
    pub table: Vec<Vec<usize>>,
    pub partition: Option<Vec<ClassShape>>,
    pub filter: Option<FilterDecl>,
    pub rho: Vec<(usize, f64)>,
    pub numap: Vec<(usize, Orientation)>,
    pub pairs: Vec<PairDecl>,
}

const CASE_IDS: [&str; 13] = [
    "trivial",
    "luk-luk",
    "luk-rprod",
    "prod-luk",
    "prod-prod",
    "prod-rprod",
    "prod-power",
    "rprod-rprod",
    "power-rprod",
    "power-power",
    "goedel-goedel",
    "goedel-rgoedel",
    "rgoedel-rgoedel",
];

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(line: usize, tok: &Tok<'_>, what: &str) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| {
        err(
            line,
            tok.col,
            format!("expected {what}, found `{}`", tok.text),
        )
    })
}

pub fn parse_spec(text: &str) -> Result<SpecDocument, ParseError> {
    let mut doc = SpecDocument::default();
    let mut rows_left = 0usize;
    let mut expected_n = 0usize;
    let mut in_partition = false;
    let mut saw_tomonoid = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }

        if rows_left > 0 {
            if toks.len() != expected_n {
                return Err(err(
                    lineno,
                    toks[0].col,
                    format!(
                        "table row has {} entries, expected {expected_n}",
                        toks.len()
                    ),
                ));
            }
            let mut row = Vec::with_capacity(expected_n);
            for t in &toks {
                row.push(parse_num::<usize>(lineno, t, "an element index")?);
            }
            doc.table.push(row);
            rows_left -= 1;
            continue;
        }

        let head = &toks[0];
        match head.text {
            "tomonoid" => {
                if saw_tomonoid {
                    return Err(err(lineno, head.col, "duplicate tomonoid section"));
                }
                saw_tomonoid = true;
                in_partition = false;
                let n_tok = toks
                    .get(1)
                    .ok_or_else(|| err(lineno, head.col, "tomonoid needs a size"))?;
                expected_n = parse_num(lineno, n_tok, "a chain size")?;
                if expected_n == 0 {
                    return Err(err(lineno, n_tok.col, "chain size must be at least 1"));
                }
                rows_left = expected_n;
            }
            "partition" => {
                if doc.partition.is_some() {
                    return Err(err(lineno, head.col, "duplicate partition section"));
                }
                doc.partition = Some(Vec::new());
                in_partition = true;
            }
            "filter" => {
                in_partition = false;
                let kind = toks
                    .get(1)
                    .ok_or_else(|| err(lineno, head.col, "filter needs a kind"))?;
                doc.filter = Some(match kind.text {
                    "lukasiewicz" => FilterDecl::Lukasiewicz,
                    "product" => FilterDecl::Product,
                    "semilattice" => FilterDecl::Semilattice,
                    other => {
                        return Err(err(
                            lineno,
                            kind.col,
                            format!("unknown filter kind `{other}`"),
                        ))
                    }
                });
            }
            "rho" => {
                in_partition = false;
                if toks.len() != 3 {
                    return Err(err(
                        lineno,
                        head.col,
                        "rho takes a class index and a coefficient",
                    ));
                }
                let class = parse_num(lineno, &toks[1], "a class index")?;
                let alpha = parse_num(lineno, &toks[2], "a coefficient")?;
                doc.rho.push((class, alpha));
            }
            "numap" => {
                in_partition = false;
                if toks.len() != 3 {
                    return Err(err(
                        lineno,
                        head.col,
                        "numap takes a class index and an orientation",
                    ));
                }
                let class = parse_num(lineno, &toks[1], "a class index")?;
                let orientation = match toks[2].text {
                    "preserving" => Orientation::Preserving,
                    "reversing" => Orientation::Reversing,
                    other => {
                        return Err(err(
                            lineno,
                            toks[2].col,
                            format!("expected preserving|reversing, found `{other}`"),
                        ))
                    }
                };
                doc.numap.push((class, orientation));
            }
            "pair" => {
                in_partition = false;
                if toks.len() < 4 {
                    return Err(err(
                        lineno,
                        head.col,
                        "pair takes two class indices and a case",
                    ));
                }
                let r = parse_num(lineno, &toks[1], "a class index")?;
                let t = parse_num(lineno, &toks[2], "a class index")?;
                let mut case = None;
                let mut m = None;
                let mut sprime = None;
                let mut zmap = None;
                for tok in &toks[3..] {
                    let (key, value) = tok.text.split_once('=').ok_or_else(|| {
                        err(
                            lineno,
                            tok.col,
                            format!("expected key=value, found `{}`", tok.text),
                        )
                    })?;
                    match key {
                        "case" => {
                            if !CASE_IDS.contains(&value) {
                                return Err(err(
                                    lineno,
                                    tok.col,
                                    format!("unknown case `{value}`"),
                                ));
                            }
                            case = Some(value.to_string());
                        }
                        "m" => {
                            m = Some(value.parse::<f64>().map_err(|_| {
                                err(lineno, tok.col, format!("expected a real, found `{value}`"))
                            })?);
                        }
                        "sprime" => {
                            sprime = Some(parse_sprime(lineno, tok.col, value)?);
                        }
                        "zmap" => {
                            let body = value.strip_prefix("affine:").ok_or_else(|| {
                                err(lineno, tok.col, "zmap must be affine:<c0>,<c1>")
                            })?;
                            let (c0, c1) = body.split_once(',').ok_or_else(|| {
                                err(lineno, tok.col, "zmap must be affine:<c0>,<c1>")
                            })?;
                            let c0 = c0.parse::<f64>().map_err(|_| {
                                err(lineno, tok.col, format!("expected a real, found `{c0}`"))
                            })?;
                            let c1 = c1.parse::<f64>().map_err(|_| {
                                err(lineno, tok.col, format!("expected a real, found `{c1}`"))
                            })?;
                            zmap = Some((c0, c1));
                        }
                        other => {
                            return Err(err(
                                lineno,
                                tok.col,
                                format!("unknown pair field `{other}`"),
                            ))
                        }
                    }
                }
                let case = case.ok_or_else(|| err(lineno, head.col, "pair needs a case= field"))?;
                doc.pairs.push(PairDecl {
                    r,
                    t,
                    case,
                    m,
                    sprime,
                    zmap,
                });
            }
            "point" if in_partition => {
                let x_tok = toks
                    .get(1)
                    .ok_or_else(|| err(lineno, head.col, "point needs a coordinate"))?;
                let x: f64 = parse_num(lineno, x_tok, "a coordinate")?;
                doc.partition.as_mut().unwrap().push(ClassShape::point(x));
            }
            _ if in_partition => {
                if toks.len() != 4 {
                    return Err(err(
                        lineno,
                        head.col,
                        "partition row must be `lo hi L|O R|O` or `point x`",
                    ));
                }
                let lo: f64 = parse_num(lineno, &toks[0], "a coordinate")?;
                let hi: f64 = parse_num(lineno, &toks[1], "a coordinate")?;
                let left_closed = match toks[2].text {
                    "L" => true,
                    "O" => false,
                    other => {
                        return Err(err(
                            lineno,
                            toks[2].col,
                            format!("expected L or O, found `{other}`"),
                        ))
                    }
                };
                let right_closed = match toks[3].text {
                    "R" => true,
                    "O" => false,
                    other => {
                        return Err(err(
                            lineno,
                            toks[3].col,
                            format!("expected R or O, found `{other}`"),
                        ))
                    }
                };
                doc.partition.as_mut().unwrap().push(ClassShape::interval(
                    lo,
                    hi,
                    left_closed,
                    right_closed,
                ));
            }
            other => return Err(err(lineno, head.col, format!("unknown section `{other}`"))),
        }
    }

    if rows_left > 0 {
        return Err(err(
            text.lines().count(),
            1,
            format!("tomonoid section ends with {rows_left} rows missing"),
        ));
    }
    if !saw_tomonoid {
        return Err(err(1, 1, "spec has no tomonoid section"));
    }
    Ok(doc)
}

fn parse_sprime(line: usize, col: usize, value: &str) -> Result<Vec<(f64, f64)>, ParseError> {
    let mut out = Vec::new();
    for item in value.split(',') {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo = lo
                .parse::<f64>()
                .map_err(|_| err(line, col, format!("expected a real, found `{lo}`")))?;
            let hi = hi
                .parse::<f64>()
                .map_err(|_| err(line, col, format!("expected a real, found `{hi}`")))?;
            out.push((lo, hi));
        } else {
            let x = item
                .parse::<f64>()
                .map_err(|_| err(line, col, format!("expected a real, found `{item}`")))?;
            out.push((x, x));
        }
    }
    Ok(out)
}

/// Canonical text for a document; `parse_spec` inverts it.
pub fn print_spec(doc: &SpecDocument) -> String {
    let mut out = String::new();
    let n = doc.table.len();
    let _ = writeln!(out, "tomonoid {n}");
    for row in &doc.table {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    if let Some(classes) = &doc.partition {
        let _ = writeln!(out, "partition");
        for c in classes {
            if c.is_singleton() {
                let _ = writeln!(out, "point {}", c.lo);
            } else {
                let _ = writeln!(
                    out,
                    "{} {} {} {}",
                    c.lo,
                    c.hi,
                    if c.left_closed { "L" } else { "O" },
                    if c.right_closed { "R" } else { "O" },
                );
            }
        }
    }
    if let Some(filter) = doc.filter {
        let _ = writeln!(out, "filter {}", filter.name());
    }
    for &(class, alpha) in &doc.rho {
        let _ = writeln!(out, "rho {class} {alpha}");
    }
    for &(class, orientation) in &doc.numap {
        let _ = writeln!(out, "numap {class} {orientation}");
    }
    for p in &doc.pairs {
        let _ = write!(out, "pair {} {} case={}", p.r, p.t, p.case);
        if let Some(m) = p.m {
            let _ = write!(out, " m={m}");
        }
        if let Some(sp) = &p.sprime {
            let items: Vec<String> = sp
                .iter()
                .map(|&(lo, hi)| {
                    if lo == hi {
                        format!("{lo}")
                    } else {
                        format!("{lo}..{hi}")
                    }
                })
                .collect();
            let _ = write!(out, " sprime={}", items.join(","));
        }
        if let Some((c0, c1)) = p.zmap {
            let _ = write!(out, " zmap=affine:{c0},{c1}");
        }
        let _ = writeln!(out);
    }
    out
}

/// The semantically built form of a document.
#[derive(Debug)]
pub enum BuiltSpec {
    Tomonoid(FiniteTomonoid),
    Arch(ArchEvaluator),
    Semi(SemiEvaluator),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BuildError {
    Structure(String),
    Table(TomonoidError),
    Invalid(ValidationReport),
}

impl std::fmt::Display for BuildError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildError::Structure(s) => write!(f, "{s}"),
            BuildError::Table(e) => write!(f, "quotient table: {e}"),
            BuildError::Invalid(r) => {
                writeln!(f, "spec does not validate:")?;
                write!(f, "{r}")
            }
        }
    }
}

impl std::error::Error for BuildError {}

impl SpecDocument {
    pub fn is_coextension(&self) -> bool {
        self.filter.is_some() || self.partition.is_some()
    }

    /// Validate and assemble the document.
    pub fn build(&self) -> Result<BuiltSpec, BuildError> {
        let quotient = FiniteTomonoid::new(self.table.clone()).map_err(BuildError::Table)?;
        let filter = match self.filter {
            None => {
                if self.partition.is_some()
                    || !self.rho.is_empty()
                    || !self.numap.is_empty()
                    || !self.pairs.is_empty()
                {
                    return Err(BuildError::Structure(
                        "coextension sections present but no filter line".into(),
                    ));
                }
                return Ok(BuiltSpec::Tomonoid(quotient));
            }
            Some(f) => f,
        };
        let partition =
            IntervalPartition::new(self.partition.clone().ok_or_else(|| {
                BuildError::Structure("coextension spec needs a partition".into())
            })?);

        match filter {
            FilterDecl::Semilattice => {
                if !self.rho.is_empty() {
                    return Err(BuildError::Structure(
                        "rho lines do not apply to a semilattice filter".into(),
                    ));
                }
                let pairs = self
                    .pairs
                    .iter()
                    .map(|p| {
                        Ok(SemiPairSpec {
                            r: p.r,
                            t: p.t,
                            case: match p.case.as_str() {
                                "trivial" => SemiDeclaredCase::Trivial,
                                id => SemiDeclaredCase::Family(SemiFamily::from_str(id).map_err(
                                    |_| {
                                        BuildError::Structure(format!(
                                            "case `{id}` is not a semilattice family"
                                        ))
                                    },
                                )?),
                            },
                            m: p.m,
                            sprime: p
                                .sprime
                                .clone()
                                .map(|components| ParamSubset { components }),
                            zmap: p.zmap.map(|(c0, c1)| Zmap { c0, c1 }),
                        })
                    })
                    .collect::<Result<Vec<_>, BuildError>>()?;
                let spec = SemiCoextensionSpec {
                    quotient,
                    partition,
                    nu: self
                        .numap
                        .iter()
                        .map(|&(class_index, orientation)| NuAssignment {
                            class_index,
                            orientation,
                        })
                        .collect(),
                    pairs,
                };
                spec.build()
                    .map(BuiltSpec::Semi)
                    .map_err(BuildError::Invalid)
            }
            FilterDecl::Lukasiewicz | FilterDecl::Product => {
                if !self.numap.is_empty() {
                    return Err(BuildError::Structure(
                        "numap lines do not apply to an Archimedean filter".into(),
                    ));
                }
                let pairs = self
                    .pairs
                    .iter()
                    .map(|p| {
                        Ok(ArchPairSpec {
                            r: p.r,
                            t: p.t,
                            case: match p.case.as_str() {
                                "trivial" => DeclaredCase::Trivial,
                                id => DeclaredCase::Family(ArchFamily::from_str(id).map_err(
                                    |_| {
                                        BuildError::Structure(format!(
                                            "case `{id}` is not an Archimedean family"
                                        ))
                                    },
                                )?),
                            },
                            m: p.m,
                            zmap: p.zmap.map(|(c0, c1)| Zmap { c0, c1 }),
                        })
                    })
                    .collect::<Result<Vec<_>, BuildError>>()?;
                let spec = ArchCoextensionSpec {
                    quotient,
                    partition,
                    filter_kind: if filter == FilterDecl::Lukasiewicz {
                        FilterKind::Lukasiewicz
                    } else {
                        FilterKind::Product
                    },
                    rho: self
                        .rho
                        .iter()
                        .map(|&(class_index, alpha)| RhoAssignment { class_index, alpha })
                        .collect(),
                    pairs,
                };
                spec.build()
                    .map(BuiltSpec::Arch)
                    .map_err(BuildError::Invalid)
            }
        }
    }
}

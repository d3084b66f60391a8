//! Line-oriented text formats for Coxeter and Gale diagrams.
//!
//! Both formats are one statement per line with `#` comments. The first
//! statement names the format and its version.

use std::fmt::Write as _;

use hypercox_core::diagram::{CoxeterDiagram, DottedWeight, EdgeKind};
use hypercox_core::gale::GaleDiagram;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unexpected end of input: missing `{0}`")]
    Missing(&'static str),
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

/// Non-empty statements with their 1-based line numbers, comments stripped.
fn statements(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    name: &'static str,
) -> Result<(), ParseError> {
    match it.next() {
        Some((_, w)) if w == [name, "v1"] => Ok(()),
        Some((line, w)) if w.first() == Some(&name) => Err(err(
            line,
            format!("unsupported version `{}`", w[1..].join(" ")),
        )),
        Some((line, _)) => Err(err(line, format!("expected `{name} v1`"))),
        None => Err(ParseError::Missing(name)),
    }
}

fn int<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| err(line, format!("{what}: `{s}` is not a non-negative integer")))
}

/// Exact value of a decimal (`1.618`, `2`, `3e-1`) or a fraction (`3/2`).
pub fn parse_exact(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if (ip.is_empty() && fp.is_empty()) || !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().ok()?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut v = BigRational::from_integer(digits);
    if scale >= 0 {
        v *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -v } else { v })
}

/// Parse the `coxeter v1` format. Unlisted pairs are right angles.
pub fn parse_coxeter(text: &str) -> Result<CoxeterDiagram, ParseError> {
    let mut it = statements(text);
    header(&mut it, "coxeter")?;
    let nodes: usize = match it.next() {
        Some((line, w)) if w.len() == 2 && w[0] == "nodes" => {
            let n = int(line, "node count", w[1])?;
            if n == 0 {
                return Err(err(line, "a diagram needs at least one node"));
            }
            n
        }
        Some((line, _)) => return Err(err(line, "expected `nodes N`")),
        None => return Err(ParseError::Missing("nodes")),
    };
    let mut d = CoxeterDiagram::new(nodes);
    for (line, w) in it {
        if w[0] != "edge" {
            return Err(err(line, format!("unknown statement `{}`", w[0])));
        }
        if w.len() < 4 || w.len() > 5 {
            return Err(err(line, "expected `edge i j m|inf|dotted [w]`"));
        }
        let i: usize = int(line, "node index", w[1])?;
        let j: usize = int(line, "node index", w[2])?;
        for x in [i, j] {
            if x >= nodes {
                return Err(err(line, format!("node index {x} out of range 0..{nodes}")));
            }
        }
        if i == j {
            return Err(err(line, format!("self-loop at node {i}")));
        }
        if d.edge_ref(i, j).is_some() {
            return Err(err(line, format!("duplicate edge {i} {j}")));
        }
        let kind = match (w[3], w.get(4)) {
            ("inf", None) => EdgeKind::Bold,
            ("dotted", None) => EdgeKind::Dotted(None),
            ("dotted", Some(s)) => {
                let v = parse_exact(s)
                    .ok_or_else(|| err(line, format!("dotted weight `{s}` is not a number")))?;
                if v <= BigRational::one() {
                    return Err(err(line, format!("dotted weight {s} must exceed 1")));
                }
                EdgeKind::Dotted(Some(DottedWeight::rational(v)))
            }
            (m, None) => {
                let m: u32 = int(line, "edge label", m)?;
                if m < 3 {
                    return Err(err(
                        line,
                        format!("edge label {m} must be at least 3 (omit right angles)"),
                    ));
                }
                EdgeKind::Angle(m)
            }
            _ => return Err(err(line, "only dotted edges take a weight")),
        };
        d.set_edge(i, j, kind)
            .map_err(|e| err(line, e.to_string()))?;
    }
    Ok(d)
}

/// Exact rational value of a weight, if it has one.
fn rational_weight(w: &DottedWeight) -> Option<BigRational> {
    let (first, rest) = w.value.split_first()?;
    rest.iter().all(Zero::is_zero).then(|| first.clone())
}

fn render_rational(v: &BigRational) -> String {
    if v.is_integer() {
        return v.to_integer().to_string();
    }
    // terminating decimals print as decimals, everything else as p/q
    let mut q = v.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut places = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&q % &two).is_zero() {
        q /= &two;
        twos += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        fives += 1;
    }
    if q.is_one() {
        places = twos.max(fives);
    }
    if places == 0 || places > 30 {
        return format!("{}/{}", v.numer(), v.denom());
    }
    let scaled =
        (v * BigRational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
    let s = scaled.abs().to_string();
    let s = format!("{s:0>width$}", width = places + 1);
    let (ip, fp) = s.split_at(s.len() - places);
    format!("{}{ip}.{fp}", if v.is_negative() { "-" } else { "" })
}

/// Render in the `coxeter v1` format. Irrational dotted weights are written
/// as shortest round-trip `f64` decimals and flagged in a trailing comment.
pub fn write_coxeter(d: &CoxeterDiagram) -> String {
    let mut s = format!("coxeter v1\nnodes {}\n", d.node_count());
    for (i, j, e) in d.edges() {
        match e {
            EdgeKind::Angle(m) => writeln!(s, "edge {i} {j} {m}"),
            EdgeKind::Bold => writeln!(s, "edge {i} {j} inf"),
            EdgeKind::Dotted(None) => writeln!(s, "edge {i} {j} dotted"),
            EdgeKind::Dotted(Some(w)) => match rational_weight(w) {
                Some(v) => writeln!(s, "edge {i} {j} dotted {}", render_rational(&v)),
                None => writeln!(s, "edge {i} {j} dotted {} # approximate", w.approx()),
            },
        }
        .expect("writing to a String");
    }
    s
}

/// Parse the `gale v1` format. Only the syntax is checked here; the
/// standardness rules are reported by [`GaleDiagram::validate`].
pub fn parse_gale(text: &str) -> Result<GaleDiagram, ParseError> {
    let mut it = statements(text);
    header(&mut it, "gale")?;
    let mut k: Option<(usize, usize)> = None;
    let mut labels: Option<(usize, Vec<u32>)> = None;
    let mut origin: Option<u32> = None;
    for (line, w) in it {
        match w[0] {
            "k" if k.is_none() && w.len() == 2 => {
                let v: usize = int(line, "k", w[1])?;
                if v < 2 {
                    return Err(err(line, "k must be at least 2"));
                }
                k = Some((line, v));
            }
            "labels" if labels.is_none() => {
                let v = w[1..]
                    .iter()
                    .map(|s| int(line, "label", s))
                    .collect::<Result<Vec<u32>, _>>()?;
                labels = Some((line, v));
            }
            "origin" if origin.is_none() && w.len() == 2 => {
                origin = Some(int(line, "origin label", w[1])?)
            }
            "k" | "labels" | "origin" => {
                return Err(err(line, format!("malformed or repeated `{}`", w[0])))
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    let (kline, k) = k.ok_or(ParseError::Missing("k"))?;
    let (lline, labels) = labels.ok_or(ParseError::Missing("labels"))?;
    let origin = origin.ok_or(ParseError::Missing("origin"))?;
    if labels.len() != 2 * k {
        return Err(err(
            lline.max(kline),
            format!("k = {k} needs {} labels, got {}", 2 * k, labels.len()),
        ));
    }
    Ok(GaleDiagram::new(k, labels, origin))
}

pub fn write_gale(g: &GaleDiagram) -> String {
    let labels: Vec<String> = g.labels.iter().map(u32::to_string).collect();
    format!(
        "gale v1\nk {}\nlabels {}\norigin {}\n",
        g.k,
        labels.join(" "),
        g.origin
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimals() {
        assert_eq!(
            parse_exact("1.5"),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(
            parse_exact("3/2"),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(
            parse_exact("15e-1"),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(
            parse_exact(".25"),
            Some(BigRational::new(1.into(), 4.into()))
        );
        assert_eq!(parse_exact("1.2.3"), None);
        assert_eq!(parse_exact("."), None);
        assert_eq!(parse_exact("1/0"), None);
    }

    #[test]
    fn rational_rendering() {
        for s in ["2", "1.5", "1.0625", "4/3", "-0.5"] {
            let v = parse_exact(s).unwrap();
            assert_eq!(parse_exact(&render_rational(&v)), Some(v));
        }
        assert_eq!(render_rational(&parse_exact("1.0625").unwrap()), "1.0625");
        assert_eq!(render_rational(&parse_exact("4/3").unwrap()), "4/3");
    }

    #[test]
    fn coxeter_errors_name_lines() {
        let e = parse_coxeter("coxeter v1\nnodes 3\nedge 0 1 3\n\nedge 1 0 4\n").unwrap_err();
        assert_eq!(
            e,
            ParseError::Line {
                line: 5,
                message: "duplicate edge 1 0".into()
            }
        );
        let e = parse_coxeter("# c\ncoxeter v1\nnodes 3\nedge 0 3 3\n").unwrap_err();
        assert!(matches!(e, ParseError::Line { line: 4, .. }));
        let e = parse_coxeter("coxeter v1\nnodes 2\nedge 0 1 dotted 1\n").unwrap_err();
        assert!(matches!(e, ParseError::Line { line: 3, .. }));
        let e = parse_coxeter("coxeter v1\nnodes 2\nedge 0 1 2\n").unwrap_err();
        assert!(matches!(e, ParseError::Line { line: 3, .. }));
        assert_eq!(
            parse_coxeter("coxeter v1\n"),
            Err(ParseError::Missing("nodes"))
        );
        assert!(matches!(
            parse_coxeter("coxeter v2\nnodes 1\n"),
            Err(ParseError::Line { line: 1, .. })
        ));
    }

    #[test]
    fn gale_round_trip() {
        let g = GaleDiagram::new(5, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 0);
        assert_eq!(parse_gale(&write_gale(&g)), Ok(g));
        let e = parse_gale("gale v1\nk 3\nlabels 1 1 1\norigin 0\n").unwrap_err();
        assert!(matches!(e, ParseError::Line { line: 3, .. }));
        assert_eq!(
            parse_gale("gale v1\nk 3\norigin 0\n"),
            Err(ParseError::Missing("labels"))
        );
    }
}

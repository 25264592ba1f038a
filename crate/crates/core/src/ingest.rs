//! Input formats: plain order files and Burmeister formal contexts.
//!
//! Order files list one relation per line:
//!
//! ```text
//! # optional comment
//! elements: a b c d
//! a < b
//! c < d
//! ```
//!
//! Elements that are never declared are registered in order of appearance.

use std::collections::HashMap;

use thiserror::Error;

use crate::order::{OrderError, OrderRelation, PairSet};

/// Default cap on the number of formal concepts.
pub const DEFAULT_CONCEPT_BOUND: usize = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("more than {bound} concepts")]
    TooLarge { bound: usize },
    #[error("label `{0}` cannot be written to an order file")]
    Unserializable(String),
}

fn parse_err(line: usize, reason: impl Into<String>) -> IngestError {
    IngestError::Parse {
        line,
        reason: reason.into(),
    }
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || c == '<' || c == '#') && s != "elements:"
}

/// Labels in registration order and the listed pairs as ids.
pub fn parse_order_text(text: &str) -> Result<(Vec<String>, PairSet), IngestError> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut pairs = PairSet::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    let mut declared = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("elements:") {
            for name in rest.split_whitespace() {
                if !valid_label(name) {
                    return Err(parse_err(line_no, format!("invalid element `{name}`")));
                }
                if !declared.insert(name.to_string()) {
                    return Err(parse_err(line_no, format!("element `{name}` declared twice")));
                }
                intern(name, &mut labels);
            }
            continue;
        }
        let mut parts = line.split('<');
        let (Some(lhs), Some(rhs), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(line_no, "expected `a < b`"));
        };
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        for side in [lhs, rhs] {
            if !valid_label(side) {
                return Err(parse_err(line_no, format!("expected `a < b`, found `{line}`")));
            }
        }
        let a = intern(lhs, &mut labels);
        let b = intern(rhs, &mut labels);
        if a != b {
            pairs.insert(a, b);
        }
    }
    Ok((labels, pairs))
}

pub fn parse_order(text: &str) -> Result<OrderRelation, IngestError> {
    let (labels, pairs) = parse_order_text(text)?;
    if labels.is_empty() {
        return Err(parse_err(1, "no elements"));
    }
    Ok(OrderRelation::from_id_pairs(labels, pairs.iter())?)
}

/// Writes the declaration line and the cover relation.
pub fn serialize_order_text(o: &OrderRelation) -> Result<String, IngestError> {
    if let Some(bad) = o.ground().labels().iter().find(|l| !valid_label(l)) {
        return Err(IngestError::Unserializable(bad.clone()));
    }
    let mut out = format!("elements: {}\n", o.ground().labels().join(" "));
    for (a, b) in o.cover_relation().iter() {
        out.push_str(&format!("{} < {}\n", o.label(a), o.label(b)));
    }
    Ok(out)
}

/// Objects, attributes and their incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    incidence: Vec<Vec<bool>>,
}

impl FormalContext {
    pub fn new(
        objects: Vec<String>,
        attributes: Vec<String>,
        incidence: Vec<Vec<bool>>,
    ) -> Result<Self, IngestError> {
        if incidence.len() != objects.len() || incidence.iter().any(|r| r.len() != attributes.len()) {
            return Err(parse_err(0, "incidence does not match the label counts"));
        }
        for axis in [&objects, &attributes] {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = axis.iter().find(|l| !seen.insert(l.as_str())) {
                return Err(parse_err(0, format!("duplicate label `{dup}`")));
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            incidence,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn incidence(&self, g: usize, m: usize) -> bool {
        self.incidence[g][m]
    }

    /// Objects having every attribute in `intent`.
    pub fn extent_of(&self, intent: &[bool]) -> Vec<bool> {
        self.incidence
            .iter()
            .map(|row| row.iter().zip(intent).all(|(&has, &want)| has || !want))
            .collect()
    }

    /// Attributes shared by every object in `extent`.
    pub fn intent_of(&self, extent: &[bool]) -> Vec<bool> {
        (0..self.attributes.len())
            .map(|m| (0..self.objects.len()).all(|g| !extent[g] || self.incidence[g][m]))
            .collect()
    }
}

/// Burmeister `.cxt`: a `B` line, an optional name line, the object and
/// attribute counts, the names, then one row of `X`/`.` per object.
pub fn parse_cxt(text: &str) -> Result<FormalContext, IngestError> {
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    let is_count = |i: usize| lines.get(i).is_some_and(|l| l.trim().parse::<usize>().is_ok());
    if lines.first().map(|l| l.trim()) != Some("B") {
        return Err(parse_err(1, "expected `B` header"));
    }
    let counts_at = if is_count(1) && is_count(2) && !is_count(3) { 1 } else { 2 };
    let count = |i: usize, what: &str| -> Result<usize, IngestError> {
        lines
            .get(i)
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| parse_err(i + 1, format!("expected {what} count")))
    };
    let g = count(counts_at, "object")?;
    let m = count(counts_at + 1, "attribute")?;
    let mut i = counts_at + 2;
    while lines.get(i).is_some_and(|l| l.trim().is_empty()) {
        i += 1;
    }
    let mut take_names = |n: usize, what: &str| -> Result<Vec<String>, IngestError> {
        let mut names = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .get(i)
                .ok_or_else(|| parse_err(i + 1, format!("missing {what} name")))?;
            names.push(line.trim().to_string());
            i += 1;
        }
        Ok(names)
    };
    let objects = take_names(g, "object")?;
    let attributes = take_names(m, "attribute")?;
    let mut incidence = Vec::with_capacity(g);
    for _ in 0..g {
        let line_no = i + 1;
        let row = lines
            .get(i)
            .ok_or_else(|| parse_err(line_no, "missing incidence row"))?
            .trim();
        let cells: Vec<bool> = row
            .chars()
            .map(|c| match c {
                'X' | 'x' => Ok(true),
                '.' => Ok(false),
                other => Err(parse_err(line_no, format!("unexpected character `{other}`"))),
            })
            .collect::<Result<_, _>>()?;
        if cells.len() != m {
            return Err(parse_err(
                line_no,
                format!("row has {} cells, expected {m}", cells.len()),
            ));
        }
        incidence.push(cells);
        i += 1;
    }
    if let Some(extra) = lines[i.min(lines.len())..].iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(i + extra + 1, "unexpected content after the incidence rows"));
    }
    FormalContext::new(objects, attributes, incidence)
}

/// All concept intents in lectic order (Ganter's next closure).
fn concept_intents(ctx: &FormalContext, bound: usize) -> Result<Vec<Vec<bool>>, IngestError> {
    let m = ctx.attributes.len();
    let close = |a: &[bool]| ctx.intent_of(&ctx.extent_of(a));
    let mut current = close(&vec![false; m]);
    let mut out = Vec::new();
    loop {
        out.push(current.clone());
        if out.len() > bound {
            return Err(IngestError::TooLarge { bound });
        }
        let mut next = None;
        for i in (0..m).rev() {
            if current[i] {
                continue;
            }
            let mut seed: Vec<bool> = current.iter().enumerate().map(|(j, &x)| x && j < i).collect();
            seed[i] = true;
            let closed = close(&seed);
            if (0..i).all(|j| closed[j] == current[j]) {
                next = Some(closed);
                break;
            }
        }
        match next {
            Some(n) => current = n,
            None => return Ok(out),
        }
    }
}

/// Concepts ordered by extent inclusion, labelled `{obj,...}` by their
/// extents. Whitespace in object names becomes `_`.
pub fn concept_lattice(ctx: &FormalContext) -> Result<OrderRelation, IngestError> {
    concept_lattice_bounded(ctx, DEFAULT_CONCEPT_BOUND)
}

pub fn concept_lattice_bounded(ctx: &FormalContext, bound: usize) -> Result<OrderRelation, IngestError> {
    let mut extents: Vec<Vec<usize>> = concept_intents(ctx, bound)?
        .iter()
        .map(|intent| {
            let e = ctx.extent_of(intent);
            (0..e.len()).filter(|&g| e[g]).collect()
        })
        .collect();
    extents.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let labels = extents.iter().map(|e| {
        let names: Vec<String> = e
            .iter()
            .map(|&g| ctx.objects[g].split_whitespace().collect::<Vec<_>>().join("_"))
            .collect();
        format!("{{{}}}", names.join(","))
    });
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
    let mut pairs = Vec::new();
    for (i, a) in extents.iter().enumerate() {
        for (j, b) in extents.iter().enumerate() {
            if i != j && subset(a, b) {
                pairs.push((i, j));
            }
        }
    }
    Ok(OrderRelation::from_id_pairs(labels, pairs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_text_examples() {
        let (labels, pairs) = parse_order_text("a < b\nb < c").unwrap();
        assert_eq!(labels, ["a", "b", "c"]);
        assert_eq!(pairs.to_vec(), vec![(0, 1), (1, 2)]);

        let o = parse_order("a < a").unwrap();
        assert_eq!(o.len(), 1);

        assert_eq!(
            parse_order_text("a <").unwrap_err(),
            IngestError::Parse {
                line: 1,
                reason: "expected `a < b`, found `a <`".into()
            }
        );
    }

    #[test]
    fn declarations_and_comments() {
        let text = "# header\nelements: x y z\n\nz < x  # trailing\nz < x\n";
        let (labels, pairs) = parse_order_text(text).unwrap();
        assert_eq!(labels, ["x", "y", "z"]);
        assert_eq!(pairs.to_vec(), vec![(2, 0)]);
        assert!(matches!(
            parse_order_text("elements: a a"),
            Err(IngestError::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_order_text("a < b < c"), Err(IngestError::Parse { .. })));
        assert!(matches!(parse_order("a < b\nb < a"), Err(IngestError::Order(OrderError::Cycle(_)))));
    }

    #[test]
    fn serialization_round_trips() {
        let o = crate::order::boolean_lattice(3);
        let text = serialize_order_text(&o).unwrap();
        assert_eq!(parse_order(&text).unwrap(), o);
    }

    #[test]
    fn cxt_single_cell() {
        let ctx = parse_cxt("B\n\n1\n1\n\ng\nm\nX\n").unwrap();
        assert!(ctx.incidence(0, 0));
        assert_eq!(concept_lattice(&ctx).unwrap().len(), 1);
    }

    #[test]
    fn cxt_with_name_and_crlf() {
        let ctx = parse_cxt("B\r\nctx\r\n2\r\n2\r\n\r\ng1\r\ng2\r\nm1\r\nm2\r\nX.\r\n.X\r\n").unwrap();
        assert_eq!(ctx.objects(), ["g1", "g2"]);
        let lattice = concept_lattice(&ctx).unwrap();
        assert_eq!(lattice.len(), 4);
        assert_eq!(lattice.ground().labels(), ["{}", "{g1}", "{g2}", "{g1,g2}"]);
    }

    #[test]
    fn cxt_errors() {
        assert!(matches!(
            parse_cxt("B\n\n2\n2\n\ng1\ng2\nm1\nm2\nX.\n.\n"),
            Err(IngestError::Parse { line: 11, .. })
        ));
        assert!(parse_cxt("A\n").is_err());
        assert!(parse_cxt("B\n\n1\n1\n\ng\nm\nQ\n").is_err());
        assert!(parse_cxt("B\n\n2\n1\n\ng\ng\nm\nX\nX\n").is_err());
    }

    #[test]
    fn degenerate_contexts() {
        let empty = FormalContext::new(
            vec!["g1".into(), "g2".into()],
            vec!["m1".into()],
            vec![vec![false], vec![false]],
        )
        .unwrap();
        assert_eq!(concept_lattice(&empty).unwrap().len(), 2);
        let no_attrs = FormalContext::new(vec!["g".into()], vec![], vec![vec![]]).unwrap();
        assert_eq!(concept_lattice(&no_attrs).unwrap().len(), 1);
    }

    #[test]
    fn concept_bound() {
        let n = 5;
        let contranominal = FormalContext::new(
            (0..n).map(|i| format!("g{i}")).collect(),
            (0..n).map(|i| format!("m{i}")).collect(),
            (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect(),
        )
        .unwrap();
        assert_eq!(concept_lattice(&contranominal).unwrap().len(), 32);
        assert_eq!(
            concept_lattice_bounded(&contranominal, 31).unwrap_err(),
            IngestError::TooLarge { bound: 31 }
        );
    }
}

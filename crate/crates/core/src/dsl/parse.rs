//! Grammar, one declaration per line:
//!
//! ```text
//! signature 4 -2
//! vertex X genus 2
//! edge q1: R X
//! leg z: R order 4
//! subdivide q1 2
//! model X: plain | normalization
//! torsion E: a - b order 4 | inf
//! axiom X: weierstrass p | equiv D1 ~ D2 | effective D | not-effective D
//!        | conjugate p q | residue-sum-zero a b
//! coord R: z1 = 1, z2 = -1, q = inf
//! boundary-dimension 5
//! polygon P: 0 0, 1 0, 1 1, 0 1
//! pair P.0 P.2
//! boundary top: P.2
//! slit P: 1/4 1/2 -> 3/4 1/2
//! plumb top bot height 1 twist 1/3
//! chain g=3 t2=inf t3=2
//! ```

use num_bigint::BigInt;
use num_traits::Signed;

use super::{Document, EdgeName, Item, ModelMode, ParseError, ParseErrors};
use crate::divisor::{Axiom, DivisorClass, ProjPoint};
use crate::flat::{Slit, Vec2, Q};

type Res<T> = Result<T, ParseError>;

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

const PUNCT: [char; 3] = [':', ',', '='];

impl<'a> Cursor<'a> {
    fn err_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.text[..pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn end(&mut self) -> Res<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err_at(self.pos, format!("unexpected `{}`", self.peek_word())))
        }
    }

    fn peek_word(&self) -> &'a str {
        let rest = &self.text[self.pos..];
        let n = rest
            .find(|c: char| c.is_whitespace() || PUNCT.contains(&c))
            .unwrap_or(rest.len());
        if n == 0 {
            &rest[..rest.chars().next().map_or(0, char::len_utf8)]
        } else {
            &rest[..n]
        }
    }

    /// Next run of non-space, non-punctuation characters.
    fn word(&mut self, what: &str) -> Res<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let n = rest
            .find(|c: char| c.is_whitespace() || PUNCT.contains(&c))
            .unwrap_or(rest.len());
        if n == 0 {
            return Err(self.err_at(start, format!("expected {what}")));
        }
        self.pos += n;
        Ok((start, &rest[..n]))
    }

    fn punct(&mut self, c: char) -> Res<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err_at(self.pos, format!("expected `{c}`")))
        }
    }

    fn try_punct(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Res<()> {
        let (p, w) = self.word(&format!("`{kw}`"))?;
        if w == kw {
            Ok(())
        } else {
            Err(self.err_at(p, format!("expected `{kw}`, found `{w}`")))
        }
    }

    fn ident(&mut self) -> Res<String> {
        let (p, w) = self.word("a name")?;
        if is_ident(w) {
            Ok(w.to_string())
        } else {
            Err(self.err_at(p, format!("`{w}` is not a valid name")))
        }
    }

    fn integer(&mut self) -> Res<BigInt> {
        let (p, w) = self.word("an integer")?;
        w.parse::<BigInt>()
            .map_err(|_| self.err_at(p, format!("`{w}` is not an integer")))
    }

    fn small(&mut self) -> Res<i64> {
        let (p, w) = self.word("an integer")?;
        match w.parse::<i64>() {
            Ok(n) => Ok(n),
            Err(_) if w.parse::<BigInt>().is_ok() => Err(self.err_at(p, format!("`{w}` is too large"))),
            Err(_) => Err(self.err_at(p, format!("`{w}` is not an integer"))),
        }
    }

    fn rational(&mut self) -> Res<Q> {
        let (p, w) = self.word("a rational number")?;
        parse_rational(w).ok_or_else(|| self.err_at(p, format!("`{w}` is not a rational number")))
    }

    fn order(&mut self) -> Res<Option<BigInt>> {
        self.skip_ws();
        if self.peek_word() == "inf" {
            self.word("inf")?;
            return Ok(None);
        }
        let p = self.pos;
        let n = self.integer()?;
        if !n.is_positive() {
            return Err(self.err_at(p, "order must be positive or `inf`"));
        }
        Ok(Some(n))
    }

    fn edge_name(&mut self) -> Res<EdgeName> {
        let (p, w) = self.word("an edge like `P.0`")?;
        let bad = || self.err_at(p, format!("`{w}` is not an edge like `P.0`"));
        let (poly, idx) = w.rsplit_once('.').ok_or_else(bad)?;
        if !is_ident(poly) {
            return Err(bad());
        }
        let index = idx.parse::<usize>().map_err(|_| bad())?;
        Ok(EdgeName {
            polygon: poly.to_string(),
            index,
        })
    }

    fn point(&mut self) -> Res<Vec2> {
        Ok(Vec2::new(self.rational()?, self.rational()?))
    }

    /// `name:` prefix shared by most declarations.
    fn head(&mut self) -> Res<String> {
        let n = self.ident()?;
        self.punct(':')?;
        Ok(n)
    }

    fn divisor(&mut self, component: &str, text: &str, offset: usize) -> Res<DivisorClass> {
        DivisorClass::parse(component, text.trim())
            .map_err(|e| self.err_at(offset + (text.len() - text.trim_start().len()), e.to_string()))
    }
}

pub(crate) fn is_ident(w: &str) -> bool {
    let mut cs = w.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn parse_rational(w: &str) -> Option<Q> {
    match w.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_positive() {
                Some(Q::new(n, d))
            } else {
                None
            }
        }
        None => w.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

fn parse_line(c: &mut Cursor) -> Res<Item> {
    let (p, kw) = c.word("a keyword")?;
    let item = match kw {
        "signature" => {
            let mut v = vec![c.integer()?];
            while !c.at_end() {
                v.push(c.integer()?);
            }
            Item::Signature(v)
        }
        "vertex" => {
            let label = c.ident()?;
            c.keyword("genus")?;
            Item::Vertex {
                label,
                genus: c.small()?,
            }
        }
        "edge" => {
            let label = c.head()?;
            Item::Edge {
                label,
                ends: [c.ident()?, c.ident()?],
            }
        }
        "leg" => {
            let label = c.head()?;
            let vertex = c.ident()?;
            c.keyword("order")?;
            Item::Leg {
                label,
                vertex,
                order: c.integer()?,
            }
        }
        "subdivide" => {
            let edge = c.ident()?;
            let p = c.pos;
            let n = c.small()?;
            if n < 1 {
                return Err(c.err_at(p, "chain length must be positive"));
            }
            Item::Subdivide {
                edge,
                length: n as usize,
            }
        }
        "model" => {
            let vertex = c.head()?;
            let (p, w) = c.word("`plain` or `normalization`")?;
            let mode = match w {
                "plain" => ModelMode::Plain,
                "normalization" => ModelMode::Normalization,
                _ => return Err(c.err_at(p, format!("unknown model kind `{w}`"))),
            };
            Item::Model { vertex, mode }
        }
        "torsion" => {
            let vertex = c.head()?;
            let a = c.ident()?;
            c.keyword("-")?;
            let b = c.ident()?;
            c.keyword("order")?;
            Item::Torsion {
                vertex,
                a,
                b,
                order: c.order()?,
            }
        }
        "axiom" => {
            let vertex = c.head()?;
            let (p, w) = c.word("an axiom kind")?;
            let axiom = match w {
                "weierstrass" => Axiom::WeierstrassPoint(c.ident()?),
                "conjugate" => Axiom::HyperellipticConjugate(c.ident()?, c.ident()?),
                "residue-sum-zero" => Axiom::ResidueSumZero(c.ident()?, c.ident()?),
                "effective" | "not-effective" | "equiv" => {
                    let start = c.pos;
                    let rest = &c.text[start..];
                    c.pos = c.text.len();
                    match w {
                        "effective" => Axiom::Effective(c.divisor(&vertex, rest, start)?),
                        "not-effective" => Axiom::NotEffective(c.divisor(&vertex, rest, start)?),
                        _ => {
                            let (l, r) = rest
                                .split_once('~')
                                .ok_or_else(|| c.err_at(start, "expected `D1 ~ D2`"))?;
                            Axiom::LinearEquivalence(
                                c.divisor(&vertex, l, start)?,
                                c.divisor(&vertex, r, start + l.len() + 1)?,
                            )
                        }
                    }
                }
                _ => return Err(c.err_at(p, format!("unknown axiom `{w}`"))),
            };
            Item::Axiom { vertex, axiom }
        }
        "coord" => {
            let vertex = c.head()?;
            let mut values = Vec::new();
            loop {
                let name = c.ident()?;
                c.punct('=')?;
                c.skip_ws();
                let x = if c.peek_word() == "inf" {
                    c.word("inf")?;
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(c.rational()?)
                };
                values.push((name, x));
                if !c.try_punct(',') {
                    break;
                }
            }
            Item::Coord { vertex, values }
        }
        "boundary-dimension" => Item::BoundaryDimension(c.small()?),
        "polygon" => {
            let name = c.head()?;
            let mut vertices = vec![c.point()?];
            while c.try_punct(',') {
                vertices.push(c.point()?);
            }
            Item::Polygon { name, vertices }
        }
        "pair" => Item::Pair([c.edge_name()?, c.edge_name()?]),
        "boundary" => {
            let name = c.head()?;
            let mut edges = vec![c.edge_name()?];
            while !c.at_end() {
                edges.push(c.edge_name()?);
            }
            Item::Boundary { name, edges }
        }
        "slit" => {
            let polygon = c.head()?;
            let from = c.point()?;
            c.keyword("->")?;
            let to = c.point()?;
            Item::Slit(Slit::new(polygon, from, to))
        }
        "plumb" => {
            let alpha = c.ident()?;
            let beta = c.ident()?;
            c.keyword("height")?;
            let height = c.rational()?;
            c.keyword("twist")?;
            Item::Plumb {
                alpha,
                beta,
                height,
                twist: c.rational()?,
            }
        }
        "chain" => {
            let mut g = None;
            let mut t: Vec<(usize, usize, Option<BigInt>)> = Vec::new();
            while !c.at_end() {
                let (p, key) = c.word("`g` or `t<i>`")?;
                c.punct('=')?;
                if key == "g" {
                    if g.is_some() {
                        return Err(c.err_at(p, "`g` given twice"));
                    }
                    let q = c.pos;
                    let v = c.small()?;
                    if v < 0 {
                        return Err(c.err_at(q, "genus must be nonnegative"));
                    }
                    g = Some((p, v as usize));
                } else if let Some(i) = key.strip_prefix('t').and_then(|s| s.parse::<usize>().ok()) {
                    if t.iter().any(|(_, j, _)| *j == i) {
                        return Err(c.err_at(p, format!("`{key}` given twice")));
                    }
                    t.push((p, i, c.order()?));
                } else {
                    return Err(c.err_at(p, format!("unknown key `{key}`")));
                }
            }
            let (gp, g) = g.ok_or_else(|| c.err_at(p, "missing `g=`"))?;
            let mut torsion = vec![None; g.saturating_sub(1)];
            let mut seen = vec![false; torsion.len()];
            for (p, i, v) in t {
                if i < 2 || i > g {
                    return Err(c.err_at(p, format!("unknown key `t{i}` for g = {g}")));
                }
                torsion[i - 2] = v;
                seen[i - 2] = true;
            }
            if let Some(i) = seen.iter().position(|s| !s) {
                return Err(c.err_at(gp, format!("missing `t{}=`", i + 2)));
            }
            Item::Chain { g, torsion }
        }
        _ => return Err(c.err_at(p, format!("unknown keyword `{kw}`"))),
    };
    c.end()?;
    Ok(item)
}

/// Parses a document, reporting every line that fails.
pub fn parse(text: &str) -> Result<Document, ParseErrors> {
    let texts: Vec<&str> = text.lines().collect();
    let mut items = Vec::new();
    let mut lines = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in texts.iter().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor {
            line: i + 1,
            text: body,
            pos: 0,
        };
        match parse_line(&mut c) {
            Ok(item) => {
                items.push(item);
                lines.push(i + 1);
            }
            Err(e) => errors.push(e),
        }
    }
    match Document::build(items, &lines, &texts) {
        Ok(doc) if errors.is_empty() => Ok(doc),
        Ok(_) => Err(ParseErrors(errors)),
        Err(more) => {
            errors.extend(more);
            errors.sort_by_key(|e| (e.line, e.col));
            Err(ParseErrors(errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(text: &str) -> Vec<(usize, usize, String)> {
        parse(text)
            .unwrap_err()
            .0
            .into_iter()
            .map(|e| (e.line, e.col, e.message))
            .collect()
    }

    #[test]
    fn reports_every_bad_line() {
        let e = errors("vertex C genus one\n# fine\nedge q C C\nvertex D genus 1\n");
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].0, e[0].1), (1, 16));
        assert_eq!((e[1].0, e[1].1), (3, 8));
    }

    #[test]
    fn semantic_errors_point_at_the_name() {
        let e = errors("vertex C genus 1\nvertex C genus 2\n");
        assert_eq!(e, vec![(2, 8, "duplicate vertex `C`".to_string())]);
        let e = errors("vertex C genus 2\nleg z: X order 2\n");
        assert_eq!((e[0].0, e[0].1), (2, 8));
        assert!(e[0].2.contains("unknown vertex"));
    }

    #[test]
    fn torsion_only_on_elliptic_components() {
        let e = errors("vertex C genus 2\nleg a: C order 1\nleg b: C order 1\ntorsion C: a - b order 2\n");
        assert_eq!(e[0].0, 4);
    }

    #[test]
    fn tokens() {
        assert_eq!(parse_rational("-3/6"), Some(Q::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert!(is_ident("q'") && is_ident("n''") && !is_ident("1q"));
        let e = errors("chain g=3 t2=0 t3=inf\n");
        assert_eq!(e[0].0, 1);
        let e = errors("vertex C genus 99999999999999999999999\n");
        assert!(e[0].2.contains("too large"));
    }

    #[test]
    fn subdivision_and_models() {
        let doc = parse(
            "signature 4\nvertex X genus 2\nvertex R genus 0\nedge q1: R X\nedge q2: X R\nleg z: R order 4\nsubdivide q1 2\n",
        )
        .unwrap();
        assert_eq!(doc.curve().unwrap().vertices().len(), 4);
        let doc = parse("signature 0\nvertex E genus 1\nleg z: E order 0\nmodel E: plain\n").unwrap();
        assert!(doc.models().contains_key("E"));
    }
}

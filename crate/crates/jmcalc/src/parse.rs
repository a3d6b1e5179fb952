//! Text syntax for exponents, general linear terms, atoms and induced
//! expressions.
//!
//! ```text
//! half    := -?digits("/2")? | -?digits?.5
//! delta   := d(half,half) | seg(half,half)
//! glterm  := delta | Lp(delta,delta) | 1
//! product := glterm ("*" glterm)*
//! atom    := sigma | ds(half) | seg+(half,half) | seg-(half,half)
//!          | tri+(half,half,half) | tri-bca(..) | tri-abc(..)
//!          | L(product; atom)
//! expr    := ind(product, expr) | atom
//! ```

use thiserror::Error;

use crate::atoms::GAtom;
use crate::gl::{GLIrrep, GLProduct};
use crate::mustar::GExpr;
use crate::segments::{make_segment, HalfInt, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn half(&mut self) -> Result<HalfInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_digit() || matches!(c, '-' | '+' | '/' | '.')))
            .map(|(i, _)| i)
            .unwrap_or(self.rest().len());
        let tok = &self.src[start..start + len];
        match tok.parse::<HalfInt>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err(format!("bad half-integer `{tok}`")),
        }
    }

    fn pair(&mut self) -> Result<(HalfInt, HalfInt), ParseError> {
        let x = self.half()?;
        self.expect(",")?;
        let y = self.half()?;
        Ok((x, y))
    }

    fn segment(&mut self) -> Result<Segment, ParseError> {
        let at = self.pos;
        let (x, y) = self.pair()?;
        self.expect(")")?;
        make_segment(x, y).map_err(|e| ParseError { pos: at, msg: e.to_string() })
    }

    fn delta(&mut self) -> Result<Segment, ParseError> {
        if self.eat("d(") || self.eat("seg(") {
            self.segment()
        } else {
            self.err("expected `d(`")
        }
    }

    fn glterm(&mut self) -> Result<GLIrrep, ParseError> {
        if self.eat("Lp(") {
            let at = self.pos;
            let s1 = self.delta()?;
            self.expect(",")?;
            let s2 = self.delta()?;
            self.expect(")")?;
            return GLIrrep::pair(s1, s2).map_err(|e| ParseError { pos: at, msg: e.to_string() });
        }
        if self.eat("1") {
            return Ok(GLIrrep::Unit);
        }
        Ok(GLIrrep::delta(self.delta()?))
    }

    fn product(&mut self) -> Result<GLProduct, ParseError> {
        let mut fs = vec![self.glterm()?];
        while self.eat("*") {
            fs.push(self.glterm()?);
        }
        Ok(GLProduct::new(fs))
    }

    fn atom(&mut self) -> Result<GAtom, ParseError> {
        let at = self.pos;
        let wrap =
            |r: Result<GAtom, crate::atoms::AtomError>| r.map_err(|e| ParseError { pos: at, msg: e.to_string() });
        if self.eat("sigma") {
            return Ok(GAtom::Cuspidal);
        }
        if self.eat("ds(") {
            let a = self.half()?;
            self.expect(")")?;
            return wrap(GAtom::strict_ds(a));
        }
        for (tok, plus) in [("seg+(", true), ("seg-(", false)] {
            if self.eat(tok) {
                let (lo, hi) = self.pair()?;
                self.expect(")")?;
                return wrap(if plus { GAtom::seg_plus(lo, hi) } else { GAtom::seg_minus(lo, hi) });
            }
        }
        type Mk = fn(HalfInt, HalfInt, HalfInt) -> Result<GAtom, crate::atoms::AtomError>;
        let triples: [(&str, Mk); 3] = [
            ("tri+(", GAtom::triple_plus),
            ("tri-bca(", GAtom::triple_minus_bca),
            ("tri-abc(", GAtom::triple_minus_abc),
        ];
        for (tok, mk) in triples {
            if self.eat(tok) {
                let (a, b) = self.pair()?;
                self.expect(",")?;
                let c = self.half()?;
                self.expect(")")?;
                return wrap(mk(a, b, c));
            }
        }
        if self.eat("L(") {
            let gl = self.product()?;
            self.expect(";")?;
            let temp = self.atom()?;
            self.expect(")")?;
            let Some(segs) = gl.delta_segments() else {
                return self.err("Langlands data must be segment deltas");
            };
            return wrap(GAtom::langlands(segs, temp));
        }
        self.err("expected an atom")
    }

    fn expr(&mut self) -> Result<GExpr, ParseError> {
        if self.eat("ind(") {
            let at = self.pos;
            let gl = self.product()?;
            self.expect(",")?;
            let inner = self.expr()?;
            self.expect(")")?;
            let Some(segs) = gl.delta_segments() else {
                return Err(ParseError { pos: at, msg: "induce from segment deltas only".into() });
            };
            return Ok(inner.induce(segs));
        }
        Ok(GExpr::atom(self.atom()?))
    }
}

pub fn parse_half(s: &str) -> Result<HalfInt, ParseError> {
    let mut p = Parser::new(s);
    let v = p.half()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_gl(s: &str) -> Result<GLProduct, ParseError> {
    let mut p = Parser::new(s);
    let v = p.product()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_atom(s: &str) -> Result<GAtom, ParseError> {
    let mut p = Parser::new(s);
    let v = p.atom()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_expr(s: &str) -> Result<GExpr, ParseError> {
    let mut p = Parser::new(s);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_round_trip() {
        for s in [
            "sigma",
            "ds(5/2)",
            "seg+(-3/2,5/2)",
            "seg-(-1/2,3/2)",
            "tri+(1/2,3/2,5/2)",
            "tri-bca(1/2,3/2,5/2)",
            "tri-abc(1/2,3/2,5/2)",
            "L(d(-1/2,5/2)*d(1/2,3/2); sigma)",
            "L(d(1/2,1/2); ds(3/2))",
        ] {
            let a = parse_atom(s).unwrap();
            assert_eq!(a.to_string(), s);
        }
    }

    #[test]
    fn gl_terms() {
        let p = parse_gl("d(1/2,3/2) * Lp(d(-1/2,-1/2),d(1/2,1/2))").unwrap();
        assert_eq!(p.factors().len(), 2);
        assert!(parse_gl("Lp(d(1/2,3/2),d(7/2,9/2))").is_err());
        assert!(parse_gl("seg(0.5, 2.5)").is_ok());
    }

    #[test]
    fn expressions() {
        let e = parse_expr("ind(d(1/2,1/2), sigma)").unwrap();
        assert_eq!(e.segments().len(), 1);
        let e = parse_expr("ind(d(1/2,3/2), ind(d(-1/2,5/2), sigma))").unwrap();
        assert_eq!(e.segments().len(), 2);
        let err = parse_expr("ind(d(1/2,1/2) sigma)").unwrap_err();
        assert_eq!(err.pos, 15);
        assert!(parse_atom("ds(1)").is_err());
    }
}

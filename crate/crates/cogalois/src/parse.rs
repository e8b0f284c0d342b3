//! Polynomial literals: coefficients in [0, p) or extension-field tuples,
//! one variable letter, `^` powers, `+` between terms. Round-trips with the
//! canonical printer.

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::{PolyRing, RtPoly};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("integer out of range"))
    }
}

/// Parses a polynomial literal over F_q in the given variable letter.
pub fn parse_poly(fq: &Fq, text: &str, var: char) -> Result<RtPoly> {
    let ring = PolyRing::new(fq.clone());
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let var = var as u8;
    let mut acc = ring.zero();
    loop {
        let (coeff, has_coeff) = parse_coeff(fq, &mut cur)?;
        let exp = match cur.peek() {
            Some(c) if c == var => {
                cur.bump();
                match cur.peek() {
                    Some(b'^') => {
                        cur.bump();
                        let e = cur.integer()?;
                        usize::try_from(e).map_err(|_| cur.err("exponent out of range"))?
                    }
                    _ => 1,
                }
            }
            _ if has_coeff => 0,
            _ => return Err(cur.err(format!("expected a coefficient or `{}`", var as char))),
        };
        let c = coeff.unwrap_or_else(|| fq.one());
        acc = ring.add(&acc, &ring.monomial(c, exp));
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
            }
            Some(_) => return Err(cur.err("expected `+` or end of input")),
            None => break,
        }
    }
    Ok(acc)
}

fn parse_coeff(fq: &Fq, cur: &mut Cursor<'_>) -> Result<(Option<FqElem>, bool)> {
    match cur.peek() {
        Some(b'(') => {
            cur.bump();
            let mut parts = vec![cur.integer()?];
            while cur.peek() == Some(b',') {
                cur.bump();
                parts.push(cur.integer()?);
            }
            if cur.bump() != Some(b')') {
                return Err(cur.err("expected `)`"));
            }
            let elem = fq
                .from_residues(&parts)
                .map_err(|_| cur.err("tuple longer than the extension degree"))?;
            Ok((Some(elem), true))
        }
        Some(c) if c.is_ascii_digit() => {
            let n = cur.integer()?;
            Ok((Some(fq.from_u64(n)), true))
        }
        _ => Ok((None, false)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    #[test]
    fn parses_basic_literals() {
        let fq = f3();
        let ring = PolyRing::new(fq.clone());
        assert_eq!(parse_poly(&fq, "T", 'T').unwrap(), ring.gen());
        let sigma2 = parse_poly(&fq, "2T^2+T+1", 'T').unwrap();
        assert_eq!(ring.format_rt(&sigma2, "T"), "2T^2+T+1");
        // coefficient reduction in characteristic 3
        assert!(parse_poly(&fq, "3T", 'T').unwrap().is_zero());
        assert!(parse_poly(&fq, "0", 'T').unwrap().is_zero());
    }

    #[test]
    fn parses_extension_tuples() {
        let f9 = Fq::extension(3, &[1, 0, 1]).unwrap();
        let p = parse_poly(&f9, "(1,2)T^2+(0,1)", 'T').unwrap();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.coeffs()[0], f9.from_residues(&[0, 1]).unwrap());
        assert_eq!(p.coeffs()[2], f9.from_residues(&[1, 2]).unwrap());
    }

    #[test]
    fn reports_error_positions() {
        let fq = f3();
        match parse_poly(&fq, "T^", 'T') {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_poly(&fq, "T*2", 'T').is_err());
        assert!(parse_poly(&fq, "", 'T').is_err());
    }

    #[test]
    fn round_trips_with_printer() {
        use rand::{Rng, SeedableRng};
        let fq = f3();
        let ring = PolyRing::new(fq.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let d = rng.gen_range(0..6);
            let f = ring.from_coeffs((0..=d).map(|_| fq.random(&mut rng)).collect());
            let text = ring.format_rt(&f, "T");
            let back = parse_poly(&fq, &text, 'T').unwrap();
            assert_eq!(back, f, "round trip failed on {text}");
        }
    }
}

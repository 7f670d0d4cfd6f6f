//! Text and JSON forms of ring elements.
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := integer | [integer '*'] factor ('*' factor)*
//! factor  := gen ['^' posint]
//! gen     := 'S(' i ')' | 'S(' i ',' j ')' | 'T(-' i ')' | 'T(' i ',' j ')'
//! ```
//!
//! Whitespace is ignored. `S(i,j)` needs `i < j`. A `T` generator stands for
//! its preimage under `psi`: `T(-i)` is `S(i)` and `T(i,j)` is the element
//! returned by [`crate::iso::t_in_image`]. Parsed elements are not
//! normalized.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::Root;
use crate::error::{Error, Result};
use crate::iso::t_in_image;
use crate::mring::{Generator, Monomial, RingElt};

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    n: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        let chars = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, at: 0, n, text }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.text.len(), |(p, _)| *p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|(_, c)| *c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return self.err("expected an integer");
        }
        let digits: String = self.chars[start..self.at].iter().map(|(_, c)| *c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small(&mut self) -> Result<usize> {
        let pos = self.pos();
        let v = self.integer()?;
        usize::try_from(v).map_err(|_| Error::Syntax {
            pos,
            msg: "integer too large".into(),
        })
    }

    fn index(&mut self) -> Result<usize> {
        let i = self.small()?;
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(i)
    }

    fn generator(&mut self) -> Result<RingElt> {
        let n = self.n;
        let start = self.pos();
        match self.peek() {
            Some('S') => {
                self.at += 1;
                self.expect('(')?;
                let i = self.index()?;
                let g = if self.eat(',') {
                    let j = self.index()?;
                    if i == j {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: format!("S({i},{i}) is not a generator; write S({i})"),
                        });
                    }
                    if i > j {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: format!("S({i},{j}) needs {i} < {j}"),
                        });
                    }
                    Generator::root(i, j)
                } else {
                    Generator::Simple(i)
                };
                self.expect(')')?;
                Ok(RingElt::from_monomial(n, Monomial::new(vec![g])))
            }
            Some('T') => {
                self.at += 1;
                self.expect('(')?;
                if self.eat('-') {
                    let i = self.index()?;
                    self.expect(')')?;
                    return Ok(RingElt::from_monomial(n, Monomial::new(vec![Generator::Simple(i)])));
                }
                let i = self.index()?;
                self.expect(',')?;
                let j = self.index()?;
                if i > j {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("T({i},{j}) needs {i} ≤ {j}"),
                    });
                }
                self.expect(')')?;
                Ok(t_in_image(&Root::of(i, j), n))
            }
            Some(c) => self.err(format!("expected a generator, found '{c}'")),
            None => self.err("expected a generator, found end of input"),
        }
    }

    fn factor(&mut self) -> Result<RingElt> {
        let g = self.generator()?;
        if !self.eat('^') {
            return Ok(g);
        }
        let e = self.small()?;
        if e == 0 {
            return self.err("exponent must be positive");
        }
        let mut acc = g.clone();
        for _ in 1..e {
            acc = acc.mul_raw(&g)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElt> {
        let mut acc = RingElt::one(self.n);
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.integer()?;
            acc = acc.scale(&c);
            if !self.eat('*') {
                return Ok(acc);
            }
        }
        acc = acc.mul_raw(&self.factor()?)?;
        while self.eat('*') {
            acc = acc.mul_raw(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn element(&mut self) -> Result<RingElt> {
        let mut sign = if self.eat('-') { -BigInt::one() } else { BigInt::one() };
        let mut acc = RingElt::zero(self.n);
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            if self.eat('+') {
                sign = BigInt::one();
            } else if self.eat('-') {
                sign = -BigInt::one();
            } else {
                break;
            }
        }
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected '{c}'"));
        }
        Ok(acc)
    }
}

pub fn parse_element(text: &str, n: usize) -> Result<RingElt> {
    Parser::new(text, n).element()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub mon: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonElement {
    pub n: usize,
    pub terms: Vec<JsonTerm>,
}

fn gen_to_json(g: &Generator) -> Vec<usize> {
    match g {
        Generator::Simple(i) => vec![*i],
        Generator::Root(r) => vec![r.lo, r.hi],
    }
}

pub fn element_to_json(e: &RingElt) -> JsonElement {
    JsonElement {
        n: e.n(),
        terms: e
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| JsonTerm {
                coeff: c.to_string(),
                mon: m.gens().iter().map(gen_to_json).collect(),
            })
            .collect(),
    }
}

pub fn element_from_json(j: &JsonElement) -> Result<RingElt> {
    let mut e = RingElt::zero(j.n);
    for t in &j.terms {
        let c: BigInt = t.coeff.parse().map_err(|_| Error::Syntax {
            pos: 0,
            msg: format!("bad coefficient {:?}", t.coeff),
        })?;
        let gens = t
            .mon
            .iter()
            .map(|g| {
                let g = match g.as_slice() {
                    [i] => Generator::Simple(*i),
                    [i, j] if i < j => Generator::Root(Root::new(*i, *j)?),
                    other => {
                        return Err(Error::Syntax {
                            pos: 0,
                            msg: format!("bad generator {other:?}"),
                        })
                    }
                };
                g.check(j.n)?;
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        if !c.is_zero() {
            e.add_term(Monomial::new(gens), c);
        }
    }
    Ok(e)
}

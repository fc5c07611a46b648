//! Plain-text serialization of algebra presentations.
//!
//! The format is line-oriented, one declaration per line, `#` comments:
//!
//! ```text
//! algebra Ext_E1_kgl_R
//! note closed form includes the indecomposable w = [tau^2 v0]
//! generator w s=1 t=1 u=-2
//! generator v0 s=1 t=1 u=0 alias=h0
//! generator u s=0 t=-1 u=-1 nilpotence=2
//! rewrite w = tau4*v0^2
//! truncate rho*v0
//! ```
//!
//! Axes `s` and `q` are optional on `generator` lines; every generator of
//! one algebra must declare the same axes.  Monomials are `*`-joined
//! `name` or `name^exp` factors, or the literal `1`; polynomials are
//! `+`-joined monomials, or the literal `0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{AlgebraError, AlgebraPresentation, GeneratorInfo, Monomial, Polynomial};
use crate::grading::MultiDegree;

/// Renders a presentation in the text format.
#[must_use]
pub fn serialize(a: &AlgebraPresentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "algebra {}", a.name);
    for note in &a.notes {
        let _ = writeln!(out, "note {note}");
    }
    for g in &a.generators {
        let _ = write!(out, "generator {}", g.name);
        if let Some(s) = g.degree.s {
            let _ = write!(out, " s={s}");
        }
        let _ = write!(out, " t={} u={}", g.degree.t, g.degree.u);
        if let Some(q) = g.degree.q {
            let _ = write!(out, " q={q}");
        }
        if let Some(e) = g.nilpotence {
            let _ = write!(out, " nilpotence={e}");
        }
        if let Some(al) = &g.alias {
            let _ = write!(out, " alias={al}");
        }
        out.push('\n');
    }
    for (&i, p) in &a.rewrites {
        let _ = writeln!(out, "rewrite {} = {}", a.generators[i].name, a.render(p));
    }
    for t in &a.truncations {
        // Skip truncations that merely restate a generator's nilpotence:
        // they are reconstructed from the generator line on parse.
        if let Some((idx, e)) = single_factor(t) {
            if a.generators[idx].nilpotence == Some(u32::from(e)) {
                continue;
            }
        }
        let _ = writeln!(out, "truncate {}", a.label(t));
    }
    out
}

// A monomial consisting of a single generator power.
fn single_factor(m: &Monomial) -> Option<(usize, u16)> {
    let mut found = None;
    for (i, &e) in m.exps.iter().enumerate() {
        if e > 0 {
            if found.is_some() {
                return None;
            }
            found = Some((i, e));
        }
    }
    found
}

fn parse_monomial(
    text: &str,
    names: &BTreeMap<String, usize>,
    ngens: usize,
    line: usize,
) -> Result<Monomial, AlgebraError> {
    let mut m = Monomial::one(ngens);
    let text = text.trim();
    if text == "1" {
        return Ok(m);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim().parse::<u16>().map_err(|_| AlgebraError::Parse {
                    line,
                    msg: format!("bad exponent in `{factor}`"),
                })?,
            ),
            None => (factor, 1),
        };
        let &idx = names.get(name).ok_or_else(|| AlgebraError::Parse {
            line,
            msg: format!("unknown generator `{name}`"),
        })?;
        m.exps[idx] = m.exps[idx].checked_add(exp).ok_or(AlgebraError::Parse {
            line,
            msg: "exponent overflow".to_owned(),
        })?;
    }
    Ok(m)
}

fn parse_polynomial(
    text: &str,
    names: &BTreeMap<String, usize>,
    ngens: usize,
    line: usize,
) -> Result<Polynomial, AlgebraError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Polynomial::zero());
    }
    let mut p = Polynomial::zero();
    for mono in text.split('+') {
        p.toggle(parse_monomial(mono, names, ngens, line)?);
    }
    Ok(p)
}

/// Parses the text format back into a presentation.
pub fn parse(text: &str) -> Result<AlgebraPresentation, AlgebraError> {
    let mut name: Option<String> = None;
    let mut notes: Vec<String> = Vec::new();
    let mut gens: Vec<GeneratorInfo> = Vec::new();
    let mut rewrite_lines: Vec<(usize, String, String)> = Vec::new();
    let mut truncate_lines: Vec<(usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).ok_or_else(|| {
            AlgebraError::Parse { line, msg: format!("incomplete declaration `{content}`") }
        })?;
        let rest = rest.trim();
        match keyword {
            "algebra" => name = Some(rest.to_owned()),
            "note" => notes.push(rest.to_owned()),
            "generator" => {
                let mut parts = rest.split_whitespace();
                let gname = parts
                    .next()
                    .ok_or(AlgebraError::Parse { line, msg: "missing generator name".into() })?;
                let (mut s, mut t, mut u, mut q) = (None, None, None, None);
                let (mut nilpotence, mut alias) = (None, None);
                for kv in parts {
                    let (k, v) = kv.split_once('=').ok_or_else(|| AlgebraError::Parse {
                        line,
                        msg: format!("expected key=value, got `{kv}`"),
                    })?;
                    let int = || {
                        v.parse::<i32>().map_err(|_| AlgebraError::Parse {
                            line,
                            msg: format!("bad integer `{v}`"),
                        })
                    };
                    match k {
                        "s" => s = Some(int()?),
                        "t" => t = Some(int()?),
                        "u" => u = Some(int()?),
                        "q" => q = Some(int()?),
                        "nilpotence" => {
                            nilpotence =
                                Some(v.parse::<u32>().map_err(|_| AlgebraError::Parse {
                                    line,
                                    msg: format!("bad nilpotence `{v}`"),
                                })?);
                        }
                        "alias" => alias = Some(v.to_owned()),
                        _ => {
                            return Err(AlgebraError::Parse {
                                line,
                                msg: format!("unknown key `{k}`"),
                            })
                        }
                    }
                }
                let (t, u) = match (t, u) {
                    (Some(t), Some(u)) => (t, u),
                    _ => {
                        return Err(AlgebraError::Parse {
                            line,
                            msg: "generator needs t= and u=".into(),
                        })
                    }
                };
                gens.push(GeneratorInfo {
                    name: gname.to_owned(),
                    degree: MultiDegree { s, t, u, q },
                    nilpotence,
                    alias,
                });
            }
            "rewrite" => {
                let (lhs, rhs) = rest.split_once('=').ok_or(AlgebraError::Parse {
                    line,
                    msg: "rewrite needs `name = polynomial`".into(),
                })?;
                rewrite_lines.push((line, lhs.trim().to_owned(), rhs.trim().to_owned()));
            }
            "truncate" => truncate_lines.push((line, rest.to_owned())),
            _ => {
                return Err(AlgebraError::Parse {
                    line,
                    msg: format!("unknown declaration `{keyword}`"),
                })
            }
        }
    }

    let name = name.ok_or(AlgebraError::Parse { line: 0, msg: "missing `algebra` line".into() })?;
    let names: BTreeMap<String, usize> =
        gens.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
    let ngens = gens.len();

    let mut rewrites = Vec::new();
    for (line, lhs, rhs) in rewrite_lines {
        let &idx = names.get(&lhs).ok_or_else(|| AlgebraError::Parse {
            line,
            msg: format!("unknown generator `{lhs}`"),
        })?;
        rewrites.push((idx, parse_polynomial(&rhs, &names, ngens, line)?));
    }
    let mut truncations = Vec::new();
    for (line, text) in truncate_lines {
        truncations.push(parse_monomial(&text, &names, ngens, line)?);
    }

    let mut a = AlgebraPresentation::new(&name, gens, rewrites, truncations)?;
    a.notes = notes;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::super::builtin::{self, CoefficientField};
    use super::*;

    #[test]
    fn round_trip_builtins() {
        for a in [
            builtin::m2(CoefficientField::C),
            builtin::m2(CoefficientField::R),
            builtin::m2(CoefficientField::Fq(3)),
            builtin::ext_e0(CoefficientField::R),
            builtin::ext_e0(CoefficientField::Fq(3)),
            builtin::ext_kgl(CoefficientField::R),
            builtin::ext_kgl(CoefficientField::Fq(5)),
            builtin::ext_eqn(2, CoefficientField::R),
            builtin::a_mod_e(0, CoefficientField::R, 30).unwrap(),
        ] {
            let text = serialize(&a);
            let back = parse(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", a.name));
            assert_eq!(a, back, "round trip failed for {}\n{text}", a.name);
        }
    }

    #[test]
    fn parse_rejects_unknown_generator() {
        let text = "algebra X\ngenerator a t=2 u=1\nrewrite b = a\n";
        assert!(matches!(parse(text), Err(AlgebraError::Parse { line: 3, .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a comment\nalgebra X\n\ngenerator a t=2 u=1 # trailing\n";
        let a = parse(text).unwrap();
        assert_eq!(a.ngens(), 1);
    }
}

//! Line-oriented PUBO text format.
//!
//! ```text
//! # comment
//! p pubo <n_vars> <n_terms>
//! t <coeff> <i1> <i2> ... <ik>
//! t <coeff>              (constant term)
//! ```
//!
//! Indices are 1-based; coefficients are decimal or scientific notation.
//! Serialization emits indices ascending and terms in lexicographic order.

use super::{PolySpec, PuboError, Term};

pub fn parse_pubo(text: &str) -> Result<PolySpec, PuboError> {
    let mut header: Option<(usize, usize, usize)> = None; // (n_vars, n_terms, line)
    let mut terms: Vec<Term> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut fields = content.split_whitespace();
        match fields.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(PuboError::Parse {
                        line,
                        msg: "duplicate header line".into(),
                    });
                }
                if fields.next() != Some("pubo") {
                    return Err(PuboError::Parse {
                        line,
                        msg: "header must be `p pubo <n_vars> <n_terms>`".into(),
                    });
                }
                let n_vars = parse_field::<usize>(fields.next(), line, "n_vars")?;
                let n_terms = parse_field::<usize>(fields.next(), line, "n_terms")?;
                if fields.next().is_some() {
                    return Err(PuboError::Parse {
                        line,
                        msg: "trailing fields after header".into(),
                    });
                }
                header = Some((n_vars, n_terms, line));
            }
            Some("t") => {
                let (n_vars, _, _) = header.ok_or(PuboError::Parse {
                    line,
                    msg: "term line before header".into(),
                })?;
                let coeff = parse_field::<f64>(fields.next(), line, "coefficient")?;
                if !coeff.is_finite() {
                    return Err(PuboError::Parse {
                        line,
                        msg: "non-finite coefficient".into(),
                    });
                }
                let mut indices = Vec::new();
                for f in fields {
                    let ix: u32 = f.parse().map_err(|_| PuboError::Parse {
                        line,
                        msg: format!("invalid index `{f}`"),
                    })?;
                    if ix == 0 || ix as usize > n_vars {
                        return Err(PuboError::Parse {
                            line,
                            msg: format!("index {ix} out of range 1..={n_vars}"),
                        });
                    }
                    indices.push(ix);
                }
                // A repeated index is rejected rather than simplified via
                // s_i^2 = 1: simplification would silently change the degree.
                let mut sorted = indices.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(PuboError::Parse {
                        line,
                        msg: "index repeated within a term".into(),
                    });
                }
                terms.push(Term::new(indices, coeff));
            }
            Some(other) => {
                return Err(PuboError::Parse {
                    line,
                    msg: format!("unknown line tag `{other}`"),
                })
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let (n_vars, n_terms, hline) = header.ok_or(PuboError::Parse {
        line: 0,
        msg: "missing header line".into(),
    })?;
    if terms.len() != n_terms {
        return Err(PuboError::Parse {
            line: hline,
            msg: format!("header declares {n_terms} terms, found {}", terms.len()),
        });
    }
    PolySpec::new(n_vars, terms)
}

pub fn serialize_pubo(poly: &PolySpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("p pubo {} {}\n", poly.n_vars(), poly.n_terms()));
    for t in poly.terms() {
        out.push_str(&format!("t {}", t.coeff()));
        for ix in t.indices() {
            out.push_str(&format!(" {ix}"));
        }
        out.push('\n');
    }
    out
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, PuboError> {
    let f = field.ok_or_else(|| PuboError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    f.parse().map_err(|_| PuboError::Parse {
        line,
        msg: format!("invalid {what} `{f}`"),
    })
}

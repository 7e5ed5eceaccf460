//! Plain-text morphism files:
//!
//! ```text
//! # comment
//! n=15
//! r=56
//! h0=0110…
//! h1=1010…
//! ```
//!
//! Stanzas are separated by blank lines.

use std::fmt::Write as _;

use super::{MorphismError, UniformMorphism};
use crate::words::BinaryWord;

#[derive(Default)]
struct Pending {
    first_line: usize,
    n: Option<usize>,
    r: Option<usize>,
    h0: Option<BinaryWord>,
    h1: Option<BinaryWord>,
}

impl Pending {
    fn is_empty(&self) -> bool {
        self.n.is_none() && self.r.is_none() && self.h0.is_none() && self.h1.is_none()
    }

    fn finish(self) -> Result<UniformMorphism, MorphismError> {
        let line = self.first_line;
        let missing = |key: &str| MorphismError::Malformed {
            line,
            message: format!("stanza is missing `{key}`"),
        };
        let n = self.n.ok_or_else(|| missing("n"))?;
        let r = self.r.ok_or_else(|| missing("r"))?;
        let h0 = self.h0.ok_or_else(|| missing("h0"))?;
        let h1 = self.h1.ok_or_else(|| missing("h1"))?;
        if h0.len() != r || h1.len() != r {
            return Err(MorphismError::LengthMismatch {
                line,
                r,
                h0: h0.len(),
                h1: h1.len(),
            });
        }
        UniformMorphism::new(n, h0, h1).map_err(|e| MorphismError::Malformed {
            line,
            message: e.to_string(),
        })
    }
}

fn parse_bits(value: &str, line: usize, offset: usize) -> Result<BinaryWord, MorphismError> {
    value
        .chars()
        .enumerate()
        .map(|(k, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            symbol => Err(MorphismError::NotBinary {
                line,
                column: offset + k + 1,
                symbol,
            }),
        })
        .collect::<Result<Vec<u8>, _>>()
        .map(BinaryWord::from_bits)
}

fn parse_count(value: &str, line: usize, key: &str) -> Result<usize, MorphismError> {
    value.parse().map_err(|_| MorphismError::Malformed {
        line,
        message: format!("`{key}` must be a non-negative integer, got {value:?}"),
    })
}

/// Parses every stanza, in file order. Only uniformity and the binary
/// alphabet are validated here.
pub fn parse_morphism_file(text: &str) -> Result<Vec<UniformMorphism>, MorphismError> {
    let mut out = Vec::new();
    let mut pending = Pending::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if !pending.is_empty() {
                out.push(std::mem::take(&mut pending).finish()?);
            }
            continue;
        }
        if pending.is_empty() {
            pending.first_line = line;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| MorphismError::Malformed {
            line,
            message: format!("expected `key=value`, got {trimmed:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let eq = raw.find('=').unwrap_or(0);
        let after = &raw[eq + 1..];
        let offset = eq + 1 + (after.len() - after.trim_start().len());
        let duplicate = || MorphismError::Malformed {
            line,
            message: format!("duplicate key `{key}`"),
        };
        match key {
            "n" => {
                if pending.n.replace(parse_count(value, line, key)?).is_some() {
                    return Err(duplicate());
                }
            }
            "r" => {
                if pending.r.replace(parse_count(value, line, key)?).is_some() {
                    return Err(duplicate());
                }
            }
            "h0" => {
                if pending.h0.replace(parse_bits(value, line, offset)?).is_some() {
                    return Err(duplicate());
                }
            }
            "h1" => {
                if pending.h1.replace(parse_bits(value, line, offset)?).is_some() {
                    return Err(duplicate());
                }
            }
            other => {
                return Err(MorphismError::Malformed {
                    line,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }
    if !pending.is_empty() {
        out.push(pending.finish()?);
    }
    Ok(out)
}

/// Writes one stanza per morphism, ascending in `n`.
pub fn emit_morphism_file(morphisms: &[UniformMorphism]) -> String {
    let mut sorted: Vec<&UniformMorphism> = morphisms.iter().collect();
    sorted.sort_by_key(|h| h.n());
    let mut out = String::new();
    for (k, h) in sorted.into_iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "n={}\nr={}\nh0={}\nh1={}", h.n(), h.r(), h.image0(), h.image1());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::{builtin, builtins};
    use proptest::prelude::*;

    #[test]
    fn builtin_round_trip() {
        let h = builtin(15).unwrap();
        let text = emit_morphism_file(std::slice::from_ref(h));
        assert_eq!(parse_morphism_file(&text).unwrap(), vec![h.clone()]);
        let all = emit_morphism_file(builtins());
        assert_eq!(parse_morphism_file(&all).unwrap(), builtins());
    }

    #[test]
    fn two_stanzas_with_comments() {
        let text = "# demo\nn=3\nr=2\nh0=01\nh1=10\n\n# second\n\nn=4\nr=3\nh0=011\nh1=110\n";
        let parsed = parse_morphism_file(text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[1].n(), 4);
        assert_eq!(parsed[1].image1().to_string(), "110");
    }

    #[test]
    fn emit_sorts_by_n() {
        let a = UniformMorphism::new(5, "01".parse().unwrap(), "10".parse().unwrap()).unwrap();
        let b = UniformMorphism::new(3, "00".parse().unwrap(), "11".parse().unwrap()).unwrap();
        let text = emit_morphism_file(&[a, b]);
        assert!(text.starts_with("n=3\n"));
    }

    #[test]
    fn length_mismatch() {
        let err = parse_morphism_file("n=3\nr=3\nh0=011\nh1=11\n").unwrap_err();
        assert_eq!(
            err,
            MorphismError::LengthMismatch {
                line: 1,
                r: 3,
                h0: 3,
                h1: 2
            }
        );
        let err = parse_morphism_file("\n\nn=3\nr=2\nh0=011\nh1=110\n").unwrap_err();
        assert!(matches!(err, MorphismError::LengthMismatch { line: 3, .. }));
    }

    #[test]
    fn malformed_lines_report_position() {
        assert_eq!(
            parse_morphism_file("n=3\nr=2\nh0=0a\nh1=10\n").unwrap_err(),
            MorphismError::NotBinary {
                line: 3,
                column: 5,
                symbol: 'a'
            }
        );
        assert!(matches!(
            parse_morphism_file("n=3\nr=2\nh0=01\nh1=10\nh1=10\n"),
            Err(MorphismError::Malformed { line: 5, .. })
        ));
        assert!(matches!(
            parse_morphism_file("n=3\nbogus\n"),
            Err(MorphismError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_morphism_file("n=3\nr=2\nh0=01\n"),
            Err(MorphismError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_morphism_file("n=x\n"),
            Err(MorphismError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_morphism_file("k=3\n"),
            Err(MorphismError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn empty_file_is_empty_list() {
        assert!(parse_morphism_file("").unwrap().is_empty());
        assert!(parse_morphism_file("# nothing\n\n").unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn emit_then_parse_is_identity(
            specs in proptest::collection::vec((2usize..40, proptest::collection::vec(0u8..2, 2..30), any::<u64>()), 0..5)
        ) {
            let mut morphisms: Vec<UniformMorphism> = specs
                .into_iter()
                .map(|(n, h0, salt)| {
                    let h1: Vec<u8> = h0.iter().enumerate().map(|(k, &b)| b ^ ((salt >> (k % 64)) & 1) as u8).collect();
                    UniformMorphism::new(n, BinaryWord::from_bits(h0), BinaryWord::from_bits(h1)).unwrap()
                })
                .collect();
            morphisms.sort_by_key(|h| h.n());
            let reparsed = parse_morphism_file(&emit_morphism_file(&morphisms)).unwrap();
            prop_assert_eq!(reparsed, morphisms);
        }
    }
}

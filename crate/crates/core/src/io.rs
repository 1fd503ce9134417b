//! Text formats: PCC1 binary code catalogs, MPC1 mixed code catalogs, SCRUN1
//! switching run state, block designs and design label maps.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::designs::BlockDesign;
use crate::error::{Error, Result};
use crate::mixed::{MixedAlphabet, MixedCode};
use crate::word::{render_bits, BinaryCode, MAX_LEN};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Lines with 1-based numbers, comments dropped, trailing whitespace trimmed.
/// Blank lines are kept as block separators.
fn content_lines(r: impl BufRead) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim_end();
        if t.starts_with('#') {
            continue;
        }
        out.push((i + 1, t.to_string()));
    }
    Ok(out)
}

/// Splits content lines into blank-separated blocks.
fn blocks(lines: Vec<(usize, String)>) -> Vec<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (no, l) in lines {
        if l.is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push((no, l));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn header_value<'a>(line: &'a str, magic: &str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(magic)?.strip_prefix(' ')?;
    rest.trim().strip_prefix(key)?.strip_prefix('=')
}

/// Parses a PCC1 catalog. The first block must begin with `PCC1 n=<n>`;
/// later blocks may repeat the header to change the length.
pub fn parse_pcc(r: impl BufRead) -> Result<Vec<BinaryCode>> {
    let mut codes = Vec::new();
    let mut n: Option<usize> = None;
    for block in blocks(content_lines(r)?) {
        let mut body = &block[..];
        let (no, first) = &block[0];
        if first.starts_with("PCC1") {
            let v = header_value(first, "PCC1", "n")
                .ok_or_else(|| parse_err(*no, format!("malformed header {first:?}")))?;
            let len: usize = v
                .parse()
                .map_err(|_| parse_err(*no, format!("bad length {v:?}")))?;
            if len == 0 || len > MAX_LEN {
                return Err(parse_err(*no, format!("length {len} outside 1..={MAX_LEN}")));
            }
            n = Some(len);
            body = &block[1..];
        }
        let n = n.ok_or_else(|| parse_err(*no, "missing PCC1 header"))?;
        if body.is_empty() {
            return Err(parse_err(*no, "code without words"));
        }
        let mut words: Vec<u32> = Vec::with_capacity(body.len());
        for (no, line) in body {
            if line.len() != n {
                return Err(parse_err(*no, format!("word length {} differs from n = {n}", line.len())));
            }
            let mut w = 0u32;
            for ch in line.chars() {
                w = (w << 1)
                    | match ch {
                        '0' => 0,
                        '1' => 1,
                        other => return Err(parse_err(*no, format!("bad character {other:?}"))),
                    };
            }
            if let Some(&prev) = words.last() {
                if w == prev {
                    return Err(parse_err(*no, "duplicate word"));
                }
                if w < prev {
                    return Err(parse_err(*no, "words not sorted"));
                }
            }
            words.push(w);
        }
        codes.push(BinaryCode::new(n, words)?);
    }
    if codes.is_empty() {
        return Err(parse_err(1, "no PCC1 header"));
    }
    Ok(codes)
}

pub fn parse_pcc_str(s: &str) -> Result<Vec<BinaryCode>> {
    parse_pcc(s.as_bytes())
}

/// Writes codes as a PCC1 catalog; a header is repeated only when the length
/// changes.
pub fn write_pcc(codes: &[BinaryCode], w: &mut dyn Write) -> Result<()> {
    let mut n = None;
    for (k, c) in codes.iter().enumerate() {
        if k > 0 {
            writeln!(w)?;
        }
        if n != Some(c.n()) {
            writeln!(w, "PCC1 n={}", c.n())?;
            n = Some(c.n());
        }
        for &x in c.words() {
            writeln!(w, "{}", render_bits(x, c.n()))?;
        }
    }
    Ok(())
}

pub fn pcc_string(codes: &[BinaryCode]) -> String {
    let mut buf = Vec::new();
    write_pcc(codes, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Parses an MPC1 catalog: header `MPC1 alphabets=q1,...,qk`, then one word
/// per line as comma-separated digits, sorted.
pub fn parse_mpc(r: impl BufRead) -> Result<Vec<MixedCode>> {
    let mut codes = Vec::new();
    let mut alphabet: Option<MixedAlphabet> = None;
    for block in blocks(content_lines(r)?) {
        let mut body = &block[..];
        let (no, first) = &block[0];
        if first.starts_with("MPC1") {
            let v = header_value(first, "MPC1", "alphabets")
                .ok_or_else(|| parse_err(*no, format!("malformed header {first:?}")))?;
            let sizes = v
                .split(',')
                .map(|q| q.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_err(*no, format!("bad alphabets {v:?}")))?;
            alphabet = Some(MixedAlphabet::new(sizes).map_err(|e| parse_err(*no, e.to_string()))?);
            body = &block[1..];
        }
        let a = alphabet
            .clone()
            .ok_or_else(|| parse_err(*no, "missing MPC1 header"))?;
        if body.is_empty() {
            return Err(parse_err(*no, "code without words"));
        }
        let mut words: Vec<Vec<u8>> = Vec::with_capacity(body.len());
        for (no, line) in body {
            let digits = line
                .split(',')
                .map(|d| d.trim().parse::<u8>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_err(*no, format!("bad digits {line:?}")))?;
            if digits.len() != a.len() {
                return Err(parse_err(
                    *no,
                    format!("word has {} digits, alphabet has {}", digits.len(), a.len()),
                ));
            }
            for (&d, &q) in digits.iter().zip(a.sizes()) {
                if d as u32 >= q {
                    return Err(parse_err(*no, format!("digit {d} exceeds alphabet {q}")));
                }
            }
            if let Some(prev) = words.last() {
                if *prev == digits {
                    return Err(parse_err(*no, "duplicate word"));
                }
                if *prev > digits {
                    return Err(parse_err(*no, "words not sorted"));
                }
            }
            words.push(digits);
        }
        codes.push(MixedCode::new(a, words)?);
    }
    if codes.is_empty() {
        return Err(parse_err(1, "no MPC1 header"));
    }
    Ok(codes)
}

pub fn write_mpc(codes: &[MixedCode], w: &mut dyn Write) -> Result<()> {
    let mut current: Option<&MixedAlphabet> = None;
    for (k, c) in codes.iter().enumerate() {
        if k > 0 {
            writeln!(w)?;
        }
        if current != Some(c.alphabet()) {
            writeln!(w, "MPC1 alphabets={}", c.alphabet().render())?;
            current = Some(c.alphabet());
        }
        for word in c.words() {
            let s: Vec<String> = word.iter().map(|d| d.to_string()).collect();
            writeln!(w, "{}", s.join(","))?;
        }
    }
    Ok(())
}

/// Switching run state: digests in discovery order and the number of
/// expanded classes at the last checkpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunState {
    pub digests: Vec<String>,
    pub expanded: usize,
}

/// Parses a SCRUN1 file. `# expanded <k>` comments record checkpoints; the
/// last one wins.
pub fn parse_run(r: impl BufRead) -> Result<RunState> {
    let mut digests = Vec::new();
    let mut expanded = 0usize;
    let mut seen_header = false;
    for (i, line) in r.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let t = line.trim();
        if !seen_header {
            if t != "SCRUN1" {
                return Err(parse_err(no, "missing SCRUN1 header"));
            }
            seen_header = true;
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("expanded ") {
                expanded = v
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad checkpoint {v:?}")))?;
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        if t.len() != 64 || !t.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(parse_err(no, format!("not a digest: {t:?}")));
        }
        digests.push(t.to_string());
    }
    if !seen_header {
        return Err(parse_err(1, "empty run file"));
    }
    if expanded > digests.len() {
        return Err(parse_err(1, "checkpoint exceeds the number of digests"));
    }
    Ok(RunState { digests, expanded })
}

pub fn write_run(state: &RunState, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "SCRUN1")?;
    writeln!(w, "# expanded {}", state.expanded)?;
    for d in &state.digests {
        writeln!(w, "{d}")?;
    }
    Ok(())
}

/// Path of the PCC1 file holding the representatives of a run file.
pub fn run_companion(path: &std::path::Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".pcc");
    s.into()
}

/// Writes a design as `DESIGN v=<v> k=<k>` followed by one block per line,
/// points separated by spaces.
pub fn write_design(d: &BlockDesign, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "DESIGN v={} k={}", d.v(), d.k())?;
    for b in d.blocks() {
        let s: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        writeln!(w, "{}", s.join(" "))?;
    }
    Ok(())
}

pub fn parse_design(r: impl BufRead) -> Result<BlockDesign> {
    let lines = content_lines(r)?;
    let mut it = lines.into_iter().filter(|(_, l)| !l.is_empty());
    let (no, head) = it.next().ok_or_else(|| parse_err(1, "empty design"))?;
    let mut parts = head.split_whitespace();
    if parts.next() != Some("DESIGN") {
        return Err(parse_err(no, "missing DESIGN header"));
    }
    let mut field = |key: &str| -> Result<usize> {
        parts
            .next()
            .and_then(|p| p.strip_prefix(key))
            .and_then(|p| p.strip_prefix('='))
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| parse_err(no, format!("missing {key}=")))
    };
    let v = field("v")?;
    let k = field("k")?;
    let mut blocks = Vec::new();
    for (no, l) in it {
        let b = l
            .split_whitespace()
            .map(|p| p.parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| parse_err(no, format!("bad block {l:?}")))?;
        blocks.push(b);
    }
    BlockDesign::new(v, k, blocks)
}

/// Optional mapping from design canonical digests to external labels, one
/// `<digest> <label>` pair per line.
pub fn parse_label_map(r: impl BufRead) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for (no, l) in content_lines(r)? {
        if l.is_empty() {
            continue;
        }
        let (d, label) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(no, "expected <digest> <label>"))?;
        if out.insert(d.to_string(), label.trim().to_string()).is_some() {
            return Err(parse_err(no, format!("digest {d} listed twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    #[test]
    fn pcc_round_trip() {
        let codes = vec![
            hamming_code(2).unwrap(),
            hamming_code(3).unwrap(),
            BinaryCode::from_strs(&["001", "110"]).unwrap(),
        ];
        let s = pcc_string(&codes);
        assert_eq!(parse_pcc_str(&s).unwrap(), codes);
        assert_eq!(pcc_string(&[hamming_code(4).unwrap()]).lines().count(), 2049);
    }

    #[test]
    fn pcc_errors_carry_lines() {
        let cases = [
            ("PCC1 n=3\n000\n0111\n", 3),
            ("PCC1 n=3\n111\n000\n", 3),
            ("PCC1 n=3\n000\n000\n", 3),
            ("PCC1 n=3\n# note\n0a0\n", 3),
            ("PCC n=3\n000\n", 1),
            ("000\n", 1),
            ("PCC1 n=x\n000\n", 1),
        ];
        for (text, line) in cases {
            match parse_pcc_str(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn mpc_round_trip() {
        let a = MixedAlphabet::new(vec![4, 2]).unwrap();
        let m = MixedCode::new(a, [vec![0, 0], vec![3, 1]]).unwrap();
        let mut buf = Vec::new();
        write_mpc(std::slice::from_ref(&m), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "MPC1 alphabets=4,2\n0,0\n3,1\n");
        assert_eq!(parse_mpc(&buf[..]).unwrap(), vec![m]);
        assert!(parse_mpc("MPC1 alphabets=4,2\n0,2\n".as_bytes()).is_err());
        assert!(parse_mpc("MPC1 alphabets=3\n0\n".as_bytes()).is_err());
    }

    #[test]
    fn run_round_trip() {
        let st = RunState {
            digests: vec!["a".repeat(64), "0".repeat(64)],
            expanded: 1,
        };
        let mut buf = Vec::new();
        write_run(&st, &mut buf).unwrap();
        assert_eq!(parse_run(&buf[..]).unwrap(), st);
        assert!(parse_run("SCRUN1\nxyz\n".as_bytes()).is_err());
        assert!(parse_run("RUN\n".as_bytes()).is_err());
    }

    #[test]
    fn design_round_trip() {
        let d = BlockDesign::new(7, 3, [vec![1, 2, 3], vec![1, 4, 5]]).unwrap();
        let mut buf = Vec::new();
        write_design(&d, &mut buf).unwrap();
        assert_eq!(parse_design(&buf[..]).unwrap(), d);
        let m = parse_label_map("# labels\nabc 1\ndef 80\n".as_bytes()).unwrap();
        assert_eq!(m["def"], "80");
    }
}

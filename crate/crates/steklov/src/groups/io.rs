//! Plain-text serialization of groups and labeled subgroups.
//!
//! Format:
//!
//! ```text
//! order n
//! <n lines of n space-separated product indices>
//! identity i
//! subgroup NAME: i1 i2 ...
//! ```

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

pub fn render_group(group: &FiniteGroup, subgroups: &[(String, Subgroup)]) -> String {
    let n = group.order();
    let mut out = String::new();
    out.push_str(&format!("order {n}\n"));
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| group.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("identity {}\n", group.identity()));
    for (name, sg) in subgroups {
        let members: Vec<String> = sg.members().iter().map(|m| m.to_string()).collect();
        out.push_str(&format!("subgroup {name}: {}\n", members.join(" ")));
    }
    out
}

pub fn parse_group(text: &str) -> Result<(FiniteGroup, Vec<(String, Subgroup)>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("order")
        .ok_or_else(|| Error::Parse("expected `order n`".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad order: {e}")))?;
    let mut mul = Vec::with_capacity(n * n);
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse("truncated multiplication table".into()))?;
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|e| Error::Parse(format!("bad index: {e}")))?;
            mul.push(v);
        }
    }
    if mul.len() != n * n {
        return Err(Error::Parse(format!(
            "expected {} table entries, got {}",
            n * n,
            mul.len()
        )));
    }
    let id_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `identity` line".into()))?;
    let id: usize = id_line
        .trim()
        .strip_prefix("identity")
        .ok_or_else(|| Error::Parse("expected `identity i`".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad identity: {e}")))?;
    if id != 0 {
        return Err(Error::Parse("identity must be element 0".into()));
    }
    let group = FiniteGroup::from_table(n, mul, None)?;
    let mut subgroups = Vec::new();
    for line in lines {
        let rest = line
            .trim()
            .strip_prefix("subgroup")
            .ok_or_else(|| Error::Parse(format!("unexpected line: {line}")))?;
        let (name, members_str) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("subgroup line missing `:`".into()))?;
        let members: Vec<usize> = members_str
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad member: {e}"))))
            .collect::<Result<_>>()?;
        let sg = Subgroup::new(&group, members)?;
        subgroups.push((name.trim().to_string(), sg));
    }
    Ok((group, subgroups))
}

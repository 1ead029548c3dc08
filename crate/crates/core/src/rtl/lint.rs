use super::params::PipelineParams;
use crate::error::{Error, Result};

/// What the structural check saw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintReport {
    pub module_name: String,
    /// (direction, name, width) in declaration order.
    pub ports: Vec<(String, String, u32)>,
    pub acc_width: u32,
}

const PORTS: [(&str, &str); 8] = [
    ("input", "clk"),
    ("input", "rst"),
    ("input", "valid_in"),
    ("input", "last"),
    ("input", "a"),
    ("input", "b"),
    ("output", "valid_out"),
    ("output", "result"),
];

fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.split("//").next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '$')).filter(|w| !w.is_empty())
}

/// `[h:0]` -> h + 1; no range -> 1.
fn range_width(decl: &str) -> Result<u32> {
    let Some(open) = decl.find('[') else { return Ok(1) };
    let close = decl[open..].find(']').ok_or_else(|| Error::Lint(format!("unclosed range in `{decl}`")))? + open;
    let (hi, lo) = decl[open + 1..close]
        .split_once(':')
        .ok_or_else(|| Error::Lint(format!("range without `:` in `{decl}`")))?;
    let hi: u32 = hi.trim().parse().map_err(|_| Error::Lint(format!("non-literal port range in `{decl}`")))?;
    if lo.trim() != "0" {
        return Err(Error::Lint(format!("range must end at 0 in `{decl}`")));
    }
    Ok(hi + 1)
}

/// Structural self-check of emitted text: a single balanced module, balanced
/// delimiters and `begin`/`end`, the eight ports with the widths in
/// `params`, and a signed accumulator register of `acc_width` bits.
pub fn lint(text: &str, params: &PipelineParams) -> Result<LintReport> {
    let code = strip_comments(text);

    let (mut modules, mut endmodules, mut begins, mut ends) = (0, 0, 0i64, 0i64);
    for w in words(&code) {
        match w {
            "module" => modules += 1,
            "endmodule" => endmodules += 1,
            "begin" => begins += 1,
            "end" => ends += 1,
            _ => {}
        }
    }
    if modules != 1 || endmodules != 1 {
        return Err(Error::Lint(format!("expected one module/endmodule pair, found {modules}/{endmodules}")));
    }
    if begins != ends {
        return Err(Error::Lint(format!("{begins} `begin` against {ends} `end`")));
    }
    for (o, c) in [('(', ')'), ('[', ']'), ('{', '}')] {
        let mut depth = 0i64;
        for ch in code.chars() {
            if ch == o {
                depth += 1;
            } else if ch == c {
                depth -= 1;
            }
            if depth < 0 {
                return Err(Error::Lint(format!("unbalanced `{c}`")));
            }
        }
        if depth != 0 {
            return Err(Error::Lint(format!("unbalanced `{o}`")));
        }
    }

    let head_start = code.find("module").expect("counted above");
    let rest = &code[head_start + "module".len()..];
    let open = rest.find('(').ok_or_else(|| Error::Lint("module has no port list".into()))?;
    let module_name = rest[..open].trim().to_string();
    let close = rest.find(");").ok_or_else(|| Error::Lint("port list not closed".into()))?;
    let ports = rest[open + 1..close]
        .split(',')
        .map(|decl| {
            let decl = decl.trim();
            let dir = words(decl).next().unwrap_or("").to_string();
            let name = words(decl).last().unwrap_or("").to_string();
            Ok((dir, name, range_width(decl)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let widths = [1, 1, 1, 1, params.in_width, params.in_width, 1, params.out_width];
    if ports.len() != PORTS.len() {
        return Err(Error::Lint(format!("expected {} ports, found {}", PORTS.len(), ports.len())));
    }
    for (((dir, name, width), (want_dir, want_name)), want_w) in ports.iter().zip(PORTS).zip(widths) {
        if dir != want_dir || name != want_name || *width != want_w {
            return Err(Error::Lint(format!(
                "port `{dir} {name}` [{width}] should be `{want_dir} {want_name}` [{want_w}]"
            )));
        }
    }

    let acc_decl = format!("reg signed [{}:0] acc;", params.acc_width - 1);
    if !code.contains(&acc_decl) {
        return Err(Error::Lint(format!("missing accumulator declaration `{acc_decl}`")));
    }
    Ok(LintReport { module_name, ports, acc_width: params.acc_width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accumulator::AccumConfig;
    use crate::formats::FormatSpec;
    use crate::rtl::{default_module_name, derive_params, emit_fdp};

    fn sample() -> (String, PipelineParams) {
        let cfg = AccumConfig::new(9, 6, -20).unwrap();
        let f = FormatSpec::BINARY32;
        let p = derive_params(f, cfg, f).unwrap();
        (emit_fdp(&p, cfg, f, f, &default_module_name(f, cfg, f)).unwrap(), p)
    }

    #[test]
    fn accepts_emitted_text() {
        let (text, p) = sample();
        let r = lint(&text, &p).unwrap();
        assert_eq!(r.module_name, "fdp_binary32_9_6_m20_binary32");
        assert_eq!(r.ports[4], ("input".to_string(), "a".to_string(), 32));
        assert_eq!(r.acc_width, 36);
    }

    #[test]
    fn catches_damage() {
        let (text, p) = sample();
        assert!(lint(&text.replace("endmodule", ""), &p).is_err());
        assert!(lint(&text.replacen("begin", "", 1), &p).is_err());
        assert!(lint(&text.replace("[31:0] a,", "[30:0] a,"), &p).is_err());
        assert!(lint(&text.replace("reg signed [35:0] acc;", "reg [35:0] acc;"), &p).is_err());
        assert!(lint(&format!("{text}\nmodule extra(); endmodule\n"), &p).is_err());
        let wider = PipelineParams { out_width: 64, ..p };
        assert!(lint(&text, &wider).is_err());
    }
}

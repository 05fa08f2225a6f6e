//! Set literals: `0,2,5`, `b:101001` (character `i` is element `i`), or
//! `@path` naming a file that holds either form.

use irreducible::SetWindow;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Parsed {
    Members(Vec<usize>),
    Bits(Vec<bool>),
}

/// Parse `text` into a window. Without `window` the window is the largest
/// member (comma form) or the string length minus one (binary form).
pub fn parse_set(text: &str, window: Option<usize>) -> Result<SetWindow, String> {
    let parsed = if let Some(path) = text.strip_prefix('@') {
        let body = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        let body = body.trim();
        if body.starts_with('@') {
            return Err(format!("{path}: file references do not nest"));
        }
        parse_inline(body)?
    } else {
        parse_inline(text.trim())?
    };
    match parsed {
        Parsed::Members(m) => {
            let n = match window {
                Some(n) => n,
                None => *m.iter().max().ok_or("an empty set literal needs --window")?,
            };
            SetWindow::from_members(n, m).map_err(|e| e.to_string())
        }
        Parsed::Bits(bits) => {
            if bits.is_empty() {
                return Err("empty binary literal".into());
            }
            let n = window.unwrap_or(bits.len() - 1);
            let members = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i);
            SetWindow::from_members(n, members).map_err(|e| e.to_string())
        }
    }
}

fn parse_inline(s: &str) -> Result<Parsed, String> {
    if let Some(bits) = s.strip_prefix("b:") {
        return bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(format!("bad binary digit {c:?} in {s:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Parsed::Bits);
    }
    if s.is_empty() {
        return Ok(Parsed::Members(Vec::new()));
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad set element {p:?} in {s:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Parsed::Members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(s: &SetWindow) -> Vec<usize> {
        s.members().collect()
    }

    #[test]
    fn comma_lists() {
        let a = parse_set("0,2,5", None).unwrap();
        assert_eq!((a.window(), members(&a)), (5, vec![0, 2, 5]));
        let a = parse_set("3, 1", Some(9)).unwrap();
        assert_eq!((a.window(), members(&a)), (9, vec![1, 3]));
        assert!(parse_set("1,x", None).is_err());
        assert!(parse_set("7", Some(5)).is_err());
        assert!(parse_set("", None).is_err());
        assert_eq!(parse_set("", Some(4)).unwrap(), SetWindow::empty(4));
    }

    #[test]
    fn binary_strings() {
        let a = parse_set("b:101001", None).unwrap();
        assert_eq!((a.window(), members(&a)), (5, vec![0, 2, 5]));
        let a = parse_set("b:10", Some(6)).unwrap();
        assert_eq!((a.window(), members(&a)), (6, vec![0]));
        assert!(parse_set("b:102", None).is_err());
        assert!(parse_set("b:", None).is_err());
        assert!(parse_set("b:0001", Some(2)).is_err());
    }

    #[test]
    fn file_references() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        std::fs::write(&p, "b:0110\n").unwrap();
        let a = parse_set(&format!("@{}", p.display()), None).unwrap();
        assert_eq!(members(&a), vec![1, 2]);
        std::fs::write(&p, "4,8").unwrap();
        assert_eq!(parse_set(&format!("@{}", p.display()), None).unwrap().window(), 8);
        assert!(parse_set("@/nonexistent/file", None).is_err());
    }
}

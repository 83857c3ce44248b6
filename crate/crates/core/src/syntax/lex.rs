use super::Prim;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Plus,
    Star,
    Bang,
    Dot,
    /// `(+)`
    OPlus,
    /// `(*)`
    OTimes,
    /// `:=`
    Assign,
    Num(u64),
    Const(Prim),
    Word(String),
    /// `$name`
    Meta(String),
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Dot => "`.`".into(),
            Tok::OPlus => "`(+)`".into(),
            Tok::OTimes => "`(*)`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Num(n) => format!("number {n}"),
            Tok::Const(p) => format!("constant `{p}`"),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Meta(m) => format!("metavariable `${m}`"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// Splits `src` into tokens. Returns the offending byte offset on failure.
pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, usize> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' if bytes.get(i + 1) == Some(&b'+') && bytes.get(i + 2) == Some(&b')') => {
                i += 3;
                Tok::OPlus
            }
            b'(' if bytes.get(i + 1) == Some(&b'*') && bytes.get(i + 2) == Some(&b')') => {
                i += 3;
                Tok::OTimes
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b';' => {
                i += 1;
                Tok::Semi
            }
            b'+' => {
                i += 1;
                Tok::Plus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'.' => {
                i += 1;
                Tok::Dot
            }
            b':' if bytes.get(i + 1) == Some(&b'=') => {
                i += 2;
                Tok::Assign
            }
            b'$' => {
                i += 1;
                let s = i;
                while i < bytes.len() && is_ident(bytes[i]) {
                    i += 1;
                }
                if s == i {
                    return Err(start);
                }
                Tok::Meta(src[s..i].to_string())
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(src[start..i].parse().map_err(|_| start)?)
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && is_ident(bytes[i]) {
                    i += 1;
                }
                let word = &src[start..i];
                lex_word(src, word, &mut i)
            }
            _ => return Err(start),
        };
        out.push(Spanned { tok, pos: start });
    }
    Ok(out)
}

/// Constants carry a `+`/`*` suffix, optionally followed by `l`/`r`; take
/// the longest spelling that names a constant.
fn lex_word(src: &str, word: &str, i: &mut usize) -> Tok {
    let bytes = src.as_bytes();
    if let Some(&op @ (b'+' | b'*')) = bytes.get(*i) {
        if let Some(&side @ (b'l' | b'r')) = bytes.get(*i + 1) {
            let ends = bytes.get(*i + 2).is_none_or(|&c| !is_ident(c));
            if ends {
                let name = format!("{word}{}{}", op as char, side as char);
                if let Some(p) = Prim::from_name(&name) {
                    *i += 2;
                    return Tok::Const(p);
                }
            }
        }
        let name = format!("{word}{}", op as char);
        if let Some(p) = Prim::from_name(&name) {
            *i += 1;
            return Tok::Const(p);
        }
    }
    match Prim::from_name(word) {
        Some(p) => Tok::Const(p),
        None => Tok::Word(word.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn suffixed_constants_win_over_operators() {
        assert_eq!(
            toks("unite+l ; swap++id"),
            vec![
                Tok::Const(Prim::UniteSumL),
                Tok::Semi,
                Tok::Const(Prim::SwapSum),
                Tok::Plus,
                Tok::Const(Prim::Id),
            ]
        );
        assert_eq!(
            toks("id+id"),
            vec![Tok::Const(Prim::Id), Tok::Plus, Tok::Const(Prim::Id)]
        );
        assert_eq!(toks("uniti*r"), vec![Tok::Const(Prim::UnitiProdR)]);
    }

    #[test]
    fn rewrite_operators() {
        assert_eq!(
            toks("a (+) b (*) $c0"),
            vec![
                Tok::Word("a".into()),
                Tok::OPlus,
                Tok::Word("b".into()),
                Tok::OTimes,
                Tok::Meta("c0".into()),
            ]
        );
    }

    #[test]
    fn rejects_stray_characters() {
        assert_eq!(lex("swap+ & id").unwrap_err(), 6);
    }
}

use super::{tokenize, Token};

/// Concatenates token spellings, with a single space wherever a token had
/// leading whitespace.
///
/// A space is also inserted between two tokens that would otherwise lex
/// differently when glued together (`+` `+`, `1` `x`, `/` `/`), so the
/// output always re-tokenizes to the same kinds and spellings.
pub fn render(tokens: &[Token]) -> String {
    let mut out = String::new();
    let mut prev: Option<&Token> = None;
    for tok in tokens {
        if let Some(p) = prev {
            if tok.leading_space || glues(p, tok) {
                out.push(' ');
            }
        }
        out.push_str(&tok.spelling);
        prev = Some(tok);
    }
    out
}

fn glues(a: &Token, b: &Token) -> bool {
    let joined = format!("{}{}", a.spelling, b.spelling);
    match tokenize(&joined) {
        Ok(toks) => {
            toks.len() != 2
                || toks[0].kind != a.kind
                || toks[0].spelling != a.spelling
                || toks[1].kind != b.kind
                || toks[1].spelling != b.spelling
        }
        Err(_) => true,
    }
}

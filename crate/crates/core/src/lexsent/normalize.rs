//! Spanish tweet-text normalization to lowercase ASCII tokens.
//!
//! The pipeline, in order:
//!
//! 1. delete every maximal whitespace-delimited token starting with `http`
//!    (matched case-insensitively so URLs survive nothing);
//! 2. fold the Spanish diacritics and inverted marks to ASCII equivalents
//!    and drop any other character above 0x7F;
//! 3. lowercase;
//! 4. split on whitespace;
//! 5. keep only tokens whose first character is a letter `a`-`z`, and drop
//!    the rare token that folding turned into an `http` prefix.
//!
//! The result is idempotent: normalizing the space-joined output is a no-op.

use alloc::string::String;
use alloc::vec::Vec;

fn starts_with_http_ci(token: &str) -> bool {
    let mut chars = token.chars();
    for expected in ['h', 't', 't', 'p'] {
        match chars.next() {
            Some(c) if c.to_ascii_lowercase() == expected => {}
            _ => return false,
        }
    }
    true
}

fn fold_char(c: char) -> Option<char> {
    match c {
        'á' | 'Á' => Some('a'),
        'é' | 'É' => Some('e'),
        'í' | 'Í' => Some('i'),
        'ó' | 'Ó' => Some('o'),
        'ú' | 'Ú' | 'ü' | 'Ü' => Some('u'),
        'ñ' | 'Ñ' => Some('n'),
        '¿' => Some('?'),
        '¡' => Some('!'),
        c if (c as u32) <= 0x7F => Some(c),
        _ => None,
    }
}

/// Normalize raw tweet text to a list of lowercase ASCII tokens.
pub fn normalize_text(text: &str) -> Vec<String> {
    // Pass 1: drop URL tokens, preserving the surrounding text verbatim.
    let mut stripped = String::with_capacity(text.len());
    for piece in split_keeping_whitespace(text) {
        match piece {
            Piece::Whitespace(ws) => stripped.push_str(ws),
            Piece::Word(w) => {
                if !starts_with_http_ci(w) {
                    stripped.push_str(w);
                }
            }
        }
    }
    // Passes 2-3: fold, drop non-ASCII, lowercase.
    let folded: String = stripped
        .chars()
        .filter_map(fold_char)
        .map(|c| c.to_ascii_lowercase())
        .collect();
    // Passes 4-5: split and keep letter-initial tokens.
    folded
        .split_whitespace()
        .filter(|t| {
            t.chars()
                .next()
                .is_some_and(|c| c.is_ascii_lowercase())
                && !t.starts_with("http")
        })
        .map(String::from)
        .collect()
}

enum Piece<'a> {
    Whitespace(&'a str),
    Word(&'a str),
}

fn split_keeping_whitespace(text: &str) -> impl Iterator<Item = Piece<'_>> {
    let mut rest = text;
    core::iter::from_fn(move || {
        if rest.is_empty() {
            return None;
        }
        let first_is_ws = rest.chars().next().unwrap().is_whitespace();
        let split_at = rest
            .char_indices()
            .find(|(_, c)| c.is_whitespace() != first_is_ws)
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let (piece, tail) = rest.split_at(split_at);
        rest = tail;
        Some(if first_is_ws {
            Piece::Whitespace(piece)
        } else {
            Piece::Word(piece)
        })
    })
}

use super::Token;

/// Words whose final apostrophe marks an elision (`d'Artouste`, `l'aven`).
const ELISIONS: &[&str] = &[
    "l", "d", "j", "m", "n", "s", "t", "c", "qu", "jusqu", "lorsqu", "puisqu", "quoiqu", "presqu",
];

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02bc}')
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

fn ends_sentence(surface: &str) -> bool {
    matches!(surface, "." | "!" | "?" | "…")
}

/// Splits text into words and punctuation. French elisions keep their
/// apostrophe (`d'`), hyphenated words stay whole, and every other
/// non-alphanumeric, non-space character is a token of its own.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens: Vec<Token> = Vec::new();
    let mut i = 0;
    let push = |tokens: &mut Vec<Token>, start: usize, end: usize| {
        let surface = &text[start..end];
        let sentence_initial = tokens.last().is_none_or(|t| ends_sentence(&t.surface));
        tokens.push(Token {
            surface: surface.to_string(),
            start,
            end,
            lemma: None,
            pos: None,
            capitalized: surface.chars().next().is_some_and(char::is_uppercase),
            sentence_initial,
        });
    };
    let byte_at = |k: usize| chars.get(k).map_or(text.len(), |&(b, _)| b);

    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_alphanumeric() {
            push(&mut tokens, start, byte_at(i + 1));
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while let Some(&(_, cj)) = chars.get(j) {
            let next_alnum = chars.get(j + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
            if cj.is_alphanumeric() || (is_hyphen(cj) && next_alnum) {
                j += 1;
            } else if is_apostrophe(cj) {
                let word = text[start..byte_at(j)].to_lowercase();
                if ELISIONS.contains(&word.as_str()) {
                    j += 1;
                    break;
                } else if next_alnum {
                    j += 1;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        push(&mut tokens, start, byte_at(j));
        i = j;
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn elision_splits() {
        assert_eq!(surfaces("le lac d'Artouste"), ["le", "lac", "d'", "Artouste"]);
        assert_eq!(surfaces("l’aven"), ["l’", "aven"]);
        assert_eq!(surfaces("aujourd'hui"), ["aujourd'hui"]);
        assert_eq!(surfaces("jusqu'au col"), ["jusqu'", "au", "col"]);
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \n\t").is_empty());
    }

    #[test]
    fn punctuation_is_isolated() {
        assert_eq!(surfaces("Pau."), ["Pau", "."]);
        assert_eq!(surfaces("Ossau, Aspe; (Pau)"), ["Ossau", ",", "Aspe", ";", "(", "Pau", ")"]);
        assert_eq!(surfaces("- tiret"), ["-", "tiret"]);
    }

    #[test]
    fn hyphens_stay_inside_words() {
        assert_eq!(surfaces("Saint-Jean-de-Luz au sud-ouest"), ["Saint-Jean-de-Luz", "au", "sud-ouest"]);
    }

    #[test]
    fn spans_and_flags() {
        let toks = tokenize("Le pic. Ensuite Élodie");
        assert_eq!(toks[0].start, 0);
        assert_eq!(toks[0].end, 2);
        assert!(toks[0].sentence_initial && toks[0].capitalized);
        assert!(!toks[1].sentence_initial);
        assert!(toks[3].sentence_initial);
        assert!(toks[4].capitalized, "accented capitals count as uppercase");
        assert_eq!(&"Le pic. Ensuite Élodie"[toks[4].start..toks[4].end], "Élodie");
    }

    proptest! {
        #[test]
        fn tokens_cover_all_non_whitespace(text in "[a-zA-Zéèàç' .,;:!?()\\-]{0,60}") {
            let toks = tokenize(&text);
            let covered: String = toks.iter().map(|t| t.surface.as_str()).collect();
            let expected: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(covered, expected);
            for w in toks.windows(2) {
                prop_assert!(w[0].end <= w[1].start);
            }
            for t in &toks {
                prop_assert!(t.start < t.end);
                prop_assert_eq!(&text[t.start..t.end], t.surface.as_str());
            }
        }
    }
}

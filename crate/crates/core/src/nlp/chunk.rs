use super::{Lexicon, Pos, Token};

/// A contiguous nominal term, `first..=last` token indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermChunk {
    pub first: usize,
    pub last: usize,
    /// Space-joined lemmas.
    pub lemma_form: String,
}

impl TermChunk {
    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn content(t: &Token, lexicon: &Lexicon, allow_adj: bool) -> bool {
    let nominal = t.pos.is_some_and(Pos::is_nominal);
    let adj = allow_adj && t.is(Pos::Adj);
    (nominal || adj) && !lexicon.is_stopword(&t.surface)
}

/// Maximal runs of `(Noun|ProperNoun) (Prep? Det? (Noun|ProperNoun|Adj))*`.
/// Stopwords can only fill the Prep/Det connector positions.
pub fn chunk_terms(tokens: &[Token], lexicon: &Lexicon) -> Vec<TermChunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !content(&tokens[i], lexicon, false) {
            i += 1;
            continue;
        }
        let mut last = i;
        loop {
            let mut k = last + 1;
            if tokens.get(k).is_some_and(|t| t.is(Pos::Prep)) {
                k += 1;
            }
            if tokens.get(k).is_some_and(|t| t.is(Pos::Det)) {
                k += 1;
            }
            match tokens.get(k) {
                Some(t) if content(t, lexicon, true) => last = k,
                _ => break,
            }
        }
        let lemma_form = tokens[i..=last]
            .iter()
            .map(Token::lemma)
            .collect::<Vec<_>>()
            .join(" ");
        chunks.push(TermChunk {
            first: i,
            last,
            lemma_form,
        });
        i = last + 1;
    }
    chunks
}

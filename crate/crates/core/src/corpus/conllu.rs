use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use super::{AbstractDoc, CorpusError, DependencySentence, Token};

struct PendingSentence {
    pmid: String,
    sent_id: usize,
    text: String,
    tokens: Vec<Token>,
    line: usize,
}

#[derive(Default)]
struct Builder {
    order: Vec<String>,
    docs: HashMap<String, Vec<(DependencySentence, usize)>>,
}

impl Builder {
    fn push(&mut self, p: PendingSentence) -> Result<(), CorpusError> {
        let sentence = DependencySentence::new(p.sent_id, p.text, p.tokens).map_err(|source| {
            CorpusError::InvalidTree {
                pmid: p.pmid.clone(),
                sent_id: p.sent_id,
                source,
            }
        })?;
        let entry = self.docs.entry(p.pmid.clone()).or_insert_with(|| {
            self.order.push(p.pmid.clone());
            Vec::new()
        });
        if entry.iter().any(|(s, _)| s.sent_id == p.sent_id) {
            return Err(CorpusError::DuplicateSentId {
                pmid: p.pmid,
                sent_id: p.sent_id,
                line: p.line,
            });
        }
        entry.push((sentence, p.line));
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<AbstractDoc>, CorpusError> {
        let mut out = Vec::with_capacity(self.order.len());
        for pmid in self.order {
            let mut sents: Vec<DependencySentence> =
                self.docs.remove(&pmid).unwrap().into_iter().map(|(s, _)| s).collect();
            sents.sort_by_key(|s| s.sent_id);
            for (i, s) in sents.iter().enumerate() {
                if s.sent_id != i {
                    return Err(CorpusError::MissingSentence { pmid, missing: i });
                }
            }
            let mut iter = sents.into_iter();
            let title = iter.next().unwrap();
            out.push(AbstractDoc {
                pmid,
                title,
                sentences: iter.collect(),
            });
        }
        Ok(out)
    }
}

/// Reads the CoNLL-U dialect: `# pmid`, `# sent_id` and `# text` comments,
/// ten tab-separated columns, `start=<n>|end=<n>` in MISC.
pub fn load_conllu<R: BufRead>(reader: R) -> Result<Vec<AbstractDoc>, CorpusError> {
    let mut builder = Builder::default();
    let mut pmid: Option<String> = None;
    let mut sent_id: Option<usize> = None;
    let mut text: Option<String> = None;
    let mut tokens: Vec<Token> = Vec::new();
    let mut block_line = 0;
    let mut next_ordinal: HashMap<String, usize> = HashMap::new();

    let mut flush = |pmid: &Option<String>,
                     sent_id: &mut Option<usize>,
                     text: &mut Option<String>,
                     tokens: &mut Vec<Token>,
                     line: usize,
                     builder: &mut Builder|
     -> Result<(), CorpusError> {
        if tokens.is_empty() {
            if sent_id.is_some() || text.is_some() {
                return Err(CorpusError::Malformed {
                    line,
                    message: "sentence has no token lines".into(),
                });
            }
            return Ok(());
        }
        let Some(pmid) = pmid.clone() else {
            return Err(CorpusError::Malformed {
                line,
                message: "sentence appears before any `# pmid` comment".into(),
            });
        };
        let ordinal = next_ordinal.entry(pmid.clone()).or_insert(0);
        let id = sent_id.take().unwrap_or(*ordinal);
        *ordinal = id + 1;
        let text = text.take().unwrap_or_else(|| {
            tokens.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" ")
        });
        builder.push(PendingSentence {
            pmid,
            sent_id: id,
            text,
            tokens: std::mem::take(tokens),
            line,
        })
    };

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            flush(&pmid, &mut sent_id, &mut text, &mut tokens, block_line, &mut builder)?;
            continue;
        }
        if tokens.is_empty() && sent_id.is_none() && text.is_none() {
            block_line = lineno;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some((key, value)) = comment.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "pmid" => {
                        if !tokens.is_empty() {
                            return Err(malformed(lineno, "`# pmid` inside a sentence block"));
                        }
                        if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(malformed(lineno, format!("pmid `{value}` is not a digit string")));
                        }
                        pmid = Some(value.to_string());
                    }
                    "sent_id" => {
                        let id = value
                            .parse()
                            .map_err(|_| malformed(lineno, format!("sent_id `{value}` is not a number")))?;
                        sent_id = Some(id);
                    }
                    "text" => {
                        // keep the text exactly as written after "# text = "
                        let raw = line.split_once('=').map(|x| x.1).unwrap_or("");
                        text = Some(raw.strip_prefix(' ').unwrap_or(raw).to_string());
                    }
                    _ => {}
                }
            }
            continue;
        }
        tokens.push(parse_token(line, lineno, tokens.len() + 1)?);
    }
    flush(&pmid, &mut sent_id, &mut text, &mut tokens, block_line, &mut builder)?;
    builder.finish()
}

pub fn parse_conllu(input: &str) -> Result<Vec<AbstractDoc>, CorpusError> {
    load_conllu(input.as_bytes())
}

fn malformed(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_token(line: &str, lineno: usize, expected: usize) -> Result<Token, CorpusError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(malformed(lineno, format!("expected 10 tab-separated columns, found {}", cols.len())));
    }
    if cols[0].contains(['-', '.']) {
        return Err(malformed(lineno, format!("multiword or empty node `{}` is not supported", cols[0])));
    }
    let index: usize = cols[0]
        .parse()
        .map_err(|_| malformed(lineno, format!("bad token id `{}`", cols[0])))?;
    if index != expected {
        return Err(malformed(lineno, format!("token id {index} out of sequence (expected {expected})")));
    }
    let head: usize = cols[6]
        .parse()
        .map_err(|_| malformed(lineno, format!("bad head `{}`", cols[6])))?;
    let form = cols[1].to_string();
    let lemma = match cols[2] {
        "_" => form.to_lowercase(),
        l => l.to_lowercase(),
    };
    let xpos = match cols[4] {
        "_" => None,
        x => Some(x.to_string()),
    };
    let mut start = None;
    let mut end = None;
    for item in cols[9].split('|') {
        if let Some((k, v)) = item.split_once('=') {
            let parse = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| malformed(lineno, format!("bad offset `{item}`")))
            };
            match k {
                "start" => start = Some(parse(v)?),
                "end" => end = Some(parse(v)?),
                _ => {}
            }
        }
    }
    let (Some(char_start), Some(char_end)) = (start, end) else {
        return Err(malformed(lineno, "MISC must carry start=<n>|end=<n>"));
    };
    Ok(Token {
        index,
        form,
        lemma,
        upos: cols[3].to_string(),
        xpos,
        head,
        deprel: cols[7].to_string(),
        char_start,
        char_end,
    })
}

/// Serializes documents in the canonical dialect read by [`load_conllu`].
pub fn write_conllu(docs: &[AbstractDoc]) -> String {
    let mut out = String::new();
    for doc in docs {
        for (i, s) in doc.all_sentences().enumerate() {
            if i == 0 {
                let _ = writeln!(out, "# pmid = {}", doc.pmid);
            }
            let _ = writeln!(out, "# sent_id = {}", s.sent_id);
            let _ = writeln!(out, "# text = {}", s.text);
            for t in &s.tokens {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\tstart={}|end={}",
                    t.index,
                    t.form,
                    t.lemma,
                    t.upos,
                    t.xpos.as_deref().unwrap_or("_"),
                    t.head,
                    t.deprel,
                    t.char_start,
                    t.char_end
                );
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GENE_X: &str = "# pmid = 1\n# sent_id = 0\n# text = Gene X .\n\
1\tGene\tgene\tNOUN\tNN\t_\t2\tcompound\t_\tstart=0|end=4\n\
2\tX\tx\tPROPN\tNNP\t_\t0\troot\t_\tstart=5|end=6\n\
3\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\tstart=7|end=8\n\n";

    #[test]
    fn empty_stream() {
        assert!(parse_conllu("").unwrap().is_empty());
    }

    #[test]
    fn minimal_tree() {
        let docs = parse_conllu(GENE_X).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].all_sentences().count(), 1);
        assert_eq!(docs[0].title.root(), Some(2));
        assert_eq!(write_conllu(&docs), GENE_X);
    }

    #[test]
    fn malformed_line_names_line_number() {
        let bad = GENE_X.replace("2\tX\tx\tPROPN", "2\tX\tx");
        match parse_conllu(&bad) {
            Err(CorpusError::Malformed { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_sent_id() {
        let twice = format!("{GENE_X}{}", GENE_X.replace("# pmid = 1\n", ""));
        assert!(matches!(
            parse_conllu(&twice),
            Err(CorpusError::DuplicateSentId { sent_id: 0, .. })
        ));
    }

    #[test]
    fn cycle_names_pmid_and_sentence() {
        let cyclic = GENE_X.replace("\t0\troot", "\t3\troot");
        let err = parse_conllu(&cyclic).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("pmid 1") && msg.contains("sent_id 0"), "{msg}");
    }

    #[test]
    fn gaps_in_sent_ids_are_rejected() {
        let gap = GENE_X.replace("# sent_id = 0", "# sent_id = 1");
        assert!(matches!(parse_conllu(&gap), Err(CorpusError::MissingSentence { .. })));
    }

    #[test]
    fn missing_offsets() {
        let bad = GENE_X.replace("start=5|end=6", "_");
        assert!(matches!(parse_conllu(&bad), Err(CorpusError::Malformed { line: 5, .. })));
    }
}

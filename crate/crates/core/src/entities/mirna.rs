use std::sync::LazyLock;

use regex::Regex;

use super::{EntityMention, EntityType, MentionSource};

// species prefix, core, number, letter, paralog, arm
const GRAMMAR: &str = r"(?:[a-z]{3}-)?(?:miRNA|miR|mir|let)-\d+[a-z]?(?:-\d)?(?:-(?:3p|5p))?";

static SCAN: LazyLock<Regex> = LazyLock::new(|| Regex::new(&format!(r"\b{GRAMMAR}\b")).unwrap());
static FULL: LazyLock<Regex> = LazyLock::new(|| Regex::new(&format!(r"^{GRAMMAR}$")).unwrap());

/// Whole-string match against the miRNA name grammar.
pub fn is_mirna(s: &str) -> bool {
    FULL.is_match(s)
}

/// miRNA names in `text`, whose first byte sits at `base_offset` in the
/// abstract text. Matches are sorted and non-overlapping.
pub fn detect_mirna(pmid: &str, text: &str, base_offset: usize) -> Vec<EntityMention> {
    SCAN.find_iter(text)
        .map(|m| EntityMention {
            pmid: pmid.to_string(),
            char_start: base_offset + m.start(),
            char_end: base_offset + m.end(),
            surface: m.as_str().to_string(),
            etype: EntityType::MiRNA,
            norm_id: Some(m.as_str().to_lowercase()),
            source: MentionSource::Regex,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        detect_mirna("1", text, 0).into_iter().map(|m| m.surface).collect()
    }

    #[test]
    fn quoted_names() {
        assert_eq!(surfaces("miR-630 was significantly down-regulated"), vec!["miR-630"]);
        assert_eq!(surfaces("Plasma miR-187 was significantly higher"), vec!["miR-187"]);
        assert_eq!(surfaces("miR-195 expression was lower"), vec!["miR-195"]);
    }

    #[test]
    fn longest_form_wins() {
        assert_eq!(surfaces("hsa-miR-21-5p and let-7a-2 and miRNA-155"), vec!["hsa-miR-21-5p", "let-7a-2", "miRNA-155"]);
        assert_eq!(surfaces("anti-miR-21"), vec!["miR-21"]);
        assert!(surfaces("microRNA-630 and mirror-1").is_empty());
    }

    #[test]
    fn offsets_and_norm() {
        let m = detect_mirna("7", "Plasma miR-187", 47);
        assert_eq!((m[0].char_start, m[0].char_end), (54, 61));
        assert_eq!(m[0].norm_id.as_deref(), Some("mir-187"));
    }

    fn text_strategy() -> impl Strategy<Value = String> {
        let piece = prop_oneof![
            Just("miR-21".to_string()),
            Just("hsa-let-7a".to_string()),
            Just("mir-".to_string()),
            Just("-5p".to_string()),
            Just("-3".to_string()),
            Just(" ".to_string()),
            Just("and".to_string()),
            "[a-z0-9-]{1,4}",
        ];
        prop::collection::vec(piece, 0..12).prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn sorted_non_overlapping_and_idempotent(text in text_strategy()) {
            let ms = detect_mirna("1", &text, 0);
            for w in ms.windows(2) {
                prop_assert!(w[0].char_end <= w[1].char_start);
            }
            for m in &ms {
                prop_assert!(is_mirna(&m.surface));
                let again = detect_mirna("1", &m.surface, 0);
                prop_assert_eq!(again.len(), 1);
                prop_assert_eq!(&again[0].surface, &m.surface);
            }
        }
    }
}

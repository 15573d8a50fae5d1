use super::types::ScoreOutcome;

/// Extract the score from a raw model reply using the first-number rule.
///
/// Integer tokens are maximal ASCII digit runs, so "2023" is one token and
/// "3.5" yields the token "3". The first token decides the outcome: in 1..=5
/// it is the score, otherwise the reply counts as a no-response.
pub fn parse_score(raw: &str) -> ScoreOutcome {
    parse_score_with(raw, false)
}

/// Like [`parse_score`], but with `scan_past_invalid` the scan continues past
/// out-of-range tokens until an in-range one is found.
pub fn parse_score_with(raw: &str, scan_past_invalid: bool) -> ScoreOutcome {
    for token in digit_runs(raw) {
        match in_range_value(token) {
            Some(score) => return ScoreOutcome::Valid(score),
            None if scan_past_invalid => continue,
            None => break,
        }
    }
    ScoreOutcome::NoResponse(raw.to_string())
}

fn digit_runs(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(|c: char| !c.is_ascii_digit())
        .filter(|run| !run.is_empty())
}

fn in_range_value(token: &str) -> Option<u8> {
    // Multi-digit runs ("2023", "01") never count: the token as written must
    // be a single digit in 1..=5.
    if token.len() != 1 {
        return None;
    }
    match token.as_bytes()[0] - b'0' {
        score @ 1..=5 => Some(score),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_digit() {
        assert_eq!(parse_score("4"), ScoreOutcome::Valid(4));
    }

    #[test]
    fn first_number_wins() {
        assert_eq!(
            parse_score("I would rate this 2 out of 5"),
            ScoreOutcome::Valid(2)
        );
    }

    #[test]
    fn no_number_is_no_response() {
        let raw = "Cannot determine sentiment.";
        assert_eq!(parse_score(raw), ScoreOutcome::NoResponse(raw.into()));
    }

    #[test]
    fn out_of_range_first_number_is_no_response() {
        assert!(matches!(parse_score("Score: 7"), ScoreOutcome::NoResponse(_)));
        assert!(matches!(parse_score("0 stars"), ScoreOutcome::NoResponse(_)));
    }

    #[test]
    fn year_is_one_token_not_a_two() {
        assert!(matches!(parse_score("2023"), ScoreOutcome::NoResponse(_)));
    }

    #[test]
    fn decimal_takes_integer_part_token() {
        assert_eq!(parse_score("3.5"), ScoreOutcome::Valid(3));
    }

    #[test]
    fn zero_padded_digit_is_out_of_range() {
        assert!(matches!(parse_score("01"), ScoreOutcome::NoResponse(_)));
    }

    #[test]
    fn scan_past_invalid_continues() {
        assert_eq!(parse_score_with("Score: 7 of 5", true), ScoreOutcome::Valid(5));
        assert!(matches!(
            parse_score_with("Score: 7 of 9", true),
            ScoreOutcome::NoResponse(_)
        ));
    }

    #[test]
    fn empty_string() {
        assert!(matches!(parse_score(""), ScoreOutcome::NoResponse(_)));
    }
}

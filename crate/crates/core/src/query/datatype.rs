//! Lexical-space checks for the supported XSD datatypes.

use crate::rdf::vocab::xsd;

/// Datatypes `is_valid_for_datatype` knows. Others are accepted unchecked.
pub const SUPPORTED_DATATYPES: [&str; 10] = [
    xsd::STRING,
    xsd::BOOLEAN,
    xsd::INTEGER,
    xsd::NON_NEGATIVE_INTEGER,
    xsd::DECIMAL,
    xsd::DOUBLE,
    xsd::DATE,
    xsd::DATE_TIME,
    xsd::G_YEAR,
    xsd::ANY_URI,
];

pub fn is_supported_datatype(datatype: &str) -> bool {
    SUPPORTED_DATATYPES.contains(&datatype) || datatype == crate::rdf::vocab::rdf::LANG_STRING
}

/// True iff `lexical` is in the lexical space of `datatype`. Unsupported
/// datatypes are never flagged.
pub fn is_valid_for_datatype(lexical: &str, datatype: &str) -> bool {
    match datatype {
        xsd::STRING | crate::rdf::vocab::rdf::LANG_STRING => lexical.chars().all(is_xml_char),
        xsd::BOOLEAN => matches!(lexical, "true" | "false" | "1" | "0"),
        xsd::INTEGER => is_integer(lexical),
        // XSD allows a sign on zero, so "-0" and "+0" are valid.
        xsd::NON_NEGATIVE_INTEGER => {
            is_integer(lexical)
                && (!lexical.starts_with('-') || lexical[1..].bytes().all(|b| b == b'0'))
        }
        xsd::DECIMAL => is_decimal(lexical),
        xsd::DOUBLE => is_double(lexical),
        xsd::DATE => parse_date(lexical).is_some_and(is_timezone),
        xsd::DATE_TIME => is_date_time(lexical),
        xsd::G_YEAR => parse_year(lexical).is_some_and(|(_, rest)| is_timezone(rest)),
        xsd::ANY_URI => !lexical.chars().any(|c| c.is_control()),
        _ => true,
    }
}

fn is_xml_char(c: char) -> bool {
    matches!(c as u32, 0x9 | 0xA | 0xD | 0x20..=0xD7FF | 0xE000..=0xFFFD | 0x10000..=0x10FFFF)
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

pub(crate) fn is_integer(s: &str) -> bool {
    digits(strip_sign(s))
}

pub(crate) fn is_decimal(s: &str) -> bool {
    let body = strip_sign(s);
    match body.split_once('.') {
        None => digits(body),
        Some((int, frac)) => {
            (int.is_empty() || digits(int))
                && (frac.is_empty() || digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
    }
}

pub(crate) fn is_double(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    is_decimal(mantissa) && exponent.is_none_or(is_integer)
}

/// `-?YYYY` with more than four digits only without a leading zero.
/// Returns the year and the unparsed remainder.
fn parse_year(s: &str) -> Option<(i64, &str)> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let len = body.bytes().take_while(u8::is_ascii_digit).count();
    if len < 4 || (len > 4 && body.starts_with('0')) {
        return None;
    }
    let year: i64 = body[..len].parse().ok()?;
    Some((if neg { -year } else { year }, &body[len..]))
}

fn two_digits(s: &str) -> Option<(u32, &str)> {
    let b = s.as_bytes();
    if b.len() >= 2 && b[0].is_ascii_digit() && b[1].is_ascii_digit() {
        Some((u32::from(b[0] - b'0') * 10 + u32::from(b[1] - b'0'), &s[2..]))
    } else {
        None
    }
}

fn is_leap(year: i64) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

/// `YYYY-MM-DD`; returns the remainder.
fn parse_date(s: &str) -> Option<&str> {
    let (year, rest) = parse_year(s)?;
    let rest = rest.strip_prefix('-')?;
    let (month, rest) = two_digits(rest)?;
    let rest = rest.strip_prefix('-')?;
    let (day, rest) = two_digits(rest)?;
    let max_day = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => return None,
    };
    (1..=max_day).contains(&day).then_some(rest)
}

/// Empty, `Z`, or `(+|-)hh:mm` within ±14:00.
fn is_timezone(s: &str) -> bool {
    if s.is_empty() || s == "Z" {
        return true;
    }
    let Some(rest) = s.strip_prefix(['+', '-']) else {
        return false;
    };
    let Some((hh, rest)) = two_digits(rest) else {
        return false;
    };
    let Some(rest) = rest.strip_prefix(':') else {
        return false;
    };
    let Some((mm, rest)) = two_digits(rest) else {
        return false;
    };
    rest.is_empty() && mm <= 59 && (hh < 14 || (hh == 14 && mm == 0))
}

fn is_date_time(s: &str) -> bool {
    let Some(rest) = parse_date(s) else {
        return false;
    };
    let Some(rest) = rest.strip_prefix('T') else {
        return false;
    };
    let Some((hh, rest)) = two_digits(rest) else {
        return false;
    };
    let Some(rest) = rest.strip_prefix(':') else {
        return false;
    };
    let Some((mm, rest)) = two_digits(rest) else {
        return false;
    };
    let Some(rest) = rest.strip_prefix(':') else {
        return false;
    };
    let Some((ss, mut rest)) = two_digits(rest) else {
        return false;
    };
    let mut fraction_zero = true;
    if let Some(frac) = rest.strip_prefix('.') {
        let n = frac.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return false;
        }
        fraction_zero = frac[..n].bytes().all(|b| b == b'0');
        rest = &frac[n..];
    }
    let time_ok = if hh == 24 {
        mm == 0 && ss == 0 && fraction_zero
    } else {
        hh < 24 && mm < 60 && ss < 60
    };
    time_ok && is_timezone(rest)
}

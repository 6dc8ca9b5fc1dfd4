//! Fixed-width bit strings, stored as `u32` values with the first bit of the
//! string in the most significant position.

/// Render `x` as a `width`-bit string, most significant bit first.
pub fn format_bits(x: u32, width: u32) -> String {
    (0..width)
        .map(|i| {
            if x >> (width - 1 - i) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Parse a bit string into `(value, width)`. Returns `None` on empty input,
/// non-binary characters, or more than 32 bits.
pub fn parse_bits(s: &str) -> Option<(u32, u32)> {
    if s.is_empty() || s.len() > 32 {
        return None;
    }
    let mut v = 0u32;
    for c in s.chars() {
        v = (v << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return None,
            };
    }
    Some((v, s.len() as u32))
}

/// Bitwise complement within `width` bits.
pub fn complement(x: u32, width: u32) -> u32 {
    !x & mask(width)
}

/// All-ones mask of `width` bits.
pub fn mask(width: u32) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// Extract the bit at `pos` counting from the most significant end of a
/// `width`-bit string.
pub fn bit_msb(x: u32, width: u32, pos: u32) -> u32 {
    (x >> (width - 1 - pos)) & 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for width in 1..=6 {
            for x in 0..(1u32 << width) {
                let s = format_bits(x, width);
                assert_eq!(s.len() as u32, width);
                assert_eq!(parse_bits(&s), Some((x, width)));
            }
        }
    }

    #[test]
    fn msb_first() {
        assert_eq!(format_bits(0b10, 2), "10");
        assert_eq!(format_bits(1, 3), "001");
        assert_eq!(bit_msb(0b100, 3, 0), 1);
        assert_eq!(bit_msb(0b100, 3, 2), 0);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_bits(""), None);
        assert_eq!(parse_bits("01x"), None);
    }

    #[test]
    fn complement_stays_in_width() {
        assert_eq!(complement(0b01, 2), 0b10);
        assert_eq!(complement(0, 1), 1);
        assert_eq!(complement(0b111, 3), 0);
    }
}

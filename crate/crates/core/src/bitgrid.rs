//! Row-major bit grid, one `u64` run per row.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitGrid {
    width: usize,
    height: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitGrid {
    pub fn new(width: usize, height: usize) -> Self {
        let words_per_row = width.div_ceil(WORD);
        BitGrid {
            width,
            height,
            words_per_row,
            bits: vec![0; words_per_row * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Zero-based access; `x` is the column, `y` the row.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        let word = self.bits[y * self.words_per_row + x / WORD];
        (word >> (x % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        debug_assert!(x < self.width && y < self.height);
        let word = &mut self.bits[y * self.words_per_row + x / WORD];
        let mask = 1u64 << (x % WORD);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn row(&self, y: usize) -> &[u64] {
        let start = y * self.words_per_row;
        &self.bits[start..start + self.words_per_row]
    }

    pub fn row_mut(&mut self, y: usize) -> &mut [u64] {
        let start = y * self.words_per_row;
        &mut self.bits[start..start + self.words_per_row]
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Set bits as zero-based `(x, y)`, row by row.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.height).flat_map(move |y| {
            self.row(y).iter().enumerate().flat_map(move |(k, &word)| {
                let mut w = word;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((k * WORD + bit, y))
                })
            })
        })
    }

    /// Copy of the `width × height` window whose lower-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> BitGrid {
        let mut out = BitGrid::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if self.get(x0 + x, y0 + y) {
                    out.set(x, y, true);
                }
            }
        }
        out
    }
}

/// `dst ^= src << 1` across a multi-word row, dropping bits shifted past `width`.
pub(crate) fn xor_shifted_left_one(dst: &mut [u64], src: &[u64]) {
    let mut carry = 0u64;
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= (s << 1) | carry;
        carry = s >> 63;
    }
}

pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Clear bits at or beyond `width` in the last word of a row.
pub(crate) fn mask_tail(row: &mut [u64], width: usize) {
    let rem = width % WORD;
    if rem != 0 {
        if let Some(last) = row.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

impl std::fmt::Debug for BitGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitGrid {}x{}", self.width, self.height)?;
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                f.write_str(if self.get(x, y) { "#" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_count() {
        let mut g = BitGrid::new(130, 3);
        g.set(0, 0, true);
        g.set(64, 1, true);
        g.set(129, 2, true);
        assert!(g.get(0, 0) && g.get(64, 1) && g.get(129, 2));
        assert!(!g.get(1, 0));
        assert_eq!(g.count_ones(), 3);
        let ones: Vec<_> = g.iter_ones().collect();
        assert_eq!(ones, vec![(0, 0), (64, 1), (129, 2)]);
        g.set(64, 1, false);
        assert_eq!(g.count_ones(), 2);
    }

    #[test]
    fn shift_carries_across_words() {
        let mut dst = vec![0u64; 2];
        xor_shifted_left_one(&mut dst, &[1 << 63, 1]);
        assert_eq!(dst, vec![0, 0b11]);
        mask_tail(&mut dst, 65);
        assert_eq!(dst, vec![0, 0b1]);
    }
}

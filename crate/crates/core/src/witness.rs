//! Canonical byte-string witnesses. Two witnesses are semantically equal iff
//! their bytes are equal: element sets are written sorted ascending with a
//! length prefix, pairs ordered, counters fixed-width. Table deduplication is
//! then a plain byte-set operation.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness(pub Vec<u8>);

impl Witness {
    pub fn hex(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 2);
        for b in &self.0 {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w:{}", self.hex())
    }
}

#[derive(Default)]
pub struct Enc {
    buf: Vec<u8>,
}

impl Enc {
    pub fn new() -> Self {
        Enc { buf: Vec::new() }
    }

    pub fn u32(mut self, x: u32) -> Self {
        self.buf.extend_from_slice(&x.to_be_bytes());
        self
    }

    pub fn u8(mut self, x: u8) -> Self {
        self.buf.push(x);
        self
    }

    pub fn set(mut self, s: &BTreeSet<u32>) -> Self {
        self.buf.extend_from_slice(&(s.len() as u32).to_be_bytes());
        for &v in s {
            self.buf.extend_from_slice(&v.to_be_bytes());
        }
        self
    }

    /// Sorted list of ordered pairs (lo, hi).
    pub fn pairs(mut self, ps: &BTreeSet<(u32, u32)>) -> Self {
        self.buf.extend_from_slice(&(ps.len() as u32).to_be_bytes());
        for &(a, b) in ps {
            debug_assert!(a < b, "pairs stored ordered");
            self.buf.extend_from_slice(&a.to_be_bytes());
            self.buf.extend_from_slice(&b.to_be_bytes());
        }
        self
    }

    pub fn finish(self) -> Witness {
        Witness(self.buf)
    }
}

pub struct Dec<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Dec<'a> {
    pub fn new(w: &'a Witness) -> Self {
        Dec { buf: &w.0, pos: 0 }
    }

    pub fn u32(&mut self) -> u32 {
        let bytes: [u8; 4] = self.buf[self.pos..self.pos + 4].try_into().unwrap();
        self.pos += 4;
        u32::from_be_bytes(bytes)
    }

    pub fn u8(&mut self) -> u8 {
        let b = self.buf[self.pos];
        self.pos += 1;
        b
    }

    pub fn set(&mut self) -> BTreeSet<u32> {
        let len = self.u32() as usize;
        (0..len).map(|_| self.u32()).collect()
    }

    pub fn pairs(&mut self) -> BTreeSet<(u32, u32)> {
        let len = self.u32() as usize;
        (0..len).map(|_| (self.u32(), self.u32())).collect()
    }

    pub fn done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let s: BTreeSet<u32> = [3, 1, 2].into_iter().collect();
        let w = Enc::new().set(&s).u32(7).u8(1).finish();
        let mut d = Dec::new(&w);
        assert_eq!(d.set(), s);
        assert_eq!(d.u32(), 7);
        assert_eq!(d.u8(), 1);
        assert!(d.done());
        // Same set in any insertion order encodes identically.
        let s2: BTreeSet<u32> = [2, 3, 1].into_iter().collect();
        let w2 = Enc::new().set(&s2).u32(7).u8(1).finish();
        assert_eq!(w, w2);
    }
}

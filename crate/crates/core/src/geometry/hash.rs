//! Multiplicative hashing for integer grid keys.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

#[derive(Clone, Copy, Debug, Default)]
pub struct GridHasher(u64);

impl Hasher for GridHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_i64(&mut self, v: i64) {
        self.write_u64(v as u64);
    }

    fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }
}

/// Hash map keyed by grid cells.
pub type GridMap<K, V> = HashMap<K, V, BuildHasherDefault<GridHasher>>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_round_trip() {
        let mut m: GridMap<[i64; 2], usize> = GridMap::default();
        for i in -50..50 {
            for j in -50..50 {
                m.insert([i, j], (i * 1000 + j) as usize);
            }
        }
        assert_eq!(m.len(), 10_000);
        assert_eq!(m[&[-3, 7]], (-3i64 * 1000 + 7) as usize);
    }
}

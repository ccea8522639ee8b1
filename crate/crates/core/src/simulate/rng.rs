//! Per-path random streams.
//!
//! Every path gets its own generator whose seed is a bijective hash of the
//! run seed, a stream tag and the path index, so results depend only on
//! `(seed, index)` and never on how paths are scheduled across threads.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type PathRng = Xoshiro256PlusPlus;

pub(crate) const TAG_PATHS: u64 = 0x7061_7468;
pub(crate) const TAG_FIRST_PASSAGE: u64 = 0x6670_6173;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn path_rng(seed: u64, tag: u64, index: u64) -> PathRng {
    let key = mix64(seed ^ mix64(tag));
    PathRng::seed_from_u64(mix64(key ^ index.wrapping_mul(GOLDEN)))
}

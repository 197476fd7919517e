/// Default cap on candidate tuples visited by an enumeration.
pub const DEFAULT_MAX_WORK: u64 = 100_000_000;

/// Default largest `n` for which `PConf_n` characters are computed. The
/// Arnol'd algebra has total dimension `n!`.
pub const DEFAULT_MAX_PCONF_N: u32 = 8;

/// Resource guards shared by the enumeration and character routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_work: u64,
    pub max_pconf_n: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_work: DEFAULT_MAX_WORK,
            max_pconf_n: DEFAULT_MAX_PCONF_N,
        }
    }
}

impl Limits {
    pub fn with_max_work(max_work: u64) -> Self {
        Self {
            max_work,
            ..Self::default()
        }
    }
}

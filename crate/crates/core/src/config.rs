//! Resource caps. Algorithms consult these instead of embedding limits.

/// Largest degree accepted by permutation enumeration (8! = 40320 words).
pub const MAX_ENUM_N: usize = 8;

/// Largest degree for which full n! x n! matrices are built.
pub const MAX_MATRIX_N: usize = 7;

/// Largest degree for exact rank certification of full n! x n! matrices.
pub const MAX_CERTIFY_N: usize = 6;

/// Largest degree for symbolic polynomial-matrix products in general.
pub const MAX_SYMBOLIC_N: usize = 5;

/// Symbolic minimal-polynomial products for matrices with several variables.
pub const MAX_SYMBOLIC_MULTIVAR_N: usize = 4;

/// Symbolic products for matrices that are a single variable times an
/// integer matrix (F(n) = z * F1(n)); these reduce to integer products.
pub const MAX_SYMBOLIC_SCALAR_N: usize = 6;

/// Largest degree for O((n!)^2) group-algebra convolution.
pub const MAX_CONVOLUTION_N: usize = 5;

/// Largest degree for the character machinery.
pub const MAX_PARTITION_N: usize = 12;

/// Default specialization seeds used when none are given.
pub const DEFAULT_SEEDS: [u64; 3] = [0x5eed_0001, 0x5eed_0002, 0x5eed_0003];

/// Resampling budget for assignments that make predicted eigenvalues collide.
pub const ASSIGNMENT_RETRIES: usize = 64;

/// Upper end of the integer range used for random specializations.
pub const ASSIGNMENT_MAX: i64 = 1 << 20;

/// Caps bundled for callers (the CLI) that want to override them per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_matrix_n: usize,
    pub max_certify_n: usize,
    pub max_symbolic_n: usize,
    pub max_convolution_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_matrix_n: MAX_MATRIX_N,
            max_certify_n: MAX_CERTIFY_N,
            max_symbolic_n: MAX_SYMBOLIC_N,
            max_convolution_n: MAX_CONVOLUTION_N,
        }
    }
}

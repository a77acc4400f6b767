use crate::error::{Error, Result};

/// Largest supported space dimension.
pub const MAX_DIM: usize = 8;

/// Per-axis integer coordinates; only the first `k` entries are meaningful.
pub type Coords = [u32; MAX_DIM];

/// Dimension `k` and per-axis precision `r` of a regularly decomposed space.
///
/// The binary tree splits axis `level % k` at each level, lower half first,
/// so a cell is reached after `k * r` levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    k: u32,
    r: u32,
}

impl SpaceSpec {
    pub fn new(k: u32, r: u32) -> Result<Self> {
        if k == 0 || k as usize > MAX_DIM {
            return Err(Error::InvalidSpace { k, r, reason: "dimension must be in 1..=8" });
        }
        if r == 0 || r > 31 {
            return Err(Error::InvalidSpace { k, r, reason: "precision must be in 1..=31" });
        }
        if k * r > 63 {
            return Err(Error::InvalidSpace { k, r, reason: "depth k*r must not exceed 63" });
        }
        Ok(SpaceSpec { k, r })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.k as usize
    }

    /// Maximum tree depth `k * r`.
    pub fn depth(&self) -> u32 {
        self.k * self.r
    }

    /// Number of cells along one axis.
    pub fn cells_per_axis(&self) -> u64 {
        1u64 << self.r
    }

    /// Total number of cells, `2^(k*r)`.
    pub fn capacity(&self) -> u128 {
        1u128 << self.depth()
    }

    /// Depth limit for an operation at precision `p`.
    pub fn depth_at(&self, precision: u32) -> Result<u32> {
        if precision > self.r {
            return Err(Error::PrecisionOutOfRange { precision, r: self.r });
        }
        Ok(self.k * precision)
    }

    /// Axis split when descending from `level` to `level + 1`.
    pub fn axis(&self, level: u32) -> usize {
        (level % self.k) as usize
    }

    /// Number of times `axis` has been halved above `level`.
    pub fn splits(&self, level: u32, axis: usize) -> u32 {
        level / self.k + u32::from((axis as u32) < level % self.k)
    }

    /// Extent of a block at `level` along `axis`, in cells of precision `r`.
    pub fn extent(&self, level: u32, axis: usize) -> u32 {
        1u32 << (self.r - self.splits(level, axis))
    }

    /// Same space with a different precision.
    pub fn with_r(&self, r: u32) -> Result<Self> {
        SpaceSpec::new(self.k, r)
    }

    /// Same precision with a different dimension.
    pub fn with_k(&self, k: u32) -> Result<Self> {
        SpaceSpec::new(k, self.r)
    }
}

/// A block of the decomposition: the region addressed by a node.
///
/// `code` holds the `level` path bits (1 = upper half), most significant first.
/// `lo` is the lower corner in cells of precision `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub level: u32,
    pub code: u64,
    pub lo: Coords,
}

impl Block {
    pub fn root() -> Self {
        Block { level: 0, code: 0, lo: [0; MAX_DIM] }
    }

    /// Lower (`upper == false`) or upper child.
    pub fn child(&self, space: &SpaceSpec, upper: bool) -> Block {
        let axis = space.axis(self.level);
        let mut lo = self.lo;
        if upper {
            lo[axis] += space.extent(self.level + 1, axis);
        }
        Block { level: self.level + 1, code: (self.code << 1) | u64::from(upper), lo }
    }

    pub fn children(&self, space: &SpaceSpec) -> (Block, Block) {
        (self.child(space, false), self.child(space, true))
    }

    /// Exclusive upper corner along `axis`, in cells of precision `r`.
    pub fn hi(&self, space: &SpaceSpec, axis: usize) -> u32 {
        self.lo[axis] + space.extent(self.level, axis)
    }

    /// Range of cell codes at `depth` covered by this block.
    pub fn code_range(&self, depth: u32) -> (u64, u64) {
        let shift = depth - self.level;
        (self.code << shift, (self.code + 1) << shift)
    }

    /// Coordinates of the block's lower corner at precision `p`.
    pub fn cell_at(&self, space: &SpaceSpec, precision: u32) -> Coords {
        let mut c = [0; MAX_DIM];
        for (a, v) in c.iter_mut().enumerate().take(space.dim()) {
            *v = self.lo[a] >> (space.r() - precision);
        }
        c
    }

    /// Lower corner and side lengths in the unit frame.
    pub fn unit_bounds(&self, space: &SpaceSpec) -> ([f64; MAX_DIM], [f64; MAX_DIM]) {
        let scale = 1.0 / space.cells_per_axis() as f64;
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for a in 0..space.dim() {
            lo[a] = self.lo[a] as f64 * scale;
            hi[a] = self.hi(space, a) as f64 * scale;
        }
        (lo, hi)
    }
}

/// Block addressed by the first `level` bits of a cell path.
pub fn block_of_code(space: &SpaceSpec, level: u32, code: u64) -> Block {
    let mut b = Block::root();
    for l in 0..level {
        let bit = (code >> (level - 1 - l)) & 1 == 1;
        b = b.child(space, bit);
    }
    b
}

/// Path code of a cell given by coordinates at precision `p`.
pub fn cell_code(space: &SpaceSpec, precision: u32, cell: &[u32]) -> u64 {
    let k = space.dim();
    let mut code = 0u64;
    for level in 0..space.k() * precision {
        let axis = level as usize % k;
        let bit = precision - 1 - level / space.k();
        code = (code << 1) | u64::from((cell[axis] >> bit) & 1);
    }
    code
}

/// Inverse of [`cell_code`].
pub fn code_cell(space: &SpaceSpec, precision: u32, code: u64) -> Coords {
    let k = space.dim();
    let depth = space.k() * precision;
    let mut c = [0u32; MAX_DIM];
    for level in 0..depth {
        let axis = level as usize % k;
        let bit = (code >> (depth - 1 - level)) & 1;
        c[axis] = (c[axis] << 1) | bit as u32;
    }
    c
}

/// Distance measure for adjacency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// City-block: neighbours share a face.
    D1,
    /// Chessboard: neighbours share a face, edge or corner.
    DInf,
}

impl Metric {
    /// Number of neighbours of an interior cell.
    pub fn neighbour_count(&self, k: u32) -> u32 {
        match self {
            Metric::D1 => 2 * k,
            Metric::DInf => 3u32.pow(k) - 1,
        }
    }
}

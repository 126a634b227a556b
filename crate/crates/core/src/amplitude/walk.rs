//! Row-by-row propagation shared by every forward evaluator.
//!
//! A row at time `tau` holds one cell per reachable site, indexed by `j = lam - 1`, so
//! `n = 2j + 2 - tau`. Each cell is the pair `(left, right)`: the part carried by paths
//! whose last step was up-left (`a1`) and up-right (`a2`). A step to the next row reads
//! `left` from the cell to the lower right and `right` from the cell to the lower left.
//! The kernel decides what "value" means: scaled big integers, floats, or reachability.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bypass::BypassSet;
use crate::lattice::Site;

pub(crate) trait Kernel {
    type Value: Clone;

    fn zero(&self) -> Self::Value;

    /// Cell at (1, 1): nothing arrives moving left, unit weight moving right.
    fn seed(&self) -> (Self::Value, Self::Value);

    /// Left component at (n, t+1) from the cell at (n+1, t).
    fn up_left(&self, from: &(Self::Value, Self::Value)) -> Self::Value;

    /// Right component at (n, t+1) from the cell at (n-1, t).
    fn up_right(&self, from: &(Self::Value, Self::Value)) -> Self::Value;
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row<V> {
    pub tau: i64,
    pub cells: Vec<(V, V)>,
}

impl<V> Row<V> {
    pub fn n_at(&self, j: usize) -> i64 {
        2 * j as i64 + 2 - self.tau
    }

    pub fn get(&self, n: i64) -> Option<&(V, V)> {
        let site = Site::new(n, self.tau).ok()?;
        self.cells.get(site.row_index()?)
    }
}

pub(crate) fn first_row<K: Kernel>(kernel: &K) -> Row<K::Value> {
    Row { tau: 1, cells: vec![kernel.seed()] }
}

pub(crate) fn advance<K: Kernel>(kernel: &K, row: &Row<K::Value>) -> Row<K::Value> {
    let len = row.cells.len() + 1;
    let mut cells = Vec::with_capacity(len);
    for j in 0..len {
        let left = match row.cells.get(j) {
            Some(c) => kernel.up_left(c),
            None => kernel.zero(),
        };
        let right = match j.checked_sub(1).and_then(|i| row.cells.get(i)) {
            Some(c) => kernel.up_right(c),
            None => kernel.zero(),
        };
        cells.push((left, right));
    }
    Row { tau: row.tau + 1, cells }
}

/// Unbounded sequence of rows starting at `tau = 1`.
///
/// With an absorbing set, each yielded row carries the arrival values (paths may end
/// on an absorbing site), while the row propagated onward has those sites zeroed.
pub(crate) struct Walk<'a, K: Kernel> {
    kernel: K,
    absorbing: Option<&'a BypassSet>,
    carried: Option<Row<K::Value>>,
}

impl<'a, K: Kernel> Walk<'a, K> {
    pub fn new(kernel: K, absorbing: Option<&'a BypassSet>) -> Self {
        Walk { kernel, absorbing, carried: None }
    }
}

impl<K: Kernel> Iterator for Walk<'_, K> {
    type Item = Row<K::Value>;

    fn next(&mut self) -> Option<Row<K::Value>> {
        let row = match &self.carried {
            None => first_row(&self.kernel),
            Some(prev) => advance(&self.kernel, prev),
        };
        let mut carried = row.clone();
        if let Some(set) = self.absorbing {
            for n in set.positions_at(row.tau) {
                if let Some(j) = Site::new(n, row.tau).ok().and_then(Site::row_index) {
                    carried.cells[j] = (self.kernel.zero(), self.kernel.zero());
                }
            }
        }
        self.carried = Some(carried);
        Some(row)
    }
}

/// Exact kernel on integers scaled by `q^(tau-1)` for the mass `p/q`.
///
/// The true amplitude is `(N1 + i·N2) / (p² + q²)^((tau-1)/2)`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledKernel {
    pub p: BigInt,
    pub q: BigInt,
}

impl Kernel for ScaledKernel {
    type Value = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn seed(&self) -> (BigInt, BigInt) {
        (BigInt::zero(), BigInt::one())
    }

    fn up_left(&self, (a1, a2): &(BigInt, BigInt)) -> BigInt {
        &self.q * a1 + &self.p * a2
    }

    fn up_right(&self, (a1, a2): &(BigInt, BigInt)) -> BigInt {
        &self.q * a2 - &self.p * a1
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct FloatKernel {
    mass: f64,
    norm: f64,
}

impl FloatKernel {
    pub fn new(mass: f64) -> Self {
        FloatKernel { mass, norm: 1.0 / (1.0 + mass * mass).sqrt() }
    }
}

impl Kernel for FloatKernel {
    type Value = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn seed(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn up_left(&self, &(a1, a2): &(f64, f64)) -> f64 {
        self.norm * (a1 + self.mass * a2)
    }

    fn up_right(&self, &(a1, a2): &(f64, f64)) -> f64 {
        self.norm * (a2 - self.mass * a1)
    }
}

/// Tracks whether any checker path arrives, independent of the mass.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReachKernel;

impl Kernel for ReachKernel {
    type Value = bool;

    fn zero(&self) -> bool {
        false
    }

    fn seed(&self) -> (bool, bool) {
        (false, true)
    }

    fn up_left(&self, &(a, b): &(bool, bool)) -> bool {
        a || b
    }

    fn up_right(&self, &(a, b): &(bool, bool)) -> bool {
        a || b
    }
}

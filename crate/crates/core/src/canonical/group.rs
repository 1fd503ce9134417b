//! Orbit bookkeeping and exact group orders.

use std::fmt;

/// Disjoint-set forest with union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn class_size(&self, x: usize) -> usize {
        self.size[self.find(x)] as usize
    }

    /// Orbits as sorted member lists, ordered by smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if index[r] == usize::MAX {
                index[r] = out.len();
                out.push(Vec::new());
            }
            out[index[r]].push(x);
        }
        out
    }
}

/// Orbits of the group generated by `gens` acting on `0..n`.
pub fn orbits(n: usize, gens: &[Vec<u32>]) -> UnionFind {
    let mut uf = UnionFind::new(n);
    for g in gens {
        for (x, &y) in g.iter().enumerate() {
            uf.union(x, y as usize);
        }
    }
    uf
}

/// A group order kept as an exact product of small factors, so that orders
/// beyond `u128` still print exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOrder {
    /// Little-endian base 10^9 limbs.
    limbs: Vec<u64>,
}

const BASE: u64 = 1_000_000_000;

impl GroupOrder {
    pub fn one() -> Self {
        GroupOrder { limbs: vec![1] }
    }

    pub fn from_u64(x: u64) -> Self {
        let mut g = GroupOrder::one();
        g.mul(x);
        g
    }

    pub fn mul(&mut self, x: u64) {
        let mut carry: u128 = 0;
        for limb in &mut self.limbs {
            let v = *limb as u128 * x as u128 + carry;
            *limb = (v % BASE as u128) as u64;
            carry = v / BASE as u128;
        }
        while carry > 0 {
            self.limbs.push((carry % BASE as u128) as u64);
            carry /= BASE as u128;
        }
        while self.limbs.len() > 1 && *self.limbs.last().unwrap() == 0 {
            self.limbs.pop();
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        let mut v: u128 = 0;
        for &l in self.limbs.iter().rev() {
            v = v.checked_mul(BASE as u128)?.checked_add(l as u128)?;
        }
        Some(v)
    }

    /// Remainder modulo a small divisor.
    pub fn rem(&self, d: u64) -> u64 {
        let mut r: u128 = 0;
        for &l in self.limbs.iter().rev() {
            r = (r * BASE as u128 + l as u128) % d as u128;
        }
        r as u64
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.limbs.iter().rev();
        write!(f, "{}", it.next().unwrap())?;
        for l in it {
            write!(f, "{:09}", l)?;
        }
        Ok(())
    }
}

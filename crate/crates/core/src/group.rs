//! Finite groups given by multiplication tables (order at most 64), with
//! subsets stored as bitmasks.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

/// A subset of a group of order at most 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub fn empty() -> Self {
        ElementSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ElementSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = ElementSet(0);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 & other.0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 | other.0)
    }

    pub fn minus(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0 & !other.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates a multiplication table whose element 0 is the identity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        Self::with_labels(table, labels)
    }

    pub fn with_labels(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!(
                "order {n} outside 1..={MAX_ORDER}"
            )));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup("label count differs from order".into()));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup("table is not n×n over 0..n".into()));
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::InvalidGroup("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0) {
                Some(b) if table[b][a] == 0 => inverse[a] = b,
                _ => {
                    return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            inverse,
            labels,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let labels = (0..n).map(|a| format!("g^{a}")).collect();
        Self::with_labels(table, labels).expect("cyclic table")
    }

    /// Dihedral group of order `2m`; element `a + m·b` is `r^a s^b`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            let (a, b) = (x % m, x / m);
            for y in 0..n {
                let (c, d) = (y % m, y / m);
                let rot = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                table[x][y] = rot + m * ((b + d) % 2);
            }
        }
        let labels = (0..n)
            .map(|x| {
                let (a, b) = (x % m, x / m);
                if b == 0 {
                    format!("r^{a}")
                } else {
                    format!("r^{a}s")
                }
            })
            .collect();
        Self::with_labels(table, labels).expect("dihedral table")
    }

    /// The quaternion group, elements ordered `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit products: (sign, unit) with units 0=1, 1=i, 2=j, 3=k
        fn unit_mul(a: usize, b: usize) -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        }
        let mut table = vec![vec![0; 8]; 8];
        for x in 0..8 {
            for y in 0..8 {
                let (neg, u) = unit_mul(x / 2, y / 2);
                let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
                table[x][y] = 2 * u + sign as usize;
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::with_labels(table, labels).expect("quaternion table")
    }

    /// `A × B` with element `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self> {
        let (na, nb) = (a.order(), b.order());
        if na * nb > MAX_ORDER {
            return Err(Error::InvalidGroup("product too large".into()));
        }
        let n = na * nb;
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        Self::with_labels(table, labels)
    }

    /// `(Z/p)^k`.
    pub fn elementary_abelian(p: usize, k: u32) -> Result<Self> {
        let mut g = Self::trivial();
        for _ in 0..k {
            g = Self::direct_product(&g, &Self::cyclic(p))?;
        }
        Ok(g)
    }

    /// `C_n ⋊ C_m` where the generator of `C_m` acts by `x ↦ r·x`; element
    /// `a + n·b` is `x^a y^b`.
    pub fn semidirect_cyclic(n: usize, m: usize, r: usize) -> Result<Self> {
        if n == 0 || m == 0 || n * m > MAX_ORDER {
            return Err(Error::InvalidGroup("semidirect product order out of range".into()));
        }
        let mut rk = vec![1 % n; m + 1];
        for k in 1..=m {
            rk[k] = rk[k - 1] * r % n;
        }
        if rk[m] != 1 % n {
            return Err(Error::InvalidGroup(format!("{r}^{m} is not 1 mod {n}")));
        }
        let size = n * m;
        let mut table = vec![vec![0; size]; size];
        for x in 0..size {
            let (a, b) = (x % n, x / n);
            for y in 0..size {
                let (c, d) = (y % n, y / n);
                table[x][y] = (a + rk[b] * c) % n + n * ((b + d) % m);
            }
        }
        let labels = (0..size).map(|x| format!("x^{}y^{}", x % n, x / n)).collect();
        Self::with_labels(table, labels)
    }

    /// The permutation group generated by `gens`, each a permutation of
    /// `0..degree` given as its image list. Elements are listed in order of
    /// discovery, starting from the identity.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        if gens.iter().any(|g| {
            let mut s = g.clone();
            s.sort_unstable();
            g.len() != degree || s != (0..degree).collect::<Vec<_>>()
        }) {
            return Err(Error::InvalidGroup("generators are not permutations".into()));
        }
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut elems: Vec<Vec<usize>> = vec![(0..degree).collect()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let h = compose(&elems[i], g);
                if !elems.contains(&h) {
                    if elems.len() == MAX_ORDER {
                        return Err(Error::InvalidGroup("permutation group too large".into()));
                    }
                    elems.push(h);
                }
            }
            i += 1;
        }
        let pos = |p: &Vec<usize>| elems.iter().position(|e| e == p).unwrap();
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| pos(&compose(a, b))).collect())
            .collect();
        let labels = elems
            .iter()
            .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        Self::with_labels(table, labels)
    }

    /// `(Z/m)^×`, residues in increasing order so that 1 comes first.
    pub fn units_mod(m: u64) -> Result<(Self, Vec<u64>)> {
        let elems: Vec<u64> = (1..m.max(2))
            .filter(|&a| num_integer::gcd(a, m) == 1)
            .collect();
        let elems = if m == 1 { vec![0] } else { elems };
        if elems.len() > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("(Z/{m})^× too large")));
        }
        let pos = |v: u64| elems.iter().position(|&e| e == v).unwrap();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos(a * b % m.max(1))).collect())
            .collect();
        let labels = elems.iter().map(|e| e.to_string()).collect();
        Ok((Self::with_labels(table, labels)?, elems))
    }

    /// Parses whitespace-separated rows of element indices, one row per line.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut table = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad table entry `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        Self::from_table(table)
    }

    pub fn table_text(&self) -> String {
        let mut out = String::new();
        for row in &self.table {
            let strs: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&strs.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order())
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: ElementSet) -> ElementSet {
        let mut set = ElementSet::singleton(0);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for g in gens.iter() {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, s: ElementSet) -> bool {
        s.contains(0)
            && s.iter()
                .all(|a| s.contains(self.inv(a)) && s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    /// Normal in the subgroup `ambient`.
    pub fn is_normal_in(&self, s: ElementSet, ambient: ElementSet) -> bool {
        self.is_subgroup(s)
            && s.is_subset(&ambient)
            && ambient
                .iter()
                .all(|g| s.iter().all(|x| s.contains(self.conjugate(g, x))))
    }

    pub fn is_normal(&self, s: ElementSet) -> bool {
        self.is_normal_in(s, self.all())
    }

    /// Every subgroup, sorted by size then bitmask.
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let mut found: BTreeSet<ElementSet> = (0..self.order())
            .map(|g| self.generate(ElementSet::singleton(g)))
            .collect();
        let mut frontier: Vec<ElementSet> = found.iter().copied().collect();
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let k = self.generate(h.union(&ElementSet::singleton(g)));
                if found.insert(k) {
                    frontier.push(k);
                }
            }
        }
        let mut out: Vec<ElementSet> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.0));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<ElementSet> {
        self.subgroups()
            .into_iter()
            .filter(|&s| self.is_normal(s))
            .collect()
    }

    /// The subgroup `s` as a group in its own right, with the embedding of its
    /// elements (identity first).
    pub fn subgroup_as_group(&self, s: ElementSet) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(s) {
            return Err(Error::InvalidGroup("subset is not a subgroup".into()));
        }
        let elems = s.to_vec();
        let pos = |x: usize| elems.iter().position(|&e| e == x).unwrap();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((Self::with_labels(table, labels)?, elems))
    }

    /// Quotient by a normal subgroup, with the projection. Cosets are ordered
    /// by their smallest element, so the identity coset comes first.
    pub fn quotient(&self, normal: ElementSet) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(Error::InvalidGroup("quotient by a non-normal subset".into()));
        }
        let n = self.order();
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if proj[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for k in normal.iter() {
                proj[self.mul(g, k)] = idx;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.mul(a, b)]).collect())
            .collect();
        let labels = reps
            .iter()
            .map(|&r| format!("[{}]", self.labels[r]))
            .collect();
        Ok((Self::with_labels(table, labels)?, proj))
    }

    /// The quotient `a / b` of subgroups with `b` normal in `a`.
    pub fn section(&self, a: ElementSet, b: ElementSet) -> Result<FiniteGroup> {
        if !self.is_normal_in(b, a) {
            return Err(Error::InvalidGroup("section of non-normal pair".into()));
        }
        let (ga, emb) = self.subgroup_as_group(a)?;
        let inner = ElementSet::from_indices(
            emb.iter().enumerate().filter(|(_, &e)| b.contains(e)).map(|(i, _)| i),
        );
        Ok(ga.quotient(inner)?.0)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|a| self.element_order(a) == self.order())
    }

    /// Abelian with every nonidentity element of order `p`. The trivial group
    /// qualifies.
    pub fn is_elementary_abelian(&self, p: usize) -> bool {
        self.is_abelian() && (1..self.order()).all(|a| self.element_order(a) == p)
    }

    pub fn derived_subgroup(&self, s: ElementSet) -> ElementSet {
        let mut gens = ElementSet::empty();
        for a in s.iter() {
            for b in s.iter() {
                gens.insert(self.commutator(a, b));
            }
        }
        self.generate(gens)
    }

    pub fn is_solvable(&self) -> bool {
        let mut s = self.all();
        loop {
            let d = self.derived_subgroup(s);
            if d.len() == 1 {
                return true;
            }
            if d == s {
                return false;
            }
            s = d;
        }
    }

    fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort();
        v
    }

    /// Small generating set, chosen greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = ElementSet::singleton(0);
        let mut by_order: Vec<usize> = (0..self.order()).collect();
        by_order.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in by_order {
            if !span.contains(a) {
                gens.push(a);
                span = self.generate(ElementSet::from_indices(gens.iter().copied()));
            }
        }
        gens
    }

    /// Isomorphism test. Abelian groups are compared by their element-order
    /// statistics; otherwise images of a generating set are searched.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.order() != other.order() || self.order_profile() != other.order_profile() {
            return false;
        }
        match (self.is_abelian(), other.is_abelian()) {
            (true, true) => return true,
            (false, false) => {}
            _ => return false,
        }
        let gens = self.generators();
        let mut images = vec![0; gens.len()];
        self.search_iso(other, &gens, &mut images, 0)
    }

    fn search_iso(
        &self,
        other: &FiniteGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        k: usize,
    ) -> bool {
        if k == gens.len() {
            return self.extends_to_iso(other, gens, images);
        }
        let ord = self.element_order(gens[k]);
        for h in 0..other.order() {
            if other.element_order(h) == ord {
                images[k] = h;
                if self.search_iso(other, gens, images, k + 1) {
                    return true;
                }
            }
        }
        false
    }

    fn extends_to_iso(&self, other: &FiniteGroup, gens: &[usize], images: &[usize]) -> bool {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (g, h) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let img = other.mul(map[x], *h);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return false;
                }
            }
        }
        let hit = ElementSet::from_indices(map.iter().copied());
        hit.len() == n
            && (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    /// Checks that `proj` is a surjective homomorphism onto `target`.
    pub fn is_surjective_hom(&self, target: &FiniteGroup, proj: &[usize]) -> bool {
        let n = self.order();
        proj.len() == n
            && proj.iter().all(|&x| x < target.order())
            && (0..n).all(|a| (0..n).all(|b| proj[self.mul(a, b)] == target.mul(proj[a], proj[b])))
            && ElementSet::from_indices(proj.iter().copied()).len() == target.order()
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_text())
    }
}

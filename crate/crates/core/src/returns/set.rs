use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `{a·n + b : n ≥ 0}` with `a ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub a: u64,
    pub b: u64,
}

impl Progression {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.b && (n - self.b) % self.a == 0
    }

    /// Intersection via CRT; `None` when the congruences are incompatible.
    pub fn intersect(&self, o: &Progression) -> Option<Progression> {
        let (g, l) = (self.a.gcd(&o.a), self.a.lcm(&o.a));
        let (b1, b2) = (self.b as i128, o.b as i128);
        if (b2 - b1).rem_euclid(g as i128) != 0 {
            return None;
        }
        // n = b1 + a1·t with a1·t ≡ b2 - b1 (mod a2)
        let (a1, a2) = (self.a as i128 / g as i128, o.a as i128 / g as i128);
        let rhs = (b2 - b1) / g as i128;
        let t = if a2 == 1 { 0 } else { (rhs.rem_euclid(a2) * modinv(a1.rem_euclid(a2), a2)).rem_euclid(a2) };
        let mut n = b1 + self.a as i128 * t;
        let lo = b1.max(b2);
        let l = l as i128;
        if n < lo {
            n += (lo - n + l - 1) / l * l;
        }
        n -= (n - lo) / l * l;
        Some(Progression { a: l as u64, b: n as u64 })
    }
}

fn modinv(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "CERTIFIED")]
    Certified,
    #[serde(rename = "CERTIFIED-NUMERIC")]
    CertifiedNumeric,
    #[serde(rename = "PARTIAL")]
    Partial,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Certified => "CERTIFIED",
            Status::CertifiedNumeric => "CERTIFIED-NUMERIC",
            Status::Partial => "PARTIAL",
        }
    }

    /// The weaker of two statuses.
    pub fn meet(self, o: Status) -> Status {
        self.max(o)
    }
}

/// A residue class `{modulus·n + offset}` the classifier could not settle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnresolvedClass {
    pub modulus: u64,
    pub offset: u64,
    pub diagnostic: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnSet {
    pub progressions: Vec<Progression>,
    pub sporadic: Vec<u64>,
    pub unresolved_classes: Vec<UnresolvedClass>,
    pub status: Status,
    pub certificate: serde_json::Value,
    /// Status of the decided part, before undecided classes force `Partial`.
    #[serde(skip)]
    resolved: Status,
}

impl ReturnSet {
    pub fn new(
        progressions: Vec<Progression>,
        sporadic: Vec<u64>,
        unresolved_classes: Vec<UnresolvedClass>,
        status: Status,
        certificate: serde_json::Value,
    ) -> Self {
        let mut s = ReturnSet { progressions, sporadic, unresolved_classes, status, certificate, resolved: status };
        s.normalize();
        if !s.unresolved_classes.is_empty() {
            s.status = Status::Partial;
        }
        s
    }

    pub fn empty() -> Self {
        ReturnSet::new(vec![], vec![], vec![], Status::Certified, serde_json::Value::Null)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.sporadic.binary_search(&n).is_ok() || self.progressions.iter().any(|p| p.contains(n))
    }

    /// Members in `[0, n_max]`, sorted.
    pub fn members_up_to(&self, n_max: u64) -> Vec<u64> {
        let mut out = BTreeSet::new();
        out.extend(self.sporadic.iter().copied().filter(|&n| n <= n_max));
        for p in &self.progressions {
            let mut n = p.b;
            while n <= n_max {
                out.insert(n);
                n += p.a;
            }
        }
        out.into_iter().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    /// Merges progressions into coarser ones where possible, extends them downward over
    /// sporadic points, and drops sporadic points they cover.
    pub fn normalize(&mut self) {
        let mut progs: BTreeSet<Progression> = self.progressions.iter().copied().collect();
        let mut spor: BTreeSet<u64> = self.sporadic.iter().copied().collect();
        loop {
            let mut changed = false;
            // downward extension
            let snapshot: Vec<Progression> = progs.iter().copied().collect();
            for p in snapshot {
                if p.b >= p.a && spor.contains(&(p.b - p.a)) {
                    progs.remove(&p);
                    spor.remove(&(p.b - p.a));
                    progs.insert(Progression { a: p.a, b: p.b - p.a });
                    changed = true;
                }
            }
            // drop progressions contained in others
            let snapshot: Vec<Progression> = progs.iter().copied().collect();
            for p in &snapshot {
                if snapshot.iter().any(|q| q != p && q.a <= p.a && p.a % q.a == 0 && q.contains(p.b)) {
                    progs.remove(p);
                    changed = true;
                }
            }
            // merge the classes of a common modulus M into a divisor modulus
            if let Some(merged) = merge_once(&progs, &spor) {
                let (remove, add, used) = merged;
                for p in remove {
                    progs.remove(&p);
                }
                for n in used {
                    spor.remove(&n);
                }
                progs.insert(add);
                changed = true;
            }
            if !changed {
                break;
            }
        }
        spor.retain(|n| !progs.iter().any(|p| p.contains(*n)));
        self.progressions = progs.into_iter().collect();
        self.sporadic = spor.into_iter().collect();
        self.unresolved_classes.sort();
        self.unresolved_classes.dedup();
    }

    /// Intersection for `V = V_1 ∩ V_2`.
    pub fn intersect(&self, o: &ReturnSet) -> ReturnSet {
        let mut progs = Vec::new();
        for p in &self.progressions {
            for q in &o.progressions {
                if let Some(r) = p.intersect(q) {
                    progs.push(r);
                }
            }
        }
        let mut spor: Vec<u64> = self.sporadic.iter().copied().filter(|&n| o.contains(n)).collect();
        spor.extend(o.sporadic.iter().copied().filter(|&n| self.contains(n)));
        spor.sort();
        spor.dedup();
        let mut unresolved = clip_unresolved(&self.unresolved_classes, o);
        unresolved.extend(clip_unresolved(&o.unresolved_classes, self));
        ReturnSet::new(
            progs,
            spor,
            unresolved,
            self.resolved.meet(o.resolved),
            serde_json::json!({ "intersection": [self.certificate, o.certificate] }),
        )
    }
}

/// The part of each undecided class that can still meet `other`. Only a fully resolved
/// `other` narrows anything; modulus 0 marks a single index.
fn clip_unresolved(classes: &[UnresolvedClass], other: &ReturnSet) -> Vec<UnresolvedClass> {
    if !other.unresolved_classes.is_empty() {
        return classes.to_vec();
    }
    let mut out = Vec::new();
    for u in classes {
        if u.modulus == 0 {
            if other.contains(u.offset) {
                out.push(u.clone());
            }
            continue;
        }
        let class = Progression { a: u.modulus, b: u.offset };
        for &n in other.sporadic.iter().filter(|&&n| class.contains(n)) {
            out.push(UnresolvedClass { modulus: 0, offset: n, diagnostic: u.diagnostic.clone() });
        }
        for q in &other.progressions {
            if let Some(r) = class.intersect(q) {
                out.push(UnresolvedClass { modulus: r.a, offset: r.b, diagnostic: u.diagnostic.clone() });
            }
        }
    }
    out
}

type Merge = (Vec<Progression>, Progression, Vec<u64>);

/// Finds one coarsening: progressions of a common modulus `m` covering every class mod `m`
/// inside one class mod a proper divisor `a` become `(a, B)`, with `B` the earliest start.
/// Gaps below later starts must be filled by sporadic points.
fn merge_once(progs: &BTreeSet<Progression>, spor: &BTreeSet<u64>) -> Option<Merge> {
    let moduli: BTreeSet<u64> = progs.iter().map(|p| p.a).collect();
    for &m in &moduli {
        let same: Vec<Progression> = progs.iter().copied().filter(|p| p.a == m).collect();
        for a in (1..m).filter(|a| m % a == 0) {
            for c in 0..a {
                let members: Vec<Progression> = same.iter().copied().filter(|p| p.b % a == c).collect();
                let classes: BTreeSet<u64> = members.iter().map(|p| p.b % m).collect();
                if classes.len() as u64 != m / a {
                    continue;
                }
                let start = members.iter().map(|p| p.b).min().unwrap();
                let mut used = Vec::new();
                let mut ok = true;
                for rho in &classes {
                    let first = members.iter().filter(|p| p.b % m == *rho).map(|p| p.b).min().unwrap();
                    let mut n = start + (rho + m - start % m) % m;
                    while n < first {
                        if !spor.contains(&n) {
                            ok = false;
                            break;
                        }
                        used.push(n);
                        n += m;
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    return Some((members, Progression { a, b: start }, used));
                }
            }
        }
    }
    None
}

use std::collections::HashMap;

use super::{Ep, HandleConstraint, Mrs, Variable};

/// Partial sort-preserving bijection with an undo log for backtracking.
#[derive(Default)]
struct Bijection {
    forward: HashMap<Variable, Variable>,
    backward: HashMap<Variable, Variable>,
    log: Vec<Variable>,
}

impl Bijection {
    fn bind(&mut self, a: &Mrs, b: &Mrs, x: Variable, y: Variable) -> bool {
        if x.sort != y.sort {
            return false;
        }
        match (self.forward.get(&x), self.backward.get(&y)) {
            (Some(fy), Some(bx)) => *fy == y && *bx == x,
            (None, None) => {
                let props_match = match (a.properties_of(x), b.properties_of(y)) {
                    (Some(p), Some(q)) => p.same_mapping(q),
                    (None, None) => true,
                    (Some(p), None) | (None, Some(p)) => p.is_empty(),
                };
                if !props_match {
                    return false;
                }
                self.forward.insert(x, y);
                self.backward.insert(y, x);
                self.log.push(x);
                true
            }
            _ => false,
        }
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let x = self.log.pop().expect("log entry");
            if let Some(y) = self.forward.remove(&x) {
                self.backward.remove(&y);
            }
        }
    }
}

struct Matcher<'m> {
    a: &'m Mrs,
    b: &'m Mrs,
    map: Bijection,
    ep_used: Vec<bool>,
    hc_used: Vec<bool>,
}

fn same_shape(x: &Ep, y: &Ep) -> bool {
    if x.predicate != y.predicate || x.carg != y.carg || x.args.len() != y.args.len() {
        return false;
    }
    x.args.iter().all(|(role, _)| y.arg(role).is_some())
}

impl Matcher<'_> {
    fn bind_ep(&mut self, x: &Ep, y: &Ep) -> bool {
        if !self.map.bind(self.a, self.b, x.label, y.label) {
            return false;
        }
        for (role, xv) in &x.args {
            let yv = y.arg(role).expect("same shape");
            if !self.map.bind(self.a, self.b, *xv, yv) {
                return false;
            }
        }
        true
    }

    fn match_eps(&mut self, i: usize) -> bool {
        if i == self.a.rels.len() {
            return self.match_hcons(0);
        }
        let x = &self.a.rels[i];
        for j in 0..self.b.rels.len() {
            if self.ep_used[j] || !same_shape(x, &self.b.rels[j]) {
                continue;
            }
            let mark = self.map.mark();
            if self.bind_ep(x, &self.b.rels[j]) {
                self.ep_used[j] = true;
                if self.match_eps(i + 1) {
                    return true;
                }
                self.ep_used[j] = false;
            }
            self.map.undo_to(mark);
        }
        false
    }

    fn match_hcons(&mut self, i: usize) -> bool {
        if i == self.a.hcons.len() {
            return true;
        }
        let HandleConstraint { hi, lo } = self.a.hcons[i];
        for j in 0..self.b.hcons.len() {
            if self.hc_used[j] {
                continue;
            }
            let target = self.b.hcons[j];
            let mark = self.map.mark();
            if self.map.bind(self.a, self.b, hi, target.hi) && self.map.bind(self.a, self.b, lo, target.lo) {
                self.hc_used[j] = true;
                if self.match_hcons(i + 1) {
                    return true;
                }
                self.hc_used[j] = false;
            }
            self.map.undo_to(mark);
        }
        false
    }
}

/// True when some sort-preserving renaming of variables turns `a` into `b`,
/// ignoring EP order and qeq order. Properties must agree exactly.
pub fn alpha_equal(a: &Mrs, b: &Mrs) -> bool {
    if a.rels.len() != b.rels.len() || a.hcons.len() != b.hcons.len() {
        return false;
    }
    let mut matcher = Matcher {
        a,
        b,
        map: Bijection::default(),
        ep_used: vec![false; b.rels.len()],
        hc_used: vec![false; b.hcons.len()],
    };
    if !matcher.map.bind(a, b, a.top, b.top) || !matcher.map.bind(a, b, a.index, b.index) {
        return false;
    }
    if !matcher.match_eps(0) {
        return false;
    }
    // Property-carrying variables that never occur in a structural position.
    let unmapped_a = a
        .properties
        .keys()
        .filter(|v| !matcher.map.forward.contains_key(v))
        .count();
    let unmapped_b = b
        .properties
        .keys()
        .filter(|v| !matcher.map.backward.contains_key(v))
        .count();
    unmapped_a == 0 && unmapped_b == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrs::parse_simple_mrs;
    use crate::mrs::tests::{SAW, SAW_ITCLEFT};

    fn rename(m: &Mrs, f: impl Fn(Variable) -> Variable) -> Mrs {
        let mut out = m.clone();
        out.top = f(m.top);
        out.index = f(m.index);
        for ep in &mut out.rels {
            ep.label = f(ep.label);
            for (_, v) in &mut ep.args {
                *v = f(*v);
            }
        }
        for hc in &mut out.hcons {
            hc.hi = f(hc.hi);
            hc.lo = f(hc.lo);
        }
        out.properties = m.properties.iter().map(|(k, v)| (f(*k), v.clone())).collect();
        out
    }

    #[test]
    fn renamed_cleft_is_equal() {
        let l5 = parse_simple_mrs(SAW_ITCLEFT).unwrap();
        let renamed = rename(&l5, |v| match v.id {
            14 => Variable::handle(20),
            15 => Variable::event(21),
            _ => v,
        });
        assert_ne!(l5, renamed);
        assert!(alpha_equal(&l5, &renamed));
        assert!(alpha_equal(&renamed, &l5));
    }

    #[test]
    fn active_differs_from_cleft() {
        let l1 = parse_simple_mrs(SAW).unwrap();
        let l5 = parse_simple_mrs(SAW_ITCLEFT).unwrap();
        assert!(!alpha_equal(&l1, &l5));
    }

    #[test]
    fn feature_mismatch() {
        let l1 = parse_simple_mrs(SAW).unwrap();
        let mut changed = l1.clone();
        changed.properties.get_mut(&changed.index).unwrap().set("TENSE", "pres");
        assert!(!alpha_equal(&l1, &changed));
    }

    #[test]
    fn order_is_ignored() {
        let l1 = parse_simple_mrs(SAW).unwrap();
        let mut shuffled = l1.clone();
        shuffled.rels.reverse();
        shuffled.hcons.rotate_left(1);
        assert!(alpha_equal(&l1, &shuffled));
    }

    #[test]
    fn non_bijective_renaming_rejected() {
        let l1 = parse_simple_mrs(SAW).unwrap();
        // collapse the two quantifier bodies onto one handle
        let merged = rename(&l1, |v| if v.id == 12 { Variable::handle(6) } else { v });
        assert!(!alpha_equal(&l1, &merged));
        assert!(!alpha_equal(&merged, &l1));
    }

    #[test]
    fn swapped_names_are_not_equal() {
        let l1 = parse_simple_mrs(SAW).unwrap();
        let mut swapped = l1.clone();
        swapped.rels[1].carg = Some("Bob".into());
        swapped.rels[4].carg = Some("Alice".into());
        assert!(!alpha_equal(&l1, &swapped));
    }
}

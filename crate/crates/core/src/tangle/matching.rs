use std::fmt;

/// A crossingless planar matching on `2m` boundary points: points `0..m`
/// are the top endpoints left to right, `m..2m` the bottom ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarMatching {
    partner: Vec<u8>,
}

impl PlanarMatching {
    pub fn identity(strands: usize) -> Self {
        assert!(strands <= 127);
        let m = strands as u8;
        let partner = (0..2 * m).map(|p| if p < m { p + m } else { p - m }).collect();
        PlanarMatching { partner }
    }

    /// The cup-cap generator `e_i` (1-based `i`, joining strands `i` and `i+1`).
    pub fn e(strands: usize, i: usize) -> Self {
        assert!(i >= 1 && i < strands, "e_{i} out of range for {strands} strands");
        let mut p = Self::identity(strands);
        let m = strands;
        let (l, r) = (i - 1, i);
        p.partner[l] = r as u8;
        p.partner[r] = l as u8;
        p.partner[m + l] = (m + r) as u8;
        p.partner[m + r] = (m + l) as u8;
        p
    }

    pub fn strands(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, point: usize) -> usize {
        self.partner[point] as usize
    }

    /// Stack `self` on top of `below`. Returns the resulting matching and the
    /// number of closed loops formed in the middle.
    pub fn compose(&self, below: &PlanarMatching) -> (PlanarMatching, usize) {
        let m = self.strands();
        assert_eq!(m, below.strands(), "composing matchings on different strand counts");
        // Global numbering: 0..m top of self, m..2m middle, 2m..3m bottom of below.
        let follow = |start: usize, visited: &mut [bool]| -> usize {
            let mut in_upper = start < m;
            let mut local = if in_upper { start } else { start - 2 * m + m };
            loop {
                if in_upper {
                    let q = self.partner(local);
                    if q < m {
                        return q;
                    }
                    visited[q - m] = true;
                    in_upper = false;
                    local = q - m;
                } else {
                    let q = below.partner(local);
                    if q >= m {
                        return q - m + 2 * m;
                    }
                    visited[q] = true;
                    in_upper = true;
                    local = q + m;
                }
            }
        };
        let mut visited = vec![false; m];
        let mut partner = vec![0u8; 2 * m];
        for p in 0..m {
            let q = follow(p, &mut visited);
            partner[p] = to_result(q, m) as u8;
        }
        for p in 2 * m..3 * m {
            let q = follow(p, &mut visited);
            partner[p - m] = to_result(q, m) as u8;
        }
        // Unvisited middle points lie on closed loops.
        let mut loops = 0;
        for start in 0..m {
            if visited[start] {
                continue;
            }
            loops += 1;
            let mut j = start;
            loop {
                visited[j] = true;
                // middle point j: upper side is self's bottom j, lower side below's top j
                let down = below.partner(j);
                debug_assert!(down < m);
                visited[down] = true;
                let up = self.partner(m + down);
                debug_assert!(up >= m);
                j = up - m;
                if j == start {
                    break;
                }
            }
        }
        (PlanarMatching { partner }, loops)
    }

    /// Number of loops produced by the trace closure (top `i` joined to bottom `i`).
    pub fn trace_loops(&self) -> usize {
        let m = self.strands();
        let mut seen = vec![false; 2 * m];
        let mut loops = 0;
        for start in 0..2 * m {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            loop {
                seen[p] = true;
                let q = self.partner(p);
                seen[q] = true;
                p = if q < m { q + m } else { q - m };
                if seen[p] {
                    break;
                }
            }
        }
        loops
    }

    #[cfg(test)]
    fn is_planar(&self) -> bool {
        let n = self.partner.len();
        let m = n / 2;
        // Boundary order around the box: top left-to-right, then bottom right-to-left.
        let pos = |p: usize| if p < m { p } else { n - 1 - (p - m) };
        for p in 0..n {
            let q = self.partner(p);
            if self.partner(q) != p || p == q {
                return false;
            }
            let (x1, y1) = (pos(p).min(pos(q)), pos(p).max(pos(q)));
            for r in 0..n {
                let s = self.partner(r);
                let (x2, y2) = (pos(r).min(pos(s)), pos(r).max(pos(s)));
                if x1 < x2 && x2 < y1 && y1 < y2 {
                    return false;
                }
            }
        }
        true
    }
}

fn to_result(q: usize, m: usize) -> usize {
    if q < m {
        q
    } else {
        q - 2 * m + m
    }
}

impl fmt::Display for PlanarMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.strands();
        let name = |p: usize| if p < m { format!("t{}", p + 1) } else { format!("b{}", p - m + 1) };
        let mut first = true;
        for p in 0..2 * m {
            let q = self.partner(p);
            if p < q {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{}-{}", name(p), name(q))?;
            }
        }
        Ok(())
    }
}

/// Compose two matchings; returns the stacked matching and the loops closed off.
pub fn compose_matchings(p: &PlanarMatching, q: &PlanarMatching) -> (PlanarMatching, usize) {
    p.compose(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_neutral() {
        let id = PlanarMatching::identity(2);
        assert_eq!(id.compose(&id), (id.clone(), 0));
    }

    #[test]
    fn e_squared_closes_a_loop() {
        let e = PlanarMatching::e(2, 1);
        assert_eq!(e.compose(&e), (e.clone(), 1));
    }

    #[test]
    fn zig_zag() {
        // e1 over e2 on 3 strands: cap on top (1,2), cup at bottom (2,3),
        // top strand 3 runs down to bottom strand 1.
        let (z, loops) = PlanarMatching::e(3, 1).compose(&PlanarMatching::e(3, 2));
        assert_eq!(loops, 0);
        assert_eq!(z.to_string(), "t1-t2 t3-b1 b2-b3");
        assert!(z.is_planar());
    }

    #[test]
    fn trace_loops_counts() {
        assert_eq!(PlanarMatching::identity(3).trace_loops(), 3);
        assert_eq!(PlanarMatching::e(2, 1).trace_loops(), 1);
        assert_eq!(PlanarMatching::e(3, 1).trace_loops(), 2);
    }

    fn arb_product(m: usize) -> impl Strategy<Value = PlanarMatching> {
        prop::collection::vec(1..m, 0..8).prop_map(move |idx| {
            idx.into_iter()
                .fold(PlanarMatching::identity(m), |acc, i| acc.compose(&PlanarMatching::e(m, i)).0)
        })
    }

    proptest! {
        #[test]
        fn composition_associative(
            (p, q, r) in (2usize..6).prop_flat_map(|m| (arb_product(m), arb_product(m), arb_product(m)))
        ) {
            let (pq, l1) = p.compose(&q);
            let (pq_r, l2) = pq.compose(&r);
            let (qr, l3) = q.compose(&r);
            let (p_qr, l4) = p.compose(&qr);
            prop_assert_eq!(&pq_r, &p_qr);
            prop_assert_eq!(l1 + l2, l3 + l4);
            prop_assert!(pq_r.is_planar());
        }
    }
}

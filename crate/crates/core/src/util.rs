use crate::error::{Error, Result};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Fails with a budget error when `q^len` candidates exceed `budget`.
pub fn check_budget(q: u16, len: usize, budget: u64) -> Result<()> {
    let needed = (q as f64).powi(len as i32);
    if needed > budget as f64 {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

/// Counter over `len` digits in base `q`, least significant digit last so that the
/// visiting order is lexicographic.
pub struct Odometer {
    digits: Vec<u16>,
    q: u16,
    started: bool,
}

impl Odometer {
    pub fn new(len: usize, q: u16) -> Self {
        Odometer { digits: vec![0; len], q, started: false }
    }

    /// Advances and returns the next assignment, or `None` once exhausted.
    pub fn next(&mut self) -> Option<&[u16]> {
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                return Some(&self.digits);
            }
            *d = 0;
        }
        None
    }
}

/// Finitely generated abelian group `Z/n₁ × … × Z/n_r`, where a factor
/// of `0` stands for `Z`. Elements are exponent vectors, reduced into
/// `0..nᵢ` on finite factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupStructure {
    pub factors: Vec<u64>,
}

const GEN_NAMES: [&str; 6] = ["x", "y", "u", "v", "s", "t"];

impl GroupStructure {
    pub fn new(factors: Vec<u64>) -> Self {
        GroupStructure { factors }
    }

    pub fn trivial() -> Self {
        GroupStructure { factors: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&n| n > 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    pub fn reduce(&self, mut el: Vec<i64>) -> Vec<i64> {
        for (x, &n) in el.iter_mut().zip(&self.factors) {
            if n > 0 {
                *x = x.rem_euclid(n as i64);
            }
        }
        el
    }

    pub fn identity(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn pow(&self, a: &[i64], k: i64) -> Vec<i64> {
        self.reduce(a.iter().map(|x| x * k).collect())
    }

    pub fn inv(&self, a: &[i64]) -> Vec<i64> {
        self.pow(a, -1)
    }

    /// Order of an element; `None` for elements of infinite order.
    pub fn element_order(&self, a: &[i64]) -> Option<u64> {
        let mut ord = 1u64;
        for (x, &n) in a.iter().zip(&self.factors) {
            if n == 0 {
                if *x != 0 {
                    return None;
                }
            } else {
                let o = n / num_integer::gcd(x.rem_euclid(n as i64) as u64, n);
                ord = num_integer::lcm(ord, o);
            }
        }
        Some(ord)
    }

    /// All elements of a finite group in lexicographic exponent order.
    pub fn elements(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..n as i64).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        Some(out)
    }

    pub fn generator(&self, i: usize) -> Vec<i64> {
        let mut g = self.identity();
        g[i] = 1;
        self.reduce(g)
    }

    pub fn generator_name(i: usize) -> String {
        GEN_NAMES.get(i).map_or_else(|| format!("g{i}"), |s| s.to_string())
    }

    /// Display label such as `1`, `x`, `x^2y`, `x^-1`.
    pub fn label(&self, el: &[i64]) -> String {
        let mut s = String::new();
        for (i, &x) in el.iter().enumerate() {
            match x {
                0 => {}
                1 => s.push_str(&Self::generator_name(i)),
                _ => s.push_str(&format!("{}^{}", Self::generator_name(i), x)),
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Parses a label produced by [`label`](Self::label).
    pub fn parse_label(&self, s: &str) -> Option<Vec<i64>> {
        let mut el = self.identity();
        let s = s.trim();
        if s == "1" {
            return Some(el);
        }
        let mut rest = s;
        while !rest.is_empty() {
            let i = (0..self.rank()).find(|&i| rest.starts_with(&Self::generator_name(i)))?;
            rest = &rest[Self::generator_name(i).len()..];
            let mut exp = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r
                    .char_indices()
                    .find(|(k, c)| !(c.is_ascii_digit() || (*k == 0 && *c == '-')))
                    .map_or(r.len(), |(k, _)| k);
                exp = r[..end].parse().ok()?;
                rest = &r[end..];
            }
            el[i] += exp;
        }
        Some(self.reduce(el))
    }

    /// Parses `Z/2`, `Z/3xZ/3`, `Z/4 x Z/4`, `Z`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut factors = Vec::new();
        for part in s.split(['x', '×', '*']) {
            let p = part.trim();
            if p == "Z" {
                factors.push(0);
            } else {
                let n: u64 = p.strip_prefix("Z/")?.trim().parse().ok()?;
                if n == 0 {
                    return None;
                }
                factors.push(n);
            }
        }
        Some(GroupStructure { factors })
    }

    pub fn describe(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|&n| if n == 0 { "Z".to_string() } else { format!("Z/{n}") })
            .collect::<Vec<_>>()
            .join("x")
    }
}

//! Standard presentations: `point`, `sphere(n)`, `cp(n)`, `product(r, s)`.

use num_traits::{One, Zero};

use super::{tensor, CohomError, CohomResult, GradedRing, RingBuilder};
use crate::linalg::Q;

/// `H(S^n) = ℚ[x]/x²`, `|x| = n ≥ 1`.
pub fn sphere(n: u32) -> CohomResult<GradedRing> {
    if n == 0 {
        return Err(CohomError::UnknownName("sphere(0) is not connected".into()));
    }
    let mut b = RingBuilder::new(&format!("sphere({n})"));
    let one = b.basis("1", 0)?;
    b.basis(&format!("x{n}"), n)?;
    b.unit(one);
    b.build()
}

/// `H(ℂP^n) = ℚ[v]/v^{n+1}`, `|v| = 2`, basis `1, v, v2, …`.
pub fn cp(n: u32) -> CohomResult<GradedRing> {
    let mut b = RingBuilder::new(&format!("cp({n})"));
    let label = |k: u32| match k {
        0 => "1".to_string(),
        1 => "v".to_string(),
        _ => format!("v{k}"),
    };
    for k in 0..=n {
        b.basis(&label(k), 2 * k)?;
    }
    b.unit(0);
    let rank = n as usize + 1;
    for i in 1..rank {
        for j in 1..rank {
            let mut v = vec![Q::zero(); rank];
            if i + j < rank {
                v[i + j] = Q::one();
            }
            b.product(i, j, v)?;
        }
    }
    b.build()
}

pub fn builtin_ring(name: &str) -> CohomResult<GradedRing> {
    let mut p = Parser { src: name, pos: 0 };
    let r = p.ring()?;
    p.skip_ws();
    if p.pos != name.len() {
        return Err(unknown(name));
    }
    Ok(r)
}

fn unknown(name: &str) -> CohomError {
    CohomError::UnknownName(name.trim().to_string())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> CohomResult<u32> {
        let word = self.ident();
        word.parse().map_err(|_| unknown(self.src))
    }

    fn ring(&mut self) -> CohomResult<GradedRing> {
        let head = self.ident();
        if head == "point" {
            return Ok(GradedRing::point());
        }
        if !self.eat('(') {
            return Err(unknown(self.src));
        }
        let ring = match head {
            "sphere" => sphere(self.number()?)?,
            "cp" => cp(self.number()?)?,
            "product" => {
                let a = self.ring()?;
                if !self.eat(',') {
                    return Err(unknown(self.src));
                }
                let b = self.ring()?;
                let mut t = tensor(&a, &b)?;
                t.set_name(&format!("product({}, {})", a.name(), b.name()));
                t
            }
            _ => return Err(unknown(self.src)),
        };
        if !self.eat(')') {
            return Err(unknown(self.src));
        }
        Ok(ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_two_has_square_zero_class() {
        let r = builtin_ring("sphere(2)").unwrap();
        assert_eq!(r.labels(), ["1", "x2"]);
        assert!(r.basis_product(1, 1).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn cp3_truncates_at_v4() {
        let r = builtin_ring("cp(3)").unwrap();
        assert_eq!(r.labels(), ["1", "v", "v2", "v3"]);
        let v = r.basis_element(1);
        assert_eq!(r.pow(&v, 3), r.basis_element(3));
        assert!(r.pow(&v, 4).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn product_of_spheres_has_rank_four() {
        let r = builtin_ring("product(sphere(4), sphere(4))").unwrap();
        assert_eq!(r.rank(), 4);
        assert_eq!(r.top_degree(), 8);
    }

    #[test]
    fn unknown_names_are_rejected() {
        for bad in ["torus", "sphere(", "sphere(x)", "cp(2) extra", "product(point)"] {
            assert!(matches!(builtin_ring(bad), Err(CohomError::UnknownName(_))), "{bad}");
        }
    }
}

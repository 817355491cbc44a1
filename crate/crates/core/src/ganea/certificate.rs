//! Decomposition certificates for the strong pushout and strong relative
//! categories, their validators, and the builders for cofibres, the pinch
//! map and the diagonal of a suspension.

use std::fmt;

use super::tower::{cofibre, fibre, join};
use crate::hcat::{rebase, HSquare, HcatError, HcatResult, HomotopyCategory, HomotopyWitness, MapRef, ObjRef};

/// Stage `i` is the square
/// ```text
///   Z_i --ρ_i--> A
///    |           |
///   τ_i       ι_{i+1}
///    v           v
///   X_i --χ_i--> X_{i+1}
/// ```
/// with `ι_0: A → X_0` inverted by `λ` and `ι_n ≃ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushcatCertificate {
    pub target: MapRef,
    pub iota0: MapRef,
    pub lambda: MapRef,
    pub stages: Vec<HSquare>,
}

/// Adds `σ_i: A → Z_i` with `ρ_i σ_i ≃ id_A` and `τ_i σ_i ≃ ι_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelcatCertificate {
    pub base: PushcatCertificate,
    pub sigmas: Vec<MapRef>,
}

impl PushcatCertificate {
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// `ι_i`, for `0 ≤ i ≤ n`.
    pub fn iota(&self, i: usize) -> MapRef {
        if i == 0 {
            self.iota0
        } else {
            self.stages[i - 1].right
        }
    }

    pub fn source(&self) -> ObjRef {
        self.iota0.src
    }
}

impl RelcatCertificate {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

/// The first failing check of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub check: &'static str,
    pub stage: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stage {
            Some(i) => write!(f, "REJECT stage {i} {}: {}", self.check, self.detail),
            None => write!(f, "REJECT {}: {}", self.check, self.detail),
        }
    }
}

impl std::error::Error for Rejection {}

pub type Verdict = Result<usize, Rejection>;

fn reject(check: &'static str, stage: Option<usize>, detail: impl Into<String>) -> Rejection {
    Rejection {
        check,
        stage,
        detail: detail.into(),
    }
}

/// Runs `f`, turning backend errors into a rejection of `check`.
fn guard<T>(check: &'static str, stage: Option<usize>, r: HcatResult<T>) -> Result<T, Rejection> {
    r.map_err(|e| reject(check, stage, e.to_string()))
}

fn homotopic<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    check: &'static str,
    stage: Option<usize>,
    f: MapRef,
    g: MapRef,
) -> Result<(), Rejection> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(reject(check, stage, "endpoints differ"));
    }
    match guard(check, stage, h.is_homotopic(f, g))? {
        Some(_) => Ok(()),
        None => Err(reject(check, stage, "maps are not homotopic")),
    }
}

fn composite<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    check: &'static str,
    stage: Option<usize>,
    f: MapRef,
    g: MapRef,
) -> Result<MapRef, Rejection> {
    guard(check, stage, h.compose(f, g))
}

/// Check ids, in order: `lambda-retraction`, `lambda-section`, then per
/// stage `shape`, `witness`, `pushout`, `chi-iota`, `rho-sigma`,
/// `tau-sigma`, then `terminal-object`, `terminal-map`.
fn validate<H: HomotopyCategory + ?Sized>(h: &mut H, c: &PushcatCertificate, sigmas: Option<&[MapRef]>) -> Verdict {
    let a = c.source();
    if c.lambda.src != c.iota0.tgt || c.lambda.tgt != a {
        return Err(reject("lambda-retraction", None, "λ does not go from X_0 to A"));
    }
    let la = composite(h, "lambda-retraction", None, c.iota0, c.lambda)?;
    let id_a = guard("lambda-retraction", None, h.identity(a))?;
    homotopic(h, "lambda-retraction", None, la, id_a)?;
    let al = composite(h, "lambda-section", None, c.lambda, c.iota0)?;
    let id_x0 = guard("lambda-section", None, h.identity(c.iota0.tgt))?;
    homotopic(h, "lambda-section", None, al, id_x0)?;
    if let Some(s) = sigmas {
        if s.len() != c.len() {
            return Err(reject("shape", None, "one σ per stage is required"));
        }
    }
    for (i, sq) in c.stages.iter().enumerate() {
        let st = Some(i);
        let prev = c.iota(i);
        let ok = sq.top.tgt == a && sq.right.src == a && sq.left.tgt == prev.tgt && sq.top.src == sq.left.src;
        if !ok {
            return Err(reject("shape", st, "square does not connect A, X_i and X_{i+1}"));
        }
        guard("witness", st, h.check_square(sq))?;
        if !guard("pushout", st, h.is_h_pushout_square(sq))? {
            return Err(reject("pushout", st, "square is not a homotopy pushout"));
        }
        let ci = composite(h, "chi-iota", st, prev, sq.bottom)?;
        homotopic(h, "chi-iota", st, ci, sq.right)?;
        if let Some(s) = sigmas {
            let sigma = s[i];
            if sigma.src != a || sigma.tgt != sq.top.src {
                return Err(reject("rho-sigma", st, "σ does not go from A to Z_i"));
            }
            let rs = composite(h, "rho-sigma", st, sigma, sq.top)?;
            homotopic(h, "rho-sigma", st, rs, id_a)?;
            let ts = composite(h, "tau-sigma", st, sigma, sq.left)?;
            homotopic(h, "tau-sigma", st, ts, prev)?;
        }
    }
    let last = c.iota(c.len());
    if last.tgt != c.target.tgt || c.target.src != a {
        return Err(reject("terminal-object", None, "last stage is not the target of the map"));
    }
    homotopic(h, "terminal-map", None, last, c.target)?;
    Ok(c.len())
}

/// Accepted length `n`, an upper bound for the strong pushout category.
pub fn validate_pushcat_certificate<H: HomotopyCategory + ?Sized>(h: &mut H, c: &PushcatCertificate) -> Verdict {
    validate(h, c, None)
}

/// Accepted length `n`, an upper bound for the strong relative category.
pub fn validate_relcat_certificate<H: HomotopyCategory + ?Sized>(h: &mut H, c: &RelcatCertificate) -> Verdict {
    validate(h, &c.base, Some(&c.sigmas))
}

/// Length 0: `λ` a homotopy inverse of `ι`.
pub fn equivalence_certificate<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef) -> HcatResult<RelcatCertificate> {
    let lambda = h
        .is_equivalence(iota)?
        .ok_or_else(|| HcatError::Incoherent("map is not an equivalence".into()))?;
    Ok(RelcatCertificate {
        base: PushcatCertificate {
            target: iota,
            iota0: iota,
            lambda,
            stages: Vec::new(),
        },
        sigmas: Vec::new(),
    })
}

/// Length 1 for `g` in a cofibration sequence `Y -f-> A -g-> X`, where
/// `w: g ∘ f ≃ 0` is the null homotopy exhibiting the sequence:
/// `Z = A ∨ Y`, `ρ = (id, f)`, `τ = pr₁`, `σ = in₁`.
pub fn cofibration_certificate<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    f: MapRef,
    g: MapRef,
    w: HomotopyWitness,
) -> HcatResult<RelcatCertificate> {
    let (a, y) = (g.src, f.src);
    let coprod = h.coproduct(a, y)?;
    h.set_label(coprod.apex, &format!("{}v{}", h.label(a), h.label(y)));
    let id_a = h.identity(a)?;
    let rho = h.copair(&coprod, id_a, f)?;
    let ya = h.zero_map(y, a)?;
    let tau = h.copair(&coprod, id_a, ya)?;
    let gf = h.compose(f, g)?;
    // g (id, f) ≃ g (id, 0) blockwise
    let gid = h.compose(id_a, g)?;
    let rg = h.refl(gid)?;
    let gy = h.compose(ya, g)?;
    let w = rebase(h, w, gf, gy)?;
    let sw = h.copair_witness(&coprod, rg, w)?;
    let lhs = h.compose(rho, g)?;
    let rhs = h.compose(tau, g)?;
    let sw = rebase(h, sw, lhs, rhs)?;
    let square = HSquare {
        top: rho,
        left: tau,
        right: g,
        bottom: g,
        witness: sw,
    };
    Ok(RelcatCertificate {
        base: PushcatCertificate {
            target: g,
            iota0: id_a,
            lambda: id_a,
            stages: vec![square],
        },
        sigmas: vec![coprod.in1],
    })
}

/// The cofibre inclusion `A → C` of `f: Y → A`, certified at length 1.
pub fn cofibre_certificate<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef) -> HcatResult<RelcatCertificate> {
    let po = cofibre(h, f)?;
    let fz = h.compose(f, po.in_a)?;
    let yc = h.zero_map(f.src, po.apex)?;
    let w = rebase(h, po.witness, fz, yc)?;
    cofibration_certificate(h, f, po.in_a, w)
}

/// `ΣX = ∗ ∨_X ∗` with the pinch map `p: ΣX → ΣX ∨ ΣX`.
#[derive(Clone, Copy, Debug)]
pub struct Pinch {
    pub suspension: crate::hcat::HPushout,
    pub wedge: crate::hcat::Coproduct,
    pub map: MapRef,
}

pub fn pinch<H: HomotopyCategory + ?Sized>(h: &mut H, x: ObjRef) -> HcatResult<Pinch> {
    let z = h.zero();
    let xz = h.zero_map(x, z)?;
    let susp = h.h_pushout(xz, xz)?;
    h.set_label(susp.apex, &format!("S{}", h.label(x)));
    let wedge = h.coproduct(susp.apex, susp.apex)?;
    h.set_label(wedge.apex, &format!("S{0}vS{0}", h.label(x)));
    // the suspension coordinate is sent to both summands
    let k1 = h.post(wedge.in1, susp.witness)?;
    let k2 = h.post(wedge.in2, susp.witness)?;
    let k = h.concat(k1, k2)?;
    let zero_in = h.zero_map(z, wedge.apex)?;
    let fu = h.compose(susp.u, zero_in)?;
    let gv = h.compose(susp.v, zero_in)?;
    let k = rebase(h, k, fu, gv)?;
    let map = h.whisker_out(&susp, zero_in, zero_in, k)?.map;
    Ok(Pinch {
        suspension: susp,
        wedge,
        map,
    })
}

/// Length 1 for the pinch map, from the cofibration `X -0-> ΣX -p-> ΣX ∨ ΣX`.
pub fn pinch_certificate<H: HomotopyCategory + ?Sized>(h: &mut H, pinch: &Pinch) -> HcatResult<RelcatCertificate> {
    let (x, s) = (pinch.suspension.u.src, pinch.suspension.apex);
    let f = h.zero_map(x, s)?;
    let w = h.post(pinch.wedge.in2, pinch.suspension.witness)?;
    let fp = h.compose(f, pinch.map)?;
    let zero = h.zero_map(x, pinch.wedge.apex)?;
    let w = rebase(h, w, fp, zero)?;
    cofibration_certificate(h, f, pinch.map, w)
}

/// The length-2 certificate for the diagonal of `ΣX`, with the pieces a
/// reader may want to inspect.
#[derive(Clone, Debug)]
pub struct SuspensionCertificate {
    pub certificate: RelcatCertificate,
    pub pinch: Pinch,
    /// `t₁: ΣX ∨ ΣX → ΣX × ΣX`.
    pub wedge_to_product: MapRef,
    /// `u: F → ΣX ∨ ΣX`, the fibre inclusion of `t₁`.
    pub fibre_inclusion: MapRef,
    /// `X ⋈ X` over the zero object, to compare with `F`.
    pub join: ObjRef,
}

/// Stage 0 is the pinch certificate. Stage 1 uses `Z₁ = ΣX ∨ F`,
/// `ρ₁ = pr₁`, `τ₁ = (p, u)`, `χ₁ = t₁`, `σ₁ = in₁`; the square commutes
/// because `t₁ p = Δ` and `t₁ u ≃ 0` through the fibre.
pub fn suspension_compl_certificate<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    x: ObjRef,
) -> HcatResult<SuspensionCertificate> {
    let pinch = pinch(h, x)?;
    let first = pinch_certificate(h, &pinch)?;
    let s = pinch.suspension.apex;
    let prod = h.product(s, s)?;
    h.set_label(prod.apex, &format!("S{0}xS{0}", h.label(x)));
    let id_s = h.identity(s)?;
    let diag = h.pair(&prod, id_s, id_s)?;
    let zero_s = h.zero_map(s, s)?;
    let left_leg = h.pair(&prod, id_s, zero_s)?;
    let right_leg = h.pair(&prod, zero_s, id_s)?;
    let t1 = h.copair(&pinch.wedge, left_leg, right_leg)?;
    let fib = fibre(h, t1)?;
    h.set_label(fib.apex, "F");
    let u = fib.pr_a;
    let z1 = h.coproduct(s, fib.apex)?;
    h.set_label(z1.apex, &format!("S{}vF", h.label(x)));
    let to_s = h.zero_map(fib.apex, s)?;
    let rho = h.copair(&z1, id_s, to_s)?;
    let tau = h.copair(&z1, pinch.map, u)?;
    // Δ ρ = (Δ, 0) ≃ (t₁ p, t₁ u) = t₁ τ
    let tp = h.compose(pinch.map, t1)?;
    let w1 = h.refl(diag)?;
    let w1 = rebase(h, w1, diag, tp)?;
    let back = h.reverse(fib.witness)?;
    let dz = h.compose(to_s, diag)?;
    let tu = h.compose(u, t1)?;
    let w2 = rebase(h, back, dz, tu)?;
    let sw = h.copair_witness(&z1, w1, w2)?;
    let lhs = h.compose(rho, diag)?;
    let rhs = h.compose(tau, t1)?;
    let sw = rebase(h, sw, lhs, rhs)?;
    let square = HSquare {
        top: rho,
        left: tau,
        right: diag,
        bottom: t1,
        witness: sw,
    };
    let mut certificate = first;
    certificate.base.target = diag;
    certificate.base.stages.push(square);
    certificate.sigmas.push(z1.in1);
    let z = h.zero();
    let xz = h.zero_map(x, z)?;
    let joined = join(h, xz, xz)?;
    Ok(SuspensionCertificate {
        certificate,
        pinch,
        wedge_to_product: t1,
        fibre_inclusion: u,
        join: joined.apex(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainComplex, ChainWorkspace};
    use crate::ganea::relcat;

    #[test]
    fn equivalence_has_length_zero() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "X");
        let id = ws.identity(x).unwrap();
        let c = equivalence_certificate(&mut ws, id).unwrap();
        assert_eq!(validate_relcat_certificate(&mut ws, &c), Ok(0));
        assert_eq!(validate_pushcat_certificate(&mut ws, &c.base), Ok(0));
    }

    #[test]
    fn cofibre_has_length_one() {
        let mut ws = ChainWorkspace::new();
        let y = ws.add_complex(ChainComplex::sphere(1), "Y");
        let a = ws.add_complex(ChainComplex::sphere(3), "A");
        let f = ws.zero_map(y, a).unwrap();
        let c = cofibre_certificate(&mut ws, f).unwrap();
        assert_eq!(validate_relcat_certificate(&mut ws, &c), Ok(1));
        let r = relcat(&mut ws, c.base.target, 4).unwrap().finite().unwrap();
        assert!(r <= 1);
    }

    #[test]
    fn broken_lambda_is_rejected() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "X");
        let id = ws.identity(x).unwrap();
        let mut c = equivalence_certificate(&mut ws, id).unwrap();
        c.base.lambda = ws.zero_map(x, x).unwrap();
        let err = validate_relcat_certificate(&mut ws, &c).unwrap_err();
        assert_eq!(err.check, "lambda-retraction");
    }

    #[test]
    fn pinch_and_suspension() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(1), "S1");
        let p = pinch(&mut ws, x).unwrap();
        let c = pinch_certificate(&mut ws, &p).unwrap();
        assert_eq!(validate_relcat_certificate(&mut ws, &c), Ok(1));
        let sc = suspension_compl_certificate(&mut ws, x).unwrap();
        assert_eq!(validate_relcat_certificate(&mut ws, &sc.certificate), Ok(2));
        let f = ws.complex(sc.fibre_inclusion.src).betti();
        let j = ws.complex(sc.join).betti();
        assert_eq!(f, j);
    }

    #[test]
    fn suspension_of_zero_degenerates() {
        let mut ws = ChainWorkspace::new();
        let z = ws.zero();
        let sc = suspension_compl_certificate(&mut ws, z).unwrap();
        assert_eq!(validate_relcat_certificate(&mut ws, &sc.certificate), Ok(2));
    }

    #[test]
    fn wrong_sigma_is_rejected() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(1), "S1");
        let p = pinch(&mut ws, x).unwrap();
        let mut c = pinch_certificate(&mut ws, &p).unwrap();
        let a = c.base.source();
        c.sigmas[0] = ws.zero_map(a, c.base.stages[0].top.src).unwrap();
        let err = validate_relcat_certificate(&mut ws, &c).unwrap_err();
        assert_eq!((err.check, err.stage), ("rho-sigma", Some(0)));
    }
}

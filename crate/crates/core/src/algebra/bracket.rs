use super::{AlgebraElement, AlgebraError, GenKind, Generator};
use crate::arith::{rat, IndexExpr, Poly};

fn sum_gen(kind: GenKind, m: &IndexExpr, n: &IndexExpr, like: &Generator) -> Generator {
    Generator { kind, index: m + n, sector: like.sector }
}

/// Structure constants for `x` before `y` in the kind order
/// `L < H < G+ < G- < G < C`.
fn ordered(x: &Generator, y: &Generator) -> AlgebraElement {
    use GenKind::*;
    let m = &x.index;
    let n = &y.index;
    let mp = m.to_poly();
    let np = n.to_poly();
    let guard = m + n;
    let mut out = AlgebraElement::zero();
    match (x.kind, y.kind) {
        (L, L) => {
            out.add_body(sum_gen(L, m, n, x), &(&np - &mp));
            let cubic = &(&mp.pow(3) - &mp).scale(&rat(1, 12));
            out.add_central(cubic, &guard);
        }
        (L, H) => out.add_body(sum_gen(H, m, n, x), &np),
        (L, GPlus) | (L, GMinus) | (L, G) => {
            let c = &np - &mp.scale(&rat(1, 2));
            out.add_body(sum_gen(y.kind, m, n, x), &c);
        }
        (H, H) => out.add_central(&mp.scale(&rat(1, 3)), &guard),
        (H, GPlus) => out.add_body(sum_gen(GPlus, m, n, x), &Poly::one()),
        (H, GMinus) => out.add_body(sum_gen(GMinus, m, n, x), &Poly::from_int(-1)),
        (GPlus, GMinus) => {
            out.add_body(sum_gen(L, m, n, x), &Poly::from_int(-2));
            out.add_body(sum_gen(H, m, n, x), &(&mp - &np));
            out.add_central(&odd_central(&mp), &guard);
        }
        (GPlus, GPlus) | (GMinus, GMinus) => {}
        (G, G) => {
            out.add_body(sum_gen(L, m, n, x), &Poly::from_int(-2));
            out.add_central(&odd_central(&mp), &guard);
        }
        _ => unreachable!("kind pair outside the sector tables"),
    }
    out
}

/// `(1/3)(p^2 - 1/4)`.
fn odd_central(p: &Poly) -> Poly {
    (&p.pow(2) - &Poly::constant(rat(1, 4))).scale(&rat(1, 3))
}

/// Super-bracket of two generators of the same sector.
pub fn bracket(x: &Generator, y: &Generator) -> Result<AlgebraElement, AlgebraError> {
    if x.sector != y.sector {
        return Err(AlgebraError::SectorMismatch(x.sector, y.sector));
    }
    x.validate()?;
    y.validate()?;
    if x.kind == GenKind::C || y.kind == GenKind::C {
        return Ok(AlgebraElement::zero());
    }
    if x.kind.rank() <= y.kind.rank() {
        Ok(ordered(x, y))
    } else {
        // [x, y] = -(-1)^{|x||y|} [y, x]
        let sign = -x.parity().koszul(y.parity());
        Ok(ordered(y, x).scaled(&Poly::from_int(sign)))
    }
}

/// Bilinear extension of [`bracket`].
pub fn bracket_elements(
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    for (gx, cx) in x.body() {
        for (gy, cy) in y.body() {
            let b = bracket(gx, gy)?;
            out.add_scaled(&b, &(cx * cy));
        }
    }
    Ok(out)
}

/// `[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|} [y,[x,z]]`.
pub fn super_jacobi_residual(
    x: &Generator,
    y: &Generator,
    z: &Generator,
) -> Result<AlgebraElement, AlgebraError> {
    let ex = AlgebraElement::generator(x.clone());
    let ey = AlgebraElement::generator(y.clone());
    let ez = AlgebraElement::generator(z.clone());
    let mut r = bracket_elements(&ex, &bracket(y, z)?)?;
    r.sub_element(&bracket_elements(&bracket(x, y)?, &ez)?);
    let yxz = bracket_elements(&ey, &bracket(x, z)?)?;
    r.add_scaled(&yxz, &Poly::from_int(-x.parity().koszul(y.parity())));
    Ok(r)
}

/// `[x, y] + (-1)^{|x||y|} [y, x]`; zero for a super-antisymmetric bracket.
pub fn antisymmetry_residual(x: &Generator, y: &Generator) -> Result<AlgebraElement, AlgebraError> {
    let mut r = bracket(x, y)?;
    r.add_scaled(&bracket(y, x)?, &Poly::from_int(x.parity().koszul(y.parity())));
    Ok(r)
}

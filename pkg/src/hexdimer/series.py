"""Truncated product formulas: the generalized product M(a,z), its symmetric
variant, the four-variable right-hand-side product graded by Q = p*q*r*s, and
exact comparison of boxed partition polynomials against these series."""

from __future__ import annotations

from typing import Dict, Tuple

from .algebra import LExp, LPoly, Series, lp_mul, lp_neg, series_inv
from .diagrams import MONO, Z2Z2, z_poly
from .mesh import BoxDims


class SeriesError(Exception):
    pass


class DegreeTooLarge(SeriesError):
    pass


def lmono(coeff: int, eq: int = 0, er: int = 0, es: int = 0) -> LPoly:
    """A signed Laurent monomial in (q, r, s), the argument type of mac."""
    if coeff not in (1, -1):
        raise SeriesError("argument coefficient must be +1 or -1")
    return {(eq, er, es): coeff}


def _lmono_inv(a: LPoly) -> LPoly:
    ((e, c),) = a.items()
    return {(-e[0], -e[1], -e[2]): c}


def _as_lmono(a) -> LPoly:
    if isinstance(a, int):
        return lmono(a)
    if len(a) != 1 or abs(next(iter(a.values()))) != 1:
        raise SeriesError(f"not a signed monomial: {a!r}")
    return dict(a)


def mac(a, N: int, grading: str = "z") -> Series:
    """prod_{n=1..N} (1 - a z^n)^(-n), truncated at z^N."""
    a = _as_lmono(a)
    out = Series.one(N, grading)
    for n in range(1, N + 1):
        factor = Series.one(N, grading)
        factor.coeffs[n] = lp_neg(a)
        out = out * series_inv(factor) ** n
    return out


def mac_tilde(a, N: int, grading: str = "z") -> Series:
    """M(a,z) * M(1/a,z)."""
    a = _as_lmono(a)
    return mac(a, N, grading) * mac(_lmono_inv(a), N, grading)


def z2z2_rhs(N: int) -> Series:
    """The four-variable product formula in the grading variable Q = p*q*r*s,
    with Laurent-polynomial coefficients in (q, r, s)."""
    q, r, s = lmono(1, 1, 0, 0), lmono(1, 0, 1, 0), lmono(1, 0, 0, 1)
    qr = lp_mul(q, r)
    qs = lp_mul(q, s)
    rs = lp_mul(r, s)
    qrs = lp_mul(qr, s)
    num = (mac(1, N, "Q") ** 4 * mac_tilde(qr, N, "Q")
           * mac_tilde(qs, N, "Q") * mac_tilde(rs, N, "Q"))
    den = (mac_tilde(lp_neg(q), N, "Q") * mac_tilde(lp_neg(r), N, "Q")
           * mac_tilde(lp_neg(s), N, "Q") * mac_tilde(lp_neg(qrs), N, "Q"))
    return num * series_inv(den)


def eq3_check(N: int) -> bool:
    """Does the four-variable product at q,r,s -> -1 equal M(1,Q)^2?"""
    lhs = z2z2_rhs(N).specialize_signs(-1, -1, -1)
    rhs = (mac(1, N, "Q") ** 2).specialize_signs(1, 1, 1)
    return lhs == rhs


# -- boxed polynomial vs series -------------------------------------------------


def _poly_to_q_graded(zp) -> Dict[Tuple[int, LExp], int]:
    """Regrade p^a q^b r^c s^d as Q^a q^(b-a) r^(c-a) s^(d-a)."""
    out: Dict[Tuple[int, LExp], int] = {}
    for (ep, eq, er, es), c in zp.terms.items():
        out[(ep, (eq - ep, er - ep, es - ep))] = c
    return out


def _series_to_filtered(ser: Series, D: int) -> Dict[Tuple[int, LExp], int]:
    """Terms Q^n q^i r^j s^k of original total degree 4n+i+j+k <= D."""
    out: Dict[Tuple[int, LExp], int] = {}
    for n, coeff in enumerate(ser.coeffs):
        for e, c in coeff.items():
            if 4 * n + e[0] + e[1] + e[2] <= D:
                out[(n, e)] = c
    return out


def compare_box_vs_series(dims: BoxDims, D: int, scheme: str = "z2z2") -> dict:
    """Compare the boxed partition polynomial against the matching infinite
    product, coefficientwise through total degree D.

    Coefficients of total degree <= min(a,b,c) are stable under box growth
    (every diagram with that few boxes fits), so D above the smallest side is
    rejected.  Returns a report dict; 'match' is the verdict and
    'first_mismatch' names the first differing term, if any.
    """
    a, b, c = dims
    if D > min(a, b, c):
        raise DegreeTooLarge(f"degree {D} exceeds min side {min(a, b, c)}")
    report = {"dims": list(dims), "degree": D, "scheme": scheme}
    if scheme == "mono":
        zp = z_poly(dims, MONO, cap=D)
        box = [zp.terms.get((n, 0, 0, 0), 0) for n in range(D + 1)]
        prod = mac(1, D).specialize_signs(1, 1, 1)
        report["box"] = box
        report["series"] = prod
        mismatches = [n for n in range(D + 1) if box[n] != prod[n]]
    elif scheme == "z2z2":
        zp = z_poly(dims, Z2Z2, cap=D)
        box = _poly_to_q_graded(zp)
        prod = _series_to_filtered(z2z2_rhs(D), D)
        mismatches = sorted(k for k in set(box) | set(prod)
                            if box.get(k, 0) != prod.get(k, 0))
    else:
        raise SeriesError(f"unknown scheme {scheme!r} (want z2z2 or mono)")
    report["match"] = not mismatches
    report["first_mismatch"] = None
    if mismatches:
        k = mismatches[0]
        if scheme == "mono":
            report["first_mismatch"] = {
                "term": f"p^{k}", "box": box[k], "series": prod[k]}
        else:
            report["first_mismatch"] = {
                "term": {"Q": k[0], "qrs": list(k[1])},
                "box": box.get(k, 0), "series": prod.get(k, 0)}
    return report

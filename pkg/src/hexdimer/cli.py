"""Command-line front end: partition functions, named identity checks, and
SVG rendering.

Exit codes: 0 = success / all checks pass, 1 = a mathematical check failed
(a witness is printed), 2 = usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .algebra import MAT_I, MAT_L, MAT_R, mat_mul, mat_neg, mat_pow
from .diagrams import (COUNT, MONO, PlanePartition, Z2Z2, diagram_of,
                       diagram_weight, enumerate_matchings, flippable_faces,
                       matching_of, tau_move, z_poly)
from .mesh import BoxDims, Face, build_mesh
from .overlay import (enumerate_two_factors, overlay, split,
                      two_factor_weight)
from .series import (DegreeTooLarge, compare_box_vs_series, eq3_check, mac,
                     z2z2_rhs)
from .squish import (lemma2_sum, lift_preimages, loop_lift_sum, project,
                     pullback_weighting, sign_weighting, transfer_lift_sum,
                     wp_edge_weighting)

CHECK_NAMES = ("split", "parity", "minus-one", "pullback", "consistency",
               "theorem", "matrices", "eq1", "eq2", "eq3", "fibers")


class UsageError(Exception):
    pass


@dataclass
class CheckReport:
    name: str
    params: Dict[str, object]
    status: str = "pass"
    witness: Optional[object] = None
    seconds: float = 0.0

    def fail(self, witness):
        self.status = "fail"
        if self.witness is None:
            self.witness = witness

    def to_json_obj(self) -> dict:
        return {"check": self.name, "params": self.params,
                "status": self.status, "witness": self.witness,
                "seconds": round(self.seconds, 3)}

    def text(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{self.status.upper()} check={self.name} {ps} ({self.seconds:.2f}s)"
        if self.witness is not None:
            line += f"\n  witness: {self.witness}"
        return line


# -- individual checks -----------------------------------------------------


def check_split(dims: BoxDims) -> CheckReport:
    rep = CheckReport("split", {"dims": ",".join(map(str, dims))})
    mesh = build_mesh(dims)
    ms = enumerate_matchings(dims)
    lams = {}
    for M1 in ms:
        for M2 in ms:
            lam = overlay(mesh, M1, M2)
            lams.setdefault(lam, set()).add((M1, M2))
    total = 0
    for lam, pairs in lams.items():
        rec = split(lam)
        total += len(rec)
        if len(rec) != 2 ** len(lam.loops) or set(rec) != pairs:
            rep.fail({"two_factor": lam.to_json_obj(),
                      "expected_pairs": len(pairs), "split_pairs": len(rec)})
    if total != len(ms) ** 2:
        rep.fail({"split_total": total, "pairs": len(ms) ** 2})
    return rep


def _all_subdims(top: BoxDims):
    for a in range(1, top.a + 1):
        for b in range(1, top.b + 1):
            for c in range(1, top.c + 1):
                yield BoxDims(a, b, c)


def check_parity(max_dims: BoxDims) -> CheckReport:
    rep = CheckReport("parity", {"max_dims": ",".join(map(str, max_dims))})
    for dims in _all_subdims(max_dims):
        a, b, c = dims
        want = (a * b + b * c + c * a) % 2
        mesh = build_mesh(dims)
        ms = enumerate_matchings(dims)
        seen = set()
        for M1 in ms:
            for M2 in ms:
                lam = overlay(mesh, M1, M2)
                if lam in seen:
                    continue
                seen.add(lam)
                if lam.component_count() % 2 != want:
                    rep.fail({"dims": list(dims), "C": lam.component_count()})
        # tau-moves preserve the parity against a fixed reference matching
        M2 = ms[0]
        for M in ms:
            base = overlay(mesh, M, M2).component_count() % 2
            for f in flippable_faces(mesh, M):
                flipped = overlay(mesh, tau_move(mesh, M, f), M2)
                if flipped.component_count() % 2 != base:
                    rep.fail({"dims": list(dims), "face": list(f)})
    return rep


def check_minus_one(dims: BoxDims) -> CheckReport:
    """Sign-weighting lemma at one base size, with transfer cross-check."""
    rep = CheckReport("minus-one", {"dims": ",".join(map(str, dims))})
    a, b, c = dims
    sgn = (-1) ** (a * b + b * c + c * a)
    even = build_mesh(dims.doubled())
    S = sign_weighting(even)
    values = []
    for lam in enumerate_two_factors(dims):
        got = lemma2_sum(even, lam)
        values.append(got)
        if got != sgn * 2 ** len(lam.loops):
            rep.fail({"two_factor": lam.to_json_obj(), "sum": got,
                      "expected": sgn * 2 ** len(lam.loops)})
        for loop in lam.loops:
            brute = loop_lift_sum(even, loop, S).constant_value()
            if brute != -2 or transfer_lift_sum(even, loop) != brute:
                rep.fail({"loop": [list(f) for f in loop], "brute": brute,
                          "transfer": transfer_lift_sum(even, loop)})
    rep.params["per_two_factor"] = values
    return rep


def check_pullback(dims: BoxDims) -> CheckReport:
    """U(mu) = w_p(projection of mu) over all matchings of the even mesh."""
    rep = CheckReport("pullback", {"dims": ",".join(map(str, dims))})
    if not dims.is_even:
        raise UsageError("pullback check needs even dims")
    mesh = build_mesh(dims)
    U = pullback_weighting(mesh)
    wp = wp_edge_weighting(mesh.base)
    for mu in enumerate_matchings(dims):
        lam = project(mesh, mu)
        if U.weight_of(mu) != two_factor_weight(lam, wp.weights):
            rep.fail({"matching": sorted(map(list, mu))})
    return rep


def check_consistency(dims: BoxDims) -> CheckReport:
    """Normalized U(t -> -t) * S equals the diagram weight at q,r,s -> -1."""
    rep = CheckReport("consistency", {"dims": ",".join(map(str, dims))})
    if not dims.is_even:
        raise UsageError("consistency check needs even dims")
    mesh = build_mesh(dims)
    base = mesh.base
    U = pullback_weighting(mesh)
    S = sign_weighting(mesh)
    scheme = Z2Z2.with_signs({"q": -1, "r": -1, "s": -1})

    def W(mu):
        u = U.weight_of(mu)
        sign = S.weight_of(mu).coeff * u.coeff * (-1) ** (u.exp[0] % 2)
        return sign, u.exp[0]

    a, b, c = base.dims
    s0, e0 = W(matching_of(PlanePartition.empty(dims)))
    if (s0, e0) != ((-1) ** (a * b + b * c + c * a), 0):
        rep.fail({"empty_weight": (s0, e0)})
    for mu in enumerate_matchings(dims):
        s, e = W(mu)
        dw = diagram_weight(diagram_of(mesh, mu), scheme)
        if (s * s0, e) != (dw.coeff, 3 * dw.exp[0]):
            rep.fail({"matching_weight": (s * s0, e),
                      "diagram_weight": (dw.coeff, dw.exp[0])})
    return rep


def check_theorem(dims: BoxDims) -> CheckReport:
    rep = CheckReport("theorem", {"dims": ",".join(map(str, dims))})
    lhs = z_poly(dims.doubled(), Z2Z2.with_signs({"q": -1, "r": -1, "s": -1}))
    z = z_poly(dims, MONO.with_signs({"p": "-p"}))
    if lhs != z * z:
        rep.fail({"lhs": lhs.to_json_obj(), "rhs": (z * z).to_json_obj()})
    rep.params["lhs"] = str(lhs)
    return rep


def check_matrices() -> CheckReport:
    rep = CheckReport("matrices", {})
    if mat_mul(MAT_L, MAT_R) != MAT_I or mat_mul(MAT_R, MAT_L) != MAT_I:
        rep.fail("L*R != I")
    if mat_pow(MAT_L, 6) != mat_neg(MAT_I):
        rep.fail("L^6 != -I")
    return rep


def check_eq1(order: int = 6) -> CheckReport:
    # boxes beyond (6,6,6) blow up the profile DP; higher orders are capped
    n = max(1, min(order, 6))
    rep = CheckReport("eq1", {"order": n})
    report = compare_box_vs_series(BoxDims(n, n, n), n, "mono")
    rep.params["coefficients"] = report["box"]
    if not report["match"]:
        rep.fail(report["first_mismatch"])
    return rep


def check_eq2(order: int = 4) -> CheckReport:
    n = max(1, min(order, 4))
    rep = CheckReport("eq2", {"order": n})
    report = compare_box_vs_series(BoxDims(n, n, n), n, "z2z2")
    if not report["match"]:
        rep.fail(report["first_mismatch"])
    return rep


def check_eq3(order: int = 10) -> CheckReport:
    rep = CheckReport("eq3", {"order": order})
    if not eq3_check(order):
        lhs = z2z2_rhs(order).specialize_signs(-1, -1, -1)
        rhs = (mac(1, order, "Q") ** 2).specialize_signs(1, 1, 1)
        rep.fail({"lhs": lhs, "rhs": rhs})
    return rep


def check_fibers(dims: BoxDims) -> CheckReport:
    """The projection fibers partition the even mesh's matchings."""
    rep = CheckReport("fibers", {"dims": ",".join(map(str, dims))})
    even = build_mesh(dims.doubled())
    mus = enumerate_matchings(dims.doubled())
    fibers: Dict[object, set] = {}
    for mu in mus:
        fibers.setdefault(project(even, mu), set()).add(mu)
    lams = set(enumerate_two_factors(dims))
    if set(fibers) != lams:
        rep.fail({"projected": len(fibers), "two_factors": len(lams)})
    total = 0
    for lam, got in fibers.items():
        pre = set(lift_preimages(even, lam))
        total += len(pre)
        if pre != got:
            rep.fail({"two_factor": lam.to_json_obj(),
                      "enumerated": len(pre), "projected": len(got)})
    if total != len(mus):
        rep.fail({"fiber_total": total, "matchings": len(mus)})
    rep.params["fiber_sizes"] = sorted(len(v) for v in fibers.values())
    return rep


def run_check(name: str, dims: Optional[BoxDims], order: Optional[int],
              max_dims: Optional[BoxDims]) -> List[CheckReport]:
    defaults: Dict[str, BoxDims] = {
        "split": BoxDims(2, 2, 2), "minus-one": BoxDims(1, 1, 1),
        "pullback": BoxDims(2, 2, 2), "consistency": BoxDims(2, 2, 2),
        "theorem": BoxDims(1, 1, 1), "fibers": BoxDims(1, 1, 1),
    }
    reports = []

    def run(nm):
        t0 = time.monotonic()
        if nm == "split":
            r = check_split(dims or defaults[nm])
        elif nm == "parity":
            r = check_parity(max_dims or dims or BoxDims(2, 2, 2))
        elif nm == "minus-one":
            r = check_minus_one(dims or defaults[nm])
        elif nm == "pullback":
            r = check_pullback(dims or defaults[nm])
        elif nm == "consistency":
            r = check_consistency(dims or defaults[nm])
        elif nm == "theorem":
            r = check_theorem(dims or defaults[nm])
        elif nm == "matrices":
            r = check_matrices()
        elif nm == "eq1":
            r = check_eq1(order or 6)
        elif nm == "eq2":
            r = check_eq2(order or 4)
        elif nm == "eq3":
            r = check_eq3(order or 10)
        elif nm == "fibers":
            r = check_fibers(dims or defaults[nm])
        else:
            raise UsageError(f"unknown check {nm!r} (choose from {', '.join(CHECK_NAMES)})")
        r.seconds = time.monotonic() - t0
        reports.append(r)

    if name == "all":
        for nm in CHECK_NAMES:
            run(nm)
    else:
        run(name)
    return reports


# -- zfun --------------------------------------------------------------------


def parse_dims(s: str) -> BoxDims:
    try:
        parts = [int(x) for x in s.split(",")]
        return BoxDims(*parts)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad dims {s!r}, want a,b,c") from exc


def parse_set(s: Optional[str]) -> Dict[str, str]:
    """--set grammar: comma-separated name=value, values +-1 or +-variable."""
    if not s:
        return {}
    out = {}
    for item in s.split(","):
        if "=" not in item:
            raise UsageError(f"bad --set item {item!r}")
        name, val = item.split("=", 1)
        name, val = name.strip(), val.strip()
        if name not in ("p", "q", "r", "s"):
            raise UsageError(f"cannot set unknown variable {name!r}")
        if val.lstrip("+-") not in ("1", "p", "q", "r", "s"):
            raise UsageError(f"bad value {val!r} for {name} (want +-1 or +-variable)")
        out[name] = val
    return out


SCHEMES = {"z2z2": Z2Z2, "mono": MONO, "count": COUNT}


def cmd_zfun(args) -> int:
    dims = parse_dims(args.dims)
    scheme = SCHEMES.get(args.weighting)
    if scheme is None:
        raise UsageError(f"unknown weighting {args.weighting!r}")
    subs = parse_set(args.set)
    if subs:
        scheme = scheme.with_signs(subs)
    if args.method == "enumerate":
        a, b, c = dims
        if math.comb(a + c, a) ** b > 10 ** 7:  # cheap upper bound on diagrams
            raise UsageError("box too large for enumeration; use --method dp")
    zp = z_poly(dims, scheme, cap=args.cap, method=args.method)
    if args.format == "json":
        print(json.dumps(zp.to_json_obj()))
    else:
        print(zp)
    return 0


def cmd_check(args) -> int:
    dims = parse_dims(args.dims) if args.dims else None
    max_dims = parse_dims(args.max_dims) if args.max_dims else None
    reports = run_check(args.name, dims, args.order, max_dims)
    if args.format == "json":
        print(json.dumps([r.to_json_obj() for r in reports]))
    else:
        for r in reports:
            print(r.text())
    return 0 if all(r.status == "pass" for r in reports) else 1


# -- render --------------------------------------------------------------------


def _svg_point(x: int, y: int, scale: float = 30.0) -> Tuple[float, float]:
    return (scale * (x - y / 2.0), -scale * y * math.sqrt(3) / 2.0)


_QUAD = {
    "A": ((0, 0), (1, 0), (1, 1), (0, 1)),
    "B": ((0, 0), (1, 0), (2, 1), (1, 1)),
    "C": ((0, 0), (1, 1), (1, 2), (0, 1)),
}

_CLASS_FILL = {"A": "#9ecae1", "B": "#a1d99b", "C": "#fdae6b"}


def _rhombus(f: Face) -> List[Tuple[int, int]]:
    x, y = f.lattice
    return [(x + dx, y + dy) for dx, dy in _QUAD[f.cls]]


def _svg(polys: List[Tuple[List[Tuple[float, float]], str]]) -> str:
    xs = [p[0] for poly, _ in polys for p in poly]
    ys = [p[1] for poly, _ in polys for p in poly]
    pad = 10
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" '
           f'viewBox="{x0:.1f} {y0:.1f} {w:.1f} {h:.1f}">']
    for poly, style in polys:
        pts = " ".join(f"{px:.2f},{py:.2f}" for px, py in poly)
        out.append(f'<polygon points="{pts}" {style}/>')
    out.append("</svg>")
    return "\n".join(out)


def cmd_render(args) -> int:
    if args.diagram:
        with open(args.diagram) as fh:
            pi = PlanePartition.from_json_obj(json.load(fh))
    elif args.dims:
        pi = PlanePartition.empty(parse_dims(args.dims))
    else:
        raise UsageError("render needs --diagram or --dims")
    dims = pi.dims
    mesh = build_mesh(dims)
    M = matching_of(pi)
    polys = []

    def add(f: Face, fill: str, extra: str = ""):
        poly = [_svg_point(x, y) for x, y in _rhombus(f)]
        style = f'fill="{fill}" stroke="#333" stroke-width="1"{extra}'
        polys.append((poly, style))

    if args.what == "matching":
        for f in sorted(M):
            add(f, _CLASS_FILL[f.cls])
    elif args.what == "twofactor":
        empty = matching_of(PlanePartition.empty(dims))
        lam = overlay(mesh, M, empty)
        for f in sorted(lam.doubled):
            add(f, "#cccccc")
        for loop in lam.loops:
            for f in loop:
                add(f, _CLASS_FILL[f.cls], ' fill-opacity="0.9"')
    elif args.what == "squish":
        if not dims.is_even:
            raise UsageError("squish render needs even dims")
        for f in sorted(M):
            if f in mesh.short_edges:
                add(f, "#bbbbbb")
            else:
                add(f, _CLASS_FILL[f.cls])
    else:
        raise UsageError(f"unknown render target {args.what!r}")
    svg = _svg(polys)
    with open(args.out, "w") as fh:
        fh.write(svg + "\n")
    print(f"wrote {args.out} ({len(polys)} rhombi)")
    return 0


# -- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hexdimer",
        description="Exact dimer/plane-partition identities on hexagonal meshes.")
    sub = ap.add_subparsers(dest="command", required=True)

    zf = sub.add_parser("zfun", help="box partition function")
    zf.add_argument("-d", "--dims", required=True, help="a,b,c")
    zf.add_argument("-w", "--weighting", default="z2z2",
                    choices=sorted(SCHEMES))
    zf.add_argument("--set", default=None,
                    help="specializations, e.g. q=-1,r=-1,s=-1,p=-p")
    zf.add_argument("--method", default="dp", choices=("dp", "enumerate"))
    zf.add_argument("--cap", type=int, default=None, help="total degree cap")
    zf.add_argument("--format", default="text", choices=("text", "json"))
    zf.set_defaults(func=cmd_zfun)

    ck = sub.add_parser("check", help="run a named identity check")
    ck.add_argument("name", help="|".join(CHECK_NAMES + ("all",)))
    ck.add_argument("-d", "--dims", default=None, help="a,b,c")
    ck.add_argument("--order", type=int, default=None, help="series order")
    ck.add_argument("--max-dims", default=None, help="parity sweep bound a,b,c")
    ck.add_argument("--format", default="text", choices=("text", "json"))
    ck.set_defaults(func=cmd_check)

    rd = sub.add_parser("render", help="render a diagram as SVG")
    rd.add_argument("--diagram", default=None, help="diagram JSON file")
    rd.add_argument("-d", "--dims", default=None, help="a,b,c (empty diagram)")
    rd.add_argument("--what", default="matching",
                    choices=("matching", "twofactor", "squish"))
    rd.add_argument("-o", "--out", required=True, help="output SVG path")
    rd.set_defaults(func=cmd_render)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegreeTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

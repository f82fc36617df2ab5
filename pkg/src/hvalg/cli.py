"""Command-line front end: one subcommand per check, JSON-lines output.

Exit status: 0 success, 1 failed verification, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import re
import sys
import time
from dataclasses import dataclass

from . import sampling
from .algebra import HV, Basis, Box, Element, default_box
from .autos import AutomorphismSpec, inner_from_base_image, operators_equal, verify_homomorphism
from .cohom import (Cocycle, Functional, ReductionFailure, coboundary_of, cocycle_check,
                    fit_quadratic, h2_report, quadratic_profile, reduce, solve_cocycle_space)
from .deriv import (D1, D2, HomDerivation, Inner, box_pairs, classify_modulo_inner, d0,
                    leibniz_check, tabulate)
from .exactnum import FieldError, FieldSpec, format_scalar
from .gamma import Character, GammaError, GammaHom, GammaSpec
from .syntax import ParseError, parse_basis, parse_element, parse_scalar

CONFIG_ENV = "HVALG_CONFIG"


class UsageError(Exception):
    pass


@dataclass
class Config:
    field: FieldSpec
    gamma: GammaSpec
    box: Box
    seed: int


_SUPPORT_ITEM = re.compile(r"\(([^)]*)\)|(-?\d+)")


def _parse_support(text: str) -> list[tuple[int, ...]]:
    out = []
    for m in _SUPPORT_ITEM.finditer(text):
        if m.group(1) is not None:
            out.append(tuple(int(x) for x in m.group(1).split(",")))
        else:
            out.append((int(m.group(2)),))
    return out


def load_config(path: str | None) -> Config:
    """Read an INI file with sections [field], [gamma], [box], [seed]; all optional."""
    cp = configparser.ConfigParser()
    if path:
        if not os.path.exists(path):
            raise UsageError(f"config file not found: {path}")
        cp.read(path)
    degree = cp.getint("field", "degree", fallback=1)
    minpoly = cp.get("field", "minpoly", fallback="")
    field = FieldSpec(degree, [parse_scalar(c, FieldSpec()) for c in minpoly.split(",") if c.strip()])
    gens_text = cp.get("gamma", "generators", fallback="1")
    gamma = GammaSpec(field, [parse_scalar(g, field) for g in gens_text.split(",")])
    if cp.has_section("box"):
        cap = cp.getint("box", "degree_cap", fallback=3 if gamma.rank == 1 else 2)
        margin = cp.getint("box", "margin", fallback=2)
        core_radius = cp.get("box", "core_radius", fallback=None)
        if cp.has_option("box", "support"):
            box = Box(frozenset(_parse_support(cp.get("box", "support"))), cap, margin,
                      int(core_radius) if core_radius else 2)
        else:
            radius = cp.getint("box", "radius", fallback=4 if gamma.rank == 1 else 2)
            box = Box.ball(gamma, radius, cap, margin,
                           int(core_radius) if core_radius else None,
                           cp.get("box", "norm", fallback="l1"))
        if box.rank != gamma.rank:
            raise UsageError("box support rank does not match Gamma")
    else:
        box = default_box(gamma)
    seed = cp.getint("seed", "value", fallback=0)
    return Config(field, gamma, box, seed)


# -- serialisation -----------------------------------------------------------------

def _s(x) -> str:
    if isinstance(x, (Element, Basis)):
        return str(x)
    return format_scalar(x)


class Output:
    def __init__(self, command: str, timing: bool, text: bool, stream=None):
        self.command = command
        self.timing = timing
        self.text = text
        self.stream = stream or sys.stdout
        self.t0 = time.perf_counter()
        self.failed = False

    def emit(self, status: str, **payload):
        if status == "fail":
            self.failed = True
        rec = {"command": self.command, "status": status, **payload}
        if self.timing:
            rec["seconds"] = round(time.perf_counter() - self.t0, 3)
        if self.text:
            line = " ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(rec.items()))
        else:
            line = json.dumps(rec, sort_keys=True)
        print(line, file=self.stream)


# -- argument helpers --------------------------------------------------------------------

def _gamma_arg(text: str, hv: HV):
    try:
        b = parse_basis(f"L[{text},0]", hv)
    except ParseError as e:
        raise UsageError(f"bad Gamma element {text!r}: {e}") from None
    return b.alpha


def parse_rule(text: str, hv: HV):
    """D0 | D1 | D2 | hom:<s1,...,sk> | inner:<element>."""
    if text == "D0":
        return d0(hv)
    if text == "D1":
        return D1(hv)
    if text == "D2":
        return D2(hv)
    if text.startswith("hom:"):
        imgs = [parse_scalar(s, hv.field) for s in text[4:].split(",")]
        if len(imgs) != hv.rank:
            raise UsageError("hom: needs one image per generator")
        return HomDerivation(hv, GammaHom(hv.gamma, tuple(imgs)))
    if text.startswith("inner:"):
        return Inner(parse_element(text[6:], hv))
    raise UsageError(f"unknown derivation rule {text!r}")


def parse_aut(text: str, hv: HV) -> AutomorphismSpec:
    """tau=t1,...,tk;c=<scalar>;e=<scalar>;h=<element>  (missing parts default to identity)."""
    parts = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise UsageError(f"bad automorphism field {chunk!r}")
        k, v = chunk.split("=", 1)
        parts[k.strip()] = v.strip()
    unknown = set(parts) - {"tau", "c", "e", "h"}
    if unknown:
        raise UsageError(f"unknown automorphism fields {sorted(unknown)}")
    g = hv.gamma
    one = g.field.one()
    tau = (tuple(parse_scalar(t, g.field) for t in parts["tau"].split(","))
           if "tau" in parts else (one,) * g.rank)
    if len(tau) != g.rank:
        raise UsageError("tau needs one image per generator")
    c = g.scaling_unit(parse_scalar(parts.get("c", "1"), g.field))
    e = parse_scalar(parts.get("e", "1"), g.field)
    h = parse_element(parts["h"], hv) if "h" in parts else hv.zero()
    return AutomorphismSpec(hv, Character(g, tau), c, e, h)


def _assignments(items, hv: HV):
    """'lhs=rhs' strings -> list of (lhs text, parsed rhs element)."""
    out = []
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"expected LHS=RHS, got {item!r}")
        lhs, rhs = item.split("=", 1)
        out.append((lhs.strip(), rhs.strip()))
    return out


def _cocycle_source(args, cfg: Config, hv: HV) -> Cocycle:
    box = cfg.box
    if args.functional:
        vals = {}
        for lhs, rhs in _assignments(args.functional, hv):
            vals[parse_basis(lhs, hv)] = parse_scalar(rhs, hv.field)
        psi = coboundary_of(Functional(hv, vals), box)
    else:
        space = solve_cocycle_space(hv, box)
        r = sampling.rng(cfg.seed)
        psi = Cocycle(hv, box)
        for c in space.cocycles():
            psi = psi + r.randint(-3, 3) * c
    for lhs, rhs in _assignments(args.set, hv):
        pair = [parse_basis(p, hv) for p in _split_pair(lhs)]
        psi = psi.with_value(pair[0], pair[1], parse_scalar(rhs, hv.field))
    return psi


def _split_pair(text: str) -> list[str]:
    depth = 0
    for i, ch in enumerate(text):
        depth += ch == "["
        depth -= ch == "]"
        if ch == "," and depth == 0:
            return [text[:i], text[i + 1:]]
    raise UsageError(f"expected a pair 'X,Y', got {text!r}")


# -- commands ---------------------------------------------------------------------

def cmd_bracket(args, cfg, hv, out):
    x = parse_element(args.x, hv)
    y = parse_element(args.y, hv)
    out.emit("ok", result=_s(hv.bracket(x, y)))


def cmd_jacobi_suite(args, cfg, hv, out):
    r = sampling.rng(cfg.seed)
    box = cfg.box
    for n in range(args.count):
        x, y, z = (hv.vector(sampling.basis_vector(r, box)) for _ in range(3))
        anti = hv.bracket(x, y) + hv.bracket(y, x)
        if anti:
            out.emit("fail", kind="antisymmetry", x=_s(x), y=_s(y), residual=_s(anti))
            return
        jac = (hv.bracket(x, hv.bracket(y, z)) + hv.bracket(y, hv.bracket(z, x))
               + hv.bracket(z, hv.bracket(x, y)))
        if jac:
            out.emit("fail", kind="jacobi", x=_s(x), y=_s(y), z=_s(z), residual=_s(jac))
            return
    out.emit("ok", checked=args.count)


def cmd_locfin(args, cfg, hv, out):
    x = parse_element(args.x, hv)
    cap = args.cap if args.cap is not None else cfg.box.degree_cap + 3
    probes = ([parse_element(args.probe, hv)] if args.probe
              else [hv.vector(b) for b in cfg.box.basis()])
    dims = []
    unstable = []
    for p in probes:
        d, st = hv.ad_orbit_dim(x, p, cap)
        dims.append(d)
        if not st:
            unstable.append(_s(p))
    out.emit("ok", in_locally_finite_set=hv.in_locally_finite_set(x), cap=cap,
             max_dim=max(dims), probes=len(probes), not_stabilized=unstable)


def cmd_ideal_closure(args, cfg, hv, out):
    gens = [parse_element(g, hv) for g in args.generators]
    basis = hv.ideal_closure(gens, cfg.box)
    out.emit("ok", dim=len(basis), basis=[_s(b) for b in basis])


def cmd_deriv_apply(args, cfg, hv, out):
    d = parse_rule(args.rule, hv)
    out.emit("ok", rule=args.rule, result=_s(d(parse_element(args.x, hv))))


def cmd_deriv_check(args, cfg, hv, out):
    d = tabulate(parse_rule(args.rule, hv), cfg.box)
    updates = {}
    for lhs, rhs in _assignments(args.set, hv):
        updates[parse_basis(lhs, hv)] = parse_element(rhs, hv)
    if updates:
        d = d.override(updates)
    rep = leibniz_check(d, box_pairs(hv, cfg.box))
    if rep.ok:
        out.emit("ok", checked=rep.checked, unverifiable=len(rep.unverifiable))
    else:
        x, y, res = rep.counterexample
        out.emit("fail", checked=rep.checked,
                 counterexample={"x": _s(x), "y": _s(y), "residual": _s(res)})


def cmd_deriv_classify(args, cfg, hv, out):
    g = _gamma_arg(args.degree, hv)
    rep = classify_modulo_inner(hv, g, cfg.box)
    if any(g):
        ok = rep.remainder_dim == 0
        comps = {}
    else:
        ok = rep.generators_match and rep.outer_remainder_dim == 0
        comps = rep.components() if rep.generators_match else {}
    out.emit("ok" if ok else "fail", degree=list(g), solution_dim=rep.solution_dim,
             restricted_dim=rep.outer_dim, inner_dim=rep.inner_dim,
             remainder_dim=rep.remainder_dim, outer_remainder_dim=rep.outer_remainder_dim,
             components=comps)


def cmd_aut_apply(args, cfg, hv, out):
    s = parse_aut(args.spec, hv)
    out.emit("ok", result=_s(s(parse_element(args.x, hv))))


def cmd_aut_verify(args, cfg, hv, out):
    s = parse_aut(args.spec, hv)
    rep = verify_homomorphism(s, box_pairs(hv, cfg.box, in_box_only=False))
    if rep.ok:
        out.emit("ok", checked=rep.checked)
    else:
        x, y, res = rep.counterexample
        out.emit("fail", checked=rep.checked,
                 counterexample={"x": _s(x), "y": _s(y), "residual": _s(res)})


def cmd_aut_compose(args, cfg, hv, out):
    s1 = parse_aut(args.first, hv)
    s2 = parse_aut(args.second, hv)
    s = s1.compose(s2)

    class _Seq:
        def __call__(self, v):
            return s1(s2(v))
    _Seq.hv = hv
    bad = operators_equal(s, _Seq(), cfg.box.basis())
    if bad is None:
        out.emit("ok", result=repr(s))
    else:
        out.emit("fail", result=repr(s), counterexample={"x": _s(bad)})


def cmd_base_image(args, cfg, hv, out):
    h, c = inner_from_base_image(parse_element(args.target, hv))
    out.emit("ok", h=_s(h), c=_s(c))


def cmd_cocycle_check(args, cfg, hv, out):
    psi = _cocycle_source(args, cfg, hv)
    rep = cocycle_check(psi)
    if rep.ok:
        out.emit("ok", checked=rep.checked, skipped=rep.skipped)
    else:
        x, y, z, r = rep.counterexample
        out.emit("fail", checked=rep.checked,
                 counterexample={"x": _s(x), "y": _s(y), "z": _s(z), "residual": _s(r)})


def cmd_cocycle_reduce(args, cfg, hv, out):
    psi = _cocycle_source(args, cfg, hv)
    try:
        red = reduce(psi)
    except ReductionFailure as e:
        out.emit("fail", counterexample={"x": _s(e.pair[0]), "y": _s(e.pair[1]),
                                         "value": _s(e.value)})
        return
    fit = fit_quadratic(hv, quadratic_profile(red.phi))
    ok = fit.fits and fit.b == 0
    out.emit("ok" if ok else "fail", checked=red.checked, unverifiable=len(red.unverifiable),
             profile_b=_s(fit.b), profile_fits=fit.fits)


def cmd_h2(args, cfg, hv, out):
    rep = h2_report(hv, cfg.box)
    if rep.degenerate:
        status = "inconclusive"
    else:
        status = "ok" if rep.quotient_on_core == 0 else "fail"
    out.emit(status, cocycle_dim=rep.cocycle_dim,
             coboundary_dim_restricted=rep.coboundary_dim_restricted,
             cocycle_dim_restricted=rep.cocycle_dim_restricted,
             quotient_on_core=rep.quotient_on_core, degenerate=rep.degenerate)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"INI config file (default: ${CONFIG_ENV} if set)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--box-scale", type=int, default=0,
                        help="grow (>0) or shrink (<0) the box radius and degree cap")
    common.add_argument("--json", action="store_true", help="JSON-lines output (the default)")
    common.add_argument("--text", action="store_true", help="key=value output instead of JSON")
    common.add_argument("--timing", action="store_true", help="add elapsed seconds to records")

    p = argparse.ArgumentParser(prog="hvalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    sp = add("bracket", cmd_bracket, "bracket of two elements")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = add("jacobi-suite", cmd_jacobi_suite, "antisymmetry and Jacobi on random basis triples")
    sp.add_argument("--count", type=int, default=1000)
    sp = add("locfin", cmd_locfin, "local finiteness of ad x against box probes")
    sp.add_argument("x")
    sp.add_argument("--probe")
    sp.add_argument("--cap", type=int)
    sp = add("ideal-closure", cmd_ideal_closure, "truncated ideal generated by elements")
    sp.add_argument("generators", nargs="+")
    sp = add("deriv-apply", cmd_deriv_apply, "apply a derivation rule")
    sp.add_argument("rule", help="D0 | D1 | D2 | hom:<images> | inner:<element>")
    sp.add_argument("x")
    sp = add("deriv-check", cmd_deriv_check, "Leibniz check of a tabulated rule on the box")
    sp.add_argument("rule")
    sp.add_argument("--set", action="append", metavar="BASIS=ELEMENT",
                    help="override the image of one basis vector")
    sp = add("deriv-classify", cmd_deriv_classify, "derivations of one degree modulo inner ones")
    sp.add_argument("--degree", default="0")
    sp = add("aut-apply", cmd_aut_apply, "apply an automorphism spec")
    sp.add_argument("spec", help="tau=..;c=..;e=..;h=..")
    sp.add_argument("x")
    sp = add("aut-verify", cmd_aut_verify, "homomorphism check on all box pairs")
    sp.add_argument("spec")
    sp = add("aut-compose", cmd_aut_compose, "compose two automorphism specs")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("aut-base", cmd_base_image, "inner part h from a prescribed image of L[0,0]")
    sp.add_argument("target")
    for name, fn, help_ in (("cocycle-check", cmd_cocycle_check, "cocycle identity on the box"),
                            ("cocycle-reduce", cmd_cocycle_reduce, "normalize a cocycle")):
        sp = add(name, fn, help_)
        sp.add_argument("--functional", action="append", metavar="BASIS=SCALAR",
                        help="use the coboundary of this functional (repeatable)")
        sp.add_argument("--set", action="append", metavar="X,Y=SCALAR",
                        help="overwrite one pair value")
    add("h2", cmd_h2, "truncated second cohomology on the core")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.command, args.timing, args.text)
    try:
        cfg = load_config(args.config or os.environ.get(CONFIG_ENV))
        if args.seed is not None:
            cfg.seed = args.seed
        if args.box_scale:
            cfg.box = cfg.box.scaled(args.box_scale)
        hv = HV(cfg.gamma)
        args.func(args, cfg, hv, out)
    except (UsageError, ParseError, GammaError, FieldError, configparser.Error, ValueError) as e:
        out.emit("error", error=str(e))
        return 2
    return 1 if out.failed else 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: one JSON report per run on standard output.

Report shape: {"operation", "input", "result"} in canonical form (sorted
keys, fixed separators), so reports for identical inputs are identical
bytes across runs and thread counts; GFL_THREADS only changes how fast
they appear.  The input field carries the sha256 of the instance file
bytes (or the generator's kind and seed).  Wall-clock time goes to
standard error, never into the report.

Exit codes: 0 the operation succeeded, 2 it ran and falsified the
property it checks (a rejection certificate is in the report), 1 usage
errors and malformed input.  Domain rejections raised while an operation
runs (an axiom failure, a plane that does not coordinatize, a divisor of
nonzero class) count as falsified, not as usage errors.

Instance files are JSON.  Loaders unwrap the generator envelope
{kind, seed, params, payload} automatically, so `gen --out f.json`
output feeds any matching subcommand directly.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from .curvegal import (CurveGaloisData, CurveGaloisElem, QuotientCandidate,
                       cc_match, cu_separator, genus_detect, kummer_pairing)
from .ffcore import GF, gf
from .flagmap import (HomogeneousMap, Ring, find_flag, find_flag_combination,
                      is_c_pair, maximal_cpair_cliques)
from .gen import generate, kinds
from .ladicdiv import (LadicDivisor, LadicFunction, class_map, dd_decompose,
                       gff_subfield, surface_divisor)
from .projgeom import (IncidenceStructure, PartialStructure, check_axioms,
                       check_partial, check_pappus, coordinatize_plane, decompose)
from .ratfunc import ClosedPoint, RatFunc, RatFunc2, ratfunc_from_json
from .util import canonical_json
from .valuation import (Valuation, compatible, ord_value, order_from_flagmap,
                        residue, residues_vanish_all)


class UsageError(Exception):
    """Bad invocation or malformed instance; exits 1 without a report."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; here 2 means a falsified property
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


# ---- loading ---------------------------------------------------------


def _load(path: str):
    with open(path, "rb") as fh:
        raw = fh.read()
    return json.loads(raw.decode("utf-8")), hashlib.sha256(raw).hexdigest()


def _payload(doc):
    if isinstance(doc, dict) and "payload" in doc:
        return doc["payload"]
    return doc


def _decode(what, fn):
    try:
        return fn()
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"malformed {what}: {exc}") from exc


def _field(payload, args=None) -> GF:
    p = payload.get("p") if isinstance(payload, dict) else None
    if p is None and args is not None:
        p = args.p
    if p is None:
        raise UsageError("instance does not declare p (pass --p)")
    return gf(int(p), int(payload.get("e", 1)) if isinstance(payload, dict) else 1)


def _one_map(payload) -> HomogeneousMap:
    data = payload.get("mu", payload if "table" in payload else None)
    if data is None:
        raise KeyError("no flag map found (expected 'mu' or a bare map)")
    return HomogeneousMap.from_json(data)


def _map_pair(payload):
    return (HomogeneousMap.from_json(payload["mu"]),
            HomogeneousMap.from_json(payload["mu2"]))


def _structure(payload) -> IncidenceStructure:
    return IncidenceStructure.from_json(payload.get("structure", payload))


# ---- rendering -------------------------------------------------------


def _deep_json(obj):
    """Result values for the report: objects by their to_json, tuples as
    lists, sets sorted; leaves must already be JSON scalars."""
    if hasattr(obj, "to_json"):
        return _deep_json(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): _deep_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_deep_json(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_deep_json(v) for v in obj)
    return obj


def _flag_json(flag):
    if flag is None:
        return None
    return [[list(v) for v in level] for level in flag.chain]


def _unit_string(u: int, ell: int) -> str:
    """Base-ell digit rendering: 4 with ell 3 reads '1+l'."""
    if u == 0:
        return "0"
    parts = []
    k = 0
    while u:
        u, d = divmod(u, ell)
        if d:
            power = "" if k == 0 else ("l" if k == 1 else f"l^{k}")
            coeff = str(d) if (k == 0 or d > 1) else ""
            parts.append(coeff + power)
        k += 1
    return "+".join(parts)


# exit-2 path: the operation itself rejected the instance
def _falsified(exc: ValueError):
    return {"ok": False, "error": str(exc)}, False


# ---- flagmap ---------------------------------------------------------


def _cmd_flagmap_check(args):
    doc, digest = _load(args.file)
    mu = _decode("flag map", lambda: _one_map(_payload(doc)))
    flag = find_flag(mu)
    result = {"is_flag_map": flag is not None, "flag": _flag_json(flag)}
    return {"file": digest}, result, flag is not None


def _cmd_flagmap_find_combo(args):
    doc, digest = _load(args.file)
    mu, mu2 = _decode("flag map pair", lambda: _map_pair(_payload(doc)))
    try:
        res = find_flag_combination(mu, mu2, args.level)
        pair = is_c_pair(mu, mu2)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"found": res.found,
              "coeffs": list(res.coeffs) if res.found else None,
              "flag": _flag_json(res.flag),
              "is_c_pair": pair.ok,
              "failing_planes": [[list(v) for v in b] for b in res.failing]}
    return {"file": digest}, result, res.found


def _cmd_flagmap_cliques(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)

    def decode():
        if "maps" in payload:
            jsons = payload["maps"]
        elif "mu" in payload:
            jsons = [payload["mu"]]
            if "mu2" in payload:
                jsons.append(payload["mu2"])
        else:
            raise KeyError("expected 'maps' or 'mu'/'mu2'")
        return [HomogeneousMap.from_json(j) for j in jsons]

    maps = _decode("flag map list", decode)
    try:
        cliques = maximal_cpair_cliques(maps)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    return {"file": digest}, {"cliques": [list(c) for c in cliques]}, True


# ---- val -------------------------------------------------------------


def _val_and_func(payload, args, key="func"):
    F = _field(payload, args)
    v = Valuation.from_json(F, payload["valuation"])
    f = ratfunc_from_json(F, payload[key])
    return F, v, f


def _cmd_val_ord(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F, v, f = _decode("valuation instance", lambda: _val_and_func(payload, args))
    try:
        value = ord_value(v, f)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"malformed valuation instance: {exc}") from exc
    result = {"kind": v.kind,
              "ord": list(value) if isinstance(value, tuple) else value}
    return {"file": digest}, result, True


def _cmd_val_residue(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    f = _decode("function f", lambda: RatFunc2.from_json(F, payload["f"]))
    g = _decode("function g", lambda: RatFunc2.from_json(F, payload["g"]))
    if "valuation" in payload:
        v = _decode("valuation", lambda: Valuation.from_json(F, payload["valuation"]))
        try:
            r = residue(v, f, g)
        except ValueError as exc:
            return {"file": digest}, *_falsified(exc)
        num, den = r.canonical()
        result = {"trivial": r.trivial, "curve": r.curve.to_json(),
                  "class": [list(num), list(den)]}
        return {"file": digest}, result, True
    try:
        sweep = residues_vanish_all(f, g)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"ok": sweep.ok,
              "witness": None if sweep.witness is None else sweep.witness.to_json(),
              "checked": len(sweep.checked)}
    return {"file": digest}, result, sweep.ok


def _cmd_val_order_from_flag(args):
    doc, digest = _load(args.file)
    mu = _decode("flag map", lambda: _one_map(_payload(doc)))
    try:
        rep = order_from_flagmap(mu)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"ok": rep.ok,
              "classes": [[list(pt) for pt in cls] for cls in rep.classes],
              "violations": _deep_json(rep.violations)}
    return {"file": digest}, result, rep.ok


def _cmd_val_compatible(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    v1 = _decode("valuation v1", lambda: Valuation.from_json(F, payload["v1"]))
    v2 = _decode("valuation v2", lambda: Valuation.from_json(F, payload["v2"]))
    try:
        ok = compatible(v1, v2)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    return {"file": digest}, {"compatible": ok}, ok


# ---- curve -----------------------------------------------------------


def _cmd_curve_div(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    f = _decode("function", lambda: RatFunc2.from_json(F, payload["func"]))
    try:
        div = surface_divisor(f)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    entries = sorted(div.items(), key=lambda kv: kv[0].sort_key())
    result = {"divisor": [[c.to_json(), a] for c, a in entries]}
    return {"file": digest}, result, True


def _cmd_curve_pair(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    mu = _decode("point map", lambda: CurveGaloisElem.from_json(F, payload["mu"]))
    f = _decode("function", lambda: ratfunc_from_json(F, payload["func"]))
    if not isinstance(f, RatFunc):
        raise UsageError("the pairing takes a one-variable function")
    try:
        value = kummer_pairing(mu, f, args.level)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    return {"file": digest}, {"pairing": value}, True


def _cmd_curve_separator(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    iota = _decode("point map", lambda: CurveGaloisElem.from_json(F, payload["iota"]))
    s = int(payload.get("s", 2))
    try:
        sep = cu_separator(iota, s, args.level)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"case": sep.case, "level": sep.level, "s": s,
              "points": [pt.to_json() for pt in sep.points],
              "funcs": [f.to_json() for f in sep.funcs],
              "iota_image": list(sep.iota_image),
              "inertia_images": [list(row) for row in sep.inertia_images]}
    return {"file": digest}, result, True


def _genus_data(F, payload) -> CurveGaloisData:
    quots = []
    for qj in payload.get("quotients", ()):
        images = {ClosedPoint.from_json(F, pj): v
                  for pj, v in qj.get("inertia_images", ())}
        quots.append(QuotientCandidate(qj["modulus"], images,
                                       qj.get("extra_images", ())))
    points = [ClosedPoint.from_json(F, pj) for pj in payload.get("points", ())]
    return CurveGaloisData(payload["genus"], points, quots)


def _cmd_curve_genus(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    data = _decode("curve data", lambda: _genus_data(F, payload))
    return {"file": digest}, {"positive_genus": genus_detect(data)}, True


def _cc_side(args, side):
    """One half of a cc-match instance: its own file, or half a bundle."""
    path = getattr(args, side) or args.file
    if path is None:
        raise UsageError(f"cc-match needs --{side} (or a bundle via --file)")
    doc, digest = _load(path)
    data = _payload(doc)
    if side in data:
        data = data[side]
    return data, digest


def _cmd_curve_cc_match(args):
    data_a, digest_a = _cc_side(args, "a")
    data_b, digest_b = _cc_side(args, "b")
    digest = {"a": digest_a, "b": digest_b}

    def decode():
        F = _field(data_a, args)
        ell = args.ell or data_a["ell"]
        m = args.level or data_a["m"]
        ring = Ring.truncated(int(ell), int(m))
        da = CurveGaloisData(data_a.get("genus", 0),
                             [ClosedPoint.from_json(F, pj)
                              for pj in data_a["points"]])
        db = CurveGaloisData(data_b.get("genus", 0),
                             [ClosedPoint.from_json(F, pj)
                              for pj in data_b["points"]])
        images = {ClosedPoint.from_json(F, pj):
                  CurveGaloisElem.from_json(F, ej)
                  for pj, ej in data_a["images"]}
        return ring, da, db, images

    ring, da, db, images = _decode("cc-match instance", decode)
    match = cc_match(da, db, images, ring)
    result = {"ok": match.ok,
              "a": None if match.unit is None else _unit_string(match.unit, ring.ell),
              "unit": match.unit,
              "pairs": [[w.to_json(), w2.to_json()] for w, w2 in match.pairs],
              "failure": _deep_json(match.failure)}
    return digest, result, match.ok


# ---- ladic -----------------------------------------------------------


def _divisor(payload, args) -> LadicDivisor:
    F = _field(payload, args)
    return LadicDivisor.from_json(F, payload["divisor"])


def _cmd_ladic_class(args):
    doc, digest = _load(args.file)
    D = _decode("divisor", lambda: _divisor(_payload(doc), args))
    return {"file": digest}, {"class": class_map(D)}, True


def _cmd_ladic_decompose(args):
    doc, digest = _load(args.file)
    D = _decode("divisor", lambda: _divisor(_payload(doc), args))
    try:
        rep = dd_decompose(D)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"level": rep.level,
              "pairs": [[a, f.to_json()] for f, a in rep.pairs],
              "warnings": _deep_json(rep.warnings)}
    return {"file": digest}, result, True


def _cmd_ladic_gff(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    fhat = _decode("word f", lambda: LadicFunction.from_json(F, payload["f"]))
    ghat = _decode("word g", lambda: LadicFunction.from_json(F, payload["g"]))
    try:
        rep = gff_subfield(fhat, ghat, args.level)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"ok": rep.ok, "axis": rep.axis,
              "generator": None if rep.generator is None else rep.generator.to_json(),
              "witness": _deep_json(rep.witness),
              "shared_support": [c.to_json() for c in rep.shared_support],
              "checked": rep.checked}
    return {"file": digest}, result, rep.ok


# ---- proj ------------------------------------------------------------


def _cmd_proj_axioms(args):
    doc, digest = _load(args.file)
    st = _decode("incidence structure", lambda: _structure(_payload(doc)))
    rep = check_axioms(st)
    return {"file": digest}, rep.to_json(), rep.ok


def _cmd_proj_pappus(args):
    doc, digest = _load(args.file)
    st = _decode("incidence structure", lambda: _structure(_payload(doc)))
    try:
        rep = check_pappus(st)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    return {"file": digest}, rep.to_json(), rep.ok


def _cmd_proj_coordinatize(args):
    doc, digest = _load(args.file)
    st = _decode("incidence structure", lambda: _structure(_payload(doc)))
    try:
        co = coordinatize_plane(st)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    cj = co.to_json()
    result = {"order": cj["order"],
              "tables": {"add": cj["add"], "mul": cj["mul"]}}
    return {"file": digest}, result, True


def _cmd_proj_partial(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    ps = _decode("partial structure",
                 lambda: PartialStructure.from_json(payload.get("structure", payload)))
    try:
        ok = check_partial(ps)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"ok": ok, "points": len(ps.points), "lines": len(ps.lines),
              "omitted": ps.omitted}
    return {"file": digest}, result, ok


def _cmd_proj_generating(args):
    doc, digest = _load(args.file)
    payload = _payload(doc)
    F = _field(payload, args)
    f = _decode("function", lambda: ratfunc_from_json(F, payload["func"]))
    if not isinstance(f, RatFunc):
        raise UsageError("generation is a one-variable question")
    try:
        dec = decompose(f)
    except ValueError as exc:
        return {"file": digest}, *_falsified(exc)
    result = {"generating": dec is None,
              "outer": None if dec is None else dec[0].to_json(),
              "inner": None if dec is None else dec[1].to_json()}
    return {"file": digest}, result, dec is None


# ---- gen -------------------------------------------------------------


def _cmd_gen(args):
    params = {"p": args.p, "ell": args.ell, "level": args.level,
              "dim": args.dim, "support": args.support, "s": args.s,
              "size": args.size, "corrupt": True if args.corrupt else None,
              "q": args.q, "n": args.n}
    env = _decode("generator parameters",
                  lambda: generate(args.kind, args.seed, **params))
    blob = canonical_json(env) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(blob)
        sha = hashlib.sha256(blob.encode("utf-8")).hexdigest()
        result = {"path": args.out, "sha256": sha, "params": env["params"]}
    else:
        result = {"instance": env}
    return {"kind": args.kind, "seed": args.seed}, result, True


# ---- wiring ----------------------------------------------------------


def _leaf(sub, name, handler, group, needs_file=True, **extra):
    cmd = sub.add_parser(name, help=extra.pop("help", None))
    if needs_file:
        cmd.add_argument("--file", required=not extra.pop("file_optional", False),
                         help="instance file (JSON)")
    for flag, kw in extra.items():
        cmd.add_argument(f"--{flag}", **kw)
    cmd.add_argument("--p", type=int, help="base field characteristic override")
    cmd.add_argument("--ell", type=int, help="coefficient prime override")
    cmd.add_argument("--level", type=int, help="truncation level override")
    cmd.set_defaults(run=handler, operation=f"{group} {name}")
    return cmd


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="gfl",
        description="Flag maps, valuations, divisor calculus, and axiomatic "
                    "projective geometry over small finite fields.",
        epilog="GFL_THREADS caps worker threads; reports are byte-identical "
               "for identical inputs at any thread count.")
    groups = parser.add_subparsers(dest="group", required=True)

    fm = groups.add_parser("flagmap", help="flag maps on P(B)").add_subparsers(
        dest="op", required=True)
    _leaf(fm, "check", _cmd_flagmap_check, "flagmap")
    _leaf(fm, "find-combo", _cmd_flagmap_find_combo, "flagmap")
    _leaf(fm, "cliques", _cmd_flagmap_cliques, "flagmap")

    val = groups.add_parser("val", help="valuations and residues").add_subparsers(
        dest="op", required=True)
    _leaf(val, "ord", _cmd_val_ord, "val")
    _leaf(val, "residue", _cmd_val_residue, "val")
    _leaf(val, "order-from-flag", _cmd_val_order_from_flag, "val")
    _leaf(val, "compatible", _cmd_val_compatible, "val")

    curve = groups.add_parser("curve", help="point maps and pairings").add_subparsers(
        dest="op", required=True)
    _leaf(curve, "div", _cmd_curve_div, "curve")
    _leaf(curve, "pair", _cmd_curve_pair, "curve")
    _leaf(curve, "separator", _cmd_curve_separator, "curve")
    _leaf(curve, "genus", _cmd_curve_genus, "curve")
    cc = _leaf(curve, "cc-match", _cmd_curve_cc_match, "curve", file_optional=True)
    cc.add_argument("--a", help="first system (file)")
    cc.add_argument("--b", help="second system (file)")

    ladic = groups.add_parser("ladic", help="l-adic divisors and words").add_subparsers(
        dest="op", required=True)
    _leaf(ladic, "class", _cmd_ladic_class, "ladic")
    _leaf(ladic, "decompose", _cmd_ladic_decompose, "ladic")
    _leaf(ladic, "gff", _cmd_ladic_gff, "ladic")

    proj = groups.add_parser("proj", help="incidence geometry").add_subparsers(
        dest="op", required=True)
    _leaf(proj, "axioms", _cmd_proj_axioms, "proj")
    _leaf(proj, "pappus", _cmd_proj_pappus, "proj")
    _leaf(proj, "coordinatize", _cmd_proj_coordinatize, "proj")
    _leaf(proj, "partial", _cmd_proj_partial, "proj")
    _leaf(proj, "generating", _cmd_proj_generating, "proj")

    gen = groups.add_parser("gen", help="seeded instance files")
    gen.add_argument("kind", choices=kinds())
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="write the instance here (default: report)")
    gen.add_argument("--p", type=int)
    gen.add_argument("--ell", type=int)
    gen.add_argument("--level", type=int)
    gen.add_argument("--dim", type=int, help="flagmap-cpair: subspace dimension")
    gen.add_argument("--support", type=int, help="ladic, curve-iota: support size")
    gen.add_argument("--s", type=int, help="curve-iota: separation parameter")
    gen.add_argument("--size", type=int, help="cc-pair: number of points")
    gen.add_argument("--corrupt", action="store_true",
                     help="cc-pair: rescale one generator image")
    gen.add_argument("--q", type=int, help="pg-plane: field order")
    gen.add_argument("--n", type=int, help="pg-plane: projective dimension")
    gen.set_defaults(run=_cmd_gen, operation="gen")

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        digest, result, ok = args.run(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON: {exc}\n")
        return 1
    report = {"operation": args.operation, "input": digest, "result": result}
    sys.stdout.write(canonical_json(report) + "\n")
    sys.stderr.write(f"elapsed {time.perf_counter() - start:.3f}s\n")
    return 0 if ok else 2


if __name__ == "__main__":
    raise SystemExit(main())

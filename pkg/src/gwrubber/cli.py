"""Command-line front end (``gwrubber``).

Exit codes: 0 success, 1 computation error (including an oracle mismatch),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import oracles
from .cache import SeriesCache, cache_key, resolve_cache_dir
from .degeneration import (
    ch_profile,
    ch_system,
    extract_invariant,
    fn_system,
    invariant_rows,
    pn_system,
    solve_system,
)
from .hamiltonian import build_hamiltonian, check_nilpotent, phase_basis_split
from .potentials import rubber_potential
from .series import CapsExceeded, TruncationCaps, add, mul
from .serialization import SeriesFormatError, declares_balance, deserialize, dumps, loads, serialize
from .weyl import check_balance, star

COMMON_KEYS = ("max_z", "max_p_weight", "max_theta_order", "json", "cache_dir", "verbose")


class UsageError(Exception):
    pass


# -- argument helpers -----------------------------------------------------------------


def _vector(text: str) -> tuple[int, ...]:
    """``"3"`` -> ``(3,)``, ``"1,0,2"`` -> ``(1, 0, 2)``, ``""`` -> ``()``."""
    text = text.strip()
    if not text:
        return ()
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(x < 0 for x in v):
        raise argparse.ArgumentTypeError("entries must be nonnegative")
    return v


def _frac_json(c) -> dict:
    c = Fraction(c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--max-z", type=_vector, default=None, help="curve-degree cap, e.g. 4 or 2,2")
    g.add_argument("--max-p-weight", type=int, default=None)
    g.add_argument("--max-theta-order", type=int, default=None)
    g.add_argument("--json", action="store_true", default=None, help="machine-readable output")
    g.add_argument("--cache-dir", default=None, help="cache directory (default: $GWR_CACHE, else no cache)")
    g.add_argument("--config", default=None, help="file of 'key = value' lines mirroring the flags")
    g.add_argument("-v", "--verbose", action="store_true", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parent()
    parser = argparse.ArgumentParser(prog="gwrubber", description="Exact rubber / relative invariant computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ch", parents=[common], help="plane curves relative a line (Caporaso-Harris numbers)")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--alpha", type=_vector, default=())
    p.add_argument("--beta", type=_vector, default=())
    p.add_argument("--irreducible", action="store_true", default=None, help="connected count instead of the Severi-type count")

    p = sub.add_parser("hirzebruch", parents=[common], help="relative invariants of F_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--connected", action="store_true", default=None)

    p = sub.add_parser("pn", parents=[common], help="rational relative invariants of P^3 relative a plane")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--connected", action="store_true", default=None)

    p = sub.add_parser("rubber", parents=[common], help="rational rubber potential of (target, O(m))")
    p.add_argument("--target", choices=["point", "p1", "p2"], required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--output", default=None, help="write the series in canonical format")
    p.add_argument("--dump", action="store_true", default=None, help="print the series in canonical format")

    p = sub.add_parser("hamiltonian", parents=[common], help="Hamiltonian of (P^1, O(m))")
    p.add_argument("--target", choices=["p1"], default="p1")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--check-nilpotent", action="store_true", default=None)
    p.add_argument("--output", default=None)

    p = sub.add_parser("oracle", help="classical reference counts")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("kontsevich", parents=[common])
    o.add_argument("--max-degree", type=int, default=4)
    o = osub.add_parser("ch", parents=[common])
    o.add_argument("--degree", type=int, required=True)
    o.add_argument("--delta", type=int, required=True)
    o.add_argument("--alpha", type=_vector, default=())
    o.add_argument("--beta", type=_vector, default=())
    o.add_argument("--irreducible", action="store_true", default=None)
    o = osub.add_parser("hurwitz", parents=[common])
    o.add_argument("--degree", type=int, required=True)
    o.add_argument("--mu", type=_vector, required=True)
    o.add_argument("--transpositions", type=int, required=True)
    o = osub.add_parser("tables", parents=[common], help="regenerate the golden reference tables")
    o.add_argument("--output-dir", required=True)

    p = sub.add_parser("series", help="inspect and combine series files")
    ssub = p.add_subparsers(dest="action", required=True)
    s = ssub.add_parser("inspect", parents=[common])
    s.add_argument("file")
    s = ssub.add_parser("dump", parents=[common])
    s.add_argument("file")
    for name in ("add", "mul"):
        s = ssub.add_parser(name, parents=[common])
        s.add_argument("a")
        s.add_argument("b")
        s.add_argument("-o", "--output", default=None)
        if name == "mul":
            s.add_argument("--star", action="store_true", default=None, help="Weyl product instead of the plain one")
    return parser


def _apply_config(args, parser):
    path = getattr(args, "config", None)
    if not path:
        return
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        parser.error(f"cannot read config: {exc}")
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"malformed config line {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key == "config" or not hasattr(args, key):
            parser.error(f"unknown config key {key!r}")
        if getattr(args, key) not in (None, ()):
            continue  # command line wins
        if key in ("max_z", "alpha", "beta", "mu"):
            conv = _vector(val)
        elif key in ("json", "verbose", "irreducible", "connected", "check_nilpotent", "dump", "star"):
            if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                parser.error(f"bad boolean for {key!r}")
            conv = val.lower() in ("true", "1", "yes")
        elif key in ("cache_dir", "output", "target", "file", "a", "b"):
            conv = val
        else:
            try:
                conv = int(val)
            except ValueError:
                parser.error(f"bad integer for {key!r}")
        setattr(args, key, conv)


def _validate_caps(args, parser):
    mz = getattr(args, "max_z", None)
    if mz is not None and (not mz or any(x <= 0 for x in mz)):
        parser.error("--max-z entries must be positive")
    for key in ("max_p_weight", "max_theta_order"):
        v = getattr(args, key, None)
        if v is not None and v <= 0:
            parser.error(f"--{key.replace('_', '-')} must be positive")


# -- output ---------------------------------------------------------------------------


def _emit(args, human: str, payload) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(human)


def _cache(args) -> SeriesCache:
    return SeriesCache(resolve_cache_dir(getattr(args, "cache_dir", None)))


def _row_payload(target, row):
    profile = {k: v for k, v in row.items() if k not in ("coefficient", "count")}
    return {"invariant": {"target": target, "profile": profile}, "value": _frac_json(row["count"])}


def _rows_human(rows) -> str:
    out = ["degree  genus  theta          contacts (k,class)^e      count"]
    for r in rows:
        th = " ".join(f"{k}^{e}" for k, e in r["theta"].items()) or "-"
        ct = " ".join(f"({k},{c})^{e}" for k, c, e in r["contacts"]) or "-"
        deg = ",".join(map(str, r["degree"]))
        out.append(f"{deg:<7} {r['genus']:<6} {th:<14} {ct:<25} {r['count']}")
    return "\n".join(out)


# -- commands -------------------------------------------------------------------------


def cmd_ch(args) -> int:
    d, delta = args.degree, args.delta
    alpha, beta = tuple(args.alpha or ()), tuple(args.beta or ())
    irreducible = bool(args.irreducible)
    try:
        oracle = oracles.ch_recursion(d, delta, alpha, beta, irreducible=irreducible)
    except ValueError as exc:
        raise UsageError(str(exc))
    profile = ch_profile(d, delta, alpha, beta)
    max_z = args.max_z[0] if args.max_z else d
    needed = oracles.point_count(d, delta, beta)
    theta_cap = args.max_theta_order or max(needed, 1)
    sys_ = ch_system(max_z, theta_cap)
    key = cache_key("ch", sys_.pair.to_dict(), sys_.caps.to_dict())
    F = _cache(args).fetch(key, lambda: solve_system(sys_))
    if needed < 0:
        value = Fraction(0)
    else:
        value = extract_invariant(F, profile, connected=irreducible)
    kind = "irreducible" if irreducible else "all reduced curves"
    human = (
        f"N^{{{d},{delta}}}(alpha={list(alpha)}, beta={list(beta)}) [{kind}] = {value}\n"
        f"oracle (Caporaso-Harris recursion) = {oracle}\n"
        f"match: {'yes' if value == oracle else 'NO'}"
    )
    payload = {
        "invariant": {
            "target": "ch",
            "profile": {"degree": d, "delta": delta, "alpha": list(alpha), "beta": list(beta), "irreducible": irreducible},
        },
        "value": _frac_json(value),
        "oracle": _frac_json(oracle),
    }
    _emit(args, human, payload)
    return 0 if value == oracle else 1


def _table_command(args, target, sys_, connected):
    key = cache_key(target, sys_.pair.to_dict(), sys_.caps.to_dict())
    F = _cache(args).fetch(key, lambda: solve_system(sys_))
    rows = invariant_rows(F, connected=connected)
    human = f"{target}: {len(rows)} nonzero {'connected ' if connected else ''}invariants in the window\n" + _rows_human(rows)
    _emit(args, human, [_row_payload(target, r) for r in rows])
    return 0


def cmd_hirzebruch(args) -> int:
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    mz = args.max_z or (2, 2)
    if len(mz) != 2:
        raise UsageError("--max-z needs two entries (C0, f) for F_n")
    sys_ = fn_system(args.n, mz, args.max_theta_order or 6)
    return _table_command(args, f"fn({args.n})", sys_, bool(args.connected))


def cmd_pn(args) -> int:
    if args.n != 3:
        raise UsageError("only --n 3 is supported")
    mz = args.max_z[0] if args.max_z else 1
    sys_ = pn_system(3, mz, args.max_theta_order or 4)
    return _table_command(args, "p3_plane", sys_, bool(args.connected))


def _rubber_caps(args, default_z=2, default_p=3, default_theta=3, ring_rank=1):
    mz = args.max_z or (default_z,) * ring_rank
    W = args.max_p_weight or default_p
    return TruncationCaps(tuple(mz) if ring_rank else (), W, W, args.max_theta_order or default_theta, None, 0)


def cmd_rubber(args) -> int:
    rank = 0 if args.target == "point" else 1
    m = 0 if args.target == "point" else args.m
    caps = _rubber_caps(args, ring_rank=rank)
    key = cache_key(f"rubber:{args.target}:{m}", {"target": args.target, "m": m}, caps.to_dict())
    A = _cache(args).fetch(key, lambda: rubber_potential(args.target, m, caps), balance=True)
    if args.output:
        serialize(A, args.output, balance=True)
    degs = sorted(A.grades())
    bal = check_balance(A)
    if args.dump:
        sys.stdout.write(dumps(A, balance=True))
        return 0
    human = (
        f"rubber potential of ({args.target}, O({m})): {len(A)} terms\n"
        f"degrees: {degs}\nmultiplicity balance: {'ok' if bal else 'VIOLATED'}"
    )
    payload = {"target": args.target, "m": m, "terms": len(A), "degrees": degs, "balance": bal}
    _emit(args, human, payload)
    return 0 if bal else 1


def _class_label(ring, vec) -> str:
    parts = []
    for i, c in enumerate(vec):
        if c:
            parts.append(ring.label(i) if c == 1 else f"{c}*{ring.label(i)}")
    return " + ".join(parts)


def cmd_hamiltonian(args) -> int:
    caps = _rubber_caps(args)
    A = rubber_potential(args.target, args.m, caps)
    split = phase_basis_split(A.universe.ring)
    H = build_hamiltonian(A, split)
    if args.output:
        serialize(H, args.output)
    degs = sorted(H.grades())
    lines = [
        f"Hamiltonian of ({args.target}, O({args.m})): {len(H)} terms, degrees {degs}",
        f"phase-fixing classes: {', '.join(_class_label(split.ring, a) for a in split.phase_fixing) or '-'}",
        f"non-phase-fixing classes: {', '.join(_class_label(split.ring, b) for b in split.non_phase_fixing) or '-'}",
    ]
    payload = {"target": args.target, "m": args.m, "terms": len(H), "degrees": degs}
    code = 0
    if args.check_nilpotent:
        rep = check_nilpotent(H)
        lines.append("H*H: " + rep.summary())
        payload["nilpotency"] = {
            "determinable": rep.verified + len(rep.violations),
            "nonzero": len(rep.violations),
            "indeterminate": len(rep.indeterminate),
            "identically_zero": rep.identically_zero,
        }
        code = 0 if rep.ok else 1
    _emit(args, "\n".join(lines), payload)
    return code


def cmd_oracle(args) -> int:
    if args.oracle == "kontsevich":
        vals = oracles.kontsevich_recursion(args.max_degree)
        _emit(
            args,
            ", ".join(str(v) for v in vals),
            [{"invariant": {"target": "kontsevich", "profile": {"degree": d}}, "value": _frac_json(v)} for d, v in enumerate(vals, 1)],
        )
        return 0
    if args.oracle == "ch":
        try:
            v = oracles.ch_recursion(args.degree, args.delta, args.alpha, args.beta, irreducible=bool(args.irreducible))
        except ValueError as exc:
            raise UsageError(str(exc))
        prof = {"degree": args.degree, "delta": args.delta, "alpha": list(args.alpha), "beta": list(args.beta)}
        _emit(args, str(v), {"invariant": {"target": "ch", "profile": prof}, "value": _frac_json(v)})
        return 0
    if args.oracle == "tables":
        os.makedirs(args.output_dir, exist_ok=True)
        for name, text in oracles.golden_tables().items():
            with open(os.path.join(args.output_dir, name), "w") as fh:
                fh.write(text)
            print(f"wrote {os.path.join(args.output_dir, name)}")
        return 0
    try:
        v = oracles.hurwitz_bruteforce(args.degree, args.mu, args.transpositions)
    except ValueError as exc:
        raise UsageError(str(exc))
    prof = {"degree": args.degree, "mu": list(args.mu), "transpositions": args.transpositions}
    _emit(args, str(v), {"invariant": {"target": "hurwitz", "profile": prof}, "value": _frac_json(v)})
    return 0


def cmd_series(args) -> int:
    if args.action in ("inspect", "dump"):
        with open(args.file) as fh:
            text = fh.read()
        s = loads(text)
        if args.action == "dump":
            sys.stdout.write(dumps(s, balance=declares_balance(text)))
            return 0
        degs = sorted(s.grades())
        homog = f"homogeneous of degree {degs[0]}" if len(degs) == 1 else f"inhomogeneous, degrees {degs}"
        if not degs:
            homog = "zero series"
        info = {"kind": s.universe.kind, "terms": len(s), "degrees": degs}
        lines = [f"universe: {s.universe.kind} over {s.universe.ring.name}", f"terms: {len(s)}", homog]
        if s.universe.kind in ("rubber", "hamiltonian"):
            bal = check_balance(s)
            info["balance"] = bal
            lines.append(f"multiplicity balance: {'ok' if bal else 'violated'}")
        _emit(args, "\n".join(lines), info)
        return 0
    a, b = deserialize(args.a), deserialize(args.b)
    if a.universe != b.universe:
        raise SeriesFormatError("universe mismatch")
    if args.action == "add":
        r = add(a, b)
    else:
        r = star(a, b) if args.star else mul(a, b)
    text = dumps(r)
    if args.output:
        serialize(r, args.output)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "ch": cmd_ch,
    "hirzebruch": cmd_hirzebruch,
    "pn": cmd_pn,
    "rubber": cmd_rubber,
    "hamiltonian": cmd_hamiltonian,
    "oracle": cmd_oracle,
    "series": cmd_series,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, parser)
        _validate_caps(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gwrubber: usage error: {exc}", file=sys.stderr)
        return 2
    except CapsExceeded as exc:
        print(f"gwrubber: window too small: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, ValueError, OSError, NotImplementedError) as exc:
        print(f"gwrubber: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

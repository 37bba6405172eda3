"""Canonical text format for series.

::

    # gwrubber series v1
    universe: {"context": ..., "kind": "rubber", ...}
    caps: {"hbar_range": null, "max_lambda": 0, ...}
    balance: true
    ---
    h:-1 b:1 p:1:0 q:1:0 = 1/1
    z:1 h:-1 p:1:1 = 1/1

Header lines are ``key: value`` with JSON values (rationals inside ring
descriptors are decimal strings).  Each record lists the monomial's keys in
canonical order followed by ``= numerator/denominator``; the empty monomial is
written ``1``.  Records are sorted, so equal series give identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .series import Kind, Monomial, Series, TruncationCaps, Universe, Var, make_monomial

__all__ = ["dumps", "loads", "serialize", "deserialize", "declares_balance", "SeriesFormatError"]

MAGIC = "# gwrubber series v1"

_SHORT = {
    Kind.HBAR: "h",
    Kind.LAMBDA: "l",
    Kind.THETA: "th",
    Kind.BETA: "b",
    Kind.SIGMA: "s",
    Kind.TAU: "t",
    Kind.P: "p",
    Kind.Q: "q",
    Kind.PT: "pt",
    Kind.QT: "qt",
}
_LONG = {v: k for k, v in _SHORT.items()}


class SeriesFormatError(ValueError):
    """Malformed file, universe mismatch or violated invariant."""


def _key(v: Var, e: int) -> str:
    k = Kind(v[0])
    tag = _SHORT[k]
    if k in (Kind.HBAR, Kind.LAMBDA):
        return f"{tag}:{e}"
    if k in (Kind.P, Kind.Q, Kind.PT, Kind.QT):
        base = f"{tag}:{v[1]}:{v[2]}"
    else:
        base = f"{tag}:{v[2]}"
    return base if e == 1 else f"{base}:{e}"


def _monomial_keys(m: Monomial) -> str:
    parts = []
    if any(m.z):
        parts.append("z:" + ",".join(str(x) for x in m.z))
    parts.extend(_key(v, e) for v, e in m.factors)
    return " ".join(parts) or "1"


def _parse_key(tok: str, rank: int):
    bits = tok.split(":")
    tag = bits[0]
    if tag == "z":
        z = tuple(int(x) for x in bits[1].split(","))
        if len(z) != rank:
            raise SeriesFormatError(f"z exponent {tok!r} has the wrong lattice rank")
        return "z", z
    if tag not in _LONG:
        raise SeriesFormatError(f"unknown variable tag {tag!r}")
    k = _LONG[tag]
    nums = [int(x) for x in bits[1:]]
    if k in (Kind.HBAR, Kind.LAMBDA):
        if len(nums) != 1:
            raise SeriesFormatError(f"bad key {tok!r}")
        return Var(k), nums[0]
    if k in (Kind.P, Kind.Q, Kind.PT, Kind.QT):
        if len(nums) not in (2, 3):
            raise SeriesFormatError(f"bad key {tok!r}")
        e = nums[2] if len(nums) == 3 else 1
        if nums[0] < 1:
            raise SeriesFormatError(f"multiplicity must be positive in {tok!r}")
        return Var(k, nums[0], nums[1]), e
    if len(nums) not in (1, 2):
        raise SeriesFormatError(f"bad key {tok!r}")
    return Var(k, 0, nums[0]), (nums[1] if len(nums) == 2 else 1)


def dumps(s: Series, balance: bool = False) -> str:
    lines = [
        MAGIC,
        "universe: " + json.dumps(s.universe.describe(), sort_keys=True, separators=(",", ":")),
        "caps: " + json.dumps(s.caps.to_dict(), sort_keys=True, separators=(",", ":")),
    ]
    if balance:
        lines.append("balance: true")
    lines.append("---")
    for m, c in s.items():
        lines.append(f"{_monomial_keys(m)} = {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def loads(text: str, universe: Universe | None = None) -> Series:
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise SeriesFormatError("missing series header")
    header = {}
    i = 1
    while i < len(lines) and lines[i].strip() != "---":
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if ":" not in line:
            raise SeriesFormatError(f"malformed header line {line!r}")
        key, _, val = line.partition(":")
        header[key.strip()] = val.strip()
    if i == len(lines):
        raise SeriesFormatError("missing '---' separator")
    try:
        uni = Universe.from_description(json.loads(header["universe"]))
        caps = TruncationCaps.from_dict(json.loads(header.get("caps", "{}")))
    except (KeyError, ValueError, TypeError) as exc:
        raise SeriesFormatError(f"bad header: {exc}") from exc
    if universe is not None and uni != universe:
        raise SeriesFormatError("universe mismatch")
    rank = uni.lattice_rank
    terms: dict = {}
    for line in lines[i + 1 :]:
        line = line.strip()
        if not line:
            continue
        lhs, sep, rhs = line.rpartition("=")
        if not sep:
            raise SeriesFormatError(f"malformed record {line!r}")
        try:
            num, den = rhs.strip().split("/")
            coeff = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise SeriesFormatError(f"bad coefficient in {line!r}") from exc
        z = (0,) * rank
        factors = []
        toks = lhs.split()
        if toks != ["1"]:
            for tok in toks:
                try:
                    a, b = _parse_key(tok, rank)
                except ValueError as exc:
                    raise SeriesFormatError(str(exc)) from exc
                if a == "z":
                    z = b
                else:
                    factors.append((a, b))
        m = make_monomial(z, factors)
        if m in terms:
            raise SeriesFormatError(f"duplicate record {line!r}")
        if not coeff:
            raise SeriesFormatError(f"stored zero coefficient in {line!r}")
        if not caps.admits(m):
            raise SeriesFormatError(f"record {line!r} lies outside the declared caps")
        terms[m] = coeff
    try:
        s = Series(uni, terms, caps)
    except ValueError as exc:
        raise SeriesFormatError(str(exc)) from exc
    if header.get("balance") == "true":
        ring = uni.ring
        for m in s.terms:
            if m.p_weight() - m.q_weight() != ring.c1_bundle_on(m.z):
                raise SeriesFormatError(f"monomial {m!r} violates the multiplicity balance")
    return s


def declares_balance(text: str) -> bool:
    """Whether the header asserts the multiplicity balance."""
    header = text.split("\n---\n", 1)[0]
    return any(line.strip() == "balance: true" for line in header.splitlines())


def serialize(s: Series, path, balance: bool = False) -> None:
    """Write atomically (temporary file then rename)."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".series")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(s, balance))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def deserialize(path, universe: Universe | None = None) -> Series:
    with open(path) as fh:
        return loads(fh.read(), universe)

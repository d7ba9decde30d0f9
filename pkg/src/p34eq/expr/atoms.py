"""Generator (atom) naming scheme for the expression engine.

Every polynomial generator is a pair (base, q) rendered as a name string:

    q == 1:   "x", "y", "b", "nu1"            plain symbol
    q >= 2:   "y^(1/3)", "b^(1/2)"            root of a symbol
              "2^(1/3)", "5^(1/2)"            root of a positive integer (surd)
              "@c0ffee...^(1/6)"              root of a compound expression

A polynomial never contains two generators with the same base: mixed roots
are rebased to the lcm denominator before any arithmetic.  Compound bases
are content-addressed; the actual base object is kept in a process-level
registry so printing and evaluation can recover it without reparsing.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

VAR_X = "x"
VAR_Y = "y"

KIND_SYMBOL = "symbol"
KIND_SURD = "surd"
KIND_OPAQUE = "opaque"


@dataclass(frozen=True)
class GenInfo:
    kind: str
    base: str | int  # symbol name, surd integer, or "@digest"
    q: int  # root denominator, 1 for the base itself


@lru_cache(maxsize=None)
def parse_gen(name: str) -> GenInfo:
    base_str, q = name, 1
    if "^" in name:
        base_str, _, tail = name.partition("^")
        if not (tail.startswith("(1/") and tail.endswith(")")):
            raise ValueError(f"malformed generator name {name!r}")
        q = int(tail[3:-1])
    if base_str.startswith("@"):
        return GenInfo(KIND_OPAQUE, base_str, q)
    if base_str.isdigit():
        return GenInfo(KIND_SURD, int(base_str), q)
    return GenInfo(KIND_SYMBOL, base_str, q)


def make_name(base: str | int, q: int) -> str:
    if q == 1:
        if isinstance(base, int):
            raise ValueError("integer base requires q >= 2")
        return str(base)
    return f"{base}^(1/{q})"


def _rank(info: GenInfo) -> int:
    if info.kind == KIND_SYMBOL:
        if info.base == VAR_X:
            return 0
        if info.base == VAR_Y:
            return 1
        return 2
    if info.kind == KIND_SURD:
        return 3
    return 4


@lru_cache(maxsize=None)
def gen_sort_key(name: str) -> tuple:
    info = parse_gen(name)
    return (_rank(info), str(info.base), info.q)


# ----- compound-base registry ---------------------------------------------

_OPAQUE_REGISTRY: dict[str, object] = {}


def opaque_base_key(canonical: str) -> str:
    """Content-addressed base tag for a compound radicand."""
    return "@" + hashlib.sha256(canonical.encode()).hexdigest()[:16]


def register_opaque(base_tag: str, payload: object) -> None:
    existing = _OPAQUE_REGISTRY.get(base_tag)
    if existing is None:
        _OPAQUE_REGISTRY[base_tag] = payload


def lookup_opaque(base_tag: str) -> object:
    try:
        return _OPAQUE_REGISTRY[base_tag]
    except KeyError:
        raise KeyError(f"unregistered compound radicand {base_tag!r}") from None


# ----- small number theory -------------------------------------------------

_FACTOR_LIMIT = 10_000_000


@lru_cache(maxsize=None)
def factor_int(n: int) -> tuple[tuple[int, int], ...] | None:
    """Prime factorization of n >= 2, or None if a factor exceeds the limit.

    Unfactored bases still work as surd generators; they merely lose the
    guarantee that distinct surd monomials are linearly independent, so the
    zero-test treats polynomials containing them as inexact.
    """
    if n < 2:
        raise ValueError("factor_int requires n >= 2")
    out: list[tuple[int, int]] = []
    d = 2
    while d * d <= n:
        if d > _FACTOR_LIMIT:
            return None
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        if n > _FACTOR_LIMIT * _FACTOR_LIMIT:
            return None
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def is_exact_gen(name: str) -> bool:
    """True when monomials in this generator are linearly independent over Q.

    Symbols and roots of symbols are independent transcendentals by
    construction; prime surds are independent by unique factorization.
    Compound radicands may satisfy hidden algebraic relations, so any
    polynomial containing them falls back to probabilistic zero-testing.
    """
    info = parse_gen(name)
    if info.kind == KIND_SYMBOL:
        return True
    if info.kind == KIND_SURD:
        f = factor_int(int(info.base))
        return f is not None and len(f) == 1 and f[0][1] == 1
    return False

"""Exact group arithmetic for the supported families.

Supported specs: free abelian Z^n, cyclic Z/m, free F_k, free products of
cyclic factors (order 0 marks an infinite factor), dihedral D_m and
direct products.  Elements are kept in canonical form (normalized
integer data or reduced words), so equality and hashing are structural.

Element orders are returned as ints with 0 meaning infinite.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import (
    EmptyAfterClosure,
    InvalidParameter,
    SpecMismatch,
    WordParseError,
)


@dataclass(frozen=True)
class FreeAbelian:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameter("free abelian rank must be >= 1")


@dataclass(frozen=True)
class Cyclic:
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidParameter("cyclic modulus must be >= 2")


@dataclass(frozen=True)
class Free:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidParameter("free rank must be >= 1")


@dataclass(frozen=True)
class FreeProductOfCyclics:
    orders: tuple[int, ...]  # 0 = infinite factor

    def __post_init__(self):
        if not self.orders:
            raise InvalidParameter("free product needs at least one factor")
        for m in self.orders:
            if m != 0 and m < 2:
                raise InvalidParameter(f"factor order must be 0 or >= 2, got {m}")
        object.__setattr__(self, "orders", tuple(int(m) for m in self.orders))


@dataclass(frozen=True)
class Dihedral:
    n: int  # symmetries of the n-gon (order 2n)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameter("dihedral parameter must be >= 1")


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple["GroupSpec", ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise InvalidParameter("direct product needs at least two factors")


GroupSpec = Union[FreeAbelian, Cyclic, Free, FreeProductOfCyclics, Dihedral, DirectProduct]


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    value: object

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def __str__(self) -> str:
        return format_element(self)


# --- word machinery for free products (Free is the all-infinite case) -------


def _word_orders(spec) -> tuple[int, ...]:
    if isinstance(spec, Free):
        return (0,) * spec.rank
    return spec.orders


def _norm_exp(e: int, order: int) -> int:
    return e if order == 0 else e % order


def _word_push(word: list, f: int, e: int, orders) -> None:
    e = _norm_exp(e, orders[f])
    if e == 0:
        return
    if word and word[-1][0] == f:
        _, e0 = word.pop()
        _word_push(word, f, e0 + e, orders)
    else:
        word.append((f, e))


def _word_mul(orders, w1, w2) -> tuple:
    out = list(w1)
    for f, e in w2:
        _word_push(out, f, e, orders)
    return tuple(out)


def _word_inv(orders, w) -> tuple:
    return tuple((f, _norm_exp(-e, orders[f])) for f, e in reversed(w))


# --- core operations ---------------------------------------------------------


def identity(spec: GroupSpec) -> GroupElement:
    if isinstance(spec, FreeAbelian):
        return GroupElement(spec, (0,) * spec.rank)
    if isinstance(spec, Cyclic):
        return GroupElement(spec, 0)
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        return GroupElement(spec, ())
    if isinstance(spec, Dihedral):
        return GroupElement(spec, (0, 0))
    if isinstance(spec, DirectProduct):
        return GroupElement(spec, tuple(identity(f).value for f in spec.factors))
    raise SpecMismatch(f"unknown spec {spec!r}")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.spec != h.spec:
        raise SpecMismatch(f"cannot combine elements of {g.spec!r} and {h.spec!r}")
    spec = g.spec
    if isinstance(spec, FreeAbelian):
        return GroupElement(spec, tuple(a + b for a, b in zip(g.value, h.value)))
    if isinstance(spec, Cyclic):
        return GroupElement(spec, (g.value + h.value) % spec.modulus)
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        return GroupElement(spec, _word_mul(_word_orders(spec), g.value, h.value))
    if isinstance(spec, Dihedral):
        r1, s1 = g.value
        r2, s2 = h.value
        r = (r1 - r2) % spec.n if s1 else (r1 + r2) % spec.n
        return GroupElement(spec, (r, (s1 + s2) % 2))
    if isinstance(spec, DirectProduct):
        vals = tuple(
            multiply(GroupElement(f, a), GroupElement(f, b)).value
            for f, a, b in zip(spec.factors, g.value, h.value)
        )
        return GroupElement(spec, vals)
    raise SpecMismatch(f"unknown spec {spec!r}")


def inverse(g: GroupElement) -> GroupElement:
    spec = g.spec
    if isinstance(spec, FreeAbelian):
        return GroupElement(spec, tuple(-a for a in g.value))
    if isinstance(spec, Cyclic):
        return GroupElement(spec, (-g.value) % spec.modulus)
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        return GroupElement(spec, _word_inv(_word_orders(spec), g.value))
    if isinstance(spec, Dihedral):
        r, s = g.value
        return GroupElement(spec, (r if s else (-r) % spec.n, s))
    if isinstance(spec, DirectProduct):
        return GroupElement(
            spec, tuple(inverse(GroupElement(f, v)).value for f, v in zip(spec.factors, g.value))
        )
    raise SpecMismatch(f"unknown spec {spec!r}")


def power(g: GroupElement, k: int) -> GroupElement:
    if k < 0:
        return power(inverse(g), -k)
    out = identity(g.spec)
    base = g
    while k:
        if k & 1:
            out = multiply(out, base)
        base = multiply(base, base)
        k >>= 1
    return out


def element_order(g: GroupElement) -> int:
    """Multiplicative order; 0 means infinite."""
    spec = g.spec
    if isinstance(spec, FreeAbelian):
        return 1 if all(a == 0 for a in g.value) else 0
    if isinstance(spec, Cyclic):
        return spec.modulus // math.gcd(g.value, spec.modulus)
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        orders = _word_orders(spec)
        word = list(g.value)
        while len(word) >= 2 and word[0][0] == word[-1][0]:
            f = word[0][0]
            e = _norm_exp(word[-1][1] + word[0][1], orders[f])
            word = word[1:-1]
            if e:
                word.insert(0, (f, e))
                if len(word) < 2 or word[0][0] != word[-1][0]:
                    break
        if not word:
            return 1
        if len(word) == 1:
            f, e = word[0]
            return 0 if orders[f] == 0 else orders[f] // math.gcd(e, orders[f])
        return 0
    if isinstance(spec, Dihedral):
        r, s = g.value
        if s:
            return 2
        return spec.n // math.gcd(r, spec.n)
    if isinstance(spec, DirectProduct):
        total = 1
        for f, v in zip(spec.factors, g.value):
            o = element_order(GroupElement(f, v))
            if o == 0:
                return 0
            total = total * o // math.gcd(total, o)
        return total
    raise SpecMismatch(f"unknown spec {spec!r}")


def sort_key(g: GroupElement):
    """Deterministic total order among elements of one spec."""
    spec = g.spec
    if isinstance(spec, (FreeAbelian, Cyclic, Dihedral)):
        return g.value
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        return (len(g.value), g.value)
    if isinstance(spec, DirectProduct):
        return tuple(sort_key(GroupElement(f, v)) for f, v in zip(spec.factors, g.value))
    raise SpecMismatch(f"unknown spec {spec!r}")


# --- generating sets ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratingSet:
    """Finite symmetric set of non-identity elements, canonically ordered."""

    spec: GroupSpec
    elements: tuple[GroupElement, ...]

    def __post_init__(self):
        seen = set(self.elements)
        e = identity(self.spec)
        if e in seen:
            raise InvalidParameter("generating set must not contain the identity")
        for g in self.elements:
            if g.spec != self.spec:
                raise SpecMismatch("element spec does not match set spec")
            if inverse(g) not in seen:
                raise InvalidParameter(f"set is not symmetric: missing inverse of {g}")
        object.__setattr__(
            self, "elements", tuple(sorted(seen, key=sort_key))
        )

    def __contains__(self, g: GroupElement) -> bool:
        return g in set(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def symmetric_closure(spec: GroupSpec, elements) -> GeneratingSet:
    """Add inverses and drop the identity."""
    e = identity(spec)
    out = set()
    for g in elements:
        if g.spec != spec:
            raise SpecMismatch("element spec does not match")
        if g != e:
            out.add(g)
            out.add(inverse(g))
    if not out:
        raise EmptyAfterClosure("no non-identity elements left")
    return GeneratingSet(spec, tuple(sorted(out, key=sort_key)))


# --- text forms ---------------------------------------------------------------

_LETTERS = "xyzuvw"


def _letter(i: int) -> str:
    return _LETTERS[i] if i < len(_LETTERS) else f"g{i}"


def format_spec(spec: GroupSpec) -> str:
    if isinstance(spec, FreeAbelian):
        return f"Z^{spec.rank}"
    if isinstance(spec, Cyclic):
        return f"Z/{spec.modulus}"
    if isinstance(spec, Free):
        return f"F_{spec.rank}"
    if isinstance(spec, FreeProductOfCyclics):
        return " * ".join("Z" if m == 0 else f"Z/{m}" for m in spec.orders)
    if isinstance(spec, Dihedral):
        return f"D_{spec.n}"
    if isinstance(spec, DirectProduct):
        return " x ".join(format_spec(f) for f in spec.factors)
    raise SpecMismatch(f"unknown spec {spec!r}")


def format_element(g: GroupElement) -> str:
    spec = g.spec
    if isinstance(spec, FreeAbelian):
        if spec.rank == 1:
            return str(g.value[0])
        return "(" + ",".join(str(a) for a in g.value) + ")"
    if isinstance(spec, Cyclic):
        return str(g.value)
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        if not g.value:
            return "e"
        parts = [
            _letter(f) if e == 1 else f"{_letter(f)}^{e}"
            for f, e in g.value
        ]
        return "*".join(parts)
    if isinstance(spec, Dihedral):
        r, s = g.value
        parts = []
        if r:
            parts.append("r" if r == 1 else f"r^{r}")
        if s:
            parts.append("s")
        return "*".join(parts) if parts else "e"
    if isinstance(spec, DirectProduct):
        return "(" + "|".join(
            format_element(GroupElement(f, v)) for f, v in zip(spec.factors, g.value)
        ) + ")"
    raise SpecMismatch(f"unknown spec {spec!r}")


def parse_group(text: str) -> GroupSpec:
    """Spec grammar: Z^n, Z/m, F_k, D_m, free products with '*'
    (Z/2 * Z/3 * Z), direct products with 'x' (Z^1 x Z/2)."""
    parts = re.split(r"\s+x\s+", text.strip())
    if not parts or not parts[0]:
        raise WordParseError("empty group description")
    specs = [_parse_group_factor(p.strip()) for p in parts]
    return specs[0] if len(specs) == 1 else DirectProduct(tuple(specs))


def _parse_group_factor(s: str) -> GroupSpec:
    if "*" in s:
        orders = []
        for tok in (t.strip() for t in s.split("*")):
            if tok == "Z":
                orders.append(0)
            elif re.fullmatch(r"Z/\d+", tok):
                orders.append(int(tok[2:]))
            else:
                raise WordParseError(f"bad free-product factor {tok!r}")
        try:
            return FreeProductOfCyclics(tuple(orders))
        except InvalidParameter as exc:
            raise WordParseError(str(exc)) from exc
    try:
        if s == "Z":
            return FreeAbelian(1)
        if m := re.fullmatch(r"Z\^(\d+)", s):
            return FreeAbelian(int(m.group(1)))
        if m := re.fullmatch(r"Z/(\d+)", s):
            return Cyclic(int(m.group(1)))
        if m := re.fullmatch(r"F_(\d+)", s):
            return Free(int(m.group(1)))
        if m := re.fullmatch(r"D_(\d+)", s):
            return Dihedral(int(m.group(1)))
    except InvalidParameter as exc:
        raise WordParseError(str(exc)) from exc
    raise WordParseError(f"cannot parse group {s!r}")


def _parse_word(spec, text: str) -> GroupElement:
    if text in ("e", "1"):
        return identity(spec)
    orders = _word_orders(spec)
    letters = {_letter(i): i for i in range(len(orders))}
    word: list = []
    for tok in text.split("*"):
        tok = tok.strip()
        m = re.fullmatch(r"([a-z]\w*)(?:\^(-?\d+))?", tok)
        if not m or m.group(1) not in letters:
            raise WordParseError(f"bad word syllable {tok!r}")
        e = int(m.group(2)) if m.group(2) else 1
        _word_push(word, letters[m.group(1)], e, orders)
    return GroupElement(spec, tuple(word))


def _parse_dihedral(spec: Dihedral, text: str) -> GroupElement:
    if text in ("e", "1"):
        return identity(spec)
    out = identity(spec)
    for tok in text.split("*"):
        tok = tok.strip()
        m = re.fullmatch(r"([rs])(?:\^(-?\d+))?", tok)
        if not m:
            raise WordParseError(f"bad dihedral syllable {tok!r}")
        e = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "r":
            out = multiply(out, GroupElement(spec, (e % spec.n, 0)))
        else:
            if e % 2:
                out = multiply(out, GroupElement(spec, (0, 1)))
    return out


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise WordParseError("unbalanced parentheses")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise WordParseError("unbalanced parentheses")
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_element(spec: GroupSpec, text: str) -> GroupElement:
    text = text.strip()
    if isinstance(spec, FreeAbelian):
        if text.startswith("("):
            if not text.endswith(")"):
                raise WordParseError(f"bad tuple {text!r}")
            coords = [t.strip() for t in text[1:-1].split(",")]
        else:
            coords = [text]
        if len(coords) != spec.rank:
            raise WordParseError(f"{text!r} has {len(coords)} coordinates, expected {spec.rank}")
        try:
            return GroupElement(spec, tuple(int(c) for c in coords))
        except ValueError as exc:
            raise WordParseError(f"bad integer in {text!r}") from exc
    if isinstance(spec, Cyclic):
        try:
            return GroupElement(spec, int(text) % spec.modulus)
        except ValueError as exc:
            raise WordParseError(f"bad residue {text!r}") from exc
    if isinstance(spec, (Free, FreeProductOfCyclics)):
        return _parse_word(spec, text)
    if isinstance(spec, Dihedral):
        return _parse_dihedral(spec, text)
    if isinstance(spec, DirectProduct):
        if not (text.startswith("(") and text.endswith(")")):
            raise WordParseError(f"direct-product element must be (a|b|...), got {text!r}")
        comps = split_top_level(text[1:-1], "|")
        if len(comps) != len(spec.factors):
            raise WordParseError(f"{text!r} has {len(comps)} components, expected {len(spec.factors)}")
        return GroupElement(
            spec, tuple(parse_element(f, c).value for f, c in zip(spec.factors, comps))
        )
    raise SpecMismatch(f"unknown spec {spec!r}")


def parse_generators(spec: GroupSpec, text: str) -> list[GroupElement]:
    """Comma-separated element literals, e.g. '(1,0),(0,1)' or 'x,y,y^-1*x'."""
    return [parse_element(spec, tok) for tok in split_top_level(text, ",")]

"""Lower ideals of the Bruhat order ("thickenings") and balance.

A thickening is a downward closed subset of a finite Weyl group.  It is
slim when disjoint from its w0-translate, fat when their union is the
whole group, balanced when both.  Balanced thickenings are enumerated by
backtracking over the pairs {w, w0 w}: each pair contributes exactly one
member, candidate sets are grown as unions of principal ideals so they
stay downward closed, and branches violating slimness are pruned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import coxeter
from .coxeter import WeylElement, WeylGroup
from .errors import GroupTooLarge, NotAnIdeal, WrongGroupType

DEFAULT_NODE_CAP = 10 ** 5


@dataclass(frozen=True)
class Thickening:
    """Membership set over a Weyl group, stored as an index bitmask."""

    group: WeylGroup
    mask: int

    @staticmethod
    def from_elements(group, elements):
        mask = 0
        for e in elements:
            i = e.index if isinstance(e, WeylElement) else int(e)
            mask |= 1 << i
        return Thickening(group, mask)

    @property
    def members(self):
        return [WeylElement(self.group, i) for i in self.indices()]

    def indices(self):
        out, m = [], self.mask
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, w):
        i = w.index if isinstance(w, WeylElement) else int(w)
        return (self.mask >> i) & 1 == 1

    def is_ideal(self):
        masks = self.group.leq_masks()
        return all(self.mask & masks[i] == masks[i] for i in self.indices())

    def labels(self):
        return sorted(self.group.label(i) for i in self.indices())

    def to_json(self):
        return json.dumps({"type": self.group.ctype.descriptor,
                           "members": self.labels()})

    @staticmethod
    def from_json(text):
        data = json.loads(text) if isinstance(text, str) else text
        group = coxeter.build_group(data["type"])
        elems = [group.element_from_label(m) for m in data["members"]]
        return Thickening.from_elements(group, elems)

    def __repr__(self):
        return f"<Thickening {self.group.ctype} {{{', '.join(self.labels())}}}>"


def down_closure(W, R):
    """Smallest thickening containing R: the union of balls B(1, r)."""
    masks = W.leq_masks()
    mask = 0
    for r in R:
        i = r.index if isinstance(r, WeylElement) else int(r)
        mask |= masks[i]
    return Thickening(W, mask)


def _require_ideal(th):
    if not th.is_ideal():
        raise NotAnIdeal("membership set is not downward closed")


def _w0_shift(W, mask):
    table = W.w0_left_table()
    out, m = 0, mask
    while m:
        low = m & -m
        out |= 1 << table[low.bit_length() - 1]
        m ^= low
    return out


def is_slim(th):
    _require_ideal(th)
    return th.mask & _w0_shift(th.group, th.mask) == 0


def is_fat(th):
    _require_ideal(th)
    full = (1 << len(th.group.elements)) - 1
    return th.mask | _w0_shift(th.group, th.mask) == full


def is_balanced(th):
    _require_ideal(th)
    shifted = _w0_shift(th.group, th.mask)
    full = (1 << len(th.group.elements)) - 1
    return th.mask & shifted == 0 and th.mask | shifted == full


def _balanced_masks(W, node_cap):
    n = len(W.elements)
    masks = W.leq_masks()
    w0l = W.w0_left_table()
    pairs = []
    seen = set()
    for i in range(n):  # indices are sorted by length already
        if i in seen:
            continue
        j = w0l[i]
        assert j != i, "w0 pairing must be free"
        pairs.append((i, j))
        seen.add(i)
        seen.add(j)

    nodes = 0

    def rec(pi, acc):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise GroupTooLarge(f"balanced enumeration exceeded {node_cap} nodes")
        if pi == len(pairs):
            yield acc
            return
        a, b = pairs[pi]
        if (acc >> a) & 1 or (acc >> b) & 1:
            yield from rec(pi + 1, acc)
            return
        for cand in (a, b):
            grown = acc | masks[cand]
            if grown & _w0_shift(W, grown) == 0:
                yield from rec(pi + 1, grown)

    yield from rec(0, 0)


def enumerate_balanced(W, node_cap=DEFAULT_NODE_CAP):
    """All balanced thickenings, in lexicographic order of the
    membership bitstring (canonical element order)."""
    n = len(W.elements)

    def bitstring(mask):
        return tuple((mask >> i) & 1 for i in range(n))

    out = sorted(_balanced_masks(W, node_cap), key=bitstring)
    ths = [Thickening(W, m) for m in out]
    for th in ths:
        assert is_balanced(th)
    return ths


def count_balanced(W, node_cap=DEFAULT_NODE_CAP):
    """Number of balanced thickenings (streaming, no list retention)."""
    return sum(1 for _ in _balanced_masks(W, node_cap))


def all_ideals(W, cap=10 ** 7):
    """Brute-force enumeration of ALL lower ideals.

    Independent of the balanced backtracking search: walks elements in a
    linear extension (indices are sorted by length) and branches on
    membership, including an element only when everything below it is
    already in.
    """
    masks = W.leq_masks()
    n = len(W.elements)
    out = []

    def rec(i, mask):
        if len(out) > cap:
            raise GroupTooLarge(f"ideal enumeration exceeded {cap}")
        if i == n:
            out.append(Thickening(W, mask))
            return
        rec(i + 1, mask)
        below = masks[i] & ~(1 << i)
        if below & ~mask == 0:
            rec(i + 1, mask | (1 << i))

    rec(0, 0)
    return out


def _to_fractions(a):
    vals = [Fraction(x) if not isinstance(x, Fraction) else x for x in a]
    if any(v <= 0 for v in vals):
        raise ValueError("weights must be strictly positive")
    return vals


def weight_is_balanced(a):
    """True iff no subset I satisfies sum_I a = sum_{not I} a (exact)."""
    vals = _to_fractions(a)
    if len(vals) > 30:
        raise ValueError("weight vectors capped at length 30")
    denom = 1
    for v in vals:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in vals]
    total = sum(ints)
    if total % 2 == 1:
        return True
    target = total // 2
    sums = {0}
    for x in ints:
        sums |= {s + x for s in sums if s + x <= target}
    return target not in sums


def metric_thickening(a):
    """Half-space thickenings of a power of A1 cut out by a weight vector.

    Returns the (strict, nonstrict) pair Th_a = {w : a.w > 0} and
    Thbar_a = {w : a.w >= 0}; the strict one is slim, the nonstrict fat,
    and they coincide exactly when ``a`` is balanced.
    """
    vals = _to_fractions(a)
    n = len(vals)
    W = coxeter.build_group(f"A1^{n}") if n > 1 else coxeter.build_group("A1")
    if not W.ctype.is_a1_power or W.ctype.rank != n:
        raise WrongGroupType("metric thickenings require W = A1^n")
    strict = 0
    nonstrict = 0
    for i in range(len(W.elements)):
        dot = sum(v * s for v, s in zip(vals, W.sign_vector(i)))
        if dot > 0:
            strict |= 1 << i
        if dot >= 0:
            nonstrict |= 1 << i
    ths = (Thickening(W, strict), Thickening(W, nonstrict))
    if not is_slim(ths[0]) or not is_fat(ths[1]):
        raise NotAnIdeal("metric thickening failed its slim/fat postcondition")
    return ths


def metric_thickening_general(W, a):
    """Experimental analogue {w : <a, w a> > 0} in the reflection
    representation of an arbitrary W.  Errors rather than silently
    returning a set that is not an ideal."""
    vals = [Fraction(x) for x in a]
    if len(vals) != W.ambient_dim:
        raise WrongGroupType(
            f"weight vector must have length {W.ambient_dim} (ambient dim)")
    mask = 0
    for i in range(len(W.elements)):
        m = W.matrix(i)
        wa = [sum((m[r][c].a + 0) * vals[c] for c in range(len(vals)))
              for r in range(len(vals))]
        if any(m[r][c].b != 0 for r in range(len(vals)) for c in range(len(vals))):
            raise WrongGroupType("general metric thickenings need rational matrices")
        dot = sum(x * y for x, y in zip(vals, wa))
        if dot > 0:
            mask |= 1 << i
    th = Thickening(W, mask)
    _require_ideal(th)
    return th

"""Replace a basis of a space of forms by a sparser basis of the same span."""

from __future__ import annotations

import itertools
import random

from ..linalg import rank, rref
from ..poly import Polynomial
from ..ring import QQ


def _monos(polys):
    seen = {}
    for f in polys:
        for e in f.terms:
            seen.setdefault(e, None)
    return sorted(seen, key=polys[0].parent.key, reverse=True)


def _row(f, monos, ring):
    return [f.terms.get(m, ring.zero) for m in monos]


def _normalized(f: Polynomial) -> Polynomial:
    """Scale ``f`` to a canonical representative (primitive integers over Q, else monic)."""
    ring = f.ring
    if ring is QQ:
        from fractions import Fraction
        from math import gcd, lcm

        den = lcm(*(Fraction(c).denominator for c in f.terms.values()))
        ints = [int(Fraction(c) * den) for c in f.terms.values()]
        g = 0
        for v in ints:
            g = gcd(g, v)
        lead = f.terms[f.leading_monomial()]
        sign = -1 if lead < 0 else 1
        return f * QQ(Fraction(den * sign, g))
    return f.monic()


def _cost(f: Polynomial):
    return (len(f.terms), _height(f))


def _height(f):
    out = 0
    for c in f.terms.values():
        h = c.height() if hasattr(c, "height") else abs(getattr(c, "numerator", 0)) + abs(getattr(c, "denominator", 1))
        out = max(out, h)
    return out


def _eliminations(basis, ring):
    """Echelon forms of the basis under several column orders (structured candidates)."""
    monos = _monos(basis)
    out = []
    orders = [monos, monos[::-1]]
    # pivot first on the monomials shared by most basis elements
    share = sorted(monos, key=lambda m: -sum(1 for f in basis if m in f.terms))
    orders.append(share)
    orders.append(share[::-1])
    amb = basis[0].parent
    for cols in orders:
        R, _ = rref([_row(f, cols, ring) for f in basis], ring)
        for row in R:
            if any(row):
                out.append(Polynomial(amb, {m: c for m, c in zip(cols, row) if c}))
    # pairwise cancellations of each shared monomial
    for f, g in itertools.combinations(basis, 2):
        for m in set(f.terms) & set(g.terms):
            h = f - g * (f.terms[m] / g.terms[m])
            if h:
                out.append(h)
    return out


def sparsify_basis(basis, trials: int = 200, seed: int = 0):
    """A basis of the same span with few monomials, sorted by monomial count.

    Candidates are the input, echelon forms under several column orders,
    pairwise cancellations and ``trials`` random combinations with
    coefficients in ``{-1, 0, 1}`` (the second half widened to
    ``{-2..2}``). A sparsest spanning subset is chosen greedily, which for a
    matroid gives the minimum total monomial count among the candidates, so
    the result is never worse than the input. The span is re-checked by rank.
    """
    basis = [f for f in basis]
    if not basis:
        return []
    ring = basis[0].ring
    monos = _monos(basis)
    r = rank([_row(f, monos, ring) for f in basis], ring)
    if r != len(basis):
        raise ValueError("the basis is linearly dependent")
    rng = random.Random(seed)
    cands = list(basis) + _eliminations(basis, ring)
    for t in range(trials):
        lo, hi = (-1, 1) if t < trials // 2 else (-2, 2)
        coeffs = [rng.randint(lo, hi) for _ in basis]
        h = sum((f * ring(c) for f, c in zip(basis, coeffs) if c), basis[0].parent.zero())
        if h:
            cands.append(h)
    cands = [_normalized(f) for f in cands]
    uniq = {}
    for f in cands:
        uniq.setdefault(tuple(sorted(f.terms.items(), key=lambda kv: kv[0])), f)
    pos = {m: i for i, m in enumerate(monos)}
    order = sorted(uniq.values(), key=lambda f: (_cost(f), sorted(pos[m] for m in f.terms)))
    chosen, rows = [], []
    for f in order:
        trial = rows + [_row(f, monos, ring)]
        if rank(trial, ring) == len(trial):
            chosen.append(f)
            rows = trial
            if len(chosen) == r:
                break
    both = [_row(f, monos, ring) for f in basis] + rows
    if len(chosen) != r or rank(both, ring) != r:
        raise AssertionError("sparsified basis does not span the input space")
    return chosen


def monomial_count(polys) -> int:
    return sum(len(f.terms) for f in polys)


__all__ = ["monomial_count", "sparsify_basis"]

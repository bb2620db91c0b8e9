"""Buchberger's algorithm for small ideals over a field.

Used as an independent cross-check of the linear-algebra routines (zero
dimensional solving, Hilbert functions) on small examples; it is not tuned
for large inputs.
"""

from __future__ import annotations

from ..poly import PolyRing, Polynomial, mono_divides, mono_div, mono_lcm
from .ideal import Ideal


def _in_order(polys, ambient: PolyRing, order: str):
    amb = ambient if ambient.order == order else ambient.with_order(order)
    return amb, [Polynomial(amb, dict(g.terms)) for g in polys if g]


def _lead(f):
    m = f.leading_monomial()
    return m, f.terms[m]


def normal_form(f: Polynomial, basis, order: str | None = None) -> Polynomial:
    """Remainder of ``f`` under full reduction by ``basis`` (leading terms in ``order``)."""
    order = order or f.parent.order
    amb, (g0, *gs) = _in_order([f] + list(basis), f.parent, order)
    return Polynomial(f.parent, dict(_reduce(g0, gs).terms))


def _reduce(f, gs):
    leads = [_lead(g) for g in gs]
    key = f.parent.key
    terms = dict(f.terms)
    rem = {}
    ring = f.parent.ring
    while terms:
        m = max(terms, key=key)
        c = terms[m]
        for g, (lm, lc) in zip(gs, leads):
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                factor = c / lc
                for e, a in g.terms.items():
                    e2 = tuple(x + y for x, y in zip(e, q))
                    v = terms.get(e2, ring.zero) - factor * a
                    if v:
                        terms[e2] = v
                    else:
                        terms.pop(e2, None)
                break
        else:
            rem[m] = terms.pop(m)
    return Polynomial(f.parent, rem, _clean=True)


def _spoly(f, g):
    (mf, cf), (mg, cg) = _lead(f), _lead(g)
    L = mono_lcm(mf, mg)
    one = f.parent.ring.one
    return f.mul_term(mono_div(L, mf), one / cf) - g.mul_term(mono_div(L, mg), one / cg)


def groebner_basis(I, order: str | None = None) -> Ideal:
    """Reduced Gröbner basis (monic, sorted by decreasing leading monomial).

    ``I`` is an :class:`Ideal` or a list of polynomials (homogeneity is not
    required). The result lives in the ambient ring re-ordered by ``order``.
    """
    gens = list(I.gens if isinstance(I, Ideal) else I)
    if not gens:
        raise ValueError("empty generator list")
    ambient = gens[0].parent
    order = order or ambient.order
    amb, G = _in_order(gens, ambient, order)
    G = [g.monic() for g in G]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        li, lj = G[i].leading_monomial(), G[j].leading_monomial()
        L = mono_lcm(li, lj)
        if all(a + b == c for a, b, c in zip(li, lj, L)):
            continue  # coprime leading monomials
        # chain criterion: some k with lm_k | L and pairs (i,k), (j,k) already handled
        if any(
            k not in (i, j)
            and mono_divides(G[k].leading_monomial(), L)
            and _done(i, k, pairs)
            and _done(j, k, pairs)
            for k in range(len(G))
        ):
            continue
        r = _reduce(_spoly(G[i], G[j]), G)
        if r:
            G.append(r.monic())
            n = len(G) - 1
            pairs.extend((k, n) for k in range(n))
    return Ideal(_interreduce(G), amb, check=False)


def _done(a, b, pairs):
    key = (min(a, b), max(a, b))
    return key not in pairs


def _interreduce(G):
    # drop elements whose leading monomial is divisible by another's
    G = sorted(G, key=lambda g: g.parent.key(g.leading_monomial()))
    keep = []
    for g in G:
        lm = g.leading_monomial()
        if not any(mono_divides(h.leading_monomial(), lm) for h in keep):
            keep.append(g)
    out = []
    for k, g in enumerate(keep):
        others = keep[:k] + keep[k + 1 :]
        out.append(_reduce_tail(g, others).monic())
    out.sort(key=lambda g: g.parent.key(g.leading_monomial()), reverse=True)
    return out


def _reduce_tail(g, others):
    lm = g.leading_monomial()
    head = Polynomial(g.parent, {lm: g.terms[lm]}, _clean=True)
    tail = Polynomial(g.parent, {m: c for m, c in g.terms.items() if m != lm}, _clean=True)
    return head + _reduce(tail, others) if others else g


def is_groebner_basis(G, order: str | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    gens = list(G.gens if isinstance(G, Ideal) else G)
    order = order or gens[0].parent.order
    _, gs = _in_order(gens, gens[0].parent, order)
    for j in range(len(gs)):
        for i in range(j):
            if _reduce(_spoly(gs[i], gs[j]), gs):
                return False
    return True


def ideal_contains(G, f: Polynomial, order: str | None = None) -> bool:
    """Membership test against a Gröbner basis ``G``."""
    gens = list(G.gens if isinstance(G, Ideal) else G)
    order = order or gens[0].parent.order
    return not normal_form(f, gens, order)


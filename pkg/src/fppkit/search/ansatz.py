"""Families of invariant forms: orbit sums of monomials, optionally cut down by linear conditions."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyAnsatz
from ..linalg import nullspace, rref
from ..poly import CyclicAction, Polynomial, PolyRing, monomial_weight


@dataclass
class InvariantFamily:
    """The forms ``sum_i e_i * basis[i]`` with free parameters ``e_i``."""

    basis: list
    ambient: PolyRing
    degree: int
    weight: int | None

    @property
    def nparams(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def member(self, params) -> Polynomial:
        if len(params) != len(self.basis):
            raise ValueError(f"expected {len(self.basis)} parameters")
        out = self.ambient.zero()
        for e, f in zip(params, self.basis):
            if e:
                out = out + f * e
        return out

    def restrict(self, conditions) -> "InvariantFamily":
        """Sub-family satisfying linear conditions on the parameters."""
        return _apply_conditions(self, conditions)


def orbit_sums(act: CyclicAction, degree: int, ambient: PolyRing, weight=None) -> list:
    """Sums over permutation orbits of the degree-``degree`` monomials.

    With ``weight`` set, only orbits whose monomials all have that weight are
    kept. Orbits on which the permutation scalars do not return to 1 carry no
    invariant and are skipped.
    """
    ring = ambient.ring
    seen = set()
    out = []
    for m in ambient.monomials(degree):
        if m in seen:
            continue
        terms = {}
        cur, scal = m, ring.one
        consistent = True
        while True:
            seen.add(cur)
            terms[cur] = scal
            nxt, s = act.permute_monomial(cur, ring)
            scal = scal * s
            cur = nxt
            if cur == m:
                consistent = scal == ring.one
                break
        if not consistent:
            continue
        if weight is not None and any(monomial_weight(e, act) != weight % act.order for e in terms):
            continue
        out.append(Polynomial(ambient, terms))
    return out


def _apply_conditions(fam: InvariantFamily, conditions) -> InvariantFamily:
    if callable(conditions) and not isinstance(conditions, list):
        conditions = conditions(fam)
    rows = getattr(conditions, "matrix", conditions)
    rows = [list(r) for r in rows]
    if not rows:
        return fam
    if any(len(r) != fam.nparams for r in rows):
        raise ValueError(f"conditions must have {fam.nparams} columns")
    ring = fam.ambient.ring
    K = nullspace(rows, ring, ncols=fam.nparams)
    if not K:
        raise EmptyAnsatz("no nonzero form satisfies the conditions")
    K, _ = rref(K, ring)
    return InvariantFamily([fam.member(v) for v in K], fam.ambient, fam.degree, fam.weight)


def ansatz_invariant_form(act: CyclicAction, degree: int, weight: int | None = 0, constraints=None,
                          ambient: PolyRing | None = None) -> InvariantFamily:
    """Basis of the degree-``degree`` forms of the given weight fixed by the permutation.

    ``constraints`` are linear conditions on the family's parameters: a
    matrix (list of rows), an object with a ``matrix`` attribute such as the
    result of ``vanish_to_order_conditions``, or a callable taking the
    unconstrained family and returning either. Raises :class:`EmptyAnsatz`
    if nothing survives.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if ambient is None:
        from ..ring import QQ

        ambient = PolyRing([f"x{i}" for i in range(act.nvars)], QQ)
    if ambient.nvars != act.nvars:
        raise ValueError("action and ambient disagree on the number of variables")
    basis = orbit_sums(act, degree, ambient, weight)
    if not basis:
        raise EmptyAnsatz(f"no invariant forms of degree {degree} and weight {weight}")
    fam = InvariantFamily(basis, ambient, degree, weight)
    if constraints is not None:
        fam = _apply_conditions(fam, constraints)
    return fam


__all__ = ["InvariantFamily", "ansatz_invariant_form", "orbit_sums"]

"""Reference values for the fake projective plane with the 7-torsion structure.

``H0_NH`` lists ``h^0(nH)`` for an ample generator ``H`` (``K = 3H``) for
``n = 4..12``. By Riemann-Roch with ``chi(O) = 1``, ``H^2 = 1`` and
``H.K = 3`` these are ``1 + n(n - 3)/2`` once the higher cohomology vanishes.
At ``n = 3`` the formula gives 1 while ``h^0(K) = 0``, so it is not listed.
"""

H0_NH = {4: 3, 5: 6, 6: 10, 7: 15, 8: 21, 9: 28, 10: 36, 11: 45, 12: 55}


def h0_closed_form(n: int) -> int:
    """``1 + n(n - 3)/2``."""
    return 1 + n * (n - 3) // 2


__all__ = ["H0_NH", "h0_closed_form"]

"""Reference coefficient tables for the positivity cascade of the first inequality.

``P0_COEFFS[k][(i, j)]`` is the coefficient of ``b**(i*d + j)`` in ``P0`` as a
polynomial in ``d`` (valid for ``d >= 4``).  ``CASCADE_VALUES[k][(n, i)]`` is
``P_n^{(i)}(1)`` as a polynomial in ``x = d - 4`` after division by
``COMMON_FACTOR[k]``.
"""

from __future__ import annotations

from .poly import RationalPoly

D = RationalPoly.x()
X = RationalPoly.x()

P0_COEFFS = {
    3: {
        (0, 0): (D - 2) * (8 * D**3 - 3 * D**2 + 2),
        (0, 1): -24 * D**4 + 19 * D**3 + 60 * D**2 - 24 * D - 14,
        (0, 2): (D + 1) * (3 * D - 1) * (8 * D**2 + D - 16),
        (0, 3): -(D + 1) ** 2 * (8 * D**2 + 3 * D - 2),
        (1, 0): (D - 2) * (8 * D**3 + 4 * D**2 - D - 6),
        (1, 1): -3 * (8 * D**4 - 8 * D**3 + 15 * D**2 - 19 * D - 14),
        (1, 2): 3 * (8 * D**4 - 4 * D**3 + 15 * D**2 + 20 * D - 16),
        (1, 3): -(D + 1) * (8 * D**3 - 8 * D**2 - D + 6),
        (2, 0): 2 * (D - 2) * (D + 1) * (D**2 - 2 * D + 3),
        (2, 1): -3 * (2 * D**4 - 4 * D**3 + 3 * D**2 + 14 * D + 14),
        (2, 2): 3 * (2 * D**4 - 2 * D**3 - 7 * D + 16),
        (2, 3): -(D - 2) * (D + 1) * (2 * D**2 + 2 * D + 3),
        (3, 0): (D - 2) ** 2 * (D + 1),
        (3, 1): -(D - 2) * (D + 1) * (D + 7),
        (3, 2): -(D - 8) * (D - 2) * (D + 1),
        (3, 3): (D - 2) * (D + 1) ** 2,
    },
    4: {
        (0, 0): (D - 3) * (18 * D**3 - D**2 + 3),
        (0, 1): -54 * D**4 + 67 * D**3 + 173 * D**2 - 39 * D - 27,
        (0, 2): (D + 1) * (54 * D**3 - 23 * D**2 - 124 * D + 33),
        (0, 3): -(D + 1) ** 2 * (18 * D**2 + 7 * D - 3),
        (1, 0): (D - 3) * (12 * D**3 + 3 * D**2 - 2 * D - 9),
        (1, 1): -36 * D**4 + 73 * D**3 - 129 * D**2 + 99 * D + 81,
        (1, 2): 36 * D**4 - 47 * D**3 + 115 * D**2 + 163 * D - 99,
        (1, 3): -(D + 1) * (12 * D**3 - 19 * D**2 - 6 * D + 9),
        (2, 0): (D - 3) * (D + 1) * (2 * D**2 - 5 * D + 9),
        (2, 1): -6 * D**4 + 21 * D**3 - 37 * D**2 - 81 * D - 81,
        (2, 2): 6 * D**4 - 15 * D**3 + 19 * D**2 - 53 * D + 99,
        (2, 3): -(D - 3) * (D + 1) * (2 * D**2 + D + 3),
        (3, 0): (D - 3) ** 2 * (D + 1),
        (3, 1): -(D - 3) * (D + 1) * (D + 9),
        (3, 2): -(D - 11) * (D - 3) * (D + 1),
        (3, 3): (D - 3) * (D + 1) ** 2,
    },
}

COMMON_FACTOR = {
    3: 6 * (X + 4) ** 3 * (X + 5),
    4: 8 * (X + 4) ** 3 * (X + 5),
}

_ZERO = RationalPoly()

CASCADE_VALUES = {
    3: {
        (0, 0): _ZERO,
        (0, 1): _ZERO,
        (0, 2): _ZERO,
        (0, 3): _ZERO,
        (1, 0): 54 * (X + 2),
        (1, 1): 3 * (122 * X**2 + 759 * X + 1045),
        (1, 2): 3 * (478 * X**3 + 5019 * X**2 + 16831 * X + 17560),
        (1, 3): 4276 * X**4 + 61731 * X**3 + 328134 * X**2 + 754415 * X + 623616,
        (2, 0): 4 * (2864 * X**5 + 51218 * X**4 + 363231 * X**3 + 1272211 * X**2
                     + 2188942 * X + 1467858),
        (2, 1): 2 * (8800 * X**6 + 200624 * X**5 + 1895748 * X**4 + 9479789 * X**3
                     + 26371144 * X**2 + 38515725 * X + 22913226),
        (2, 2): 4 * (6100 * X**7 + 166078 * X**6 + 1935943 * X**5 + 12502085 * X**4
                     + 48198140 * X**3 + 110605547 * X**2 + 139341417 * X + 73916010),
        (2, 3): 4 * (X + 2) * (7948 * X**7 + 229772 * X**6 + 2871108 * X**5 + 20093453 * X**4
                               + 85033465 * X**3 + 217534941 * X**2 + 311415975 * X + 192411450),
        (3, 0): 12 * (X + 2) * (3324 * X**8 + 105498 * X**7 + 1478477 * X**6 + 11945536 * X**5
                                + 60841362 * X**4 + 199973638 * X**3 + 414113609 * X**2
                                + 493884000 * X + 259667100),
        (3, 1): 4 * (X + 2) * (X + 5) * (2 * X + 9) * (3 * X + 13)
        * (372 * X**6 + 10607 * X**5 + 124569 * X**4 + 775749 * X**3 + 2712487 * X**2
           + 5063412 * X + 3950100),
        (3, 2): 4 * (X + 2) * (X + 5) ** 2 * (X + 6) * (2 * X + 9) * (3 * X + 13) * (3 * X + 14)
        * (12 * X**4 + 368 * X**3 + 3431 * X**2 + 13148 * X + 18249),
        (3, 3): 36 * (X + 2) * (X + 5) ** 4 * (X + 6) * (X + 7) * (2 * X + 9) * (2 * X + 11)
        * (3 * X + 13) * (3 * X + 14),
    },
    4: {
        (0, 0): _ZERO,
        (0, 1): _ZERO,
        (0, 2): _ZERO,
        (0, 3): _ZERO,
        (1, 0): 48 * X,
        (1, 1): 8 * (44 * X**2 + 215 * X + 135),
        (1, 2): 2 * (709 * X**3 + 6684 * X**2 + 18585 * X + 12690),
        (1, 3): 4134 * X**4 + 55427 * X**3 + 265045 * X**2 + 515121 * X + 308889,
        (2, 0): 4 * (2699 * X**5 + 45392 * X**4 + 297314 * X**3 + 933894 * X**2
                     + 1366575 * X + 695142),
        (2, 1): 2 * (8020 * X**6 + 174193 * X**5 + 1549849 * X**4 + 7170108 * X**3
                     + 17941968 * X**2 + 22435155 * X + 10317699),
        (2, 2): 2 * (10878 * X**7 + 284024 * X**6 + 3149973 * X**5 + 19136364 * X**4
                     + 68251666 * X**3 + 141154110 * X**2 + 153239211 * X + 64122030),
        (2, 3): 3 * (X + 1) * (9316 * X**7 + 267882 * X**6 + 3329185 * X**5 + 23169850 * X**4
                               + 97489094 * X**3 + 247912018 * X**2 + 352706325 * X + 216527850),
        (3, 0): 12 * (X + 1) * (2889 * X**8 + 91143 * X**7 + 1269517 * X**6 + 10192836 * X**5
                                + 51576597 * X**4 + 168375593 * X**3 + 346232169 * X**2
                                + 409934700 * X + 213929100),
        (3, 1): 3 * (X + 1) * (X + 5) * (2 * X + 9) * (3 * X + 13)
        * (408 * X**6 + 11669 * X**5 + 136865 * X**4 + 848735 * X**3 + 2949267 * X**2
           + 5463996 * X + 4227300),
        (3, 2): 6 * (X + 1) * (X + 5) ** 2 * (X + 6) * (2 * X + 9) * (3 * X + 13) * (3 * X + 14)
        * (6 * X**4 + 193 * X**3 + 1807 * X**2 + 6883 * X + 9471),
        (3, 3): 27 * (X + 1) * (X + 5) ** 4 * (X + 6) * (X + 7) * (2 * X + 9) * (2 * X + 11)
        * (3 * X + 13) * (3 * X + 14),
    },
}


def row_label(i: int, j: int) -> str:
    """Human label of the ``b**(i*d + j)`` row, e.g. ``b^{2d+1}``."""
    if i == 0:
        return f"b^{j}"
    head = "d" if i == 1 else f"{i}d"
    return f"b^{{{head}+{j}}}" if j else f"b^{{{head}}}"


def cascade_label(n: int, i: int) -> str:
    return f"P{n}^({i})(1)" if i else f"P{n}(1)"

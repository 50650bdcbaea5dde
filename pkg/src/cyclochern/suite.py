"""The shipped verification suite: scenarios, triples, geometries.

Five crossed-product scenarios (the homology defaults), two spectral
triples (one over the swap crossed product with a conformal twist, one
rank-asymmetric with index 1), and the three geometry setups used by the
acceptance checks.
"""
from __future__ import annotations

from fractions import Fraction

from .algebra import (
    ConformalCocycle,
    CrossedProductAlgebra,
    sigma_from_cocycle,
    identity_automorphism,
)
from .geometry import GeometryScenario
from .groups import (
    GAction,
    cyclic_group,
    direct_product,
    symmetric_group,
    trivial_group,
)
from .linalg import mat
from .scalars import Scalar
from .spectral import GradedSpace, TwistedTriple


# -- scenarios ---------------------------------------------------------------


def z2_swap_scenario() -> CrossedProductAlgebra:
    """Z2 swapping two points: C({a,b}) x| Z2 ~ M_2(C)."""
    g = cyclic_group(2)
    action = GAction(g, ("a", "b"), ((0, 1), (1, 0)))
    return CrossedProductAlgebra(action)

def z2_trivial_point_scenario() -> CrossedProductAlgebra:
    """Z2 acting trivially on one point: the group algebra C[Z2]."""
    g = cyclic_group(2)
    action = GAction(g, ("pt",), ((0,), (0,)))
    return CrossedProductAlgebra(action)


def z3_rotation_scenario() -> CrossedProductAlgebra:
    """Z3 acting on itself by translation (free): Morita-trivial block."""
    g = cyclic_group(3)
    action = GAction(g, ("0", "1", "2"),
                     tuple(tuple(g.mul[a][x] for x in range(3)) for a in range(3)))
    return CrossedProductAlgebra(action)


def s3_scenario() -> CrossedProductAlgebra:
    """S3 with its natural action on three points."""
    _, action = symmetric_group(3)
    return CrossedProductAlgebra(action)


def z2z2_scenario() -> CrossedProductAlgebra:
    """Z2 x Z2 on four points: (a,b) acts by swapping {1,2} and/or {3,4}."""
    g = direct_product(cyclic_group(2), cyclic_group(2))
    perms = []
    for ga in range(2):
        for gb in range(2):
            row = list(range(4))
            if ga:
                row[0], row[1] = row[1], row[0]
            if gb:
                row[2], row[3] = row[3], row[2]
            perms.append(tuple(row))
    action = GAction(g, ("1", "2", "3", "4"), tuple(perms))
    return CrossedProductAlgebra(action)


def trivial_point_scenario() -> CrossedProductAlgebra:
    """The ground field itself: trivial group on one point."""
    g = trivial_group()
    return CrossedProductAlgebra(GAction(g, ("pt",), ((0,),)))


SCENARIOS = {
    "z2swap": z2_swap_scenario,
    "z2trivial": z2_trivial_point_scenario,
    "z3rot": z3_rotation_scenario,
    "s3": s3_scenario,
    "z2z2": z2z2_scenario,
    "point": trivial_point_scenario,
}

DEFAULT_SCENARIOS = ("z2swap", "z2trivial", "z3rot", "s3", "z2z2")


def swap_cocycle(cpa: CrossedProductAlgebra, value=Fraction(4)) -> ConformalCocycle:
    """Conformal factors for the swap scenario: k_s = (v, 1/v), k_id = 1."""
    rows = [
        (Fraction(1), Fraction(1)),
        (Fraction(value), 1 / Fraction(value)),
    ]
    return ConformalCocycle(cpa.action, tuple(rows))


# -- spectral triples ----------------------------------------------------------


def micro_triple(conformal: bool = True) -> tuple[TwistedTriple, ConformalCocycle | None]:
    """Swap crossed product on H = l2({a,b}) (x) C2, graded by the C2 factor.

    pi(delta_x) projects on the point, pi(u_s) swaps the points on both
    chiralities; D couples the chiralities by an invertible rational matrix.
    With the ribbon cocycle k_s = (4, 1/4) the twist is a nontrivial
    diagonal scaling.
    """
    cpa = z2_swap_scenario()
    # basis of H: plus = (a+, b+), minus = (a-, b-)
    space = GradedSpace(2, 2)
    z, o = Scalar(0), Scalar(1)

    def embed(point_map):
        # block diag (P, P) for a 2x2 point matrix P
        p = point_map
        return mat([
            [p[0][0], p[0][1], z, z],
            [p[1][0], p[1][1], z, z],
            [z, z, p[0][0], p[0][1]],
            [z, z, p[1][0], p[1][1]],
        ])

    proj_a = [[o, z], [z, z]]
    proj_b = [[z, z], [z, o]]
    swap = [[z, o], [o, z]]
    rep = []
    for x in range(2):
        for g in range(2):
            p = proj_a if x == 0 else proj_b
            if g == 1:
                p = matmul2(p, swap)
            rep.append(embed(p))
    # D = [[0, M*], [M, 0]] with invertible rational M
    M = [[Scalar(1), Scalar(2)], [Scalar(0), Scalar(1)]]
    D = mat([
        [0, 0, 1, 0],
        [0, 0, 2, 1],
        [1, 2, 0, 0],
        [0, 1, 0, 0],
    ])
    cocycle = swap_cocycle(cpa) if conformal else None
    sigma = sigma_from_cocycle(cpa, cocycle) if conformal else identity_automorphism(cpa)
    triple = TwistedTriple(cpa, space, rep, D, sigma, label="micro")
    return triple, cocycle


def matmul2(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def asym_triple() -> TwistedTriple:
    """C({1,2}) with rank-asymmetric projections: index(delta_1) = 1.

    pi(delta_1) has rank 2 on H+ and rank 1 on H- (dim H+- = 3); D is a
    rational invertible odd self-adjoint matrix in generic position.
    """
    g = trivial_group()
    action = GAction(g, ("1", "2"), ((0, 1),))
    cpa = CrossedProductAlgebra(action)
    space = GradedSpace(3, 3)
    d1 = [1, 1, 0, 1, 0, 0]  # diagonal of pi(delta_1): plus (1,1,0), minus (1,0,0)
    rep = []
    for x in range(2):
        diag = d1 if x == 0 else [1 - v for v in d1]
        rep.append(mat([[diag[i] if i == j else 0 for j in range(6)] for i in range(6)]))
    m = [[1, 2, 0], [1, 1, 1], [0, 3, 1]]  # invertible, generic enough
    D = [[Scalar(0)] * 6 for _ in range(6)]
    for i in range(3):
        for j in range(3):
            D[3 + i][j] = Scalar(m[i][j])
            D[j][3 + i] = Scalar(m[i][j])
    return TwistedTriple(cpa, space, rep, D, label="asym")


def scalar_triple() -> TwistedTriple:
    """The ground field represented on C (+) C with an invertible D."""
    cpa = trivial_point_scenario()
    space = GradedSpace(1, 1)
    rep = [mat([[1, 0], [0, 1]])]
    D = mat([[0, 1], [1, 0]])
    return TwistedTriple(cpa, space, rep, D, label="scalar")


TRIPLES = {
    "micro": lambda: micro_triple()[0],
    "micro-untwisted": lambda: micro_triple(conformal=False)[0],
    "asym": asym_triple,
    "scalar": scalar_triple,
}

DEFAULT_TRIPLES = ("micro", "micro-untwisted", "asym", "scalar")


# -- geometries ------------------------------------------------------------------


def t2_scenario(quad_n: int = 64) -> GeometryScenario:
    """Flat T^2 with a quarter translation group in each direction."""
    shifts = [(Fraction(1, 4), Fraction(0)), (Fraction(0), Fraction(1, 4))]
    return GeometryScenario("T2", shifts, quad_n=quad_n, label="t2")


def s2_rotation_scenario(angle: Fraction, quad_n: int = 32) -> GeometryScenario:
    """Round S^2 with the rotation group generated by the given angle (of 2 pi)."""
    return GeometryScenario("S2", [(Fraction(0), angle)], quad_n=quad_n, label="s2rot")


def s2xt2_scenario(angle: Fraction = Fraction(1, 4), quad_n: int = 24) -> GeometryScenario:
    return GeometryScenario("S2xT2", [(Fraction(0), angle, Fraction(0), Fraction(0))],
                            quad_n=quad_n, label="s2xt2")


GEOMETRIES = {
    "t2": t2_scenario,
    "s2rot-quarter": lambda: s2_rotation_scenario(Fraction(1, 4)),
    "s2xt2": s2xt2_scenario,
}

"""Finite-dimensional *-algebras over Gaussian rationals.

The central object is the finite crossed product C(X) x| G spanned by
delta_x u_phi with u_phi f = (f o phi^{-1}) u_phi.  The same basis/structure
constant interface also covers C(X) itself, full matrix algebras (used as a
Morita oracle for homology), and the unitalization A + C used by invertible
doubles, so the chain operator calculus runs over any of them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groups import ConjugacyData, GAction, StructureError, conjugacy_analysis
from .scalars import ONE, Scalar


class ValidationError(ValueError):
    """Input data violates a required algebraic law."""


class FiniteAlgebra:
    """Associative unital algebra with a distinguished basis.

    ``mul_table[i][j]`` lists the (index, coefficient) terms of b_i * b_j,
    ``star_table[i]`` those of b_i^*, and ``unit`` is the sparse coefficient
    dict of the multiplicative unit.
    """

    def __init__(self, labels, mul_table, star_table, unit, name=""):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.mul_table = mul_table
        self.star_table = star_table
        self.unit = dict(unit)
        self.name = name

    def element(self, coeffs) -> AlgebraElement:
        return AlgebraElement(self, coeffs)

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    def basis_element(self, i: int) -> AlgebraElement:
        return AlgebraElement(self, {i: ONE})

    def basis(self):
        return [self.basis_element(i) for i in range(self.dim)]

    def mul_basis(self, i: int, j: int):
        return self.mul_table[i][j]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or ''} dim={self.dim}>"


class AlgebraElement:
    """Sparse element of a FiniteAlgebra; zero coefficients are never stored."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: FiniteAlgebra, coeffs):
        self.algebra = algebra
        self.coeffs = {i: c for i, c in dict(coeffs).items() if c}

    def _check_same(self, other: AlgebraElement):
        if self.algebra is not other.algebra:
            raise StructureError("elements live over different algebras")

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        self._check_same(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            s = out.get(i, None)
            s = c if s is None else s + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return AlgebraElement(self.algebra, out)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return self + (-other)

    def scale(self, s) -> AlgebraElement:
        s = s if isinstance(s, Scalar) else Scalar(s)
        if not s:
            return self.algebra.zero()
        return AlgebraElement(self.algebra, {i: s * c for i, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        self._check_same(other)
        table = self.algebra.mul_table
        out: dict[int, Scalar] = {}
        for i, ci in self.coeffs.items():
            row = table[i]
            for j, cj in other.coeffs.items():
                cij = ci * cj
                for k, s in row[j]:
                    acc = out.get(k)
                    acc = cij * s if acc is None else acc + cij * s
                    if acc:
                        out[k] = acc
                    else:
                        out.pop(k, None)
        return AlgebraElement(self.algebra, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def involution(self) -> AlgebraElement:
        out: dict[int, Scalar] = {}
        star = self.algebra.star_table
        for i, c in self.coeffs.items():
            cc = c.conjugate()
            for k, s in star[i]:
                acc = out.get(k)
                acc = cc * s if acc is None else acc + cc * s
                if acc:
                    out[k] = acc
                else:
                    out.pop(k, None)
        return AlgebraElement(self.algebra, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = [f"({c})*{self.algebra.labels[i]}" for i, c in sorted(self.coeffs.items())]
        return " + ".join(parts)


# -- concrete algebras ------------------------------------------------------


class PointAlgebra(FiniteAlgebra):
    """C(X): functions on a finite set, basis of point indicators."""

    def __init__(self, points):
        points = tuple(points)
        n = len(points)
        mul = [[((i, ONE),) if i == j else () for j in range(n)] for i in range(n)]
        star = [((i, ONE),) for i in range(n)]
        unit = {i: ONE for i in range(n)}
        super().__init__(points, mul, star, unit, name=f"C(X),|X|={n}")
        self.n_points = n

    def compose_basis(self, i: int, inv_point_map) -> int:
        """Index of delta_{x_i} o phi given phi^{-1} as a point map."""
        return inv_point_map[i]


class CrossedProductAlgebra(FiniteAlgebra):
    """C(X) x| G with basis delta_x u_phi, ordered x-major then phi.

    Structure constants: (delta_x u_phi)(delta_y u_psi) = [x = phi(y)] delta_x u_{phi psi}
    and (delta_x u_phi)^* = delta_{phi^{-1}(x)} u_{phi^{-1}}.
    """

    def __init__(self, action: GAction):
        self.action = action
        self.group = action.group
        nx, ng = action.n_points, self.group.order
        labels = tuple(
            (action.points[x], self.group.names[g]) for x in range(nx) for g in range(ng)
        )
        idx = lambda x, g: x * ng + g
        mul = []
        for x in range(nx):
            for g in range(ng):
                row = []
                for y in range(nx):
                    for h in range(ng):
                        if action.act[g][y] == x:
                            row.append(((idx(x, self.group.mul[g][h]), ONE),))
                        else:
                            row.append(())
                mul.append(row)
        star = [((idx(action.apply_inv(g, x), self.group.inv[g]), ONE),)
                for x in range(nx) for g in range(ng)]
        unit = {idx(x, self.group.id): ONE for x in range(nx)}
        super().__init__(labels, mul, star, unit, name=f"C(X)x|G,|X|={nx},|G|={ng}")
        self.n_points = nx
        self.conjugacy: ConjugacyData = conjugacy_analysis(action)
        self.point_algebra = PointAlgebra(action.points)
        self._kappa_cache: dict[tuple[int, int], int] = {}

    def kappa_for(self, phi: int, word: int) -> int:
        """Smallest kappa with kappa^{-1} phi kappa = word (same class)."""
        key = (phi, word)
        if key not in self._kappa_cache:
            G = self.group
            for k in G.elements():
                if G.compose(G.inv[k], phi, k) == word:
                    self._kappa_cache[key] = k
                    break
            else:
                raise StructureError("word is not conjugate to phi")
        return self._kappa_cache[key]

    def basis_index(self, x: int, g: int) -> int:
        return x * self.group.order + g

    def basis_pair(self, i: int) -> tuple[int, int]:
        return divmod(i, self.group.order)

    def delta_u(self, x: int, g: int) -> AlgebraElement:
        return self.basis_element(self.basis_index(x, g))

    def u(self, g: int) -> AlgebraElement:
        return self.element({self.basis_index(x, g): ONE for x in range(self.n_points)})

    def function_element(self, values, g: int | None = None) -> AlgebraElement:
        """f u_g for f given by per-point values (g defaults to the identity)."""
        g = self.group.id if g is None else g
        return self.element(
            {self.basis_index(x, g): v if isinstance(v, Scalar) else Scalar(v)
             for x, v in enumerate(values)}
        )

    def block_of_tuple(self, t) -> int:
        """Conjugacy-class index of phi_0 o ... o phi_m for a basis tuple."""
        g = self.group.id
        for i in t:
            g = self.group.mul[g][i % self.group.order]
        return self.conjugacy.class_of[g]


class MatrixAlgebra(FiniteAlgebra):
    """M_n(C) with the elementary matrix basis E_ij; Morita oracle for homology."""

    def __init__(self, n: int):
        labels = tuple((i, j) for i in range(n) for j in range(n))
        idx = lambda i, j: i * n + j
        mul = [
            [((idx(i, l), ONE),) if j == k else () for k in range(n) for l in range(n)]
            for i in range(n)
            for j in range(n)
        ]
        star = [((idx(j, i), ONE),) for i in range(n) for j in range(n)]
        unit = {idx(i, i): ONE for i in range(n)}
        super().__init__(labels, mul, star, unit, name=f"M_{n}")
        self.n = n


class UnitalizedAlgebra(FiniteAlgebra):
    """A + C with adjoined unit as the last basis vector (A's own unit kept)."""

    def __init__(self, base: FiniteAlgebra):
        self.base = base
        d = base.dim
        labels = base.labels + ("1~",)
        mul = []
        for i in range(d):
            row = [base.mul_table[i][j] for j in range(d)]
            row.append(((i, ONE),))
            mul.append(row)
        last = [((j, ONE),) for j in range(d)]
        last.append(((d, ONE),))
        mul.append(last)
        star = [base.star_table[i] for i in range(d)] + [((d, ONE),)]
        super().__init__(labels, mul, star, {d: ONE}, name=f"({base.name})~")

    def include(self, a: AlgebraElement) -> AlgebraElement:
        if a.algebra is not self.base:
            raise StructureError("element not over the base algebra")
        return AlgebraElement(self, dict(a.coeffs))


# -- conformal cocycles and automorphisms -----------------------------------


@dataclass(frozen=True)
class ConformalCocycle:
    """k: G -> (X -> positive rational) with k_id = 1 and the chain rule
    k_{phi o psi}(x) = k_psi(phi^{-1}(x)) * k_phi(x)."""

    action: GAction
    values: tuple[tuple[Fraction, ...], ...]  # values[g][x]

    def __post_init__(self):
        act = self.action
        n, m = act.group.order, act.n_points
        if len(self.values) != n or any(len(row) != m for row in self.values):
            raise ValidationError("cocycle table has wrong shape")
        for row in self.values:
            for v in row:
                if v <= 0:
                    raise ValidationError("conformal factors must be positive")
        if any(v != 1 for v in self.values[act.group.id]):
            raise ValidationError("k_id must be identically 1")
        for g in range(n):
            for h in range(n):
                gh = act.group.mul[g][h]
                for x in range(m):
                    if self.values[gh][x] != self.values[h][act.apply_inv(g, x)] * self.values[g][x]:
                        raise ValidationError(f"cocycle law fails at (g={g},h={h},x={x})")

    def sqrt(self) -> ConformalCocycle:
        out = []
        for row in self.values:
            new = []
            for v in row:
                p, q = _isqrt_exact(v.numerator), _isqrt_exact(v.denominator)
                if p is None or q is None:
                    raise ValidationError(f"{v} has no rational square root")
                new.append(Fraction(p, q))
            out.append(tuple(new))
        return ConformalCocycle(self.action, tuple(out))

    def inverse(self) -> ConformalCocycle:
        """Pointwise reciprocal; generates the inverse automorphism."""
        return ConformalCocycle(
            self.action,
            tuple(tuple(1 / v for v in row) for row in self.values),
        )


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def trivial_cocycle(action: GAction) -> ConformalCocycle:
    return ConformalCocycle(
        action,
        tuple(tuple(Fraction(1) for _ in range(action.n_points))
              for _ in range(action.group.order)),
    )


class AlgebraAutomorphism:
    """A linear map on a FiniteAlgebra given by its basis images.

    Multiplicativity and unitality are validated on request; the maps we
    construct (conformal scalings, inner conjugations) always pass.
    """

    def __init__(self, algebra: FiniteAlgebra, images, check: bool = True):
        self.algebra = algebra
        self.images = [
            img if isinstance(img, AlgebraElement) else AlgebraElement(algebra, img)
            for img in images
        ]
        if len(self.images) != algebra.dim:
            raise ValidationError("one image per basis vector required")
        if check:
            self.validate()

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        out = self.algebra.zero()
        for i, c in a.coeffs.items():
            out = out + self.images[i].scale(c)
        return out

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return self.apply(a)

    def validate(self):
        A = self.algebra
        if not self.apply(A.one()) == A.one():
            raise ValidationError("automorphism must fix the unit")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.apply(A.basis_element(i) * A.basis_element(j))
                if lhs != self.images[i] * self.images[j]:
                    raise ValidationError(f"multiplicativity fails on basis ({i},{j})")
        if self._matrix_rank() != A.dim:
            raise ValidationError("map is not bijective")

    def _matrix_rank(self) -> int:
        from .linalg import mat_rank

        m = [[self.images[j].coeffs.get(i, Scalar(0)) for j in range(self.algebra.dim)]
             for i in range(self.algebra.dim)]
        return mat_rank(m)

    def inverse(self) -> AlgebraAutomorphism:
        from .linalg import mat_inverse

        d = self.algebra.dim
        m = [[self.images[j].coeffs.get(i, Scalar(0)) for j in range(d)] for i in range(d)]
        minv = mat_inverse(m)
        images = [
            AlgebraElement(self.algebra, {i: minv[i][j] for i in range(d) if minv[i][j]})
            for j in range(d)
        ]
        return AlgebraAutomorphism(self.algebra, images, check=False)

    def compose(self, other: AlgebraAutomorphism) -> AlgebraAutomorphism:
        return AlgebraAutomorphism(
            self.algebra, [self.apply(img) for img in other.images], check=False
        )

    def is_identity(self) -> bool:
        return all(
            self.images[i].coeffs == {i: ONE} for i in range(self.algebra.dim)
        )


def identity_automorphism(algebra: FiniteAlgebra) -> AlgebraAutomorphism:
    return AlgebraAutomorphism(algebra, [algebra.basis_element(i) for i in range(algebra.dim)], check=False)


def sigma_from_cocycle(algebra: CrossedProductAlgebra, k: ConformalCocycle) -> AlgebraAutomorphism:
    """The conformal-factor automorphism sigma(f u_phi) = k_phi f u_phi."""
    if k.action is not algebra.action:
        raise ValidationError("cocycle defined over a different action")
    images = []
    for i in range(algebra.dim):
        x, g = algebra.basis_pair(i)
        images.append(AlgebraElement(algebra, {i: Scalar(k.values[g][x])}))
    return AlgebraAutomorphism(algebra, images, check=False)


def inner_automorphism(algebra: FiniteAlgebra, k: AlgebraElement, k_inv: AlgebraElement) -> AlgebraAutomorphism:
    """a -> k a k^{-1}."""
    images = [k * algebra.basis_element(i) * k_inv for i in range(algebra.dim)]
    return AlgebraAutomorphism(algebra, images, check=False)

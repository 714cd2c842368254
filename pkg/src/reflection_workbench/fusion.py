"""The fusion procedure.

Fused R-matrices on (k, m) blocks of auxiliary legs, the primed variants,
the omega central factor, fused S-matrices grown from a seed solution of
the reflection equation, characters built from constant (skew-)symmetric
matrices, and the truncated fused breve operators.

Auxiliary legs are always labelled u1..uk left to right; a second block
uses v1..vm.  Coefficient legs keep their own labels.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import (
    LaurentPoly,
    LegSpace,
    TensorOp,
    embed_legs,
    fresh_label,
    identity_op,
    leg_permute,
    matrix_on_leg,
    op_substitute,
    orthogonal_transposition,
    tau_on_leg,
    tensor_compose,
)
from .rmatrix import breve_r_series, yang_r

DEFAULT_KMAX = 3


def block_labels(prefix, count):
    return tuple(f"{prefix}{i}" for i in range(1, count + 1))


def fused_r(k, m, n, primed=False, t=None, u_labels=None, v_labels=None):
    """The fused operator on k + m auxiliary legs.

    km = 0 gives the identity.  Otherwise the ordered product over i = 1..k
    of the R_{i,j}(u_i, v_j) factors, with j descending m..1 for the plain
    operator and ascending 1..m for the primed one (tau on the u_i leg).
    """
    if k < 0 or m < 0:
        raise ValueError("block sizes must be nonnegative")
    u_labels = block_labels("u", k) if u_labels is None else tuple(u_labels)
    v_labels = block_labels("v", m) if v_labels is None else tuple(v_labels)
    if len(u_labels) != k or len(v_labels) != m:
        raise ValueError("label count does not match block size")
    if t is None:
        t = orthogonal_transposition(n)
    legs = tuple(LegSpace(n, name) for name in u_labels + v_labels)
    result = identity_op(legs)
    if k == 0 or m == 0:
        return result
    for i in range(1, k + 1):
        j_range = range(1, m + 1) if primed else range(m, 0, -1)
        for j in j_range:
            factor = yang_r(n, u_labels[i - 1], v_labels[j - 1])
            if primed:
                factor = tau_on_leg(factor, 1, t)
            result = tensor_compose(result, embed_legs(factor, (i, k + j), legs))
    return result


def fused_r_prime_flipped(k, m, n, t=None, u_labels=None, v_labels=None):
    """The block-swapped primed fused operator: the subscript-reversal of
    the primed fused_r built on the (m, k) block layout.  Each factor is
    R'(v_i, u_j) with tau acting on the v_i leg, embedded at (k+i, j)."""
    u_labels = block_labels("u", k) if u_labels is None else tuple(u_labels)
    v_labels = block_labels("v", m) if v_labels is None else tuple(v_labels)
    if t is None:
        t = orthogonal_transposition(n)
    legs = tuple(LegSpace(n, name) for name in u_labels + v_labels)
    result = identity_op(legs)
    if k == 0 or m == 0:
        return result
    for i in range(1, m + 1):
        for j in range(1, k + 1):
            factor = tau_on_leg(yang_r(n, v_labels[i - 1], u_labels[j - 1]), 1, t)
            result = tensor_compose(result, embed_legs(factor, (k + i, j), legs))
    return result


def omega_factor(k, n=None):
    """prod_{1<=i<j<=k} ((u_i + u_j)^2 - 1).  The n argument is part of the
    operation's calling convention but the scalar does not depend on it."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    labels = block_labels("u", k)
    result = LaurentPoly.const(1, labels)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            u_i = LaurentPoly.var(labels[i - 1])
            u_j = LaurentPoly.var(labels[j - 1])
            result = result * ((u_i + u_j) ** 2 - 1)
    return result


class SeedSolution:
    """A one-auxiliary-leg solution of the reflection equation.

    The seed is verified on construction: it must pass check_re against the
    Yang family built with the seed's transposition.
    """

    __slots__ = ("s", "t", "spectral_var", "coeff_legs")

    def __init__(self, s, t, skip_check=False):
        if not s.legs:
            raise ValueError("seed needs at least the auxiliary leg")
        aux = s.legs[0]
        if aux.spectral_var is None:
            raise ValueError("seed auxiliary leg must carry a spectral label")
        if aux.dim != t.n:
            raise ValueError(
                f"seed leg dimension {aux.dim} does not match transposition size {t.n}"
            )
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "spectral_var", aux.spectral_var)
        object.__setattr__(self, "coeff_legs", s.legs[1:])
        if not skip_check:
            from .rmatrix import RFamily
            from .verify import check_re

            partner = fresh_label("v", s.variables)
            fam = RFamily.build(t.n, t, uvar=aux.spectral_var, vvar=partner)
            s_second = op_substitute(s, {aux.spectral_var: partner})
            report = check_re(fam, s, s_second)
            if not report.passed:
                raise ValueError(
                    f"seed fails the reflection equation at entry {report.witness}"
                )

    def __setattr__(self, name, value):
        raise AttributeError("SeedSolution is immutable")

    def instance(self, label):
        """The seed relabelled to the given auxiliary spectral variable."""
        if label == self.spectral_var:
            return self.s
        return op_substitute(self.s, {self.spectral_var: label})


def fused_s(seed, k):
    """The k-th graded component: prod_{i=1..k} ( S_i prod_{j>i} R'_{ij} ).

    Auxiliary legs are labelled u1..uk; component 0 is the identity on the
    seed's coefficient block.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    coeff = seed.coeff_legs
    if k == 0:
        return identity_op(coeff)
    n = seed.t.n
    labels = block_labels("u", k)
    for leg in coeff:
        if leg.spectral_var in labels:
            raise ValueError(
                f"coefficient label {leg.spectral_var!r} collides with auxiliary labels"
            )
    legs = tuple(LegSpace(n, name) for name in labels) + coeff
    coeff_targets = tuple(range(k + 1, k + 1 + len(coeff)))
    result = identity_op(legs)
    for i in range(1, k + 1):
        s_i = embed_legs(seed.instance(labels[i - 1]), (i,) + coeff_targets, legs)
        result = tensor_compose(result, s_i)
        for j in range(i + 1, k + 1):
            r_prime = tau_on_leg(yang_r(n, labels[i - 1], labels[j - 1]), 1, seed.t)
            result = tensor_compose(result, embed_legs(r_prime, (i, j), legs))
    return result


def symmetry_sign(x):
    """+1 for a symmetric matrix, -1 for skew; error with the violated
    entry pair otherwise (the zero matrix counts as symmetric)."""
    n = len(x)
    if any(len(row) != n for row in x):
        raise ValueError("matrix is not square")
    symmetric_violation = None
    skew_violation = None
    for i in range(n):
        for j in range(n):
            if symmetric_violation is None and x[i][j] != x[j][i]:
                symmetric_violation = (i + 1, j + 1)
            if skew_violation is None and x[i][j] != -x[j][i]:
                skew_violation = (i + 1, j + 1)
    if symmetric_violation is None:
        return 1
    if skew_violation is None:
        return -1
    si, sj = symmetric_violation
    ki, kj = skew_violation
    raise ValueError(
        "matrix is neither symmetric nor skew: "
        f"x[{si}][{sj}]={x[si - 1][sj - 1]} vs x[{sj}][{si}]={x[sj - 1][si - 1]} "
        f"breaks symmetry, x[{ki}][{kj}]={x[ki - 1][kj - 1]} vs "
        f"-x[{kj}][{ki}]={-x[kj - 1][ki - 1]} breaks skewness"
    )


def character_seed(x, t):
    """SeedSolution wrapping a constant (skew-)symmetric matrix."""
    symmetry_sign(x)
    x = tuple(tuple(Fraction(value) for value in row) for row in x)
    if len(x) != t.n:
        raise ValueError(f"matrix size {len(x)} does not match transposition size {t.n}")
    s = matrix_on_leg(x, LegSpace(t.n, "u"))
    return SeedSolution(s, t)


def character_chi(x, t, k):
    """The k-th component of the character attached to the constant matrix x."""
    return fused_s(character_seed(x, t), k)


class GradedFamily:
    """Truncated graded family {k -> TensorOp on k auxiliary legs plus a
    fixed coefficient block}.  Components are built lazily per k; the cache
    insert is idempotent, so concurrent fills are safe."""

    __slots__ = ("_builder", "k_max", "coeff_legs", "t", "_cache")

    def __init__(self, builder, k_max=DEFAULT_KMAX, coeff_legs=(), t=None):
        object.__setattr__(self, "_builder", builder)
        object.__setattr__(self, "k_max", k_max)
        object.__setattr__(self, "coeff_legs", tuple(coeff_legs))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("GradedFamily is immutable (cache aside)")

    @staticmethod
    def from_seed(seed, k_max=DEFAULT_KMAX):
        return GradedFamily(
            lambda k: fused_s(seed, k),
            k_max=k_max,
            coeff_legs=seed.coeff_legs,
            t=seed.t,
        )

    @staticmethod
    def from_character(x, t, k_max=DEFAULT_KMAX):
        seed = character_seed(x, t)
        return GradedFamily.from_seed(seed, k_max=k_max)

    def component(self, k):
        if not 0 <= k <= self.k_max:
            raise ValueError(f"component {k} outside 0..{self.k_max}")
        cached = self._cache.get(k)
        if cached is not None:
            return cached
        built = self._builder(k)
        expected_labels = block_labels("u", k)
        actual_labels = tuple(leg.spectral_var for leg in built.legs[:k])
        if actual_labels != expected_labels:
            raise ValueError(
                f"component {k} auxiliary labels {actual_labels} != {expected_labels}"
            )
        if built.legs[k:] != self.coeff_legs:
            raise ValueError(f"component {k} coefficient block mismatch")
        if k == 0 and built != identity_op(self.coeff_legs):
            raise ValueError("component 0 must be the identity on the coefficient block")
        self._cache[k] = built
        return built


def breve_product(k, m, n, factor_order, primed=False, t=None):
    """Product of per-factor truncated breve series on (k, m) blocks, in the
    fused-operator factor order, with NO total-order filter applied."""
    if t is None:
        t = orthogonal_transposition(n)
    u_labels = block_labels("u", k)
    v_labels = block_labels("v", m)
    legs = tuple(LegSpace(n, name) for name in u_labels + v_labels)
    result = identity_op(legs)
    if k == 0 or m == 0:
        return result
    for i in range(1, k + 1):
        j_range = range(1, m + 1) if primed else range(m, 0, -1)
        for j in j_range:
            factor = breve_r_series(n, u_labels[i - 1], v_labels[j - 1], factor_order)
            if primed:
                factor = tau_on_leg(factor, 1, t)
            result = tensor_compose(result, embed_legs(factor, (i, k + j), legs))
    return result


def fused_breve(k, m, n, K, primed=False, t=None):
    """Fused breve operator truncated to total degree <= K in the v-block
    variables (each factor's series index is its v-degree)."""
    if K < 0:
        raise ValueError("truncation order must be >= 0")
    product = breve_product(k, m, n, K, primed=primed, t=t)
    v_labels = set(block_labels("v", m))

    def low_order(exps):
        return sum(e for name, e in exps.items() if name in v_labels) <= K

    return TensorOp(
        product.legs,
        {key: poly.filtered(low_order) for key, poly in product.entries.items()},
    )


def component_to_json(op, k):
    """Canonical JSON form of a fused component (sorted entries)."""
    legs = [
        {"dim": leg.dim, "spectral_var": leg.spectral_var, "role": leg.role}
        for leg in op.legs
    ]
    entries = [
        {"row": list(row), "col": list(col), "poly": str(op.entries[(row, col)])}
        for row, col in sorted(op.entries)
    ]
    return {"k": k, "legs": legs, "entries": entries}


def block_swap(op, k, m):
    """Move the second block of m legs in front of the first block of k legs
    and rename the u/v labels back to position order (fused subscript flip)."""
    if len(op.legs) != k + m:
        raise ValueError(f"operator has {len(op.legs)} legs, expected {k + m}")
    sigma = tuple(range(m + 1, m + k + 1)) + tuple(range(1, m + 1))
    moved = leg_permute(op, sigma)
    rename = {}
    for j in range(1, k + 1):
        old = op.legs[j - 1].spectral_var
        if old is not None:
            rename[old] = f"v{j}"
    for i in range(1, m + 1):
        old = op.legs[k + i - 1].spectral_var
        if old is not None:
            rename[old] = f"u{i}"
    return op_substitute(moved, rename)

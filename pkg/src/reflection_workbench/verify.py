"""Exact identity predicates.

Every equation asserted about the R-matrix / fusion / reflection-equation
structures becomes a named check returning a CheckReport.  A failing check
carries the lexicographically first disagreeing entry as a witness; a pass
means the complete entry set of both sides was compared exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .fusion import (
    block_labels,
    breve_product,
    fused_r,
    fused_r_prime_flipped,
)
from .kernel import (
    LegSpace,
    TensorOp,
    embed_legs,
    extract_entry,
    fresh_label,
    op_scale,
    op_substitute,
    identity_op,
    site_permute,
    tau_on_leg,
    tensor_compose,
)
from .rmatrix import yang_r


@dataclass(frozen=True)
class CheckReport:
    name: str
    params: dict
    passed: bool
    witness: dict | None
    elapsed_ms: float

    def to_json(self):
        return {
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
        }


def _compare(name, params, sides, started):
    """Build the report for a list of (lhs, rhs) operator pairs.

    All pairs are fully compared (no shortcut); the witness is the
    lexicographically first disagreeing (row, col) of the first failing
    pair in order.
    """
    witness = None
    passed = True
    for label, lhs, rhs in sides:
        if lhs.legs != rhs.legs:
            raise ValueError(f"{name}: leg layout mismatch in {label}")
        disagreements = []
        for key in set(lhs.entries) | set(rhs.entries):
            left = lhs.entries.get(key)
            right = rhs.entries.get(key)
            if left is None or right is None or left != right:
                disagreements.append(key)
        if disagreements and passed:
            passed = False
            row, col = min(disagreements)
            witness = {
                "row": list(row),
                "col": list(col),
                "lhs": str(extract_entry(lhs, row, col)),
                "rhs": str(extract_entry(rhs, row, col)),
            }
            if label:
                witness["side"] = label
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return CheckReport(name, params, passed, witness, elapsed_ms)


def check_ybe(r):
    """R12 R13 R23 = R23 R13 R12 on three legs."""
    started = time.perf_counter()
    if len(r.legs) != 2:
        raise ValueError("check_ybe expects an operator on two legs")
    a = r.legs[0].spectral_var
    b = r.legs[1].spectral_var
    if a is None or b is None or a == b:
        raise ValueError("check_ybe needs two distinct spectral labels")
    w = fresh_label("w", set(r.variables))
    legs = (r.legs[0], r.legs[1], r.legs[1].with_label(w))
    r12 = embed_legs(r, (1, 2), legs)
    r13 = embed_legs(op_substitute(r, {b: w}), (1, 3), legs)
    r23 = embed_legs(op_substitute(r, {a: b, b: w}), (2, 3), legs)
    lhs = tensor_compose(tensor_compose(r12, r13), r23)
    rhs = tensor_compose(tensor_compose(r23, r13), r12)
    params = {"n": r.legs[0].dim, "labels": f"{a},{b},{w}"}
    return _compare("ybe", params, [("", lhs, rhs)], started)


def check_quasi_inverse(r, r_bar, zeta):
    """r r_bar = zeta Id and r_bar r = zeta Id."""
    started = time.perf_counter()
    if r.legs != r_bar.legs:
        raise ValueError("check_quasi_inverse: mismatched legs")
    target = op_scale(identity_op(r.legs), zeta)
    sides = [
        ("r*r_bar", tensor_compose(r, r_bar), target),
        ("r_bar*r", tensor_compose(r_bar, r), target),
    ]
    params = {"n": r.legs[0].dim, "zeta": str(zeta)}
    return _compare("quasi_inverse", params, sides, started)


def _embedded_pair(first, second, ambient):
    """Embed two coefficient-block operators at aux slots 1 and 2."""
    coeff_count = len(ambient) - 2
    coeff_targets = tuple(range(3, 3 + coeff_count))
    one = embed_legs(first, (1,) + coeff_targets, ambient)
    two = embed_legs(second, (2,) + coeff_targets, ambient)
    return one, two


def check_rtt(r, t_op):
    """R12 T1 T2 = T2 T1 R12 with T the one-aux-leg operator at r's labels."""
    started = time.perf_counter()
    if len(r.legs) != 2:
        raise ValueError("check_rtt expects an R-matrix on two legs")
    a = r.legs[0].spectral_var
    b = r.legs[1].spectral_var
    if not t_op.legs or t_op.legs[0].spectral_var != a:
        raise ValueError(f"t_op's auxiliary leg must carry the label {a!r}")
    if t_op.legs[0].dim != r.legs[0].dim:
        raise ValueError("t_op auxiliary dimension does not match R")
    if b in t_op.variables:
        raise ValueError(f"t_op must not already depend on {b!r}")
    coeff = t_op.legs[1:]
    ambient = (r.legs[0], r.legs[1]) + coeff
    t1, t2 = _embedded_pair(t_op, op_substitute(t_op, {a: b}), ambient)
    r12 = embed_legs(r, (1, 2), ambient)
    lhs = tensor_compose(tensor_compose(r12, t1), t2)
    rhs = tensor_compose(tensor_compose(t2, t1), r12)
    params = {"n": r.legs[0].dim, "coeff_legs": len(coeff)}
    return _compare("rtt", params, [("", lhs, rhs)], started)


def _re_sides(r, r_prime, r_double_prime, s1, s2):
    """Shared layout for the (conjugate) reflection equation builders."""
    if not s1.legs or not s2.legs:
        raise ValueError("solutions need at least the auxiliary leg")
    if s1.legs[1:] != s2.legs[1:]:
        raise ValueError("solutions must share the coefficient block")
    if (s1.legs[0].dim, s2.legs[0].dim) != (r.legs[0].dim, r.legs[1].dim):
        raise ValueError("solution leg dimensions do not match the R-matrix")
    if (s1.legs[0].spectral_var, s2.legs[0].spectral_var) != (
        r.legs[0].spectral_var,
        r.legs[1].spectral_var,
    ):
        raise ValueError("solution labels do not match the R-matrix labels")
    coeff = s1.legs[1:]
    ambient = (s1.legs[0], s2.legs[0]) + coeff
    big_s1, big_s2 = _embedded_pair(s1, s2, ambient)
    big_r = embed_legs(r, (1, 2), ambient)
    big_rp = embed_legs(r_prime, (1, 2), ambient)
    big_rpp = embed_legs(r_double_prime, (1, 2), ambient)
    lhs = tensor_compose(
        tensor_compose(tensor_compose(big_r, big_s1), big_rp), big_s2
    )
    rhs = tensor_compose(
        tensor_compose(tensor_compose(big_s2, big_rpp), big_s1), big_r
    )
    return lhs, rhs


def check_re(fam, s1, s2):
    """R S1 R' S2 = S2 R'' S1 R (matrix reflection equation)."""
    started = time.perf_counter()
    lhs, rhs = _re_sides(fam.r, fam.r_prime, fam.r_double_prime, s1, s2)
    params = {
        "n": fam.n,
        "kind": "orthogonal" if fam.t.sign == 1 else "symplectic",
        "coeff_legs": len(s1.legs) - 1,
    }
    return _compare("re", params, [("", lhs, rhs)], started)


def check_conjugate_re(fam, s1, s2):
    """R-bar S1 (R-bar)'' S2 = S2 (R-bar)' S1 R-bar.

    The primed partners of R-bar are built by the same tau rules; no
    equality between them is assumed.  The middle factor on the LEFT is
    the double-primed one, mirroring the plain reflection equation with
    the sides' roles exchanged.
    """
    started = time.perf_counter()
    r_bar = fam.r_bar
    r_bar_prime = tau_on_leg(r_bar, 1, fam.t)
    r_bar_double = site_permute(r_bar_prime, (2, 1))
    lhs, rhs = _re_sides(r_bar, r_bar_double, r_bar_prime, s1, s2)
    params = {
        "n": fam.n,
        "kind": "orthogonal" if fam.t.sign == 1 else "symplectic",
    }
    return _compare("conjugate_re", params, [("", lhs, rhs)], started)


def _swap_adjacent(i, total):
    sigma = list(range(1, total + 1))
    sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
    return tuple(sigma)


def check_membership(h, fam):
    """R_{i,i+1} h = sigma_{i,i+1}(h) R_{i,i+1} for all adjacent aux pairs."""
    started = time.perf_counter()
    aux_count = 0
    for position, leg in enumerate(h.legs, start=1):
        if leg.role == "auxiliary" and leg.spectral_var == f"u{position}":
            aux_count += 1
        else:
            break
    if aux_count < 2:
        raise ValueError("membership needs at least two auxiliary legs labelled u1, u2, ...")
    n = h.legs[0].dim
    if n != fam.n:
        raise ValueError(f"family size {fam.n} does not match legs of dimension {n}")
    sides = []
    for i in range(1, aux_count):
        r_i = embed_legs(yang_r(n, f"u{i}", f"u{i + 1}"), (i, i + 1), h.legs)
        flipped = site_permute(h, _swap_adjacent(i, len(h.legs)))
        sides.append(
            (f"i={i}", tensor_compose(r_i, h), tensor_compose(flipped, r_i))
        )
    params = {"n": n, "k": aux_count}
    return _compare("membership", params, sides, started)


def check_characteristic(family, fam, k, i, primed_middle=True):
    """S^(k) = S^(i)_1 (R')^(i),(k-i) S^(k-i)_2 for one partition.

    primed_middle=False deliberately drops the tau twist on the middle
    factor; that variant must fail for a generic seed and exists as a
    negative control.
    """
    started = time.perf_counter()
    if not 0 <= i <= k <= family.k_max:
        raise ValueError(f"need 0 <= i <= k <= {family.k_max}, got i={i}, k={k}")
    j = k - i
    whole = family.component(k)
    legs = whole.legs
    n = fam.n
    coeff_targets = tuple(range(k + 1, k + 1 + len(family.coeff_legs)))
    first = embed_legs(family.component(i), tuple(range(1, i + 1)) + coeff_targets, legs)
    second_raw = family.component(j)
    relabel = {f"u{b}": f"u{i + b}" for b in range(1, j + 1) if i}
    second = embed_legs(
        op_substitute(second_raw, relabel) if relabel else second_raw,
        tuple(range(i + 1, k + 1)) + coeff_targets,
        legs,
    )
    middle = fused_r(
        i,
        j,
        n,
        primed=primed_middle,
        t=fam.t,
        u_labels=block_labels("u", k)[:i],
        v_labels=block_labels("u", k)[i:],
    )
    middle = embed_legs(middle, tuple(range(1, k + 1)), legs)
    rhs = tensor_compose(tensor_compose(first, middle), second)
    params = {
        "n": n,
        "k": k,
        "i": i,
        "primed_middle": primed_middle,
    }
    return _compare("characteristic", params, [("", whole, rhs)], started)


def _fused_blocks(chi, fam, k, m):
    """Common layout for the fused componentwise checks: ambient legs,
    chi^(k) at the u-block, chi^(m) relabelled onto the v-block."""
    n = fam.n
    coeff = chi.coeff_legs
    u_labels = block_labels("u", k)
    v_labels = block_labels("v", m)
    for leg in coeff:
        if leg.spectral_var in set(u_labels) | set(v_labels):
            raise ValueError("coefficient labels collide with block labels")
    ambient = tuple(LegSpace(n, name) for name in u_labels + v_labels) + coeff
    coeff_targets = tuple(range(k + m + 1, k + m + 1 + len(coeff)))
    chi_k = embed_legs(
        chi.component(k), tuple(range(1, k + 1)) + coeff_targets, ambient
    )
    chi_m_raw = chi.component(m)
    relabel = {f"u{b}": f"v{b}" for b in range(1, m + 1)}
    chi_m = embed_legs(
        op_substitute(chi_m_raw, relabel) if relabel else chi_m_raw,
        tuple(range(k + 1, k + m + 1)) + coeff_targets,
        ambient,
    )
    return ambient, chi_k, chi_m


def check_fused_re(chi, fam, k, m):
    """Componentwise reflection equation for a graded family:
    R^(k),(m) chi^(k)_1 (R')^(k),(m) chi^(m)_2
      = chi^(m)_2 (R'')^(k),(m) chi^(k)_1 R^(k),(m)."""
    started = time.perf_counter()
    n = fam.n
    ambient, chi_k, chi_m = _fused_blocks(chi, fam, k, m)
    block_targets = tuple(range(1, k + m + 1))
    plain = embed_legs(fused_r(k, m, n), block_targets, ambient)
    primed = embed_legs(fused_r(k, m, n, primed=True, t=fam.t), block_targets, ambient)
    flipped = embed_legs(fused_r_prime_flipped(k, m, n, fam.t), block_targets, ambient)
    lhs = tensor_compose(tensor_compose(tensor_compose(plain, chi_k), primed), chi_m)
    rhs = tensor_compose(tensor_compose(tensor_compose(chi_m, flipped), chi_k), plain)
    params = {
        "n": n,
        "k": k,
        "m": m,
        "kind": "orthogonal" if fam.t.sign == 1 else "symplectic",
    }
    return _compare("fused_re", params, [("", lhs, rhs)], started)


def check_intertwiner(chi, fam, K, k, m):
    """breveR chi^(k)_1 breveR' chi^(m)_2 = chi^(m)_2 breveR' chi^(k)_1 breveR
    compared modulo terms of order > K, where the order of a monomial is its
    total inverse degree in the u-block variables."""
    started = time.perf_counter()
    if K < 0:
        raise ValueError("truncation order must be >= 0")
    n = fam.n
    slack = k * (k - 1) // 2
    ambient, chi_k, chi_m = _fused_blocks(chi, fam, k, m)
    block_targets = tuple(range(1, k + m + 1))
    breve = embed_legs(
        breve_product(k, m, n, K + slack, primed=False, t=fam.t), block_targets, ambient
    )
    breve_p = embed_legs(
        breve_product(k, m, n, K + slack, primed=True, t=fam.t), block_targets, ambient
    )
    lhs = tensor_compose(tensor_compose(tensor_compose(breve, chi_k), breve_p), chi_m)
    rhs = tensor_compose(tensor_compose(tensor_compose(chi_m, breve_p), chi_k), breve)
    u_labels = set(block_labels("u", k))

    def low_order(exps):
        inverse_degree = -sum(e for name, e in exps.items() if name in u_labels)
        return inverse_degree <= K

    lhs_cut = TensorOp(
        lhs.legs, {key: poly.filtered(low_order) for key, poly in lhs.entries.items()}
    )
    rhs_cut = TensorOp(
        rhs.legs, {key: poly.filtered(low_order) for key, poly in rhs.entries.items()}
    )
    params = {
        "n": n,
        "k": k,
        "m": m,
        "order_checked": K,
        "kind": "orthogonal" if fam.t.sign == 1 else "symplectic",
    }
    return _compare("intertwiner", params, [("", lhs_cut, rhs_cut)], started)

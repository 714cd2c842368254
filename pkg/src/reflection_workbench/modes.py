"""Noncommutative mode algebra.

The series coefficients of the generator matrices live in a free
algebra.  This module expands matrix relations with series-valued
entries into exact relations among the mode generators, orients those
relations into a level-filtered rewrite system, computes normal forms,
and checks the twisted-solution substitution symbolically at low level.

Mode relations are always produced by the expander from the matrix
relations; no commutator formula is transcribed from anywhere else.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .kernel import LaurentPoly, format_rational, orthogonal_transposition
from .rmatrix import r_primes, yang_r
from .verify import CheckReport

FAMILIES = ("T", "S")


@dataclass(frozen=True)
class ModeGen:
    """One series coefficient: family letter, matrix entry, level."""

    family: str
    row: int
    col: int
    level: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        for index in (self.row, self.col):
            if not isinstance(index, int) or index < 1:
                raise ValueError(f"matrix indices must be positive integers, got {index!r}")
        if not isinstance(self.level, int) or self.level < 0:
            raise ValueError(f"level must be a nonnegative integer, got {self.level!r}")
        if self.family == "T" and self.level < 1:
            raise ValueError("the level-0 coefficient of family T is the unit, not a generator")

    def __str__(self):
        return f"{self.family}{self.level}[{self.row},{self.col}]"


def gen_key(gen):
    """The total generator order used for rewriting: level, then entry."""
    return (gen.level, gen.row, gen.col, gen.family)


def word_level(word):
    return sum(gen.level for gen in word)


def word_key(word):
    return (word_level(word), len(word), tuple(gen_key(gen) for gen in word))


class NCPoly:
    """Free-algebra element: finite words of generators with exact
    rational coefficients, stored verbatim (no implicit commutation)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, coeff in (terms or {}).items():
            word = tuple(word)
            if not all(isinstance(gen, ModeGen) for gen in word):
                raise ValueError(f"word {word} contains a non-generator")
            if not isinstance(coeff, (int, Fraction)):
                raise TypeError(f"coefficient must be rational, got {type(coeff).__name__}")
            coeff = Fraction(coeff)
            if not coeff:
                continue
            prev = clean.get(word)
            if prev is None:
                clean[word] = coeff
            else:
                total = prev + coeff
                if total:
                    clean[word] = total
                else:
                    del clean[word]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NCPoly is immutable")

    @staticmethod
    def zero():
        return NCPoly()

    @staticmethod
    def one():
        return NCPoly({(): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        merged = dict(self.terms)
        for word, coeff in other.terms.items():
            total = merged.get(word, Fraction(0)) + coeff
            if total:
                merged[word] = total
            else:
                merged.pop(word, None)
        return NCPoly(merged)

    def __neg__(self):
        return NCPoly({word: -coeff for word, coeff in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return NCPoly.zero()
            return NCPoly({word: coeff * other for word, coeff in self.terms.items()})
        if not isinstance(other, NCPoly):
            return NotImplemented
        acc = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                word = wa + wb
                total = acc.get(word, Fraction(0)) + ca * cb
                if total:
                    acc[word] = total
                else:
                    del acc[word]
        return NCPoly(acc)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def max_gen_level(self):
        return max((gen.level for word in self.terms for gen in word), default=0)

    def max_word_level(self):
        return max((word_level(word) for word in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for word in sorted(self.terms, key=word_key, reverse=True):
            coeff = self.terms[word]
            if word:
                body = "*".join(str(gen) for gen in word)
                if abs(coeff) != 1:
                    body = f"{format_rational(abs(coeff))}*{body}"
            else:
                body = format_rational(abs(coeff))
            pieces.append(("-" if coeff < 0 else "+", body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"NCPoly({self})"


def relations_to_text(relations):
    """Canonical text form for fixture diffing: one relation per line."""
    return "\n".join(str(p) for p in relations)


class NCSeries:
    """Expansion workhorse: words of generators with Laurent-polynomial
    coefficients in the spectral variables."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for word, poly in (terms or {}).items():
            word = tuple(word)
            if poly.is_zero():
                continue
            prev = clean.get(word)
            if prev is None:
                clean[word] = poly
            else:
                total = prev + poly
                if total.is_zero():
                    del clean[word]
                else:
                    clean[word] = total
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("NCSeries is immutable")

    @staticmethod
    def scalar(poly):
        return NCSeries({(): poly})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        merged = dict(self.terms)
        for word, poly in other.terms.items():
            if word in merged:
                merged[word] = merged[word] + poly
            else:
                merged[word] = poly
        return NCSeries(merged)

    def __sub__(self, other):
        return self + other.__neg__()

    def __neg__(self):
        return NCSeries({word: -poly for word, poly in self.terms.items()})

    def __mul__(self, other):
        acc = {}
        for wa, pa in self.terms.items():
            for wb, pb in other.terms.items():
                word = wa + wb
                product = pa * pb
                if word in acc:
                    acc[word] = acc[word] + product
                else:
                    acc[word] = product
        return NCSeries(acc)


def series_matrix(family, n, d, var="u", unit_constant=None):
    """The n x n matrix of truncated generator series.

    Family T entries are delta + sum_{k=1..d} var^(-k) gen(T,i,j,k); the
    level-0 coefficient of T is always the numeric unit.  Family S
    defaults to the free normalization sum_{k=0..d} var^(-k) gen(S,i,j,k)
    (level 0 included as a generator); unit_constant=True selects the
    alternate normalization with the numeric delta in place of the
    level-0 generators.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if d < 0:
        raise ValueError(f"series length must be >= 0, got {d}")
    if unit_constant is None:
        unit_constant = family == "T"
    if family == "T" and not unit_constant:
        raise ValueError("family T always carries the numeric unit constant")
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            terms = {}
            if unit_constant and i == j:
                terms[()] = LaurentPoly.const(1)
            start = 1 if unit_constant else 0
            for k in range(start, d + 1):
                terms[(ModeGen(family, i, j, k),)] = LaurentPoly.var(var, -k)
            row.append(NCSeries(terms))
        rows.append(tuple(row))
    return tuple(rows)


# -- matrix plumbing for the two-leg expansion -------------------------------


def _mat_mul_series(a, b):
    size = len(a)
    out = []
    for r in range(size):
        row = []
        for c in range(size):
            acc = NCSeries()
            for m in range(size):
                if a[r][m].is_zero() or b[m][c].is_zero():
                    continue
                acc = acc + a[r][m] * b[m][c]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _two_leg_scalar(op, n):
    """The n^2 x n^2 scalar matrix of a two-leg operator, row-major."""
    size = n * n
    rows = [[NCSeries() for _ in range(size)] for _ in range(size)]
    for (row, col), poly in op.entries.items():
        r = (row[0] - 1) * n + (row[1] - 1)
        c = (col[0] - 1) * n + (col[1] - 1)
        rows[r][c] = rows[r][c] + NCSeries.scalar(poly)
    return tuple(tuple(row) for row in rows)


def _on_first_leg(mat, n):
    size = n * n
    rows = [[NCSeries() for _ in range(size)] for _ in range(size)]
    for i in range(n):
        for j in range(n):
            for a in range(n):
                rows[i * n + a][j * n + a] = mat[i][j]
    return tuple(tuple(row) for row in rows)


def _on_second_leg(mat, n):
    size = n * n
    rows = [[NCSeries() for _ in range(size)] for _ in range(size)]
    for a in range(n):
        for b in range(n):
            for i in range(n):
                rows[i * n + a][i * n + b] = mat[a][b]
    return tuple(tuple(row) for row in rows)


def _collect_buckets(lhs, rhs, n):
    """Coefficient extraction: for every matrix entry ((i,a),(j,b)) and
    every u^(-alpha) v^(-beta) monomial, the NCPoly difference, keyed by
    (alpha, beta, i, a, j, b)."""
    size = n * n
    raw = {}
    for r in range(size):
        i, a = r // n + 1, r % n + 1
        for c in range(size):
            j, b = c // n + 1, c % n + 1
            entry = lhs[r][c] - rhs[r][c]
            for word, poly in entry.terms.items():
                for exps, coeff in poly.term_items():
                    alpha = -exps.get("u", 0)
                    beta = -exps.get("v", 0)
                    key = (alpha, beta, i, a, j, b)
                    acc = raw.setdefault(key, {})
                    acc[word] = acc.get(word, Fraction(0)) + coeff
    buckets = {}
    for key, terms in raw.items():
        p = NCPoly(terms)
        if not p.is_zero():
            buckets[key] = p
    return buckets


def _rtt_buckets(n, length, structure=None):
    """Indexed coefficients of R T1(u) T2(v) - T2(v) T1(u) R with series
    truncated at the given length.  The structure factor defaults to the
    Yang R-matrix; passing another two-leg operator is a testing hook."""
    r_mat = _two_leg_scalar(structure if structure is not None else yang_r(n), n)
    t1 = _on_first_leg(series_matrix("T", n, length, var="u"), n)
    t2 = _on_second_leg(series_matrix("T", n, length, var="v"), n)
    lhs = _mat_mul_series(_mat_mul_series(r_mat, t1), t2)
    rhs = _mat_mul_series(_mat_mul_series(t2, t1), r_mat)
    return _collect_buckets(lhs, rhs, n)


def _twisted_buckets(n, length, t):
    """Indexed coefficients of R S1 R' S2 - S2 R'' S1 R with the free
    level-0 normalization for the S series."""
    r_prime, r_double_prime = r_primes(n, t)
    r_mat = _two_leg_scalar(yang_r(n), n)
    rp_mat = _two_leg_scalar(r_prime, n)
    rpp_mat = _two_leg_scalar(r_double_prime, n)
    s1 = _on_first_leg(series_matrix("S", n, length, var="u"), n)
    s2 = _on_second_leg(series_matrix("S", n, length, var="v"), n)
    lhs = _mat_mul_series(_mat_mul_series(_mat_mul_series(r_mat, s1), rp_mat), s2)
    rhs = _mat_mul_series(_mat_mul_series(_mat_mul_series(s2, rpp_mat), s1), r_mat)
    return _collect_buckets(lhs, rhs, n)


def expand_relation(relation, n, d, t=None):
    """All mode relations of total generator level at most d.

    The series are expanded one step past what the relation's scalar
    degree requires (length d+1 for "rtt", d+2 for "twisted_re"), every
    u^a v^b coefficient of LHS - RHS is collected, and any relation
    mentioning a generator of level above d is discarded: the truncated
    series cannot see the complete constraint on those, while every kept
    coefficient is an exact consequence of the full relation.  The result
    is deduplicated and sorted by its text form.
    """
    if d < 1:
        raise ValueError(f"level cap must be >= 1, got {d}")
    if relation == "rtt":
        buckets = _rtt_buckets(n, d + 1)
    elif relation == "twisted_re":
        if t is None:
            t = orthogonal_transposition(n)
        buckets = _twisted_buckets(n, d + 2, t)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    seen = {}
    for key in sorted(buckets):
        p = buckets[key]
        if p.max_gen_level() > d:
            continue
        seen.setdefault(str(p), p)
    return [seen[text] for text in sorted(seen)]


class RewriteSystem:
    """Oriented swap rules keyed by out-of-order generator pairs.

    rules[(x, y)] with gen_key(x) > gen_key(y) is the full replacement of
    the word x*y: the swapped word y*x with coefficient one plus
    correction terms that drop in the (level, word length) measure.  Both
    properties are validated here, so an unorientable relation is
    rejected at construction instead of looping forever in normal_form.
    """

    __slots__ = ("rules", "level_cap")

    def __init__(self, rules, level_cap):
        checked = {}
        for (x, y), replacement in rules.items():
            if gen_key(x) <= gen_key(y):
                raise ValueError(f"rule key {x}*{y} is not an out-of-order pair")
            top = x.level + y.level
            if top > level_cap:
                raise ValueError(f"rule {x}*{y} exceeds the level cap {level_cap}")
            if replacement.terms.get((y, x)) != 1:
                raise ValueError(f"cannot orient the rule for {x}*{y}: swap term missing")
            for word in replacement.terms:
                if word == (y, x):
                    continue
                level = word_level(word)
                if level > top or (level == top and len(word) >= 2):
                    raise ValueError(
                        f"cannot orient the rule for {x}*{y}: "
                        f"correction word of level {level} does not drop"
                    )
            checked[(x, y)] = replacement
        object.__setattr__(self, "rules", checked)
        object.__setattr__(self, "level_cap", level_cap)

    def __setattr__(self, name, value):
        raise AttributeError("RewriteSystem is immutable")

    def __repr__(self):
        return f"RewriteSystem(rules={len(self.rules)}, level_cap={self.level_cap})"


def rules_to_text(rs):
    """Canonical text form of the rule set, one rule per line."""
    ordered = sorted(rs.rules, key=lambda pair: (gen_key(pair[0]), gen_key(pair[1])))
    return "\n".join(f"{x}*{y} -> {rs.rules[(x, y)]}" for x, y in ordered)


def derive_rules(relations, n, d):
    """Orient the level-d relation set into a rewrite system.

    For generators x at level lam and y at level mu with x above y, the
    telescoped sum of the expansion's coefficients at indices
    (r, lam+mu-1-r), entry ((x.row, y.row), (x.col, y.col)), over
    r = 0..lam-1 collapses the staircase of commutator differences into
    x*y - y*x - correction with every correction word of total level
    lam+mu-1.  The passed relations must be exactly the level-d
    expansion; the indexed coefficients are re-derived here because the
    flat relation list has forgotten which coefficient each came from.
    Rules exist for every out-of-order pair with level sum <= d+1, which
    a level-d relation set fully determines.
    """
    provided = [str(p) for p in relations]
    expected = [str(p) for p in expand_relation("rtt", n, d)]
    if provided != expected:
        raise ValueError(f"relations are not the level-{d} expansion for n={n}")
    buckets = _rtt_buckets(n, d + 1)
    gens = [
        ModeGen("T", i, j, level)
        for level in range(1, d + 1)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    ]
    rules = {}
    for x in gens:
        for y in gens:
            if gen_key(x) <= gen_key(y) or x.level + y.level > d + 1:
                continue
            telescoped = NCPoly.zero()
            for r in range(x.level):
                key = (r, x.level + y.level - 1 - r, x.row, y.row, x.col, y.col)
                part = buckets.get(key)
                if part is not None:
                    telescoped = telescoped + part
            rules[(x, y)] = NCPoly({(x, y): 1}) - telescoped
    return RewriteSystem(rules, d + 1)


def normal_form(p, rs):
    """Rewrite until no word contains an out-of-order adjacent pair.

    Each step swaps the first out-of-order pair of some word via its
    rule; corrections strictly drop in the (level, inversions) measure,
    so the loop terminates.  Words above the system's level cap are
    rejected up front, and a missing rule for an in-cap pair is an error
    (incomplete system) rather than a silent skip.
    """
    for word in p.terms:
        if word_level(word) > rs.level_cap:
            raise ValueError(
                f"word of total level {word_level(word)} exceeds the "
                f"rewrite level cap {rs.level_cap}"
            )
    acc = {}
    work = list(p.terms.items())
    while work:
        word, coeff = work.pop()
        pos = None
        for idx in range(len(word) - 1):
            if gen_key(word[idx]) > gen_key(word[idx + 1]):
                pos = idx
                break
        if pos is None:
            total = acc.get(word, Fraction(0)) + coeff
            if total:
                acc[word] = total
            else:
                acc.pop(word, None)
            continue
        pair = (word[pos], word[pos + 1])
        rule = rs.rules.get(pair)
        if rule is None:
            raise ValueError(
                f"missing rule for the pair {pair[0]}*{pair[1]} "
                f"(level cap {rs.level_cap})"
            )
        for rword, rcoeff in rule.terms.items():
            work.append((word[:pos] + rword + word[pos + 2 :], coeff * rcoeff))
    return NCPoly(acc)


def substitute_gens(p, image):
    """Replace every generator by its NCPoly image (a callable); words map
    to ordered products of the images."""
    result = NCPoly.zero()
    for word, coeff in p.terms.items():
        factor = NCPoly({(): coeff})
        for gen in word:
            factor = factor * image(gen)
        result = result + factor
    return result


def twisted_generator_images(n, d, t):
    """The substitution sending the S series to (t of T at -u) times T:
    level k of entry (i,j) maps to
    sum_{a+b=k} (-1)^a [g T_transposed^(a) g^(-1)]_{im} T^(b)_{mj}
    summed over m, with level 0 of T read as the numeric unit."""
    images = {}
    for k in range(d + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                acc = NCPoly.zero()
                for a in range(k + 1):
                    b = k - a
                    sign = Fraction(-1) ** a
                    for m in range(1, n + 1):
                        if a == 0:
                            if i != m:
                                continue
                            left = NCPoly.one()
                        else:
                            left_terms = {}
                            for p_ in range(1, n + 1):
                                for q_ in range(1, n + 1):
                                    value = t.g[i - 1][p_ - 1] * t.g_inv[q_ - 1][m - 1]
                                    if value:
                                        word = (ModeGen("T", q_, p_, a),)
                                        left_terms[word] = (
                                            left_terms.get(word, Fraction(0)) + value
                                        )
                            left = NCPoly(left_terms)
                        if b == 0:
                            if m != j:
                                continue
                            right = NCPoly.one()
                        else:
                            right = NCPoly({(ModeGen("T", m, j, b),): 1})
                        acc = acc + (left * right) * sign
                images[ModeGen("S", i, j, k)] = acc
    return images


def verify_twisted_embedding(n, d=2, t=None):
    """Substitute the twisted images into every twisted relation of level
    at most d and normal-form the result in the rewrite system derived
    from the level-(2d-1) expansion; every residue must vanish exactly.

    The substituted words carry total level up to 2d, so the rule set
    needs pairs with level sum up to 2d, which the level-(2d-1) relation
    set provides.
    """
    started = time.perf_counter()
    if d < 1:
        raise ValueError(f"level cap must be >= 1, got {d}")
    if t is None:
        t = orthogonal_transposition(n)
    relations = expand_relation("twisted_re", n, d, t)
    rules = derive_rules(expand_relation("rtt", n, 2 * d - 1), n, 2 * d - 1)
    images = twisted_generator_images(n, d, t)

    def image(gen):
        got = images.get(gen)
        if got is None:
            raise ValueError(f"no substitution image for generator {gen}")
        return got

    witness = None
    failures = 0
    for p in relations:
        residue = normal_form(substitute_gens(p, image), rules)
        if not residue.is_zero():
            failures += 1
            if witness is None:
                witness = {"relation": str(p), "residue": str(residue)}
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    params = {
        "n": n,
        "level": d,
        "kind": "orthogonal" if t.sign == 1 else "symplectic",
        "relations": len(relations),
    }
    return CheckReport("twisted_embedding", params, failures == 0, witness, elapsed_ms)

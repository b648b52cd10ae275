"""CSS subsystem codes and their desk-scale diagnostics.

A code is the six-tuple (H_X, H_Z, J_X, J_Z, F_X, F_Z) of check, logical
and gauge generator matrices over GF(2), satisfying

    ker H_X = rs H_Z ⊕ rs J_Z ⊕ rs F_Z,
    ker H_Z = rs H_X ⊕ rs J_X ⊕ rs F_X,
    J_X J_Z^T = E_k,   F_X F_Z^T = E_{k_g},
    k_g = n − rank H_X − rank H_Z − k.

The distance is d = min{d(H_X,J_X), d(H_Z,J_Z)} with d(H,J) the minimum
Hamming weight over ker H outside the stabiliser (J e^T ≠ 0).

Logical generators are produced in mutually standard form: after a
column permutation into blocks (shared pivots | H_X pivots | H_Z+F_Z
pivots) they read J_Z = (E_k | · | 0) and J_X = (E_k | 0 | ·).  Every
J_X row then has at most one nonzero inside the support of any Z
logical operator, which the glue-code weight bounds rely on.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .gf2 import (
    Gf2Matrix,
    in_row_space,
    inverse,
    kernel_basis,
    rank,
    rref,
    solve_left,
)


def repetition_check(n: int, truncated: bool = False) -> Gf2Matrix:
    """Staircase check matrix λ_n of the length-n repetition code.

    The truncated variant drops the last column, giving the
    (n−1)×(n−1) upper-bidiagonal matrix.
    """
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    full = Gf2Matrix([(1 << i) | (1 << (i + 1)) for i in range(n - 1)], n)
    if not truncated:
        return full
    return full.take_cols(range(n - 1))


@dataclass(frozen=True)
class SubsystemCode:
    hx: Gf2Matrix
    hz: Gf2Matrix
    jx: Gf2Matrix
    jz: Gf2Matrix
    fx: Gf2Matrix
    fz: Gf2Matrix
    distance: int | None = None
    name: str = ""

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def k(self) -> int:
        return self.jz.rows

    @property
    def k_gauge(self) -> int:
        return self.fz.rows

    def __repr__(self) -> str:
        d = self.distance if self.distance is not None else "?"
        return f"SubsystemCode([[{self.n},{self.k},{d}]], k_g={self.k_gauge})"

    def z_stabilizer_span(self) -> Gf2Matrix:
        """Stacked (H_Z; F_Z): the Z operators acting trivially on logicals."""
        return self.hz.vstack(self.fz)

    def x_stabilizer_span(self) -> Gf2Matrix:
        return self.hx.vstack(self.fx)


@dataclass(frozen=True)
class OperatorSet:
    """A set Σ of same-species logical operators, one bit-vector per row."""

    species: str  # "X" or "Z"
    vectors: Gf2Matrix

    def __post_init__(self):
        if self.species not in ("X", "Z"):
            raise ValueError("species must be 'X' or 'Z'")

    @property
    def size(self) -> int:
        return self.vectors.rows


def standard_logicals(hx: Gf2Matrix, hz_like: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix]:
    """Logical generator pair in mutually standard form.

    hz_like must span everything a bare X logical has to commute with
    (H_Z for a stabiliser code, (H_Z; F_Z) for a subsystem code).
    Returns (jx, jz) with jx @ jz^T = E_k, jz ⊆ ker hx, jx ⊆ ker hz_like.
    """
    n = hx.cols
    rx, px = rref(hx)
    px_set = set(px)
    # Pivot H_Z on the non-H_X-pivot columns first; full rank there is
    # guaranteed because a combination vanishing off the H_X pivots is zero.
    other = [c for c in range(n) if c not in px_set]
    col_order = other + sorted(px_set)
    rz_perm, pz_local = rref(hz_like.permute_cols(col_order))
    pz = sorted(col_order[c] for c in pz_local)
    if len(pz) != rank(hz_like):
        raise ValueError("hz reduction lost rank; hx and hz are incompatible")
    pz_set = set(pz)
    rest = [c for c in range(n) if c not in px_set and c not in pz_set]
    k = len(rest)
    # Re-reduce hz_like in natural column order but with pivots pinned to pz.
    rz = _rref_with_pivots(hz_like, pz)
    rx_rows = rref(hx)[0].bits[: len(px)]
    px_sorted = sorted(px)
    jz_rows = []
    jx_rows = []
    for j, c in enumerate(rest):
        vz = 1 << c
        for i, p in enumerate(px_sorted):
            if rx_rows[i] & (1 << c):
                vz |= 1 << p
        jz_rows.append(vz)
        vx = 1 << c
        for i, p in enumerate(pz):
            if rz[i] & (1 << c):
                vx |= 1 << p
        jx_rows.append(vx)
    jz = Gf2Matrix(jz_rows, n)
    jx = Gf2Matrix(jx_rows, n)
    return jx, jz


def _rref_with_pivots(m: Gf2Matrix, pivots: list[int]) -> list[int]:
    """Rows of m reduced so that row i has a lone 1 at column pivots[i]."""
    work = list(m.bits)
    out = []
    for c in pivots:
        mask = 1 << c
        p = next(i for i, w in enumerate(work) if w & mask)
        wr = work.pop(p)
        out.append(wr)
        work = [w ^ wr if w & mask else w for w in work]
    # eliminate pivot columns across the selected rows
    for i in range(len(out)):
        for jj in range(len(out)):
            if jj != i and out[jj] & (1 << pivots[i]):
                out[jj] ^= out[i]
    return out


def derive_css_logicals(hx: Gf2Matrix, hz: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix]:
    """(J_X, J_Z) for a gauge-free CSS pair, in mutually standard form."""
    if not hx.mul_transpose(hz).is_zero():
        raise ValueError("check matrices do not commute: hx @ hz^T != 0")
    return standard_logicals(hx, hz)


def css_code(hx: Gf2Matrix, hz: Gf2Matrix, name: str = "",
             distance: int | None = None) -> SubsystemCode:
    """Stabiliser CSS code (no gauge) with derived logical generators."""
    jx, jz = derive_css_logicals(hx, hz)
    n = hx.cols
    return SubsystemCode(
        hx=hx, hz=hz, jx=jx, jz=jz,
        fx=Gf2Matrix.zeros(0, n), fz=Gf2Matrix.zeros(0, n),
        distance=distance, name=name,
    )


def complete_gauge(hx: Gf2Matrix, hz: Gf2Matrix, jx: Gf2Matrix,
                   jz: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix]:
    """Gauge generators (F_X, F_Z) completing given checks and logicals.

    Output satisfies F_X F_Z^T = E, J_X F_Z^T = 0 and F_X J_Z^T = 0, so
    the logicals stay bare.
    """
    n = hx.cols
    kz = kernel_basis(hx)
    kx = kernel_basis(hz)
    fz0 = _quotient_completion(kz, hz.vstack(jz))
    fx0 = _quotient_completion(kx, hx.vstack(jx))
    if fz0.rows != fx0.rows:
        raise ValueError("gauge spaces have mismatched dimensions")
    if fz0.rows == 0:
        return Gf2Matrix.zeros(0, n), Gf2Matrix.zeros(0, n)
    # strip logical components so gauge ops commute with bare logicals
    fz1 = fz0.add(jx.mul_transpose(fz0).transpose().mul(jz))
    fx1 = fx0.add(fx0.mul_transpose(jz).mul(jx))
    m = fx1.mul_transpose(fz1)
    fx = inverse(m).mul(fx1)
    return fx, fz1


def _quotient_completion(space: Gf2Matrix, modulo: Gf2Matrix) -> Gf2Matrix:
    """Rows of `space` completing rs(modulo) to rs(space), in row order."""
    from .gf2 import RowReducer

    reducer = RowReducer()
    for row in modulo.bits:
        reducer.add(row)
    picked = [row for row in space.bits if reducer.add(row)]
    return Gf2Matrix(picked, space.cols)


def subsystem_code(hx: Gf2Matrix, hz: Gf2Matrix, jx: Gf2Matrix, jz: Gf2Matrix,
                   name: str = "", distance: int | None = None) -> SubsystemCode:
    """Subsystem code from checks and logicals, gauge derived by completion."""
    fx, fz = complete_gauge(hx, hz, jx, jz)
    return SubsystemCode(hx=hx, hz=hz, jx=jx, jz=jz, fx=fx, fz=fz,
                         distance=distance, name=name)


def hgp(h1: Gf2Matrix, h2: Gf2Matrix, name: str = "") -> SubsystemCode:
    """Hypergraph product of two classical check matrices.

    H_X = (H_1 ⊗ E_{n2} | E_{r1} ⊗ H_2^T),
    H_Z = (E_{n1} ⊗ H_2 | H_1^T ⊗ E_{r2}),
    on n = n1·n2 + r1·r2 qubits.
    """
    r1, n1 = h1.shape
    r2, n2 = h2.shape
    hx = h1.kron(Gf2Matrix.identity(n2)).hstack(
        Gf2Matrix.identity(r1).kron(h2.transpose())
    )
    hz = Gf2Matrix.identity(n1).kron(h2).hstack(
        h1.transpose().kron(Gf2Matrix.identity(r2))
    )
    return css_code(hx, hz, name=name or f"hgp({r1}x{n1},{r2}x{n2})")


def direct_sum(a: SubsystemCode, b: SubsystemCode, name: str = "") -> SubsystemCode:
    """Block-diagonal union of two codes on disjoint qubit sets."""

    def diag(m1: Gf2Matrix, m2: Gf2Matrix) -> Gf2Matrix:
        top = m1.hstack(Gf2Matrix.zeros(m1.rows, m2.cols))
        bot = Gf2Matrix.zeros(m2.rows, m1.cols).hstack(m2)
        return top.vstack(bot)

    return SubsystemCode(
        hx=diag(a.hx, b.hx), hz=diag(a.hz, b.hz),
        jx=diag(a.jx, b.jx), jz=diag(a.jz, b.jz),
        fx=diag(a.fx, b.fx), fz=diag(a.fz, b.fz),
        distance=None if a.distance is None or b.distance is None
        else min(a.distance, b.distance),
        name=name or f"{a.name}+{b.name}",
    )


# -- validation -------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class ValidationReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]


def validate_code(c: SubsystemCode) -> ValidationReport:
    """Check every subsystem-code axiom; failures carry a witness."""
    rep = ValidationReport()

    def add(name, passed, witness=""):
        rep.checks.append(AxiomCheck(name, passed, witness))

    prod = c.hx.mul_transpose(c.hz)
    wit = ""
    if not prod.is_zero():
        i = next(i for i, r in enumerate(prod.bits) if r)
        wit = f"hx row {i} anticommutes with hz row {prod.bits[i].bit_length() - 1}"
    add("hx @ hz^T = 0", prod.is_zero(), wit)

    add("k_g accounting", c.k_gauge == c.n - rank(c.hx) - rank(c.hz) - c.k,
        f"k_g={c.k_gauge}, n-rank(hx)-rank(hz)-k="
        f"{c.n - rank(c.hx) - rank(c.hz) - c.k}")

    for species, h, parts in (
        ("Z", c.hx, (c.hz, c.jz, c.fz)),
        ("X", c.hz, (c.hx, c.jx, c.fx)),
    ):
        stacked = parts[0].vstack(parts[1]).vstack(parts[2])
        dims_add = rank(stacked) == rank(parts[0]) + parts[1].rows + parts[2].rows
        inside = all(h.mul_transpose(p).is_zero() for p in parts)
        spans = rank(stacked) == kernel_basis(h).rows
        witness = ""
        if not (dims_add and inside and spans):
            witness = (f"rank(stack)={rank(stacked)}, "
                       f"expected {rank(parts[0]) + parts[1].rows + parts[2].rows}; "
                       f"dim ker={kernel_basis(h).rows}")
        add(f"ker decomposition ({species} side)", dims_add and inside and spans,
            witness)

    pj = c.jx.mul_transpose(c.jz)
    wit = ""
    if pj != Gf2Matrix.identity(c.k):
        bad = next(i for i in range(c.k)
                   if pj.bits[i] != Gf2Matrix.identity(c.k).bits[i])
        wit = f"jx row {bad} pairs as {pj.row_list(bad)}"
    add("jx @ jz^T = E_k", pj == Gf2Matrix.identity(c.k), wit)

    pf = c.fx.mul_transpose(c.fz)
    add("fx @ fz^T = E_kg", pf == Gf2Matrix.identity(c.k_gauge),
        "" if pf == Gf2Matrix.identity(c.k_gauge) else "gauge pairing broken")
    return rep


# -- distance ---------------------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    value: int | None
    exact: bool
    upper_bound: int | None = None
    note: str = ""
    searched_weight: int = 0  # weights fully exhausted by the search


def _species_distance(h: Gf2Matrix, j: Gf2Matrix, cap: int, budget: int):
    """min |e| with e in ker h, j e^T != 0, by weight-ordered enumeration.

    Returns (weight or None, vectors enumerated, exhausted_up_to).
    """
    n = h.cols
    hcols = [0] * n
    jcols = [0] * n
    for c in range(n):
        hcols[c] = sum(((h.bits[i] >> c) & 1) << i for i in range(h.rows))
        jcols[c] = sum(((j.bits[i] >> c) & 1) << i for i in range(j.rows))
    seen = 0
    for w in range(1, cap + 1):
        for combo in itertools.combinations(range(n), w):
            seen += 1
            if seen > budget:
                return None, seen, w - 1
            s = 0
            t = 0
            for c in combo:
                s ^= hcols[c]
                t ^= jcols[c]
            if s == 0 and t != 0:
                return w, seen, w
    return None, seen, cap


def _distance_upper_estimate(h: Gf2Matrix, j: Gf2Matrix, trials: int,
                             rng: random.Random) -> int | None:
    """Randomized information-set style upper bound (labelled estimate)."""
    gen = kernel_basis(h)
    if gen.rows == 0:
        return None
    best = None
    n = h.cols
    for _ in range(trials):
        perm = list(range(n))
        rng.shuffle(perm)
        red, piv = rref(gen.permute_cols(perm))
        for row in red.bits[: len(piv)]:
            # undo the permutation to evaluate the logical signature
            v = 0
            for newc in range(n):
                if (row >> newc) & 1:
                    v |= 1 << perm[newc]
            if j.mul_vec(v) != 0:
                w = row.bit_count()
                if best is None or w < best:
                    best = w
    return best


def exact_distance(c: SubsystemCode, cap: int = 6, budget: int = 10_000_000,
                   estimate_trials: int = 40, seed: int = 0) -> DistanceResult:
    """Exact distance by weight-ordered search, or Unknown with an estimate.

    For k = 0 there are no logical errors and the minimum is over an
    empty set: Unknown by convention, flagged in the note.
    """
    if c.k == 0:
        return DistanceResult(None, False, None, "k=0: no logical operators")
    best = None
    exhausted = cap
    spent = 0
    for h, j in ((c.hx, c.jx), (c.hz, c.jz)):
        w, seen, upto = _species_distance(h, j, cap, budget - spent)
        spent += seen
        exhausted = min(exhausted, upto)
        if w is not None and (best is None or w < best):
            best = w
    if best is not None and best <= exhausted:
        return DistanceResult(best, True, searched_weight=exhausted)
    rng = random.Random(seed)
    est = None
    for h, j in ((c.hx, c.jx), (c.hz, c.jz)):
        e = _distance_upper_estimate(h, j, estimate_trials, rng)
        if e is not None and (est is None or e < est):
            est = e
    if best is not None:
        est = best if est is None else min(est, best)
    return DistanceResult(
        None, False, est,
        f"search exhausted weight <= {exhausted} within budget; "
        "upper bound is a randomized estimate",
        searched_weight=exhausted,
    )


# -- overlap diagnostics ----------------------------------------------


def support_union(sigma: OperatorSet) -> tuple[int, ...]:
    """Sorted qubit indices (0-based) touched by at least one operator."""
    acc = 0
    for r in sigma.vectors.bits:
        acc |= r
    out = []
    while acc:
        low = acc & -acc
        out.append(low.bit_length() - 1)
        acc ^= low
    return tuple(out)


def crowd_numbers(sigma: OperatorSet) -> tuple[list[int], int]:
    """Per-qubit operator counts cn(Σ,u) and their maximum."""
    n = sigma.vectors.cols
    counts = [0] * n
    for r in sigma.vectors.bits:
        while r:
            low = r & -r
            counts[low.bit_length() - 1] += 1
            r ^= low
    return counts, max(counts, default=0)


def contained_logical_count(c: SubsystemCode, support: tuple[int, ...],
                            species: str = "Z") -> int:
    """k_N: independent logicals with a representative inside `support`.

    A logical τ is in the support iff some stabiliser+gauge dressing
    moves its representative inside; equivalently the restriction of
    τ's vector to the complement columns lies in the restricted
    stabiliser+gauge row space.  Solved by column restriction.
    """
    support_set = set(support)
    comp = [j for j in range(c.n) if j not in support_set]
    j = c.jz if species == "Z" else c.jx
    stab = c.z_stabilizer_span() if species == "Z" else c.x_stabilizer_span()
    if not comp:
        return j.rows
    jr = j.take_cols(comp)
    sr = stab.take_cols(comp)
    stacked = jr.vstack(sr)
    # x passes iff exists y with x@jr = y@sr, i.e. (x|y) in the left kernel
    left_null = kernel_basis(stacked.transpose())
    xpart = left_null.take_cols(range(j.rows)) if j.rows else Gf2Matrix.zeros(0, 0)
    return rank(xpart) if j.rows else 0


def redundancy_number(c: SubsystemCode, sigma: OperatorSet) -> int:
    """rn(Σ) = k_N − q for a set of Z-species logical representatives."""
    if sigma.species != "Z":
        raise ValueError("redundancy_number expects a Z-species operator set")
    for i in range(sigma.vectors.rows):
        if c.hx.mul_vec(sigma.vectors.bits[i]) != 0:
            raise ValueError(f"sigma row {i} is not in ker hx")
    stab = c.z_stabilizer_span()
    q = rank(sigma.vectors.vstack(stab)) - rank(stab)
    k_n = contained_logical_count(c, support_union(sigma))
    return k_n - q

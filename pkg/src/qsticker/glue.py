"""Glue-code synthesis for a target set of Z logical operators.

A glue code H_G couples an ancilla sticker to the memory through
pasting matrices S, T with H_X S^T = T H_G.  It is *coarsely devised*
for Σ when span(Σ) ⊆ (ker H_G)S, and *finely devised* when additionally
(ker H_G)S = span(Σ) plus a subspace of rs H_Z ⊕ rs F_Z, so a
measurement sticker acts on exactly ⟨Σ⟩ and nothing else.

Three constructions are provided:

* naked glue — the induced subgraph of the X-check Tanner graph on the
  support union B_N; always compatible and coarsely devised.
* dressing matrix D — extra checks that cancel the k_N − q unwanted
  logical classes living inside B_N; stacking (H_N; D) is finely
  devised.  D is normalized so that its rows are rows of J_{X,C}
  restricted to B_N, which caps its weight at (k_N − q)(q + 1) when the
  measured generators are brought to the (E_q | P) form.
* finely devised LDPC glue — bit/check duplications flatten the
  dressing rows until every vertex degree is at most
  max{w_max(H_X) + 1, 3}, preserving the projected codeword space.

All choices (pivoting, basis completion, duplication order) are
deterministic, so reruns are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .codes import OperatorSet, SubsystemCode, support_union
from .gf2 import (
    Canvas,
    Gf2Matrix,
    complete_basis,
    kernel_basis,
    rank,
    solve_left,
    standard_form,
    subspace_intersect,
)
from .tanner import TannerGraph, bit_duplication, check_duplication, matrix_from_graph


class GlueError(ValueError):
    """Violated precondition or internal inconsistency in glue synthesis."""


@dataclass(frozen=True)
class LogicalSplit:
    """Σ-adapted split of the logical generators.

    jza spans ⟨Σ⟩ (supports inside Q(Σ)); jzc spans the complement;
    jxa/jxc are the dual X generators.  Pairings: jxa jza^T = E_q,
    jxc jzc^T = E_{k−q}, cross products vanish.
    """

    jza: Gf2Matrix
    jzc: Gf2Matrix
    jxa: Gf2Matrix
    jxc: Gf2Matrix
    jbar: Gf2Matrix  # change-of-basis on the Z side, k x k, invertible
    pi2: tuple[int, ...]
    p_block: Gf2Matrix  # the P of (E_q | P), q x (k-q)

    @property
    def q(self) -> int:
        return self.jza.rows


def split_logicals(c: SubsystemCode, sigma: OperatorSet) -> LogicalSplit:
    """Split the logical generators around Σ, normalized to (E_q | P) form.

    Σ rows may be any logical representatives (stabiliser/gauge
    dressing allowed); their J_Z coefficients must be independent.  The
    returned jza rows are row combinations of the given Σ rows, so
    their supports stay inside Q(Σ).
    """
    if sigma.species != "Z":
        raise GlueError("split_logicals expects Z-species operators")
    q = sigma.vectors.rows
    k = c.k
    if q == 0 or q > k:
        raise GlueError(f"need 1 <= q <= k, got q={q}, k={k}")
    stab = c.z_stabilizer_span()
    coeff = solve_left(c.jz.vstack(stab), sigma.vectors)
    if coeff is None:
        raise GlueError("sigma rows are not Z logical representatives")
    x = coeff.take_cols(range(k))
    if rank(x) < q:
        raise GlueError("sigma rows are dependent modulo stabiliser+gauge")
    r, pi2, xs = standard_form(x)
    jza = r.mul(sigma.vectors)
    p_block = xs.take_cols(range(q, k))
    jbar_rows = list(r.mul(x).bits) + [1 << pi2[i] for i in range(q, k)]
    jbar = Gf2Matrix(jbar_rows, k)
    jzc = c.jz.take_rows(pi2[q:])
    jxa = c.jx.take_rows(pi2[:q])
    jxc_rows = []
    for i in range(k - q):
        acc = c.jx.bits[pi2[q + i]]
        for t in range(q):
            if p_block[t, i]:
                acc ^= c.jx.bits[pi2[t]]
        jxc_rows.append(acc)
    jxc = Gf2Matrix(jxc_rows, c.n)
    split = LogicalSplit(jza, jzc, jxa, jxc, jbar, pi2, p_block)
    _check_split(split, k)
    return split


def _check_split(s: LogicalSplit, k: int) -> None:
    q = s.q
    if s.jxa.mul_transpose(s.jza) != Gf2Matrix.identity(q):
        raise GlueError("split pairing jxa @ jza^T != E_q")
    if s.jxc.mul_transpose(s.jzc) != Gf2Matrix.identity(k - q):
        raise GlueError("split pairing jxc @ jzc^T != E_{k-q}")
    if not s.jxa.mul_transpose(s.jzc).is_zero() or not s.jxc.mul_transpose(s.jza).is_zero():
        raise GlueError("split cross pairings are nonzero")


@dataclass(frozen=True)
class GlueSpec:
    """A glue code with its pasting matrices and classification."""

    hg: Gf2Matrix  # r_G x n_G
    s: Gf2Matrix   # n_G x n
    t: Gf2Matrix   # r_X x r_G
    devisedness: str  # "none" | "coarse" | "fine"
    b_n: tuple[int, ...]  # memory qubits under the leading glue bits
    c_n: tuple[int, ...]  # memory X-check rows under the naked glue checks
    meta: dict = field(default_factory=dict)

    @property
    def n_g(self) -> int:
        return self.hg.cols

    @property
    def r_g(self) -> int:
        return self.hg.rows

    @property
    def s_norm(self) -> int:
        """|S|: the Hamming-weight-induced norm of v ↦ vS (max row weight)."""
        return self.s.max_row_weight()

    def weight_stats(self) -> dict:
        return {
            "n_g": self.n_g,
            "r_g": self.r_g,
            "wmax_hg": self.hg.wmax(),
            "wmax_s": self.s.wmax(),
            "wmax_t": self.t.wmax(),
            "s_norm": self.s_norm,
        }

    def to_report(self) -> dict:
        rep = {
            "schema": 1,
            "devisedness": self.devisedness,
            "b_n": list(self.b_n),
            "c_n": list(self.c_n),
            **self.weight_stats(),
        }
        rep.update({k: v for k, v in sorted(self.meta.items())})
        return rep


def check_compatibility(c: SubsystemCode, g: GlueSpec) -> bool:
    """The defining identity H_X S^T = T H_G."""
    return c.hx.mul_transpose(g.s) == g.t.mul(g.hg)


def naked_glue(c: SubsystemCode, sigma: OperatorSet) -> GlueSpec:
    """Induced-subgraph glue code on B_N = Q(Σ) (always coarsely devised).

    Bits are the support qubits, checks are every memory X-check
    adjacent to them, S embeds the glue bits at their memory positions
    and T selects the adjacent checks.
    """
    if sigma.size == 0:
        raise GlueError("naked_glue needs a nonempty operator set")
    b_n = support_union(sigma)
    mask = 0
    for j in b_n:
        mask |= 1 << j
    c_n = tuple(i for i in range(c.hx.rows) if c.hx.bits[i] & mask)
    hn = c.hx.take_rows(c_n).take_cols(b_n)
    s = Gf2Matrix([1 << j for j in b_n], c.n)
    t_canvas = Canvas(c.hx.rows, len(c_n))
    for j, row in enumerate(c_n):
        t_canvas.put(row, j, Gf2Matrix.identity(1))
    spec = GlueSpec(hg=hn, s=s, t=t_canvas.to_matrix(), devisedness="coarse",
                    b_n=b_n, c_n=c_n, meta={"kind": "naked", "n_n": len(b_n)})
    devis = classify_devisedness(spec, c, sigma)
    if devis == "none":
        raise GlueError("naked glue failed to be coarsely devised (bug)")
    return replace(spec, devisedness=devis)


def dressing_matrix(c: SubsystemCode, split: LogicalSplit,
                    naked: GlueSpec) -> Gf2Matrix:
    """Dressing matrix D with D G0^T = 0, D G1^T = 0, D G2^T = E.

    G0 spans the stabiliser+gauge part of ker H_N, G1 = J_{Z,A} S^T the
    measured part, and G2 a completion whose images under S lie in
    rs J_{Z,C} ⊕ rs H_Z ⊕ rs F_Z.  Rows of D are rows of J_{X,C}
    restricted to B_N, selected through the standard form of U.
    """
    hn, s_n = naked.hg, naked.s
    ker_hn = kernel_basis(hn)
    ker_s = ker_hn.mul(s_n)
    stab = c.z_stabilizer_span()
    u_basis = subspace_intersect(ker_s, stab)
    g0 = u_basis.mul(s_n.transpose())
    g1 = split.jza.mul(s_n.transpose())
    w0 = complete_basis(g0.vstack(g1), ker_hn)
    if w0.rows == 0:
        return Gf2Matrix.zeros(0, naked.n_g)
    q = split.q
    full = split.jza.vstack(split.jzc).vstack(stab)
    coeff = solve_left(full, w0.mul(s_n))
    if coeff is None:
        raise GlueError("basis completion left ker H_X (impossible)")
    alpha = coeff.take_cols(range(q))
    w = w0.add(alpha.mul(g1))
    rest = split.jzc.vstack(stab)
    coeff2 = solve_left(rest, w.mul(s_n))
    if coeff2 is None:
        raise GlueError("projected completion violates the w_j constraint (impossible)")
    u_mat = coeff2.take_cols(range(split.jzc.rows))
    try:
        r3, pi3, _ = standard_form(u_mat)
    except ValueError as exc:
        raise GlueError("U is row-rank-deficient (violated precondition)") from exc
    g2 = r3.mul(w)
    jxc_restricted = split.jxc.mul(s_n.transpose())
    d = jxc_restricted.take_rows(pi3[: g2.rows])
    if not d.mul_transpose(g0).is_zero() or not d.mul_transpose(g1).is_zero():
        raise GlueError("dressing products D G0^T / D G1^T are nonzero (bug)")
    if d.mul_transpose(g2) != Gf2Matrix.identity(d.rows):
        raise GlueError("dressing product D G2^T != E (bug)")
    return d


def finely_devised_glue(c: SubsystemCode, sigma: OperatorSet,
                        split: LogicalSplit | None = None) -> GlueSpec:
    """Finely devised LDPC glue code for Σ.

    Stacks the dressing rows onto the naked glue, then flattens every
    heavy vertex by duplications: each original bit keeps at most one
    non-naked neighbour, each dressing check ends with at most one
    neighbour; new vertices have degree 2 or 3.  The projected codeword
    space (ker H_G)S is unchanged, so fineness is preserved, and
    w_max(H_G) <= max{w_max(H_X)+1, 3}.
    """
    if split is None:
        split = split_logicals(c, sigma)
    naked = naked_glue(c, sigma)
    d = dressing_matrix(c, split, naked)
    rn = d.rows
    q = split.q
    meta = {
        "kind": "fine",
        "n_n": naked.n_g,
        "q": q,
        "k_n": q + rn,
        "rn": rn,
        "bound_n_g": naked.n_g + 2 * rn * (q + 1),
        "bound_r_g": c.hx.wmax() * naked.n_g + 2 * rn * (q + 1),
        "bound_wmax_hg": max(c.hx.wmax() + 1, 3),
    }
    if rn == 0:
        spec = GlueSpec(hg=naked.hg, s=naked.s, t=naked.t, devisedness="fine",
                        b_n=naked.b_n, c_n=naked.c_n, meta=meta)
        if classify_devisedness(spec, c, sigma) != "fine":
            raise GlueError("rn=0 naked glue not fine (bug)")
        return spec

    n_n, r_n = naked.n_g, naked.r_g
    edges = set()
    for i in range(r_n):
        row = naked.hg.bits[i]
        while row:
            low = row & -row
            edges.add((low.bit_length() - 1, i))
            row ^= low
    for i in range(rn):
        row = d.bits[i]
        while row:
            low = row & -row
            edges.add((low.bit_length() - 1, r_n + i))
            row ^= low
    graph = TannerGraph(tuple(range(n_n)), tuple(range(r_n + rn)), frozenset(edges))
    naked_neighbors = {u: set(a for (b, a) in edges if b == u and a < r_n)
                       for u in range(n_n)}
    # bit pass: each original bit keeps at most one non-naked neighbour
    for u in range(n_n):
        while True:
            extra = sorted(a for a in graph.bit_neighbors(u)
                           if a not in naked_neighbors[u])
            if len(extra) <= 1:
                break
            graph = bit_duplication(graph, u, extra[:2])
    # check pass: flatten every dressing check to a single neighbour
    for a in range(r_n, r_n + rn):
        while True:
            nbrs = sorted(graph.check_neighbors(a))
            if len(nbrs) <= 1:
                break
            graph = check_duplication(graph, a, nbrs[:2])
    hg = matrix_from_graph(graph)
    added_bits = hg.cols - n_n
    s = naked.s.vstack(Gf2Matrix.zeros(added_bits, c.n))
    t_canvas = Canvas(c.hx.rows, hg.rows)
    for j, row in enumerate(naked.c_n):
        t_canvas.put(row, j, Gf2Matrix.identity(1))
    spec = GlueSpec(hg=hg, s=s, t=t_canvas.to_matrix(), devisedness="fine",
                    b_n=naked.b_n, c_n=naked.c_n, meta=meta)
    if classify_devisedness(spec, c, sigma) != "fine":
        raise GlueError("LDPC glue classification is not fine (bug)")
    return spec


def classify_devisedness(g: GlueSpec, c: SubsystemCode,
                         sigma: OperatorSet) -> str:
    """Classification by exact linear algebra.

    coarse: span(Σ) ⊆ (ker H_G)S.  fine: additionally every projected
    glue codeword decomposes over span(Σ) ⊕ (rs H_Z ⊕ rs F_Z).
    """
    if not check_compatibility(c, g):
        raise GlueError("glue code is not compatible with the memory")
    ks = kernel_basis(g.hg).mul(g.s)
    if solve_left(ks, sigma.vectors) is None:
        return "none"
    stab = c.z_stabilizer_span()
    if solve_left(sigma.vectors.vstack(stab), ks) is None:
        return "coarse"
    return "fine"


def glue_codewords_for(g: GlueSpec, vectors: Gf2Matrix) -> Gf2Matrix:
    """J_G with J_G S = vectors and rs J_G ⊆ ker H_G.

    Exists whenever the glue code is (at least coarsely) devised for
    the given rows.
    """
    kern = kernel_basis(g.hg)
    coeff = solve_left(kern.mul(g.s), vectors)
    if coeff is None:
        raise GlueError("vectors are not transferred by this glue code")
    return coeff.mul(kern)

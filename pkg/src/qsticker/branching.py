"""Brute-force branching plans and qubit-cost accounting.

Branching separates q overlapping logical operators through
ceil(log2 q) levels of branch stickers: a subset of size >= 2 splits
into two halves, each half gets a branch sticker pasted on the previous
level's open boundary, and once every path carries a single operator a
measurement sticker is pasted on its final open boundary.

Assembly is sequential (each paste turns the deformed code into the new
memory).  Cost estimation avoids full assembly: a transferred
representative on an open boundary is the parent glue codeword
restricted to the support, and the X-checks adjacent to the boundary
block are exactly the parent glue checks, so sticker sizes follow from
a recursion on induced subgraphs of check matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .codes import OperatorSet, SubsystemCode, support_union
from .gf2 import Gf2Matrix, solve_left
from .glue import (
    GlueError,
    finely_devised_glue,
    glue_codewords_for,
    naked_glue,
    split_logicals,
)
from .stickers import DeformedCode, paste_branch, paste_measurement


@dataclass(frozen=True)
class BranchNode:
    node_id: int
    level: int
    parent: int | None  # None = pasted on the memory itself
    ops: tuple[int, ...]
    d_r: int = 2


@dataclass(frozen=True)
class BranchTree:
    q: int
    levels: int
    nodes: tuple[BranchNode, ...]  # level order, then id order
    measure_d_r: int

    def leaf_nodes(self) -> list[BranchNode]:
        """The singleton nodes where measurement stickers attach."""
        return [n for n in self.nodes if len(n.ops) == 1]

    def level_nodes(self, level: int) -> list[BranchNode]:
        return [n for n in self.nodes if n.level == level]


def plan_branching(c: SubsystemCode, sigma: OperatorSet,
                   measure_d_r: int | None = None) -> BranchTree:
    """Binary split tree over the operator indices (branch d_r fixed to 2).

    Subsets of size >= 2 split ceil/floor at the next level; both
    children get branch stickers even when singleton.  Already-singleton
    subsets ride along unsplit.  Leaf measurement stickers use the
    memory distance when known.
    """
    q = sigma.size
    if q < 2:
        raise GlueError("branching needs q >= 2; use devised sticking directly")
    if measure_d_r is None:
        measure_d_r = c.distance if c.distance is not None else 2
    nodes: list[BranchNode] = []
    next_id = 0
    frontier: list[tuple[int | None, tuple[int, ...]]] = [(None, tuple(range(q)))]
    level = 0
    while any(len(ops) >= 2 for (_, ops) in frontier):
        level += 1
        new_frontier: list[tuple[int | None, tuple[int, ...]]] = []
        for parent, ops in frontier:
            if len(ops) < 2:
                new_frontier.append((parent, ops))
                continue
            half = (len(ops) + 1) // 2
            for part in (ops[:half], ops[half:]):
                node = BranchNode(node_id=next_id, level=level,
                                  parent=parent, ops=part)
                nodes.append(node)
                next_id += 1
                new_frontier.append((node.node_id, part))
        frontier = new_frontier
    tree = BranchTree(q=q, levels=level, nodes=tuple(nodes),
                      measure_d_r=measure_d_r)
    assert tree.levels == math.ceil(math.log2(q))
    assert len(tree.leaf_nodes()) == q
    return tree


@dataclass
class AssembledPlan:
    final: DeformedCode
    pastes: list[DeformedCode]
    rep_history: dict[int, list[Gf2Matrix]]
    incidence: dict[int, int]  # level -> max stickers touching one qubit
    leaf_level: int

    @property
    def final_code(self) -> SubsystemCode:
        return self.final.code


def assemble_plan(c: SubsystemCode, sigma: OperatorSet,
                  tree: BranchTree | None = None) -> AssembledPlan:
    """Paste the whole tree sequentially and then measure every leaf.

    Tracks a representative of each operator through the transfers
    (padded old representative plus the glue codeword on the open
    boundary differs from it by a deformed-code stabiliser).
    """
    if tree is None:
        tree = plan_branching(c, sigma)
    current = c
    reps: dict[int, int] = {i: sigma.vectors.bits[i] for i in range(sigma.size)}
    pastes: list[DeformedCode] = []
    rep_history: dict[int, list[Gf2Matrix]] = {i: [] for i in reps}
    incidence_sets: dict[int, list[tuple[int, ...]]] = {}

    for node in tree.nodes:
        rows = Gf2Matrix([reps[i] for i in node.ops], current.n)
        node_sigma = OperatorSet("Z", rows)
        split = split_logicals(current, node_sigma)
        glue = naked_glue(current, node_sigma)
        incidence_sets.setdefault(node.level, []).append(glue.b_n)
        dc = paste_branch(current, split, glue, node.d_r)
        pastes.append(dc)
        # per-operator transfer: sigma = coeff @ jza exactly, so the new
        # representative is the matching combination of glue codewords
        coeff = solve_left(split.jza, rows)
        if coeff is None:
            raise GlueError("representative lost jza span (bug)")
        transferred = coeff.mul(dc.j_g)
        lo, _ = dc.ob_range
        for pos, i in enumerate(node.ops):
            reps[i] = transferred.bits[pos] << lo
            rep_history[i].append(Gf2Matrix([reps[i]], dc.n))
        current = dc.code
        # representatives of other operators keep their (padded) indices
    leaf_level = tree.levels + 1
    for i in range(sigma.size):
        rows = Gf2Matrix([reps[i]], current.n)
        leaf_sigma = OperatorSet("Z", rows)
        split = split_logicals(current, leaf_sigma)
        glue = finely_devised_glue(current, leaf_sigma, split=split)
        incidence_sets.setdefault(leaf_level, []).append(glue.b_n)
        dc = paste_measurement(current, split, glue, tree.measure_d_r)
        pastes.append(dc)
        current = dc.code

    incidence: dict[int, int] = {}
    for level, sets in incidence_sets.items():
        counts: dict[int, int] = {}
        for b_n in sets:
            for qubit in b_n:
                counts[qubit] = counts.get(qubit, 0) + 1
        incidence[level] = max(counts.values(), default=0)
    return AssembledPlan(final=pastes[-1], pastes=pastes,
                         rep_history=rep_history, incidence=incidence,
                         leaf_level=leaf_level)


# -- qubit-cost accounting ---------------------------------------------


@dataclass
class CostReport:
    scheme: str  # "ds" | "bfb"
    q: int
    thickness: int
    d_r: int
    measured_total: int
    per_level: list[int] = field(default_factory=list)
    bounds: dict = field(default_factory=dict)

    def to_report(self) -> dict:
        return {
            "schema": 1,
            "scheme": self.scheme,
            "q": self.q,
            "t": self.thickness,
            "d_r": self.d_r,
            "measured_total": self.measured_total,
            "per_level": list(self.per_level),
            "bounds": {k: v for k, v in sorted(self.bounds.items())},
        }


def _induced_glue_sizes(h: Gf2Matrix, support_mask: int) -> tuple[Gf2Matrix, list[int], int]:
    """Induced subgraph of a check matrix on a bit support.

    Returns (induced matrix, bit columns, check count).
    """
    cols = []
    m = support_mask
    while m:
        low = m & -m
        cols.append(low.bit_length() - 1)
        m ^= low
    rows = [i for i in range(h.rows) if h.bits[i] & support_mask]
    induced = h.take_rows(rows).take_cols(cols)
    return induced, cols, len(rows)


def _bfb_sizes(h: Gf2Matrix, reps: list[int], level: int, d_meas: int,
               per_level: dict[int, int]) -> int:
    """Recursive brute-force-branching cost on induced glue graphs."""
    support = 0
    for r in reps:
        support |= r
    induced, cols, r_g = _induced_glue_sizes(h, support)
    n_g = len(cols)
    branch_qubits = n_g + r_g  # d_R = 2: (d_R-1)(n_G + r_G)
    per_level[level] = per_level.get(level, 0) + branch_qubits
    total = branch_qubits
    if len(reps) >= 2:
        restricted = [sum(((r >> c) & 1) << j for j, c in enumerate(cols))
                      for r in reps]
        half = (len(reps) + 1) // 2
        for part in (restricted[:half], restricted[half:]):
            total += _bfb_sizes(induced, part, level + 1, d_meas, per_level)
    else:
        # leaf measurement sticker on this node's open boundary: the
        # transferred codeword covers the whole induced glue graph
        meas = (d_meas - 1) * n_g + d_meas * r_g
        per_level[level + 1] = per_level.get(level + 1, 0) + meas
        total += meas
    return total


def _logical_support_sizes(c: SubsystemCode, sigma: OperatorSet) -> list[int]:
    """Per-operator count of logical qubits acted on (for the L constant)."""
    coeff = solve_left(c.jz.vstack(c.z_stabilizer_span()), sigma.vectors)
    if coeff is None:
        raise GlueError("sigma rows are not logical representatives")
    kmask = (1 << c.k) - 1
    return [(coeff.bits[i] & kmask).bit_count() for i in range(sigma.size)]


def estimate_qubit_cost(c: SubsystemCode, sigma: OperatorSet, scheme: str,
                        thickness: int | None = None,
                        d_r: int | None = None) -> CostReport:
    """Sticker-qubit totals for devised sticking or brute-force branching.

    ds: one measurement sticker from the fine glue with repetition
    length d_r (= memory distance by default).  bfb: branch stickers at
    d_R = 2 plus one measurement sticker per separated operator, sizes
    from naked glue codes per the cost-model accounting.
    """
    if scheme not in ("ds", "bfb"):
        raise ValueError("scheme must be 'ds' or 'bfb'")
    if d_r is None:
        d_r = c.distance
    if d_r is None:
        raise ValueError("d_r is required when the memory distance is unknown")
    q = sigma.size
    t = thickness if thickness is not None else q
    n_n = len(support_union(sigma))
    l_sizes = _logical_support_sizes(c, sigma)
    l_max = max(l_sizes, default=0)
    if scheme == "ds":
        fine = finely_devised_glue(c, sigma)
        measured = (d_r - 1) * fine.n_g + d_r * fine.r_g
        bounds = {
            "formula": "O(n_N d q)",
            "n_n": n_n,
            "bound_value": n_n * d_r * max(q, 1),
            "thickness_bound_value": n_n * d_r * max(t, 1),
            "measured_over_bound": measured / max(n_n * d_r * max(q, 1), 1),
            "rn": fine.meta.get("rn", 0),
        }
        return CostReport(scheme="ds", q=q, thickness=t, d_r=d_r,
                          measured_total=measured, per_level=[measured],
                          bounds=bounds)
    if q < 2:
        raise GlueError("bfb cost needs q >= 2")
    per_level: dict[int, int] = {}
    reps = list(sigma.vectors.bits)
    half = (q + 1) // 2
    total = 0
    for part in (reps[:half], reps[half:]):
        total += _bfb_sizes(c.hx, part, 1, d_r, per_level)
    log_q = max(math.ceil(math.log2(q)), 1)
    bound_value = max(l_max, 1) * d_r * q * (d_r + log_q)
    bounds = {
        "formula": "O(L d q (d + log q))",
        "n_n": n_n,
        "l_max": l_max,
        "bound_value": bound_value,
        "measured_over_bound": total / max(bound_value, 1),
    }
    levels = sorted(per_level)
    return CostReport(scheme="bfb", q=q, thickness=t, d_r=d_r,
                      measured_total=total,
                      per_level=[per_level[l] for l in levels],
                      bounds=bounds)

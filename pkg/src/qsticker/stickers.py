"""Stickers, deformed codes, and the generalized-lattice-surgery checks.

A sticker is the hypergraph product of a glue code H_G with a length-d_R
repetition code (measurement kind) or its truncated variant (branch
kind); the branch forms equal the measurement forms with the last block
column of H_X and the last block column and row of H_Z deleted.

Pasting a sticker onto the memory replaces the first repetition slot by
the memory itself: S enters the first sticker Z-check block row and T
couples the memory X-checks to the first check-derived qubit block.
Qubit layout of a deformed code:

    [ memory (n) | u_1 .. u_{d_R-1} (n_G each) | v_1 .. v_dR (r_G each) ]

with the v-block count d_R for measurement and d_R−1 for branch
stickers; the open boundary of a branch sticker is the last u block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codes import (
    DistanceResult,
    OperatorSet,
    SubsystemCode,
    exact_distance,
    repetition_check,
    subsystem_code,
)
from .gf2 import Canvas, Gf2Matrix, solve_left
from .glue import GlueError, GlueSpec, LogicalSplit, glue_codewords_for


@dataclass(frozen=True)
class Sticker:
    kind: str  # "measurement" | "branch"
    glue: GlueSpec
    d_r: int
    hx_s: Gf2Matrix
    hz_s: Gf2Matrix

    @property
    def qubits(self) -> int:
        return self.hx_s.cols


def build_sticker(glue: GlueSpec, d_r: int, kind: str) -> Sticker:
    """Hypergraph-product sticker of the glue code and a repetition code."""
    if d_r < 2:
        raise ValueError("sticker length d_r must be at least 2")
    if kind not in ("measurement", "branch"):
        raise ValueError("kind must be 'measurement' or 'branch'")
    hg = glue.hg
    n_g, r_g = glue.n_g, glue.r_g
    lam = repetition_check(d_r)
    if kind == "measurement":
        hx = Gf2Matrix.identity(d_r - 1).kron(hg).hstack(
            lam.kron(Gf2Matrix.identity(r_g)))
        hz = lam.transpose().kron(Gf2Matrix.identity(n_g)).hstack(
            Gf2Matrix.identity(d_r).kron(hg.transpose()))
    else:
        lam_t = repetition_check(d_r, truncated=True)
        hx = Gf2Matrix.identity(d_r - 1).kron(hg).hstack(
            lam_t.kron(Gf2Matrix.identity(r_g)))
        hz = lam_t.transpose().kron(Gf2Matrix.identity(n_g)).hstack(
            Gf2Matrix.identity(d_r - 1).kron(hg.transpose()))
    return Sticker(kind=kind, glue=glue, d_r=d_r, hx_s=hx, hz_s=hz)


@dataclass(frozen=True)
class DeformedCode:
    """Memory + sticker composite with its logical generators."""

    code: SubsystemCode
    kind: str
    memory: SubsystemCode
    split: LogicalSplit
    glue: GlueSpec
    d_r: int
    d_t: int  # lattice-surgery schedule metadata, no simulation attached
    mem_qubits: int
    ob_range: tuple[int, int] | None  # open boundary block, branch only
    gamma: Gf2Matrix | None  # solves J_{X,C} S^T = gamma H_G, measurement only
    j_g: Gf2Matrix  # glue codewords with J_G S = J_{Z,A}
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    def p_mem(self) -> Gf2Matrix:
        """Row selector for the memory block: P with P^T P the projection."""
        return Gf2Matrix([1 << j for j in range(self.mem_qubits)], self.n)

    def p_ob(self) -> Gf2Matrix:
        if self.ob_range is None:
            raise ValueError("open boundary only exists for branch stickers")
        lo, hi = self.ob_range
        return Gf2Matrix([1 << j for j in range(lo, hi)], self.n)

    def pad_memory_rows(self, m: Gf2Matrix) -> Gf2Matrix:
        """Memory-space rows embedded into the deformed qubit space."""
        return m.hstack(Gf2Matrix.zeros(m.rows, self.n - self.mem_qubits))


def _assemble_deformed(c: SubsystemCode, glue: GlueSpec, d_r: int,
                       kind: str) -> tuple[Gf2Matrix, Gf2Matrix]:
    n, n_g, r_g = c.n, glue.n_g, glue.r_g
    v_blocks = d_r if kind == "measurement" else d_r - 1
    total = n + (d_r - 1) * n_g + v_blocks * r_g

    def u_off(j):  # u_j, 1-based
        return n + (j - 1) * n_g

    def v_off(i):  # v_i, 1-based
        return n + (d_r - 1) * n_g + (i - 1) * r_g

    e_rg = Gf2Matrix.identity(r_g)
    e_ng = Gf2Matrix.identity(n_g)
    hgt = glue.hg.transpose()

    hx_canvas = Canvas(c.hx.rows + (d_r - 1) * r_g, total)
    hx_canvas.put(0, 0, c.hx)
    hx_canvas.put(0, v_off(1), glue.t)
    for j in range(1, d_r):
        r0 = c.hx.rows + (j - 1) * r_g
        hx_canvas.put(r0, u_off(j), glue.hg)
        hx_canvas.put(r0, v_off(j), e_rg)
        if j + 1 <= v_blocks:
            hx_canvas.put(r0, v_off(j + 1), e_rg)

    z_blocks = d_r if kind == "measurement" else d_r - 1
    hz_canvas = Canvas(c.hz.rows + z_blocks * n_g, total)
    hz_canvas.put(0, 0, c.hz)
    for i in range(1, z_blocks + 1):
        r0 = c.hz.rows + (i - 1) * n_g
        if i == 1:
            hz_canvas.put(r0, 0, glue.s)
        else:
            hz_canvas.put(r0, u_off(i - 1), e_ng)
        if i <= d_r - 1:
            hz_canvas.put(r0, u_off(i), e_ng)
        hz_canvas.put(r0, v_off(i), hgt)
    return hx_canvas.to_matrix(), hz_canvas.to_matrix()


def paste_measurement(c: SubsystemCode, split: LogicalSplit, glue: GlueSpec,
                      d_r: int, name: str = "") -> DeformedCode:
    """Deformed code measuring ⟨Σ⟩: k drops to k − q.

    Requires a finely devised glue code; γ solving J_{X,C} S^T = γ H_G
    exists exactly then and completes the surviving X logicals.
    """
    if d_r < 2:
        raise ValueError("d_r must be at least 2")
    if glue.devisedness != "fine":
        raise GlueError("measurement paste needs a finely devised glue code")
    hx, hz = _assemble_deformed(c, glue, d_r, "measurement")
    n, n_g, r_g = c.n, glue.n_g, glue.r_g
    total = hx.cols
    gamma = solve_left(glue.hg, split.jxc.mul(glue.s.transpose()))
    if gamma is None:
        raise GlueError("gamma unsolvable: glue code is not fine (classifier bug)")
    k_new = split.jxc.rows
    jx_canvas = Canvas(k_new, total)
    jx_canvas.put(0, 0, split.jxc)
    jxc_s = split.jxc.mul(glue.s.transpose())
    for j in range(1, d_r):
        jx_canvas.put(0, n + (j - 1) * n_g, jxc_s)
    jx_canvas.put(0, n + (d_r - 1) * n_g + (d_r - 1) * r_g, gamma)
    jz = split.jzc.hstack(Gf2Matrix.zeros(k_new, total - n))
    code = subsystem_code(hx, hz, jx_canvas.to_matrix(), jz,
                          name=name or f"{c.name}+meas")
    j_g = glue_codewords_for(glue, split.jza)
    dc = DeformedCode(
        code=code, kind="measurement", memory=c, split=split, glue=glue,
        d_r=d_r, d_t=c.distance if c.distance is not None else d_r,
        mem_qubits=n, ob_range=None, gamma=gamma, j_g=j_g,
        provenance={"memory": c.name, "sticker": "measurement",
                    "q": split.q, "d_r": d_r},
    )
    _assert_validity(dc)
    return dc


def paste_branch(c: SubsystemCode, split: LogicalSplit, glue: GlueSpec,
                 d_r: int, name: str = "") -> DeformedCode:
    """Deformed code transferring ⟨Σ⟩ to the open boundary: k is preserved."""
    if d_r < 2:
        raise ValueError("d_r must be at least 2")
    if glue.devisedness not in ("coarse", "fine"):
        raise GlueError("branch paste needs an at least coarsely devised glue code")
    hx, hz = _assemble_deformed(c, glue, d_r, "branch")
    n, n_g = c.n, glue.n_g
    total = hx.cols
    jxa_s = split.jxa.mul(glue.s.transpose())
    jxc_s = split.jxc.mul(glue.s.transpose())
    jx_canvas = Canvas(c.k, total)
    jx_canvas.put(0, 0, split.jxa)
    jx_canvas.put(split.q, 0, split.jxc)
    for j in range(1, d_r):
        jx_canvas.put(0, n + (j - 1) * n_g, jxa_s)
        jx_canvas.put(split.q, n + (j - 1) * n_g, jxc_s)
    jz = split.jza.vstack(split.jzc).hstack(Gf2Matrix.zeros(c.k, total - n))
    code = subsystem_code(hx, hz, jx_canvas.to_matrix(), jz,
                          name=name or f"{c.name}+branch")
    ob_lo = n + (d_r - 2) * n_g
    j_g = glue_codewords_for(glue, split.jza)
    dc = DeformedCode(
        code=code, kind="branch", memory=c, split=split, glue=glue,
        d_r=d_r, d_t=c.distance if c.distance is not None else d_r,
        mem_qubits=n, ob_range=(ob_lo, ob_lo + n_g), gamma=None, j_g=j_g,
        provenance={"memory": c.name, "sticker": "branch",
                    "q": split.q, "d_r": d_r},
    )
    _assert_validity(dc)
    return dc


def _assert_validity(dc: DeformedCode) -> None:
    code = dc.code
    if not code.hx.mul_transpose(code.hz).is_zero():
        raise GlueError("deformed checks do not commute")
    if not code.hx.mul_transpose(code.jz).is_zero():
        raise GlueError("deformed hx does not annihilate jz")
    if not code.hz.mul_transpose(code.jx).is_zero():
        raise GlueError("deformed hz does not annihilate jx")
    if code.jx.mul_transpose(code.jz) != Gf2Matrix.identity(code.k):
        raise GlueError("deformed logical pairing is not the identity")


# -- generalized-lattice-surgery statement suite ------------------------


@dataclass
class StatementResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class GlsReport:
    kind: str
    statements: list[StatementResult] = field(default_factory=list)
    distance: DistanceResult | None = None

    @property
    def ok(self) -> bool:
        return all(s.status != "fail" for s in self.statements)

    def to_report(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "ok": self.ok,
            "statements": [
                {"name": s.name, "status": s.status, "detail": s.detail}
                for s in self.statements
            ],
        }


def _rows_in_span(span: Gf2Matrix, rows: Gf2Matrix) -> tuple[bool, str]:
    sol = solve_left(span, rows)
    if sol is not None:
        return True, ""
    for i in range(rows.rows):
        if solve_left(span, rows.take_rows([i])) is None:
            return False, f"row {i} is outside the span"
    return False, "membership failed"


def _spaces_equal(a: Gf2Matrix, b: Gf2Matrix) -> tuple[bool, str]:
    ok_ab, w1 = _rows_in_span(a, b)
    ok_ba, w2 = _rows_in_span(b, a)
    if ok_ab and ok_ba:
        return True, ""
    return False, (w2 and "lhs: " + w2) or ("rhs: " + w1)


def verify_surgery(dc: DeformedCode, distance_qubit_cap: int = 36,
                   distance_weight_cap: int = 5) -> GlsReport:
    """Check the lattice-surgery theorem statement by statement.

    Everything except the distance statements is exact linear algebra
    through the memory-projection relations.  The distance bound is
    re-verified exhaustively only within the stated budget; otherwise
    it is reported as implied-by-the-general-bound but not re-checked.
    """
    c = dc.memory
    code = dc.code
    rep = GlsReport(kind=dc.kind)
    mem_cols = list(range(dc.mem_qubits))
    hx_proj = code.hx.take_cols(mem_cols)

    # statement i needs the deformed X rows to be genuine stabilisers
    # (they must commute with every deformed Z check) and to project
    # onto exactly the memory X stabilisers
    comm = code.hx.mul_transpose(code.hz)
    if not comm.is_zero():
        bad = next(i for i, r in enumerate(comm.bits) if r)
        rep.statements.append(StatementResult(
            "i: X stabilisers match through P", "fail",
            f"deformed X row {bad} anticommutes with a Z check "
            "(pasting identity violated)"))
    else:
        ok, wit = _spaces_equal(c.hx, hx_proj)
        rep.statements.append(StatementResult(
            "i: X stabilisers match through P", "pass" if ok else "fail", wit))

    ok, wit = _rows_in_span(code.hz, dc.pad_memory_rows(c.hz))
    rep.statements.append(StatementResult("ii: Z stabilisers survive pasting",
                                          "pass" if ok else "fail", wit))

    if dc.kind == "measurement":
        ok, wit = _spaces_equal(dc.split.jxc, code.jx.take_cols(mem_cols))
        rep.statements.append(StatementResult(
            "iii: commuting X logicals persist on the memory",
            "pass" if ok else "fail", wit))
        ok, wit = _spaces_equal(dc.pad_memory_rows(dc.split.jzc), code.jz)
        rep.statements.append(StatementResult(
            "iv: complementary Z logicals remain logical",
            "pass" if ok else "fail", wit))
        ok, wit = _rows_in_span(code.hz, dc.pad_memory_rows(dc.split.jza))
        rep.statements.append(StatementResult(
            "v: measured operators become stabilisers",
            "pass" if ok else "fail", wit))
        bound_desc = f"min(d/|S|, d_r) = min(d/{dc.glue.s_norm}, {dc.d_r})"
    else:
        ok, wit = _spaces_equal(c.jx, code.jx.take_cols(mem_cols))
        rep.statements.append(StatementResult(
            "iii': all X logicals persist on the memory",
            "pass" if ok else "fail", wit))
        ok, wit = _spaces_equal(dc.pad_memory_rows(c.jz), code.jz)
        rep.statements.append(StatementResult(
            "iv': all Z logicals are preserved",
            "pass" if ok else "fail", wit))
        lo, hi = dc.ob_range
        transferred = dc.pad_memory_rows(dc.split.jza)
        shifted = Gf2Matrix([r << lo for r in dc.j_g.bits], code.n)
        ok, wit = _rows_in_span(code.hz, transferred.add(shifted))
        rep.statements.append(StatementResult(
            "v': measured operators transfer to the open boundary",
            "pass" if ok else "fail", wit))
        bound_desc = f"d/|S| = d/{dc.glue.s_norm}"

    if c.distance is None:
        rep.statements.append(StatementResult(
            "vi: distance bound", "skipped", "memory distance unknown"))
        return rep
    if dc.kind == "measurement":
        bound = min(c.distance // max(dc.glue.s_norm, 1), dc.d_r)
    else:
        bound = c.distance // max(dc.glue.s_norm, 1)
    if code.n <= distance_qubit_cap:
        cap = min(max(distance_weight_cap, bound), code.n)
        res = exact_distance(code, cap=cap)
        rep.distance = res
        if res.value is not None:
            ok = res.value >= bound
            rep.statements.append(StatementResult(
                "vi: distance bound",
                "pass" if ok else "fail",
                f"exhaustive d={res.value} vs {bound_desc}={bound}"))
        elif "k=0" in res.note:
            rep.statements.append(StatementResult(
                "vi: distance bound", "pass",
                "k=0 deformed code: no logical errors, bound vacuous"))
        elif res.searched_weight >= bound - 1:
            rep.statements.append(StatementResult(
                "vi: distance bound", "pass",
                f"no logical error up to weight {res.searched_weight}; "
                f"bound {bound_desc}={bound} certified"))
        else:
            rep.statements.append(StatementResult(
                "vi: distance bound", "skipped", "bound unverified (budget)"))
    else:
        rep.statements.append(StatementResult(
            "vi: distance bound", "skipped", "bound unverified (budget)"))
    return rep

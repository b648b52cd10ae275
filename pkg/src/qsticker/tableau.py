"""Stabilizer tableau simulation and a dense projector oracle.

The tableau keeps n independent, mutually commuting Hermitian Pauli
generators with exact i^p phases.  Measuring a Hermitian Pauli either
anticommutes with some generator (outcome random, generators updated in
place) or is determined (the generator subset reproducing its
symplectic part is solved over GF(2) and the phases compared).

The oracle works on dense state vectors (budgeted at 12 qubits) and
applies projectors (1 + μP)/2 branch by branch.  All amplitudes stay in
Z[i] scaled by powers of two, so branch probabilities are exact dyadic
floats and states compare with exact equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .gf2 import Gf2Matrix, solve_left
from .pauli import MeasurementPlan, PauliOp

ORACLE_QUBIT_BUDGET = 12


class StabilizerState:
    """Pure stabilizer state given by n phased generators."""

    def __init__(self, gens: list[PauliOp]):
        if not gens:
            raise ValueError("need at least one generator")
        n = gens[0].n
        if len(gens) != n:
            raise ValueError("a pure state needs exactly n generators")
        for i, g in enumerate(gens):
            if g.n != n:
                raise ValueError("generator length mismatch")
            if not g.is_hermitian():
                raise ValueError(f"generator {i} is not Hermitian")
            for h in gens[:i]:
                if not g.commutes_with(h):
                    raise ValueError("generators do not commute")
        self.n = n
        self.gens = list(gens)
        if self._symplectic_rank() != n:
            raise ValueError("generators are dependent")

    def _symplectic_rank(self) -> int:
        from .gf2 import rank

        rows = [g.x | (g.z << self.n) for g in self.gens]
        return rank(Gf2Matrix(rows, 2 * self.n))

    @staticmethod
    def zero_state(n: int) -> "StabilizerState":
        return StabilizerState([PauliOp.single(n, "Z", j) for j in range(n)])

    @staticmethod
    def product_state(spec: str) -> "StabilizerState":
        """One letter per qubit: 0/1 (Z basis), +/- (X), y/Y (|y±⟩)."""
        gens = []
        n = len(spec)
        for j, ch in enumerate(spec):
            if ch == "0":
                gens.append(PauliOp.single(n, "Z", j))
            elif ch == "1":
                gens.append(PauliOp.single(n, "Z", j).negate())
            elif ch == "+":
                gens.append(PauliOp.single(n, "X", j))
            elif ch == "-":
                gens.append(PauliOp.single(n, "X", j).negate())
            elif ch == "y":
                gens.append(PauliOp.single(n, "Y", j))
            elif ch == "Y":
                gens.append(PauliOp.single(n, "Y", j).negate())
            else:
                raise ValueError(f"unknown qubit spec {ch!r}")
        return StabilizerState(gens)

    def copy(self) -> "StabilizerState":
        clone = object.__new__(StabilizerState)
        clone.n = self.n
        clone.gens = list(self.gens)
        return clone

    # -- Clifford gates (state preparation for tests and the CLI) ------

    def apply_h(self, t: int) -> None:
        self.gens = [self._h(g, t) for g in self.gens]

    def apply_s(self, t: int) -> None:
        self.gens = [self._s(g, t) for g in self.gens]

    def apply_cnot(self, c: int, t: int) -> None:
        self.gens = [self._cnot(g, c, t) for g in self.gens]

    @staticmethod
    def _h(g: PauliOp, t: int) -> PauliOp:
        xt = (g.x >> t) & 1
        zt = (g.z >> t) & 1
        x = g.x ^ ((xt ^ zt) << t)
        z = g.z ^ ((xt ^ zt) << t)
        return PauliOp(g.n, g.phase + 2 * (xt & zt), x, z)

    @staticmethod
    def _s(g: PauliOp, t: int) -> PauliOp:
        xt = (g.x >> t) & 1
        return PauliOp(g.n, g.phase + xt, g.x, g.z ^ (xt << t))

    @staticmethod
    def _cnot(g: PauliOp, c: int, t: int) -> PauliOp:
        xc = (g.x >> c) & 1
        zt = (g.z >> t) & 1
        return PauliOp(g.n, g.phase, g.x ^ (xc << t), g.z ^ (zt << c))

    def apply_pauli(self, p: PauliOp) -> None:
        """Conjugate by a Pauli unitary (phase flips on anticommuters)."""
        self.gens = [g if g.commutes_with(p) else g.negate() for g in self.gens]

    # -- measurement ----------------------------------------------------

    def measure(self, op: PauliOp, rng: random.Random | None = None,
                forced: int | None = None) -> tuple[int, bool]:
        """Measure a Hermitian Pauli; returns (outcome, was_random).

        Random outcomes come from `forced` when given, else from rng.
        A forced value on a determined measurement must match it.
        """
        if not op.is_hermitian():
            raise ValueError("measured operator must be Hermitian")
        anti = [i for i, g in enumerate(self.gens) if not g.commutes_with(op)]
        if anti:
            pivot = anti[0]
            gp = self.gens[pivot]
            for i in anti[1:]:
                self.gens[i] = self.gens[i].mul(gp)
            if forced is not None:
                outcome = forced
            elif rng is not None:
                outcome = 1 if rng.random() < 0.5 else -1
            else:
                raise ValueError("random outcome needed but no source given")
            self.gens[pivot] = op if outcome == 1 else op.negate()
            return outcome, True
        rows = [g.x | (g.z << self.n) for g in self.gens]
        target = Gf2Matrix([op.x | (op.z << self.n)], 2 * self.n)
        combo = solve_left(Gf2Matrix(rows, 2 * self.n), target)
        if combo is None:
            raise AssertionError("determined operator outside the group (bug)")
        prod = PauliOp.identity(self.n)
        sel = combo.bits[0]
        while sel:
            low = sel & -sel
            prod = prod.mul(self.gens[low.bit_length() - 1])
            sel ^= low
        diff = (op.phase - prod.phase) % 4
        if diff not in (0, 2):
            raise AssertionError("phase mismatch by ±i (bug)")
        outcome = 1 if diff == 0 else -1
        if forced is not None and forced != outcome:
            raise ValueError("forced outcome contradicts a determined measurement")
        return outcome, False

    def stabilizer_group(self) -> set[tuple[int, int, int]]:
        """All 2^n group elements as (phase, x, z) keys (tests only)."""
        out = {PauliOp.identity(self.n).key()}
        elems = [PauliOp.identity(self.n)]
        for g in self.gens:
            elems = elems + [e.mul(g) for e in elems]
        return {e.key() for e in elems}


# -- dense-vector machinery ---------------------------------------------


def dense_apply_pauli(vec: np.ndarray, op: PauliOp) -> np.ndarray:
    """i^p X(x)Z(z) applied to a dense vector (exact for dyadic inputs)."""
    n = op.n
    dim = 1 << n
    if vec.shape != (dim,):
        raise ValueError("vector dimension mismatch")
    idx = np.arange(dim)
    par = np.zeros(dim, dtype=np.int64)
    z = op.z
    while z:
        low = z & -z
        par ^= (idx >> (low.bit_length() - 1)) & 1
        z ^= low
    signs = 1.0 - 2.0 * par
    out = np.zeros_like(vec)
    out[idx ^ op.x] = (1j ** op.phase) * signs * vec
    return out


def dense_from_state(state: StabilizerState) -> np.ndarray:
    """Unnormalized dense vector stabilized by every generator.

    Projects basis vectors until one survives; amplitudes stay dyadic.
    """
    n = state.n
    dim = 1 << n
    if n > ORACLE_QUBIT_BUDGET:
        raise ValueError(f"dense oracle budget is {ORACLE_QUBIT_BUDGET} qubits")
    for b in range(dim):
        vec = np.zeros(dim, dtype=complex)
        vec[b] = 1.0
        ok = True
        for g in state.gens:
            vec = (vec + dense_apply_pauli(vec, g)) / 2.0
            if not vec.any():
                ok = False
                break
        if ok:
            return vec
    raise AssertionError("no basis vector survives the projectors (bug)")


def dense_stabilized_by(vec: np.ndarray, op: PauliOp) -> bool:
    """Exact check that op fixes the (unnormalized) vector."""
    return np.array_equal(dense_apply_pauli(vec, op), vec)


@dataclass
class OracleBranch:
    outcomes: tuple[int, ...]
    probability: float
    state: np.ndarray  # unnormalized; norm² relative to the initial state


def projector_oracle(ops: list[PauliOp], initial: StabilizerState) -> list[OracleBranch]:
    """All outcome branches of measuring ops in order, by dense projectors.

    Branch probabilities are exact dyadic floats summing to 1; zero
    branches are pruned.
    """
    if initial.n > ORACLE_QUBIT_BUDGET:
        raise ValueError(f"dense oracle budget is {ORACLE_QUBIT_BUDGET} qubits")
    start = dense_from_state(initial)
    start_norm = float(np.vdot(start, start).real)
    branches: list[OracleBranch] = []

    def walk(vec: np.ndarray, outcomes: tuple[int, ...], depth: int):
        if depth == len(ops):
            prob = float(np.vdot(vec, vec).real) / start_norm
            branches.append(OracleBranch(outcomes, prob, vec))
            return
        applied = dense_apply_pauli(vec, ops[depth])
        for mu in (1, -1):
            nxt = (vec + mu * applied) / 2.0
            if nxt.any():
                walk(nxt, outcomes + (mu,), depth + 1)

    walk(start, (), 0)
    total = sum(b.probability for b in branches)
    if total != 1.0:
        raise AssertionError(f"branch probabilities sum to {total}, not 1")
    return branches


# -- plan execution ------------------------------------------------------


def plan_initial_state(plan: MeasurementPlan,
                       memory: StabilizerState) -> StabilizerState:
    """Memory ⊗ ancillas, with A0 qubits in |+⟩ and A1 qubits in |y+⟩."""
    if memory.n != plan.memory_qubits:
        raise ValueError("memory state size does not match the plan")
    total = plan.total_qubits
    gens = [PauliOp(total, g.phase, g.x, g.z) for g in memory.gens]
    for j, anc in enumerate(plan.ancilla):
        kind = "X" if plan.blocks[j] == "A0" else "Y"
        gens.append(PauliOp.single(total, kind, anc))
    return StabilizerState(gens)


@dataclass
class PlanResult:
    raw_outcomes: tuple[int, ...]  # Ω_X, Ω_Z, readouts in order
    op_outcomes: tuple[int, ...]   # per-operator reported values
    probability: float
    random_flags: tuple[bool, ...]
    corrections_applied: tuple[int, ...]
    final: StabilizerState

    @property
    def mu_x(self) -> tuple[int, ...]:
        q = len(self.op_outcomes)
        return self.raw_outcomes[:q]

    @property
    def mu_z(self) -> tuple[int, ...]:
        q = len(self.op_outcomes)
        return self.raw_outcomes[q:2 * q]


def plan_measurement_sequence(plan: MeasurementPlan) -> list[PauliOp]:
    return list(plan.omega_x) + list(plan.omega_z) + list(plan.readouts)


def memory_factor(state: StabilizerState, mem_qubits: int) -> StabilizerState:
    """Stabilizer state of the memory factor of a product state.

    Finds the subgroup supported on the first mem_qubits qubits; raises
    if it does not determine a pure memory state (i.e. the state is
    entangled with the ancillas).
    """
    from .gf2 import kernel_basis

    n = state.n
    anc = n - mem_qubits
    anc_mask = ((1 << n) - 1) ^ ((1 << mem_qubits) - 1)
    rows = [((g.x & anc_mask) >> mem_qubits)
            | (((g.z & anc_mask) >> mem_qubits) << anc)
            for g in state.gens]
    combos = kernel_basis(Gf2Matrix(rows, 2 * anc).transpose())
    gens = []
    for sel in combos.bits:
        prod = PauliOp.identity(n)
        s = sel
        while s:
            low = s & -s
            prod = prod.mul(state.gens[low.bit_length() - 1])
            s ^= low
        gens.append(PauliOp(mem_qubits, prod.phase,
                            prod.x & ((1 << mem_qubits) - 1),
                            prod.z & ((1 << mem_qubits) - 1)))
    if len(gens) != mem_qubits:
        raise ValueError("memory is entangled with the ancillas")
    return StabilizerState(gens)


def _finish_plan(plan: MeasurementPlan, state: StabilizerState,
                 outcomes: list[int], flags: list[bool]) -> PlanResult:
    q = len(plan.operators)
    applied = []
    for j in range(q):
        if outcomes[2 * q + j] == -1:
            state.apply_pauli(plan.corrections[j])
            applied.append(j)
    op_outcomes = tuple(plan.outcome_factor[j] * outcomes[j] * outcomes[q + j]
                        for j in range(q))
    return PlanResult(raw_outcomes=tuple(outcomes), op_outcomes=op_outcomes,
                      probability=2.0 ** (-sum(flags)),
                      random_flags=tuple(flags),
                      corrections_applied=tuple(applied), final=state)


def simulate_plan(plan: MeasurementPlan, initial: StabilizerState,
                  outcome_seed: int | None = None,
                  forced: list[int] | None = None) -> PlanResult:
    """Run the plan on a tableau; undetermined outcomes come from the
    seeded generator (or the forced list, for branch enumeration)."""
    state = initial.copy()
    if state.n != plan.total_qubits:
        raise ValueError("initial state does not cover memory plus ancillas")
    rng = random.Random(outcome_seed)
    outcomes: list[int] = []
    flags: list[bool] = []
    forced_iter = iter(forced) if forced is not None else None
    for op in plan_measurement_sequence(plan):
        force_val = next(forced_iter, None) if forced_iter is not None else None
        mu, was_random = state.measure(op, rng=rng, forced=force_val)
        outcomes.append(mu)
        flags.append(was_random)
    return _finish_plan(plan, state, outcomes, flags)


def enumerate_plan_branches(plan: MeasurementPlan,
                            initial: StabilizerState) -> list[PlanResult]:
    """Every outcome branch of the plan on the tableau (DFS over both
    forks of each genuinely random measurement)."""
    if initial.n != plan.total_qubits:
        raise ValueError("initial state does not cover memory plus ancillas")
    seq = plan_measurement_sequence(plan)
    results: list[PlanResult] = []

    def walk(state: StabilizerState, outcomes: list[int], flags: list[bool],
             depth: int):
        if depth == len(seq):
            results.append(_finish_plan(plan, state, outcomes, flags))
            return
        op = seq[depth]
        is_random = any(not g.commutes_with(op) for g in state.gens)
        if is_random:
            for mu in (1, -1):
                fork = state.copy()
                fork.measure(op, forced=mu)
                walk(fork, outcomes + [mu], flags + [True], depth + 1)
        else:
            mu, _ = state.measure(op)
            walk(state, outcomes + [mu], flags + [False], depth + 1)

    walk(initial.copy(), [], [], 0)
    return results

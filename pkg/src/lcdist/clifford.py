"""Exact single-qubit Clifford algebra and stabilizer tableaus.

The 24-element single-qubit Clifford group (mod global phase) is built
numerically at import time: starting from explicit 2x2 matrices for H and
S, we close under multiplication, identify each element by its conjugation
images of X and Z, and tabulate composition and inverses. Nothing about
the group law is transcribed by hand.

Graph states are handled at stabilizer level: a tableau row is a signed
Pauli string (sign in {+1, -1}, letters I/X/Y/Z), and two tableaus are
compared by row-reducing the binary symplectic representation. Local
Clifford conjugation maps letters to signed letters, so no intermediate
phases arise; row products during reduction track phases with the usual
quaternion bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import graphstate
from .errors import (
    LengthMismatchError,
    UnknownGeneratorError,
    WitnessInconsistentError,
)

_SQ2 = 1.0 / np.sqrt(2.0)

GENERATOR_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sqrt_minus_iX": _SQ2 * np.array([[1, -1j], [-1j, 1]], dtype=complex),
    "sqrt_iZ": _SQ2 * np.array([[1 + 1j, 0], [0, 1 - 1j]], dtype=complex),
    "sqrt_minus_iZ": _SQ2 * np.array([[1 - 1j, 0], [0, 1 + 1j]], dtype=complex),
}

_PAULI_MATS = {
    "X": GENERATOR_MATRICES["X"],
    "Y": GENERATOR_MATRICES["Y"],
    "Z": GENERATOR_MATRICES["Z"],
}

_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class Pauli:
    """Signed Pauli axis; the identity only ever carries sign +1."""

    axis: str
    sign: int

    def __post_init__(self):
        if self.axis not in ("I", "X", "Y", "Z") or self.sign not in (1, -1):
            raise ValueError(f"bad Pauli ({self.axis}, {self.sign})")
        if self.axis == "I" and self.sign != 1:
            raise ValueError("identity Pauli must have sign +1")

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + self.axis


@dataclass(frozen=True)
class SingleQubitClifford:
    """Group element, identified by its conjugation images of X, Y and Z.

    Instances are interned: exactly 24 exist, exposed via ``all_elements``.
    ``index`` addresses the composition and inverse tables.
    """

    image_of_x: Pauli
    image_of_y: Pauli
    image_of_z: Pauli
    index: int

    @property
    def name(self) -> str:
        """Action-derived name, e.g. '+X-Y' for X -> +X, Z -> -Y."""
        return f"{self.image_of_x}{self.image_of_z}"

    def image(self, axis: str) -> Pauli:
        if axis == "I":
            return Pauli("I", 1)
        return {
            "X": self.image_of_x,
            "Y": self.image_of_y,
            "Z": self.image_of_z,
        }[axis]

    def is_identity(self) -> bool:
        return self.image_of_x == Pauli("X", 1) and self.image_of_z == Pauli(
            "Z", 1
        )

    def is_pauli(self) -> bool:
        """True for the four elements that at most flip stabilizer signs
        (identity and the X/Y/Z byproducts)."""
        return self.image_of_x.axis == "X" and self.image_of_z.axis == "Z"

    def __str__(self):
        return self.name


def _phase_normalize(u: np.ndarray) -> np.ndarray:
    flat = u.ravel()
    anchor = flat[np.argmax(np.abs(flat) > 1e-9)]
    return u / (anchor / abs(anchor))


def _matrix_key(u: np.ndarray) -> tuple:
    return tuple(np.round(_phase_normalize(u).ravel(), 9).tolist())


def _conj_image(u: np.ndarray, axis: str) -> Pauli:
    conj = u @ _PAULI_MATS[axis] @ u.conj().T
    for out_axis in _AXES:
        for sign in (1, -1):
            if np.allclose(conj, sign * _PAULI_MATS[out_axis], atol=1e-9):
                return Pauli(out_axis, sign)
    raise AssertionError("conjugation left the signed Pauli set")


def _build_group():
    seen = {}
    frontier = [np.eye(2, dtype=complex)]
    seen[_matrix_key(frontier[0])] = frontier[0]
    gens = [GENERATOR_MATRICES["H"], GENERATOR_MATRICES["S"]]
    while frontier:
        u = frontier.pop()
        for g in gens:
            v = g @ u
            key = _matrix_key(v)
            if key not in seen:
                seen[key] = v
                frontier.append(v)
    mats = list(seen.values())
    assert len(mats) == 24, f"group closure found {len(mats)} elements"

    elements = []
    by_action = {}
    for u in mats:
        ix, iy, iz = (_conj_image(u, ax) for ax in _AXES)
        elem = SingleQubitClifford(ix, iy, iz, len(elements))
        assert "I" not in (ix.axis, iz.axis) and ix.axis != iz.axis
        by_action[(ix.axis, ix.sign, iz.axis, iz.sign)] = elem.index
        elements.append(elem)
    assert len(by_action) == 24, "conjugation actions are not distinct"

    compose_table = np.empty((24, 24), dtype=np.int8)
    inverse_table = np.empty(24, dtype=np.int8)
    for i, ui in enumerate(mats):
        inv = ui.conj().T
        ix, iz = _conj_image(inv, "X"), _conj_image(inv, "Z")
        inverse_table[i] = by_action[(ix.axis, ix.sign, iz.axis, iz.sign)]
        for j, uj in enumerate(mats):
            # circuit order "i then j" is the matrix product uj @ ui
            prod = uj @ ui
            ix, iz = _conj_image(prod, "X"), _conj_image(prod, "Z")
            compose_table[i, j] = by_action[(ix.axis, ix.sign, iz.axis, iz.sign)]
    return tuple(elements), by_action, compose_table, inverse_table


_ELEMENTS, _BY_ACTION, _COMPOSE, _INVERSE = _build_group()

IDENTITY = next(e for e in _ELEMENTS if e.is_identity())


def all_elements() -> tuple[SingleQubitClifford, ...]:
    return _ELEMENTS


def compose(
    first: SingleQubitClifford, second: SingleQubitClifford
) -> SingleQubitClifford:
    """Element acting as ``first`` then ``second`` by conjugation."""
    return _ELEMENTS[_COMPOSE[first.index, second.index]]


def inverse(c: SingleQubitClifford) -> SingleQubitClifford:
    return _ELEMENTS[_INVERSE[c.index]]


def clifford_of_generator(name: str) -> SingleQubitClifford:
    """Named gate as a group element (action bootstrapped from its matrix)."""
    if name not in GENERATOR_MATRICES:
        raise UnknownGeneratorError(
            f"unknown generator {name!r}; choose from "
            f"{sorted(GENERATOR_MATRICES)}"
        )
    u = GENERATOR_MATRICES[name]
    ix, iz = _conj_image(u, "X"), _conj_image(u, "Z")
    return _ELEMENTS[_BY_ACTION[(ix.axis, ix.sign, iz.axis, iz.sign)]]


def clifford_from_name(name: str) -> SingleQubitClifford:
    """Parse an action name such as '+X-Y' back into the group element."""
    if len(name) != 4 or name[0] not in "+-" or name[2] not in "+-":
        raise UnknownGeneratorError(f"malformed element name {name!r}")
    key = (
        name[1],
        1 if name[0] == "+" else -1,
        name[3],
        1 if name[2] == "+" else -1,
    )
    if key not in _BY_ACTION:
        raise UnknownGeneratorError(f"{name!r} is not a group element")
    return _ELEMENTS[_BY_ACTION[key]]


# -- stabilizer tableaus ------------------------------------------------


@dataclass(frozen=True)
class StabilizerTableau:
    """Rows of signed Pauli strings: xs/zs are (q, q) 0/1 arrays, r holds
    the sign exponent per row (sign = (-1)^r). Row i of a graph-state
    tableau is K_i = X_i prod_{j in N(i)} Z_j."""

    qubit_count: int
    xs: np.ndarray
    zs: np.ndarray
    r: np.ndarray

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(
            self.qubit_count, self.xs.copy(), self.zs.copy(), self.r.copy()
        )

    def row_string(self, i: int) -> str:
        letters = []
        for j in range(self.qubit_count):
            letters.append("IXZY"[self.xs[i, j] + 2 * self.zs[i, j]])
        return ("-" if self.r[i] else "+") + "".join(letters)

    def __str__(self):
        return "\n".join(self.row_string(i) for i in range(self.qubit_count))


def graph_state_tableau(state: graphstate.GraphState) -> StabilizerTableau:
    q = state.qubit_count
    xs = np.eye(q, dtype=np.uint8)
    zs = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in state.neighbors(a):
            zs[a, b] = 1
    return StabilizerTableau(q, xs, zs, np.zeros(q, dtype=np.uint8))


def _g_phase(x1, z1, x2, z2):
    """Exponent of i in the product of two Pauli letters (vectorized)."""
    y1 = x1 & z1
    only_x = x1 & (1 - z1)
    only_z = (1 - x1) & z1
    return (
        y1 * (z2 - x2)
        + only_x * z2 * (2 * x2 - 1)
        + only_z * x2 * (1 - 2 * z2)
    )


def _row_multiply(tab: StabilizerTableau, i: int, j: int):
    """Replace generator i by generator_j * generator_i, tracking the sign."""
    phase = int(_g_phase(tab.xs[j], tab.zs[j], tab.xs[i], tab.zs[i]).sum())
    phase += 2 * int(tab.r[i]) + 2 * int(tab.r[j])
    assert phase % 2 == 0, "product of commuting stabilizers gained an i"
    tab.r[i] = (phase // 2) % 2
    tab.xs[i] ^= tab.xs[j]
    tab.zs[i] ^= tab.zs[j]


def canonicalize(tab: StabilizerTableau) -> StabilizerTableau:
    """Row-reduce over GF(2) (x columns first, then z) to a unique
    generator set; signs ride along, so canonical forms are comparable
    both mod-sign and strictly."""
    out = tab.copy()
    q = out.qubit_count
    rank = 0
    for col in range(2 * q):
        bits = out.xs[:, col] if col < q else out.zs[:, col - q]
        pivot = next((i for i in range(rank, q) if bits[i]), None)
        if pivot is None:
            continue
        if pivot != rank:
            for arr in (out.xs, out.zs, out.r):
                arr[[rank, pivot]] = arr[[pivot, rank]]
        for i in range(q):
            if i != rank and bits[i]:
                _row_multiply(out, i, rank)
        rank += 1
        if rank == q:
            break
    return out


def tableau_groups_equal(
    t1: StabilizerTableau, t2: StabilizerTableau
) -> tuple[bool, bool]:
    """(equal up to generator signs, equal with strict signs)."""
    if t1.qubit_count != t2.qubit_count:
        return False, False
    c1, c2 = canonicalize(t1), canonicalize(t2)
    mod_sign = bool(
        np.array_equal(c1.xs, c2.xs) and np.array_equal(c1.zs, c2.zs)
    )
    strict = mod_sign and bool(np.array_equal(c1.r, c2.r))
    return mod_sign, strict


def apply_local_cliffords(
    tab: StabilizerTableau, per_qubit: list[SingleQubitClifford]
) -> StabilizerTableau:
    """Conjugate every row letter-wise by the per-qubit elements."""
    if len(per_qubit) != tab.qubit_count:
        raise LengthMismatchError(
            f"need {tab.qubit_count} elements, got {len(per_qubit)}"
        )
    out = tab.copy()
    axis_bits = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    for j, c in enumerate(per_qubit):
        if c.is_identity():
            continue
        for i in range(out.qubit_count):
            letter = "IXZY"[out.xs[i, j] + 2 * out.zs[i, j]]
            img = c.image(letter)
            out.xs[i, j], out.zs[i, j] = axis_bits[img.axis]
            if img.sign < 0:
                out.r[i] ^= 1
    return out


# -- LC recovery --------------------------------------------------------


@dataclass(frozen=True)
class CliffordWord:
    """Per-qubit ordered generator applications (earliest first)."""

    qubit_count: int
    per_qubit: tuple[tuple[SingleQubitClifford, ...], ...]

    def __post_init__(self):
        if len(self.per_qubit) != self.qubit_count:
            raise LengthMismatchError("word shape does not match qubit count")

    def total_length(self) -> int:
        return sum(len(seq) for seq in self.per_qubit)


def empty_word(qubit_count: int) -> CliffordWord:
    return CliffordWord(qubit_count, tuple(() for _ in range(qubit_count)))


def replay_witness(
    state: graphstate.GraphState, witness: list[int]
) -> list[graphstate.GraphState]:
    """States visited while applying the pivots; index k is after k moves."""
    out = [state]
    for a in witness:
        if not 0 <= a < state.qubit_count:
            raise WitnessInconsistentError(
                f"pivot {a} out of range for q={state.qubit_count}"
            )
        out.append(graphstate.local_complement(out[-1], a))
    return out

def recovery_word(
    target: graphstate.GraphState, witness: list[int]
) -> CliffordWord:
    """Unitary word mapping the distributed state back to the target.

    The witness pivots map target G to G*. Undoing them in reverse order,
    each step applies sqrt(-iX) on the pivot and sqrt(iZ) on its neighbors
    in the graph current at that step, so the word sends |G*> to |G| (up
    to measurement-absorbed signs).
    """
    trail = replay_witness(target, witness)
    sqx = clifford_of_generator("sqrt_minus_iX")
    sqz = clifford_of_generator("sqrt_iZ")
    per_qubit: list[list[SingleQubitClifford]] = [
        [] for _ in range(target.qubit_count)
    ]
    for step in range(len(witness) - 1, -1, -1):
        a = witness[step]
        per_qubit[a].append(sqx)
        for b in trail[step + 1].neighbors(a):
            per_qubit[b].append(sqz)
    return CliffordWord(
        target.qubit_count, tuple(tuple(seq) for seq in per_qubit)
    )


def compress(word: CliffordWord) -> list[SingleQubitClifford]:
    """Fold each qubit's generator sequence into one group element."""
    out = []
    for seq in word.per_qubit:
        acc = IDENTITY
        for c in seq:
            acc = compose(acc, c)
        out.append(acc)
    return out


def native_gate_count(compressed: list[SingleQubitClifford]) -> int:
    """Gates that must actually be applied: Pauli byproducts are absorbed
    into the measurement frame and cost nothing."""
    return sum(1 for c in compressed if not c.is_pauli())


def verify_recovery(
    source: graphstate.GraphState,
    compressed: list[SingleQubitClifford],
    target: graphstate.GraphState,
) -> bool:
    """True iff the gates carry source's stabilizer group onto target's
    (generator signs ignored; use verify_recovery_detail for strictness)."""
    return verify_recovery_detail(source, compressed, target)[0]


def verify_recovery_detail(
    source: graphstate.GraphState,
    compressed: list[SingleQubitClifford],
    target: graphstate.GraphState,
) -> tuple[bool, bool]:
    if source.qubit_count != target.qubit_count:
        raise LengthMismatchError("source and target qubit counts differ")
    moved = apply_local_cliffords(graph_state_tableau(source), compressed)
    return tableau_groups_equal(moved, graph_state_tableau(target))

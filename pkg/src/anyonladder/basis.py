"""Fusion-tree bases, sparse operators on them, recoupling and braiding.

The canonical basis of ``n`` modes is the left-comb (all-left) fusion tree
with states ``(a_1 .. a_n; d_1 .. d_{n-1})``, ordered lexicographically by
(total charge, leaf charges, internal charges).  Operators are stored as
scipy CSR matrices tied to their row/column bases; compositions drop
entries below ``DROP_TOLERANCE``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from . import trees
from .model import AnyonModel

__all__ = [
    "DROP_TOLERANCE",
    "FusionTreeBasis",
    "SparseOperator",
    "recouple",
    "braid_adjacent",
    "braid_word",
    "total_charge_projector",
]

DROP_TOLERANCE = 1e-14


class FusionTreeBasis:
    """Ordered basis of fusion-tree labelings for a fixed shape.

    ``shape=None`` means the canonical left comb.  ``sector`` optionally
    restricts to states of one total charge (given as a label).
    """

    def __init__(self, model: AnyonModel, n_modes: int, sector: str | None = None,
                 shape=None):
        if n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        self.model = model
        self.n_modes = int(n_modes)
        self.shape = trees.left_comb(0, n_modes - 1) if shape is None else shape
        lo, hi = trees.span(self.shape)
        if (lo, hi) != (0, n_modes - 1):
            raise ValueError(f"shape covers {(lo, hi)}, expected (0, {n_modes - 1})")
        self.sector = None if sector is None else model.index(sector)
        self.spans, states = trees.enumerate_labelings(model, self.shape)
        self._span_pos = {s: i for i, s in enumerate(self.spans)}
        self.root_span = (0, n_modes - 1)
        if self.sector is not None:
            root = self._span_pos[self.root_span]
            states = [st for st in states if st[root] == self.sector]
        self.states: tuple[tuple[int, ...], ...] = tuple(states)
        self.index: dict[tuple[int, ...], int] = {st: i for i, st in enumerate(states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def charge(self, state: tuple[int, ...], span: tuple[int, int]) -> int:
        return state[self._span_pos[span]]

    def total(self, state: tuple[int, ...]) -> int:
        return state[self._span_pos[self.root_span]]

    def leaves(self, state: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(state[self._span_pos[(i, i)]] for i in range(self.n_modes))

    def totals(self) -> np.ndarray:
        """Total charge per state, as an int array."""
        root = self._span_pos[self.root_span]
        return np.array([st[root] for st in self.states], dtype=int)

    def sector_indices(self, g: int) -> np.ndarray:
        return np.nonzero(self.totals() == g)[0]

    def state_label(self, i: int) -> str:
        """Human-readable ``(a_1 .. a_n; d_1 .. d_{n-1})`` string."""
        st = self.states[i]
        names = self.model.labels
        leaves = ",".join(names[a] for a in self.leaves(st))
        inner = [s for s in self.spans if s[0] != s[1]]
        ds = ",".join(names[self.charge(st, s)] for s in inner)
        return f"({leaves};{ds})" if ds else f"({leaves})"

    def is_compatible(self, other: "FusionTreeBasis") -> bool:
        return (
            self.model is other.model
            and self.n_modes == other.n_modes
            and self.shape == other.shape
            and self.sector == other.sector
        )


@dataclass
class SparseOperator:
    """Complex sparse matrix between two fusion-tree bases."""

    row_basis: FusionTreeBasis
    col_basis: FusionTreeBasis
    matrix: sp.csr_matrix

    @classmethod
    def from_entries(cls, row_basis, col_basis, entries: Mapping[tuple[int, int], complex]):
        rows, cols, vals = [], [], []
        for (i, j), v in entries.items():
            rows.append(i)
            cols.append(j)
            vals.append(v)
        mat = sp.csr_matrix(
            (np.array(vals, dtype=complex), (rows, cols)),
            shape=(row_basis.dim, col_basis.dim),
        )
        return cls(row_basis, col_basis, mat)

    @classmethod
    def identity(cls, basis: FusionTreeBasis):
        return cls(basis, basis, sp.identity(basis.dim, dtype=complex, format="csr"))

    @classmethod
    def zero(cls, row_basis: FusionTreeBasis, col_basis: FusionTreeBasis | None = None):
        col_basis = row_basis if col_basis is None else col_basis
        return cls(row_basis, col_basis, sp.csr_matrix((row_basis.dim, col_basis.dim), dtype=complex))

    # -- algebra ---------------------------------------------------------------

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if not self.col_basis.is_compatible(other.row_basis):
            raise ValueError("operator composition over incompatible bases")
        out = SparseOperator(self.row_basis, other.col_basis, (self.matrix @ other.matrix).tocsr())
        return out.drop()

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._require_same_bases(other)
        return SparseOperator(self.row_basis, self.col_basis, (self.matrix + other.matrix).tocsr())

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._require_same_bases(other)
        return SparseOperator(self.row_basis, self.col_basis, (self.matrix - other.matrix).tocsr())

    def __mul__(self, scalar: complex) -> "SparseOperator":
        return SparseOperator(self.row_basis, self.col_basis, (self.matrix * scalar).tocsr())

    __rmul__ = __mul__

    def __neg__(self) -> "SparseOperator":
        return self * (-1.0)

    def _require_same_bases(self, other: "SparseOperator"):
        if not (self.row_basis.is_compatible(other.row_basis)
                and self.col_basis.is_compatible(other.col_basis)):
            raise ValueError("operator arithmetic over incompatible bases")

    def dagger(self) -> "SparseOperator":
        return SparseOperator(self.col_basis, self.row_basis, self.matrix.conj().T.tocsr())

    def drop(self, tol: float = DROP_TOLERANCE) -> "SparseOperator":
        mat = self.matrix.tocoo()
        keep = np.abs(mat.data) > tol
        out = sp.csr_matrix(
            (mat.data[keep], (mat.row[keep], mat.col[keep])), shape=mat.shape
        )
        return SparseOperator(self.row_basis, self.col_basis, out)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    # -- inspection -------------------------------------------------------------

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def norm_max(self) -> float:
        """Largest entry magnitude (0 for an empty matrix)."""
        return float(np.abs(self.matrix.data).max()) if self.matrix.nnz else 0.0

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def entries(self):
        mat = self.matrix.tocoo()
        for i, j, v in zip(mat.row, mat.col, mat.data):
            yield int(i), int(j), complex(v)

    def allclose(self, other: "SparseOperator", tol: float = 1e-10) -> bool:
        self._require_same_bases(other)
        diff = self.matrix - other.matrix
        return float(np.abs(diff.data).max()) <= tol if diff.nnz else True

    def sector_pairs(self) -> set[tuple[int, int]]:
        """Distinct (row total charge, column total charge) pairs with support."""
        row_tot = self.row_basis.totals()
        col_tot = self.col_basis.totals()
        mat = self.matrix.tocoo()
        return {(int(row_tot[i]), int(col_tot[j])) for i, j in zip(mat.row, mat.col)}

    def is_charge_diagonal(self) -> bool:
        return all(r == c for r, c in self.sector_pairs())


# ---------------------------------------------------------------------------
# Recoupling
# ---------------------------------------------------------------------------


def _cache(model: AnyonModel) -> dict:
    cache = getattr(model, "_op_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(model, "_op_cache", cache)
    return cache


def _move_matrix(model: AnyonModel, shape, node_span):
    """One right-to-left rotation as a sparse overlap matrix.

    Returns ``(new_shape, M)`` with ``M[i_new, j_old] = <new_i|old_j>``.
    """
    new_shape, a_span, b_span, c_span = trees.rotate_right_to_left(shape, node_span)
    old_spans, old_states = trees.enumerate_labelings(model, shape)
    new_spans, new_states = trees.enumerate_labelings(model, new_shape)
    new_index = {st: i for i, st in enumerate(new_states)}
    old_pos = {s: i for i, s in enumerate(old_spans)}
    new_pos = {s: i for i, s in enumerate(new_spans)}

    removed = (b_span[0], c_span[1])
    created = (a_span[0], b_span[1])

    rows, cols, vals = [], [], []
    for j, st in enumerate(old_states):
        a = st[old_pos[a_span]]
        b = st[old_pos[b_span]]
        c = st[old_pos[c_span]]
        d = st[old_pos[node_span]]
        y = st[old_pos[removed]]
        block = model.f_block(a, b, c, d)
        if block is None:
            continue
        base = {s: st[old_pos[s]] for s in old_spans if s != removed}
        for idx, x in enumerate(block.rows):
            amp = block.mat[idx, block.cols.index(y)] if y in block.cols else 0.0
            if abs(amp) <= DROP_TOLERANCE:
                continue
            base[created] = x
            new_state = tuple(base[s] for s in new_spans)
            rows.append(new_index[new_state])
            cols.append(j)
            vals.append(complex(amp))
    mat = sp.csr_matrix(
        (np.array(vals, dtype=complex), (rows, cols)),
        shape=(len(new_states), len(old_states)),
    )
    return new_shape, mat


def recouple(basis: FusionTreeBasis, target_shape) -> SparseOperator:
    """Unitary change of coordinates from the canonical shape to ``target_shape``.

    The result ``W`` has rows over the target-shape basis and columns over the
    canonical basis; for a state with canonical coordinates ``v`` the
    target-shape coordinates are ``W @ v``.  ``W`` is charge preserving and
    unitary; ``recouple(basis, canonical_shape)`` is the identity.
    """
    model = basis.model
    if basis.sector is not None:
        raise ValueError("recouple expects the full (all-sector) canonical basis")
    if basis.shape != trees.left_comb(0, basis.n_modes - 1):
        raise ValueError("recouple expects the canonical left-comb basis")
    key = ("recouple", basis.n_modes, target_shape)
    cache = _cache(model)
    if key in cache:
        return cache[key]

    target_basis = FusionTreeBasis(model, basis.n_modes, shape=target_shape)
    # Compose overlap matrices target -> canonical, then take the adjoint.
    shape = target_shape
    overlap = sp.identity(target_basis.dim, dtype=complex, format="csr")
    for node_span in trees.moves_to_left_comb(target_shape):
        shape, mat = _move_matrix(model, shape, node_span)
        overlap = (mat @ overlap).tocsr()
    result = SparseOperator(basis, target_basis, overlap).drop().dagger()
    cache[key] = result
    return result


def braid_adjacent(model: AnyonModel, n_modes: int, k: int, sense: str = "over") -> SparseOperator:
    """Unitary braid exchanging modes ``k`` and ``k+1`` (1-based) on the canonical basis.

    ``over`` applies the stored R-symbols ``R^{a_k a_{k+1}}_c`` for a
    counterclockwise exchange; ``under`` is its adjoint.
    """
    if not 1 <= k <= n_modes - 1:
        raise ValueError(f"braid index k={k} out of range for {n_modes} modes")
    if sense not in ("over", "under"):
        raise ValueError(f"unknown braid sense {sense!r}")
    cache = _cache(model)
    key = ("braid", n_modes, k, sense)
    if key in cache:
        return cache[key]

    basis = FusionTreeBasis(model, n_modes)
    if sense == "under":
        result = braid_adjacent(model, n_modes, k, "over").dagger()
        cache[key] = result
        return result

    i, j = k - 1, k  # 0-based pair
    parts = list(range(0, i)) + [(i, j)] + list(range(j + 1, n_modes))
    target = trees.fold_left(parts)
    w = recouple(basis, target)
    target_basis = w.row_basis

    pair_span = (i, j)
    entries: dict[tuple[int, int], complex] = {}
    pos = target_basis._span_pos
    for col, st in enumerate(target_basis.states):
        a = st[pos[(i, i)]]
        b = st[pos[(j, j)]]
        c = st[pos[pair_span]]
        swapped = list(st)
        swapped[pos[(i, i)]] = b
        swapped[pos[(j, j)]] = a
        row = target_basis.index[tuple(swapped)]
        entries[(row, col)] = model.r(a, b, c)
    swap = SparseOperator.from_entries(target_basis, target_basis, entries)
    result = (w.dagger() @ swap @ w).drop()
    cache[key] = result
    return result


def braid_word(model: AnyonModel, n_modes: int, word) -> SparseOperator:
    """Product of adjacent braids; ``word`` is a sequence of (k, sense) pairs.

    The first pair in ``word`` is the leftmost factor of the product, i.e.
    the last one applied to a ket.
    """
    basis = FusionTreeBasis(model, n_modes)
    result = SparseOperator.identity(basis)
    for k, sense in word:
        result = result @ braid_adjacent(model, n_modes, k, sense)
    return result


def total_charge_projector(model: AnyonModel, n_modes: int, g: str) -> SparseOperator:
    """Diagonal projector onto total charge ``g`` on the canonical basis."""
    basis = FusionTreeBasis(model, n_modes)
    gi = model.index(g)
    entries = {
        (i, i): 1.0 for i in range(basis.dim) if basis.total(basis.states[i]) == gi
    }
    return SparseOperator.from_entries(basis, basis, entries)

"""Annihilating elements and annihilation-operator sets.

The mode-1 annihilating element ``a^{b0,c0}_1`` sends the particle ``a`` in
mode 1 to the vacuum while the remaining modes carry total charge ``b0``:
in the factored shape ``(mode 1) x (rest)`` it is
``sum_y |e, y; b0><a, y; c0|`` with ``y`` running over the rest labelings of
charge ``b0`` and ``c0`` a channel of ``a x b0``.  Elements for mode ``k``
are defined by braid transport behind the intermediate modes:
``a_k = B_{k-1,k} a_{k-1} B_{k-1,k}^dagger``.

Annihilation operators are 0/1-weighted sums of annihilating elements,
one term per rest charge ``b0``; the coefficient tables picking the fusion
channels are constructed in :func:`coefficient_tables`.  A non-abelian
particle gets ``J = n_a - n + 1`` operators, an abelian one exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import trees
from .basis import FusionTreeBasis, SparseOperator, braid_adjacent, recouple, _cache
from .model import AnyonModel, ModelDataError
from .polynomial import GeneratorSymbol

__all__ = [
    "CoefficientTable",
    "LadderSet",
    "FibonacciPair",
    "annihilating_element",
    "transport_to_mode",
    "coefficient_tables",
    "j_count",
    "j_lower_bound",
    "ladder_set",
    "fibonacci_pair",
    "fermion_annihilator",
    "identity_ladder",
    "rest_charges",
]


def rest_charges(model: AnyonModel, n_modes: int) -> tuple[int, ...]:
    """Total charges reachable by the ``n_modes - 1`` non-selected modes."""
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    if n_modes == 1:
        return (model.vacuum,)
    rest = FusionTreeBasis(model, n_modes - 1)
    return tuple(sorted(set(int(g) for g in rest.totals())))


def _factored_shape(n_modes: int):
    if n_modes == 1:
        return 0
    return (0, trees.left_comb(1, n_modes - 1))


def _mode1_element(model: AnyonModel, n_modes: int, a: int, b0: int, c0: int) -> SparseOperator:
    cache = _cache(model)
    key = ("elem", n_modes, a, b0, c0, 1)
    if key in cache:
        return cache[key]

    if c0 not in model.fuse(a, b0):
        raise ModelDataError(
            f"{model.labels[c0]} is not a fusion channel of "
            f"{model.labels[a]} x {model.labels[b0]}"
        )
    basis = FusionTreeBasis(model, n_modes)
    if n_modes == 1:
        if b0 != model.vacuum:
            raise ModelDataError("a single mode has no rest system; b0 must be the vacuum")
        ket = basis.index[(model.vacuum,)]
        bra = basis.index[(a,)]
        result = SparseOperator.from_entries(basis, basis, {(ket, bra): 1.0})
        cache[key] = result
        return result

    shape = _factored_shape(n_modes)
    w = recouple(basis, shape)
    fact = w.row_basis
    rest_span = (1, n_modes - 1)
    root = fact.root_span
    entries = {}
    for col, st in enumerate(fact.states):
        if fact.charge(st, (0, 0)) != a:
            continue
        if fact.charge(st, rest_span) != b0 or fact.charge(st, root) != c0:
            continue
        partner = list(st)
        partner[fact._span_pos[(0, 0)]] = model.vacuum
        partner[fact._span_pos[root]] = b0
        row = fact.index[tuple(partner)]
        entries[(row, col)] = 1.0
    mid = SparseOperator.from_entries(fact, fact, entries)
    result = (w.dagger() @ mid @ w).drop()
    cache[key] = result
    return result


def transport_to_mode(op: SparseOperator, k: int) -> SparseOperator:
    """Braid-transport a mode-1 operator to mode ``k`` (behind modes 2..k)."""
    model = op.row_basis.model
    n = op.row_basis.n_modes
    if not 1 <= k <= n:
        raise ValueError(f"mode {k} out of range for {n} modes")
    result = op
    for m in range(1, k):
        b = braid_adjacent(model, n, m)
        result = (b @ result @ b.dagger()).drop()
    return result


def annihilating_element(
    model: AnyonModel, n_modes: int, a: str, b0: str, c0: str, mode: int = 1
) -> SparseOperator:
    """The annihilating element ``a_mode^{b0, c0}`` on the canonical basis."""
    ai, bi, ci = model.index(a), model.index(b0), model.index(c0)
    cache = _cache(model)
    key = ("elem", n_modes, ai, bi, ci, mode)
    if key in cache:
        return cache[key]
    result = transport_to_mode(_mode1_element(model, n_modes, ai, bi, ci), mode)
    cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientTable:
    """0/1 coefficients of one annihilation operator ``alpha^(j)`` for ``particle``.

    ``entries`` maps every allowed pair ``(b0, c0)`` (labels) to its
    coefficient; exactly one channel per ``b0`` carries 1.
    """

    particle: str
    j: int
    entries: dict[tuple[str, str], complex]

    def coefficient(self, b0: str, c0: str) -> complex:
        return self.entries.get((b0, c0), 0.0)


def j_count(model: AnyonModel, a: str) -> int:
    """Number of annihilation operators: ``n_a - n + 1``."""
    ai = model.index(a)
    n_a = sum(len(model.fuse(ai, b)) for b in range(model.n_labels))
    return n_a - model.n_labels + 1


def j_lower_bound(model: AnyonModel, a: str) -> int:
    """Lower bound ``max_b |channels(a x b)|`` on the operator count."""
    ai = model.index(a)
    return max(len(model.fuse(ai, b)) for b in range(model.n_labels))


def coefficient_tables(model: AnyonModel, a: str) -> list[CoefficientTable]:
    """The ``J`` coefficient tables for particle ``a``.

    Table 0 selects the first fusion channel of every rest charge; each
    subsequent table walks the off-first channels in (label order, channel
    order), promoting exactly one of them and zeroing that row's first
    channel.
    """
    ai = model.index(a)
    labels = model.labels
    channels = {b: model.fuse(ai, b) for b in range(model.n_labels)}

    def table_entries(selected: dict[int, int]) -> dict[tuple[str, str], complex]:
        entries = {}
        for b, chans in channels.items():
            for c in chans:
                entries[(labels[b], labels[c])] = 1.0 if selected[b] == c else 0.0
        return entries

    first = {b: chans[0] for b, chans in channels.items()}
    tables = [CoefficientTable(a, 0, table_entries(first))]
    for b in range(model.n_labels):
        for c in channels[b][1:]:
            selected = dict(first)
            selected[b] = c
            tables.append(CoefficientTable(a, len(tables), table_entries(selected)))
    assert len(tables) == j_count(model, a)
    return tables


# ---------------------------------------------------------------------------
# Ladder sets
# ---------------------------------------------------------------------------


@dataclass
class LadderSet:
    """All annihilation operators ``alpha^(j)_k`` of one particle type.

    ``ops[(k, j)]`` is the operator for mode ``k`` (1-based) and table ``j``;
    adjoints are the creation operators.
    """

    model: AnyonModel
    n_modes: int
    particle: str
    tables: list[CoefficientTable]
    ops: dict[tuple[int, int], SparseOperator]

    @property
    def j_count(self) -> int:
        return len(self.tables)

    def op(self, k: int, j: int = 0) -> SparseOperator:
        return self.ops[(k, j)]

    def resolver(self):
        """Symbol resolver for :meth:`LadderPolynomial.evaluate` (std symbols)."""

        def resolve(symbol: GeneratorSymbol) -> SparseOperator:
            if symbol.dagger:
                raise ValueError("resolver expects undaggered symbols")
            if symbol.kind != "std" or symbol.particle != self.particle:
                raise KeyError(f"symbol {symbol} not provided by this ladder set")
            return self.ops[(symbol.mode, symbol.j)]

        return resolve


def ladder_set(model: AnyonModel, n_modes: int, particle: str) -> LadderSet:
    """Construct the ``J`` annihilation operators of ``particle`` on all modes."""
    tables = coefficient_tables(model, particle)
    ai = model.index(particle)
    available = set(rest_charges(model, n_modes))
    basis = FusionTreeBasis(model, n_modes)

    mode1 = []
    for table in tables:
        op = SparseOperator.zero(basis)
        for b0 in range(model.n_labels):
            if b0 not in available:
                continue
            for c0 in model.fuse(ai, b0):
                coeff = table.coefficient(model.labels[b0], model.labels[c0])
                if abs(coeff) == 0.0:
                    continue
                op = op + coeff * _mode1_element(model, n_modes, ai, b0, c0)
        mode1.append(op.drop())

    ops: dict[tuple[int, int], SparseOperator] = {}
    for j, op in enumerate(mode1):
        ops[(1, j)] = op
        for k in range(2, n_modes + 1):
            b = braid_adjacent(model, n_modes, k - 1)
            ops[(k, j)] = (b @ ops[(k - 1, j)] @ b.dagger()).drop()
    return LadderSet(model, n_modes, particle, tables, ops)


def identity_ladder(model: AnyonModel, n_modes: int, mode: int = 1) -> SparseOperator:
    """The vacuum-type annihilation operator: the projector onto vacuum in ``mode``.

    Equals ``alpha^(j)_k alpha^(j)_k^dagger`` for any annihilation operator of
    any particle type, which is how it is expressed in ladder polynomials.
    """
    basis = FusionTreeBasis(model, n_modes)
    op = SparseOperator.zero(basis)
    for b0 in rest_charges(model, n_modes):
        op = op + _mode1_element(model, n_modes, model.vacuum, b0, b0)
    return transport_to_mode(op.drop(), mode)


# ---------------------------------------------------------------------------
# The special Fibonacci pair
# ---------------------------------------------------------------------------

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass
class FibonacciPair:
    """The two unnormalised Fibonacci operators per mode.

    ``alpha_k = tau_k^{e,tau}/sqrt(2) + tau_k^{tau,e}`` and
    ``beta_k  = tau_k^{e,tau}/sqrt(2) + tau_k^{tau,tau}`` (terms whose rest
    charge is unreachable at small mode counts are absent).
    """

    model: AnyonModel
    n_modes: int
    alpha: dict[int, SparseOperator]
    beta: dict[int, SparseOperator]

    def resolver(self):
        """Symbol resolver for pair-kind generator symbols."""

        def resolve(symbol: GeneratorSymbol) -> SparseOperator:
            if symbol.dagger:
                raise ValueError("resolver expects undaggered symbols")
            if symbol.kind != "pair":
                raise KeyError(f"symbol {symbol} is not an alpha/beta generator")
            family = self.alpha if symbol.particle == "alpha" else self.beta
            return family[symbol.mode]

        return resolve


def _fibonacci_tau(model: AnyonModel) -> int:
    non_abelian = [i for i, flag in enumerate(model.abelian) if not flag]
    if model.n_labels != 2 or len(non_abelian) != 1:
        raise ModelDataError(
            "the unnormalised pair is specific to Fibonacci-type models "
            "(two particle types, one non-abelian)"
        )
    tau = non_abelian[0]
    if set(model.fuse(tau, tau)) != {model.vacuum, tau}:
        raise ModelDataError("the non-abelian type must satisfy tau x tau = e + tau")
    return tau


def fibonacci_pair(model: AnyonModel, n_modes: int) -> FibonacciPair:
    """Build the unnormalised ``alpha_k``/``beta_k`` pair on every mode."""
    tau = _fibonacci_tau(model)
    e = model.vacuum
    available = set(rest_charges(model, n_modes))

    def combine(weighted: list[tuple[float, int, int]]) -> SparseOperator:
        basis = FusionTreeBasis(model, n_modes)
        op = SparseOperator.zero(basis)
        for weight, b0, c0 in weighted:
            if b0 not in available:
                continue
            op = op + weight * _mode1_element(model, n_modes, tau, b0, c0)
        return op.drop()

    alpha1 = combine([(_SQRT_HALF, e, tau), (1.0, tau, e)])
    beta1 = combine([(_SQRT_HALF, e, tau), (1.0, tau, tau)])

    alpha = {1: alpha1}
    beta = {1: beta1}
    for k in range(2, n_modes + 1):
        b = braid_adjacent(model, n_modes, k - 1)
        alpha[k] = (b @ alpha[k - 1] @ b.dagger()).drop()
        beta[k] = (b @ beta[k - 1] @ b.dagger()).drop()
    return FibonacciPair(model, n_modes, alpha, beta)


def fermion_annihilator(model: AnyonModel, n_modes: int, k: int = 1) -> SparseOperator:
    """The canonical fermionic annihilator ``f_k = psi_k^{e,psi} - psi_k^{psi,e}``.

    ``model`` must have a single non-vacuum type ``psi`` with
    ``psi x psi = e``; the resulting family satisfies the anticommutation
    relations ``{f_i, f_j} = 0`` and ``{f_i, f_j^dagger} = delta_ij``.
    """
    candidates = [
        a
        for a in range(model.n_labels)
        if a != model.vacuum and model.fuse(a, a) == (model.vacuum,)
    ]
    if model.n_labels != 2 or not candidates:
        raise ModelDataError(
            "the fermionic annihilator needs a two-type model whose non-vacuum "
            "type squares to the vacuum"
        )
    psi = model.labels[candidates[0]]
    e = model.labels[model.vacuum]
    return (
        annihilating_element(model, n_modes, psi, e, psi, k)
        + (-1.0) * annihilating_element(model, n_modes, psi, psi, e, k)
    ).drop()

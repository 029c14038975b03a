"""Local observables, their ladder-polynomial decomposition, and algebra checks.

Locality here is the behind-bipartition notion: a region ``S`` of modes is
local when its modes braid behind the complementary modes.  For the
contiguous region ``{1..M}`` the system factors as
``(modes 1..M) x (modes M+1..N)`` and every local observable is a linear
combination of ``E_{x,x'} = |x><x'| (x) id_rest`` with ``x, x'`` running
over the M-mode fusion states of equal charge.  A general region
``S = {s_1 < .. < s_M}`` is pulled back to ``{1..M}`` by a braid-word
unitary; its annihilation operators map onto the mode-relabeled ones.

The decomposition follows the constructive route: every region state ``x``
has an operator ``O_x`` ("master equation") built from annihilating
elements and F-weights, each element rewrites into the 0/1 annihilation
operators, and ``op = sum c_{x,x'} O_x^dagger O_{x'}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import trees
from .basis import FusionTreeBasis, SparseOperator, braid_word, recouple, _cache
from .ladder import (
    coefficient_tables,
    fibonacci_pair,
    ladder_set,
    rest_charges,
)
from .model import AnyonModel, ModelDataError
from .polynomial import GeneratorSymbol, LadderPolynomial

__all__ = [
    "RegionState",
    "candidate_local_basis",
    "local_candidate_span",
    "complement_observable_basis",
    "observable_basis",
    "region_states",
    "is_local_candidate",
    "mode_relabel_unitary",
    "o_operator",
    "o_polynomial",
    "system_totals",
    "element_polynomial",
    "abelian_sum_polynomial",
    "Decomposition",
    "decompose_observable",
    "std_resolver",
    "combined_resolver",
    "RelationReport",
    "verify_relations",
    "fock_words",
    "fock_word",
    "apply_word",
    "vacuum_index",
    "kernel_dimension",
    "ClosureResult",
    "algebra_closure",
]


# ---------------------------------------------------------------------------
# Factored-shape machinery
# ---------------------------------------------------------------------------


def _region_shape(n_modes: int, m: int):
    """Shape ``(left-comb 0..m-1, left-comb m..n-1)``; canonical comb if m == n."""
    region = trees.left_comb(0, m - 1)
    if m == n_modes:
        return region
    return (region, trees.left_comb(m, n_modes - 1))


@dataclass(frozen=True)
class RegionState:
    """One fusion state of the region modes ``1..M`` (canonical M-mode basis)."""

    index: int  # position in the M-mode canonical basis
    leaves: tuple[int, ...]
    internals: tuple[int, ...]  # d_1 .. d_{M-1}; empty for M == 1
    charge: int  # total charge g of the region

    def label(self, model: AnyonModel) -> str:
        names = model.labels
        leaves = ",".join(names[a] for a in self.leaves)
        if self.internals:
            return f"({leaves};{','.join(names[d] for d in self.internals)})"
        return f"({leaves})"


def region_states(model: AnyonModel, m: int) -> list[RegionState]:
    sub = FusionTreeBasis(model, m)
    out = []
    for i, st in enumerate(sub.states):
        leaves = sub.leaves(st)
        inner_spans = [s for s in sub.spans if s[0] != s[1]]
        internals = tuple(sub.charge(st, s) for s in inner_spans)
        out.append(RegionState(i, leaves, internals, sub.total(st)))
    return out


def _factored(model: AnyonModel, n_modes: int, m: int):
    """Recoupling to the region-factored shape plus span bookkeeping."""
    basis = FusionTreeBasis(model, n_modes)
    w = recouple(basis, _region_shape(n_modes, m))
    fact = w.row_basis
    region_spans = [s for s in fact.spans if s[1] <= m - 1]
    rest_spans = [s for s in fact.spans if s[0] >= m]
    return w, fact, region_spans, rest_spans


def _region_part(fact: FusionTreeBasis, state, region_spans) -> tuple[int, ...]:
    return tuple(state[fact._span_pos[s]] for s in region_spans)


def _rest_part(fact: FusionTreeBasis, state, rest_spans, n_modes: int, m: int):
    root = () if m == n_modes else (state[fact._span_pos[(0, n_modes - 1)]],)
    return tuple(state[fact._span_pos[s]] for s in rest_spans) + root


def _region_state_key(model: AnyonModel, x: RegionState) -> tuple[int, ...]:
    """The region-span charge tuple of ``x`` in span order of the M-mode comb."""
    m = len(x.leaves)
    sub = FusionTreeBasis(model, m)
    charges = {}
    for i, a in enumerate(x.leaves):
        charges[(i, i)] = a
    inner_spans = [s for s in sub.spans if s[0] != s[1]]
    for s, d in zip(inner_spans, x.internals):
        charges[s] = d
    return tuple(charges[s] for s in sub.spans)


def observable_basis(model: AnyonModel, n_modes: int, m: int):
    """The operators ``E_{x,x'} = |x><x'| (x) id`` spanning region observables.

    Returns ``(pairs, ops)`` where ``pairs`` lists the (x, x') region-state
    pairs of equal charge and ``ops`` the corresponding canonical-basis
    operators.
    """
    if not 1 <= m <= n_modes:
        raise ValueError(f"region size {m} out of range")
    cache = _cache(model)
    key = ("observable-basis", n_modes, m)
    if key in cache:
        return cache[key]
    w, fact, region_spans, rest_spans = _factored(model, n_modes, m)
    states = region_states(model, m)
    by_key: dict[tuple[int, ...], list[int]] = {}
    for col, st in enumerate(fact.states):
        by_key.setdefault(_region_part(fact, st, region_spans), []).append(col)

    rest_key = {}
    for col, st in enumerate(fact.states):
        rest_key[col] = _rest_part(fact, st, rest_spans, n_modes, m)

    pairs = []
    ops = []
    for x in states:
        for xp in states:
            if x.charge != xp.charge:
                continue
            kx = _region_state_key(model, x)
            kxp = _region_state_key(model, xp)
            cols = by_key.get(kxp, [])
            rows_by_rest = {
                rest_key[r]: r for r in by_key.get(kx, [])
            }
            entries = {}
            for col in cols:
                row = rows_by_rest.get(rest_key[col])
                if row is not None:
                    entries[(row, col)] = 1.0
            mid = SparseOperator.from_entries(fact, fact, entries)
            pairs.append((x, xp))
            ops.append((w.dagger() @ mid @ w).drop())
    cache[key] = (pairs, ops)
    return pairs, ops


def candidate_local_basis(model: AnyonModel, n_modes: int, mode: int = 1):
    """Basis of the candidate local algebra of a single mode.

    Elements ``A^{a,a',b0}_{d,d'} = sum_y |a,y;d><a',y;d'|`` in the
    factored shape, with ``y`` running over rest labelings of charge ``b0``,
    ``d`` a channel of ``a x b0`` and ``d'`` of ``a' x b0``.  These include
    total-charge changing elements (d != d'); for a Fibonacci mode with rest
    charges {e, tau} there are 13 of them.  ``mode > 1`` braids the basis
    into place.
    """
    from .ladder import transport_to_mode

    w, fact, region_spans, rest_spans = _factored(model, n_modes, 1)
    leaf_pos = fact._span_pos[(0, 0)]
    root_pos = fact._span_pos[fact.root_span]
    rest_span = (1, n_modes - 1) if n_modes > 1 else None

    by_rest: dict[tuple, list[int]] = {}
    for col, st in enumerate(fact.states):
        rest = tuple(st[fact._span_pos[s]] for s in rest_spans)
        by_rest.setdefault(rest, []).append(col)

    available = rest_charges(model, n_modes)
    elements = []
    for b0 in available:
        for a in range(model.n_labels):
            for d in model.fuse(a, b0):
                for ap in range(model.n_labels):
                    for dp in model.fuse(ap, b0):
                        entries = {}
                        for rest, cols in by_rest.items():
                            if n_modes > 1:
                                rest_charge = rest[rest_spans.index(rest_span)]
                                if rest_charge != b0:
                                    continue
                            row = col = None
                            for i in cols:
                                st = fact.states[i]
                                if st[leaf_pos] == a and st[root_pos] == d:
                                    row = i
                                if st[leaf_pos] == ap and st[root_pos] == dp:
                                    col = i
                            if row is not None and col is not None:
                                entries[(row, col)] = 1.0
                        op = (w.dagger() @ SparseOperator.from_entries(fact, fact, entries) @ w).drop()
                        meta = {
                            "a": model.labels[a],
                            "a_prime": model.labels[ap],
                            "b0": model.labels[b0],
                            "d": model.labels[d],
                            "d_prime": model.labels[dp],
                        }
                        elements.append((meta, transport_to_mode(op, mode)))
    return elements


def complement_observable_basis(model: AnyonModel, n_modes: int, m: int):
    """Spanning set of observables local on the complement ``{M+1..N}``.

    Mirror images of :func:`observable_basis`: for rest labelings ``y, y'``
    of equal charge, ``T = sum_{x,G} |x,y;G><x,y';G|`` acts trivially on the
    region factor and on the overall fusion channel.  Every operator in the
    candidate-local span of ``{1..M}`` commutes with every element here.
    """
    w, fact, region_spans, rest_spans = _factored(model, n_modes, m)
    if m == n_modes:
        return []
    root_pos = fact._span_pos[fact.root_span]
    b0_pos = fact._span_pos[(m, n_modes - 1)]

    by_y: dict[tuple, dict] = {}
    b0_of_y: dict[tuple, int] = {}
    for i, st in enumerate(fact.states):
        y = tuple(st[fact._span_pos[s]] for s in rest_spans)
        x = _region_part(fact, st, region_spans)
        by_y.setdefault(y, {})[(x, st[root_pos])] = i
        b0_of_y[y] = st[b0_pos]

    ops = []
    keys = sorted(by_y)
    for y1 in keys:
        for y2 in keys:
            if b0_of_y[y1] != b0_of_y[y2]:
                continue
            left, right = by_y[y1], by_y[y2]
            entries = {
                (row, right[xg]): 1.0 for xg, row in left.items() if xg in right
            }
            if entries:
                ops.append((w.dagger() @ SparseOperator.from_entries(fact, fact, entries) @ w).drop())
    return ops


def local_candidate_span(model: AnyonModel, n_modes: int, m: int):
    """Spanning set of all candidate-local operators of region ``{1..M}``.

    Elements ``A = sum_{y: b0} |x,y;G><x',y;G'|`` resolve the rest charge
    ``b0`` and may change the total charge (``x, x'`` of any charges).  The
    single-mode case reproduces the 13-element Fibonacci set; ``m == n``
    gives the full matrix algebra.
    """
    cache = _cache(model)
    key = ("candidate-span", n_modes, m)
    if key in cache:
        return cache[key]
    w, fact, region_spans, rest_spans = _factored(model, n_modes, m)
    root_pos = fact._span_pos[fact.root_span]

    # group factored states by (region part, rest labeling, root)
    groups: dict[tuple, dict] = {}
    for i, st in enumerate(fact.states):
        x = _region_part(fact, st, region_spans)
        y = tuple(st[fact._span_pos[s]] for s in rest_spans)
        G = st[root_pos]
        b0 = (
            st[fact._span_pos[(m, n_modes - 1)]]
            if m < n_modes
            else model.vacuum
        )
        groups.setdefault((b0, y), {})[(x, G)] = i

    pairs_by_b0: dict[int, set] = {}
    for (b0, _y), members in groups.items():
        pairs_by_b0.setdefault(b0, set()).update(members.keys())

    metas = []
    ops = []
    for b0 in sorted(pairs_by_b0):
        pairs = sorted(pairs_by_b0[b0])
        for (x, G) in pairs:
            for (xp, Gp) in pairs:
                entries = {}
                for (b0g, _y), grp in groups.items():
                    if b0g != b0:
                        continue
                    row = grp.get((x, G))
                    col = grp.get((xp, Gp))
                    if row is not None and col is not None:
                        entries[(row, col)] = 1.0
                if not entries:
                    continue
                metas.append({"b0": model.labels[b0], "x": x, "G": G, "xp": xp, "Gp": Gp})
                ops.append((w.dagger() @ SparseOperator.from_entries(fact, fact, entries) @ w).drop())
    cache[key] = (metas, ops)
    return metas, ops


def _candidate_frame(model: AnyonModel, n_modes: int, m: int) -> np.ndarray:
    cache = _cache(model)
    key = ("candidate-frame", n_modes, m)
    if key in cache:
        return cache[key]
    _, ops = local_candidate_span(model, n_modes, m)
    stack = np.stack([op.to_dense().ravel() for op in ops], axis=1)
    cache[key] = stack
    return stack


def mode_relabel_unitary(model: AnyonModel, n_modes: int, modes) -> SparseOperator:
    """Braid-word unitary ``U`` with ``U A_S U^dagger = A_{1..M}``.

    ``U`` is a product of under-crossings pulling the region modes
    ``S = {s_1 < .. < s_M}`` to the front while staying behind the others;
    conjugation by ``U^dagger`` maps the annihilation operators of mode ``k``
    to those of mode ``s_k``.
    """
    s = sorted(modes)
    if len(set(s)) != len(s):
        raise ValueError("region modes must be distinct")
    if s and (s[0] < 1 or s[-1] > n_modes):
        raise ValueError(f"region modes {s} out of range for {n_modes} modes")
    m = len(s)
    word = []
    for i in range(m):
        target = s[m - 1 - i]
        for j in range(m - i + 1, target + 1):
            word.append((j - 1, "under"))
    return braid_word(model, n_modes, word)


def is_local_candidate(op: SparseOperator, modes, tol: float = 1e-10):
    """Whether ``op`` lies in the candidate-local span of the region ``modes``.

    The region is braided to the front and ``op`` is fitted against the
    rest-charge-resolved spanning set (which contains all ladder operators of
    the region, including total-charge changing ones).  Returns
    ``(flag, residual)`` with ``residual`` the largest unfitted entry.
    Charge-changing local elements cannot commute with all complement
    operators, so locality is a span condition here, not a commutant one.
    """
    basis = op.row_basis
    model = basis.model
    n = basis.n_modes
    s = sorted(modes)
    u = mode_relabel_unitary(model, n, s)
    moved = (u @ op @ u.dagger()).drop()
    stack = _candidate_frame(model, n, len(s))
    target = moved.to_dense().ravel()
    coeffs, *_ = np.linalg.lstsq(stack, target, rcond=None)
    residual = float(np.abs(stack @ coeffs - target).max())
    return residual <= tol, residual


# ---------------------------------------------------------------------------
# Master-equation operators
# ---------------------------------------------------------------------------


def _element(model: AnyonModel, n_modes: int, a: int, b0: int, c0: int, mode: int):
    from .ladder import annihilating_element

    labels = model.labels
    return annihilating_element(model, n_modes, labels[a], labels[b0], labels[c0], mode)


def system_totals(model: AnyonModel, n_modes: int, x: RegionState) -> tuple[int, ...]:
    """Total charges ``g`` the region content ``x`` can coexist with."""
    out = set()
    for b0 in rest_charges(model, n_modes):
        out.update(model.fuse(x.charge, b0))
    return tuple(sorted(out))


def _charge_index(model: AnyonModel, g) -> int:
    return g if isinstance(g, (int, np.integer)) else model.index(g)


def _as_region_state(model: AnyonModel, leaves, internals) -> RegionState:
    """Normalize label/index sequences into a fusion-consistent RegionState."""
    a = tuple(_charge_index(model, v) for v in leaves)
    d = tuple(_charge_index(model, v) for v in internals)
    if not a:
        raise ValueError("region content needs at least one leaf charge")
    if len(d) != len(a) - 1:
        raise ValueError(
            f"{len(a)} leaves need {len(a) - 1} internal charges, got {len(d)}"
        )
    cur = a[0]
    for step, (leaf, nxt) in enumerate(zip(a[1:], d), start=1):
        if nxt not in model.fuse(cur, leaf):
            raise ValueError(
                f"internal charge {model.labels[nxt]} at step {step} is not a "
                f"fusion outcome of {model.labels[cur]} x {model.labels[leaf]}"
            )
        cur = nxt
    charge = d[-1] if d else a[0]
    return RegionState(-1, a, d, charge)


def o_operator(model: AnyonModel, n_modes: int, leaves, internals, g) -> SparseOperator:
    """The operator ``O_{a,d,g}`` of the constructive decomposition, as a matrix.

    ``O = prod_{p=M..2} (sum_{b,c} [F^{d_{p-2} a_p b}_g]^*_{d_{p-1} c}
    (a_p)^{b,c}_p) . (sum_{b} (a_1)^{b,g}_1)`` with ``d_0 = a_1`` and ``g``
    the total charge of the whole chain; factors ordered mode M leftmost,
    the mode-1 factor acting first.  Summing ``O^dagger_{x,g} O_{x',g}``
    over ``g`` yields the observable ``|x><x'| (x) id``.
    """
    x = _as_region_state(model, leaves, internals)
    gi = _charge_index(model, g)
    m = len(x.leaves)
    ds = (x.leaves[0],) + x.internals  # d_0 = a_1, d_1 .. d_{M-1}
    basis = FusionTreeBasis(model, n_modes)
    available = set(rest_charges(model, n_modes))

    mode1 = SparseOperator.zero(basis)
    for b in range(model.n_labels):
        if b in available and gi in model.fuse(x.leaves[0], b):
            mode1 = mode1 + _element(model, n_modes, x.leaves[0], b, gi, 1)
    result = mode1
    for p in range(2, m + 1):
        a_p = x.leaves[p - 1]
        d_prev = ds[p - 2]
        d_cur = ds[p - 1]
        factor = SparseOperator.zero(basis)
        for b in range(model.n_labels):
            if b not in available:
                continue
            for c in model.fuse(a_p, b):
                weight = np.conj(model.f_entry(d_prev, a_p, b, gi, d_cur, c))
                if abs(weight) <= 1e-14:
                    continue
                factor = factor + weight * _element(model, n_modes, a_p, b, c, p)
        result = (factor @ result).drop()
    return result


def abelian_sum_polynomial(model: AnyonModel, a: int, k: int) -> LadderPolynomial:
    """Polynomial for ``sum_{b abelian} (a)_k^{b, a x b}``.

    Individual abelian-rest elements are not ladder-expressible; only this
    sum is.  It equals ``alpha^(0)`` minus the multi-channel first-channel
    elements minus the non-abelian single-channel elements.
    """
    if a == model.vacuum:
        # sum_{b abelian} (e)^{b,b} = P(mode k = e) - non-abelian (e)^{b,b} terms
        poly = _vacuum_projector_polynomial(model, k)
        for b in range(model.n_labels):
            if not model.abelian[b]:
                poly = poly - element_polynomial(model, k, a, b, b)
        return poly
    label = model.labels[a]
    sym0 = GeneratorSymbol(k, "std", label, 0, False)
    poly = LadderPolynomial.generator(sym0)
    for b in range(model.n_labels):
        channels = model.fuse(a, b)
        if len(channels) > 1:
            poly = poly - element_polynomial(model, k, a, b, channels[0])
        elif not model.abelian[b]:
            poly = poly - element_polynomial(model, k, a, b, channels[0])
    return poly


def _vacuum_projector_polynomial(model: AnyonModel, k: int) -> LadderPolynomial:
    """``P(mode k = vacuum) = alpha^(0)_k alpha^(0)_k^dagger`` of any particle."""
    particle = next(
        (i for i in range(model.n_labels) if i != model.vacuum), None
    )
    if particle is None:
        raise ModelDataError("model has no non-vacuum particle type")
    label = model.labels[particle]
    sym = GeneratorSymbol(k, "std", label, 0, False)
    return LadderPolynomial([(1.0, (sym, sym.adjoint()))])


def element_polynomial(model: AnyonModel, k: int, a: int, b0: int, c0: int) -> LadderPolynomial:
    """Ladder polynomial of the annihilating element ``(a)_k^{b0,c0}``.

    Requires ``b0`` non-abelian, or ``a`` the vacuum with ``b0`` non-abelian;
    abelian rests are only expressible through
    :func:`abelian_sum_polynomial`.
    """
    if model.abelian[b0]:
        raise ModelDataError(
            "elements with an abelian rest charge are not individually "
            "ladder-expressible; use abelian_sum_polynomial"
        )
    if a == model.vacuum:
        # (e)^{b,b} = Q Q^dagger with Q the polynomial of (a_s)^{b, c_t}
        a_s, c_t = _multichannel_partner(model, b0)
        q = element_polynomial(model, k, a_s, b0, c_t)
        return q @ q.adjoint()

    label = model.labels[a]
    channels = model.fuse(a, b0)
    tables = coefficient_tables(model, label)
    sym0 = GeneratorSymbol(k, "std", label, 0, False)
    a0 = LadderPolynomial.generator(sym0)

    def offfirst_poly(c: int) -> LadderPolynomial:
        j = _table_selecting(model, tables, b0, c)
        symj = GeneratorSymbol(k, "std", label, j, False)
        aj = LadderPolynomial.generator(symj)
        return aj - LadderPolynomial([(1.0, (symj, sym0.adjoint(), sym0))])

    if len(channels) > 1:
        if c0 != channels[0]:
            return offfirst_poly(c0)
        # first channel: alpha^(0) - alpha^(j) + (a)^{b0, c_2}
        j = _table_selecting(model, tables, b0, channels[1])
        symj = GeneratorSymbol(k, "std", label, j, False)
        return (
            a0
            - LadderPolynomial.generator(symj)
            + offfirst_poly(channels[1])
        )

    # single channel, non-abelian b0: projector trick
    a_s, c_t = _multichannel_partner(model, b0)
    q = element_polynomial(model, k, a_s, b0, c_t)
    single_sum = a0 * 1.0
    for b in range(model.n_labels):
        chans = model.fuse(a, b)
        if len(chans) > 1:
            single_sum = single_sum - element_polynomial(model, k, a, b, chans[0])
    return q @ q.adjoint() @ single_sum


def _table_selecting(model: AnyonModel, tables, b0: int, c0: int) -> int:
    b_label = model.labels[b0]
    c_label = model.labels[c0]
    for table in tables[1:]:
        if abs(table.coefficient(b_label, c_label) - 1.0) < 1e-12:
            return table.j
    raise ModelDataError(
        f"no coefficient table selects channel {c_label} for rest {b_label}"
    )


def _multichannel_partner(model: AnyonModel, b0: int) -> tuple[int, int]:
    """First particle with >= 2 channels against ``b0`` and its second channel."""
    for a_s in range(model.n_labels):
        channels = model.fuse(a_s, b0)
        if len(channels) > 1:
            return a_s, channels[1]
    raise ModelDataError(
        f"particle {model.labels[b0]} has single-channel fusion with every type; "
        "it is abelian"
    )


def o_polynomial(model: AnyonModel, n_modes: int, leaves, internals, g) -> LadderPolynomial:
    """Ladder polynomial realizing ``O_{a,d,g}`` on region modes ``1..M``.

    Abelian-rest terms inside each factor are only expressible through the
    full abelian sum, so the realized operator can differ from the strict
    :func:`o_operator` by extra abelian-rest terms living in other
    total-charge sectors.  Observable reconstruction is unaffected: the
    decomposition fits coefficients against the evaluated polynomial
    products themselves.  A factor whose compatible abelian rests carry
    different F-weights has no ladder realization and raises
    ``ModelDataError``.
    """
    x = _as_region_state(model, leaves, internals)
    gi = _charge_index(model, g)
    m = len(x.leaves)
    ds = (x.leaves[0],) + x.internals
    available = set(rest_charges(model, n_modes))

    def factor_polynomial(p: int) -> LadderPolynomial:
        poly = LadderPolynomial()
        if p == 1:
            a_p = x.leaves[0]
            contributions = [
                (b, gi, 1.0)
                for b in range(model.n_labels)
                if b in available and gi in model.fuse(a_p, b)
            ]
        else:
            a_p = x.leaves[p - 1]
            d_prev, d_cur = ds[p - 2], ds[p - 1]
            contributions = []
            for b in range(model.n_labels):
                if b not in available:
                    continue
                for c in model.fuse(a_p, b):
                    weight = np.conj(model.f_entry(d_prev, a_p, b, gi, d_cur, c))
                    if abs(weight) > 1e-14:
                        contributions.append((b, c, weight))
        abelian_weights = []
        for b, c, weight in contributions:
            if model.abelian[b]:
                abelian_weights.append(weight)
            else:
                poly = poly + weight * element_polynomial(model, p, a_p, b, c)
        if abelian_weights:
            w0 = abelian_weights[0]
            if any(abs(w - w0) > 1e-12 for w in abelian_weights[1:]):
                raise ModelDataError(
                    f"factor at mode {p} mixes abelian rest charges with "
                    "different F-weights; no ladder realization exists"
                )
            poly = poly + w0 * abelian_sum_polynomial(model, a_p, p)
        return poly

    result = factor_polynomial(1)
    for p in range(2, m + 1):
        result = factor_polynomial(p) @ result
    return result


# ---------------------------------------------------------------------------
# Resolvers
# ---------------------------------------------------------------------------


def std_resolver(model: AnyonModel, n_modes: int):
    """Resolver mapping std generator symbols to matrices (cached per model)."""
    cache = _cache(model)

    def resolve(symbol: GeneratorSymbol) -> SparseOperator:
        if symbol.dagger:
            raise ValueError("resolver expects undaggered symbols")
        if symbol.kind != "std":
            raise KeyError(f"not a std symbol: {symbol}")
        key = ("ladder-set", n_modes, symbol.particle)
        if key not in cache:
            cache[key] = ladder_set(model, n_modes, symbol.particle)
        return cache[key].op(symbol.mode, symbol.j)

    return resolve


def combined_resolver(model: AnyonModel, n_modes: int):
    """Resolver for both std and Fibonacci pair symbols."""
    std = std_resolver(model, n_modes)
    cache = _cache(model)

    def resolve(symbol: GeneratorSymbol) -> SparseOperator:
        if symbol.kind == "std":
            return std(symbol)
        key = ("pair", n_modes)
        if key not in cache:
            cache[key] = fibonacci_pair(model, n_modes)
        pair = cache[key]
        family = pair.alpha if symbol.particle == "alpha" else pair.beta
        return family[symbol.mode]

    return resolve


def _word_cache(model: AnyonModel, n_modes: int) -> dict:
    cache = _cache(model)
    key = ("word-cache", n_modes)
    if key not in cache:
        cache[key] = {}
    return cache[key]


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


@dataclass
class Decomposition:
    """Result of decomposing a local observable into ladder polynomials.

    ``coefficients`` maps ``(x_label, x'_label, variant)`` to the fitted
    weight of that realizable product column; ``variant`` is ``"sum"`` for
    the total-charge sum and ``"distinct"`` for its deduplicated form (only
    present when abelian-rest realizations repeat across charges).
    """

    modes: tuple[int, ...]
    polynomial: LadderPolynomial
    coefficients: dict[tuple[str, str, str], complex]
    span_residual: float
    eval_residual: float

    def summary(self) -> str:
        lines = [
            f"modes: {list(self.modes)}",
            f"span residual: {self.span_residual:.3e}",
            f"evaluation residual: {self.eval_residual:.3e}",
            f"terms: {self.polynomial.n_terms}",
        ]
        return "\n".join(lines)


def _observable_frame(model: AnyonModel, n_modes: int, m: int):
    """Cached (pairs, stacked dense E-matrices) for least-squares fitting."""
    cache = _cache(model)
    key = ("observable-frame", n_modes, m)
    if key in cache:
        return cache[key]
    pairs, ops = observable_basis(model, n_modes, m)
    stack = np.stack([op.to_dense().ravel() for op in ops], axis=1)
    cache[key] = (pairs, ops, stack)
    return cache[key]


def _product_frame(model: AnyonModel, n_modes: int, m: int):
    """Evaluated products ``sum_g P_{x,g}^dagger P_{x',g}`` per observable pair.

    Returns ``(entries, polys, stack)``: ``entries[i]`` is
    ``(x, x', variant)``, ``polys[i]`` the ladder polynomial on modes
    ``1..M`` and ``stack[:, i]`` its evaluated dense matrix, flattened.
    Coefficients are fitted against these evaluated matrices, so
    decompositions evaluate back exactly even when the polynomials differ
    from the strict master-equation operators by abelian-sum terms.

    Abelian-rest realizations can coincide for several total charges ``g``;
    the plain g-sum then over-counts sectors, so for such pairs a second
    ``distinct`` variant summing each distinct realization pair once is
    added to the frame.
    """
    cache = _cache(model)
    key = ("product-frame", n_modes, m)
    if key in cache:
        return cache[key]
    pairs, _ops = observable_basis(model, n_modes, m)
    states = region_states(model, m)
    resolver = std_resolver(model, n_modes)
    identity = SparseOperator.identity(FusionTreeBasis(model, n_modes))
    word_cache = _word_cache(model, n_modes)

    factor_polys: dict[tuple[int, int], LadderPolynomial] = {}
    for x in states:
        for g in system_totals(model, n_modes, x):
            try:
                factor_polys[(x.index, g)] = o_polynomial(
                    model, n_modes, x.leaves, x.internals, g
                )
            except ModelDataError:
                pass  # no realization; that (x, g) piece is left out of the span

    entries = []
    polys = []
    columns = []
    for x, xp in pairs:
        total = LadderPolynomial()
        distinct = LadderPolynomial()
        seen_signatures = set()
        duplicates = False
        for g in system_totals(model, n_modes, x):
            left = factor_polys.get((x.index, g))
            right = factor_polys.get((xp.index, g))
            if left is None or right is None:
                continue
            term = left.adjoint() @ right
            total = total + term
            sig = (left.signature(), right.signature())
            if sig in seen_signatures:
                duplicates = True
            else:
                seen_signatures.add(sig)
                distinct = distinct + term
        variants = [("sum", total)]
        if duplicates:
            variants.append(("distinct", distinct))
        for variant, poly in variants:
            evaluated = poly.evaluate_with_identity(resolver, identity, cache=word_cache)
            entries.append((x, xp, variant))
            polys.append(poly)
            columns.append(evaluated.to_dense().ravel())
    stack = np.stack(columns, axis=1)
    cache[key] = (entries, polys, stack)
    return cache[key]


def decompose_observable(
    op: SparseOperator, modes, tolerance: float = 1e-10
) -> Decomposition:
    """Write a local observable as a polynomial in the region's ladder operators.

    ``op`` must act on the canonical basis, preserve the total charge and be
    supported on the local-observable span of the (behind-bipartition) region
    ``modes``; otherwise a ``ValueError`` reports the violation.  The returned
    polynomial evaluates back to ``op`` within ``tolerance`` (the residual is
    recorded on the result).
    """
    basis = op.row_basis
    model = basis.model
    n = basis.n_modes
    s = tuple(sorted(modes))
    m = len(s)
    if m < 1 or s[0] < 1 or s[-1] > n:
        raise ValueError(f"invalid region {s} for {n} modes")

    if not op.is_charge_diagonal():
        totals = basis.totals()
        row, col = next(
            (int(r), int(c))
            for (r, c) in zip(*op.matrix.nonzero())
            if totals[r] != totals[c]
        )
        raise ValueError(
            "operator changes the total charge "
            f"({model.labels[totals[col]]} -> {model.labels[totals[row]]}); "
            "not an observable"
        )

    # Identity component short-circuit: lambda * id is the constant polynomial.
    dense = op.to_dense()
    lam = np.trace(dense) / basis.dim
    if np.abs(dense - lam * np.eye(basis.dim)).max() <= tolerance:
        return Decomposition(s, LadderPolynomial.constant(lam), {}, 0.0, 0.0)

    u = mode_relabel_unitary(model, n, s)
    moved = (u @ op @ u.dagger()).drop()

    entries, polys, stack = _product_frame(model, n, m)
    target = moved.to_dense().ravel()
    coeffs, *_ = np.linalg.lstsq(stack, target, rcond=None)
    span_residual = float(np.abs(stack @ coeffs - target).max())
    if span_residual > tolerance:
        raise ValueError(
            f"operator is not local on modes {list(s)} "
            f"(span residual {span_residual:.3e})"
        )

    mode_map = {k + 1: s[k] for k in range(m)}
    polynomial = LadderPolynomial()
    coefficients: dict[tuple[str, str, str], complex] = {}
    for c, (x, xp, variant), poly in zip(coeffs, entries, polys):
        if abs(c) <= 1e-13:
            continue
        polynomial = polynomial + complex(c) * poly
        coefficients[(x.label(model), xp.label(model), variant)] = complex(c)
    polynomial = polynomial.relabel_modes(mode_map)

    resolver = std_resolver(model, n)
    word_cache = _word_cache(model, n)
    evaluated = polynomial.evaluate_with_identity(
        resolver, SparseOperator.identity(basis), cache=word_cache
    )
    eval_residual = float((evaluated - op).norm_max())
    return Decomposition(s, polynomial, coefficients, span_residual, eval_residual)


# ---------------------------------------------------------------------------
# Relation suite
# ---------------------------------------------------------------------------


@dataclass
class RelationReport:
    n_modes: int
    tolerance: float
    asserted: list[tuple[str, float]] = field(default_factory=list)
    reported: list[tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for _, r in self.asserted)

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.asserted), default=0.0)

    def format_text(self) -> str:
        lines = [f"modes: {self.n_modes}", f"tolerance: {self.tolerance:.3e}"]
        for name, residual in self.asserted:
            status = "pass" if residual <= self.tolerance else "FAIL"
            lines.append(f"  [{status}] {name}: residual={residual:.3e}")
        for name, text in self.reported:
            lines.append(f"  [info] {name}: {text}")
        lines.append(f"result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def verify_relations(model: AnyonModel, n_modes: int, tolerance: float = 1e-10) -> RelationReport:
    """Check the single-mode relations of the unnormalised Fibonacci pair.

    Six families are asserted per mode; the printed completeness relation
    (whose last term is ``alpha beta^dagger alpha beta^dagger``) and the
    disjoint-support statement for different modes are measured and reported,
    never asserted.
    """
    pair = fibonacci_pair(model, n_modes)
    basis = FusionTreeBasis(model, n_modes)
    identity = SparseOperator.identity(basis)
    report = RelationReport(n_modes, tolerance)

    for k in range(1, n_modes + 1):
        al, be = pair.alpha[k], pair.beta[k]
        ald, bed = al.dagger(), be.dagger()
        report.asserted.append((f"alpha_{k}^2 = 0", (al @ al).norm_max()))
        report.asserted.append(
            (
                f"alpha_{k} beta_{k} = beta_{k} alpha_{k} = 0",
                max((al @ be).norm_max(), (be @ al).norm_max()),
            )
        )
        report.asserted.append(
            (
                f"alpha_{k} alpha_{k}^+ = beta_{k} beta_{k}^+",
                (al @ ald - be @ bed).norm_max(),
            )
        )
        chain = [al @ bed @ be, al @ bed @ al, be @ ald @ al, be @ ald @ be]
        worst = max(
            (chain[i] - chain[j]).norm_max()
            for i in range(len(chain))
            for j in range(i + 1, len(chain))
        )
        report.asserted.append((f"mixed third-order chain equalities (mode {k})", worst))
        report.asserted.append(
            (
                f"alpha_{k} alpha_{k}^+ alpha_{k} = alpha_{k} - beta_{k} alpha_{k}^+ alpha_{k}",
                (al @ ald @ al - (al - be @ ald @ al)).norm_max(),
            )
        )
        report.asserted.append(
            (
                f"beta_{k} beta_{k}^+ beta_{k} = beta_{k} - alpha_{k} beta_{k}^+ beta_{k}",
                (be @ bed @ be - (be - al @ bed @ be)).norm_max(),
            )
        )

        base = bed @ be + ald @ al + al @ ald
        printed = base + (al @ bed @ al @ bed)
        variant_single = base + (al @ bed)
        variant_scaled = base + 2.0 * (al @ bed @ al @ bed)
        report.reported.append(
            (
                f"completeness (mode {k})",
                "printed residual={:.3e}; +alpha beta^+ residual={:.3e}; "
                "+2(alpha beta^+)^2 residual={:.3e}".format(
                    (printed - identity).norm_max(),
                    (variant_single - identity).norm_max(),
                    (variant_scaled - identity).norm_max(),
                ),
            )
        )

    for a_mode in range(1, n_modes + 1):
        for b_mode in range(a_mode + 1, n_modes + 1):
            ab = pair.alpha[a_mode] @ pair.alpha[b_mode]
            ba = pair.alpha[b_mode] @ pair.alpha[a_mode]
            cols_ab = {j for _, j, _ in ab.entries()}
            cols_ba = {j for _, j, _ in ba.entries()}
            overlap = cols_ab & cols_ba
            report.reported.append(
                (
                    f"support alpha_{a_mode} alpha_{b_mode} vs alpha_{b_mode} alpha_{a_mode}",
                    f"supports {sorted(cols_ab)} and {sorted(cols_ba)}; "
                    f"disjoint={not overlap}",
                )
            )
    return report


# ---------------------------------------------------------------------------
# Fock words
# ---------------------------------------------------------------------------


def vacuum_index(basis: FusionTreeBasis) -> int:
    e = basis.model.vacuum
    target = tuple(e for _ in basis.spans)
    return basis.index[target]


def fock_words(model: AnyonModel, n_modes: int):
    """Creation words reaching every canonical state from the vacuum.

    Returns a dict ``state_index -> (scalar, word)`` with
    ``|state> = scalar * word|0>`` where ``word`` is a product of daggered
    ``alpha_k``/``beta_k`` symbols (leftmost applied last).  Words are found
    breadth-first, keeping only steps that land on a single canonical state.
    """
    pair = fibonacci_pair(model, n_modes)
    basis = FusionTreeBasis(model, n_modes)
    vac = vacuum_index(basis)

    creators = []
    for k in range(1, n_modes + 1):
        creators.append(
            (GeneratorSymbol(k, "pair", "alpha", 0, True), pair.alpha[k].dagger())
        )
        creators.append(
            (GeneratorSymbol(k, "pair", "beta", 0, True), pair.beta[k].dagger())
        )

    reached: dict[int, tuple[complex, tuple[GeneratorSymbol, ...]]] = {vac: (1.0, ())}
    frontier = [vac]
    while frontier:
        next_frontier = []
        for idx in frontier:
            amp, word = reached[idx]
            vec = np.zeros(basis.dim, dtype=complex)
            vec[idx] = 1.0
            for sym, mat in creators:
                out = mat.apply(vec)
                nz = np.nonzero(np.abs(out) > 1e-12)[0]
                if len(nz) != 1:
                    continue
                new_idx = int(nz[0])
                if new_idx in reached:
                    continue
                reached[new_idx] = (amp * complex(out[new_idx]), (sym,) + word)
                next_frontier.append(new_idx)
        frontier = next_frontier

    return {
        idx: (1.0 / amp, word) for idx, (amp, word) in reached.items()
    }


def fock_word(model: AnyonModel, n_modes: int, state) -> tuple[complex, tuple]:
    """Creation word for one canonical state: ``|state> = scalar * word |0>``.

    ``state`` is a basis index or a labeling tuple.  Every canonical state is
    reachable for the bundled models; an unreachable state would mean the
    breadth-first construction itself is broken, hence the hard error.
    """
    basis = FusionTreeBasis(model, n_modes)
    idx = state if isinstance(state, (int, np.integer)) else basis.index[tuple(state)]
    cache = _cache(model)
    key = ("fock-words", n_modes)
    if key not in cache:
        cache[key] = fock_words(model, n_modes)
    words = cache[key]
    if idx not in words:
        raise RuntimeError(
            f"state {basis.state_label(idx)} was not reached from the vacuum; "
            "the creation-word search is incomplete"
        )
    return words[idx]


def apply_word(model: AnyonModel, n_modes: int, scalar: complex, word) -> np.ndarray:
    """Apply ``scalar * word`` to the vacuum; returns the dense state vector."""
    basis = FusionTreeBasis(model, n_modes)
    resolver = combined_resolver(model, n_modes)
    vec = np.zeros(basis.dim, dtype=complex)
    vec[vacuum_index(basis)] = scalar
    for sym in reversed(tuple(word)):
        base = resolver(sym.adjoint() if sym.dagger else sym)
        mat = base.dagger() if sym.dagger else base
        vec = mat.apply(vec)
    return vec


def kernel_dimension(model: AnyonModel, n_modes: int, tol: float = 1e-10) -> int:
    """Dimension of the joint kernel of all annihilation operators."""
    blocks = []
    for particle in model.labels:
        if particle == model.labels[model.vacuum]:
            continue
        ls = ladder_set(model, n_modes, particle)
        for (k, j), op in sorted(ls.ops.items()):
            blocks.append(op.to_dense())
    stacked = np.vstack(blocks)
    svals = np.linalg.svd(stacked, compute_uv=False)
    dim = stacked.shape[1]
    return int(np.sum(svals <= tol * max(1.0, svals.max()))) + max(0, dim - len(svals))


# ---------------------------------------------------------------------------
# Algebra closure
# ---------------------------------------------------------------------------


@dataclass
class ClosureResult:
    dimension: int
    converged: bool
    rounds: int
    onb: np.ndarray  # (dimension, dim*dim) orthonormal rows

    def contains(self, op: SparseOperator, tol: float = 1e-10) -> bool:
        vec = op.to_dense().ravel()
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            return True
        resid = vec - self.onb.T @ (self.onb.conj() @ vec)
        return bool(np.linalg.norm(resid) <= tol * norm)


def algebra_closure(
    generators,
    include_identity: bool = True,
    tol: float = 1e-10,
    max_rounds: int = 64,
    cap: int | None = None,
) -> ClosureResult:
    """Dimension and basis of the algebra generated by ``generators``.

    The generator list is closed under adjoints automatically; the span grows
    by left-multiplication with generators until stable (or ``max_rounds``).
    ``cap`` stops the growth early (``converged`` is then False) so callers
    can bound runtime on large systems.
    """
    if not generators:
        raise ValueError("need at least one generator")
    basis = generators[0].row_basis
    dim = basis.dim
    gens = []
    for g in generators:
        gens.append(g.to_dense())
        gens.append(g.to_dense().conj().T)

    seeds = [np.eye(dim, dtype=complex)] if include_identity else []
    seeds += gens

    onb: list[np.ndarray] = []

    def absorb(mat: np.ndarray) -> bool:
        vec = mat.ravel().astype(complex)
        for row in onb:
            vec = vec - row * np.vdot(row, vec)
        norm = np.linalg.norm(vec)
        if norm <= tol:
            return False
        onb.append(vec / norm)
        return True

    for seed in seeds:
        absorb(seed)

    limit = dim * dim if cap is None else min(cap, dim * dim)
    converged = False
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        grew = False
        current = [vec.reshape(dim, dim) for vec in list(onb)]
        for mat in current:
            for gen in gens:
                if absorb(gen @ mat):
                    grew = True
            if len(onb) > limit:
                break
        if len(onb) > limit:
            break  # cap exceeded: not converged
        if not grew:
            converged = True
            break
        if len(onb) >= dim * dim:
            converged = True
            break
    return ClosureResult(len(onb), converged, rounds, np.array(onb))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as orc
from anyonladder.basis import (
    FusionTreeBasis,
    SparseOperator,
    braid_adjacent,
    braid_word,
    recouple,
    total_charge_projector,
)
from anyonladder.trees import left_comb, right_comb

FOUR_LEAF_SHAPES = [
    (((0, 1), 2), 3),
    ((0, (1, 2)), 3),
    ((0, 1), (2, 3)),
    (0, ((1, 2), 3)),
    (0, (1, (2, 3))),
]


def _comb_perm(basis, oracle_states):
    """Package comb-state index -> oracle index, via the defining labels."""
    out = []
    for st in basis.states:
        a1, a2, a3 = basis.leaves(st)
        x = basis.charge(st, (0, 1))
        d = basis.charge(st, (0, 2))
        out.append(oracle_states.index((a1, a2, a3, x, d)))
    return np.array(out)


def _right_perm(basis, oracle_states):
    out = []
    for st in basis.states:
        a1, a2, a3 = basis.leaves(st)
        y = basis.charge(st, (1, 2))
        d = basis.charge(st, (0, 2))
        out.append(oracle_states.index((a1, a2, a3, y, d)))
    return np.array(out)


def test_dimensions_match_path_counting(fib, fermion, ising):
    for model in (fib, fermion, ising):
        for n in range(1, 9):
            basis = FusionTreeBasis(model, n)
            assert basis.dim == orc.total_dimension(model, n)


def test_fibonacci_dimension_sequence(fib):
    dims = [FusionTreeBasis(fib, n).dim for n in range(1, 7)]
    assert dims == [2, 5, 13, 34, 89, 233]


def test_sector_indices_partition(fib):
    basis = FusionTreeBasis(fib, 4)
    sizes = [len(basis.sector_indices(g)) for g in range(fib.n_labels)]
    assert sizes == [13, 21]
    together = np.sort(np.concatenate([basis.sector_indices(g) for g in (0, 1)]))
    assert np.array_equal(together, np.arange(basis.dim))
    counts = orc.path_counts(fib, 4)
    assert sizes == [counts[0], counts[1]]


def test_state_label_format(fib):
    basis = FusionTreeBasis(fib, 3)
    labels = [basis.state_label(i) for i in range(basis.dim)]
    assert len(set(labels)) == basis.dim
    assert all("e" in lab or "t" in lab for lab in labels)


def test_recouple_is_unitary(fib):
    basis = FusionTreeBasis(fib, 4)
    eye = np.eye(basis.dim)
    for shape in FOUR_LEAF_SHAPES:
        w = recouple(basis, shape)
        dense = w.matrix.toarray()
        assert np.allclose(dense.conj().T @ dense, eye, atol=1e-12)
        assert np.allclose(dense @ dense.conj().T, eye, atol=1e-12)
        assert w.is_charge_diagonal()
    canonical = recouple(basis, left_comb(0, 3)).matrix.toarray()
    assert np.allclose(canonical, eye)


def test_recoupling_matches_dense_oracle(fib, fermion, ising):
    for model in (fib, fermion, ising):
        basis = FusionTreeBasis(model, 3)
        u = orc.recoupling_matrix_3(model)
        w = recouple(basis, right_comb(0, 2))
        perm_c = _comb_perm(basis, orc.comb_states_3(model))
        perm_r = _right_perm(w.row_basis, orc.right_states_3(model))
        expected = u.conj().T[np.ix_(perm_r, perm_c)]
        assert np.allclose(w.matrix.toarray(), expected, atol=1e-12)


def test_braid_matches_dense_oracle(fib, fermion, ising):
    for model in (fib, fermion, ising):
        basis = FusionTreeBasis(model, 3)
        perm = _comb_perm(basis, orc.comb_states_3(model))
        for sense in ("over", "under"):
            b = braid_adjacent(model, 3, 1, sense).to_dense()
            o = orc.braid12_oracle(model, sense)[np.ix_(perm, perm)]
            assert np.allclose(b, o, atol=1e-12)


def test_braid_unitary_and_inverse(fib):
    eye = np.eye(FusionTreeBasis(fib, 4).dim)
    for k in (1, 2, 3):
        over = braid_adjacent(fib, 4, k, "over")
        under = braid_adjacent(fib, 4, k, "under")
        assert np.allclose((over @ under).to_dense(), eye, atol=1e-12)
        assert np.allclose((over @ over.dagger()).to_dense(), eye, atol=1e-12)


def test_yang_baxter(fib, ising):
    for model in (fib, ising):
        b1 = braid_adjacent(model, 3, 1)
        b2 = braid_adjacent(model, 3, 2)
        lhs = (b1 @ b2 @ b1).to_dense()
        rhs = (b2 @ b1 @ b2).to_dense()
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_distant_braids_commute(fib):
    b1 = braid_adjacent(fib, 4, 1)
    b3 = braid_adjacent(fib, 4, 3)
    assert np.allclose((b1 @ b3).to_dense(), (b3 @ b1).to_dense(), atol=1e-12)


def test_fermion_exchange_minus_sign(fermion):
    # two fermions in the vacuum channel pick up -1 under exchange
    basis = FusionTreeBasis(fermion, 2)
    b = braid_adjacent(fermion, 2, 1).to_dense()
    idx = [i for i, st in enumerate(basis.states) if basis.leaves(st) == (1, 1)]
    assert len(idx) == 1
    assert np.isclose(b[idx[0], idx[0]], -1.0)


def test_braid_word_composition(fib):
    w = braid_word(fib, 3, [(1, "over"), (2, "over")])
    direct = braid_adjacent(fib, 3, 1) @ braid_adjacent(fib, 3, 2)
    assert np.allclose(w.to_dense(), direct.to_dense(), atol=1e-12)


def test_total_charge_projectors(fib):
    basis = FusionTreeBasis(fib, 3)
    projs = [total_charge_projector(fib, 3, g) for g in fib.labels]
    acc = sum(p.to_dense() for p in projs)
    assert np.allclose(acc, np.eye(basis.dim))
    for p in projs:
        d = p.to_dense()
        assert np.allclose(d @ d, d)
    assert np.allclose((projs[0] @ projs[1]).to_dense(), 0.0)


def test_sparse_operator_algebra(fib):
    basis = FusionTreeBasis(fib, 2)
    a = SparseOperator.from_entries(basis, basis, {(0, 1): 2.0, (1, 0): 1j})
    assert a.dagger().dagger().allclose(a)
    assert (a + (-1.0) * a).nnz == 0
    assert np.allclose((2.0 * a).to_dense(), 2.0 * a.to_dense())
    vec = np.zeros(basis.dim, dtype=complex)
    vec[1] = 1.0
    assert np.isclose(a.apply(vec)[0], 2.0)
    tiny = SparseOperator.from_entries(basis, basis, {(0, 0): 1e-16})
    assert tiny.drop().nnz == 0


def test_charge_diagonality_detection(fib):
    basis = FusionTreeBasis(fib, 3)
    tot = basis.totals()
    r = int(np.nonzero(tot == 0)[0][0])
    c = int(np.nonzero(tot == 1)[0][0])
    mixing = SparseOperator.from_entries(basis, basis, {(r, c): 1.0})
    assert not mixing.is_charge_diagonal()
    keeping = SparseOperator.from_entries(basis, basis, {(r, r): 1.0})
    assert keeping.is_charge_diagonal()


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=3), st.sampled_from(["over", "under"]))
def test_braid_preserves_total_charge(k, sense):
    from anyonladder.model import builtin

    model = builtin("fibonacci")
    b = braid_adjacent(model, 4, k, sense)
    assert b.is_charge_diagonal()

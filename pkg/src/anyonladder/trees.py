"""Binary fusion-tree shapes and elementary recoupling moves.

A shape is a full binary parenthesization of the modes ``0 .. n-1`` in
order: a leaf is the mode index (int), an internal node is a pair
``(left, right)``.  Because leaves always stay in order, every internal
node is uniquely identified by the span ``(lo, hi)`` of leaves it covers,
and a labeling of a shape is a map from spans (including the leaf spans
``(i, i)``) to particle indices.

The only elementary move needed here rotates ``(A, (B, C))`` into
``((A, B), C)`` at a node; in the F-convention of :mod:`.model` the move
matrix from right-associated to left-associated coordinates is
``[F^{abc}_d]_{x,y}`` where ``a, b, c`` are the child charges, ``d`` the
node charge, ``y`` the old ``(B, C)`` charge and ``x`` the new ``(A, B)``
charge.  Any shape is reduced to the left comb by such rotations.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

__all__ = [
    "Shape",
    "is_leaf",
    "span",
    "left_comb",
    "right_comb",
    "fold_left",
    "internal_spans",
    "all_spans",
    "subtree",
    "rotate_right_to_left",
    "moves_to_left_comb",
    "enumerate_labelings",
]

Shape = object  # int leaf | tuple (left, right)


def is_leaf(shape) -> bool:
    return isinstance(shape, int)


def span(shape) -> tuple[int, int]:
    """Leaf span ``(lo, hi)`` covered by the (sub)shape."""
    if is_leaf(shape):
        return (shape, shape)
    lo, _ = span(shape[0])
    _, hi = span(shape[1])
    return (lo, hi)


def left_comb(lo: int, hi: int):
    """``((((lo, lo+1), lo+2), ...), hi)``."""
    shape = lo
    for leaf in range(lo + 1, hi + 1):
        shape = (shape, leaf)
    return shape


def right_comb(lo: int, hi: int):
    """``(lo, (lo+1, (..., hi)))``."""
    shape = hi
    for leaf in range(hi - 1, lo - 1, -1):
        shape = (leaf, shape)
    return shape


def fold_left(parts: Sequence):
    """Left-comb combination of already-built subshapes."""
    if not parts:
        raise ValueError("cannot fold an empty sequence of shapes")
    shape = parts[0]
    for part in parts[1:]:
        shape = (shape, part)
    return shape


def internal_spans(shape) -> list[tuple[int, int]]:
    found = []

    def walk(s):
        if is_leaf(s):
            return
        found.append(span(s))
        walk(s[0])
        walk(s[1])

    walk(shape)
    return sorted(found)


def all_spans(shape) -> list[tuple[int, int]]:
    lo, hi = span(shape)
    leaf = [(i, i) for i in range(lo, hi + 1)]
    return sorted(leaf + internal_spans(shape))


def subtree(shape, target: tuple[int, int]):
    """The subtree covering exactly ``target``; raises if absent."""
    lo, hi = span(shape)
    if (lo, hi) == target:
        return shape
    if is_leaf(shape):
        raise KeyError(f"span {target} not in shape")
    _, mid = span(shape[0])
    if target[1] <= mid:
        return subtree(shape[0], target)
    if target[0] > mid:
        return subtree(shape[1], target)
    raise KeyError(f"span {target} not in shape")


def rotate_right_to_left(shape, target: tuple[int, int]):
    """Rotate ``(A, (B, C)) -> ((A, B), C)`` at the node covering ``target``.

    Returns ``(new_shape, a_span, b_span, c_span)``; the node span itself is
    ``target``.  The labeling span removed is ``span(B)+span(C)`` and the one
    created is ``span(A)+span(B)``.
    """
    if is_leaf(shape):
        raise KeyError(f"span {target} not in shape")
    if span(shape) == target:
        left, right = shape
        if is_leaf(right):
            raise ValueError(f"node at {target} has no internal right child")
        b, c = right
        return ((left, b), c), span(left), span(b), span(c)
    _, mid = span(shape[0])
    if target[1] <= mid:
        new_left, a_s, b_s, c_s = rotate_right_to_left(shape[0], target)
        return (new_left, shape[1]), a_s, b_s, c_s
    if target[0] > mid:
        new_right, a_s, b_s, c_s = rotate_right_to_left(shape[1], target)
        return (shape[0], new_right), a_s, b_s, c_s
    raise KeyError(f"span {target} not in shape")


def moves_to_left_comb(shape) -> list[tuple[int, int]]:
    """Node spans at which to rotate, in order, to reach the left comb."""
    moves: list[tuple[int, int]] = []

    def process(s):
        if is_leaf(s):
            return s
        left, right = s
        while not is_leaf(right):
            moves.append(span((left, right)))
            rl, rr = right
            left = (left, rl)
            right = rr
        return (process(left), right)

    process(shape)
    return moves


def _label_options(model, shape, leaf_labels) -> Iterator[tuple[dict, int]]:
    """Yield (span->charge dict, root charge) for all valid labelings."""
    if is_leaf(shape):
        options = range(model.n_labels) if leaf_labels is None else [leaf_labels[shape]]
        for a in options:
            yield {(shape, shape): a}, a
        return
    left, right = shape
    node_span = span(shape)
    for lmap, lc in _label_options(model, left, leaf_labels):
        for rmap, rc in _label_options(model, right, leaf_labels):
            for c in model.fuse(lc, rc):
                merged = dict(lmap)
                merged.update(rmap)
                merged[node_span] = c
                yield merged, c


def enumerate_labelings(model, shape, total=None, leaf_labels=None):
    """All labelings of ``shape`` as charge tuples over ``all_spans(shape)``.

    The order is deterministic: lexicographic in (root charge, leaf charges,
    internal charges by span).  ``leaf_labels`` optionally pins the leaf
    charges (a map mode -> particle index), ``total`` the root charge.
    """
    spans = all_spans(shape)
    lo, hi = span(shape)
    root = (lo, hi)
    leaf_spans = [(i, i) for i in range(lo, hi + 1)]
    inner = [s for s in spans if s not in set(leaf_spans)]

    rows = []
    for charges, root_charge in _label_options(model, shape, leaf_labels):
        if total is not None and root_charge != total:
            continue
        key = (
            root_charge,
            tuple(charges[s] for s in leaf_spans),
            tuple(charges[s] for s in inner),
        )
        rows.append((key, tuple(charges[s] for s in spans)))
    rows.sort(key=lambda kv: kv[0])
    return spans, [state for _, state in rows]

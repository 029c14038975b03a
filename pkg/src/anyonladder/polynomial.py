"""Symbolic polynomials in creation/annihilation generators.

A word is a tuple of :class:`GeneratorSymbol`; a polynomial is a sum of
scalar-weighted words.  Two generator families exist:

* ``kind="std"``: the per-particle operators ``alpha^(j)_k`` built from the
  0/1 coefficient tables (``particle`` is a label, ``j`` the table index);
* ``kind="pair"``: the two special Fibonacci combinations ``alpha_k`` and
  ``beta_k`` carrying the 1/sqrt(2) weight on the shared term
  (``particle`` is ``"alpha"`` or ``"beta"``, ``j`` is unused and 0).

Evaluation multiplies the generator matrices supplied by a resolver
callback, so the same polynomial can be evaluated on any mode count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import sparse

from .basis import SparseOperator

__all__ = ["GeneratorSymbol", "LadderPolynomial", "MERGE_TOLERANCE"]

MERGE_TOLERANCE = 1e-12


@dataclass(frozen=True, order=True)
class GeneratorSymbol:
    """One generator factor in a word."""

    mode: int  # 1-based lattice mode
    kind: str  # "std" | "pair"
    particle: str  # particle label, or "alpha"/"beta" for kind="pair"
    j: int  # coefficient-table index (0 for kind="pair")
    dagger: bool

    def adjoint(self) -> "GeneratorSymbol":
        return GeneratorSymbol(self.mode, self.kind, self.particle, self.j, not self.dagger)

    def relabel(self, mode_map: dict[int, int]) -> "GeneratorSymbol":
        return GeneratorSymbol(
            mode_map.get(self.mode, self.mode), self.kind, self.particle, self.j, self.dagger
        )

    def token(self) -> str:
        """Serialized form ``particle|mode|j|+`` (dagger) or ``...|-``."""
        mark = "+" if self.dagger else "-"
        return f"{self.particle}|{self.mode}|{self.j}|{mark}"

    @classmethod
    def from_token(cls, token: str) -> "GeneratorSymbol":
        particle, mode, j, mark = token.split("|")
        kind = "pair" if particle in ("alpha", "beta") else "std"
        return cls(int(mode), kind, particle, int(j), mark == "+")

    def __str__(self) -> str:
        dag = "^+" if self.dagger else ""
        if self.kind == "pair":
            return f"{self.particle}_{self.mode}{dag}"
        return f"{self.particle}[{self.mode},{self.j}]{dag}"


Word = tuple[GeneratorSymbol, ...]


def _word_sort_key(word: Word):
    return (len(word), tuple((s.mode, s.kind, s.particle, s.j, s.dagger) for s in word))


class LadderPolynomial:
    """Sum of complex-weighted generator words, kept in canonical form.

    Canonical form: like words merged, coefficients below
    ``MERGE_TOLERANCE`` dropped, terms ordered by (length, per-symbol key).
    """

    def __init__(self, terms: Iterable[tuple[complex, Sequence[GeneratorSymbol]]] = ()):
        merged: dict[Word, complex] = {}
        for coeff, word in terms:
            key = tuple(word)
            merged[key] = merged.get(key, 0.0) + complex(coeff)
        self._terms: dict[Word, complex] = {
            w: c for w, c in merged.items() if abs(c) > MERGE_TOLERANCE
        }

    @classmethod
    def constant(cls, value: complex) -> "LadderPolynomial":
        return cls([(value, ())])

    @classmethod
    def generator(cls, symbol: GeneratorSymbol) -> "LadderPolynomial":
        return cls([(1.0, (symbol,))])

    @property
    def terms(self) -> list[tuple[complex, Word]]:
        return [(self._terms[w], w) for w in sorted(self._terms, key=_word_sort_key)]

    @property
    def n_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- algebra ----------------------------------------------------------------

    def __add__(self, other: "LadderPolynomial") -> "LadderPolynomial":
        return LadderPolynomial(
            [(c, w) for w, c in self._terms.items()]
            + [(c, w) for w, c in other._terms.items()]
        )

    def __sub__(self, other: "LadderPolynomial") -> "LadderPolynomial":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "LadderPolynomial":
        if isinstance(scalar, LadderPolynomial):
            raise TypeError("use @ for the operator product; * is scalar multiplication")
        return LadderPolynomial([(c * scalar, w) for w, c in self._terms.items()])

    __rmul__ = __mul__

    def __matmul__(self, other: "LadderPolynomial") -> "LadderPolynomial":
        """Operator product; words concatenate left-to-right."""
        out = []
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                out.append((c1 * c2, w1 + w2))
        return LadderPolynomial(out)

    def adjoint(self) -> "LadderPolynomial":
        return LadderPolynomial(
            [
                (np.conj(c), tuple(s.adjoint() for s in reversed(w)))
                for w, c in self._terms.items()
            ]
        )

    def relabel_modes(self, mode_map: dict[int, int]) -> "LadderPolynomial":
        return LadderPolynomial(
            [(c, tuple(s.relabel(mode_map) for s in w)) for w, c in self._terms.items()]
        )

    # -- evaluation ---------------------------------------------------------------

    def evaluate(
        self,
        resolver: Callable[[GeneratorSymbol], SparseOperator],
        cache: dict | None = None,
    ) -> SparseOperator:
        """Evaluate on a concrete system.

        ``resolver`` maps an undaggered generator symbol to its matrix; the
        daggered one is derived.  ``cache`` (word -> SparseOperator) is
        shared across calls to reuse word products; word matrices are built
        recursively so common suffixes are computed once.
        """
        if cache is None:
            cache = {}
        if not self._terms:
            raise ValueError("cannot evaluate an empty polynomial without a basis")
        if any(len(w) == 0 for w in self._terms):
            raise ValueError(
                "constant terms need an explicit identity; "
                "use evaluate_with_identity"
            )
        return self._accumulate(resolver, cache, None)

    def evaluate_with_identity(
        self,
        resolver: Callable[[GeneratorSymbol], SparseOperator],
        identity: SparseOperator,
        cache: dict | None = None,
    ) -> SparseOperator:
        """Like :meth:`evaluate` but supports constant (empty-word) terms."""
        if cache is None:
            cache = {}
        return self._accumulate(resolver, cache, identity)

    def _accumulate(self, resolver, cache: dict, identity) -> SparseOperator:
        def word_matrix(word: Word) -> SparseOperator:
            hit = cache.get(word)
            if hit is not None:
                return hit
            if len(word) == 0:
                mat = identity
            elif len(word) == 1:
                sym = word[0]
                base = resolver(sym.adjoint() if sym.dagger else sym)
                mat = base.dagger() if sym.dagger else base
            else:
                mat = word_matrix(word[:1]) @ word_matrix(word[1:])
            cache[word] = mat
            return mat

        dense = None
        reference = identity
        for w, c in self._terms.items():
            mat = word_matrix(w)
            if dense is None:
                dense = c * mat.to_dense()
                reference = mat
            else:
                dense += c * mat.to_dense()
        if dense is None:
            if identity is None:
                raise ValueError(
                    "cannot evaluate an empty polynomial without a basis"
                )
            dense = np.zeros((identity.row_basis.dim, identity.col_basis.dim), dtype=complex)
        return SparseOperator(
            reference.row_basis, reference.col_basis, sparse.csr_matrix(dense)
        ).drop()

    def signature(self, decimals: int = 12) -> tuple:
        """Hashable canonical form: words with coefficients rounded.

        Equal signatures mean equal polynomials up to ``10**-decimals`` in
        each coefficient; used to deduplicate repeated realizations.
        """
        items = []
        for w, c in self._terms.items():
            items.append(
                (
                    tuple(s.token() for s in w),
                    round(c.real, decimals),
                    round(c.imag, decimals),
                )
            )
        return tuple(sorted(items))

    # -- serialization ----------------------------------------------------------

    def to_payload(self) -> list[dict]:
        return [
            {"coeff": [float(c.real), float(c.imag)], "word": [s.token() for s in w]}
            for c, w in self.terms
        ]

    @classmethod
    def from_payload(cls, payload: Iterable[dict]) -> "LadderPolynomial":
        terms = []
        for item in payload:
            coeff = complex(item["coeff"][0], item["coeff"][1])
            word = tuple(GeneratorSymbol.from_token(t) for t in item["word"])
            terms.append((coeff, word))
        return cls(terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, w in self.terms:
            body = " ".join(str(s) for s in w) if w else "1"
            parts.append(f"({c.real:+.6g}{c.imag:+.6g}j) {body}")
        return "  +  ".join(parts)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"LadderPolynomial({len(self._terms)} terms)"

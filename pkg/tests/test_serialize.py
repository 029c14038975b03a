import numpy as np
import pytest

from anyonladder.basis import FusionTreeBasis
from anyonladder.hubbard import HubbardParams, diagonalize, hubbard_hamiltonian
from anyonladder.ladder import fibonacci_pair, ladder_set
from anyonladder.polynomial import GeneratorSymbol, LadderPolynomial
from anyonladder.serialize import (
    dump_operator,
    dump_polynomial,
    dump_tables,
    load_operator,
    load_polynomial,
    load_tables,
    write_occupation_csv,
    write_spectrum_csv,
)


def test_operator_round_trip(fib):
    pair = fibonacci_pair(fib, 3)
    op = (pair.alpha[2].dagger() @ pair.beta[1]).drop()
    text = dump_operator(op, name="test-op")
    back = load_operator(text, fib)
    assert (back - op).norm_max() < 1e-15
    assert "# name: test-op" in text
    assert text == dump_operator(op, name="test-op")  # deterministic


def test_operator_header_validation(fib, ising):
    pair = fibonacci_pair(fib, 2)
    text = dump_operator(pair.alpha[1])
    with pytest.raises(ValueError, match="model"):
        load_operator(text, ising)
    with pytest.raises(ValueError):
        load_operator("not a dump", fib)
    # corrupt a data row
    lines = text.splitlines()
    data_at = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    lines[data_at] = "0 1 2"  # three fields instead of four
    with pytest.raises(ValueError, match="row col re im"):
        load_operator("\n".join(lines), fib)
    lines = text.splitlines()
    lines[data_at] = "99999 0 1.0 0.0"
    with pytest.raises(ValueError):
        load_operator("\n".join(lines), fib)


def test_tables_round_trip(fib, ising):
    for model, particle in ((fib, "tau"), (ising, "sigma")):
        text = dump_tables(model, particle)
        tables = load_tables(text)
        want = ladder_set(model, 2, particle).tables
        assert len(tables) == len(want)
        for got, ref in zip(tables, want):
            assert got.j == ref.j
            assert got.particle == ref.particle
            for key, value in ref.entries.items():
                assert np.isclose(got.entries[key], value)
        assert text == dump_tables(model, particle)


def test_polynomial_round_trip():
    sym = GeneratorSymbol(1, "std", "tau", 0, False)
    poly = (0.5 - 0.25j) * (
        LadderPolynomial.generator(sym) @ LadderPolynomial.generator(sym.adjoint())
    ) + LadderPolynomial.constant(1.5)
    text = dump_polynomial(poly)
    back = load_polynomial(text)
    assert back.signature() == poly.signature()
    assert text == dump_polynomial(back)


def test_spectrum_csv_layout():
    _, h = hubbard_hamiltonian(1, HubbardParams(t=0.5, mu=0.2))
    spectra = [diagonalize(h, g, want_vector=False) for g in ("e", "tau")]
    text = write_spectrum_csv(spectra)
    lines = text.strip().splitlines()
    assert lines[0] == "sector,index,eigenvalue"
    total = sum(len(s.eigenvalues) for s in spectra)
    assert len(lines) == 1 + total
    sectors = {line.split(",")[0] for line in lines[1:]}
    assert sectors == {"e", "tau"}
    # eigenvalues parse back to the originals in order
    for g, spectrum in zip(("e", "tau"), spectra):
        values = [
            float(line.split(",")[2])
            for line in lines[1:]
            if line.split(",")[0] == g
        ]
        assert np.allclose(values, np.sort(spectrum.eigenvalues), atol=1e-12)


def test_occupation_csv_layout():
    densities = np.array([0.25, 0.5])
    text = write_occupation_csv(densities)
    lines = text.strip().splitlines()
    assert lines[0] == "mode,density"
    assert lines[1].startswith("1,") and lines[2].startswith("2,")
    assert np.isclose(float(lines[1].split(",")[1]), 0.25)

import json
import logging

import numpy as np
import pytest

from lucanon.errors import ParseError
from lucanon.files import (
    WitnessFile,
    load_factors,
    load_state,
    load_witness,
    read_state_file,
    save_factors,
    save_state,
    save_witness,
)
from lucanon.hosvd import hosvd
from lucanon.rng import random_local_unitaries, random_state
from lucanon.tensor import new_state

from conftest import DATA


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 2, 2), (4, 4), (5,)])
def test_state_roundtrip_bit_exact(tmp_path, dims):
    for seed in range(5):
        t = random_state(dims, seed)
        path = tmp_path / "s.json"
        save_state(t, path, label="x")
        back = read_state_file(path)
        assert np.array_equal(back.state.data, t.data)
        assert back.label == "x"


def test_unnormalized_within_threshold_is_kept(tmp_path):
    t = new_state([2], [1.0 + 1e-9, 0.0])
    save_state(t, tmp_path / "s.json")
    assert np.array_equal(load_state(tmp_path / "s.json").data, t.data)


def test_renormalize_warns(tmp_path, caplog):
    save_state(new_state([2], [3.0, 4.0]), tmp_path / "s.json")
    with caplog.at_level(logging.WARNING):
        t = load_state(tmp_path / "s.json")
    assert abs(t.norm() - 1) < 1e-15
    assert any("normaliz" in r.message for r in caplog.records)
    raw = read_state_file(tmp_path / "s.json", renormalize=False)
    assert raw.state.norm() == 5.0


def test_shipped_fixtures():
    ghz = read_state_file(DATA / "ghz.json")
    assert ghz.state.dims == (2, 2, 2)
    assert abs(ghz.state.norm() - 1) < 1e-12
    assert "GHZ" in ghz.label
    assert abs(load_state(DATA / "w.json").norm() - 1) < 1e-12
    diag_fixture = load_state(DATA / "diag44.json")
    np.testing.assert_allclose(np.diag(diag_fixture.data), [0.8, 0.4, np.sqrt(0.1), np.sqrt(0.1)], atol=1e-15)


def write(tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    return p


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"dims": [2, 2], "amplitudes": [[1, 0], [0, 0], [0, 0]]}', "3 amplitudes"),
        ('{"dims": [2, 2], "amplitudes": [[1, 0], [0, 0], [0, 0], [0]]}', "amplitudes'[3]"),
        ('{"dims": [2, 0], "amplitudes": []}', "dims"),
        ('{"amplitudes": [[1, 0]]}', "missing field 'dims'"),
        ('{"dims": [2], "amplitudes": [[1, 0], ["a", 0]]}', "[re, im]"),
        ('{"dims": [2], "amplitudes": [[0, 0], [0, 0]]}', "vanish"),
        ('{"dims": [2], "label": 3, "amplitudes": [[1, 0], [0, 0]]}', "label"),
        ('[1, 2]', "JSON object"),
        ('{"dims": [2],\n "amplitudes": [[1, 0], [0, 0],]}', "line 2"),
    ],
)
def test_parse_errors(tmp_path, text, fragment):
    with pytest.raises(ParseError) as info:
        load_state(write(tmp_path, text))
    assert fragment in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_state(tmp_path / "nope.json")


def test_witness_roundtrip(tmp_path):
    us = random_local_unitaries((2, 3), 1)
    wf = WitnessFile(us, 1.25e-15, {"tol_equiv": 1e-8, "seed": 0}, dims=(2, 3))
    save_witness(wf, tmp_path / "w.json")
    back = load_witness(tmp_path / "w.json")
    assert all(np.array_equal(a, b) for a, b in zip(us, back.unitaries))
    assert back.residual == 1.25e-15
    assert back.tolerances == {"seed": 0, "tol_equiv": 1e-8}
    assert back.dims == (2, 3)
    assert set(json.loads((tmp_path / "w.json").read_text())) == {
        "version", "dims", "residual", "tolerances", "unitaries",
    }


def test_witness_bad_matrix(tmp_path):
    p = write(tmp_path, '{"unitaries": [[[1, 0], [0, 0], [0, 0]]], "residual": 0}')
    with pytest.raises(ParseError, match="square"):
        load_witness(p)


def test_factors_roundtrip(tmp_path):
    r = hosvd(random_state((3, 2, 2), 2))
    save_factors(r.factors, r.spectra, tmp_path / "f.json")
    factors, spectra = load_factors(tmp_path / "f.json")
    assert all(np.array_equal(a, b) for a, b in zip(r.factors, factors))
    assert all(np.array_equal(a, b) for a, b in zip(r.spectra, spectra))

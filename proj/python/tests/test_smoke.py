import math

import numpy as np
import pytest

import segrega


def test_cosine_mode_field():
    d = segrega.Datum.cosine_mode(3)
    assert d.k == 6
    f = segrega.harmonic(d, 16, 256)
    r, t = 0.7, 0.3
    assert f.eval(r * math.cos(t), r * math.sin(t)) == pytest.approx(r**3 * math.cos(3 * t), abs=1e-12)
    pts = segrega.critical_points(f, 3)["points"]
    assert len(pts) == 1


def test_certification_at_origin():
    d = segrega.Datum.cosine_mode(3)
    assert segrega.is_2s_point(d, 0.0, 0.0)["is_2s_point"]
    assert not segrega.is_2s_point(d, 0.3, 0.0)["is_2s_point"]


def test_two_species_solve():
    d = segrega.Datum.symmetric(2, 0.3)
    state, stats = segrega.solve(d, [1, 100, 10000], 32, 64)
    assert state.values.shape == (32, 64, 2)
    assert np.all(state.values >= 0)
    assert stats[-1]["converged"]
    summary = segrega.partition(state, d)
    assert summary["identity"]["holds"]
    assert summary["graph"]["euler"] == 2


def test_errors_carry_codes():
    with pytest.raises(segrega.SegregaError) as info:
        segrega.classify_k6([4, 4, 3])
    assert info.value.code == "UnclassifiableMultiset"
    assert segrega.classify_k6([3, 3, 4]) == "FOUR_THREE_THREE"
    with pytest.raises(segrega.SegregaError):
        segrega.Datum.from_json('{"symmetric": {"k": 1}}')

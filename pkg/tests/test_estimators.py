import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from artifact import RemainderDecomposer
from artifact.arith import RealCharacter, zeta_spec
from artifact.errors import DomainError
from artifact.estimators import COLUMNS
from artifact.remainder import decomposition_report

ZETA = zeta_spec()


def test_params_round_trip_and_clone():
    est = RemainderDecomposer(N_terms=500, target_tol=1e-10)
    assert est.get_params()["N_terms"] == 500
    est.set_params(tail_mode="bound-only")
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "spec_")


def test_fit_transform_matches_reports():
    xs = np.array([1.0, 7.3, 100.0])
    out = RemainderDecomposer().fit(ZETA).transform(xs)
    assert out.shape == (3, len(COLUMNS))
    assert list(RemainderDecomposer().fit(ZETA).get_feature_names_out()) == list(COLUMNS)
    for row, x in zip(out, xs):
        r = decomposition_report(ZETA, float(x))
        assert row[0] == x and row[1] == pytest.approx(r.E) and row[-1] <= 1e-8


def test_character_input_uses_twisted_variant():
    est = RemainderDecomposer().fit(RealCharacter(5))
    assert est.variant_ == "chi"
    assert est.transform([3.7, 10.0])[:, -1].max() <= 1e-8


def test_rejects_bad_input():
    with pytest.raises(NotFittedError):
        RemainderDecomposer().transform([1.0])
    with pytest.raises(DomainError):
        RemainderDecomposer().fit("zeta")
    with pytest.raises(DomainError):
        RemainderDecomposer().fit(ZETA).transform([])

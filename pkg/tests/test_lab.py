import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subspacefit import InputError, Subspace, distance_sq
from subspacefit.lab import (
    lines_plane_scan,
    rank_closure_trace,
    separation_scan,
    weak_limit_trace,
)


class TestLinesPlane:
    def test_examples(self):
        scan = lines_plane_scan([0.0, 3.0])
        assert scan.costs[0] == 1.0
        assert scan.costs[1] == pytest.approx(0.1, abs=1e-15)
        assert scan.external_minimizer_cost == 0.0
        assert scan.infimum_estimate == 0.0
        assert scan.attained_candidates == [] and scan.external_attains

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=1, max_size=20))
    def test_closed_form(self, grid):
        scan = lines_plane_scan(grid)
        for c, cost in zip(grid, scan.costs):
            assert abs(cost - 1 / (1 + c * c)) <= 1e-10
            line = Subspace.span([[0, c, 1]])
            assert abs(cost - distance_sq([0, 1, 0], line)) <= 1e-14

    def test_empty_grid(self):
        with pytest.raises(InputError):
            lines_plane_scan([])

    def test_csv(self):
        rows = list(csv.reader(io.StringIO(lines_plane_scan([0, 1]).to_csv())))
        assert rows[0] == ["parameter", "cost"]
        assert float(rows[2][1]) == 0.5


class TestWeakLimit:
    def test_probe_entries(self):
        tr = weak_limit_trace(64, [3, 5, 11, 20])
        # (e1, e3) entry is 1/2 at n = 3; every probe entry vanishes once e_n leaves e1..e10
        assert tr.residuals == [0.5, 0.5, 0.0, 0.0]

    def test_diagonal_entry_matches_limit(self):
        # <P_n e1, e1> = 1/2 = <Q e1, e1>
        N = 16
        for n in (3, 7, 12):
            v = np.zeros(N)
            v[0] = v[n - 1] = 1
            w = np.zeros(N)
            w[1] = w[n] = 1
            pn = (np.outer(v, v) + np.outer(w, w)) / 2
            assert pn[0, 0] == 0.5

    def test_cross_terms_are_reported(self):
        # P_n - Q keeps the cross terms e1 e_n*, so it differs from the
        # diagonal tail by 1/2 and has eigenvalue (1 - sqrt 5)/4 on span{e1, e_n}
        tr = weak_limit_trace(64, list(range(3, 31)))
        np.testing.assert_allclose(tr.decomposition_residuals, 0.5, atol=1e-15)
        np.testing.assert_allclose(tr.psd_gaps, (1 - np.sqrt(5)) / 4, atol=1e-12)

    def test_index_overflow(self):
        with pytest.raises(InputError):
            weak_limit_trace(10, [3, 10])


class TestRankClosure:
    def test_full_t_is_exact(self):
        tr = rank_closure_trace(3, [1, 1, 1], 64, [1, 2, 3])
        assert tr.residuals == [0.0, 0.0, 0.0]
        assert all(abs(g) < 1e-12 for g in tr.psd_gaps)

    def test_zero_t_escapes(self):
        # v_n(1) = e_{3n}; inside the probe window for n <= 3
        tr = rank_closure_trace(1, [0.0], 64, [1, 2, 3, 4, 5])
        assert tr.residuals == [1.0, 1.0, 1.0, 0.0, 0.0]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 3), st.integers(0, 2**32 - 1))
    def test_generic_vanishes_past_window(self, k, seed):
        t = np.random.default_rng(seed).uniform(-1, 1, size=k)
        n_max = 64 // (2 * k + 1)
        tr = rank_closure_trace(k, t, 64, list(range(1, n_max + 1)))
        for n, res in zip(tr.indices, tr.residuals):
            if n * (k + 1) > 10:
                assert res == 0.0
        assert tr.residuals[-1] == 0.0

    def test_overflow(self):
        with pytest.raises(InputError):
            rank_closure_trace(2, [0.5, 0.5], 20, [5])


class TestSeparation:
    def test_properties(self):
        grid = list(np.logspace(0, -6, 13))
        scan = separation_scan(2, 4, grid, seed=0)
        assert all(c > 0 for c in scan.costs)
        assert all(b < a for a, b in zip(scan.costs, scan.costs[1:]))
        assert all(c <= 1e-20 for c in scan.reduced_costs)
        assert scan.excluded_cost <= 1e-20

    def test_deterministic(self):
        a = separation_scan(3, 5, [1.0, 0.1], seed=4)
        b = separation_scan(3, 5, [1.0, 0.1], seed=4)
        assert a.to_dict() == b.to_dict()

    def test_k_not_below_d(self):
        with pytest.raises(InputError):
            separation_scan(4, 4, [1.0])

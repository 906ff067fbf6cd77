import json
import math

import pytest

from wgmesh.errors import DomainError
from wgmesh.geometry import MeshGeometry
from wgmesh.sampling import (
    BandSpec,
    MediumSpec,
    corrected_sample_rate,
    critical_sample_rate,
    junction_count,
    lattice_junction_counts,
    plan_resonator,
)

SQ, TRI, HEX = MeshGeometry.SQUARE, MeshGeometry.TRIANGULAR, MeshGeometry.HEXAGONAL
MEDIUM = MediumSpec(130.0, 10_000.0, 0.1)


class TestRates:
    def test_critical_rate(self):
        assert critical_sample_rate(130, 10_000 / 130) == pytest.approx(20_000, rel=1e-14)
        assert critical_sample_rate(1, BandSpec(0.5)) == 1.0

    # reference rates are quoted up to 0.7 Hz above the closed forms; allow 1 Hz
    @pytest.mark.parametrize("g,hz", [(SQ, 28285), (TRI, 24495), (HEX, 42427)])
    def test_corrected_rate(self, g, hz):
        assert corrected_sample_rate(g, 130, MEDIUM.band) == pytest.approx(hz, abs=1.0)

    def test_corrected_closed_forms(self):
        f = 10_000
        rates = [corrected_sample_rate(g, 130, MEDIUM.band) for g in (SQ, TRI, HEX)]
        assert rates == pytest.approx([2 * math.sqrt(2) * f, 2 * math.sqrt(1.5) * f, 2 * 3 / math.sqrt(2) * f],
                                      rel=1e-13)

    @pytest.mark.parametrize("c,B", [(0, 1), (1, 0), (-1, 1), (1, float("inf"))])
    def test_invalid(self, c, B):
        with pytest.raises(DomainError):
            critical_sample_rate(c, B)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            MediumSpec(130, 0, 0.1)
        with pytest.raises(DomainError):
            BandSpec(-1)


class TestPlan:
    def test_band(self):
        plan = plan_resonator(MEDIUM)
        assert plan.B == pytest.approx(76.923, abs=5e-4)

    def test_rounded_length_counts(self):
        plan = plan_resonator(MEDIUM, rounded_lengths=True)
        assert [plan[g].N for g in (SQ, TRI, HEX)] == [744, 645, 1308]
        assert [plan[g].D for g in (SQ, TRI, HEX)] == [6.5e-3, 7.5e-3, 4.3e-3]

    def test_full_precision_counts(self):
        plan = plan_resonator(MEDIUM)
        assert plan[SQ].N == pytest.approx(744, abs=1)
        assert plan[HEX].N == 1288
        assert plan[HEX].D == pytest.approx(1 / (3 * plan.B), rel=1e-15)

    def test_rates_independent_of_rounding(self):
        a, b = plan_resonator(MEDIUM), plan_resonator(MEDIUM, rounded_lengths=True)
        for g in (SQ, TRI, HEX):
            assert a[g].Fs == b[g].Fs == pytest.approx(20_000)
            assert a[g].Fbar == b[g].Fbar

    def test_count_formula(self):
        assert junction_count(SQ, 1.0, 10.0) == round(math.pi * 100)
        # the hexagonal mesh has 2/3 of the triangular points at equal D
        assert abs(junction_count(HEX, 1.0, 30.0) - 2 / 3 * junction_count(TRI, 1.0, 30.0)) <= 1

    def test_lattice_enumeration_agrees(self):
        plan = plan_resonator(MEDIUM, rounded_lengths=True)
        counts = lattice_junction_counts(plan)
        for g in (SQ, TRI, HEX):
            assert abs(counts[g] - plan[g].N) <= 0.01 * plan[g].N

    def test_json(self):
        d = json.loads(plan_resonator(MEDIUM, rounded_lengths=True).to_json())
        assert set(d) == {"B", "square", "triangular", "hexagonal"}
        assert d["hexagonal"] == {"D": 0.0043, "N": 1308, "Fs": 20000.0, "Fbar": 42426.4}
        assert d["B"] == 76.9231

    def test_table_lists_all(self):
        text = plan_resonator(MEDIUM).table()
        for g in ("square", "triangular", "hexagonal"):
            assert g in text

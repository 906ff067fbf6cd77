import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgmesh.errors import ConfigurationError, DomainError
from wgmesh.geometry import (
    Boundary,
    Disc,
    LatticeBasis,
    MeshGeometry,
    SubtractedLattice,
    TorusRect,
    build_topology,
    critical_length,
    distance_spectrum,
    lattice_basis,
    neighbor_directions,
    periodic_cell,
    reciprocal_basis,
    sample_density,
)

from conftest import SQRT3

SQ, TRI, HEX = MeshGeometry.SQUARE, MeshGeometry.TRIANGULAR, MeshGeometry.HEXAGONAL


class TestEnums:
    def test_ports_and_alpha(self):
        assert [g.ports for g in (SQ, TRI, HEX)] == [4, 6, 3]
        assert [g.alpha for g in (SQ, TRI, HEX)] == [1, 1, 2]
        assert [g.orientation_count for g in (SQ, TRI, HEX)] == [1, 1, 2]

    @pytest.mark.parametrize("alias,expected", [("s", SQ), ("SWM", SQ), ("twm", TRI), ("Hexagonal", HEX)])
    def test_parse_aliases(self, alias, expected):
        assert MeshGeometry.parse(alias) is expected

    def test_parse_rejects_unknown(self):
        with pytest.raises(DomainError):
            MeshGeometry.parse("pentagonal")
        with pytest.raises(DomainError):
            Boundary.parse("open")


class TestLatticeBasis:
    def test_square(self):
        np.testing.assert_array_equal(lattice_basis(SQ, 1).matrix, [[1, 0], [0, 1]])

    def test_triangular(self):
        np.testing.assert_allclose(lattice_basis(TRI, 2).matrix, [[2, 1], [0, SQRT3]], atol=1e-15)

    def test_hexagonal_pair(self):
        lat = lattice_basis(HEX, 1)
        assert isinstance(lat, SubtractedLattice)
        np.testing.assert_allclose(lat.coarse.matrix, [[1.5, 0], [SQRT3 / 2, SQRT3]], atol=1e-15)
        np.testing.assert_allclose(lat.fine.matrix, [[1, 0.5], [0, SQRT3 / 2]], atol=1e-15)

    @pytest.mark.parametrize("D", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_length(self, D):
        with pytest.raises(DomainError):
            lattice_basis(SQ, D)

    def test_singular_rejected(self):
        with pytest.raises(DomainError):
            LatticeBasis([[1, 2], [2, 4]])
        with pytest.raises(DomainError):
            sample_density([[1, 1], [1, 1]])


class TestDensity:
    def test_unit_square(self):
        assert sample_density(lattice_basis(SQ, 1)) == 1.0

    def test_triangular_over_square(self):
        D = 0.37
        ratio = sample_density(lattice_basis(TRI, D)) / sample_density(lattice_basis(SQ, D))
        assert ratio == pytest.approx(2 / SQRT3, rel=1e-14)

    def test_fine_over_coarse_is_three(self):
        lat = lattice_basis(HEX, 0.9)
        assert sample_density(lat.fine) / sample_density(lat.coarse) == pytest.approx(3, rel=1e-14)

    def test_hexagonal_is_two_coarse_cosets(self):
        lat = lattice_basis(HEX, 1.3)
        assert sample_density(lat) == pytest.approx(2 * sample_density(lat.coarse), rel=1e-14)

    def test_coarse_points_lie_on_fine_lattice(self):
        lat = lattice_basis(HEX, 1.0)
        coeffs = np.linalg.solve(lat.fine.matrix, lat.coarse.matrix)
        np.testing.assert_allclose(coeffs, np.round(coeffs), atol=1e-12)


class TestReciprocal:
    def test_square(self):
        D = 0.25
        np.testing.assert_allclose(reciprocal_basis([[D, 0], [0, D]]).matrix, [[4, 0], [0, 4]])

    def test_triangular(self):
        D = 1.7
        got = reciprocal_basis([[D, D / 2], [0, SQRT3 * D / 2]]).matrix
        np.testing.assert_allclose(got, [[1 / D, 0], [-1 / (SQRT3 * D), 2 / (SQRT3 * D)]], rtol=1e-14)

    def test_duality(self, geometry):
        lat = lattice_basis(geometry, 0.8)
        lat = lat.fine if isinstance(lat, SubtractedLattice) else lat
        prod = lat.matrix.T @ reciprocal_basis(lat).matrix
        np.testing.assert_allclose(prod, np.eye(2), atol=1e-14)

    def test_subtracted_rejected(self):
        with pytest.raises(DomainError):
            reciprocal_basis(lattice_basis(HEX, 1))


class TestCriticalLength:
    B = 10000 / 130

    # tolerance is half a unit of the last quoted digit
    @pytest.mark.parametrize("g,mm,tol", [(SQ, 6.5, 0.05), (TRI, 7.5, 0.05), (HEX, 4.333, 0.0005)])
    def test_reference_lengths(self, g, mm, tol):
        assert critical_length(g, self.B) * 1e3 == pytest.approx(mm, abs=tol)

    def test_ratios(self):
        ds, dt, dh = (critical_length(g, 3.0) for g in (SQ, TRI, HEX))
        assert dt / ds == pytest.approx(2 / SQRT3, rel=1e-14)
        assert dt / dh == pytest.approx(SQRT3, rel=1e-14)

    @pytest.mark.parametrize("B", [0, -2])
    def test_bad_band(self, B):
        with pytest.raises(DomainError):
            critical_length(SQ, B)

    def test_images_touch(self, geometry):
        # Shortest reciprocal vector of the image lattice has length 2B.
        B = 0.5
        D = critical_length(geometry, B)
        lat = lattice_basis(geometry, D)
        lat = lat.coarse if isinstance(lat, SubtractedLattice) else lat
        assert distance_spectrum(reciprocal_basis(lat), 1)[0] == pytest.approx(2 * B, rel=1e-12)


class TestDistanceSpectrum:
    def test_square_shells(self):
        d = distance_spectrum(np.eye(2), 12)
        np.testing.assert_allclose(d, [1] * 4 + [math.sqrt(2)] * 4 + [2] * 4)

    def test_coarse_matches_scaled_triangular(self):
        a = distance_spectrum(lattice_basis(HEX, 1.0).coarse, 80)
        b = distance_spectrum(lattice_basis(TRI, SQRT3), 80)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_brute_force(self, rng):
        M = np.array([[1.0, 0.3], [0.2, 0.9]])
        r = np.arange(-12, 13)
        pts = np.array(list(itertools.product(r, r))) @ M.T
        ref = np.sort(np.linalg.norm(pts, axis=1))[1:31]
        np.testing.assert_allclose(distance_spectrum(M, 30), ref, rtol=1e-14)


class TestNeighborDirections:
    def test_square(self):
        d = neighbor_directions(SQ, 1).directions
        assert sorted(map(tuple, np.round(d, 12))) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1)])

    def test_triangular_contains_sixty_degrees(self):
        d = neighbor_directions(TRI, 1).directions
        assert np.isclose(d, [0.5, SQRT3 / 2]).all(axis=1).any()
        np.testing.assert_allclose(np.linalg.norm(d, axis=1), 1)

    def test_hexagonal_orientations_negated(self):
        a = neighbor_directions(HEX, 2.0, 0).directions
        b = neighbor_directions(HEX, 2.0, 1).directions
        np.testing.assert_allclose(a, -b)
        np.testing.assert_allclose(np.linalg.norm(a, axis=1), 2.0)
        np.testing.assert_allclose(a.sum(axis=0), 0, atol=1e-14)

    def test_hexagonal_brute_force_factor(self, rng):
        # Composing one step of each orientation: |g|^2 - 2 equals the closed form.
        from wgmesh.dispersion import geometric_factor
        d = neighbor_directions(HEX, 1.0, 0).directions
        for f in rng.uniform(-0.6, 0.6, (50, 2)):
            g = (2 / 3) * np.exp(2j * np.pi * d @ f).sum()
            assert abs(g) ** 2 - 2 == pytest.approx(geometric_factor(HEX, 1.0, f), abs=1e-12)

    def test_bad_tag(self):
        with pytest.raises(DomainError):
            neighbor_directions(SQ, 1, 1)
        with pytest.raises(DomainError):
            neighbor_directions(HEX, 1, 2)


def _brute_torus_count(geometry, D, W, H):
    """Count fine-lattice points in [0,W) x [0,H), dropping the coarse coset."""
    from wgmesh.geometry import lattice_frame
    F = lattice_frame(geometry, D)
    r = np.arange(-60, 61)
    u = np.array(list(itertools.product(r, r)))
    p = u @ F.T
    eps = 1e-9
    inside = (p[:, 0] > -eps) & (p[:, 0] < W - eps) & (p[:, 1] > -eps) & (p[:, 1] < H - eps)
    if geometry is HEX:
        inside &= (u[:, 0] - u[:, 1]) % 3 != 0
    return int(inside.sum())


class TestTorus:
    def test_triangular_small_torus(self):
        # 4 x 2 sqrt3 cell: 4 columns by 4 rows of the triangular lattice.
        topo = build_topology(TRI, 1.0, TorusRect(4.0, 2 * SQRT3))
        assert len(topo) == 16 == _brute_torus_count(TRI, 1.0, 4.0, 2 * SQRT3)
        assert all(topo.degree(j) == 6 for j in range(len(topo)))

    @pytest.mark.parametrize("g,nx,ny", [(SQ, 5, 3), (TRI, 4, 3), (HEX, 3, 2)])
    def test_counts_match_brute_force(self, g, nx, ny):
        cell = periodic_cell(g, 1.0, nx, ny)
        assert len(build_topology(g, 1.0, cell)) == _brute_torus_count(g, 1.0, cell.width, cell.height)

    def test_neighbors_at_distance_D(self, geometry):
        D = 0.7
        cell = periodic_cell(geometry, D, 4, 4)
        topo = build_topology(geometry, D, cell)
        W, H = cell.width, cell.height
        for k in range(geometry.ports):
            delta = topo.positions[topo.neighbors[:, k]] - topo.positions
            delta[:, 0] -= W * np.round(delta[:, 0] / W)
            delta[:, 1] -= H * np.round(delta[:, 1] / H)
            np.testing.assert_allclose(np.linalg.norm(delta, axis=1), D, rtol=1e-12)

    def test_port_directions_match_orientation(self, geometry):
        cell = periodic_cell(geometry, 1.0, 4, 4)
        topo = build_topology(geometry, 1.0, cell)
        W, H = cell.width, cell.height
        for j in range(len(topo)):
            expect = neighbor_directions(geometry, 1.0, topo.orientation[j]).directions
            delta = topo.positions[topo.neighbors[j]] - topo.positions[j]
            delta[:, 0] -= W * np.round(delta[:, 0] / W)
            delta[:, 1] -= H * np.round(delta[:, 1] / H)
            np.testing.assert_allclose(delta, expect, atol=1e-12)

    def test_adjacency_symmetric_through_reverse_port(self, geometry):
        topo = build_topology(geometry, 1.0, periodic_cell(geometry, 1.0, 3, 5))
        rev = topo.reverse_ports
        for j in range(len(topo)):
            for k, m in enumerate(topo.neighbors[j]):
                assert topo.neighbors[m, rev[k]] == j

    def test_hexagonal_orientations_balanced(self):
        topo = build_topology(HEX, 1.0, periodic_cell(HEX, 1.0, 4, 3))
        assert (topo.orientation == 0).sum() == (topo.orientation == 1).sum() == len(topo) // 2
        for k in range(3):
            assert (topo.orientation[topo.neighbors[:, k]] != topo.orientation).all()

    def test_incommensurate(self):
        with pytest.raises(ConfigurationError):
            build_topology(TRI, 1.0, TorusRect(3.0, 1.0))
        with pytest.raises(ConfigurationError):
            build_topology(HEX, 1.0, TorusRect(1.0, 1.0))

    def test_boundary_mismatch(self):
        with pytest.raises(ConfigurationError):
            build_topology(SQ, 1.0, TorusRect(4, 4), "fixed-rim")
        with pytest.raises(ConfigurationError):
            build_topology(SQ, 1.0, Disc(4), "periodic")

    def test_no_boundary_junctions(self, geometry):
        topo = build_topology(geometry, 1.0, periodic_cell(geometry, 1.0, 2, 2))
        assert not topo.is_boundary.any()


class TestDisc:
    @pytest.mark.parametrize("g,D,expected", [(SQ, 6.5e-3, 744), (HEX, 4.3e-3, 1308), (TRI, 7.5e-3, 645)])
    def test_resonator_counts(self, g, D, expected):
        n = len(build_topology(g, D, Disc(0.1)))
        assert abs(n - expected) <= 0.01 * expected

    def test_inside_strictly(self, geometry):
        topo = build_topology(geometry, 1.0, Disc(5.0))
        assert (np.linalg.norm(topo.positions, axis=1) < 5.0).all()

    def test_rim_ports(self, geometry):
        topo = build_topology(geometry, 1.0, Disc(4.0))
        inner = np.linalg.norm(topo.positions, axis=1) < 4.0 - 1.0 - 1e-9
        assert not topo.is_boundary[inner].any()
        assert topo.is_boundary.any()

    def test_empty_region(self):
        with pytest.raises(DomainError):
            build_topology(HEX, 1.0, Disc(0.1))

    def test_center_junction_is_origin(self):
        topo = build_topology(SQ, 1.0, Disc(3.0))
        np.testing.assert_allclose(topo.positions[topo.center_junction()], 0, atol=1e-15)


class TestTextFormat:
    def test_header_and_rows(self):
        topo = build_topology(SQ, 1.0, TorusRect(2, 2))
        lines = topo.to_text().splitlines()
        assert lines[0] == "square 1 periodic 4"
        assert len(lines) == 5
        fields = lines[1].split()
        assert len(fields) == 5 + 4
        assert fields[0] == "0"

    def test_round_trip_write(self, tmp_path):
        topo = build_topology(HEX, 1.0, periodic_cell(HEX, 1.0, 1, 1))
        p = tmp_path / "t.txt"
        topo.write_text(p)
        assert p.read_text() == topo.to_text()

    def test_junction_records(self):
        topo = build_topology(TRI, 1.0, Disc(2.5))
        js = topo.junctions
        assert len(js) == len(topo)
        assert js[3].index == 3
        assert js[3].is_boundary == bool(topo.is_boundary[3])


@settings(max_examples=40, deadline=None)
@given(g=st.sampled_from(list(MeshGeometry)), nx=st.integers(1, 6), ny=st.integers(1, 6),
       D=st.floats(0.01, 10.0))
def test_periodic_cell_counts(g, nx, ny, D):
    topo = build_topology(g, D, periodic_cell(g, D, nx, ny))
    per_cell = {SQ: 1, TRI: 2, HEX: 4}[g]
    assert len(topo) == per_cell * nx * ny
    assert (topo.neighbors >= 0).all()

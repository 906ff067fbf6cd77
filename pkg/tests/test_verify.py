import pytest

from wgmesh import verify


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_suite_names_cover_suites():
    assert set(verify.SUITE_NAMES) == {"all", *verify.SUITES}


def test_check_line_format():
    line = verify.Check("x", True, 1e-3, 1e-2).line()
    assert line.startswith("PASS  x")
    assert "residual=1.000e-03" in line


def test_table_checks_count():
    assert len(verify.run_suite("table")) == 54

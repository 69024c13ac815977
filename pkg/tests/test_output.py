import numpy as np
import pytest

from varhbar import output


def test_csv_round_trip_full_precision(tmp_path):
    a = np.array([0.1, 1 / 3, 1e-300, -2.5e30])
    p = output.write_csv(tmp_path / "x.csv", ["t_s", "a"], [np.arange(4.0), a])
    header, data = output.read_csv(p)
    assert header == ["t_s", "a"]
    assert np.array_equal(data[:, 1], a)


def test_csv_length_mismatch(tmp_path):
    with pytest.raises(ValueError):
        output.write_csv(tmp_path / "x.csv", ["a", "b"], [[1, 2], [1]])


def test_svg_is_deterministic(tmp_path):
    t = np.linspace(0, 6.3, 200)
    p1 = output.orbit_svg(tmp_path / "a.svg", np.cos(t), np.sin(t), -np.cos(t), -np.sin(t), "P = 1.00 h")
    p2 = output.orbit_svg(tmp_path / "b.svg", np.cos(t), np.sin(t), -np.cos(t), -np.sin(t), "P = 1.00 h")
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    assert "P = 1.00 h" in text and "1e9 m" in text
    c = output.curve_svg(tmp_path / "c.svg", t, np.sin(t), "r [kpc]", "factor")
    assert c.read_text().startswith("<?xml")

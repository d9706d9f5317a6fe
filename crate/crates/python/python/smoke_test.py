"""Smoke test for the cwsusy_py extension: run with pytest or plain python."""

from fractions import Fraction

import cwsusy_py


def test_classify_on_and_off_the_locus():
    on = cwsusy_py.classify(2, 1, -3, 5)
    assert on["schema"] == cwsusy_py.SCHEMA == 1
    assert on["susy"] is True
    off = cwsusy_py.classify("2", Fraction(1, 1), "5", 7)
    assert off["susy"] is False
    assert off["nu"] == "3/4"
    assert off["point"]["alpha_plus"] == "5"


def test_special_points():
    assert "P0" in cwsusy_py.classify(3, -1, 3, -1)["tags"]
    assert "P2" in cwsusy_py.classify(1, 0, 0, 0)["tags"]


def test_sweep_keeps_order():
    recs = cwsusy_py.sweep([(1, 0, 0, 0), (0, 0, 0, 0), ("7/10", "1/2", "-3/2", "1/5")])
    assert [r["point"]["alpha_minus"] for r in recs] == ["1", "7/10"]
    assert recs[1]["susy"] is True


def test_verify_rows_pass():
    rows = cwsusy_py.verify(2, 1, 5, 7, tol=1e-9, seed=1)
    assert rows and all(r["pass"] for r in rows)
    assert {r["provenance"] for r in rows} == {"exact", "float(1e-9)"}


def test_dump_and_extended_connections():
    d = cwsusy_py.dump(5, 1, 2, -3)
    assert d["schema"] == 1 and d["odd_dim"] == 24
    assert cwsusy_py.extended_connection("d6", 1)["fraction"] == "1/2"
    assert cwsusy_py.extended_connection("d9", "2/3")["fraction"] == "3/4"


def test_bad_input_raises():
    for call in (
        lambda: cwsusy_py.classify("1//2", 0, 0, 0),
        lambda: cwsusy_py.classify(0, 0, 0, 0),
        lambda: cwsusy_py.extended_connection("d7", 1),
    ):
        try:
            call()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name} ok")

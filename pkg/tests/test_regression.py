import math

import pytest

from cslbounds import regression as rg
from cslbounds.config import load_defaults


@pytest.fixture(scope="module")
def rows():
    return rg.run_report()


class TestReport:
    def test_enough_anchors(self, rows):
        assert len(rows) >= 25

    def test_all_pass_by_default(self, rows):
        assert [r.id for r in rows if not r.passed] == []

    def test_ids_unique(self):
        ids = [a.id for a in rg.ANCHORS]
        assert len(ids) == len(set(ids))

    def test_igm_filter(self):
        assert len(rg.run_report(only=["igm"])) == 3

    def test_filter_by_anchor_id(self):
        out = rg.run_report(only=["supercurrent_rate"])
        assert [r.id for r in out] == ["supercurrent_rate"]

    def test_unknown_filter(self):
        with pytest.raises(KeyError):
            rg.run_report(only=["nothing"])

    def test_zero_tolerance_fails(self):
        out = rg.run_report(tol_scale=0.0)
        assert sum(not r.passed for r in out) > len(out) // 2

    def test_loose_tolerance_not_stricter(self, rows):
        loose = rg.run_report(tol_scale=2.0)
        assert all(r.passed for r in loose)
        assert all(lr.tolerance >= r.tolerance for lr, r in zip(loose, rows))

    def test_model_override_propagates(self):
        m = load_defaults()["models"]
        m["supercurrent"]["k_F"] *= 2
        r = rg.run_report(m, only=["supercurrent_rate"])[0]
        base = rg.run_report(only=["supercurrent_rate"])[0]
        assert r.computed == pytest.approx(base.computed / 2, rel=1e-12, abs=0)

    def test_table_footer(self, rows):
        text = rg.format_table(rows)
        assert text.splitlines()[-1] == f"{len(rows)}/{len(rows)} anchors pass"

    def test_as_dict(self, rows):
        d = rows[0].as_dict()
        assert {"id", "computed", "quoted", "deviation", "passed"} <= set(d)


class TestTolerances:
    @pytest.mark.parametrize(
        "kind, v, ref, dev",
        [
            ("rel", 1.1, 1.0, 0.1),
            ("factor", 0.5, 1.0, 2.0),
            ("factor", 2.0, 1.0, 2.0),
            ("decades", 100.0, 1.0, 2.0),
            ("at_least", 0.1, 1.0, -1.0),
        ],
    )
    def test_deviation(self, kind, v, ref, dev):
        assert rg._deviation(kind, v, ref) == pytest.approx(dev, rel=1e-12, abs=1e-15)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            rg._deviation("percent", 1.0, 1.0)

    def test_nonpositive_factor(self):
        assert math.isinf(rg._deviation("factor", -1.0, 1.0))

    @pytest.mark.parametrize("kind, tol, scale, expected", [("factor", 4.0, 0.5, 2.0), ("rel", 0.2, 0.5, 0.1)])
    def test_scaling(self, kind, tol, scale, expected):
        assert rg._scaled(kind, tol, scale) == pytest.approx(expected, rel=1e-12, abs=0)

    def test_at_least_semantics(self):
        a = rg.Anchor("floor", "g", "", lambda m: 10.0, 1.0, "at_least", 0.0)
        assert rg.evaluate_anchor(a, {}).passed
        b = rg.Anchor("floor", "g", "", lambda m: 0.5, 1.0, "at_least", 0.5)
        assert rg.evaluate_anchor(b, {}).passed
        assert not rg.evaluate_anchor(b, {}, tol_scale=0.0).passed

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cslbounds import projections as pj
from cslbounds.units import DIMENSIONLESS, q

S = q(1e-3, "cm")
D = q(10.0, "g cm^-3")


class TestCases:
    @pytest.mark.parametrize("label, lam, rc", [("standard", 2.2e-17, 1e-5), ("case1", 4e-10, 1e-5), ("case2", 3e-8, 1e-4)])
    def test_lookup(self, label, lam, rc):
        p = pj.case(label).params
        assert (p.lam.value, p.r_C.value) == (lam, rc)

    def test_unknown(self):
        with pytest.raises(ValueError):
            pj.case("case3")


class TestCollettPearle:
    @pytest.mark.parametrize("pc, expected", [(pj.CASE_I, 6.6e2), (pj.CASE_II, 1.8e4)], ids=["case1", "case2"])
    def test_ratio(self, pc, expected):
        assert pj.collett_pearle_ratio(pc) == pytest.approx(expected, rel=0.05, abs=0)

    @given(st.floats(min_value=0.1, max_value=100.0))
    def test_linear_in_time(self, t):
        a = pj.collett_pearle_ratio(pj.CASE_I, t=q(1.0, "s"))
        b = pj.collett_pearle_ratio(pj.CASE_I, t=q(t, "s"))
        assert b / a == pytest.approx(t, rel=1e-12, abs=0)

    def test_spread_is_ratio_times_sql(self):
        d = pj.DiskGeometry.calibrated(pj.CASE_I.params.r_C)
        spread = pj.rotational_spread(pj.CASE_I)
        assert spread.value == pytest.approx(
            pj.collett_pearle_ratio(pj.CASE_I) * pj.sql_angle(d.I, q(1.0, "s")).value, rel=1e-12, abs=0
        )

    @pytest.mark.parametrize("kw", [dict(L=q(0.0, "cm")), dict(b=q(1.0, "s")), dict(f_rot=0.0)])
    def test_geometry_validation(self, kw):
        base = dict(L=q(2e-5, "cm"), b=q(5e-6, "cm"))
        base.update(kw)
        with pytest.raises(ValueError):
            pj.DiskGeometry(**base)


class TestSql:
    def test_minimization_matches_closed_form(self):
        I = pj.DiskGeometry.calibrated(q(1e-5, "cm")).I
        d0, total = pj.sql_minimization(I, q(1.0, "s"))
        sql = pj.sql_angle(I, q(1.0, "s")).value
        assert total == pytest.approx(sql, rel=1e-6, abs=0)
        assert d0 == pytest.approx(sql / 2**0.5, rel=1e-4, abs=0)

    def test_angle_is_dimensionless(self):
        I = pj.DiskGeometry.calibrated(q(1e-5, "cm")).I
        assert pj.sql_angle(I, q(1.0, "s")).dim == DIMENSIONLESS


class TestMirror:
    @pytest.mark.parametrize(
        "pc, expected",
        [(pj.CASE_I, 4e-10 / 2.2e-17), (pj.CASE_II, 3e-8 / 2.2e-17 * 100)],
        ids=["case1", "case2"],
    )
    def test_eta_multiplier(self, pc, expected):
        ratio = float(pj.mirror_eta(pc, S, D) / pj.mirror_eta(pj.STANDARD, S, D))
        assert ratio == pytest.approx(expected, rel=1e-12, abs=0)

    def test_rounded_multipliers(self):
        r1 = float(pj.mirror_eta(pj.CASE_I, S, D) / pj.mirror_eta(pj.STANDARD, S, D))
        r2 = float(pj.mirror_eta(pj.CASE_II, S, D) / pj.mirror_eta(pj.STANDARD, S, D))
        assert r1 == pytest.approx(2e7, rel=0.1, abs=0)
        assert r2 == pytest.approx(1.5e11, rel=0.1, abs=0)

    def test_damping_anchor_and_case2(self):
        assert pj.fringe_damping(pj.CASE_I) == pytest.approx(0.04, rel=1e-12, abs=0)
        assert pj.fringe_damping(pj.CASE_II) == pytest.approx(3e2, rel=0.01, abs=0)


class TestFixtures:
    @pytest.mark.parametrize("pc", [pj.CASE_I, pj.CASE_II])
    def test_four_per_case(self, pc):
        fx = pj.quoted_ratio_fixtures(pc)
        assert len(fx) == 4
        assert all(f.value > 0 for f in fx)

    def test_case2_exceeds_case1(self):
        for a, b in zip(pj.quoted_ratio_fixtures(pj.CASE_I), pj.quoted_ratio_fixtures(pj.CASE_II)):
            assert (a.experiment, a.quantity) == (b.experiment, b.quantity)
            assert b.value > a.value

    def test_no_fixtures_for_standard(self):
        with pytest.raises(ValueError):
            pj.quoted_ratio_fixtures(pj.STANDARD)

    def test_audit_flags_non_rescaling(self):
        audit = pj.fixture_scaling_audit()
        assert set(audit) == {"nanomechanical.occupation_increase", "nanomechanical.rms_over_sql",
                              "ligo.rms_over_sql", "lisa.rms_over_sql"}
        for row in audit.values():
            assert row["mismatch"] == pytest.approx(row["stored"] / row["rescaled"], rel=1e-12, abs=0)
            assert row["mismatch"] > 10

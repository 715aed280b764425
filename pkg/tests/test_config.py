import json
import math

import pytest

from cslbounds import lower_channels as lo
from cslbounds import upper_channels as up
from cslbounds.channels import CHANNELS, UnknownChannelError, evaluate, evaluate_many, get_channel, is_finite_bound
from cslbounds.config import ConfigError, load_config, load_defaults
from cslbounds.cslcore import CslParams
from cslbounds.projections import CASE_II

STD = CslParams.standard()


class TestLoadConfig:
    def test_defaults_valid(self):
        cfg = load_config()
        assert cfg.case == "standard"
        assert cfg.params() == STD
        assert cfg.grid.lambda_points == 50 and cfg.grid.rc_points == 50

    def test_round_trip(self):
        cfg = load_config()
        assert load_config(overrides=cfg.to_dict()) == cfg

    def test_case_and_overrides(self):
        cfg = load_config(overrides={"case": "case2", "lambda": 1e-9})
        p = cfg.params()
        assert p.lam.value == 1e-9
        assert p.r_C == CASE_II.params.r_C

    def test_user_file_merges(self, tmp_path):
        f = tmp_path / "run.json"
        f.write_text(json.dumps({"models": {"dust": {"Tg": 25.0}}}))
        cfg = load_config(f)
        assert cfg.models["dust"]["Tg"] == 25.0
        assert cfg.models["dust"]["kappa"] == 0.05

    @pytest.mark.parametrize(
        "bad",
        [
            {"case": "case3"},
            {"lambda": -1.0},
            {"channels": []},
            {"workers": 0},
            {"format": "xml"},
            {"unknown_key": 1},
            {"models": {"dust": {"Tg": "warm"}}},
            {"grid": {"lambda_min": 1.0, "lambda_max": 1e-3}},
            {"models": {"cosmology": {"Omega_m": 0.3}}},
        ],
    )
    def test_schema_errors(self, bad):
        with pytest.raises(ConfigError):
            load_config(overrides=bad)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.json")

    def test_non_object_root(self, tmp_path):
        f = tmp_path / "list.json"
        f.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            load_config(f)

    def test_defaults_not_mutated(self):
        load_config(overrides={"models": {"dust": {"Tg": 99.0}}})
        assert load_defaults()["models"]["dust"]["Tg"] == 20.0


# registry evaluation with embedded defaults must match the module-level defaults
DIRECT = {
    "photographic": lambda p: lo.photographic_lower_bound(p),
    "fullerene": lambda p: up.fullerene_bound(p),
    "supercurrent": lambda p: up.supercurrent_bound(p),
    "excitation_hydrogen": lambda p: up.excitation_bound(p, up.HYDROGEN),
    "excitation_proton": lambda p: up.excitation_bound(p, up.PROTON_CONSTITUENT),
    "excitation_proton_current": lambda p: up.excitation_bound(p, up.PROTON_CURRENT),
    "excitation_germanium": lambda p: up.excitation_bound(p),
    "radiation": lambda p: up.radiation_bound(p),
    "radiation_free": lambda p: up.radiation_bound(p, neutralized=False),
    "cmb": lambda p: up.cmb_budget_bound(p),
    "igm_z3": lambda p: up.igm_bound(p),
    "igm_z0": lambda p: up.igm_bound(p, s=up.IGM_Z0),
    "igm": lambda p: up.igm_combined_bound(p),
    "dust": lambda p: up.dust_grain_bound(p),
    "planetary": lambda p: up.planetary_bound(p),
}


class TestRegistry:
    @pytest.mark.parametrize("cid", sorted(DIRECT))
    def test_defaults_match_module_defaults(self, cid):
        a = evaluate(cid, STD).lambda_bound.value
        b = DIRECT[cid](STD).lambda_bound.value
        assert a == pytest.approx(b, rel=1e-9, abs=0)

    @pytest.mark.parametrize("cid", sorted(CHANNELS))
    def test_channel_id_matches_key(self, cid):
        r = evaluate(cid, STD)
        assert r.channel_id == cid
        assert r.kind in ("upper", "lower")
        assert r.lambda_bound.value > 0

    def test_every_default_channel_registered(self):
        for cid in load_defaults()["channels"]:
            get_channel(cid)

    def test_sections_exist_in_models(self):
        models = load_defaults()["models"]
        for ch in CHANNELS.values():
            assert set(ch.sections) <= set(models)

    def test_unknown(self):
        with pytest.raises(UnknownChannelError):
            get_channel("telepathy")

    def test_model_override_changes_result(self):
        m = load_defaults()["models"]
        m["dust"]["Tg"] = 40.0
        a = evaluate("dust", STD).lambda_bound.value
        b = evaluate("dust", STD, m).lambda_bound.value
        assert b / a == pytest.approx(32.0, rel=1e-9, abs=0)

    def test_evaluate_many_order(self):
        ids = ["dust", "cmb", "photographic"]
        assert [r.channel_id for r in evaluate_many(ids, STD)] == ids

    def test_finite(self):
        assert all(is_finite_bound(evaluate(c, STD)) for c in CHANNELS)
        assert math.isfinite(evaluate("igm", STD).multiplier_vs_standard)

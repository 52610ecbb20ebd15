import pytest

from rs2.mpc import (
    CATEGORIES,
    GatherVerdict,
    ModelViolationError,
    MpcConfig,
    RoundLedger,
    check_gather,
)


class TestConfig:
    def test_linear_memory(self):
        cfg = MpcConfig(regime="linear", n=1000, m=5000, c_lin=8)
        assert cfg.local_memory == 8000
        assert cfg.global_cap >= cfg.n + cfg.m
        assert cfg.machine_count * cfg.local_memory >= cfg.global_cap

    def test_sublinear_memory(self):
        cfg = MpcConfig(regime="sublinear", n=10 ** 6, m=0, alpha=0.5, c_sub=4)
        assert cfg.local_memory == 4000

    def test_alpha_guard(self):
        with pytest.raises(ValueError):
            MpcConfig(regime="sublinear", n=10, m=0, alpha=1.5)
        with pytest.raises(ValueError):
            MpcConfig(regime="warp", n=10, m=0)


class TestCheckGather:
    def test_linear_ok(self):
        cfg = MpcConfig(regime="linear", n=1000, m=0, c_lin=8)
        assert check_gather(cfg, 3000).ok

    def test_sublinear_infeasible(self):
        cfg = MpcConfig(regime="sublinear", n=10 ** 6, m=0, alpha=0.5)
        verdict = check_gather(cfg, 10 ** 6)
        assert not verdict.ok
        assert verdict.deficit == 10 ** 6 - cfg.local_memory

    def test_zero_words(self):
        cfg = MpcConfig(regime="sublinear", n=100, m=0, alpha=0.5)
        assert check_gather(cfg, 0).ok


class TestLedger:
    def test_primitive_charges(self):
        led = RoundLedger(c_prim=2)
        led.charge_primitive("sort")
        assert led.rounds["primitives"] == 2
        led.charge_primitive("aggregate")
        assert led.rounds["primitives"] == 4

    def test_unknown_primitive(self):
        led = RoundLedger()
        with pytest.raises(ValueError):
            led.charge_primitive("teleport")

    def test_lifecycle_guard(self):
        led = RoundLedger()
        led.charge("mis", 1)
        led.finalize()
        with pytest.raises(ModelViolationError):
            led.charge("mis", 1)

    def test_totals_match_entries(self):
        led = RoundLedger()
        led.charge("sampling", 2, "a")
        led.charge_derand("b")
        led.charge("gathering", 3)
        assert led.total_rounds == sum(
            e["rounds"] for e in led.entries if e["category"] != "space"
        )

    def test_space_accounting(self):
        cfg = MpcConfig(regime="linear", n=10, m=10)
        led = RoundLedger()
        led.account_space(cfg, 15)
        led.account_space(cfg, 7)
        assert led.peak_global_space == 15 and not led.over_cap
        led.account_space(cfg, cfg.global_cap + 1)
        assert led.over_cap

    def test_categories_complete(self):
        led = RoundLedger()
        assert set(led.rounds) == set(CATEGORIES)
        with pytest.raises(ValueError):
            led.charge("quantum", 1)
        with pytest.raises(ValueError):
            led.charge("mis", -1)

    def test_serialization(self):
        led = RoundLedger()
        led.charge("coloring", 2)
        d = led.to_dict()
        assert d["rounds"]["coloring"] == 2 and d["total_rounds"] == 2

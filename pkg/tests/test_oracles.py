"""The frozen golden values must match a fresh run of the independent oracles."""
import pytest

from oracles import chau_oracle, golden, ss_oracle


def test_chau_oracle_reproduces_golden():
    result = chau_oracle.golden()
    for label in ("0", "1"):
        r = result[label]
        assert r["untouched_pass"] == pytest.approx(1, abs=1e-12)
        assert r["honest_accuracy"] == pytest.approx(golden.CHAU_HONEST_ACCURACY, abs=1e-9)
        assert r["p_star_min"] == pytest.approx(golden.CHAU_P_STAR, abs=1e-9)
        assert r["p_star_max"] == pytest.approx(golden.CHAU_P_STAR, abs=1e-9)
        assert r["q_star_min"] == pytest.approx(golden.CHAU_Q_STAR, abs=1e-9)
        assert r["q_star_max"] == pytest.approx(golden.CHAU_Q_STAR, abs=1e-9)
        assert r["crude_accuracy_min"] == pytest.approx(golden.CHAU_CRUDE_ACCURACY, abs=1e-9)
        assert r["decoy_slot_detection"] == pytest.approx(golden.CHAU_DECOY_SLOT_DETECTION, abs=1e-9)


def test_ss_oracle_reproduces_golden():
    result = ss_oracle.golden()
    for (n, m), expected in golden.COLLECTIVE.items():
        got = result[f"collective_{n}_{m}"]
        for key, value in expected.items():
            assert got[key] == pytest.approx(value, abs=1e-9), (n, m, key)
    for (n, m), value in golden.READ_SUCCESS.items():
        assert result["read_success"][f"{n},{m}"] == pytest.approx(value, abs=1e-12)

import math

import pytest

import smwss


@pytest.fixture(scope="module")
def cache(tmp_path_factory):
    return tmp_path_factory.mktemp("cache")


def quick(cache, **extra):
    s = {"mesh_density": "1500", "cache_dir": str(cache)}
    s.update(extra)
    return smwss.Config(set=s)


def test_constants():
    assert abs(smwss.bloch_frequency() - 568.5) < 0.2
    assert smwss.recoil_energy() == pytest.approx(5.37e-30, rel=5e-3)
    assert smwss.lj_depth_from_z0(2.3, 3.28) == pytest.approx(0.030, rel=0.03)


def test_config_errors():
    assert "U" in smwss.config_keys()
    with pytest.raises(smwss.ConfigError, match="foo"):
        smwss.Config(set={"foo": "1"})
    with pytest.raises(smwss.ConfigError):
        smwss.Config(set={"U": "-1"})
    a, b = smwss.Config(), smwss.Config()
    assert a.fingerprint() == b.fingerprint()
    b.set("U", "4")
    assert a.fingerprint() != b.fingerprint()


def test_c3_and_potential(cache):
    cfg = quick(cache)
    fit = smwss.extract_c3(cfg)
    assert 2.6 <= fit["c3"] <= 4.0
    v = smwss.cp_potential(cfg, [2e-9, 20e-9])
    assert v[0] < v[1] < 0


def test_solve(cache):
    out = smwss.solve(quick(cache), wavefunctions=True)
    states = out["states"]
    assert [s["label"] for s in states[:3]] == ["surface-bound", "surface-bound", "smwss"]
    far = [s for s in states if s["n"] >= 12]
    assert far and all(abs(s["mean_z"] - round(s["mean_z"])) < 0.01 for s in far)
    assert len(out["z"]) == len(states[0]["psi"])
    assert math.isclose(out["intervals"][-1], -0.0701, abs_tol=5e-4)


def test_run_and_compute(cache, tmp_path):
    cfg = quick(cache)
    cfg.output_dir = tmp_path
    manifest = smwss.run("perfect-surface", cfg, json_mirror=True)
    assert manifest["subcommand"] == "perfect-surface"
    assert (tmp_path / "perfect_surface.csv").exists()
    assert (tmp_path / "perfect_surface.json").exists()
    tables = smwss.compute("perfect-surface", cfg)
    t = tables["perfect_surface"]
    col = t["columns"].index("interval_Er")
    assert t["rows"][1][col] == pytest.approx(-0.1371, abs=2e-3)
    with pytest.raises(smwss.ConfigError):
        smwss.compute("nope", cfg)

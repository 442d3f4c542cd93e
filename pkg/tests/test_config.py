from cutcraft.config import Settings, default_repeats


def test_environment_overrides_use_the_prefix(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CUTCRAFT_WORKERS", "4")
    monkeypatch.setenv("CUTCRAFT_DEFAULT_REPEATS", "7")
    monkeypatch.setenv("WORKERS", "9")
    fresh = Settings()
    assert fresh.WORKERS == 4
    assert fresh.DEFAULT_REPEATS == 7
    assert fresh.ORACLE_LIMIT == 22


def test_env_file_is_read(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".env").write_text("CUTCRAFT_CLIQUEWIDTH_CAP=3\nUNRELATED=1\n")
    assert Settings().CLIQUEWIDTH_CAP == 3


def test_config_is_declared_as_model_config():
    assert "Config" not in vars(Settings)
    assert Settings.model_config["env_prefix"] == "CUTCRAFT_"
    assert Settings.model_config["env_file"] == ".env"


def test_default_repeats_grow_with_n():
    assert default_repeats(1) >= 10
    assert default_repeats(5000) >= default_repeats(10)

import json

from config import Config
from utils.config_manager import ConfigManager, UserConfig


def test_defaults_without_file(tmp_path):
    manager = ConfigManager(tmp_path)
    assert manager.config == UserConfig()
    assert manager.get("default_tmax") == 6
    assert manager.get("missing", "fallback") == "fallback"


def test_save_and_reload(tmp_path):
    manager = ConfigManager(tmp_path)
    assert manager.update(default_lambda=24, hash_name="sha512")
    assert manager.save_config()
    reloaded = ConfigManager(tmp_path)
    assert reloaded.get("default_lambda") == 24
    assert reloaded.get("hash_name") == "sha512"


def test_unknown_key_rejected(tmp_path):
    manager = ConfigManager(tmp_path)
    assert not manager.set("colour_theme", "dark")
    assert not manager.update(default_users=16, colour_theme="dark")
    assert manager.get("default_users") == 16


def test_partial_and_corrupt_files(tmp_path):
    (tmp_path / "user_config.json").write_text(json.dumps({"default_users": 32}), encoding="utf-8")
    manager = ConfigManager(tmp_path)
    assert manager.get("default_users") == 32
    assert manager.get("max_duplication") == UserConfig().max_duplication

    (tmp_path / "user_config.json").write_text("{not json", encoding="utf-8")
    assert ConfigManager(tmp_path).config == UserConfig()


def test_export_import(tmp_path):
    source = ConfigManager(tmp_path / "a")
    source.update(seed_warning=False, log_level="DEBUG")
    exported = tmp_path / "exported.json"
    assert source.export_config(str(exported))

    target = ConfigManager(tmp_path / "b")
    assert target.import_config(str(exported))
    assert target.get("seed_warning") is False
    assert ConfigManager(tmp_path / "b").get("log_level") == "DEBUG"
    assert not target.import_config(str(tmp_path / "absent.json"))


def test_reset_to_defaults(tmp_path):
    manager = ConfigManager(tmp_path)
    manager.set("default_tmax", 14)
    assert manager.reset_to_defaults()
    assert ConfigManager(tmp_path).get("default_tmax") == 6


def test_keystore_dir_resolution(monkeypatch, tmp_path):
    assert Config.get_keystore_dir(str(tmp_path)) == tmp_path
    monkeypatch.setenv("RSABE_KEYSTORE", str(tmp_path / "env"))
    assert Config.get_keystore_dir() == tmp_path / "env"

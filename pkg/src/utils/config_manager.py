"""
User Configuration Manager for RevoStore
Handles saving and loading operator defaults (group size, duplication bound, lifetimes)
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Optional

from config import Config

logger = logging.getLogger(__name__)


@dataclass
class UserConfig:
    """User configuration data structure"""
    # Group settings
    default_lambda: int = 32

    # Scheme settings
    max_duplication: int = 4
    default_tmax: int = 6
    default_users: int = 8

    # Sealed file settings
    hash_name: str = "sha256"

    # Console settings
    log_level: str = "WARNING"
    seed_warning: bool = True


class ConfigManager:
    """Manages user configuration persistence"""

    def __init__(self, config_dir: Optional[Path] = None):
        if config_dir is None:
            config_dir = Config.CONFIG_DIR
        self.config_dir = Path(config_dir)
        self.config_file = self.config_dir / "user_config.json"

        # Load existing config or fall back to defaults
        self.config = self.load_config()

    def load_config(self) -> UserConfig:
        """Load configuration from file or create default"""
        try:
            if self.config_file.exists():
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    data = json.load(f)
                return self._from_dict(data)
            logger.debug("No config file found, using default configuration")
            return UserConfig()

        except Exception as e:
            logger.warning(f"Error loading config: {e}; using default configuration")
            return UserConfig()

    def save_config(self) -> bool:
        """Save current configuration to file"""
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(asdict(self.config), f, indent=2, ensure_ascii=False)
            logger.info(f"Configuration saved to: {self.config_file}")
            return True

        except Exception as e:
            logger.error(f"Error saving config: {e}")
            return False

    def get(self, key: str, default=None):
        """Get a configuration value"""
        return getattr(self.config, key, default)

    def set(self, key: str, value: Any) -> bool:
        """Set a configuration value"""
        if not hasattr(self.config, key):
            logger.warning(f"Unknown config key: {key}")
            return False
        setattr(self.config, key, value)
        return True

    def update(self, **kwargs) -> bool:
        """Update multiple configuration values"""
        ok = True
        for key, value in kwargs.items():
            ok = self.set(key, value) and ok
        return ok

    def reset_to_defaults(self) -> bool:
        """Reset configuration to defaults"""
        self.config = UserConfig()
        return self.save_config()

    def export_config(self, file_path: str) -> bool:
        """Write the current configuration to another file"""
        try:
            with open(file_path, 'w', encoding='utf-8') as f:
                json.dump(asdict(self.config), f, indent=2, ensure_ascii=False)
            return True
        except Exception as e:
            logger.error(f"Error exporting config: {e}")
            return False

    def import_config(self, file_path: str) -> bool:
        """Load a configuration file and make it the saved configuration"""
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                self.config = self._from_dict(json.load(f))
            return self.save_config()
        except Exception as e:
            logger.error(f"Error importing config: {e}")
            return False

    @staticmethod
    def _from_dict(data: dict) -> UserConfig:
        # Loaded values win, missing keys take the dataclass default
        defaults = UserConfig()
        values = {f.name: data.get(f.name, getattr(defaults, f.name)) for f in fields(UserConfig)}
        return UserConfig(**values)


# Global configuration manager instance
config_manager = ConfigManager()


# Convenience functions
def get_config(key: str, default=None):
    """Get a configuration value"""
    return config_manager.get(key, default)

"""
Configuration settings for the RevoStore RS-ABE toolkit
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Application configuration"""

    # Application info
    APP_NAME = "RevoStore"
    APP_VERSION = "1.0.0"
    APP_DESCRIPTION = "Key-policy revocable-storage attribute-based encryption (desk-scale, insecure parameters)"

    # Paths
    BASE_DIR = Path(__file__).parent.parent
    LOGS_DIR = BASE_DIR / "logs"
    CONFIG_DIR = Path(os.getenv("RSABE_CONFIG_DIR", str(BASE_DIR / "config")))

    # Keystore defaults
    DEFAULT_KEYSTORE = os.getenv("RSABE_KEYSTORE", "keystore")
    DESCRIPTOR_FILE = "descriptor.bin"
    PUBLIC_INFO_FILE = "public_info.bin"
    PUBLIC_KEY_FILE = "public.key"
    MASTER_KEY_FILE = "master.key"

    # Group parameters (bits per prime; 32 gives N of about 96 bits, NOT secure)
    DEFAULT_LAMBDA = int(os.getenv("RSABE_LAMBDA", "32"))
    MIN_LAMBDA = 16
    PARAM_SEARCH_ATTEMPTS = 20000
    POINT_SEARCH_ATTEMPTS = 1000

    # Scheme parameters
    MAX_DUPLICATION = int(os.getenv("RSABE_MAX_DUPLICATION", "4"))
    DEFAULT_TMAX = 6
    DEFAULT_USERS = 8

    # Sealed file configuration
    HASH_NAME = "sha256"
    SEALED_FORMAT_VERSION = 1

    # Game harness
    GAME_MIN_TRIALS = 100
    GAME_DEFAULT_LAMBDA = 24

    # Logging Configuration
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FILE = "revostore.log"
    LOG_MAX_BYTES = 10 * 1024 * 1024  # 10MB
    LOG_BACKUP_COUNT = 5

    @classmethod
    def get_keystore_dir(cls, override: str = None) -> Path:
        """Resolve the keystore directory (flag, then environment, then default)"""
        if override:
            return Path(override)
        return Path(os.getenv("RSABE_KEYSTORE", cls.DEFAULT_KEYSTORE))

    @classmethod
    def get_log_file(cls) -> Path:
        """Get path to log file"""
        return cls.LOGS_DIR / cls.LOG_FILE

"""
Keystore directory management for RevoStore
Authority keystores hold the descriptor and master key; client keystores never do
"""

import json
import logging
from pathlib import Path
from typing import Optional

from config import Config
from crypto.codec import deserialize_descriptor, serialize_descriptor
from crypto.group import GroupDescriptor, PublicInfo
from scheme import encoding
from scheme.errors import DecodeError, KeystoreError
from scheme.rsabe import RsabeMasterKey, RsabePublicKey
from utils.helpers import fingerprint, write_atomic

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


class Keystore:
    """Binary artifacts of one RS-ABE instance plus a JSON manifest"""

    def __init__(self, directory: Optional[str] = None):
        self.directory = Config.get_keystore_dir(directory)
        self._public_info: Optional[PublicInfo] = None
        self._public_key: Optional[RsabePublicKey] = None

    def path(self, name: str) -> Path:
        return self.directory / name

    @property
    def manifest_file(self) -> Path:
        return self.path(MANIFEST_FILE)

    @property
    def is_authority(self) -> bool:
        return self.path(Config.MASTER_KEY_FILE).exists()

    def exists(self) -> bool:
        return self.path(Config.PUBLIC_KEY_FILE).exists() and self.path(Config.PUBLIC_INFO_FILE).exists()

    def ensure_empty(self) -> None:
        """Refuse to initialize over an existing non-empty directory"""
        if self.directory.exists() and any(self.directory.iterdir()):
            raise KeystoreError(f"keystore directory {self.directory} is not empty")

    def _read(self, name: str) -> bytes:
        try:
            return self.path(name).read_bytes()
        except FileNotFoundError as e:
            raise KeystoreError(f"keystore {self.directory} has no {name}") from e

    def _write(self, name: str, data: bytes) -> None:
        write_atomic(self.path(name), data)
        logger.debug(f"[KEYSTORE] wrote {name} ({len(data)} bytes)")

    def initialize(self, descriptor: Optional[GroupDescriptor], mk: Optional[RsabeMasterKey],
                   pi: PublicInfo, pk: RsabePublicKey) -> str:
        """Write a fresh keystore; descriptor and mk are None for client keystores"""
        self.ensure_empty()
        self.directory.mkdir(parents=True, exist_ok=True)
        pi_bytes = encoding.encode_public_info(pi)
        pk_bytes = encoding.encode_public_key(pk)
        self._write(Config.PUBLIC_INFO_FILE, pi_bytes)
        self._write(Config.PUBLIC_KEY_FILE, pk_bytes)
        if descriptor is not None:
            self._write(Config.DESCRIPTOR_FILE, serialize_descriptor(descriptor))
        if mk is not None:
            self._write(Config.MASTER_KEY_FILE, encoding.encode_master_key(mk))

        digest = fingerprint(pi_bytes + pk_bytes)
        manifest = {
            "app": Config.APP_NAME,
            "version": Config.APP_VERSION,
            "mode": "authority" if mk is not None else "client",
            "fingerprint": digest,
            "attributes": list(pk.universe.names),
            "max_duplication": pk.universe.k,
            "t_max": pk.t_max,
            "n_max": pk.tree.n_max,
        }
        self._write(MANIFEST_FILE, json.dumps(manifest, indent=2).encode("utf-8"))
        self._public_info, self._public_key = pi, pk
        logger.info(f"[KEYSTORE] ✅ {manifest['mode']} keystore ready at {self.directory}")
        return digest

    def manifest(self) -> dict:
        try:
            return json.loads(self._read(MANIFEST_FILE).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise KeystoreError(f"manifest of {self.directory} is unreadable: {e}") from e

    def public_info(self) -> PublicInfo:
        if self._public_info is None:
            self._public_info = encoding.decode_public_info(self._read(Config.PUBLIC_INFO_FILE))
        return self._public_info

    def public_key(self) -> RsabePublicKey:
        if self._public_key is None:
            self._public_key = encoding.decode_public_key(self._read(Config.PUBLIC_KEY_FILE), self.public_info())
        return self._public_key

    def descriptor(self) -> GroupDescriptor:
        return deserialize_descriptor(self._read(Config.DESCRIPTOR_FILE))

    def master_key(self) -> RsabeMasterKey:
        if not self.is_authority:
            raise KeystoreError(f"{self.directory} is a client keystore without a master key")
        descriptor = self.descriptor()
        if descriptor.public_info() != self.public_info():
            raise DecodeError("descriptor does not match the public info")
        return encoding.decode_master_key(self._read(Config.MASTER_KEY_FILE), descriptor)

    def fingerprint(self) -> str:
        return fingerprint(self._read(Config.PUBLIC_INFO_FILE) + self._read(Config.PUBLIC_KEY_FILE))

    def export(self, target: "Keystore") -> str:
        """Copy the public files into a client keystore"""
        return target.initialize(None, None, self.public_info(), self.public_key())

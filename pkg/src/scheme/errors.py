"""
Typed failures raised by the RevoStore library
The CLI maps the three decryption conditions to exit codes 3/4/5
"""

from typing import Optional


class RsabeError(Exception):
    """Base class for every library error"""

    exit_code = 1


class ParameterError(RsabeError):
    """Invalid parameters (bit length, tree size, times, attributes)"""

    exit_code = 2


class DecodeError(RsabeError):
    """Malformed, truncated or mistagged binary artifact"""


class IntegrityError(RsabeError):
    """Sealed file tag mismatch; no plaintext is released"""


class KeystoreError(RsabeError):
    """Keystore missing, incomplete or not writable"""


class NotAuthorized(RsabeError):
    """Attribute set does not satisfy the access structure"""

    exit_code = 4
    condition = "attribute set does not satisfy the key policy"


class Revoked(RsabeError):
    """User is in the revoked set of the update key"""

    exit_code = 3
    condition = "user is revoked by the time-update key"


class TimeTooEarly(RsabeError):
    """Ciphertext time is later than the update key time"""

    exit_code = 5
    condition = "ciphertext time is later than the time-update key"


class NoMatchingHeader(RsabeError):
    """No SUE sub-header label is a prefix of the key label"""


class ModulusFactorFound(RsabeError):
    """Gaussian elimination met a nonzero pivot sharing a factor with N"""

    def __init__(self, factor: int):
        super().__init__(f"non-invertible pivot reveals a factor of N: {factor}")
        self.factor = factor


class RestrictionViolated(RsabeError):
    """IND-CPA query rejected by the challenger"""

    DUPLICATE_USER = "duplicate-user"
    DUPLICATE_TIME = "duplicate-time"
    CHALLENGE = "challenge-condition"
    PHASE2_KEY = "phase2-key-condition"
    PHASE2_UPDATE = "phase2-update-condition"

    def __init__(self, query_index: int, rule: str, transcript=None):
        super().__init__(f"query {query_index} violates {rule}")
        self.query_index = query_index
        self.rule = rule
        self.transcript = transcript


class PolicySyntaxError(RsabeError):
    """Policy text does not match the grammar"""

    exit_code = 2

    def __init__(self, message: str, line: int, column: int, text: Optional[str] = None):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column
        self.text = text

"""Error taxonomy shared by every module.

Four failure classes cover the library surface:

* ``InvalidArgumentError`` -- an argument violates a precondition that is
  checkable without any numerics (bad counts, negative spacings, length
  mismatches).
* ``DomainError`` -- geometrically meaningless request (source inside the
  array hull, overlapping arrays, r_min inside the hull).
* ``UnsupportedModelError`` -- the operation exists but not for this input
  model (far-field sentinel fed to an exact-distance routine, angular
  codebook fed to a polar-only report).
* ``NumericError`` -- a numerical procedure failed (bracket without sign
  change, rank-deficient least squares / precoder); carries a diagnostics
  dict so callers can report what was attempted.
"""


class NearFieldError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(NearFieldError, ValueError):
    pass


class DomainError(NearFieldError, ValueError):
    pass


class UnsupportedModelError(NearFieldError):
    pass


class NumericError(NearFieldError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigError(NearFieldError):
    """CLI-facing configuration problem; message names the offending key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

"""Falsification certificates for theorem-level checks."""


class FalsificationError(Exception):
    """Raised when an exactly checkable claim fails.

    Carries a machine-readable certificate so the CLI can emit it and exit
    with the dedicated status code.
    """

    def __init__(self, claim, certificate=None):
        super().__init__(claim)
        self.claim = claim
        self.certificate = certificate or {}

    def as_dict(self):
        return {"claim": self.claim, "certificate": self.certificate}

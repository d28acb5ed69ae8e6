import os

DEFAULT_STATE_CAP = 1_000_000


class StateCapExceeded(RuntimeError):
    """A state-space exploration grew past its configured cap."""

    def __init__(self, cap, what="states"):
        self.cap = cap
        super().__init__(f"exploration exceeded the cap of {cap} {what}")


def default_cap():
    """The state cap, overridable through ``CCS_STATE_CAP``."""
    raw = os.environ.get("CCS_STATE_CAP")
    if raw is None:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"CCS_STATE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("CCS_STATE_CAP must be positive")
    return cap

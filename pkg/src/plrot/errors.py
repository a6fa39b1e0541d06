"""Exception hierarchy.

Errors fall into three families so the CLI can map them to exit codes:
bad input, internal consistency failures, and oracle disagreement.
"""


class PLRotError(Exception):
    pass


class InputError(PLRotError, ValueError):
    """Raised for malformed or invalid user-supplied data."""


class Discontinuity(InputError):
    pass


class NotCovering(InputError):
    pass


class SlopeNotPowerOfN(InputError):
    pass


class NotBijective(InputError):
    pass


class BaseTooSmall(InputError):
    pass


class BaseMismatch(InputError):
    pass


class NotMarkov(InputError):
    pass


class NotASink(InputError):
    pass


class DegenerateParams(InputError):
    pass


class InvalidLeafCount(InputError):
    pass


class FormatError(InputError):
    """A document does not follow the expected file grammar."""


class ConsistencyError(PLRotError, RuntimeError):
    """Something the theory guarantees did not happen."""


class HeightNotFound(ConsistencyError):
    pass


class RealizationMismatch(ConsistencyError):
    pass


class FreeEnd(ConsistencyError):
    pass


class NoPeriodUpTo(PLRotError):
    def __init__(self, q_max):
        super().__init__(f"no periodic point of period <= {q_max}")
        self.q_max = q_max


class OracleMismatch(PLRotError):
    pass

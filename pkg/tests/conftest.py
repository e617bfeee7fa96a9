import pytest
from mpmath import mp, mpf

from gompertz import PrecisionContext

# 60-digit reference for the target constant, frozen from the cross-validated
# run (quadrature and e*E1 evaluators agreeing to ~1e-75 at D=60).
DELTA_60 = "0.596347362323194074341078499369279376074177860152548781573485"


def absdiff(a, b, bits=600):
    """|a - b| at high working precision; plain mpf arithmetic in tests would
    silently round at the 53-bit global default. Pass exact operands as
    Fraction or str so their conversion also happens at high precision."""
    from fractions import Fraction

    def convert(v):
        if isinstance(v, Fraction):
            return mpf(v.numerator) / v.denominator
        return mpf(v)

    with mp.workprec(bits):
        return abs(convert(a) - convert(b))


def hp(expr_bits=600):
    """Working-precision context manager for test-side arithmetic."""
    return mp.workprec(expr_bits)


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(30)


@pytest.fixture(scope="session")
def ctx60():
    return PrecisionContext(60)


@pytest.fixture(scope="session")
def ctx10():
    return PrecisionContext(10)

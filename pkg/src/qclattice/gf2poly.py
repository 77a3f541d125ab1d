"""Polynomial arithmetic over GF(2).

Polynomials are plain Python integers: bit ``i`` holds the coefficient of
``x**i``.  Everything here is exact; there is no floating point and no
dependency on array libraries, so these routines are safe to use from any
module, including key generation.
"""


def degree(a: int) -> int:
    """Degree of ``a``; -1 for the zero polynomial."""
    return a.bit_length() - 1


def mul(a: int, b: int) -> int:
    """Carry-less product over GF(2)."""
    r = 0
    while a:
        low = a & -a
        r ^= b << (low.bit_length() - 1)
        a ^= low
    return r


def mod(a: int, m: int) -> int:
    """Remainder of ``a`` modulo ``m`` (``m`` nonzero)."""
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def divmod2(a: int, m: int):
    """Quotient and remainder of ``a`` divided by ``m``."""
    dm = m.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= dm:
        s = a.bit_length() - 1 - dm
        q |= 1 << s
        a ^= m << s
    return q, a


def mulmod(a: int, b: int, m: int) -> int:
    return mod(mul(a, b), m)


def sqmod(a: int, m: int) -> int:
    """Square ``a`` modulo ``m``; squaring over GF(2) is bit spreading."""
    s = bin(a)[2:]
    sq = int("0".join(s), 2) if len(s) > 1 else a
    return mod(sq, m)


def powmod(a: int, e: int, m: int) -> int:
    """``a**e mod m`` by square-and-multiply."""
    r = 1
    a = mod(a, m)
    while e:
        if e & 1:
            r = mulmod(r, a, m)
        a = sqmod(a, m)
        e >>= 1
    return r


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod(a, b)
    return a


def invmod(a: int, m: int):
    """Inverse of ``a`` modulo ``m`` via extended Euclid, or None."""
    if mod(a, m) == 0:
        return None
    r0, r1 = m, mod(a, m)
    s0, s1 = 0, 1
    while r1:
        q, r2 = divmod2(r0, r1)
        r0, r1 = r1, r2
        s0, s1 = s1, s0 ^ mul(q, s1)
    if r0 != 1:  # gcd != 1
        return None
    return mod(s0, m)


def reverse(a: int, n: int) -> int:
    """Reciprocal polynomial x**n * a(1/x) of a degree-<=n polynomial."""
    r = 0
    for i in range(n + 1):
        if (a >> i) & 1:
            r |= 1 << (n - i)
    return r


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Ben-Or / Rabin irreducibility test for ``f`` over GF(2)."""
    n = degree(f)
    if n <= 0 or not (f & 1):
        return n == 1 and f == 2  # x itself is irreducible but has f(0)=0
    h = 2
    powers = {}
    need = {n} | {n // p for p in _prime_divisors(n)}
    for i in range(1, n + 1):
        h = sqmod(h, f)
        if i in need:
            powers[i] = h
    if powers[n] != 2:
        return False
    for p in _prime_divisors(n):
        if gcd(powers[n // p] ^ 2, f) != 1:
            return False
    return True


def order(f: int, limit: int = 1 << 24) -> int | None:
    """Multiplicative order of x modulo ``f`` (requires f(0) = 1).

    Steps x, x^2, x^3, ... until 1 reappears; returns None past ``limit``.
    """
    if not (f & 1):
        raise ValueError("f(0) must be 1")
    e, h = 1, mod(2, f)
    while h != 1:
        h = mod(h << 1, f)
        e += 1
        if e > limit:
            return None
    return e


def is_primitive(f: int, factors_of_order) -> bool:
    """Primitivity given the distinct prime factors of 2**deg(f) - 1."""
    n = degree(f)
    big = (1 << n) - 1
    if powmod(2, big, f) != 1:
        return False
    return all(powmod(2, big // p, f) != 1 for p in factors_of_order)

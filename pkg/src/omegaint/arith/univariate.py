"""Dense univariate polynomial kernels over Q.

Polynomials are plain lists of :class:`~fractions.Fraction`, lowest degree
first, with no trailing zeros; ``[]`` is the zero polynomial.  Everything
here is pure and allocation-happy; callers wrap the lists in richer types.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from ..errors import ZeroPolynomial

F0 = Fraction(0)
F1 = Fraction(1)


def trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def from_ints(coeffs):
    return trim(Fraction(c) for c in coeffs)


def deg(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def sub(a, b):
    n = max(len(a), len(b))
    out = [F0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def neg(a):
    return [-c for c in a]


def scale(a, c):
    if not c:
        return []
    return [c * x for x in a]


def mul(a, b):
    if not a or not b:
        return []
    out = [F0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def power(a, e):
    result = [F1]
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) <= db:
        return [], trim(a)
    q = [F0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        c = c / lead
        q[k - db] = c
        for j in range(db + 1):
            a[k - db + j] -= c * b[j]
    return trim(q), trim(a[:db])


def exact_quo(a, b):
    q, r = divmod_(a, b)
    if r:
        raise ValueError("inexact polynomial division")
    return q


def monic(a):
    if not a:
        return []
    lead = a[-1]
    if lead == 1:
        return list(a)
    return [c / lead for c in a]


def _int_primitive(a):
    """Integer coefficients with content 1 and positive lead, for a nonzero ``a``."""
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _int_prem(a, b):
    """Pseudo-remainder of integer lists: ``lead(b)^k a mod b``."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift_ = len(a) - 1 - db
        a = [x * lead for x in a]
        for j in range(db + 1):
            a[shift_ + j] -= c * b[j]
        while a and not a[-1]:
            a.pop()
    return a


def gcd_(a, b):
    """Monic gcd, via a primitive remainder sequence over the integers."""
    a, b = trim(a), trim(b)
    if not a:
        return monic(b)
    if not b:
        return monic(a)
    x, y = _int_primitive(a), _int_primitive(b)
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _int_prem(x, y)
        x, y = y, (_int_primitive([Fraction(c) for c in r]) if r else [])
    lead = x[-1]
    return [Fraction(c, lead) for c in x]


def deriv(a):
    return trim(c * i for i, c in enumerate(a) if i)


def evaluate(a, x):
    acc = F0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def compose(a, b):
    """Return a(b(x))."""
    acc = []
    for c in reversed(a):
        acc = add(mul(acc, b), [c] if c else [])
    return acc


def shift(a, x0):
    """Return a(x + x0) by repeated synthetic division (Taylor coefficients)."""
    return compose(a, trim([Fraction(x0), F1]))


def ord_at(a, x0):
    """Multiplicity of ``x0`` as a root of ``a`` (0 if not a root)."""
    if not a:
        raise ZeroPolynomial("order of the zero polynomial is undefined")
    x0 = Fraction(x0)
    k = 0
    cur = list(a)
    while True:
        # synthetic division by (x - x0)
        n = len(cur) - 1
        if n < 1:
            return k
        quo = [F0] * n
        acc = F0
        for i in range(n, 0, -1):
            acc = acc * x0 + cur[i]
            quo[i - 1] = acc
        rem = acc * x0 + cur[0]
        if rem:
            return k
        k += 1
        cur = quo


def low_order(a):
    """Exponent of the lowest nonzero term."""
    if not a:
        raise ZeroPolynomial("order of the zero polynomial is undefined")
    for i, c in enumerate(a):
        if c:
            return i
    raise AssertionError("unreachable")


def integer_primitive(a):
    """Scale ``a`` to coprime integer coefficients with positive leading term."""
    if not a:
        return []
    den = 1
    for c in a:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def squarefree_decomposition(a):
    """Yun's algorithm: return ``[(factor, multiplicity), ...]`` with monic,
    pairwise coprime, squarefree factors (constant factors omitted)."""
    if not a:
        raise ZeroPolynomial("squarefree decomposition of zero")
    a = monic(a)
    if len(a) == 1:
        return []
    da = deriv(a)
    g = gcd_(a, da)
    b = exact_quo(a, g)
    c = exact_quo(da, g)
    d = sub(c, deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        h = gcd_(b, d)
        if len(h) > 1:
            out.append((h, i))
        b = exact_quo(b, h)
        c = exact_quo(d, h)
        d = sub(c, deriv(b))
        i += 1
    return out


def squarefree_part(a):
    if not a:
        raise ZeroPolynomial("squarefree part of zero")
    return exact_quo(monic(a), gcd_(a, deriv(a)))


def is_squarefree(a):
    if not a:
        raise ZeroPolynomial("squarefree test of zero")
    return len(gcd_(a, deriv(a))) <= 1


# -- rational roots ---------------------------------------------------------

def _small_primes():
    p = 3
    while True:
        if all(p % q for q in range(3, int(p ** 0.5) + 1, 2)):
            yield p
        p += 2


def _ints_mod(a, m):
    return [c % m for c in a]


def _gcd_mod(a, b, p):
    a = _trim_mod(a)
    b = _trim_mod(b)
    while b:
        a, b = b, _rem_mod(a, b, p)
    return a


def _trim_mod(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _rem_mod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] * inv % p
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % p
    return _trim_mod(a[:db])


def _eval_mod(a, x, m):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % m
    return acc


def _ratrecon(u, m, nbound, dbound):
    r0, s0 = m, 0
    r1, s1 = u % m, 1
    while r1 > nbound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > dbound:
        return None
    return Fraction(r1, s1)


def rational_roots(a):
    """Distinct rational roots of ``a`` (ascending).

    Works on the squarefree part: roots are found modulo a good prime,
    Hensel-lifted, and recovered by rational reconstruction, then checked
    exactly.  No integer factorisation is needed.
    """
    if not a:
        raise ZeroPolynomial("roots of the zero polynomial")
    f = squarefree_part(a)
    roots = []
    if len(f) > 1 and not f[0]:
        roots.append(F0)
        f = f[1:]
    f = integer_primitive(f)
    n = len(f) - 1
    if n < 1:
        return sorted(roots)
    if n == 1:
        roots.append(Fraction(-f[0], f[1]))
        return sorted(roots)
    lead, const = f[-1], f[0]
    df = [c * i for i, c in enumerate(f) if i]
    for p in _small_primes():
        if lead % p == 0:
            continue
        fp = _ints_mod(f, p)
        g = _gcd_mod(fp, _ints_mod(df, p), p)
        if len(g) > 1:
            continue
        break
    # roots mod p; p stays small because bad primes divide the discriminant
    base = [x for x in range(p) if _eval_mod(f, x, p) == 0]
    bound = 2 * abs(const) * abs(lead) + 1
    for x in base:
        m = p
        while m <= bound:
            m2 = m * m
            fx = _eval_mod(f, x, m2)
            dfx = _eval_mod(df, x, m2)
            x = (x - fx * pow(dfx, -1, m2)) % m2
            m = m2
        cand = _ratrecon(x, m, abs(const), abs(lead))
        if cand is not None and evaluate([Fraction(c) for c in f], cand) == 0:
            roots.append(cand)
    return sorted(set(roots))

"""GF(256) arithmetic and Reed-Solomon coding as used by QR symbols.

Field: reduction polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D), generator alpha = 2.
Polynomials passed across the public API are lists of ints, highest degree first,
which is also the order codewords appear in a QR block.
"""
from .errors import DecodeFailure

PRIMITIVE = 0x11D
MAX_EC = 68


def _build_tables():
    exp = [0] * 512
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= PRIMITIVE
    # doubled so exp[log a + log b] never needs a modulo
    for i in range(255, 512):
        exp[i] = exp[i - 255]
    return tuple(exp), tuple(log)


EXP, LOG = _build_tables()


def gf_add(a, b):
    return a ^ b


def gf_mul(a, b):
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_inv(a):
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return EXP[255 - LOG[a]]


def gf_div(a, b):
    if b == 0:
        raise ZeroDivisionError("division by zero in GF(256)")
    if a == 0:
        return 0
    return EXP[(LOG[a] - LOG[b]) % 255]


def gf_pow(a, n):
    if a == 0:
        return 1 if n == 0 else 0
    return EXP[(LOG[a] * n) % 255]


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] ^= gf_mul(a, b)
    return out


def poly_eval(poly, x):
    """Horner evaluation; ``poly`` is highest degree first."""
    y = 0
    for c in poly:
        y = gf_mul(y, x) ^ c
    return y


def rs_generator(n_ec):
    """Monic generator polynomial with roots alpha^0 .. alpha^(n_ec - 1)."""
    if not 1 <= n_ec <= MAX_EC:
        raise ValueError(f"EC codeword count must be in 1..{MAX_EC}, got {n_ec}")
    g = [1]
    for j in range(n_ec):
        g = poly_mul(g, [1, EXP[j]])
    return g


_GEN_CACHE = {}


def _generator(n_ec):
    g = _GEN_CACHE.get(n_ec)
    if g is None:
        g = _GEN_CACHE[n_ec] = rs_generator(n_ec)
    return g


def rs_encode(data, n_ec):
    """Return the ``n_ec`` EC codewords for ``data`` (remainder of data * x^n_ec / g)."""
    if len(data) == 0:
        raise ValueError("data must be non-empty")
    gen = _generator(n_ec)
    rem = [0] * n_ec
    for d in data:
        factor = d ^ rem[0]
        rem = rem[1:] + [0]
        if factor:
            lf = LOG[factor]
            for i in range(n_ec):
                c = gen[i + 1]
                if c:
                    rem[i] ^= EXP[lf + LOG[c]]
    return rem


def syndromes(received, n_ec):
    return [poly_eval(received, EXP[j]) for j in range(n_ec)]


def _berlekamp_massey(synd):
    # error locator, lowest degree first
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for n in range(len(synd)):
        d = synd[n]
        for i in range(1, L + 1):
            if i < len(C):
                d ^= gf_mul(C[i], synd[n - i])
        if d == 0:
            m += 1
            continue
        coef = gf_div(d, b)
        shifted = [0] * m + [gf_mul(coef, x) for x in B]
        T = list(C)
        if len(shifted) > len(C):
            C = C + [0] * (len(shifted) - len(C))
        for i, x in enumerate(shifted):
            C[i] ^= x
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    while len(C) > 1 and C[-1] == 0:
        C.pop()
    return C, L


def _eval_low(poly, x):
    y = 0
    for c in reversed(poly):
        y = gf_mul(y, x) ^ c
    return y


def rs_decode(received, n_ec):
    """Correct up to ``n_ec // 2`` codeword errors.

    Returns ``(corrected, errors_fixed)``. Raises DecodeFailure when the error
    pattern is beyond capacity or the correction is inconsistent.
    """
    received = list(received)
    n = len(received)
    if n <= n_ec:
        raise ValueError("received block must be longer than the EC codeword count")
    synd = syndromes(received, n_ec)
    if not any(synd):
        return received, 0

    locator, L = _berlekamp_massey(synd)
    if L > n_ec // 2 or len(locator) - 1 != L:
        raise DecodeFailure(f"error locator degree {L} exceeds capacity {n_ec // 2}")

    # Chien search over the positions actually present in the (shortened) block
    positions = []
    for p in range(n):
        degree = n - 1 - p
        if _eval_low(locator, EXP[(255 - degree) % 255]) == 0:
            positions.append(p)
    if len(positions) != L:
        raise DecodeFailure("error locator roots do not match block positions")

    # Forney, first consecutive root alpha^0
    omega = [0] * n_ec
    for i, s in enumerate(synd):
        for j, l in enumerate(locator):
            if i + j < n_ec:
                omega[i + j] ^= gf_mul(s, l)
    deriv = [locator[i] if i % 2 == 1 else 0 for i in range(1, len(locator))]
    for p in positions:
        degree = n - 1 - p
        X = EXP[degree]
        X_inv = EXP[(255 - degree) % 255]
        denom = _eval_low(deriv, X_inv)
        if denom == 0:
            raise DecodeFailure("zero derivative at error location")
        magnitude = gf_mul(X, gf_div(_eval_low(omega, X_inv), denom))
        received[p] ^= magnitude

    if any(syndromes(received, n_ec)):
        raise DecodeFailure("residual syndrome after correction")
    return received, L

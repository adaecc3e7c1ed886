# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_kernel_py``; same row format and semantics.

Rows whose numerators and denominators all fit in 30 bits are eliminated
with C 64-bit arithmetic (products stay below 2^62); anything larger goes
through Python integers exactly as in the pure-Python kernel.
"""

from math import gcd

DEF SMALL = 1 << 30


cdef inline long long _cgcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef bint _is_small(object den, dict ent):
    cdef tuple t
    if not (-SMALL < den < SMALL):
        return False
    for t in ent.values():
        if not (-SMALL < t[0] < SMALL and -SMALL < t[1] < SMALL):
            return False
    return True


cpdef tuple normalize(object den, dict ent):
    cdef object g = den
    cdef object a, b
    cdef tuple t
    for t in ent.values():
        if g == 1:
            break
        a = t[0]
        b = t[1]
        g = gcd(g, a, b)
    if g == 1:
        return den, ent
    cdef dict out = {}
    for c, t in ent.items():
        out[c] = (t[0] // g, t[1] // g)
    return den // g, out


cdef tuple _eliminate_small(long long den, dict ent, object p, long long bden, dict bent):
    cdef tuple t = ent[p]
    cdef long long x = t[0], y = t[1]
    cdef long long u, v, re, im, a, b, g
    cdef dict new = {}
    for c, t in ent.items():
        new[c] = (<long long>t[0] * bden, <long long>t[1] * bden)
    for c, t in bent.items():
        u = t[0]
        v = t[1]
        re = x * u - y * v
        im = x * v + y * u
        old = new.get(c)
        if old is None:
            new[c] = (-re, -im)
        else:
            a = <long long>(<tuple>old)[0] - re
            b = <long long>(<tuple>old)[1] - im
            if a or b:
                new[c] = (a, b)
            else:
                del new[c]
    # den * bden < 2^60; normalize in C
    g = den * bden
    for t in new.values():
        if g == 1:
            break
        g = _cgcd(g, t[0])
        g = _cgcd(g, t[1])
    if g == 1:
        return den * bden, new
    return (den * bden) // g, {c: ((<long long>t[0]) // g, (<long long>t[1]) // g) for c, t in new.items()}


cpdef tuple eliminate(object den, dict ent, object p, object bden, dict bent):
    if _is_small(den, ent) and _is_small(bden, bent):
        return _eliminate_small(den, ent, p, bden, bent)
    cdef tuple t = ent[p]
    cdef object x = t[0], y = t[1]
    cdef object u, v, re, im, a, b
    cdef dict new
    cdef tuple old
    if bden == 1:
        new = dict(ent)
    else:
        new = {}
        for c, t in ent.items():
            new[c] = (t[0] * bden, t[1] * bden)
    for c, t in bent.items():
        u = t[0]
        v = t[1]
        re = x * u - y * v
        im = x * v + y * u
        old = new.get(c)
        if old is None:
            new[c] = (-re, -im)
        else:
            a = old[0] - re
            b = old[1] - im
            if a or b:
                new[c] = (a, b)
            else:
                del new[c]
    return normalize(den * bden, new)


cpdef tuple reduce_row(object den, dict ent, dict basis):
    cdef list hits = [c for c in ent if c in basis]
    cdef tuple brow
    for p in hits:
        brow = basis[p]
        den, ent = eliminate(den, ent, p, brow[0], brow[1])
    return den, ent


cpdef object insert_row(object den, dict ent, dict basis):
    cdef tuple t, qrow
    cdef object x, y, nd, a, b
    den, ent = reduce_row(den, ent, basis)
    if not ent:
        return -1
    p = max(ent)
    t = ent[p]
    x = t[0]
    y = t[1]
    if y != 0 or x != den:
        nd = x * x + y * y
        scaled = {}
        for c, t in ent.items():
            a = t[0]
            b = t[1]
            scaled[c] = (a * x + b * y, b * x - a * y)
        den, ent = normalize(nd, scaled)
    for q in list(basis):
        if q > p:
            qrow = basis[q]
            if p in <dict>qrow[1]:
                basis[q] = eliminate(qrow[0], qrow[1], p, den, ent)
    basis[p] = (den, ent)
    return p

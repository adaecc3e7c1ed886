"""Pure-Python row-reduction kernel over Q(i).

A row is a pair ``(den, ent)``: a positive integer denominator and a dict
``column -> (re, im)`` of nonzero Gaussian-integer numerators, so the value
at a column is ``(re + i*im) / den``.  Rows are kept primitive (gcd of the
denominator and all numerator parts is 1).

A basis is a dict ``pivot -> row`` in reduced echelon form: the pivot of a
row is its largest column, its entry there is exactly 1 (numerator
``(den, 0)``), and no other basis row has an entry in that column.

The compiled twin in ``_kernel.pyx`` implements the same four functions.
"""

from math import gcd


def normalize(den, ent):
    g = den
    for a, b in ent.values():
        if g == 1:
            break
        g = gcd(g, a, b)
    if g == 1:
        return den, ent
    return den // g, {c: (a // g, b // g) for c, (a, b) in ent.items()}


def eliminate(den, ent, p, bden, bent):
    """Subtract ``value(p) * basis_row`` so that column p vanishes."""
    x, y = ent[p]
    new = {}
    if bden == 1:
        new.update(ent)
    else:
        for c, (a, b) in ent.items():
            new[c] = (a * bden, b * bden)
    for c, (u, v) in bent.items():
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


def reduce_row(den, ent, basis):
    """Remainder of a row modulo a reduced echelon basis."""
    hits = [c for c in ent if c in basis]
    for p in hits:
        bden, bent = basis[p]
        den, ent = eliminate(den, ent, p, bden, bent)
    return den, ent


def insert_row(den, ent, basis):
    """Reduce and, if nonzero, add to ``basis`` keeping it reduced.

    Returns the new pivot column, or -1 if the row was already in the span.
    """
    den, ent = reduce_row(den, ent, basis)
    if not ent:
        return -1
    p = max(ent)
    x, y = ent[p]
    if y != 0 or x != den:
        nd = x * x + y * y
        ent = {c: (a * x + b * y, b * x - a * y) for c, (a, b) in ent.items()}
        den, ent = normalize(nd, ent)
    for q in list(basis):
        if q > p:
            qden, qent = basis[q]
            if p in qent:
                basis[q] = eliminate(qden, qent, p, den, ent)
    basis[p] = (den, ent)
    return p

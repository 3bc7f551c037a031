"""Pure-Python row reduction over F_p, interchangeable with the compiled kernel."""


def rref_modp(rows, p, ncols):
    """Reduced row echelon form of ``rows`` mod p; returns ``(nonzero_rows, pivots)``."""
    a = [[x % p for x in row[:ncols]] for row in rows]
    n = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        rr = a[r]
        inv = pow(rr[c], -1, p)
        for j in range(c, ncols):
            rr[j] = rr[j] * inv % p
        for i in range(n):
            if i != r:
                ri = a[i]
                fac = ri[c]
                if fac:
                    for j in range(c, ncols):
                        if rr[j]:
                            ri[j] = (ri[j] - fac * rr[j]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots

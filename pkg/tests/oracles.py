"""Brute-force reference computations, independent of qforge.

Series are plain lists of ints indexed by exponent (or by exponent * den
where noted), truncated at N. Nothing here imports the package under test.
"""
from math import comb


def partition_counts(N):
    """p(n) for n <= N by enumerating partitions into parts <= k."""
    def count(n, k):
        if n == 0:
            return 1
        return sum(count(n - p, p) for p in range(1, min(n, k) + 1))
    return [count(n, n) for n in range(N + 1)]


def distinct_partition_counts(N):
    """Number of partitions of n into distinct parts, by enumeration."""
    def count(n, k):
        if n == 0:
            return 1
        return sum(count(n - p, p - 1) for p in range(1, min(n, k) + 1))
    return [count(n, n) for n in range(N + 1)]


def mul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a[:N + 1]):
        if x:
            for j, y in enumerate(b[:N + 1 - i]):
                out[i + j] += x * y
    return out


def inv(a, N):
    assert a[0] in (1, -1)
    out = [0] * (N + 1)
    out[0] = a[0]
    for n in range(1, N + 1):
        s = sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        out[n] = -s * a[0]
    return out


def one_minus(c, e, N):
    """1 - c q^e as a list."""
    out = [0] * (N + 1)
    out[0] = 1
    if e <= N:
        out[e] -= c
    return out


def poch(c, e, step, n, N):
    """prod_{k<n} (1 - c (sign) q^(e + k step)); c may be +-1."""
    out = [1] + [0] * N
    for k in range(n):
        out = mul(out, one_minus(c, e + k * step, N), N)
    return out


def qbinom(n, k, N, step=1):
    """Gaussian binomial in q^step via Pascal's rule."""
    if k < 0 or k > n:
        return [0] * (N + 1)
    if k == 0 or k == n:
        return [1] + [0] * N
    # [n,k] = [n-1,k-1] + q^(k step) [n-1,k]
    a = qbinom(n - 1, k - 1, N, step)
    b = qbinom(n - 1, k, N, step)
    s = k * step
    return [a[i] + (b[i - s] if i >= s else 0) for i in range(N + 1)]


def chain_multisum(m, a, N, weight, outer, inner=None, step=1):
    """sum over n_m..n_1 >= 0 of q^(weight(n_m)+...+weight(n_1)) outer(n_m) inner(n_1 + delta_{a,0})
    times prod_i [n_(i+1) + delta_(a,i); n_i] (in base q^step), by direct enumeration."""
    def bound():
        n = 0
        while weight(n + 1) <= N:
            n += 1
        return n
    B = bound()
    total = [0] * (N + 1)

    def rec(i, n_above, w, coeff):
        # choose n_i given n_(i+1) = n_above
        top = min(B, n_above + (1 if a == i else 0))
        for n in range(top + 1):
            ww = w + weight(n)
            if ww > N:
                break
            c = mul(coeff, qbinom(n_above + (1 if a == i else 0), n, N, step), N)
            if i == 1:
                inn = inner(n + (1 if a == 0 else 0)) if inner else [1] + [0] * N
                term = mul(c, inn, N)
                for e in range(N + 1 - ww):
                    total[e + ww] += term[e]
            else:
                rec(i - 1, n, ww, c)

    for nm in range(B + 1):
        w = weight(nm)
        o = outer(nm)
        if m == 1:
            inn = inner(nm + (1 if a == 0 else 0)) if inner else [1] + [0] * N
            term = mul(o, inn, N)
            for e in range(N + 1 - w):
                total[e + w] += term[e]
        else:
            rec(m - 1, nm, w, o)
    return total


def clsxy_lhs(m, a, N):
    return chain_multisum(m, a, N, lambda n: n * (n + 1) // 2, lambda n: inv(poch(1, 1, 1, n, N), N))


def false_clsxy_lhs(m, a, N):
    return chain_multisum(m, a, N, lambda n: n * (n + 1) // 2,
                          lambda n: [(-1) ** n * x for x in inv(poch(-1, 1, 1, n, N), N)])


def s_series(m, a, N):
    """sum q^(n_m^2+...+n_1^2)/(q^2;q^2)_(n_m) prod [n_(i+1)+delta; n_i]_(q^2)."""
    return chain_multisum(m, a, N, lambda n: n * n, lambda n: inv(poch(1, 2, 2, n, N), N), step=2)


def bilateral(term, N, lo=-200, hi=200):
    """sum over lo <= n <= hi of term(n) -> (sign, exponent) or None; exponents must be integers."""
    out = [0] * (N + 1)
    for n in range(lo, hi + 1):
        t = term(n)
        if t is None:
            continue
        s, e = t
        if e <= N:
            assert e >= 0
            out[e] += s
    return out


def jtp_sum(zs, zj, N, lo=-100, hi=100):
    """sum (-1)^n z^n q^(n^2) with z = zs q^(zj/2), in units of q^(1/2).

    Returns (low, coeffs) where coeffs[i] is the coefficient of q^((low + i)/2).
    """
    low = min(2 * n * n + zj * n for n in range(lo, hi + 1))
    coeffs = bilateral(lambda n: ((-1) ** n * (zs if n % 2 else 1), 2 * n * n + zj * n - low), 2 * N - low, lo, hi)
    return low, coeffs


def expand_product(factors, N):
    """prod over (c, e, step, power) of (c q^e; q^step)_oo ** power with c = +-1, e > 0, step > 0."""
    out = [1] + [0] * N
    for c, e, step, power in factors:
        k = 0
        f = [1] + [0] * N
        while e + k * step <= N:
            f = mul(f, one_minus(c, e + k * step, N), N)
            k += 1
        out = mul(out, f if power == 1 else inv(f, N), N)
    return out


def bailey_rhs(alpha, x_exp, n, N):
    """sum_k alpha(k) / ((q)_(n-k) (x q)_(n+k)) with x = q^x_exp (x_exp >= 0)."""
    out = [0] * (N + 1)
    for k in range(n + 1):
        d = mul(poch(1, 1, 1, n - k, N), poch(1, x_exp + 1, 1, n + k, N), N)
        t = mul(alpha(k), inv(d, N), N)
        out = [u + v for u, v in zip(out, t)]
    return out


def binom2(n):
    return comb(n, 2) if n >= 0 else n * (n - 1) // 2

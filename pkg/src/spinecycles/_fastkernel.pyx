# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: the hot loops behind graph construction and cycle search.

Twin of ``_pure``; see that module for the semantics.  Arithmetic uses 64-bit
residues with 128-bit intermediate products, so primes up to 2^63 are safe.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64

BACKEND = "compiled"
MAX_POLY_DEGREE = 18

cdef enum:
    MAXC = 20      # coefficient capacity (degree <= 19)
    MAXP = 40      # product buffer
    CZMAX = 26     # pending-factor stack for equal-degree splitting

cdef u64 SPLITMIX_GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline u64 _mix64(u64 z):
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 _rng_next(u64* state):
    state[0] += SPLITMIX_GAMMA
    return _mix64(state[0])


cdef inline u64 mulmod(u64 x, u64 y, u64 p):
    return <u64>((<u128>x * y) % p)


cdef inline u64 addmod(u64 x, u64 y, u64 p):
    cdef u64 z = x + y
    if z >= p:
        z -= p
    return z


cdef inline u64 submod(u64 x, u64 y, u64 p):
    if x >= y:
        return x - y
    return x + p - y


cdef u64 powmod(u64 base, u64 e, u64 p):
    cdef u64 result = 1 % p
    cdef u64 acc = base % p
    while e:
        if e & 1:
            result = mulmod(result, acc, p)
        e >>= 1
        if e:
            acc = mulmod(acc, acc, p)
    return result


cdef struct F2:
    u64 a
    u64 b


cdef inline F2 f2mul(F2 x, F2 y, u64 p, u64 s):
    cdef F2 r
    r.a = addmod(mulmod(x.a, y.a, p), mulmod(s, mulmod(x.b, y.b, p), p), p)
    r.b = addmod(mulmod(x.a, y.b, p), mulmod(x.b, y.a, p), p)
    return r


cdef F2 f2inv(F2 x, u64 p, u64 s):
    cdef u64 n = submod(mulmod(x.a, x.a, p), mulmod(s, mulmod(x.b, x.b, p), p), p)
    cdef u64 ni = powmod(n, p - 2, p)
    cdef F2 r
    r.a = mulmod(x.a, ni, p)
    r.b = mulmod(p - x.b if x.b else 0, ni, p)
    return r


cdef inline bint f2zero(F2 x):
    return x.a == 0 and x.b == 0


# -- polynomials: F2 arrays, index = degree, length n = #coefficients (0: zero) --


cdef inline int pstrip(F2* f, int n):
    while n > 0 and f2zero(f[n - 1]):
        n -= 1
    return n


cdef inline void pcopy(F2* dst, F2* src, int n):
    cdef int i
    for i in range(n):
        dst[i] = src[i]


cdef int pmonic(F2* f, int n, u64 p, u64 s):
    if n == 0:
        return 0
    cdef F2 lead = f[n - 1]
    cdef F2 inv
    cdef int i
    if lead.a == 1 and lead.b == 0:
        return n
    inv = f2inv(lead, p, s)
    for i in range(n):
        f[i] = f2mul(f[i], inv, p, s)
    return pstrip(f, n)


cdef int pmul(F2* out, F2* f, int nf, F2* g, int ng, u64 p, u64 s):
    # out must hold nf+ng-1 entries and not alias inputs
    cdef int i, k
    cdef F2 fi
    cdef u64 ca, cb
    if nf == 0 or ng == 0:
        return 0
    for i in range(nf + ng - 1):
        out[i].a = 0
        out[i].b = 0
    for i in range(nf):
        fi = f[i]
        if f2zero(fi):
            continue
        for k in range(ng):
            if f2zero(g[k]):
                continue
            ca = addmod(mulmod(fi.a, g[k].a, p), mulmod(s, mulmod(fi.b, g[k].b, p), p), p)
            cb = addmod(mulmod(fi.a, g[k].b, p), mulmod(fi.b, g[k].a, p), p)
            out[i + k].a = addmod(out[i + k].a, ca, p)
            out[i + k].b = addmod(out[i + k].b, cb, p)
    return pstrip(out, nf + ng - 1)


cdef int pdivmod(F2* q, int* nq, F2* rem, F2* f, int nf, F2* g, int ng, u64 p, u64 s):
    # rem = f mod g (returned length); q = floor quotient when q != NULL
    cdef int i, dr, dg = ng - 1
    cdef F2 ginv = f2inv(g[ng - 1], p, s)
    cdef F2 coef, t
    pcopy(rem, f, nf)
    cdef int nr = pstrip(rem, nf)
    cdef int qcap = nf - dg if nf >= ng else 0
    if q != NULL:
        for i in range(qcap):
            q[i].a = 0
            q[i].b = 0
        nq[0] = 0
    while nr >= ng:
        dr = nr - 1
        coef = f2mul(rem[dr], ginv, p, s)
        if q != NULL:
            q[dr - dg] = coef
        for i in range(ng):
            t = f2mul(coef, g[i], p, s)
            rem[dr - dg + i].a = submod(rem[dr - dg + i].a, t.a, p)
            rem[dr - dg + i].b = submod(rem[dr - dg + i].b, t.b, p)
        nr = pstrip(rem, nr)
    if q != NULL:
        nq[0] = pstrip(q, qcap)
    return nr


cdef int pgcd(F2* out, F2* f, int nf, F2* g, int ng, u64 p, u64 s):
    cdef F2 x[MAXC]
    cdef F2 y[MAXC]
    cdef F2 r[MAXC]
    cdef int nx, ny, nr
    pcopy(x, f, nf)
    nx = pstrip(x, nf)
    pcopy(y, g, ng)
    ny = pstrip(y, ng)
    while ny > 0:
        nr = pdivmod(NULL, NULL, r, x, nx, y, ny, p, s)
        pcopy(x, y, ny)
        nx = ny
        pcopy(y, r, nr)
        ny = nr
    pcopy(out, x, nx)
    return pmonic(out, nx, p, s)


cdef int pmulmod(F2* out, F2* f, int nf, F2* g, int ng, F2* mod, int nm, u64 p, u64 s):
    cdef F2 prod[MAXP]
    cdef int np_ = pmul(prod, f, nf, g, ng, p, s)
    return pdivmod(NULL, NULL, out, prod, np_, mod, nm, p, s)


cdef int ppowmod(F2* out, F2* base, int nb, u64 e, F2* mod, int nm, u64 p, u64 s):
    cdef F2 acc[MAXC]
    cdef F2 tmp[MAXC]
    cdef int nacc, nout, nt
    nacc = pdivmod(NULL, NULL, acc, base, nb, mod, nm, p, s)
    out[0].a = 1
    out[0].b = 0
    nout = 1
    while e:
        if e & 1:
            nt = pmulmod(tmp, out, nout, acc, nacc, mod, nm, p, s)
            pcopy(out, tmp, nt)
            nout = nt
        e >>= 1
        if e:
            nt = pmulmod(tmp, acc, nacc, acc, nacc, mod, nm, p, s)
            pcopy(acc, tmp, nt)
            nacc = nt
    return nout


cdef int pderiv(F2* out, F2* f, int nf, u64 p):
    cdef int i
    for i in range(1, nf):
        out[i - 1].a = mulmod(<u64>i % p, f[i].a, p)
        out[i - 1].b = mulmod(<u64>i % p, f[i].b, p)
    return pstrip(out, nf - 1 if nf > 0 else 0)


cdef int _distinct_roots(F2* h, int nh, u64 p, u64 s, u64* rstate, F2* roots):
    """Roots of monic squarefree h splitting over F_{p^2}; returns count or -1."""
    cdef F2 stack[CZMAX][MAXC]
    cdef int slen[CZMAX]
    cdef int depth = 0, nroots = 0
    cdef F2 g[MAXC]
    cdef F2 w[MAXC]
    cdef F2 base[2]
    cdef F2 d1[MAXC]
    cdef F2 quo[MAXC]
    cdef int ng, nw, nd1, nquo, nqlen
    cdef u64 half = (p - 1) >> 1
    pcopy(stack[0], h, nh)
    slen[0] = nh
    depth = 1
    while depth > 0:
        depth -= 1
        ng = slen[depth]
        pcopy(g, stack[depth], ng)
        if ng <= 1:
            continue
        if ng == 2:
            roots[nroots].a = (p - g[0].a) % p
            roots[nroots].b = (p - g[0].b) % p
            nroots += 1
            continue
        while True:
            base[0].a = _rng_next(rstate) % p
            base[0].b = _rng_next(rstate) % p
            base[1].a = 1
            base[1].b = 0
            nw = ppowmod(w, base, 2, half, g, ng, p, s)
            nw = ppowmod(w, w, nw, p + 1, g, ng, p, s)
            if nw == 0:
                w[0].a = 0
                w[0].b = 0
                nw = 1
            w[0].a = submod(w[0].a, 1, p)
            nw = pstrip(w, nw)
            nd1 = pgcd(d1, g, ng, w, nw, p, s)
            if nd1 > 1 and nd1 < ng:
                if depth + 2 > CZMAX:
                    return -1
                nqlen = pdivmod(quo, &nquo, w, g, ng, d1, nd1, p, s)  # w reused as scratch
                pcopy(stack[depth], d1, nd1)
                slen[depth] = nd1
                depth += 1
                pcopy(stack[depth], quo, nquo)
                slen[depth] = nquo
                depth += 1
                break
    return nroots


cdef int _all_roots(F2* f, int nf, u64 p, u64 s, u64 seed, F2* roots):
    """Roots of f with multiplicity (sorted); returns count, or -1 if nonsplit."""
    cdef F2 df[MAXC]
    cdef F2 gg[MAXC]
    cdef F2 sqf[MAXC]
    cdef F2 yp[MAXC]
    cdef F2 lin[MAXC]
    cdef F2 split[MAXC]
    cdef F2 fac[2]
    cdef F2 rem[MAXC]
    cdef F2 quo[MAXC]
    cdef F2 distinct[MAXC]
    cdef int ndf, ngg, nsqf, nyp, nlin, nsplit, ndist, nrem, nquo, nqr
    cdef int i, k, nroots = 0
    cdef u64 rstate = _mix64(seed) ^ <u64>nf
    cdef F2 tmp

    nf = pmonic(f, pstrip(f, nf), p, s)
    if nf <= 1:
        return 0

    ndf = pderiv(df, f, nf, p)
    if ndf > 0:
        ngg = pgcd(gg, f, nf, df, ndf, p, s)
        nsqf = pdivmod(sqf, &i, rem, f, nf, gg, ngg, p, s)
        nsqf = i
    else:
        pcopy(sqf, f, nf)
        nsqf = nf

    # gcd with Y^(p^2) - Y isolates the part splitting over F_{p^2}
    lin[0].a = 0
    lin[0].b = 0
    lin[1].a = 1
    lin[1].b = 0
    nyp = ppowmod(yp, lin, 2, p, sqf, nsqf, p, s)
    nyp = ppowmod(yp, yp, nyp, p, sqf, nsqf, p, s)
    for i in range(nyp):
        lin[i] = yp[i]
    for i in range(nyp, 2):
        lin[i].a = 0
        lin[i].b = 0
    lin[1].a = submod(lin[1].a, 1, p)
    nlin = pstrip(lin, 2 if nyp < 2 else nyp)
    nsplit = pgcd(split, sqf, nsqf, lin, nlin, p, s)

    ndist = _distinct_roots(split, nsplit, p, s, &rstate, distinct)
    if ndist < 0:
        return -1

    # sort the distinct roots (insertion; at most 18)
    for i in range(1, ndist):
        tmp = distinct[i]
        k = i
        while k > 0 and (distinct[k - 1].a > tmp.a or
                         (distinct[k - 1].a == tmp.a and distinct[k - 1].b > tmp.b)):
            distinct[k] = distinct[k - 1]
            k -= 1
        distinct[k] = tmp

    pcopy(rem, f, nf)
    nrem = nf
    for i in range(ndist):
        fac[0].a = (p - distinct[i].a) % p
        fac[0].b = (p - distinct[i].b) % p
        fac[1].a = 1
        fac[1].b = 0
        while nrem > 1:
            nqr = pdivmod(quo, &nquo, yp, rem, nrem, fac, 2, p, s)  # yp reused as scratch
            if nqr != 0:
                break
            roots[nroots] = distinct[i]
            nroots += 1
            pcopy(rem, quo, nquo)
            nrem = nquo
    if nrem > 1:
        return -1
    return nroots


cdef list _roots_to_list(F2* roots, int n):
    cdef list out = []
    cdef int i
    for i in range(n):
        out.append((roots[i].a, roots[i].b))
    return out


def poly_roots(p, s, coeffs, seed):
    """All roots in F_{p^2} with multiplicity, sorted; None if f does not split."""
    cdef u64 cp = p, cs = s
    cdef F2 f[MAXC]
    cdef F2 roots[MAXC]
    cdef int nf = len(coeffs)
    cdef int i, nr
    if nf == 0:
        raise ValueError("zero polynomial")
    if nf > MAXC - 1:
        raise ValueError("degree above kernel capacity")
    for i in range(nf):
        a, b = coeffs[i]
        f[i].a = a % p
        f[i].b = b % p
    nf = pstrip(f, nf)
    if nf == 0:
        raise ValueError("zero polynomial")
    nr = _all_roots(f, nf, cp, cs, <u64>(seed & 0xFFFFFFFFFFFFFFFF), roots)
    if nr < 0:
        return None
    return _roots_to_list(roots, nr)


cdef class PhiMod:
    """A modular polynomial reduced mod p, specialized at j-invariants."""

    cdef u64 p, s
    cdef int ell
    cdef u64* rows

    def __cinit__(self, p, s, ell, rows):
        cdef int d = ell + 2
        cdef int i, k
        if len(rows) != d or any(len(r) != d for r in rows):
            raise ValueError("coefficient matrix must be (ell+2) x (ell+2)")
        if ell + 1 > MAX_POLY_DEGREE:
            raise ValueError("level above kernel capacity")
        self.p = p
        self.s = s
        self.ell = ell
        self.rows = <u64*> malloc(d * d * sizeof(u64))
        if self.rows == NULL:
            raise MemoryError()
        for i in range(d):
            for k in range(d):
                self.rows[i * d + k] = rows[i][k] % p

    def __dealloc__(self):
        if self.rows != NULL:
            free(self.rows)

    def roots(self, ja, jb, seed):
        cdef u64 p = self.p, s = self.s
        cdef int deg = self.ell + 1, d = self.ell + 2
        cdef F2 jpow[MAXC]
        cdef F2 f[MAXC]
        cdef F2 roots[MAXC]
        cdef F2 j
        cdef u64 c
        cdef int i, k, nf, nr
        j.a = ja % p
        j.b = jb % p
        jpow[0].a = 1
        jpow[0].b = 0
        for i in range(1, deg + 1):
            jpow[i] = f2mul(jpow[i - 1], j, p, s)
        for k in range(deg + 1):
            f[k].a = 0
            f[k].b = 0
            for i in range(deg + 1):
                c = self.rows[i * d + k]
                if c:
                    f[k].a = addmod(f[k].a, mulmod(c, jpow[i].a, p), p)
                    f[k].b = addmod(f[k].b, mulmod(c, jpow[i].b, p), p)
        nf = pstrip(f, deg + 1)
        nr = _all_roots(f, nf, p, s,
                        _mix64(<u64>(seed & 0xFFFFFFFFFFFFFFFF)) ^ _mix64((<u64>j.a << 20) ^ <u64>j.b ^ 1ULL),
                        roots)
        if nr < 0:
            return None
        return _roots_to_list(roots, nr)


cdef unsigned char* _qr_table(u64 p):
    cdef unsigned char* qr = <unsigned char*> malloc(p)
    cdef u64 x
    if qr == NULL:
        raise MemoryError()
    memset(qr, 0, p)
    for x in range(1, (p >> 1) + 1):
        qr[mulmod(x, x, p)] = 1
    return qr


cdef long long _ap_from_table(u64 p, u64 a4, u64 a6, unsigned char* qr):
    cdef long long t = 0
    cdef u64 x, v
    for x in range(p):
        v = (mulmod(mulmod(x, x, p), x, p) + mulmod(a4, x, p) + a6) % p
        if v:
            t += 1 if qr[v] else -1
    return -t


def curve_ap(p, a4, a6):
    """Trace of Frobenius of y^2 = x^3 + a4 x + a6 over F_p (p > 3 prime)."""
    cdef u64 cp = p
    cdef unsigned char* qr = _qr_table(cp)
    cdef long long t
    try:
        t = _ap_from_table(cp, a4 % p, a6 % p, qr)
    finally:
        free(qr)
    return t


def first_ss_j(p, start):
    """Least j >= start in F_p with supersingular reduction (a_p = 0)."""
    cdef u64 cp = p
    cdef u64 j1728 = 1728 % cp
    cdef u64 j, m, a4, a6
    cdef unsigned char* qr = _qr_table(cp)
    try:
        for j in range(<u64>start, cp):
            if j == 0:
                a4 = 0
                a6 = 1
            elif j == j1728:
                a4 = 1
                a6 = 0
            else:
                m = mulmod(j, powmod(submod(j1728, j, cp), cp - 2, cp), cp)
                a4 = mulmod(3, m, cp)
                a6 = mulmod(2, m, cp)
            if _ap_from_table(cp, a4, a6, qr) == 0:
                return j
    finally:
        free(qr)
    raise ValueError(f"no supersingular j in [{start}, {p})")


def closed_walks(r, edge_to, edge_dual, vert_start):
    """Closed non-backtracking walks of length r, as tuples of edge indices."""
    cdef int cr = r
    cdef int n = len(vert_start) - 1
    cdef int ne = len(edge_to)
    cdef int* eto = <int*> malloc(ne * sizeof(int))
    cdef int* edu = <int*> malloc(ne * sizeof(int))
    cdef int* vst = <int*> malloc((n + 1) * sizeof(int))
    cdef int path[12]
    cdef int it[13]
    cdef int lim[13]
    cdef int v, depth, e, w, i
    cdef list out = []
    if cr < 2 or cr > 11:
        free(eto); free(edu); free(vst)
        raise ValueError("walk length out of kernel range (2..11)")
    if eto == NULL or edu == NULL or vst == NULL:
        raise MemoryError()
    try:
        for i in range(ne):
            eto[i] = edge_to[i]
            edu[i] = edge_dual[i]
        for i in range(n + 1):
            vst[i] = vert_start[i]
        for v in range(n):
            depth = 0
            it[0] = vst[v]
            lim[0] = vst[v + 1]
            while depth >= 0:
                if it[depth] >= lim[depth]:
                    depth -= 1
                    continue
                e = it[depth]
                it[depth] += 1
                if depth > 0 and e == edu[path[depth - 1]]:
                    continue
                if depth + 1 == cr:
                    if eto[e] == v and edu[e] != path[0]:
                        path[depth] = e
                        out.append(tuple([path[i] for i in range(cr)]))
                    continue
                path[depth] = e
                w = eto[e]
                depth += 1
                it[depth] = vst[w]
                lim[depth] = vst[w + 1]
    finally:
        free(eto)
        free(edu)
        free(vst)
    return out

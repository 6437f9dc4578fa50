"""High-precision reference values for the frozen constants in the test-suite.

Independent of the package: mpmath numerical differentiation at 40 digits on
the raw parametrizations.  Run ``python3 tests/oracles/ruled_oracle.py``.
"""
import mpmath as mp

mp.mp.dps = 40
R = mp.mpf


def vec(fs):
    return lambda s: mp.matrix([f(s) for f in fs])


def dot(a, b):
    return sum(a[i] * b[i] for i in range(3))


def cross(a, b):
    return mp.matrix([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def d(fn, s, k=1):
    return mp.matrix([mp.diff(lambda t: fn(t)[i], s, k) for i in range(3)])


def apparatus(F, Q, s):
    qn = lambda t: Q(t) / mp.norm(Q(t))

    def c(t):
        dq, df = d(qn, t), d(F, t)
        return F(t) - dot(dq, df) / dot(dq, dq) * qn(t)

    def h(t):
        v = d(qn, t)
        return v / mp.norm(v)

    df, q, dq = d(F, s), qn(s), d(qn, s)
    v0 = -dot(dq, df) / dot(dq, dq)
    dist = dot(df, cross(q, dq)) / dot(dq, dq)
    speed = mp.norm(d(c, s))
    k1 = mp.norm(dq) / speed
    k2 = dot(d(h, s), cross(q, h(s))) / speed
    return {"v0": v0, "d": dist, "speed": speed, "k1": k1, "k2": k2}


F61 = vec([lambda s: (1 + s) ** R(1.5) / 3, lambda s: (1 - s) ** R(1.5) / 3, lambda s: s / mp.sqrt(2)])
Q61 = vec([lambda s: mp.sqrt(1 + s) / 2, lambda s: -mp.sqrt(1 - s) / 2, lambda s: 1 / mp.sqrt(2)])
F62 = vec([lambda s: R(25) / 612 * mp.sin(18 * s) - R(9) / 1700 * mp.sin(50 * s),
           lambda s: -R(25) / 612 * mp.cos(18 * s) + R(9) / 1700 * mp.cos(50 * s),
           lambda s: R(15) / 272 * mp.sin(16 * s)])
Q62 = vec([lambda s: R(50) / 68 * mp.cos(18 * s) - R(18) / 68 * mp.cos(50 * s),
           lambda s: R(50) / 68 * mp.sin(18 * s) - R(18) / 68 * mp.sin(50 * s),
           lambda s: R(15) / 17 * mp.cos(16 * s)])

if __name__ == "__main__":
    for x in ("-0.25", "0", "0.3"):
        vals = apparatus(F61, Q61, mp.mpf(x))
        print("example-6-1", x, {k: mp.nstr(v, 17) for k, v in vals.items()})
    for x in ("0.05", "0.1", "0.15"):
        vals = apparatus(F62, Q62, mp.mpf(x))
        print("example-6-2", x, {k: mp.nstr(v, 17) for k, v in vals.items()})

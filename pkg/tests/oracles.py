"""Independent exact-arithmetic references (Fractions, Cramer's rule)."""

from fractions import Fraction as F

SHOOTOUT_A = [[F(0), F("0.8"), F("0.7")],
           [F("0.9"), F(0), F("0.2")],
           [F("0.75"), F("0.45"), F(0)]]


def det(m):
    if len(m) == 1:
        return m[0][0]
    total = F(0)
    for c in range(len(m)):
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        total += (-1) ** c * m[0][c] * det(minor)
    return total


def cramer_indifference(m):
    """Solve [m -1; 1' 0][s; v] = [0; 1] exactly."""
    n = len(m)
    k = [list(m[i]) + [F(-1)] for i in range(n)] + [[F(1)] * n + [F(0)]]
    rhs = [F(0)] * n + [F(1)]
    d = det(k)
    sol = []
    for c in range(n + 1):
        kc = [row[:c] + [rhs[i]] + row[c + 1:] for i, row in enumerate(k)]
        sol.append(det(kc) / d)
    return sol[:n], sol[n]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matvec(m, v):
    return [sum((a * b for a, b in zip(row, v)), F(0)) for row in m]


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), F(0))


def replicator(a, x, y):
    b = [[-v for v in row] for row in transpose(a)]
    ay, bx = matvec(a, y), matvec(b, x)
    xay, ybx = dot(x, ay), dot(y, bx)
    return [xi * (p - xay) for xi, p in zip(x, ay)], [yi * (p - ybx) for yi, p in zip(y, bx)]

"""Exact rational simplex (two-phase, Bland's anti-cycling rule).

Solves max c.x subject to A_eq x = b_eq, A_ub x <= b_ub, x >= 0, entirely
over Fraction.  Infeasible problems come with a verified Farkas certificate;
optima come with the witness vertex.
"""

from fractions import Fraction


class LpResult:
    __slots__ = ("status", "x", "objective", "farkas")

    def __init__(self, status, x=None, objective=None, farkas=None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.objective = objective
        self.farkas = farkas

    def __repr__(self):
        return f"LpResult({self.status}, obj={self.objective})"


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


class _Tableau:
    def __init__(self, rows, rhs, ncols):
        self.rows = rows          # list of lists of Fraction, length ncols
        self.rhs = rhs            # list of Fraction, all >= 0
        self.ncols = ncols
        self.basis = [None] * len(rows)
        self.cost = [Fraction(0)] * ncols   # z_j - c_j
        self.cost_rhs = Fraction(0)         # current objective value

    def set_objective(self, c):
        """Recompute the reduced-cost row for objective c (len ncols)."""
        self.cost = [-cj for cj in c]
        self.cost_rhs = Fraction(0)
        for i, bv in enumerate(self.basis):
            cb = c[bv]
            if cb != 0:
                row = self.rows[i]
                self.cost = [zc + cb * a for zc, a in zip(self.cost, row)]
                self.cost_rhs += cb * self.rhs[i]

    def pivot(self, r, c):
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            self.rows[r] = prow = [a / p for a in prow]
            self.rhs[r] /= p
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                f = row[c]
                self.rows[i] = [a - f * b for a, b in zip(row, prow)]
                self.rhs[i] -= f * self.rhs[r]
        if self.cost[c] != 0:
            f = self.cost[c]
            self.cost = [a - f * b for a, b in zip(self.cost, prow)]
            self.cost_rhs -= f * self.rhs[r]
        self.basis[r] = c

    def run(self, allowed):
        """Bland's rule simplex on the current objective; maximization.

        Returns "optimal" or "unbounded".  Only columns in `allowed` may enter.
        """
        while True:
            enter = None
            for j in range(self.ncols):
                if allowed[j] and self.cost[j] < 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave, best = None, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        leave, best = i, ratio
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)


def solve_lp(c, a_eq=None, b_eq=None, a_ub=None, b_ub=None):
    """Maximize c.x with x >= 0 under the given exact constraints."""
    a_eq = [list(map(_q, r)) for r in (a_eq or [])]
    b_eq = [_q(v) for v in (b_eq or [])]
    a_ub = [list(map(_q, r)) for r in (a_ub or [])]
    b_ub = [_q(v) for v in (b_ub or [])]
    c = [_q(v) for v in c]
    n = len(c)
    n_slack = len(a_ub)
    m = len(a_eq) + len(a_ub)
    ncols = n + n_slack + m  # structurals, slacks, artificials

    rows, rhs, row_sign = [], [], []
    for k, (arow, bv) in enumerate(
        list(zip(a_eq, b_eq)) + list(zip(a_ub, b_ub))
    ):
        row = list(arow) + [Fraction(0)] * (n_slack + m)
        if k >= len(a_eq):
            row[n + (k - len(a_eq))] = Fraction(1)
        sign = 1
        if bv < 0:
            row = [-a for a in row]
            bv = -bv
            sign = -1
        row[n + n_slack + k] = Fraction(1)
        rows.append(row)
        rhs.append(bv)
        row_sign.append(sign)

    T = _Tableau(rows, rhs, ncols)
    for i in range(m):
        T.basis[i] = n + n_slack + i

    # phase 1: maximize -sum(artificials)
    phase1 = [Fraction(0)] * (n + n_slack) + [Fraction(-1)] * m
    T.set_objective(phase1)
    allowed = [True] * ncols
    status = T.run(allowed)
    assert status == "optimal"  # phase 1 is always bounded
    if T.cost_rhs != 0:
        # infeasible: Farkas vector from the phase-1 duals.  For artificial
        # column j = e_i: (z_j - c_j) = y_i + 1, and optimality of phase 1
        # gives y.a_j >= 0 on real columns with y.b < 0; flip the sign.
        y = []
        for i in range(m):
            yi = T.cost[n + n_slack + i] - 1
            y.append(-yi * row_sign[i])
        _check_farkas(y, a_eq, b_eq, a_ub, b_ub, n)
        return LpResult("infeasible", farkas=y)

    # drive any basic artificials out; rows that cannot be pivoted are
    # redundant (all-zero on real columns, rhs 0) and are removed so a basic
    # artificial can never drift away from zero in phase 2
    for i in range(m):
        if T.basis[i] >= n + n_slack:
            piv = next(
                (j for j in range(n + n_slack) if T.rows[i][j] != 0), None
            )
            if piv is not None:
                T.pivot(i, piv)
    keep = [i for i in range(len(T.rows)) if T.basis[i] < n + n_slack]
    T.rows = [T.rows[i] for i in keep]
    T.rhs = [T.rhs[i] for i in keep]
    T.basis = [T.basis[i] for i in keep]

    allowed = [j < n + n_slack for j in range(ncols)]
    phase2 = list(c) + [Fraction(0)] * (n_slack + m)
    T.set_objective(phase2)
    status = T.run(allowed)
    if status == "unbounded":
        return LpResult("unbounded")
    x = [Fraction(0)] * n
    for i, bv in enumerate(T.basis):
        if bv < n:
            x[bv] = T.rhs[i]
    _check_solution(x, a_eq, b_eq, a_ub, b_ub)
    return LpResult("optimal", x=x, objective=sum(ci * xi for ci, xi in zip(c, x)))


def _dot(row, x):
    return sum(a * b for a, b in zip(row, x))


def _check_solution(x, a_eq, b_eq, a_ub, b_ub):
    assert all(v >= 0 for v in x)
    for row, bv in zip(a_eq, b_eq):
        assert _dot(row, x) == bv
    for row, bv in zip(a_ub, b_ub):
        assert _dot(row, x) <= bv


def _check_farkas(y, a_eq, b_eq, a_ub, b_ub, n):
    """y.A <= 0 columnwise (with y <= 0 on ub rows' slack part) and y.b > 0."""
    m_eq = len(a_eq)
    for j in range(n):
        col = sum(y[i] * a_eq[i][j] for i in range(m_eq)) + sum(
            y[m_eq + i] * a_ub[i][j] for i in range(len(a_ub))
        )
        assert col <= 0, "invalid Farkas certificate"
    for i in range(len(a_ub)):
        assert y[m_eq + i] <= 0, "invalid Farkas certificate"
    rhs = sum(y[i] * b_eq[i] for i in range(m_eq)) + sum(
        y[m_eq + i] * b_ub[i] for i in range(len(a_ub))
    )
    assert rhs > 0, "invalid Farkas certificate"

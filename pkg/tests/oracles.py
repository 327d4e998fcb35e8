"""
Independent high-precision re-implementation of the model equations,
written directly from the published recurrences with mpmath. Shares no
code with the package besides the numeric constants, so it can serve as
an oracle for simulation, welfare, and (via central differences) for the
adjoint gradients and marginals.
"""

import mpmath
from mpmath import mpf

mpmath.mp.dps = 40

INITIAL = dict(tat="0.8", tlo="0.0068", mat="830.4", mup="1527", mlo="10010", k="135")


def exogenous_mp(n):
    sigma, labor, tfp = [mpf("0.5491")], [mpf(6838)], [mpf("3.8")]
    for i in range(1, n):
        sigma.append(sigma[-1] * mpmath.exp(-mpf("0.01") * mpf("0.999") ** (5 * i) * 5))
        labor.append(labor[-1] * (mpf(10500) / labor[-1]) ** mpf("0.134"))
        tfp.append(tfp[-1] / (1 - mpf("0.079") * mpmath.exp(-mpf("0.006") * 5 * (i - 1))))
    eland = [mpf("3.3") * mpf("0.8") ** (i - 1) for i in range(1, n + 1)]
    fex = [mpf("0.25") + (mpf("0.025") * (i - 1) if i <= 18 else mpf("0.45")) for i in range(1, n + 1)]
    theta1 = [mpf(344) / 2800 * mpf("0.975") ** (i - 1) * sigma[i - 1] for i in range(1, n + 1)]
    return dict(sigma=sigma, labor=labor, tfp=tfp, eland=eland, fex=fex, theta1=theta1)


def _matrices():
    b12, b23 = mpf("0.088"), mpf("0.0025")
    z12 = b12 * 588 / 1350
    z23 = b23 * 1350 / 10000
    zeta = [[1 - b12, z12, 0], [b12, 1 - z12 - b23, z23], [0, b23, 1 - z23]]
    phi = [[mpf("0.8630"), mpf("0.0086")], [mpf("0.025"), mpf("0.975")]]
    return phi, zeta


def welfare_mp(mu, s, exo=None, e_inject=None, c_inject=None, initial=None):
    """Welfare of a control path in 40-digit arithmetic."""
    n = len(mu)
    exo = exo or exogenous_mp(n)
    phi, zeta = _matrices()
    gamma, theta2, a, alpha, rho = mpf("0.3"), mpf("2.8"), mpf("0.00267"), mpf("1.45"), mpf("0.015")
    eta, xi1, xi2 = mpf("3.8"), mpf("0.098"), mpf(5) / mpf("3.666")
    init = {k: mpf(v) for k, v in (initial or INITIAL).items()}
    tat, tlo, mat, mup, mlo, k = (init[f] for f in ("tat", "tlo", "mat", "mup", "mlo", "k"))
    total = mpf(0)
    for i in range(n):
        m, sv = mpf(mu[i]), mpf(s[i])
        L = exo["labor"][i]
        y = exo["tfp"][i] * k**gamma * (L / 1000) ** (1 - gamma)
        e = exo["sigma"][i] * (1 - m) * y + exo["eland"][i]
        if e_inject is not None:
            e += mpf(e_inject[i])
        rf = eta * mpmath.log(
            (zeta[0][0] * mat + zeta[0][1] * mup + xi2 * e) / 588, 2
        ) + exo["fex"][i]
        neo = (1 - a * tat**2 - exo["theta1"][i] * m**theta2) * y
        c = neo * (1 - sv)
        if c_inject is not None:
            c += mpf(c_inject[i])
        u = L * (((1000 * c / L) ** (1 - alpha) - 1) / (1 - alpha) - 1)
        total += u / (1 + rho) ** (5 * i)
        tat, tlo = phi[0][0] * tat + phi[0][1] * tlo + xi1 * rf, phi[1][0] * tat + phi[1][1] * tlo
        mat, mup, mlo = (
            zeta[0][0] * mat + zeta[0][1] * mup + xi2 * e,
            zeta[1][0] * mat + zeta[1][1] * mup + zeta[1][2] * mlo,
            zeta[2][1] * mup + zeta[2][2] * mlo,
        )
        k = (1 - mpf("0.1")) ** 5 * k + 5 * neo * sv
    return 5 * mpf("0.016408662") * total - mpf("3855.106895")


def central_difference_mp(fun, x, step):
    """Central differences of ``fun`` over each coordinate, in mp arithmetic."""
    h = mpf(step)
    out = []
    for i in range(len(x)):
        xp = [mpf(v) for v in x]
        xm = [mpf(v) for v in x]
        xp[i] += h
        xm[i] -= h
        out.append(float((fun(xp) - fun(xm)) / (2 * h)))
    return out


def control_gradient_mp(mu, s, step=1e-6):
    """(grad_mu, grad_s) by 40-digit central differences at step ``step``.

    Mitigation coordinates closer than ``step`` to zero use a one-sided
    second-order difference, since mu^2.8 is undefined for mu < 0.
    """
    n = len(mu)
    exo = exogenous_mp(n)
    h = mpf(step)
    base = None
    gmu, gs = [], []
    for i in range(n):
        def f(v, i=i):
            m = [mpf(x) for x in mu]
            m[i] = v
            return welfare_mp(m, s, exo)

        m0 = mpf(mu[i])
        if m0 < h:
            base = welfare_mp(mu, s, exo) if base is None else base
            gmu.append(float((-3 * base + 4 * f(m0 + h) - f(m0 + 2 * h)) / (2 * h)))
        else:
            gmu.append(float((f(m0 + h) - f(m0 - h)) / (2 * h)))
    for i in range(n):
        def f(v, i=i):
            sv = [mpf(x) for x in s]
            sv[i] = v
            return welfare_mp(mu, sv, exo)

        s0 = mpf(s[i])
        gs.append(float((f(s0 + h) - f(s0 - h)) / (2 * h)))
    return gmu, gs


def marginals_mp(mu, s, step=1e-4):
    """(lam_e, lam_c) by central differences on injected E(i)/C(i) perturbations."""
    n = len(mu)
    exo = exogenous_mp(n)
    h = mpf(step)
    mu_mp = [mpf(v) for v in mu]
    s_mp = [mpf(v) for v in s]
    out = {}
    for kind in ("e", "c"):
        vals = []
        for i in range(n):
            inj_p = [0] * n
            inj_m = [0] * n
            inj_p[i] = h
            inj_m[i] = -h
            kw_p = {f"{kind}_inject": inj_p}
            kw_m = {f"{kind}_inject": inj_m}
            vals.append(float((welfare_mp(mu_mp, s_mp, exo, **kw_p) - welfare_mp(mu_mp, s_mp, exo, **kw_m)) / (2 * h)))
        out[kind] = vals
    return out["e"], out["c"]

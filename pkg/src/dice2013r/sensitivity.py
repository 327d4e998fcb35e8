"""
Exact welfare gradients by a backward sweep through the step map, the
emission/consumption marginals, the social cost of carbon, and a
central-difference oracle for checking all of them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import InfeasibleEvaluation
from .trajectory import ControlPath, simulate, welfare_weights


@dataclass(frozen=True)
class MarginalSet:
    """
    Welfare marginals per period (0-based arrays).

    lam_e   : dW/dE(i), perturbation entering both forcing and carbon update
    lam_c   : dW/dC(i), perturbation entering utility only
    scc     : -1000 * lam_e / lam_c
    grad_mu, grad_s : dW/dmu(i), dW/ds(i), including fixed entries
    """

    lam_e: np.ndarray
    lam_c: np.ndarray
    scc: np.ndarray
    grad_mu: np.ndarray
    grad_s: np.ndarray
    welfare: float


def social_cost_of_carbon(lam_e, lam_c):
    lam_e = np.asarray(lam_e, dtype=float)
    lam_c = np.asarray(lam_c, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(lam_c != 0, -1000.0 * lam_e / lam_c, np.nan)


def _adjoint(traj, controls, exo, params):
    """Backward sweep. Returns (grad_mu, grad_s, lam_e, lam_c)."""
    n = len(traj)
    gam, a, th2, alpha = params.gamma, params.a, params.theta2, params.alpha
    phi, z = params.phi, params.zeta
    xi1, xi2, eta = params.xi1, params.xi2, params.eta
    retain, dt = params.capital_retention, params.step_years
    z = [[float(v) for v in row] for row in z]
    p11, p12, p21, p22 = (float(v) for v in phi.ravel())
    weights = welfare_weights(params)
    ln2 = math.log(2.0)

    grad_mu = np.empty(n)
    grad_s = np.empty(n)
    lam_e = np.empty(n)
    lam_c = np.empty(n)

    # adjoint of the next state; the state after period N is discarded
    btat = btlo = bmat = bmup = bmlo = bk = 0.0
    for j in range(n - 1, -1, -1):
        tat, tlo, mat, mup, mlo, k = traj.states[j]
        mu, s = controls.mu[j], controls.s[j]
        y = traj.ygross[j]
        e = traj.emissions[j]
        c = traj.consumption[j]
        neo = traj.neo[j]
        labor = exo.labor[j]
        sigma, theta1 = exo.sigma[j], exo.theta1[j]

        # utility: d/dC of L*((1000C/L)^(1-alpha) - 1)/(1-alpha)
        c_bar = weights[j] * 1000.0 * (1000.0 * c / labor) ** (-alpha)

        # capital update and consumption both read neo
        neo_bar = c_bar * (1.0 - s) + bk * dt * s
        grad_s[j] = -c_bar * neo + bk * dt * neo

        omega = 1.0 - a * tat**2 - theta1 * mu**th2
        omega_bar = neo_bar * y
        y_bar = neo_bar * omega
        tat_bar = -2.0 * a * tat * omega_bar
        mu_bar = -theta1 * th2 * mu ** (th2 - 1.0) * omega_bar if mu > 0 else 0.0

        # forcing -> atmospheric temperature
        rf_bar = btat * xi1
        num = z[0][0] * mat + z[0][1] * mup + xi2 * e
        num_bar = rf_bar * eta / (num * ln2)

        e_bar = num_bar * xi2 + bmat * xi2
        y_bar += e_bar * sigma * (1.0 - mu)
        mu_bar -= e_bar * sigma * y

        mat_bar = num_bar * z[0][0] + z[0][0] * bmat + z[1][0] * bmup + z[2][0] * bmlo
        mup_bar = num_bar * z[0][1] + z[0][1] * bmat + z[1][1] * bmup + z[2][1] * bmlo
        mlo_bar = z[0][2] * bmat + z[1][2] * bmup + z[2][2] * bmlo
        tat_bar += p11 * btat + p21 * btlo
        tlo_bar = p12 * btat + p22 * btlo
        k_bar = retain * bk + y_bar * gam * y / k

        grad_mu[j] = mu_bar
        lam_e[j] = e_bar
        lam_c[j] = c_bar
        btat, btlo, bmat, bmup, bmlo, bk = tat_bar, tlo_bar, mat_bar, mup_bar, mlo_bar, k_bar

    return grad_mu, grad_s, lam_e, lam_c


def welfare_gradient(initial, controls, exo, params):
    """
    Welfare and its derivative with respect to every control entry.

    Returns
    -------
    welfare : float
    grad_mu, grad_s : ndarray
        Fixed entries are reported too; projection is the optimizer's job.
    """
    traj = simulate(initial, controls, exo, params)
    grad_mu, grad_s, _, _ = _adjoint(traj, controls, exo, params)
    return traj.welfare, grad_mu, grad_s


def marginals(initial, controls, exo, params, traj=None):
    """Emission and consumption marginals, SCC, and the control gradient."""
    if traj is None:
        traj = simulate(initial, controls, exo, params)
    grad_mu, grad_s, lam_e, lam_c = _adjoint(traj, controls, exo, params)
    return MarginalSet(lam_e, lam_c, social_cost_of_carbon(lam_e, lam_c), grad_mu, grad_s, traj.welfare)


def fd_oracle(fun, x, step=1e-6):
    """
    Central-difference gradient of a scalar function of a flat vector.

    Raises
    ------
    InfeasibleEvaluation
        A probe point was infeasible; ``err.period`` is set to the
        0-based coordinate index being probed.
    """
    x = np.array(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        h = step[i] if np.ndim(step) else step
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        try:
            grad[i] = (fun(xp) - fun(xm)) / (2.0 * h)
        except InfeasibleEvaluation as err:
            raise InfeasibleEvaluation(f"probe of coordinate {i} infeasible ({err})", i) from None
    return grad


def fd_control_gradient(initial, controls, exo, params, step=1e-6):
    """
    Central-difference estimate of (grad_mu, grad_s).

    Mitigation probes may not go negative, so coordinates with mu < step
    use the second-order forward difference instead.
    """
    x0 = controls.to_vector()
    n = len(controls)

    def fun(x):
        return simulate(initial, ControlPath.from_vector(x), exo, params).welfare

    def probe(i, h):
        x = x0.copy()
        x[i] += h
        return fun(x)

    g = np.empty_like(x0)
    for i in range(x0.size):
        try:
            if i < n and x0[i] < step:
                g[i] = (-3.0 * fun(x0) + 4.0 * probe(i, step) - probe(i, 2 * step)) / (2 * step)
            else:
                g[i] = (probe(i, step) - probe(i, -step)) / (2 * step)
        except InfeasibleEvaluation as err:
            raise InfeasibleEvaluation(f"probe of coordinate {i} infeasible ({err})", i) from None
    return g[:n], g[n:]


def fd_marginals(initial, controls, exo, params, step=1e-4):
    """Re-simulation estimate of (lam_e, lam_c) by injected perturbations."""
    n = len(controls)

    def w_e(v):
        return simulate(initial, controls, exo, params, e_inject=v).welfare

    def w_c(v):
        return simulate(initial, controls, exo, params, c_inject=v).welfare

    zero = np.zeros(n)
    return fd_oracle(w_e, zero, step), fd_oracle(w_c, zero, step)


def relative_error(a, b, floor=1e-8):
    """Elementwise |a-b|/|b| on entries with |b| > floor; max over those."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mask = np.abs(b) > floor
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(a[mask] - b[mask]) / np.abs(b[mask])))

"""One-shot boundary-value computation of profile and correction together.

The autonomous field

    ubar' = f1s(ubar) - f1s(u-),
    w'    = a1s(ubar) w,
    v'    = a1s(ubar) v + tau0 (ubar - u-) + xi0 (f2(ubar) - f2(u-)),

has equilibria (u-, 0, 0) and (u+, 0, 0) at a neutral frequency; the desired
solution is the heteroclinic connection between them.  The domain [-L, L] is
folded: right and left halves are rescaled onto [0, 1] as U_r(t) = U(L t),
U_l(t) = U(-L t), giving a 6-dimensional system closed by six conditions at
the fold point: the midpoint phase condition, three matching conditions, and
the two origin normalizations w(0) = v(0) = 0.  Both far ends then fall into
the attracting equilibria on their own; the tail residual is verified after
the solve.  The initial guess comes from integrating the field outward from
the fold, and parameter sweeps reuse each converged solution as the next
guess.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .auxiliary import DEFAULT_DECAY_TOL, AuxMethod, AuxiliarySolution
from .errors import ContinuationStalled, SolverError, ValidationError
from .model import (
    FluxModel,
    NeutralFrequency,
    ShockConfig,
    neutral_zero,
    normalize_to_standing,
    rankine_hugoniot_speed,
)
from .numerics import BvpProblem, BvpSolution, IvpProblem, bvp_solve, ivp_solve
from .profile import DEFAULT_TAIL_TOL, Grid, ProfileSolution, _check_profile

_FOLD_TOL = 1e-10


@dataclass
class FoldedSystem:
    """Doubled and rescaled field on [0, 1] with its fold conditions."""

    cfg: ShockConfig
    flux: FluxModel
    freq: NeutralFrequency
    L: float

    def __post_init__(self):
        self._c0 = self.cfg.f1_shifted(self.cfg.u_minus)
        self._f2m = self.flux.f2(self.cfg.u_minus)

    def field(self, U: np.ndarray) -> np.ndarray:
        """Unfolded autonomous field on states U = (ubar, w, v)."""
        ubar, w, v = U
        a = self.cfg.a1_shifted(ubar)
        du = self.cfg.f1_shifted(ubar) - self._c0
        dw = a * w
        dv = a * v + self.freq.tau0 * (ubar - self.cfg.u_minus) + self.freq.xi0 * (
            np.asarray(self.flux.f2(ubar)) - self._f2m
        )
        return np.stack([np.asarray(du, dtype=float), dw, dv])

    def rhs(self, t, Y: np.ndarray) -> np.ndarray:
        if Y.ndim == 1:
            return self.rhs(t, Y[:, None])[:, 0]
        return np.vstack(
            [self.L * self.field(Y[:3]), -self.L * self.field(Y[3:])]
        )

    def bc(self, Ya: np.ndarray, Yb: np.ndarray) -> np.ndarray:
        """Six residuals at the fold: phase, matching, origin normalization."""
        return np.array(
            [
                Ya[0] - self.cfg.u_mid,  # phase pins ubar_r(0)
                Ya[3] - Ya[0],           # ubar matches across the fold
                Ya[1],                   # w_r(0) = 0
                Ya[2],                   # v_r(0) = 0
                Ya[4] - Ya[1],           # w matches
                Ya[5] - Ya[2],           # v matches
            ]
        )


@dataclass
class CoupledResult:
    profile: ProfileSolution
    aux: AuxiliarySolution
    bvp: BvpSolution


@dataclass
class ScanPoint:
    config: ShockConfig
    freq: NeutralFrequency
    result: CoupledResult

    @property
    def profile(self) -> ProfileSolution:
        return self.result.profile

    @property
    def aux(self) -> AuxiliarySolution:
        return self.result.aux


def build_folded_system(
    cfg: ShockConfig, f: FluxModel, freq: NeutralFrequency, L: float
) -> FoldedSystem:
    return FoldedSystem(cfg=cfg, flux=f, freq=freq, L=float(L))


def initial_guess(
    sys: FoldedSystem, n_nodes: int = 401, rtol: float = 1e-10, atol: float = 1e-12
) -> tuple[np.ndarray, np.ndarray]:
    """Guess by outward integration of the unfolded field from the fold."""
    U0 = np.array([sys.cfg.u_mid, 0.0, 0.0])

    def rhs3(t, U):
        return sys.field(U[:, None])[:, 0]

    mesh = np.linspace(0.0, 1.0, n_nodes)
    right = ivp_solve(
        IvpProblem(rhs=rhs3, t_span=(0.0, sys.L), y0=U0, rtol=rtol, atol=atol)
    )
    left = ivp_solve(
        IvpProblem(rhs=rhs3, t_span=(0.0, -sys.L), y0=U0, rtol=rtol, atol=atol)
    )
    Y = np.empty((6, n_nodes))
    Y[:3] = right(sys.L * mesh).T
    Y[3:] = left(-sys.L * mesh).T
    return mesh, Y


def solve_coupled(
    cfg: ShockConfig,
    f: FluxModel,
    freq: NeutralFrequency,
    L: float,
    n_out: int,
    guess: tuple[np.ndarray, np.ndarray] | None = None,
    tol: float = 1e-8,
    tail_tol: float = DEFAULT_TAIL_TOL,
    decay_tol: float | None = DEFAULT_DECAY_TOL,
    max_nodes: int = 20000,
) -> CoupledResult:
    """Solve the folded system and sample the unfolded pair on a uniform grid.

    ``n_out`` is the interval count of the output grid on [-L, L].  A guess
    is a (mesh, state) pair on [0, 1]; by default it is generated by outward
    integration.
    """
    sys = build_folded_system(cfg, f, freq, L)
    if guess is None:
        mesh, Y0 = initial_guess(sys)
    else:
        mesh, Y0 = guess

    problem = BvpProblem(
        rhs=sys.rhs, bc=sys.bc, initial_mesh=mesh, initial_guess=Y0, tol=tol
    )
    sol = bvp_solve(problem, max_nodes=max_nodes)

    at_fold = sol.interpolant(0.0)
    fold_mismatch = float(np.max(np.abs(at_fold[:3] - at_fold[3:])))
    if fold_mismatch > _FOLD_TOL:
        raise RuntimeError(
            f"internal error: fold duplicate mismatch {fold_mismatch:.3e} > {_FOLD_TOL}"
        )

    grid = Grid.make(L, n_out)
    x = grid.x
    samples = np.empty((3, x.size))
    right = x >= 0.0
    samples[:, right] = sol.interpolant(x[right] / L)[:3]
    samples[:, ~right] = sol.interpolant(-x[~right] / L)[3:]

    ubar = samples[0]
    ubar_prime = np.asarray(cfg.f1_shifted(ubar)) - cfg.f1_shifted(cfg.u_minus)
    diag = {
        "method": "coupled",
        "residual_norm": sol.residual_norm,
        "newton_iters": sol.newton_iters,
        "mesh_iterations": sol.mesh_iterations,
        "mesh_size": int(sol.mesh.size),
        "fold_mismatch": fold_mismatch,
    }
    profile = ProfileSolution(
        config=cfg,
        grid=grid,
        ubar=ubar,
        ubar_prime=ubar_prime,
        exact=False,
        diagnostics=dict(diag),
    )
    _check_profile(profile, tail_tol)

    aux = AuxiliarySolution(
        grid=grid,
        w=samples[1],
        v=samples[2],
        method=AuxMethod.COUPLED,
        freq=freq,
        diagnostics=dict(diag),
    )
    aux.diagnostics["tail_magnitude"] = aux.tail_magnitudes()
    if decay_tol is not None:
        aux.check_decay(decay_tol)
    return CoupledResult(profile=profile, aux=aux, bvp=sol)


def _rescaled_guess(
    prev: BvpSolution, cfg_old: ShockConfig, cfg_new: ShockConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Previous folded solution with its profile stretched to the new states."""
    Y = prev.y.copy()
    up = cfg_new.u_plus
    ratio = (cfg_new.u_minus - up) / (cfg_old.u_minus - up)
    for row in (0, 3):
        Y[row] = up + (Y[row] - up) * ratio
    return prev.mesh.copy(), Y


def continuation_scan(
    cfg0: ShockConfig,
    f: FluxModel,
    xi0: float,
    u_minus_values,
    L: float,
    n_out: int,
    tol: float = 1e-8,
    tail_tol: float = DEFAULT_TAIL_TOL,
    decay_tol: float | None = DEFAULT_DECAY_TOL,
) -> list[ScanPoint]:
    """Sweep the left state, reusing each solution as the next guess.

    The right state is taken from ``cfg0``; speed and neutral frequency are
    recomputed at every step.  On failure the step is bisected once; if the
    bisected step also fails, :class:`ContinuationStalled` carries the chain
    computed so far.
    """
    u_plus = cfg0.u_plus
    points: list[ScanPoint] = []
    prev: tuple[BvpSolution, ShockConfig] | None = None

    def _solve_at(um: float, seed):
        s = rankine_hugoniot_speed(f, um, u_plus)
        cfg = normalize_to_standing(f, um, u_plus, s)
        freq = neutral_zero(cfg, f, xi0)
        guess = None if seed is None else _rescaled_guess(seed[0], seed[1], cfg)
        res = solve_coupled(
            cfg, f, freq, L, n_out, guess=guess, tol=tol,
            tail_tol=tail_tol, decay_tol=decay_tol,
        )
        return cfg, freq, res

    for k, um in enumerate(u_minus_values):
        try:
            cfg, freq, res = _solve_at(float(um), prev)
        except ValidationError as exc:
            if prev is None:
                raise  # first point: configuration-level problem
            # an inadmissible parameter value stalls the chain outright
            raise ContinuationStalled(k, points, exc) from exc
        except (SolverError, RuntimeError) as exc:
            if prev is None:
                raise ContinuationStalled(k, points, exc) from exc
            # one automatic bisection of the parameter step
            try:
                um_prev = prev[1].u_minus
                um_mid = 0.5 * (um_prev + float(um))
                _, _, res_mid = _solve_at(um_mid, prev)
                cfg_mid = res_mid.profile.config
                cfg, freq, res = _solve_at(float(um), (res_mid.bvp, cfg_mid))
            except (SolverError, RuntimeError) as exc2:
                raise ContinuationStalled(k, points, exc2) from exc2
        points.append(ScanPoint(config=cfg, freq=freq, result=res))
        prev = (res.bvp, cfg)
    return points

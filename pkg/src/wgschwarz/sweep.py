"""Experiment drivers: r-sweeps, N-sweeps, GMRES scalability tables, dictionary reports."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .cross_section import Annulus, CrossSection, Disk, Rectangle, load_mask
from .errors import ConfigError, DomainError, NumericError, WgSchwarzError
from .modal import CUTOFF_TOL, Family, Mode, build_mode_catalog
from .schwarz import (
    BlockToeplitzOperator,
    SchwarzBlock,
    dictionary_check,
    limiting_radius,
    nilpotency_degree,
    schwarz_block,
)
from .spectral import DENSE_CAP, GMRES_MAX_ITERS, fixed_point_run, gmres_solve, shifted_identity, spectral_radius
from .transmission import TransmissionKind, TransmissionSpec, transmission_symbol

log = logging.getLogger(__name__)

NEAR_NILPOTENT = 1e-6
SIGMA_LABELS = ("0", "inv_k", "1", "k")


@dataclass(frozen=True)
class SweepConfig:
    k: complex = 10.0 + 0j
    L: float = 1.0
    delta: float = 0.1
    transmission: TransmissionSpec = field(default_factory=TransmissionSpec.impedance)
    families: tuple[Family, ...] = (Family.TE, Family.TM)
    r_min: float = 0.0
    r_max: float = 20.0
    r_step: float = 0.05
    section: str | None = None
    N_list: tuple[int, ...] = (5, 10, 15, 20, 25, 30, 35)
    sigma_list: tuple[str, ...] = ("0",)
    k_list: tuple[float, ...] = ()
    scaling: str = "weak"
    total_length: float | None = None
    max_modes: int = 10
    initial: str = "unit"
    seed: int = 0
    gmres_tol: float = 1e-5
    restart: int | None = None
    mode_r: float | None = None
    cutoff_tol: float = CUTOFF_TOL

    def __post_init__(self):
        object.__setattr__(self, "k", complex(self.k))
        object.__setattr__(self, "families", tuple(Family(f) for f in self.families))
        object.__setattr__(self, "N_list", tuple(int(n) for n in self.N_list))
        if self.k == 0 or self.k.imag < 0:
            raise ConfigError(f"k must be nonzero with Im k >= 0, got {self.k}")
        if not (self.L > 0 and self.delta > 0) and not (self.scaling == "strong" and self.total_length):
            raise ConfigError(f"need L > 0 and delta > 0, got L={self.L}, delta={self.delta}")
        if not self.families:
            raise ConfigError("families must be nonempty")
        if not self.N_list or min(self.N_list) < 2:
            raise ConfigError(f"N_list must be nonempty with N >= 2, got {self.N_list}")
        if not (self.r_step > 0 and self.r_max >= self.r_min >= 0):
            raise ConfigError(f"bad r-grid: [{self.r_min}, {self.r_max}] step {self.r_step}")
        if self.scaling not in ("weak", "strong"):
            raise ConfigError(f"scaling must be 'weak' or 'strong', got {self.scaling!r}")
        if self.initial not in ("unit", "random"):
            raise ConfigError(f"initial must be 'unit' or 'random', got {self.initial!r}")
        for s in self.sigma_list:
            sigma_value(s, 1.0)
        if self.scaling == "strong" and self.total_length is not None:
            # L is derived; keep the stored value canonical (first N)
            L = self.total_length / self.N_list[0] - 2 * self.delta
            if L > 0:
                object.__setattr__(self, "L", L)

    def r_grid(self) -> list[float]:
        count = int(math.floor((self.r_max - self.r_min) / self.r_step + 1e-9)) + 1
        return [round(self.r_min + i * self.r_step, 12) for i in range(count)]

    def cross_section(self) -> CrossSection | None:
        return None if self.section is None else parse_section(self.section)

    def subdomain_length(self, N: int) -> float:
        """Core length per subdomain; derived from ``total_length`` in strong scaling."""
        if self.scaling == "weak":
            return self.L
        total = self.total_length if self.total_length is not None else _default_total(self)
        L = total / N - 2 * self.delta
        if L <= 0:
            raise DomainError(f"strong scaling with total length {total} leaves L = {L:.3g} <= 0 at N = {N}")
        return L


def _default_total(config: SweepConfig) -> float:
    return (config.L + 2 * config.delta) * config.N_list[0]


def parse_section(text: str) -> CrossSection:
    """``rect:W,H`` | ``disk:R`` | ``annulus:RI,RO`` | ``mask:PATH``."""
    kind, _, args = text.partition(":")
    try:
        if kind == "mask":
            return load_mask(args)
        vals = [float(v) for v in args.split(",")] if args else []
        if kind == "rect" and len(vals) == 2:
            return Rectangle(*vals)
        if kind == "disk" and len(vals) == 1:
            return Disk(*vals)
        if kind == "annulus" and len(vals) == 2:
            return Annulus(*vals)
    except ValueError as exc:
        raise ConfigError(f"bad section {text!r}: {exc}") from exc
    raise ConfigError(f"bad section {text!r}; expected rect:W,H | disk:R | annulus:RI,RO | mask:PATH")


def sigma_value(label: str, k_re: float) -> float:
    """Damping shift for a table row label (``0``, ``inv_k``, ``1``, ``k`` or a number)."""
    if label == "inv_k":
        return 1.0 / k_re
    if label == "k":
        return k_re
    try:
        value = float(label)
    except ValueError:
        raise ConfigError(f"bad sigma label {label!r}; use one of {SIGMA_LABELS} or a number") from None
    if value < 0:
        raise ConfigError(f"damping must be nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class SweepResult:
    kind: str
    rows: list[dict]
    metadata: dict = field(default_factory=dict)


def _block_for(config: SweepConfig, family: Family, r: float, k: complex | None = None,
               L: float | None = None) -> SchwarzBlock:
    k = config.k if k is None else k
    mode = Mode.build(family, k, 0.0 if family is Family.TEM else r, cutoff_tol=config.cutoff_tol)
    lam = transmission_symbol(config.transmission, mode).lam
    return schwarz_block(mode, lam, config.L if L is None else L, config.delta)


def _points(config: SweepConfig, family: Family) -> list[float]:
    if family is Family.TEM:
        return [0.0]
    section = config.cross_section()
    if section is None:
        return config.r_grid()
    catalog = build_mode_catalog(section, config.k, config.max_modes, config.cutoff_tol)
    return [m.r for m in catalog if m.family is family]


def _near_nilpotent(block: SchwarzBlock) -> bool:
    return abs(block.a) < NEAR_NILPOTENT


def sweep_limiting_spectrum(config: SweepConfig) -> SweepResult:
    rows = []
    for family in config.families:
        for r in _points(config, family):
            row = {"r": r, "family": family.value}
            try:
                blk = _block_for(config, family, r)
            except WgSchwarzError as exc:
                log.warning("skipping r=%s (%s): %s", r, family.value, exc)
                rows.append(row | {"a": complex("nan+nanj"), "b": complex("nan+nanj"), "rho_limit": math.nan,
                                   "outside_theorem": False, "skipped": True})
                continue
            rows.append(row | {"a": blk.a, "b": blk.b, "rho_limit": limiting_radius(blk),
                               "outside_theorem": blk.outside_theorem, "skipped": False})
    return SweepResult("limspec", rows, {"transmission": config.transmission.label()})


def sweep_finite_N(config: SweepConfig, cap: int = DENSE_CAP) -> SweepResult:
    if 2 * max(config.N_list) > cap:
        raise DomainError(f"2*max(N) = {2 * max(config.N_list)} exceeds the dense cap {cap}")
    rows = []
    for family in config.families:
        for r in _points(config, family):
            try:
                blk = _block_for(config, family, r)
            except WgSchwarzError as exc:
                log.warning("skipping r=%s (%s): %s", r, family.value, exc)
                for N in config.N_list:
                    rows.append({"r": r, "family": family.value, "N": N, "rho": math.nan, "rho_limit": math.nan,
                                 "outside_theorem": False, "near_nilpotent": False, "skipped": True})
                continue
            lim = limiting_radius(blk)
            for N in config.N_list:
                rows.append({"r": r, "family": family.value, "N": N,
                             "rho": spectral_radius(BlockToeplitzOperator(blk, N), cap), "rho_limit": lim,
                             "outside_theorem": blk.outside_theorem, "near_nilpotent": _near_nilpotent(blk),
                             "skipped": False})
    return SweepResult("radius", rows, {"transmission": config.transmission.label()})


def initial_vector(config: SweepConfig, N: int) -> np.ndarray:
    """Unit modal excitation (all interface amplitudes equal) or a seeded random vector."""
    if config.initial == "random":
        rng = np.random.default_rng(config.seed)
        v = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
    else:
        v = np.ones(2 * N, dtype=complex)
    return v / np.linalg.norm(v)


def worst_mode(config: SweepConfig, k: complex, L: float) -> tuple[Mode, SchwarzBlock]:
    """Catalog mode with the largest limiting radius (it governs the observed counts)."""
    section = config.cross_section() or Rectangle(1.0, 1.0)
    best = None
    for mode in build_mode_catalog(section, k, config.max_modes, config.cutoff_tol):
        if mode.family not in config.families and mode.family is not Family.TEM:
            continue
        try:
            blk = schwarz_block(mode, transmission_symbol(config.transmission, mode).lam, L, config.delta)
        except WgSchwarzError as exc:
            log.warning("skipping %s mode r=%s: %s", mode.family.value, mode.r, exc)
            continue
        rho = limiting_radius(blk)
        if best is None or rho > best[0]:
            best = (rho, mode, blk)
    if best is None:
        raise NumericError("no admissible mode in the catalog")
    return best[1], best[2]


def _selected_block(config: SweepConfig, k: complex, L: float) -> tuple[Mode, SchwarzBlock]:
    if config.mode_r is None:
        return worst_mode(config, k, L)
    family = config.families[0]
    mode = Mode.build(family, k, 0.0 if family is Family.TEM else config.mode_r, cutoff_tol=config.cutoff_tol)
    return mode, schwarz_block(mode, transmission_symbol(config.transmission, mode).lam, L, config.delta)


def scalability_table(config: SweepConfig) -> SweepResult:
    """GMRES iteration counts on ``(Id - I) x = x0`` per damping row, wavenumber and N.

    Damping enters as ``k -> k + i sigma``; this is an analogue of an
    absorbing medium, not the finite-element material model.
    """
    k_values = config.k_list or (config.k.real,)
    rows = []
    for label in config.sigma_list:
        for k_re in k_values:
            sigma = sigma_value(label, k_re)
            k = complex(k_re, config.k.imag + sigma)
            for N in config.N_list:
                L = config.subdomain_length(N)
                mode, blk = _selected_block(config, k, L)
                op = BlockToeplitzOperator(blk, N)
                _, trace = gmres_solve(shifted_identity(op), initial_vector(config, N), config.gmres_tol,
                                       config.restart, GMRES_MAX_ITERS)
                rows.append({"sigma": label, "k": k, "N": N, "L": L, "mode_family": mode.family.value,
                             "mode_r": mode.r, "rho_limit": limiting_radius(blk),
                             "iterations": trace.iterations, "converged": trace.converged})
    policy = "worst mode (max limiting radius over the catalog)" if config.mode_r is None else f"r={config.mode_r}"
    return SweepResult("table", rows, {"mode_policy": policy, "scaling": config.scaling,
                                       "initial": config.initial, "seed": config.seed})


def dictionary_report(config: SweepConfig) -> SweepResult:
    if Family.TE not in config.families or Family.TM not in config.families:
        raise ConfigError("dictionary report needs both te and tm in families")
    rows = []
    for r in _points(config, Family.TE):
        try:
            te, tm = _block_for(config, Family.TE, r), _block_for(config, Family.TM, r)
        except WgSchwarzError as exc:
            log.warning("skipping r=%s: %s", r, exc)
            rows.append({"r": r, "pair": "te/tm", "a_residual": math.nan, "b_residual": math.nan,
                         "rho_a": math.nan, "rho_b": math.nan, "rho_difference": math.nan, "skipped": True})
            continue
        rep = dictionary_check(te, tm, config.transmission)
        rows.append({"r": r, "pair": "te/tm", "a_residual": rep.a_relation_residual,
                     "b_residual": rep.b_relation_residual, "rho_a": limiting_radius(te),
                     "rho_b": limiting_radius(tm), "rho_difference": rep.limiting_difference, "skipped": False})
    te0, tem = _block_for(config, Family.TE, 0.0), _block_for(config, Family.TEM, 0.0)
    rows.append({"r": 0.0, "pair": "tem/te", "a_residual": abs(tem.a - te0.a), "b_residual": abs(tem.b - te0.b),
                 "rho_a": limiting_radius(tem), "rho_b": limiting_radius(te0),
                 "rho_difference": abs(limiting_radius(tem) - limiting_radius(te0)), "skipped": False})
    case = "a_te = -a_tm" if config.transmission.kind is TransmissionKind.IMPEDANCE else "a_te = a_tm"
    return SweepResult("dictionary", rows, {"relation": case, "transmission": config.transmission.label()})


def nilpotency_sweep(config: SweepConfig, tol: float = 1e-12) -> SweepResult:
    rows = []
    for family in config.families:
        for r in _points(config, family):
            try:
                blk = _block_for(config, family, r)
            except WgSchwarzError as exc:
                log.warning("skipping r=%s (%s): %s", r, family.value, exc)
                continue
            for N in config.N_list:
                degree = nilpotency_degree(BlockToeplitzOperator(blk, N), tol)
                rows.append({"family": family.value, "r": r, "N": N, "a_abs": abs(blk.a), "degree": degree})
    return SweepResult("nilpotency", rows, {"tolerance": tol})


def simulate(config: SweepConfig, tol: float = 1e-12, max_iters: int = GMRES_MAX_ITERS) -> SweepResult:
    """Residual histories of plain Schwarz sweeps and of GMRES for one mode."""
    rows = []
    meta = {}
    for N in config.N_list:
        L = config.subdomain_length(N)
        mode, blk = _selected_block(config, config.k, L)
        op = BlockToeplitzOperator(blk, N)
        x0 = initial_vector(config, N)
        fp = fixed_point_run(op, x0, tol, max_iters)
        _, gm = gmres_solve(shifted_identity(op), x0, config.gmres_tol, config.restart, max_iters)
        for method, trace in (("fixed_point", fp), ("gmres", gm)):
            for i, res in enumerate(trace.residual_history):
                rows.append({"N": N, "method": method, "iteration": i, "residual": res})
        meta[N] = {"mode": f"{mode.family.value} r={mode.r:g}", "fixed_point_converged": fp.converged,
                   "fixed_point_diverged": fp.diverged, "fixed_point_iterations": fp.iterations,
                   "gmres_iterations": gm.iterations, "gmres_converged": gm.converged,
                   "rho_limit": limiting_radius(blk), "outside_theorem": blk.outside_theorem}
    return SweepResult("simulate", rows, meta)


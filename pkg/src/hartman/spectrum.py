"""Fourier-Bohr spectrum extraction: coarse FFT scan over a symmetric
window, golden-section refinement of candidate frequencies, leakage
cleaning, thresholding, and reduction of the surviving peaks to a generated
subgroup of the dual.

"Nonzero coefficient" is not decidable numerically, so every report carries
its threshold theta explicitly; frequencies are classified as rational
(with certificate) or irrational-up-to-the-denominator-bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import PresentationError, ValidationError
from .exactnum import classify_rational
from .group_model import (
    Character,
    SpectralSubgroup,
)
from .sequences import HartmanFunction

REFINE_TOL = 1e-10
#: peaks closer than 10x the refinement tolerance are one Bohr frequency
DEDUPE_TOL = 10 * REFINE_TOL
CLEAN_ROUNDS = 2
#: bounded-search parameters of the floating subgroup sieve
SIEVE_COEFF_BOUND = 1000
SIEVE_TORSION_BOUND = 16
SIEVE_ATOL = 1e-7


def classify_rationality(alpha: float, max_den: int = 10**6,
                         residual: float = 1e-10) -> Fraction | None:
    """Continued-fraction rationality check: p/q with q <= max_den if it
    matches within the refinement residual, else None (irrational-to-Q)."""
    return classify_rational(alpha, max_den=max_den, residual=residual)


@dataclass(frozen=True)
class Peak:
    character: Character
    coefficient: complex
    residual: float

    @property
    def frequency(self) -> float:
        return float(self.character)

    def to_json(self) -> dict:
        return {
            "alpha": self.frequency,
            "certificate": self.character.to_json() if self.character.is_exact else None,
            "re": self.coefficient.real,
            "im": self.coefficient.imag,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class SpectrumReport:
    peaks: tuple[Peak, ...]
    theta: float
    N: int
    generated_subgroup: SpectralSubgroup
    certified: bool

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "N": self.N,
            "certified": self.certified,
            "peaks": [p.to_json() for p in sorted(self.peaks, key=lambda p: p.frequency)],
            "generated_subgroup": self.generated_subgroup.to_json(),
        }


def _dirichlet(delta: np.ndarray | float, M: int):
    """Normalized Dirichlet kernel (1/M) sum_{|n|<=N} e^{2 pi i n d}."""
    d = np.asarray(delta, dtype=float)
    d = d - np.round(d)
    out = np.ones_like(d)
    nz = np.abs(d) > 1e-13
    out[nz] = np.sin(np.pi * M * d[nz]) / (M * np.sin(np.pi * d[nz]))
    return out if out.shape else float(out)


def _golden_max(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Hard-bounded golden-section maximization on [lo, hi]."""
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
        else:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
    return (a + b) / 2, (b - a)


def scan_spectrum(phi: HartmanFunction, N: int, theta: float = 1e-3,
                  refine_tol: float = REFINE_TOL, clean_rounds: int = CLEAN_ROUNDS,
                  max_peaks: int | None = None, threads: int = 1,
                  classify_den: int = 10**6,
                  classify_residual: float | None = None) -> SpectrumReport:
    """FFT candidates at resolution 1/(2N+1), golden-section refinement of
    each local maximum above theta/2, leakage cleaning by solving the mutual
    Dirichlet-kernel system, and thresholding at theta."""
    if theta <= 0:
        raise ValidationError("theta must be positive")
    M = 2 * N + 1
    if theta < 0.5 / M:
        raise ValidationError(
            f"window too small for theta={theta}: resolution bound theta >= {0.5 / M:.3g}")
    w = phi.window_values(N)
    ns = np.arange(-N, N + 1, dtype=np.int64)
    u = np.zeros(M, dtype=complex)
    u[np.mod(ns, M)] = w
    mags = np.abs(np.fft.fft(u)) / M

    candidates = []
    for k in range(M):
        if mags[k] >= theta / 2 and mags[k] >= mags[k - 1] and mags[k] >= mags[(k + 1) % M]:
            candidates.append(k)

    def raw_coeff(alpha: float) -> complex:
        return np.dot(w, np.exp(-2j * np.pi * alpha * ns)) / M

    def refine(k: int) -> tuple[float, float]:
        lo, hi = (k - 1) / M, (k + 1) / M
        return _golden_max(lambda a: abs(raw_coeff(a)), lo, hi, refine_tol)

    if threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            refined = list(ex.map(refine, candidates))
    else:
        refined = [refine(k) for k in candidates]

    alphas = np.array([a % 1.0 for a, _ in refined])
    resids = np.array([r for _, r in refined])
    # dedupe frequencies that collapsed to one Bohr peak
    order = np.argsort(alphas)
    keep = []
    for idx in order:
        if keep and min(abs(alphas[idx] - alphas[keep[-1]]),
                        1 - abs(alphas[idx] - alphas[keep[-1]])) < max(DEDUPE_TOL, 0.4 / M):
            if abs(raw_coeff(alphas[idx])) > abs(raw_coeff(alphas[keep[-1]])):
                keep[-1] = idx
        else:
            keep.append(idx)
    alphas = alphas[keep]
    resids = resids[keep]

    coeffs = np.array([raw_coeff(a) for a in alphas])
    for _ in range(max(clean_rounds, 1)):
        if len(alphas) == 0:
            break
        # cleaned coefficients: solve raw_i = sum_j c_j D(alpha_i - alpha_j)
        dmat = _dirichlet(alphas[:, None] - alphas[None, :], M)
        try:
            cleaned = np.linalg.solve(dmat, coeffs)
        except np.linalg.LinAlgError:
            cleaned = np.linalg.lstsq(dmat, coeffs, rcond=None)[0]
        # re-refine each position against the others' leakage
        new_alphas = np.array(alphas)
        new_resids = np.array(resids)
        for i in range(len(alphas)):
            others = [j for j in range(len(alphas)) if j != i]

            def objective(a):
                v = raw_coeff(a)
                for j in others:
                    v -= cleaned[j] * _dirichlet(a - alphas[j], M)
                return abs(v)

            lo, hi = alphas[i] - 1.0 / M, alphas[i] + 1.0 / M
            new_alphas[i], new_resids[i] = _golden_max(objective, lo, hi, refine_tol)
        alphas = np.mod(new_alphas, 1.0)
        resids = new_resids
        coeffs = np.array([raw_coeff(a) for a in alphas])

    if len(alphas):
        dmat = _dirichlet(alphas[:, None] - alphas[None, :], M)
        try:
            coeffs = np.linalg.solve(dmat, coeffs)
        except np.linalg.LinAlgError:
            coeffs = np.linalg.lstsq(dmat, coeffs, rcond=None)[0]

    survivors = [(a, c, r) for a, c, r in zip(alphas, coeffs, resids) if abs(c) >= theta]
    survivors.sort(key=lambda t: -abs(t[1]))
    if max_peaks is not None:
        survivors = survivors[:max_peaks]

    resid_default = classify_residual if classify_residual is not None else max(1e-8, 4.0 / M**2)
    peaks = []
    for a, c, r in survivors:
        fr = classify_rational(float(a), max_den=classify_den,
                               residual=max(resid_default, 4 * r))
        chi = Character(fr) if fr is not None else Character(float(a))
        peaks.append(Peak(chi, complex(c), float(max(r, refine_tol))))
    peaks.sort(key=lambda p: p.frequency)

    gamma, certified = _reduce_peaks(peaks)
    return SpectrumReport(tuple(peaks), float(theta), N, gamma, certified)


def subgroup_of(report: SpectrumReport,
                coeff_bound: int = SIEVE_COEFF_BOUND,
                torsion_bound: int = SIEVE_TORSION_BOUND,
                atol: float = SIEVE_ATOL) -> SpectralSubgroup:
    """Subgroup of the dual generated by the report's peak characters,
    reduced to a presentation-friendly generating set."""
    gamma, _ = _reduce_peaks(report.peaks, coeff_bound, torsion_bound, atol)
    return gamma


def _reduce_peaks(peaks, coeff_bound: int = SIEVE_COEFF_BOUND,
                  torsion_bound: int = SIEVE_TORSION_BOUND,
                  atol: float = SIEVE_ATOL):
    """Greedy sieve: exact rational peaks accumulate torsion; floating peaks
    are matched against the current irrational basis by bounded integer
    search, otherwise appended as new (canonicalized) basis elements.

    Returns (SpectralSubgroup, certified) where certified means no floating
    generator survived unexplained.
    """
    torsion = 1
    basis: list[float] = []
    certified = True
    for peak in sorted(peaks, key=lambda p: -abs(p.coefficient)):
        chi = peak.character
        if chi.is_rational:
            fr = chi.as_fraction()
            if fr != 0:
                torsion = lcm(torsion, fr.denominator)
            continue
        certified = False
        v = float(chi)
        hit = _sieve_member(v, basis, torsion_bound, coeff_bound, atol)
        if hit is not None:
            _, remainder = hit
            if remainder != 0:
                torsion = lcm(torsion, remainder.denominator)
            continue
        basis.append(v if v <= 0.5 else 1.0 - v)
    gens = [Character(b) for b in basis]
    if torsion > 1:
        gens.append(Character(Fraction(1, torsion)))
    if not gens:
        gens = [Character(Fraction(0))]
    return SpectralSubgroup(tuple(gens)), certified


def _sieve_member(v: float, basis: list[float], torsion_bound: int,
                  coeff_bound: int, atol: float):
    """Search v = sum n_j b_j + p/q (mod 1) with small q; returns
    (n, Fraction) or None."""
    k = len(basis)
    if k == 0:
        fr = Fraction(v).limit_denominator(torsion_bound)
        err = min(abs(v - float(fr)), abs(v - float(fr) + 1), abs(v - float(fr) - 1))
        return ((), fr % 1) if err <= atol else None
    per_axis = coeff_bound if k == 1 else max(3, int(round(coeff_bound ** (1.0 / k))))
    import itertools as _it

    best = None
    for combo in _it.product(*[range(-per_axis, per_axis + 1)] * k):
        rho = (v - sum(n * b for n, b in zip(combo, basis))) % 1.0
        fr = Fraction(rho).limit_denominator(torsion_bound)
        err = min(abs(rho - float(fr)), abs(rho - float(fr) + 1), abs(rho - float(fr) - 1))
        tol = atol * (1 + sum(abs(n) for n in combo))
        if err <= tol:
            score = sum(abs(n) for n in combo)
            if best is None or score < best[0]:
                best = (score, (combo, fr % 1))
    return best[1] if best else None

import math
from fractions import Fraction

import numpy as np
import pytest

from hartman.errors import ValidationError
from hartman.exactnum import QuadExt
from hartman.group_model import (
    Character,
    SpectralSubgroup,
    Verdict,
    covers,
    induce_compactification,
)
from hartman.means import cesaro_mean
from hartman.riemann_step import TrigPolynomial
from hartman.sequences import Realized, character_sequence, cos2_product, cut_sequence
from hartman.spectrum import classify_rationality, scan_spectrum, subgroup_of

GOLDEN = QuadExt.quadratic(-1, 1, 5, 2)
SQRT2M1 = QuadExt.quadratic(-1, 1, 2)


def test_pure_character_single_peak():
    phi = character_sequence(GOLDEN, 3)
    rep = scan_spectrum(phi, N=4000, theta=1e-2)
    assert len(rep.peaks) == 1
    p = rep.peaks[0]
    assert abs(p.frequency - float(GOLDEN)) < 1e-8
    assert abs(p.coefficient - 3) < 1e-6


def test_cut_sequence_arc_peaks():
    beta = Fraction(1, 3)
    phi = cut_sequence(GOLDEN, beta)
    rep = scan_spectrum(phi, N=20000, theta=0.05)
    alpha = float(GOLDEN)
    freqs = sorted(p.frequency for p in rep.peaks)
    # expected: k alpha mod 1 for k with |c_k| = |1-e^{-2 pi i k/3}|/(2 pi |k|) >= 0.05
    expected = []
    for k in range(-20, 21):
        if k == 0:
            mag = float(beta)
        elif k % 3 == 0:
            continue  # coefficient vanishes exactly at k = 0 mod 3
        else:
            mag = abs(1 - np.exp(-2j * np.pi * k * float(beta))) / (2 * np.pi * abs(k))
        if mag >= 0.05:
            expected.append((k * alpha) % 1.0)
    assert len(freqs) == len(expected)
    for f, e in zip(freqs, sorted(expected)):
        assert abs(f - e) < 1e-7
    # magnitudes sqrt(3)/(2 pi k) at k = +-1, +-2
    by_freq = {round(p.frequency, 6): abs(p.coefficient) for p in rep.peaks}
    assert by_freq[round(alpha % 1, 6)] == pytest.approx(math.sqrt(3) / (2 * math.pi), abs=1e-3)
    assert by_freq[round((2 * alpha) % 1, 6)] == pytest.approx(
        math.sqrt(3) / (4 * math.pi), abs=1e-3)


def test_cos2_spectrum_exact_frequencies():
    phi = cos2_product(2)
    rep = scan_spectrum(phi, N=900, theta=1e-3)
    assert len(rep.peaks) == 9
    # constant coefficient 1/4 at frequency 0
    zero = [p for p in rep.peaks if p.frequency == 0.0]
    assert len(zero) == 1 and abs(zero[0].coefficient - 0.25) < 1e-6
    # all frequencies certified rational with denominator dividing 9
    for p in rep.peaks:
        assert p.character.is_rational
        assert 9 % p.character.as_fraction().denominator == 0


def test_subgroup_of_cos2_is_cyclic_3n():
    for n in (1, 2, 3):
        phi = cos2_product(n)
        rep = scan_spectrum(phi, N=100 * 3**n, theta=1e-3)
        gamma = subgroup_of(rep)
        comp = induce_compactification(gamma)
        assert comp.torus_rank == 0
        assert comp.torsion == 3**n


def test_subgroup_of_cut_peaks_is_alpha():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep = scan_spectrum(phi, N=20000, theta=0.05)
    gamma = subgroup_of(rep)
    comp = induce_compactification(gamma)
    assert comp.torus_rank == 1
    assert comp.torsion == 1
    exact = induce_compactification(SpectralSubgroup.of(GOLDEN))
    assert covers(comp, exact, tol=1e-5).verdict is Verdict.TRUE
    assert covers(exact, comp, tol=1e-5).verdict is Verdict.TRUE


def test_empty_spectrum_gives_trivial_subgroup():
    rng = np.random.default_rng(0)
    from hartman.sequences import Sampled

    noise = Sampled((rng.standard_normal(4001) * 1e-6).astype(complex))
    rep = scan_spectrum(noise, N=2000, theta=0.5)
    assert len(rep.peaks) == 0
    gamma = subgroup_of(rep)
    comp = induce_compactification(gamma)
    assert comp.torus_rank == 0 and comp.torsion == 1


def test_classify_rationality_examples():
    assert classify_rationality(0.3333333333, max_den=1000) == Fraction(1, 3)
    assert classify_rationality(float(GOLDEN), max_den=1000) is None
    assert classify_rationality(0.0) == Fraction(0)


def test_window_too_small_raises():
    phi = character_sequence(GOLDEN)
    with pytest.raises(ValidationError):
        scan_spectrum(phi, N=100, theta=1e-4)


def test_recovery_trig_polynomial():
    # frequencies recovered within 1e-8 and coefficients within 1e-6 at N=1e5
    comp = induce_compactification(SpectralSubgroup.of(GOLDEN, SQRT2M1))
    poly = TrigPolynomial(comp, {
        ((1, 0), 0): 1.0,
        ((0, 1), 0): 0.5 - 0.25j,
        ((2, -1), 0): 0.125,
    })
    phi = Realized(poly)
    rep = scan_spectrum(phi, N=10**5, theta=1e-2)
    truth = {}
    for key in poly.terms:
        truth[float(poly.rotation_number(key)) % 1.0] = complex(poly.terms[key])
    assert len(rep.peaks) == len(truth)
    for p in rep.peaks:
        match = min(truth, key=lambda t: min(abs(t - p.frequency), 1 - abs(t - p.frequency)))
        assert min(abs(match - p.frequency), 1 - abs(match - p.frequency)) < 1e-8
        assert abs(truth[match] - p.coefficient) < 1e-6


def test_parseval_sanity():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep = scan_spectrum(phi, N=20000, theta=0.02)
    power = sum(abs(p.coefficient) ** 2 for p in rep.peaks)
    w = phi.window_values(20000)
    total = float(np.mean(np.abs(w) ** 2))
    assert power <= total + 1e-6


def test_peaks_realizable_on_realizing_compactification():
    # every recovered peak character of a realized function lies in the
    # subgroup of the compactification realizing it
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep = scan_spectrum(phi, N=20000, theta=0.05)
    comp = phi.comp
    for p in rep.peaks:
        assert comp.express(p.character.value, tol=1e-6) is not None


def test_threads_do_not_change_results():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep1 = scan_spectrum(phi, N=5000, theta=0.05, threads=1)
    rep2 = scan_spectrum(phi, N=5000, theta=0.05, threads=4)
    assert [(p.frequency, p.coefficient) for p in rep1.peaks] == \
        [(p.frequency, p.coefficient) for p in rep2.peaks]

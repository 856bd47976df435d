import json
import os

from mpmath import mp, mpf

from radialborn.cache import (
    cached_spectrum_of,
    decimal_digits,
    load_spectrum,
    spectrum_key,
    store_spectrum,
)
from radialborn.forward import spectrum_of
from radialborn.profiles import PiecewiseProfile, ProfileKind


def gamma():
    return PiecewiseProfile(ProfileKind.CONDUCTIVITY, 1.0, (0.0, 0.5, 1.0), (2.0, 1.0))


def test_decimal_digits_covers_precision():
    assert decimal_digits(256) >= int(256 * 0.302)
    assert decimal_digits(1024) >= int(1024 * 0.302)


def test_store_load_round_trip_one_ulp(tmp_path):
    spec = spectrum_of(gamma(), 10, 256)
    store_spectrum(spec, gamma(), cache_dir=tmp_path)
    back = load_spectrum(gamma(), 10, 256, cache_dir=tmp_path)
    assert back is not None
    assert back.kind is spec.kind
    with mp.workprec(300):
        for a, b in zip(spec.lambdas, back.lambdas):
            assert abs(mpf(a) - mpf(b)) <= (abs(mpf(a)) + mpf(2) ** -256) * mpf(2) ** -255


def test_key_depends_on_every_input():
    base = spectrum_key(gamma(), 10, 256)
    assert spectrum_key(gamma(), 11, 256) != base
    assert spectrum_key(gamma(), 10, 512) != base
    other = PiecewiseProfile(ProfileKind.CONDUCTIVITY, 1.0, (0.0, 0.5, 1.0), (2.0, 1.0 + 1e-12))
    assert spectrum_key(other, 10, 256) != base
    assert spectrum_key(gamma(), 10, 256) == base


def test_miss_and_corruption_return_none(tmp_path):
    assert load_spectrum(gamma(), 10, 256, cache_dir=tmp_path) is None
    spec = spectrum_of(gamma(), 10, 256)
    path = store_spectrum(spec, gamma(), cache_dir=tmp_path)
    path.write_text("{ not json")
    assert load_spectrum(gamma(), 10, 256, cache_dir=tmp_path) is None
    path.write_text(json.dumps({"version": 99}))
    assert load_spectrum(gamma(), 10, 256, cache_dir=tmp_path) is None


def test_cached_spectrum_of_hits_without_recompute(tmp_path):
    calls = []

    def counting_solver(profile, kmax, prec):
        calls.append(1)
        return spectrum_of(profile, kmax, prec)

    a = cached_spectrum_of(gamma(), 10, 256, cache_dir=tmp_path, solver=counting_solver)
    b = cached_spectrum_of(gamma(), 10, 256, cache_dir=tmp_path, solver=counting_solver)
    assert len(calls) == 1
    assert [float(x) for x in a.lambdas] == [float(x) for x in b.lambdas]


def test_no_temp_files_left_behind(tmp_path):
    spec = spectrum_of(gamma(), 5, 128)
    store_spectrum(spec, gamma(), cache_dir=tmp_path)
    leftovers = [f for f in os.listdir(tmp_path) if f.endswith(".tmp")]
    assert leftovers == []

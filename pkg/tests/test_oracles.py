import numpy as np
import pytest

from conftest import crandn, rel_err
from implicitconv import buffers
from implicitconv import reference_oracles as ro
from implicitconv.conv_bench import analytic_cconv, analytic_hconv, random_inputs
from implicitconv.implicit1d import tconv


def test_direct_cconv_trivial():
    np.testing.assert_array_equal(ro.direct_cconv([1 + 0j], [1 + 0j]), [1])


def test_direct_cconv_loops(rng):
    f, g = crandn(rng, 6), crandn(rng, 6)
    want = [sum(f[p] * g[k - p] for p in range(k + 1)) for k in range(6)]
    assert rel_err(ro.direct_cconv(f, g), want) <= 1e-15


def test_direct_hconv_dc():
    out = ro.direct_hconv(np.array([2, 0, 0, 0], complex), np.array([-3, 0, 0, 0], complex))
    np.testing.assert_array_equal(out, [-6, 0, 0, 0])


def test_direct_hconv_family():
    f, g, H = analytic_hconv(10)
    assert rel_err(ro.direct_hconv(f, g), H) <= 1e-15


def test_direct_tconv_orderings_agree(rng):
    f, g, h = (crandn(rng, 5) for _ in range(3))
    a = ro.direct_tconv(f, g, h, order="fg")
    b = ro.direct_tconv(f, g, h, order="gh")
    c = ro.direct_tconv(f, g, h, order="fh")
    assert rel_err(a, b) <= 1e-17 and rel_err(a, c) <= 1e-17


def test_direct_tconv_vs_tconv(rng):
    f, g, h = (crandn(rng, 5) for _ in range(3))
    for x in (f, g, h):
        x[0] = x[0].real
    w = [np.zeros(5, complex) for _ in range(3)]
    got = tconv(f.copy(), g.copy(), h.copy(), *w)[:4]
    assert rel_err(got, ro.direct_tconv(f, g, h)) <= 1e-13


def test_direct_tconv_hand_case():
    # single mode U_1 = 1 and its conjugate: triads landing on 0 <= k < m are
    # 1+1-1 = 1 (three placements of the -1) and 1+1+1 = 3
    f = np.array([0, 1, 0, 0, 0], complex)
    out = ro.direct_tconv(f, f, f)
    np.testing.assert_allclose(out, [0, 3, 0, 1], atol=0)


def test_work_cap():
    f = np.ones(2048, complex)
    with pytest.raises(ValueError):
        ro.direct_cconv(f, f)
    small = np.ones(40, complex)
    assert ro.direct_cconv(small, small, max_work=None)[-1] == 40
    with pytest.raises(ValueError):
        ro.direct_cconv(small, small, max_work=10)


def test_direct_work_matches_cap_logic():
    assert ro.direct_work("cconv", (8,)) == 64
    assert ro.direct_work("hconv", (4,)) == 49
    assert ro.direct_work("tconv", (5,)) == 7 * 7 + 13 * 7


def test_explicit_cconv_trivial():
    assert ro.explicit_cconv([2 + 0j], [3j])[0] == pytest.approx(6j)


def test_explicit_cconv_vs_direct(rng):
    f, g = crandn(rng, 16), crandn(rng, 16)
    assert rel_err(ro.explicit_cconv(f, g), ro.direct_cconv(f, g)) <= 1e-13


@pytest.mark.parametrize("m", [2, 8, 64])
def test_explicit_families(m):
    f, g, H = analytic_hconv(m)
    assert rel_err(ro.explicit_hconv(f, g), H) <= 1e-13
    f, g, H = analytic_cconv(m)
    assert rel_err(ro.explicit_cconv(f, g), H) <= 1e-13


@pytest.mark.parametrize("kind,dims", [("conv2", (3, 4)), ("hconv3", (2, 3, 2)),
                                       ("tconv", (4,)), ("tconv2", (2, 4)),
                                       ("cconv3", (2, 2, 3))])
def test_explicit_vs_direct(kind, dims):
    fields = random_inputs(kind, dims, 7)
    assert rel_err(ro.explicit(kind, *fields), ro.direct(kind, *fields)) <= 1e-13


def test_pruned_matches_explicit(rng):
    f, g = crandn(rng, (8, 8)), crandn(rng, (8, 8))
    assert rel_err(ro.pruned_explicit_2d(f, g), ro.explicit_cconv(f, g)) <= 1e-15
    f, g = crandn(rng, (3, 4, 5)), crandn(rng, (3, 4, 5))
    assert rel_err(ro.pruned_explicit_3d(f, g), ro.explicit_cconv(f, g)) <= 1e-15


def test_pruned_zero_and_direct(rng):
    z = np.zeros((4, 4), complex)
    assert not np.any(ro.pruned_explicit_2d(z, z))
    f, g = crandn(rng, (4, 4)), crandn(rng, (4, 4))
    assert rel_err(ro.pruned_explicit_2d(f, g), ro.direct_cconv(f, g)) <= 1e-13


def test_pruned_skips_subtransforms():
    from implicitconv.fft_core import count_transforms
    m = 8
    f = np.ones((m, m), complex)
    with count_transforms() as c:
        ro.pruned_explicit_2d(f, f)
    # x: m columns per field backward plus m forward; y: all 2m rows three times
    assert c[("c2c", 2 * m)] == 3 * m + 3 * 2 * m


@pytest.mark.parametrize("kind,dims,want", [
    ("cconv2", (4, 6), 8 * 24), ("conv2", (4, 6), 9 * 24 - 36),
    ("cconv3", (2, 3, 4), 16 * 24), ("hconv3", (2, 2, 4), 27 * 16),
    ("tconv2", (4, 8), 24 * 32 + 48),
])
def test_explicit_allocation(kind, dims, want):
    assert ro.explicit_allocation(kind, dims) == want


def test_explicit_allocation_instrumented():
    f, g = random_inputs("conv2", (3, 4), 0)
    with buffers.track() as t:
        ro.explicit_hconv(f, g)
    assert t.words == ro.explicit_allocation("conv2", (3, 4))


def test_oracle_config():
    cfg = ro.OracleConfig.for_kind("hconv", "explicit")
    assert cfg.ratio == (2, 3)
    f, g, H = analytic_hconv(8)
    assert rel_err(ro.run(cfg, "hconv", f, g), H) <= 1e-13
    with pytest.raises(ValueError):
        ro.OracleConfig("direct", "half").check("tconv")
    with pytest.raises(ValueError):
        ro.OracleConfig("pruned-explicit", "two-thirds").check("conv2")
    with pytest.raises(ValueError):
        ro.OracleConfig("magic")
    assert ro.OracleConfig("direct", (3, 4)).ratio == (3, 4)

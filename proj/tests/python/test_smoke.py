import os
import subprocess

import numpy as np
import pytest

import gazekit as gk


def random_map(rng, h, w):
    m = rng.random((h, w)) + 1e-3
    return m / m.sum()


def test_simplex_and_softmax_sum_to_one():
    rng = np.random.default_rng(0)
    g = gk.normalize_to_simplex(rng.random((5, 7)))
    assert g.shape == (5, 7)
    assert g.sum() == pytest.approx(1.0, abs=1e-12)
    logits = rng.normal(size=(4, 6))
    expected = np.exp(logits - logits.max())
    expected /= expected.sum()
    np.testing.assert_allclose(gk.spatial_softmax(logits), expected, atol=1e-14)


def test_metric_identities_and_numpy_kl():
    rng = np.random.default_rng(1)
    g = random_map(rng, 16, 12)
    p = random_map(rng, 16, 12)
    assert gk.cc(g, g) == pytest.approx(1.0, abs=1e-9)
    assert gk.sim(g, g) == pytest.approx(1.0, abs=1e-9)
    assert gk.kl_div(g, g) == pytest.approx(0.0, abs=1e-9)
    assert gk.cc(p, g) == pytest.approx(np.corrcoef(p.ravel(), g.ravel())[0, 1], abs=1e-12)
    assert gk.sim(p, g) == pytest.approx(np.minimum(p, g).sum(), abs=1e-12)
    assert gk.kl_div(g, p) == pytest.approx(float(np.sum(g * np.log(g / p))), abs=1e-6)


def test_auc_on_top_cells_is_one():
    rng = np.random.default_rng(2)
    pred = rng.random((10, 10))
    fix = np.zeros_like(pred)
    fix.ravel()[np.argsort(pred.ravel())[-5:]] = 1.0
    assert gk.auc_judd(pred, fix) == 1.0
    assert gk.auc_borji(pred, fix, 100, 3) == 1.0


def test_loss_gaze_constants_and_total_loss():
    uniform = np.full((8, 8), 1.0 / 64)
    parts = gk.loss_gaze(uniform, np.zeros((8, 8)))
    assert parts["total"] == pytest.approx(0.015, abs=1e-12)
    assert parts["total"] >= parts["kl"]
    assert gk.total_loss(0.5, 1.0, 2.0) == 1.9


def test_gaze_gradient_matches_finite_differences():
    rng = np.random.default_rng(4)
    gt = random_map(rng, 5, 4)
    z = rng.normal(size=(5, 4))
    grad = gk.grad_loss_gaze(gt, z)
    h = 1e-6
    numeric = np.zeros_like(z)
    for idx in np.ndindex(z.shape):
        up, down = z.copy(), z.copy()
        up[idx] += h
        down[idx] -= h
        numeric[idx] = (gk.loss_gaze(gt, up)["total"] - gk.loss_gaze(gt, down)["total"]) / (2 * h)
    assert np.max(np.abs(grad - numeric)) / np.max(np.abs(numeric)) < 1e-4


def test_info_nce_matches_numpy():
    rng = np.random.default_rng(5)
    vis = rng.normal(size=(4, 6))
    txt = rng.normal(size=(4, 6))
    tau = 0.5
    v = vis / np.linalg.norm(vis, axis=1, keepdims=True)
    t = txt / np.linalg.norm(txt, axis=1, keepdims=True)
    s = v @ t.T / tau
    expected = np.mean(np.log(np.exp(s).sum(axis=1)) - np.diag(s))
    assert gk.info_nce(vis, txt, tau) == pytest.approx(expected, abs=1e-12)


def test_fit_demo_converges():
    target = np.zeros((16, 16))
    target[8, 8] = 1.0
    trace = gk.fit_gaze_demo(target, 500, 1.0, False)
    assert len(trace) == 501
    assert trace[-1][1] < 0.05


def test_caption_round_trip_and_errors():
    c = gk.parse_caption("scene: road | current: car slows | next: stops | why: red light")
    assert c["next"] == "stops"
    text = gk.serialize_caption(c["scene"], c["current"], c["next"], c["why"])
    assert gk.parse_caption(text) == c
    with pytest.raises(gk.GazekitError) as info:
        gk.parse_caption("Scene: a | Current: b | Why: c")
    assert "MissingField" in str(info.value)
    assert isinstance(info.value, ValueError)


def test_text_metrics():
    assert gk.bleu("a b c d e", ["a b c d e"]) == 1.0
    assert gk.bleu("the the the", ["the cat"], 1) == pytest.approx(1 / 3, abs=1e-12)
    assert gk.rouge_l("a b c d", "a c d e") == pytest.approx(0.75, abs=1e-12)
    assert gk.tokenize("The Car, stops!") == ["the", "car", "stops"]


def two_regime(frames, switch_at, side=8):
    a = np.zeros((side, side))
    a[1, 1] = 1.0
    b = np.zeros((side, side))
    b[side - 2, side - 2] = 1.0
    return [a if t < switch_at else b for t in range(frames)]


def test_curate_two_regime_sequence():
    rows = gk.curate([two_regime(60, 10), two_regime(40, 10)])
    assert [(r["video"], r["anchor"], r["target"]) for r in rows] == [(0, 9, 12)]
    with pytest.raises(gk.GazekitError):
        gk.curate([two_regime(60, 10)], delta_min=5, delta_max=4)


def test_gradient_suite_passes():
    errors = gk.gradient_check(seed=1, trials=5)
    assert set(errors) == {"loss_gaze", "loss_caption", "info_nce", "pool_project_info_nce"}
    assert max(errors.values()) < 1e-4


@pytest.mark.skipif("GAZEKIT_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_grad_check_exit_codes():
    cli = os.environ["GAZEKIT_CLI"]
    assert subprocess.run([cli, "grad-check", "--trials", "5"], capture_output=True).returncode == 0
    assert subprocess.run([cli, "grad-check", "--trials", "2", "--corrupt"], capture_output=True).returncode == 1
    assert subprocess.run([cli, "no-such-command"], capture_output=True).returncode == 2

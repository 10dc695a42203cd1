"""Smoke test for the condembed extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke.py`.
"""

import json
import math

import condembed


def close(a, b, tol):
    return abs(a - b) <= tol


def max_gap(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    p = condembed.credit_rating_matrix()
    report = condembed.j1_generator(p)
    assert report.method == "fixed_point"
    assert report.lipschitz < 1.0
    assert close(report.generator[0][0], -0.1221, 2e-4)
    assert all(v == 0.0 for v in report.generator[7])
    assert max_gap(condembed.conditional_transition_matrix(report.generator), p) < 1e-9
    assert set(json.loads(report.to_json())) >= {"method", "generator", "theta", "contraction"}

    q_jlt = condembed.jlt(p)
    assert close(q_jlt[0][0], -0.1154, 2e-4)
    assert condembed.norm_gap(p, report.generator) < condembed.norm_gap(p, q_jlt)

    two = [[0.5, 0.5], [0.5, 0.5]]
    closed = condembed.j1_generator(two)
    assert closed.method == "closed_form"
    assert max_gap(closed.generator, [[-1.0, 1.0], [1.0, -1.0]]) < 1e-15

    assert close(condembed.tau(0.0, -2.0), (1 - math.exp(-2)) / 2, 1e-15)
    assert close(condembed.rho(4.0, 1.0), 4 * math.log(4) / 3, 1e-15)
    assert close(condembed.lambert_w0(math.e), 1.0, 1e-15)

    identity = condembed.expm([[0.0, 0.0], [0.0, 0.0]])
    assert identity == [[1.0, 0.0], [0.0, 1.0]]
    assert condembed.goodman_check(p).passes
    assert condembed.j1_embeddable(p)
    embeddable, generator = condembed.two_state_embeddable(0.9)
    assert embeddable and generator is not None
    assert condembed.two_state_embeddable(0.4) == (False, None)
    lo, hi = condembed.qii_bounds(p)
    assert lo < hi <= 0.0
    alpha, c_alpha, k = condembed.contraction_estimate(two)
    assert (alpha, c_alpha) == (1.0, 1.0) and close(k, 2 / 3, 1e-15)

    est = condembed.simulate_conditional([[-1.0, 1.0], [1.0, -1.0]], paths_per_state=20000, seed=1)
    assert est.total_paths == 40000
    assert abs(est.conditional_freq[0][1] - 0.5) <= 4 * est.std_err[0][1]

    for bad, exc in [
        (lambda: condembed.j1_generator([[0.0, 1.0], [0.5, 0.5]]), condembed.NotJ1EmbeddableError),
        (lambda: condembed.j1_generator(p, max_iter=1), condembed.NonConvergenceError),
        (lambda: condembed.j1_generator([[0.5, 0.6], [0.5, 0.5]]), ValueError),
        (lambda: condembed.lambert_w0(-1.0), ValueError),
    ]:
        try:
            bad()
        except exc:
            pass
        else:
            raise AssertionError(f"expected {exc.__name__}")

    print("condembed smoke test passed")


if __name__ == "__main__":
    main()

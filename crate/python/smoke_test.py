"""Smoke test for the capset_increment extension.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/capset_increment-*.whl
"""

from fractions import Fraction

import capset_increment as ci


def main():
    space = ci.Space(3, 2)
    assert (space.p, space.m, space.q, space.r, space.size) == (3, 1, 3, 2, 9)
    assert space.hyperplanes() == [[1, 0], [0, 1], [1, 1], [1, 2]]
    assert space.coords(space.index([2, 1])) == [2, 1]

    f = ci.Function.random(space, 7)
    for eq in ("ap", "sum3", [1, 1, -1]):
        lhs, rhs = ci.hyperplane_identity(eq, f)
        assert lhs == rhs, (eq, lhs, rhs)
        assert ci.lambda_value(eq, f) == ci.lambda_naive(eq, f)
        balanced, plain, mean_power = ci.mean_subtraction(eq, f)
        assert balanced == plain - mean_power
    lhs, rhs = ci.parseval(f)
    assert lhs == rhs

    g = ci.Function(ci.Space(3, 1), [1, Fraction(1, 2), "-1/3"])
    assert g.mean() == Fraction(7, 18)
    assert sum(g.balance().values()) == 0

    line = ci.Space(3, 1)
    assert ci.find_progression(line, [[0], [1], [2]]) == [[0], [1], [2]]
    cert = ci.density_increment(line, [[0], [1]])
    assert (cert.alpha, cert.alpha0, cert.bound) == (Fraction(2, 3), 1, 1)
    assert cert.holds

    cap = ci.exhaustive_maximum(ci.Space(3, 3))
    assert len(cap) == 9 and ci.is_progression_free(ci.Space(3, 3), cap)
    trace = ci.meshulam_iterate(ci.Space(3, 3), cap)
    assert [alpha for _, alpha, _ in trace] == [Fraction(1, 3), Fraction(4, 9), Fraction(2, 3), 1]
    assert all(c.holds for _, _, c in trace[:-1]) and trace[-1][2] is None

    big = ci.Space(5, 2)
    for seed in range(20):
        cap = ci.random_maximal(big, seed)
        cert = ci.density_increment(big, cap, "global-best")
        assert cert.alpha0 >= cert.bound

    t = ci.bound_recurrence(3, 2)
    assert t == [1, Fraction(2, 3), Fraction(7, 15)]

    try:
        ci.Space(6, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("q = 6 accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()

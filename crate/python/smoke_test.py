"""Quick check that the extension module loads and agrees with known values."""

import math

import pyburstic as pb


def close(x, y, tol):
    assert abs(x - y) <= tol, (x, y)


theta, nu = pb.optimal_burstiness(3.5, 2.0)
close(theta, 0.76, 0.005)
close(nu, 2.59, 0.005)
close(theta * (nu + 2.0), 3.5, 1e-9)
close(pb.lambert_w0(math.e), 1.0, 1e-12)
close(pb.capacity(3.0), 1.0, 1e-15)

ch = pb.TwoUserChannel(3.0, 3.0, 3.5, 3.5, 2.0, 2.0)
ub = ch.upper_bound()
rates = {s: ch.scheme(s)[0] for s in ("I", "II", "III", "IV")}
assert all(r <= ub + 1e-9 for r in rates.values())
assert rates["IV"] >= rates["II"] - 1e-9
a_min, b_min = ch.thresholds()
close(a_min, 2.3, 0.05)
assert ch.is_very_strong()

try:
    pb.TwoUserChannel(0.5, 0.5, 3.5, 3.5, 2.0, 2.0).scheme("IV")
except ValueError:
    pass
else:
    raise AssertionError("Scheme IV should reject weak interference")

cz = pb.CgzicChannel(3.0, 0.5, [4.0, 3.5, 3.0], [2.0, 2.0, 2.0])
assert cz.is_mixed_regime()
iv, thetas = cz.scheme("IV")
assert len(thetas) == 3 and iv <= cz.upper_bound() + 1e-9
assert pb.gamma_chain(0.0, 0.0, 1.0, 1.0, 1.0) == [1.0, 1.0, 1.0]

csv = pb.reproduce_figure("fig6")
assert csv.splitlines()[0] == "a,R_I,R_II,R_III,R_ub"

print("smoke test ok")

"""Independent reference values for the unit tests (numpy, no shared code).

Run: python3 tests/oracle/oracle.py  -- prints the constants frozen in tests/unit.
"""
import numpy as np

MU0 = 4e-7 * np.pi
R_COIL = 0.019
AREA = np.pi * R_COIL**2
TURNS = 5
FREQS = [210e3, 199e3, 189e3, 181e3]
HX, HY = 0.22, 0.125
ANCHORS = [np.array(p, float) for p in [(HX, HY, 0), (-HX, HY, 0), (-HX, -HY, 0), (HX, -HY, 0)]]
GAIN = 1000.0
CURRENT = 0.5


def dipole(m, axis, tx, obs):
    r = np.asarray(obs, float) - tx
    d = np.linalg.norm(r)
    u = r / d
    mv = m * np.asarray(axis, float)
    return MU0 / (4 * np.pi * d**3) * (3 * np.dot(mv, u) * u - mv)


def forward(x, n, gain=GAIN):
    m = TURNS * CURRENT * AREA
    out = []
    for a, f in zip(ANCHORS, FREQS):
        b = dipole(m, (0, 0, 1), a, x)
        out.append(gain * 2 * np.pi * f * TURNS * AREA * abs(np.dot(b, n)))
    return out


def flattop(n):
    a = [0.21557895, 0.41663158, 0.277263158, 0.083578947, 0.006947368]
    k = np.arange(n)
    w = np.zeros(n)
    for i, ai in enumerate(a):
        w += (-1) ** i * ai * np.cos(2 * np.pi * i * k / n)
    return w


def window_response(n, delta):
    w = flattop(n)
    k = np.arange(n)
    return abs(np.sum(w * np.exp(-2j * np.pi * delta * k / n))) / np.sum(w)


if __name__ == "__main__":
    np.set_printoptions(precision=12)
    m = TURNS * AREA
    print("moment", repr(m))
    b_axis = np.linalg.norm(dipole(m, (0, 0, 1), np.zeros(3), (0, 0, 0.25)))
    print("on_axis_B_0.25", repr(b_axis))
    v = 10 * 2 * np.pi * 210e3 * TURNS * AREA * 7.258e-8
    print("induced_example", repr(v))
    print("forward_origin", [repr(x) for x in forward((0, 0, 0), (0, 0, 1))])
    print("forward_above_a1", [repr(x) for x in forward((HX, HY, 0.45), (0, 0, 1))])
    print("forward_0.10_0.05_0.45", [repr(x) for x in forward((0.10, 0.05, 0.45), (0, 0, 1))])
    print("flattop_sum_4096", repr(flattop(4096).sum()))
    for d in (0.25, 0.5):
        print("flattop_response_4096", d, repr(window_response(4096, d)))
    a, b, c = 0.2, 1.0, 0.6
    dl = 0.5 * (a - c) / (a - 2 * b + c)
    print("parabolic", repr(dl), repr(b - 0.25 * (a - c) * dl))
    s10 = np.sin(np.radians(10)); c10 = np.cos(np.radians(10))
    print("roll10", (0.0, -s10, c10))

# Reference for the AM transfer-time unit test: plain scipy expm propagation,
# independent of the C++ code. Prints the deepest P_N sample and its time.
import numpy as np
from scipy.linalg import expm

sx = np.array([[0, 1], [1, 0]], complex)
sz = np.diag([1.0, -1.0]).astype(complex)
one = np.eye(2)
tp = 2 * np.pi

o0, o1, o2, g = 1.5 * tp, 0.5 * tp, 1.0 * tp, 0.05 * tp
wl = o0 + o2 - 0.03
dt, t_end = 0.01, 30.0

h0 = wl / 2 * np.kron(one, sz) + g * np.kron(sz, sx)
drive = np.kron(sx, one) / 2
psi = np.kron(np.array([1, -1]) / np.sqrt(2), np.array([1, 0])).astype(complex)
best = (1.0, 0.0)
for k in range(int(t_end / dt)):
    t = (k + 0.5) * dt
    psi = expm(-1j * (h0 + (o0 + o1 * np.cos(o2 * t)) * drive) * dt) @ psi
    p = abs(psi[0]) ** 2 + abs(psi[2]) ** 2
    best = min(best, (p, (k + 1) * dt))
print(f"min P_N {best[0]:.3g} at t = {best[1]:.2f} us")

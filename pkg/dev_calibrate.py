"""Development-only calibration of the two-vertex weight integrals via
scrambled-Sobol quasi Monte Carlo over tangent-substituted coordinates.
Results are frozen into weights._N2_CONNECTED with derivation notes."""
import math
import numpy as np
from scipy.stats import qmc

TWO_PI = 2 * math.pi


def rows_for(z, w, conj_w=True):
    """d/dx, d/dy at z of the normalized angle toward w (w fixed)."""
    u1 = z - w
    u2 = z - (np.conj(w) if conj_w else w)
    gx = (np.imag(1 / u1) + np.imag(1 / u2)) / TWO_PI
    gy = (np.imag(1j / u1) + np.imag(1j / u2)) / TWO_PI
    return gx, gy


def eval_graph(edges, pts):
    """edges: (src, tgt) with src/tgt in {1,2,'F1','F2'}; pts: dict vertex->z.
    Returns det of the 4x4 Jacobian rows in edge order, coords (x1,y1,x2,y2)."""
    n = len(pts[1])
    J = np.zeros((n, len(edges), 4))
    grounds = {"F1": 0.0, "F2": 1.0}
    for ei, (s, t) in enumerate(edges):
        zs = pts[s]
        wt = pts[t] if isinstance(t, int) else np.full(n, grounds[t], complex)
        u1 = zs - wt
        u2 = zs - np.conj(wt)
        cols = {}
        base = 0 if s == 1 else 2
        cols[base] = np.imag(1 / u1) + np.imag(1 / u2)
        cols[base + 1] = np.imag(1j / u1) + np.imag(1j / u2)
        if isinstance(t, int):
            tb = 0 if t == 1 else 2
            cols[tb] = cols.get(tb, 0) + np.imag(-1 / u1) + np.imag(-1 / u2)
            cols[tb + 1] = cols.get(tb + 1, 0) + np.imag(-1j / u1) + np.imag(1j / u2)
        for c, v in cols.items():
            J[:, ei, c] = v / TWO_PI
    return np.linalg.det(J)


def qmc_value(edges, log2n=21, reps=8, seed=7):
    vals = []
    for r in range(reps):
        eng = qmc.Sobol(d=4, scramble=True, seed=seed + r)
        u = eng.random(2 ** log2n)
        a1 = (u[:, 0] - 0.5) * math.pi
        b1 = u[:, 1] * math.pi / 2
        a2 = (u[:, 2] - 0.5) * math.pi
        b2 = u[:, 3] * math.pi / 2
        z1 = np.tan(a1) + 1j * np.tan(b1)
        z2 = np.tan(a2) + 1j * np.tan(b2)
        jac = (math.pi ** 2 / 2) ** 2
        for ang in (a1, b1, a2, b2):
            jac = jac / np.cos(ang) ** 2
        ok = (np.imag(z1) > 1e-10) & (np.imag(z2) > 1e-10) & (np.abs(z1 - z2) > 1e-9)
        det = eval_graph(edges, {1: z1, 2: z2})
        f = np.where(ok, det * jac, 0.0)
        f = np.nan_to_num(f, nan=0.0, posinf=0.0, neginf=0.0)
        vals.append(f.mean())
    vals = np.array(vals)
    return vals.mean(), vals.std() / math.sqrt(reps)


CLASSES = {
    "cherry b->(a,F1)": [(1, "F1"), (1, "F2"), (2, 1), (2, "F1")],
    "cherry b->(a,F2)": [(1, "F1"), (1, "F2"), (2, 1), (2, "F2")],
    "wheel (2,F1)(1,F2)": [(1, 2), (1, "F1"), (2, 1), (2, "F2")],
    "wheel flip": [(1, "F2"), (1, 2), (2, 1), (2, "F1")],
}

if __name__ == "__main__":
    for name, edges in CLASSES.items():
        v, e = qmc_value(edges)
        print(f"{name:24s} {v:+.7f} +/- {e:.2g}")

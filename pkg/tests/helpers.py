import numpy as np


def circle_multisets_close(a_angles, b_angles, tol):
    """Compare two angle multisets on the circle within tol.

    The angle origin is moved into the widest point-free arc of the
    combined set, so sorting never splits values that straddle a seam.
    """
    a = np.sort(np.mod(np.asarray(a_angles, dtype=float), 2.0 * np.pi))
    b = np.sort(np.mod(np.asarray(b_angles, dtype=float), 2.0 * np.pi))
    if a.shape != b.shape:
        return False
    both = np.sort(np.concatenate([a, b]))
    gaps = np.diff(np.append(both, both[0] + 2.0 * np.pi))
    k = int(np.argmax(gaps))
    origin = both[k] + gaps[k] / 2.0
    a = np.sort(np.mod(a - origin, 2.0 * np.pi))
    b = np.sort(np.mod(b - origin, 2.0 * np.pi))
    return float(np.max(np.abs(a - b))) < tol if a.size else True

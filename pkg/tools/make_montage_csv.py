"""Generate the built-in 10-20 electrode position table.

Positions are idealized: electrodes sit on a unit sphere, placed by the
10-20 proportional rules (midline arc nasion->inion split 10/20/20/20/20/10,
outer ring at 72 degrees polar angle, intermediate sites at spherical
midpoints).  Head frame follows the usual convention: X from left to right
ear, Y to the nose, Z up.

Run from the repo root:  python tools/make_montage_csv.py
"""

import csv
import pathlib

import numpy as np


def from_polar(beta_deg, psi_deg):
    """Unit vector at polar angle beta from +Z, azimuth psi from +X toward +Y."""
    b = np.deg2rad(beta_deg)
    p = np.deg2rad(psi_deg)
    return np.array([np.sin(b) * np.cos(p), np.sin(b) * np.sin(p), np.cos(b)])


def slerp(p, q, t=0.5):
    omega = np.arccos(np.clip(np.dot(p, q), -1.0, 1.0))
    if omega < 1e-12:
        return p.copy()
    return (np.sin((1 - t) * omega) * p + np.sin(t * omega) * q) / np.sin(omega)


def mirror(p):
    """Reflect across the sagittal plane (left <-> right)."""
    return np.array([-p[0], p[1], p[2]])


def build():
    pos = {}
    # midline: azimuth 90 = nose (+Y), azimuth 270 = back
    pos["Cz"] = from_polar(0, 90)
    pos["Fz"] = from_polar(36, 90)
    pos["Pz"] = from_polar(36, 270)
    pos["Fpz"] = from_polar(72, 90)
    pos["Oz"] = from_polar(72, 270)
    # outer ring (polar 72), ring azimuth a measured from the nose, left side
    ring_left = {"Fp1": 18, "F7": 54, "T7": 90, "P7": 126, "O1": 162}
    for name, a in ring_left.items():
        pos[name] = from_polar(72, 90 + a)
    # coronal line through Cz
    pos["C3"] = from_polar(36, 180)
    # intermediate left sites as spherical midpoints
    pos["F3"] = slerp(pos["Fz"], pos["F7"])
    pos["P3"] = slerp(pos["Pz"], pos["P7"])
    fcz = slerp(pos["Fz"], pos["Cz"])
    fc3 = slerp(pos["F3"], pos["C3"])
    ft7 = slerp(pos["F7"], pos["T7"])
    pos["FC1"] = slerp(fcz, fc3)
    pos["FC5"] = slerp(fc3, ft7)
    cpz = slerp(pos["Pz"], pos["Cz"])
    cp3 = slerp(pos["P3"], pos["C3"])
    tp7 = slerp(pos["P7"], pos["T7"])
    pos["CP1"] = slerp(cpz, cp3)
    pos["CP5"] = slerp(cp3, tp7)
    # right hemisphere by mirror symmetry
    mirrors = {
        "Fp1": "Fp2", "F7": "F8", "F3": "F4", "T7": "T8", "C3": "C4",
        "P7": "P8", "P3": "P4", "O1": "O2", "FC1": "FC2", "FC5": "FC6",
        "CP1": "CP2", "CP5": "CP6",
    }
    for left, right in mirrors.items():
        pos[right] = mirror(pos[left])
    return pos


# Order matters: pairs adjacent so that a prefix of the table is a valid
# symmetric montage whenever it ends on a complete pair or a midline site.
ORDER = [
    "Fp1", "Fp2", "F7", "F8", "F3", "F4", "Fz", "T7", "T8", "C3", "C4",
    "Cz", "P7", "P8", "P3", "P4", "Pz", "O1", "O2", "Fpz", "FC1", "FC2",
    "Oz", "FC5", "FC6", "CP1", "CP2", "CP5", "CP6",
]


def main():
    pos = build()
    out = pathlib.Path(__file__).resolve().parent.parent / "src" / "eegaug" / "data" / "standard_1020.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "x", "y", "z"])
        for name in ORDER:
            p = pos[name]
            p = p / np.linalg.norm(p)
            writer.writerow([name] + [f"{v:.9f}" for v in p])
    print(f"wrote {out} ({len(ORDER)} electrodes)")


if __name__ == "__main__":
    main()

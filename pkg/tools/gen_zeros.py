"""Regenerate the packaged zero-ordinate files (build-time only; needs mpmath).

zeta: the first 100 ordinates from mpmath.zetazero.
chi_-4: sign changes of the real-valued rotated L(1/2 + it, chi_-4) on
[0, TMAX], refined by root finding. Two scan steps must agree on the count.
"""

import argparse
from pathlib import Path

import mpmath as mp

DATA = Path(__file__).resolve().parents[1] / "src" / "artifact" / "data"


def chi_m4(n):
    return (0, 1, 0, -1)[n % 4]


def hardy_like(t, q=4, parity=1):
    """exp(i theta(t)) L(1/2 + it, chi) with theta making the value real."""
    s = mp.mpf(0.5) + 1j * mp.mpf(t)
    L = mp.dirichlet(s, [chi_m4(r) for r in range(q)])
    theta = mp.im(mp.loggamma((s + parity) / 2) + (s / 2) * mp.log(mp.mpf(q) / mp.pi))
    return mp.re(mp.exp(1j * theta) * L)


def hardy_like_fast(t, q=4, parity=1):
    """Double-precision twin of hardy_like, used only to bracket sign changes."""
    import numpy as np
    from artifact.arith import RealCharacter
    from artifact.lfunc import dirichlet_L
    from artifact.special import loggamma_cx

    s = 0.5 + 1j * np.asarray(t)
    L = dirichlet_L(s, RealCharacter(-q))
    theta = (loggamma_cx((s + parity) / 2) + (s / 2) * np.log(q / np.pi)).imag
    return (np.exp(1j * theta) * L).real


def scan(tmax, step):
    import numpy as np

    grid = np.arange(step, tmax + step, step)
    vals = hardy_like_fast(grid)
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    return [mp.findroot(hardy_like, (mp.mpf(grid[i]), mp.mpf(grid[i + 1])), solver="anderson")
            for i in idx]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeta-count", type=int, default=100)
    ap.add_argument("--chi-tmax", type=float, default=240.0)
    ap.add_argument("--force", action="store_true", help="recompute zeta ordinates too")
    args = ap.parse_args()
    mp.mp.dps = 25

    if (DATA / "zeta_zeros.txt").exists() and not args.force:
        zs = None
    else:
        zs = [mp.im(mp.zetazero(n)) for n in range(1, args.zeta_count + 1)]
    if zs is not None:
        with open(DATA / "zeta_zeros.txt", "w") as fh:
            fh.write("# label: zeta\n# ordinates of the first %d nontrivial zeros\n" % len(zs))
            for g in zs:
                fh.write(mp.nstr(g, 18, strip_zeros=False) + "\n")

    coarse = scan(args.chi_tmax, 0.04)
    fine = scan(args.chi_tmax, 0.02)
    if len(coarse) != len(fine):
        raise SystemExit(f"scan disagreement: {len(coarse)} vs {len(fine)}")
    with open(DATA / "chi_m4_zeros.txt", "w") as fh:
        fh.write("# label: L_chi-4\n# ordinates of zeros of L(s, chi_-4) with 0 < t < %g\n" % args.chi_tmax)
        for g in fine:
            fh.write(mp.nstr(g, 18, strip_zeros=False) + "\n")
    print(len(fine))


if __name__ == "__main__":
    main()

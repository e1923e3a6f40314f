#!/usr/bin/env python3
"""Three independent evaluation routes for the pseudospin correlators.

The lattice-series engine is checked against Monte-Carlo sampling of the
Wigner function and against brute-force bin quadrature, point by point.
The number-basis pseudospins are checked against their closed forms, and
the binned series against its closed-form asymptotes at both ends of the
bin-size axis.
"""

import math

from gaussbell import (
    FockTruncation,
    McControl,
    SeriesControl,
    TmstParams,
    auto_bins,
    bell_binned,
    binned_correlators,
    chen_bound,
    fock_bell_chen,
    fock_bell_grouped,
    grouped_bell_closed_form,
    mc_correlators,
    quadrature_correlators,
)

CTRL = SeriesControl(tail_tol=1e-10)


def main():
    print("series vs quadrature vs Monte-Carlo")
    print("-" * 74)
    for (r, t, l) in [(1.0, 0.0, 1.0), (1.0, 0.3, 1.5), (1.5, 0.4, 0.7),
                      (0.8, 0.4, 2.0), (2.0, 0.5, 0.8)]:
        p = TmstParams(r=r, T=t)
        cs = binned_correlators(p, l, CTRL)
        qz, qx = quadrature_correlators(p, l, auto_bins(p, l))
        mz, mx, se_z, se_x = mc_correlators(
            p, l, McControl(samples=400_000, seed=7, batch=20_000)
        )
        print(f"r={r} T={t} l={l}")
        print(f"  szz: series={cs.szz:+.9f} quad={qz:+.9f} "
              f"mc={mz:+.6f}({abs(mz - cs.szz) / se_z:.1f} sigma)")
        print(f"  sxx: series={cs.sxx:+.9f} quad={qx:+.9f} "
              f"mc={mx:+.6f}({abs(mx - cs.sxx) / se_x:.1f} sigma)")

    print("\nnumber-basis pseudospins vs closed forms (n_max = 160)")
    print("-" * 74)
    trunc = FockTruncation(160)
    for r in (0.3, 0.8, 1.2):
        chen = fock_bell_chen(r, trunc)
        print(f"r={r}: matrix={chen:.10f} closed={chen_bound(r):.10f} "
              f"(bound saturated)")
        for d in (2, 3):
            got = fock_bell_grouped(r, d, trunc)
            ref = grouped_bell_closed_form(r, d)
            print(f"   d={d}: matrix={got:.10f} closed={ref:.10f}")

    print("\nbin-size asymptotes")
    print("-" * 74)
    for r in (2.0, 3.0):
        p = TmstParams(r=r, T=0.5)
        large = bell_binned(p, 100.0, CTRL).b_value
        asym = (4 / math.pi) * math.atan(math.sinh(2 * r))
        small = bell_binned(p, 0.01, CTRL).b_value
        print(f"r={r}, T=0.5: b(l=100)={large:.8f} vs (4/pi)atan(sinh 2r)="
              f"{asym:.8f}; b(l=0.01)={small:.6f} (-> 2)")


if __name__ == "__main__":
    main()

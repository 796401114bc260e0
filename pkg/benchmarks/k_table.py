"""Measured truncation order K(eps, gap), next to the 1/(eps gap) guideline.

Reported only: the asymptotic constants are unknown, so nothing is asserted.
"""
import math

from sparselog import logseries
from sparselog.errors import TailNotCertifiableError

EPS = [1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10]
GAPS = [math.pi / 2, 1.0, 0.5, 0.25, 0.1]


def main():
    print("gap      " + "".join(f"{e:>10.0e}" for e in EPS))
    for gap in GAPS:
        cells = []
        for eps in EPS:
            try:
                cells.append(f"{logseries.truncation_order(gap, eps).K:>10d}")
            except TailNotCertifiableError:
                cells.append(f"{'-':>10}")
        print(f"{gap:<9.4f}" + "".join(cells))
    print("\nK * gap (roughly constant in gap at fixed eps if K ~ 1/gap):")
    for gap in GAPS:
        print(f"{gap:<9.4f}" + "".join(f"{logseries.truncation_order(gap, eps).K * gap:>10.1f}" for eps in EPS[:4]))


if __name__ == "__main__":
    main()

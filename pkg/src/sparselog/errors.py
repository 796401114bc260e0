"""Exception types shared across the package.

Each carries the measured quantity that triggered it so the CLI can put it
in a machine-readable error body.
"""


class SparselogError(Exception):
    """Base class for all package errors."""

    exit_code = 1

    def details(self):
        return {}


class InputError(SparselogError, ValueError):
    exit_code = 2


class NotUnitaryError(InputError):
    def __init__(self, defect, tol):
        super().__init__(f"matrix is not unitary: defect {defect:.3e} exceeds {tol:.1e}")
        self.defect = defect
        self.tol = tol

    def details(self):
        return {"unitary_defect": self.defect, "tolerance": self.tol}


class NotHermitianError(InputError):
    def __init__(self, defect, tol):
        super().__init__(f"matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.1e}")
        self.defect = defect


class DimensionMismatchError(InputError):
    pass


class InvalidPartitionError(InputError):
    pass


class InvalidColoringError(InputError):
    pass


class GapInfeasibleError(SparselogError):
    exit_code = 3

    def __init__(self, gap, threshold):
        super().__init__(f"spectral gap {gap:.3e} rad is below the feasibility threshold {threshold:.1e}")
        self.gap = gap
        self.threshold = threshold

    def details(self):
        return {"gap": self.gap, "threshold": self.threshold}


class BranchCutError(SparselogError):
    """An eigenphase sits on the logarithm branch cut; gap centering failed."""

    exit_code = 3


class TailNotCertifiableError(SparselogError):
    exit_code = 4

    def __init__(self, msg, kmax=None):
        super().__init__(msg)
        self.kmax = kmax

    def details(self):
        return {"kmax": self.kmax}

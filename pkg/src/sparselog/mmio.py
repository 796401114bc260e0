"""Matrix Market input/output for dense complex matrices."""
import numpy as np
import scipy.io
import scipy.sparse

PRECISION = 17


def read_matrix(path):
    a = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(a):
        a = a.toarray()
    return np.asarray(a, dtype=np.complex128)


def write_matrix(path, m, fmt="array", comment=""):
    """Write ``m`` in complex ``array`` or ``coordinate`` format with 17 significant digits."""
    m = np.asarray(m, dtype=np.complex128)
    if fmt == "coordinate":
        m = scipy.sparse.coo_matrix(m)
    elif fmt != "array":
        raise ValueError(f"unknown Matrix Market format {fmt!r}")
    scipy.io.mmwrite(str(path), m, comment=comment, field="complex", precision=PRECISION)

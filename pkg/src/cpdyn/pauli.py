"""Pauli tensor-product Hamiltonians and a small Pauli-string input language.

A Hamiltonian is a sum of terms, each a real coefficient times a Kronecker
product of single-qubit Pauli matrices.  Terms are written ``<coeff>*<labels>``
with labels a contiguous string over ``I X Y Z``, one character per qubit,
leftmost character = first (outermost) tensor factor::

    1.0*ZI + 0.5*XY - 2*YY

All terms in one Hamiltonian must act on the same number of qubits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from math import isfinite

import numpy as np

__all__ = [
    "PAULI_MATRICES",
    "PauliTerm",
    "PauliSyntaxError",
    "MixedLabelLengthError",
    "pauli_matrix",
    "tensor_term",
    "parse_hamiltonian",
    "format_terms",
    "build_hamiltonian",
    "build_two_qubit_hamiltonian",
    "require_hermitian",
]

PAULI_SYMBOLS = "IXYZ"

PAULI_MATRICES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Dense 2^n x 2^n matrices; 12 qubits (4096 x 4096) is the default ceiling.
DEFAULT_MAX_QUBITS = 12


class PauliSyntaxError(ValueError):
    """Malformed Pauli-string input; `position` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MixedLabelLengthError(ValueError):
    """Terms in one Hamiltonian act on different numbers of qubits."""


@dataclass(frozen=True)
class PauliTerm:
    """One summand: `coefficient` times the tensor product of `labels`."""

    coefficient: float
    labels: tuple[str, ...]

    def __post_init__(self):
        # normalize numpy scalars / stray label types into plain Python values
        object.__setattr__(self, "coefficient", float(self.coefficient))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if not self.labels:
            raise ValueError("PauliTerm needs at least one qubit label")
        bad = [s for s in self.labels if s not in PAULI_SYMBOLS]
        if bad:
            raise ValueError(f"invalid Pauli symbol(s): {bad}")
        if not isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient: {self.coefficient}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)


def pauli_matrix(label: str) -> np.ndarray:
    """Return a copy of the standard 2x2 matrix for I, X, Y or Z."""
    try:
        return PAULI_MATRICES[label].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli label {label!r}; expected one of I, X, Y, Z")


def tensor_term(term: PauliTerm, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Dense matrix of one term: coefficient times the Kronecker product of
    its labels, leftmost label outermost.  Dimension is 2**n_qubits.

    Raises ValueError when the term exceeds `max_qubits` (dense-size guard).
    """
    if term.n_qubits > max_qubits:
        raise ValueError(
            f"term acts on {term.n_qubits} qubits, above the dense-matrix cap "
            f"of {max_qubits}; raise max_qubits explicitly if this is intended"
        )
    mat = reduce(np.kron, (PAULI_MATRICES[s] for s in term.labels))
    return term.coefficient * mat


_NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_LABELS_RE = re.compile(f"[{PAULI_SYMBOLS}]+")


def parse_hamiltonian(text: str) -> list[PauliTerm]:
    """Parse a Pauli-string Hamiltonian into an ordered list of terms.

    Grammar (whitespace-insensitive)::

        hamiltonian := ['+'|'-'] term (('+'|'-') term)*
        term        := number '*' labels
        labels      := [IXYZ]+

    Raises PauliSyntaxError (with position) on malformed input and
    MixedLabelLengthError when terms differ in qubit count.
    """
    terms: list[PauliTerm] = []
    pos = 0
    end = len(text)

    def skip_ws(p: int) -> int:
        while p < end and text[p].isspace():
            p += 1
        return p

    pos = skip_ws(pos)
    if pos == end:
        raise PauliSyntaxError("empty Hamiltonian", pos)

    first = True
    while pos < end:
        sign = 1.0
        if text[pos] in "+-":
            sign = -1.0 if text[pos] == "-" else 1.0
            pos = skip_ws(pos + 1)
        elif not first:
            raise PauliSyntaxError(f"expected '+' or '-', found {text[pos]!r}", pos)
        first = False

        m = _NUMBER_RE.match(text, pos)
        if m is None:
            raise PauliSyntaxError("expected a numeric coefficient", pos)
        coeff = sign * float(m.group(0))
        pos = skip_ws(m.end())

        if pos >= end or text[pos] != "*":
            raise PauliSyntaxError("expected '*' after coefficient", pos)
        pos = skip_ws(pos + 1)

        m = _LABELS_RE.match(text, pos)
        if m is None:
            raise PauliSyntaxError("expected Pauli labels over I, X, Y, Z", pos)
        labels = tuple(m.group(0))
        pos = skip_ws(m.end())

        terms.append(PauliTerm(coeff, labels))

    lengths = {t.n_qubits for t in terms}
    if len(lengths) > 1:
        raise MixedLabelLengthError(
            f"terms act on different qubit counts {sorted(lengths)}: "
            f"{format_terms(terms)}"
        )
    return terms


def format_terms(terms: list[PauliTerm]) -> str:
    """Inverse of parse_hamiltonian; coefficients via repr (round-trip exact)."""
    parts: list[str] = []
    for i, t in enumerate(terms):
        coeff, labels = t.coefficient, "".join(t.labels)
        if i == 0:
            parts.append(f"{coeff!r}*{labels}")
        elif coeff < 0 or (coeff == 0 and str(coeff)[0] == "-"):
            parts.append(f"- {-coeff!r}*{labels}")
        else:
            parts.append(f"+ {coeff!r}*{labels}")
    return " ".join(parts)


def build_hamiltonian(
    terms: list[PauliTerm], max_qubits: int = DEFAULT_MAX_QUBITS
) -> np.ndarray:
    """Sum the dense matrices of `terms` into one Hermitian operator."""
    if not terms:
        raise ValueError("cannot build a Hamiltonian from zero terms")
    lengths = {t.n_qubits for t in terms}
    if len(lengths) > 1:
        raise MixedLabelLengthError(
            f"terms act on different qubit counts {sorted(lengths)}"
        )
    dim = 2 ** terms[0].n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for t in terms:
        out += tensor_term(t, max_qubits=max_qubits)
    return out


def build_two_qubit_hamiltonian(
    c1: float, c2: float, c3: float, c4: float, c5: float
) -> np.ndarray:
    """Two-qubit model: c1*ZI + c2*XI + c3*YI + c4*YY + c5*XY.

    Basis order is (|00>, |01>, |10>, |11>) with the leftmost label acting
    on the first qubit; the YY and XY terms couple the qubits.
    """
    return build_hamiltonian(
        [
            PauliTerm(float(c1), ("Z", "I")),
            PauliTerm(float(c2), ("X", "I")),
            PauliTerm(float(c3), ("Y", "I")),
            PauliTerm(float(c4), ("Y", "Y")),
            PauliTerm(float(c5), ("X", "Y")),
        ]
    )


def require_hermitian(H: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate that H is square, 2D and Hermitian to `tol`; returns H."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {H.shape}")
    if H.shape[0] < 2:
        raise ValueError("operator dimension must be at least 2")
    dev = np.max(np.abs(H - H.conj().T))
    if dev > tol:
        raise ValueError(f"operator is not Hermitian: max|H - H^dag| = {dev:.3e}")
    return H

"""Line-oriented text format for Hamiltonians.

::

    # comment
    n <count>
    c <constant>
    t <weight> <i1> <i2> ...

Indices are 0-based. The writer emits the canonical term order and writes
floats with ``repr`` so reading back is exact.
"""
from pathlib import Path
from typing import List, Union

from ..errors import UsageError
from .hamiltonian import IsingHamiltonian, Term


def dumps(h: IsingHamiltonian, comment: str = "") -> str:
    lines = [f"# {line}" for line in comment.splitlines()]
    lines.append(f"n {h.n}")
    lines.append(f"c {h.constant!r}")
    for support, w in h.terms:
        lines.append("t " + " ".join([repr(w)] + [str(i) for i in support]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> IsingHamiltonian:
    n = None
    constant = 0.0
    terms: List[Term] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *rest = line.split()
        where = f"line {lineno}"
        try:
            if key == "n":
                n = int(rest[0])
            elif key == "c":
                constant += float(rest[0])
            elif key == "t":
                terms.append((tuple(int(i) for i in rest[1:]), float(rest[0])))
            else:
                raise UsageError(where, f"unknown record {key!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(where, f"malformed {key!r} record: {raw!r}") from exc
    if n is None:
        raise UsageError("n", "missing spin count record")
    return IsingHamiltonian(n, tuple(terms), constant)


def write_hamiltonian(h: IsingHamiltonian, path: Union[str, Path], comment: str = "") -> None:
    Path(path).write_text(dumps(h, comment), encoding="utf-8")


def read_hamiltonian(path: Union[str, Path]) -> IsingHamiltonian:
    return loads(Path(path).read_text(encoding="utf-8"))

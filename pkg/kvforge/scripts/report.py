"""
report.py - Per-degree residual reports.

A DegreeReport is a DataFrame with one row per (degree, equation) giving the
number of nonzero basis coefficients left in the residual at that degree.
"""

from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from .errors import MalformedInputError

COLUMNS = ["degree", "equation", "residual_terms"]


class DegreeReport:
    """
    Residual term counts per degree and equation.

    Args:
        frame: DataFrame with columns degree, equation, residual_terms
    """

    def __init__(self, frame: Optional[pd.DataFrame] = None):
        if frame is None:
            frame = pd.DataFrame({c: pd.Series(dtype="int64" if c != "equation" else "object") for c in COLUMNS})
        self.frame = frame.reset_index(drop=True)[COLUMNS]

    @classmethod
    def from_residual(cls, equation: str, residual: Any, max_degree: int, min_degree: int = 1) -> "DegreeReport":
        """One row per degree min_degree..max_degree from a residual's degree_counts()."""
        counts = residual.degree_counts() if residual is not None else {}
        return cls.from_counts(equation, counts, max_degree, min_degree)

    @classmethod
    def from_counts(cls, equation: str, counts: Dict[int, int], max_degree: int, min_degree: int = 1) -> "DegreeReport":
        records = [
            {"degree": d, "equation": equation, "residual_terms": int(counts.get(d, 0))}
            for d in range(min_degree, max_degree + 1)
        ]
        return cls(pd.DataFrame.from_records(records, columns=COLUMNS))

    @classmethod
    def merge(cls, reports: Iterable["DegreeReport"]) -> "DegreeReport":
        frames = [r.frame for r in reports if not r.frame.empty]
        if not frames:
            return cls()
        return cls(pd.concat(frames, ignore_index=True))

    @property
    def passed(self) -> bool:
        return bool((self.frame["residual_terms"] == 0).all())

    def equation_passed(self, equation: str) -> bool:
        rows = self.frame[self.frame["equation"] == equation]
        return bool((rows["residual_terms"] == 0).all())

    def residual_terms(self, degree: int, equation: str) -> int:
        rows = self.frame[(self.frame["degree"] == degree) & (self.frame["equation"] == equation)]
        if rows.empty:
            raise KeyError(f"no row for degree {degree}, equation {equation}")
        return int(rows["residual_terms"].iloc[0])

    def failures(self) -> pd.DataFrame:
        return self.frame[self.frame["residual_terms"] != 0]

    def equations(self) -> List[str]:
        return list(dict.fromkeys(self.frame["equation"]))

    def to_text(self) -> str:
        ordered = self.frame.sort_values("degree", kind="mergesort")
        lines = [
            f"deg={int(row.degree)} eq={row.equation} residual_terms={int(row.residual_terms)}"
            for row in ordered.itertuples(index=False)
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "DegreeReport":
        records = []
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                fields = dict(part.split("=", 1) for part in line.split())
                records.append({
                    "degree": int(fields["deg"]),
                    "equation": fields["eq"],
                    "residual_terms": int(fields["residual_terms"]),
                })
            except (KeyError, ValueError):
                raise MalformedInputError(f"bad report line: {line!r}")
        return cls(pd.DataFrame.from_records(records, columns=COLUMNS))

    def __repr__(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"DegreeReport({status}, {len(self.frame)} rows)"

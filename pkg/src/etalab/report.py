"""Report rows and their text, CSV and JSON renderings.

Every numeric cell is already a decimal string by the time it reaches a
Report, so the three formats carry identical values.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ReportRow:
    label: str
    n: int | None
    values: dict[str, str]


@dataclass
class Report:
    command: str
    precision_bits: int
    columns: list[str]
    rows: list[ReportRow] = field(default_factory=list)
    parameters: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, label: str, n: int | None = None, **values: str) -> None:
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"columns {sorted(unknown)} not declared for {self.command}")
        self.rows.append(ReportRow(label, n, dict(values)))

    # -- rendering

    def header(self) -> list[str]:
        return ["label", "n", *self.columns]

    def cells(self) -> list[list[str]]:
        return [
            [r.label, "" if r.n is None else str(r.n), *(r.values.get(c, "") for c in self.columns)]
            for r in self.rows
        ]

    def to_text(self) -> str:
        head = self.header()
        body = self.cells()
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        lines = [f"# {self.command} (precision {self.precision_bits} bits)"]
        for k, v in self.parameters.items():
            lines.append(f"# {k} = {v}")
        lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip())
        for row in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        lines.extend(f"note: {note}" for note in self.notes)
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        writer.writerows(self.cells())
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "precision_bits": str(self.precision_bits),
            "parameters": self.parameters,
            "columns": self.columns,
            "rows": [
                {"label": r.label, "n": None if r.n is None else str(r.n), "values": r.values}
                for r in self.rows
            ],
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "text":
            return self.to_text()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {fmt!r}")

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        rep = cls(doc["command"], int(doc["precision_bits"]), list(doc["columns"]),
                  parameters=dict(doc["parameters"]), notes=list(doc["notes"]))
        for r in doc["rows"]:
            rep.rows.append(ReportRow(r["label"], None if r["n"] is None else int(r["n"]), dict(r["values"])))
        return rep

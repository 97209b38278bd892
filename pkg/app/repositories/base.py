"""Base repository for strict CSV data files."""

import csv
import io
from pathlib import Path
from typing import Generic, List, Sequence, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from app.exceptions import DataError, FormatError

ModelType = TypeVar("ModelType", bound=BaseModel)


class CsvRepository(Generic[ModelType]):
    """Reads and writes one record type as comma-separated lines.

    Format: UTF-8, header line required, ``#`` comment lines and blank
    lines ignored. Empty fields take the model default. Every record is
    validated through ``model``.
    """

    header: Tuple[str, ...] = ()

    def __init__(self, model: Type[ModelType]):
        self.model = model

    def read_text(self, path: Union[str, Path]) -> str:
        """Read a data file."""
        try:
            return Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise DataError(f"Cannot read {path}", {"error": str(exc)})

    def parse(self, text: str) -> List[Tuple[int, ModelType]]:
        """Parse text into (line number, record) pairs."""
        records: List[Tuple[int, ModelType]] = []
        header_seen = False
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in next(csv.reader([line]))]
            if not header_seen:
                if tuple(fields) != self.header:
                    raise FormatError(f"expected header {','.join(self.header)}", line=lineno)
                header_seen = True
                continue
            if len(fields) != len(self.header):
                raise FormatError(
                    f"expected {len(self.header)} fields, got {len(fields)}", line=lineno
                )
            try:
                record = self.model(**{k: v for k, v in zip(self.header, fields) if v != ""})
            except ValidationError as exc:
                first = exc.errors()[0]
                where = ".".join(str(part) for part in first["loc"]) or "record"
                raise FormatError(f"{where}: {first['msg']}", line=lineno)
            records.append((lineno, record))
        if not header_seen:
            raise FormatError("missing header", line=1)
        return records

    def load(self, path: Union[str, Path]) -> List[Tuple[int, ModelType]]:
        """Read and parse a data file."""
        return self.parse(self.read_text(path))

    def dump(self, records: Sequence[ModelType]) -> str:
        """Serialize records with the header line."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(self.header)
        for record in records:
            row = record.model_dump()
            writer.writerow([self._format(row[name]) for name in self.header])
        return out.getvalue()

    @staticmethod
    def _format(value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if hasattr(value, "value"):
            return str(value.value)
        return str(value)

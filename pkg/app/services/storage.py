import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel

from app import __version__
from app.core.config import settings
from app.schemas.report import DiagnosticReport
from app.schemas.config import OutputFormat

logger = logging.getLogger(__name__)


def format_number(value: float) -> str:
    """17 significant digits, '.' decimal point; enough to round-trip a double"""
    return format(float(value), ".17g")


def split_complex(name: str) -> list[str]:
    return [f"{name}_re", f"{name}_im"]


class StorageService:
    """
    Output writing for the CLI
    - CSV tables (header row, one row per sample, '\\n' line endings)
    - JSON sidecars echoing the run config
    - JSON diagnostic reports
    """

    def __init__(self, stream=None):
        self._stream = stream

    @property
    def stream(self):
        return self._stream if self._stream is not None else sys.stdout

    def metadata(self, command: str, config: BaseModel) -> dict:
        """Everything needed to rerun a command: its config, the library version and the tolerance override"""
        return {
            "command": command,
            "version": __version__,
            "config": config.model_dump(mode="json"),
            "default_tol": settings.default_tol,
            "settings": settings.model_dump(
                mode="json",
                include={
                    "switch_radius", "series_max_terms", "series_rel_tol", "dd_radius", "asymp_terms",
                    "x_min_asymp", "quad_rel_tol", "quad_abs_tol", "quad_limit", "fd_step",
                },
            ),
        }

    def render_csv(self, header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
        return buffer.getvalue()

    def render_json(self, header: Sequence[str], rows: Iterable[Sequence[float]], meta: dict) -> str:
        columns = {name: [] for name in header}
        for row in rows:
            for name, v in zip(header, row):
                columns[name].append(float(format_number(v)))
        return json.dumps({"metadata": meta, "columns": columns}, indent=2) + "\n"

    def write_table(
        self,
        header: Sequence[str],
        rows: Sequence[Sequence[float]],
        meta: dict,
        output: Optional[Path] = None,
        fmt: OutputFormat = OutputFormat.CSV,
    ) -> Optional[Path]:
        """
        Write a table to output (stdout when None)

        CSV output to a file gets a sidecar next to it, <output>.json; JSON
        output carries its metadata inline. Returns the sidecar path, if any.
        """
        if fmt == OutputFormat.JSON:
            self._emit(self.render_json(header, rows, meta), output)
            return None
        self._emit(self.render_csv(header, rows), output)
        if output is None:
            logger.info("run metadata: %s", json.dumps(meta, sort_keys=True))
            return None
        sidecar = self.sidecar_path(output)
        sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.debug("wrote %d rows to %s and metadata to %s", len(rows), output, sidecar)
        return sidecar

    def write_report(self, report: DiagnosticReport, output: Optional[Path] = None) -> None:
        self._emit(report.model_dump_json(by_alias=True, indent=2) + "\n", output)

    @staticmethod
    def sidecar_path(output: Path) -> Path:
        return output.with_name(output.name + ".json")

    def _emit(self, text: str, output: Optional[Path]) -> None:
        if output is None:
            self.stream.write(text)
            self.stream.flush()
            return
        output.parent.mkdir(parents=True, exist_ok=True)
        with open(output, "w", encoding="utf-8", newline="") as f:
            f.write(text)


storage_service = StorageService()

"""Export service for generating Excel files."""

import io
import json
from typing import Any, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter
from openpyxl.worksheet.worksheet import Worksheet

from config.logging_config import get_logger
from schemas.report import Report
from utils.helpers import truncate_text

logger = get_logger(__name__)


class ExportService:
    """Service for exporting reports to Excel."""

    def __init__(self) -> None:
        """Initialize export service."""
        self.header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
        self.header_font = Font(bold=True, color="FFFFFF", size=12)
        border_side = Side(style="thin", color="000000")
        self.border = Border(left=border_side, right=border_side, top=border_side, bottom=border_side)
        self.center_alignment = Alignment(horizontal="center", vertical="center")
        self.wrap_alignment = Alignment(wrap_text=True, vertical="top")
        self.fail_font = Font(bold=True, color="C00000")

    def _write_sheet(
        self,
        ws: Worksheet,
        headers: Sequence[str],
        rows: Sequence[Sequence[Any]],
        widths: Sequence[int],
        centered: Sequence[int] = (),
    ) -> None:
        """Styled header row, bordered data rows, fixed widths and a frozen header."""
        for col_num, header in enumerate(headers, 1):
            cell = ws.cell(row=1, column=col_num)
            cell.value = header
            cell.fill = self.header_fill
            cell.font = self.header_font
            cell.alignment = self.center_alignment
            cell.border = self.border

        for row_num, row in enumerate(rows, 2):
            for col_num, value in enumerate(row, 1):
                cell = ws.cell(row=row_num, column=col_num, value=value)
                cell.border = self.border
                cell.alignment = self.center_alignment if col_num in centered else self.wrap_alignment

        for col_num, width in enumerate(widths, 1):
            ws.column_dimensions[get_column_letter(col_num)].width = width
        ws.row_dimensions[1].height = 25
        ws.freeze_panes = "A2"

    def export_report_to_excel(self, report: Report) -> io.BytesIO:
        """
        Export a report to an Excel file.

        Sheets: Summary, Assertions, Certificates, Histograms and, when present, Not found.

        Args:
            report: Finalized report

        Returns:
            BytesIO object with Excel file content
        """
        try:
            wb = Workbook()
            ws = wb.active
            ws.title = "Summary"
            summary = [
                ("Experiment", report.experiment),
                ("Algebra", report.algebra or ""),
                ("Field", report.field or ""),
                ("Schema version", report.schema_version),
                ("Hash", report.hash or ""),
                ("Passed", "yes" if report.passed else "no"),
            ]
            summary += [(f"param: {k}", json.dumps(v)) for k, v in sorted(report.parameters.items())]
            self._write_sheet(ws, ["Key", "Value"], summary, [22, 70])

            ws = wb.create_sheet("Assertions")
            rows = [
                (num, a.name, "pass" if a.passed else "FAIL", a.detail)
                for num, a in enumerate(report.assertions, 1)
            ]
            self._write_sheet(ws, ["№", "Assertion", "Result", "Detail"], rows, [6, 40, 10, 70], (1, 3))
            for row_num, a in enumerate(report.assertions, 2):
                if not a.passed:
                    ws.cell(row=row_num, column=3).font = self.fail_font

            ws = wb.create_sheet("Certificates")
            rows = [
                (
                    num,
                    c.method,
                    c.field,
                    c.closure_dim,
                    c.trial if c.trial is not None else "",
                    truncate_text(json.dumps(c.x), 200),
                    truncate_text(json.dumps(c.y), 200),
                )
                for num, c in enumerate(report.certificates, 1)
            ]
            self._write_sheet(
                ws,
                ["№", "Method", "Field", "dim F<x,y>", "Trial", "x", "y"],
                rows,
                [6, 18, 10, 12, 8, 45, 45],
                (1, 3, 4, 5),
            )

            ws = wb.create_sheet("Histograms")
            rows = [
                (name, value, count)
                for name, histogram in sorted(report.histograms.items())
                for value, count in sorted(histogram.items())
            ]
            self._write_sheet(ws, ["Histogram", "Value", "Count"], rows, [25, 10, 10], (2, 3))

            if report.not_found:
                ws = wb.create_sheet("Not found")
                rows = [(n.searched, n.field, "yes" if n.exhaustive else "no", n.verdict) for n in report.not_found]
                self._write_sheet(ws, ["Searched", "Field", "Exhaustive", "Verdict"], rows, [40, 10, 12, 60], (2, 3))

            excel_file = io.BytesIO()
            wb.save(excel_file)
            excel_file.seek(0)

            logger.info(
                f"Exported {report.experiment} report to Excel "
                f"({len(report.assertions)} assertions, {len(report.certificates)} certificates)"
            )
            return excel_file

        except Exception as e:
            logger.error(f"Error exporting report to Excel: {e}", exc_info=True)
            raise

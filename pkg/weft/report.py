import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional
from xml.sax.saxutils import escape

from reportlab.lib import colors
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from .oracles import VerificationReport

logger = logging.getLogger(__name__)


class ReportManager:

    def __init__(self, report_dir: Path):
        self.report_dir = Path(report_dir)
        self.report_dir.mkdir(parents=True, exist_ok=True)
        self.json_report_path = self.report_dir / "Verification_Reports.json"

    def _load_reports(self) -> List[Dict[str, Any]]:
        if self.json_report_path.exists():
            try:
                with open(self.json_report_path, 'r') as f:
                    return json.load(f)
            except json.JSONDecodeError:
                logger.warning(f"Could not decode existing reports file at {self.json_report_path}. Starting with empty reports.")
                return []
        return []

    def _save_reports(self, reports: List[Dict[str, Any]]):
        try:
            with open(self.json_report_path, 'w') as f:
                json.dump(reports, f, indent=4)
        except IOError as e:
            logger.error(f"Failed to save reports to {self.json_report_path}: {e}")

    def add_verification_report(self, report: VerificationReport):
        reports = self._load_reports()
        reports.append({
            "timestamp": datetime.now().isoformat(),
            "all_passed": report.all_passed,
            "report": report.to_json(),
        })
        self._save_reports(reports)
        logger.info(f"Verification report appended to {self.json_report_path}")

    def get_all_reports(self) -> List[Dict[str, Any]]:
        return self._load_reports()

    def save_report_json(self, report: VerificationReport, path: Optional[Path] = None) -> Optional[Path]:
        if path is None:
            path = self.report_dir / f"verification_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json"
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(report.to_json(), f, indent=4, ensure_ascii=False)
            logger.info(f"Verification report saved to {path}")
            return path
        except (IOError, TypeError) as e:
            logger.error(f"Failed to save verification report to {path}: {e}")
            return None

    def generate_summary_report(self, report: VerificationReport) -> str:
        grid = report.grid
        failures = report.failures()
        summary = "--- wigner-weft Verification Report ---\n"
        summary += f"Generated: {report.generated_at}\n"
        summary += f"Grid: n={grid.n}, dx={grid.dx}, x_min={grid.x_min}, hbar={grid.hbar}\n"
        summary += f"Seed: {report.seed}\n"
        summary += f"Checks Passed: {len(report.checks) - len(failures)}/{len(report.checks)}\n"
        summary += "\nConventions:\n"
        for key in ("moyal_pairing", "symplectic_sign"):
            summary += f"  {key:<16}: {report.conventions.get(key, 'N/A')}\n"
        summary += "\nChecks:\n"
        for check in report.checks:
            status = "pass" if check.passed else "FAIL"
            summary += f"  {check.name:<32} {check.residual:>11.3e} <= {check.tolerance:.1e}  {status}\n"
            if check.detail and not check.passed:
                summary += f"      {check.detail}\n"
        if not failures:
            summary += "\nAll identities hold within tolerance.\n"
        return summary

    def save_summary_report_to_file(self, report: VerificationReport, filename: str = "verification_summary.txt") -> Optional[Path]:
        summary_content = self.generate_summary_report(report)
        file_path = self.report_dir / filename
        try:
            with open(file_path, 'w') as f:
                f.write(summary_content)
            logger.info(f"Summary report saved to {file_path}")
            return file_path
        except IOError as e:
            logger.error(f"Failed to save summary report to {file_path}: {e}")
            return None

    def generate_pdf_report(self, report: VerificationReport, filename: str = "verification_summary.pdf") -> Optional[Path]:
        pdf_path = self.report_dir / filename
        doc = SimpleDocTemplate(str(pdf_path), pagesize=letter)
        styles = getSampleStyleSheet()
        story = []

        story.append(Paragraph("wigner-weft Verification Report", styles['h1']))
        story.append(Spacer(1, 0.2 * inch))

        grid = report.grid
        failures = report.failures()
        summary_data = [
            f"Generated: {report.generated_at}",
            f"Grid: n={grid.n}, dx={grid.dx}, x_min={grid.x_min}, hbar={grid.hbar}",
            f"Seed: {report.seed}",
            f"Checks Passed: {len(report.checks) - len(failures)}/{len(report.checks)}",
            f"Moyal pairing: {report.conventions.get('moyal_pairing', 'N/A')}",
            f"Symplectic sign: {report.conventions.get('symplectic_sign', 'N/A')}",
        ]
        for line in summary_data:
            story.append(Paragraph(escape(line), styles['Normal']))
            story.append(Spacer(1, 0.1 * inch))

        story.append(Spacer(1, 0.2 * inch))
        story.append(Paragraph("Checks:", styles['h2']))
        story.append(Spacer(1, 0.1 * inch))

        rows = [["Check", "Residual", "Tolerance", "Status"]]
        for check in report.checks:
            rows.append([check.name, f"{check.residual:.3e}", f"{check.tolerance:.1e}",
                         "pass" if check.passed else "FAIL"])
        table = Table(rows, repeatRows=1)
        style = [
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('GRID', (0, 0), (-1, -1), 0.25, colors.grey),
            ('ALIGN', (1, 1), (2, -1), 'RIGHT'),
        ]
        for i, check in enumerate(report.checks, 1):
            if not check.passed:
                style.append(('TEXTCOLOR', (3, i), (3, i), colors.red))
        table.setStyle(TableStyle(style))
        story.append(table)

        try:
            doc.build(story)
            logger.info(f"PDF report saved to {pdf_path}")
            return pdf_path
        except Exception as e:
            logger.error(f"Failed to generate PDF report to {pdf_path}: {e}")
            return None

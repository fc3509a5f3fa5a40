"""
📡 Wiretap LBB - PDF Validation Report
======================================

Renders the validation suite's pass/fail table, with observed and expected
values per check, as a PDF.
"""

import logging
from pathlib import Path
from typing import Dict, List, Sequence

from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from src.utils import config

logger = logging.getLogger(__name__)


class PDFReportGenerator:
    """Generates the validation report for the wiretap-lbb validation suite."""

    def __init__(self, output_dir: str = "reports"):
        self.output_dir = Path(output_dir)
        self.styles = getSampleStyleSheet()
        self._setup_custom_styles()

    def _setup_custom_styles(self):
        self.styles.add(ParagraphStyle(
            name='CustomTitle',
            parent=self.styles['Title'],
            fontSize=22,
            spaceAfter=24,
            alignment=TA_CENTER,
            textColor=colors.HexColor('#2E86AB')
        ))
        self.styles.add(ParagraphStyle(
            name='CustomHeading1',
            parent=self.styles['Heading1'],
            fontSize=16,
            spaceAfter=12,
            spaceBefore=12,
            textColor=colors.HexColor('#2E86AB')
        ))
        self.styles.add(ParagraphStyle(
            name='SuccessStatus',
            parent=self.styles['Normal'],
            fontSize=12,
            textColor=colors.HexColor('#28A745'),
            backColor=colors.HexColor('#D4EDDA'),
            borderColor=colors.HexColor('#C3E6CB'),
            borderWidth=1,
            borderPadding=5
        ))
        self.styles.add(ParagraphStyle(
            name='FailedStatus',
            parent=self.styles['Normal'],
            fontSize=12,
            textColor=colors.HexColor('#DC3545'),
            backColor=colors.HexColor('#F8D7DA'),
            borderColor=colors.HexColor('#F5C6CB'),
            borderWidth=1,
            borderPadding=5
        ))

    def generate_report(self, checks: Sequence, metadata: Dict[str, str], output_filename: str) -> str:
        """
        Generate the validation PDF.

        Args:
            checks: CheckResult records from the validation suite
            metadata: seed, trial counts and similar run parameters
            output_filename: file name, or a path when it contains a directory

        Returns:
            Path to the generated PDF file
        """
        output_path = Path(output_filename)
        if output_path.parent == Path("."):
            output_path = self.output_dir / output_path
        output_path.parent.mkdir(parents=True, exist_ok=True)

        doc = SimpleDocTemplate(
            str(output_path),
            pagesize=A4,
            rightMargin=54,
            leftMargin=54,
            topMargin=54,
            bottomMargin=36
        )
        story = []
        story.extend(self._create_title(checks, metadata))
        story.extend(self._create_results_table(checks))
        doc.build(story)
        logger.info(f"📄 validation report written to {output_path}")
        return str(output_path)

    def _create_title(self, checks: Sequence, metadata: Dict[str, str]) -> List:
        story = [Paragraph(f"{config.ARTIFACT_NAME} validation report", self.styles['CustomTitle'])]
        rows = [[f"{key}:", str(value)] for key, value in metadata.items()]
        rows.append(["Artifact version:", config.ARTIFACT_VERSION])
        meta_table = Table(rows, colWidths=[2 * inch, 4 * inch])
        meta_table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (0, -1), colors.HexColor('#F8F9FA')),
            ('FONTNAME', (0, 0), (0, -1), 'Helvetica-Bold'),
            ('FONTSIZE', (0, 0), (-1, -1), 10),
            ('BOTTOMPADDING', (0, 0), (-1, -1), 6),
        ]))
        story.append(meta_table)
        story.append(Spacer(1, 16))

        failed = sum(1 for check in checks if not check.passed)
        if failed:
            story.append(Paragraph(f"{failed} of {len(checks)} checks FAILED", self.styles['FailedStatus']))
        else:
            story.append(Paragraph(f"All {len(checks)} checks passed", self.styles['SuccessStatus']))
        story.append(Spacer(1, 16))
        return story

    def _create_results_table(self, checks: Sequence) -> List:
        story = [Paragraph("Checks", self.styles['CustomHeading1'])]
        cell_style = self.styles['Normal']
        data = [["Check", "Status", "Observed", "Expected", "Tolerance"]]
        for check in checks:
            data.append([
                Paragraph(check.name, cell_style),
                "PASS" if check.passed else "FAIL",
                f"{check.observed:.6g}",
                f"{check.expected:.6g}",
                f"{check.tolerance:.3g}",
            ])
        table = Table(data, colWidths=[2.6 * inch, 0.7 * inch, 1.1 * inch, 1.1 * inch, 0.9 * inch], repeatRows=1)
        style = [
            ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#2E86AB')),
            ('TEXTCOLOR', (0, 0), (-1, 0), colors.white),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('FONTSIZE', (0, 0), (-1, -1), 9),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.grey),
            ('VALIGN', (0, 0), (-1, -1), 'MIDDLE'),
        ]
        for row, check in enumerate(checks, start=1):
            color = '#D4EDDA' if check.passed else '#F8D7DA'
            style.append(('BACKGROUND', (1, row), (1, row), colors.HexColor(color)))
        table.setStyle(TableStyle(style))
        story.append(table)

        failures = [check for check in checks if not check.passed and check.detail]
        if failures:
            story.append(Spacer(1, 12))
            story.append(Paragraph("Failure details", self.styles['CustomHeading1']))
            for check in failures:
                story.append(Paragraph(f"<b>{check.name}</b>: {check.detail}", cell_style))
        return story

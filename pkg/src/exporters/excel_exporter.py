"""
Excel Exporter for census and analysis results
"""
import pandas as pd
from pathlib import Path
from typing import List, Tuple, Union

try:
    from openpyxl import Workbook
    from openpyxl.styles import Font, PatternFill, Alignment
    from openpyxl.utils.dataframe import dataframe_to_rows
    from openpyxl.chart import BarChart, Reference
    OPENPYXL_AVAILABLE = True
except ImportError:
    OPENPYXL_AVAILABLE = False

from ..analyzers.base_analyzer import AnalysisResult

MAX_CHART_BARS = 20


class ExcelExporter:
    """Export analysis results to Excel format"""

    def __init__(self):
        if not OPENPYXL_AVAILABLE:
            raise ImportError(
                "openpyxl is required for Excel export. "
                "Install it with: pip install openpyxl"
            )

        self.colors = {
            'header': 'FF366092',
            'subheader': 'FF4472C4',
            'rejected': 'FFFFE0E0',
        }

    def export(self, result: AnalysisResult, output_path: Union[str, Path],
               include_charts: bool = True) -> str:
        """
        Export an analysis result to Excel

        Args:
            result: AnalysisResult object
            output_path: Path to save Excel file
            include_charts: Whether to include charts

        Returns:
            Path to saved file
        """
        wb = self._build(result, include_charts)
        wb.save(str(output_path))
        return str(output_path)

    def _build(self, result: AnalysisResult, include_charts: bool) -> 'Workbook':
        wb = Workbook()
        if 'Sheet' in wb.sheetnames:
            wb.remove(wb['Sheet'])

        self._create_summary_sheet(wb, result)
        self._create_table_sheet(wb, "Densities" if result.method_name == 'census' else "Detailed",
                                 result.detailed_report)
        if 'stat' in result.detailed_report.columns:
            self._create_table_sheet(wb, "Rejected",
                                     result.detailed_report[result.detailed_report['rejected']])
        for name, table in result.tables.items():
            self._create_table_sheet(wb, name[:31].title(), table)

        if include_charts:
            self._create_charts_sheet(wb, result)
        return wb

    def _fill(self, key: str) -> 'PatternFill':
        return PatternFill(start_color=self.colors[key], end_color=self.colors[key], fill_type='solid')

    def _section(self, ws, row: int, title: str):
        ws[f'A{row}'] = title
        ws[f'A{row}'].font = Font(size=12, bold=True, color='FFFFFFFF')
        ws[f'A{row}'].fill = self._fill('subheader')
        ws.merge_cells(f'A{row}:D{row}')

    def _create_summary_sheet(self, wb: 'Workbook', result: AnalysisResult):
        """Create summary sheet"""
        ws = wb.create_sheet("Summary", 0)

        ws['A1'] = "Rooted Density Report"
        ws['A1'].font = Font(size=16, bold=True, color='FFFFFFFF')
        ws['A1'].fill = self._fill('header')
        ws.merge_cells('A1:D1')

        row = 3
        ws[f'A{row}'] = "Analysis:"
        ws[f'B{row}'] = result.method_name
        ws[f'A{row}'].font = Font(bold=True)

        row += 1
        ws[f'A{row}'] = "Analysis Date:"
        ws[f'B{row}'] = result.analysis_date.strftime('%Y-%m-%d %H:%M:%S')
        ws[f'A{row}'].font = Font(bold=True)

        if result.summary:
            row += 1
            ws[f'A{row}'] = "Summary:"
            ws[f'B{row}'] = result.summary
            ws[f'A{row}'].font = Font(bold=True)
            ws[f'B{row}'].alignment = Alignment(wrap_text=True)

        metrics = _scalar_items(result.metadata)
        if metrics:
            row += 2
            self._section(ws, row, "PARAMETERS")
            for key, value in metrics:
                row += 1
                ws[f'A{row}'] = key
                ws[f'B{row}'] = value
                ws[f'A{row}'].font = Font(bold=True)

        if result.recommendations:
            row += 2
            self._section(ws, row, "RECOMMENDATIONS")
            for rec in result.recommendations:
                row += 1
                ws[f'A{row}'] = f"• {rec}"
                ws.merge_cells(f'A{row}:D{row}')
                ws[f'A{row}'].alignment = Alignment(wrap_text=True)

        ws.column_dimensions['A'].width = 30
        ws.column_dimensions['B'].width = 60
        ws.column_dimensions['C'].width = 15
        ws.column_dimensions['D'].width = 15

    def _create_table_sheet(self, wb: 'Workbook', title: str, df: pd.DataFrame):
        """Write a table with a styled header row"""
        ws = wb.create_sheet(title)

        ws['A1'] = title
        ws['A1'].font = Font(size=14, bold=True, color='FFFFFFFF')
        ws['A1'].fill = self._fill('header')

        row_num = 3
        if df is None or df.empty:
            ws.cell(row=row_num, column=1).value = "(empty)"
            return

        for col_num, column in enumerate(df.columns, 1):
            cell = ws.cell(row=row_num, column=col_num)
            cell.value = str(column).replace('_', ' ')
            cell.font = Font(bold=True, color='FFFFFFFF')
            cell.fill = self._fill('subheader')
            cell.alignment = Alignment(horizontal='center')

        flagged = list(df.columns).index('rejected') + 1 if 'rejected' in df.columns else None
        for r_idx, row in enumerate(dataframe_to_rows(df, index=False, header=False), row_num + 1):
            for c_idx, value in enumerate(row, 1):
                ws.cell(row=r_idx, column=c_idx).value = _cell_value(value)
            # Highlight rejected vertices
            if flagged and row[flagged - 1]:
                for col in range(1, len(df.columns) + 1):
                    ws.cell(row=r_idx, column=col).fill = self._fill('rejected')

        for column in ws.iter_cols(min_row=row_num):
            max_length = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
            ws.column_dimensions[column[0].column_letter].width = min(40, max(12, max_length + 2))

        ws.freeze_panes = 'A4'

    def _create_charts_sheet(self, wb: 'Workbook', result: AnalysisResult):
        """Bar chart of the largest vertex statistics, or of mean densities"""
        bars = _chart_data(result.detailed_report)
        if not bars:
            return
        ws = wb.create_sheet("Charts")
        ws['A1'] = "Charts"
        ws['A1'].font = Font(size=14, bold=True)

        title, label_header, value_header, rows = bars
        row = 3
        ws[f'A{row}'] = label_header
        ws[f'B{row}'] = value_header
        for label, value in rows:
            row += 1
            ws[f'A{row}'] = label
            ws[f'B{row}'] = value

        chart = BarChart()
        labels = Reference(ws, min_col=1, min_row=4, max_row=row)
        data = Reference(ws, min_col=2, min_row=3, max_row=row)
        chart.add_data(data, titles_from_data=True)
        chart.set_categories(labels)
        chart.title = title
        chart.height = 12
        chart.width = 20

        ws.add_chart(chart, "D3")


def _scalar_items(metadata: dict) -> List[Tuple[str, object]]:
    return [(key, value) for key, value in metadata.items()
            if isinstance(value, (int, float, str, bool)) or value is None]


def _cell_value(value):
    if isinstance(value, (list, tuple, dict)):
        return str(value)
    if hasattr(value, 'item'):
        return value.item()
    return value


def _chart_data(df: pd.DataFrame):
    if df is None or df.empty:
        return None
    if 'stat' in df.columns and 'vertex_id' in df.columns:
        top = df.nlargest(MAX_CHART_BARS, 'stat')
        return ("Largest ||t||^2", "Vertex", "Statistic",
                [(str(v), float(s)) for v, s in zip(top['vertex_id'], top['stat'])])
    density_columns = [c for c in df.columns if str(c).endswith('_density')]
    if density_columns:
        return ("Mean rooted density", "Motif", "Mean density",
                [(c[:-len('_density')], float(df[c].mean())) for c in density_columns])
    return None


def export_to_excel(result: AnalysisResult, output_path: Union[str, Path],
                    include_charts: bool = True) -> str:
    """
    Convenience function to export results to Excel

    Args:
        result: AnalysisResult object
        output_path: Path to save Excel file
        include_charts: Whether to include charts

    Returns:
        Path to saved file
    """
    exporter = ExcelExporter()
    return exporter.export(result, output_path, include_charts)

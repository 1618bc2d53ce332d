from chkplab.measure.diagnostics import (
    COLUMNS,
    BlowupSignature,
    DiagnosticRecord,
    blowup_integral,
    blowup_signature,
    read_diagnostics,
    record,
    write_diagnostics,
)
from chkplab.measure.inequalities import InequalityReport, inequality_report

__all__ = [
    "COLUMNS",
    "BlowupSignature",
    "DiagnosticRecord",
    "InequalityReport",
    "blowup_integral",
    "blowup_signature",
    "inequality_report",
    "read_diagnostics",
    "record",
    "write_diagnostics",
]
